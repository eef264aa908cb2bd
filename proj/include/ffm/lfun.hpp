#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ffm/characters.hpp"
#include "ffm/ffpoly.hpp"

namespace ffm::lfun {

using ffpoly::Polynomial;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<long double>;

// a + b*sqrt(q) with rational a, b.
class QuadraticAlgebraic {
 public:
  explicit QuadraticAlgebraic(std::uint32_t q, Rational a = 0, Rational b = 0);

  std::uint32_t q() const noexcept { return q_; }
  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }

  QuadraticAlgebraic operator+(const QuadraticAlgebraic& o) const;
  QuadraticAlgebraic operator-(const QuadraticAlgebraic& o) const;
  QuadraticAlgebraic operator*(const QuadraticAlgebraic& o) const;
  QuadraticAlgebraic& operator+=(const QuadraticAlgebraic& o);
  QuadraticAlgebraic pow(unsigned e) const;
  bool operator==(const QuadraticAlgebraic& o) const;

  long double to_long_double() const;
  // "a_num/a_den" and "b_num/b_den" canonical strings.
  std::string a_string() const;
  std::string b_string() const;

 private:
  std::uint32_t q_;
  Rational a_, b_;
};

std::string rational_string(const Rational& r);

class LPolynomial {
 public:
  LPolynomial(Polynomial D, std::vector<std::int64_t> coeffs);

  const Polynomial& D() const noexcept { return D_; }
  int g() const noexcept { return g_; }
  std::uint32_t q() const noexcept { return D_.modulus(); }
  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }

  Complex evaluate(Complex u) const;
  Complex derivative(Complex u) const;
  // L(s, chi_D) = L(q^{-s}).
  Complex at_s(Complex s) const;
  bool symmetric() const;

 private:
  Polynomial D_;
  int g_;
  std::vector<std::int64_t> c_;
};

// Validation shared by every per-D entry point.
void validate_discriminant(const Polynomial& D);

// Exhaustive character sums over M_n, n <= 2g.
LPolynomial compute_L(const Polynomial& D);

// Coefficients c_0..c_max from the Euler product over primes of degree <= max.
std::vector<std::int64_t> euler_coefficients(const Polynomial& D, unsigned max);

// Per-modulus tables giving chi_D(P) for all primes of degree <= max_degree; reused across many D.
class PrimeCharacterCache {
 public:
  PrimeCharacterCache(std::uint32_t q, unsigned max_degree, unsigned d_degree);

  std::vector<std::int64_t> euler_coefficients(const Polynomial& D, unsigned max) const;
  // Completes c_0..c_g to the full vector through c_{2g-n} = q^{g-n} c_n.
  LPolynomial via_functional_equation(const Polynomial& D) const;

 private:
  struct Entry {
    unsigned degree;
    characters::ResidueMap map;
    characters::ResidueCharacter chi;
  };
  std::uint32_t q_;
  unsigned max_degree_;
  std::vector<Entry> primes_;
};

QuadraticAlgebraic value_at_half(const LPolynomial& L);
// q^g L(1/2) = A + B sqrt(q) with integers A, B.
std::pair<std::int64_t, std::int64_t> scaled_value_at_half(const LPolynomial& L);

struct ZeroSet {
  std::vector<double> thetas;
  std::vector<Complex> alphas;
  long double residual = 0;
  long double max_modulus_deviation = 0;
};

ZeroSet zeros(const LPolynomial& L);

struct FeCheck {
  Complex lhs;
  Complex rhs;
  long double error;
  bool branch_flipped;
};

FeCheck completed_fe_check(const LPolynomial& L, Complex s);

struct ExplicitFormulaCheck {
  long double zero_side;
  long double prime_side;
  long double error;
};

// Sum over f in M_k of chi_D(f) Lambda(f), computed from prime powers.
std::int64_t prime_power_sum(const Polynomial& D, unsigned k);
// The same sums for k = 0..N from the coefficients of L via Newton's identities.
std::vector<std::int64_t> prime_power_sums(const LPolynomial& L, unsigned N);

// hhat holds hhat(-N..N); must be even.
ExplicitFormulaCheck explicit_formula_check(const LPolynomial& L, const ZeroSet& zs, const std::vector<long double>& hhat);
ExplicitFormulaCheck explicit_formula_check(const LPolynomial& L, const std::vector<long double>& hhat);

struct LogModulusCheck {
  long double lhs;
  long double rhs;
  long double error;
  bool at_zero;
};

// Uses b' = (q^{alpha-1/2} - 1) / (2 q^{alpha/2-1/4}) in the sine-ratio terms.
LogModulusCheck log_modulus_identity(const LPolynomial& L, const ZeroSet& zs, long double alpha, long double t);
LogModulusCheck log_modulus_identity(const LPolynomial& L, long double alpha, long double t);

}  // namespace ffm::lfun
