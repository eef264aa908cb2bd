#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ffm/errors.hpp"

namespace ffm::ffpoly {

using Coeff = std::uint32_t;

bool is_prime(std::uint64_t n);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

// Element of the prime field F_q.
class FieldElement {
 public:
  FieldElement(std::int64_t value, std::uint32_t q);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return q_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement operator+(FieldElement o) const;
  FieldElement operator-(FieldElement o) const;
  FieldElement operator*(FieldElement o) const;
  FieldElement operator/(FieldElement o) const;
  FieldElement operator-() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement inverse() const;
  // +1 for nonzero squares, -1 for non-squares, 0 for zero.
  int legendre() const;

  bool operator==(const FieldElement&) const = default;

 private:
  std::uint32_t value_;
  std::uint32_t q_;
};

// Degree with an explicit minus-infinity tag for the zero polynomial.
class Degree {
 public:
  constexpr Degree() = default;  // minus infinity
  constexpr explicit Degree(int v) : value_(v), finite_(true) {}
  static constexpr Degree minus_infinity() { return Degree(); }

  constexpr bool is_minus_infinity() const noexcept { return !finite_; }
  int value() const;

  friend Degree operator+(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return Degree();
    return Degree(a.value_ + b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(Degree a, Degree b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
  friend constexpr bool operator<(Degree a, int b) { return a < Degree(b); }
  friend constexpr bool operator>=(Degree a, int b) { return a >= Degree(b); }

 private:
  int value_ = 0;
  bool finite_ = false;
};

class Polynomial {
 public:
  explicit Polynomial(std::uint32_t q);
  Polynomial(std::uint32_t q, std::vector<Coeff> coeffs);

  static Polynomial constant(std::uint32_t q, std::int64_t c);
  static Polynomial x(std::uint32_t q);
  static Polynomial monomial(std::uint32_t q, unsigned n, std::int64_t c = 1);
  static Polynomial from_code(std::uint32_t q, std::uint64_t code);
  static Polynomial from_digits(std::uint32_t q, const std::string& digits);

  std::uint32_t modulus() const noexcept { return q_; }
  Degree degree() const noexcept;
  // Degree as int; -1 for the zero polynomial. Convenience for loops only.
  int deg() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Coeff>& coeffs() const noexcept { return c_; }
  Coeff coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  Coeff lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  // q^{d(f)}; undefined for the zero polynomial.
  std::uint64_t norm() const;

  std::uint64_t code() const;
  std::string digits() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator/(const Polynomial& o) const { return div_rem(o).first; }
  Polynomial operator%(const Polynomial& o) const { return div_rem(o).second; }
  Polynomial scaled(std::int64_t c) const;

  std::pair<Polynomial, Polynomial> div_rem(const Polynomial& divisor) const;
  Polynomial derivative() const;
  Polynomial monic() const;
  Coeff eval(Coeff x) const;
  Polynomial pow(unsigned e) const;
  Polynomial pow_mod(std::uint64_t e, const Polynomial& m) const;

  // Total order: degree first, then coefficients from the top down.
  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  void require_same(const Polynomial& o) const;

  std::uint32_t q_;
  std::vector<Coeff> c_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& f);

Polynomial gcd(Polynomial a, Polynomial b);
bool is_irreducible(const Polynomial& f);
bool is_squarefree(const Polynomial& f);

struct Factor {
  Polynomial prime;
  unsigned exponent;
};

struct Factorization {
  Coeff unit = 0;
  std::vector<Factor> factors;

  Polynomial reconstruct(std::uint32_t q) const;
};

Factorization factor(const Polynomial& f);

struct ArithmeticData {
  int moebius;
  unsigned von_mangoldt;
  std::uint64_t d4;
  Polynomial radical;
  std::uint64_t euler_phi;
  bool is_squarefree;
};

ArithmeticData arithmetic_functions(const Polynomial& f);

// Enumeration.
enum class SetKind { Monic, MonicUpTo, Squarefree, Irreducible };

std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t items);
void check_budget(std::uint32_t q, unsigned n);

void for_each(SetKind kind, std::uint32_t q, unsigned n,
              const std::function<void(const Polynomial&)>& fn);
std::vector<Polynomial> enumerate(SetKind kind, std::uint32_t q, unsigned n);

// Monic irreducibles of exact degree n, in code order. Built once per (q, n) by a sieve and cached.
const std::vector<Polynomial>& irreducibles(std::uint32_t q, unsigned n);

struct PptReport {
  std::uint64_t count;
  double main_term;
  double deviation;
  bool within_bound;
};

PptReport ppt_check(std::uint32_t q, unsigned n);

// Integer-code arithmetic for monic polynomials, used in the sweep kernels.
std::uint64_t multiply_codes(std::uint32_t q, std::uint64_t a, std::uint64_t b);
inline unsigned code_degree(std::uint32_t q, std::uint64_t code) {
  unsigned d = 0;
  while (code >= q) {
    code /= q;
    ++d;
  }
  return d;
}

}  // namespace ffm::ffpoly
