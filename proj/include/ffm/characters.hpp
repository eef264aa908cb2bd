#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ffm/ffpoly.hpp"

namespace ffm::characters {

using ffpoly::Polynomial;
using Complex = std::complex<long double>;

// Values in {-1, 0, +1}.
using SymbolValue = int;

void require_q_1_mod_4(std::uint32_t q);

// Euler's criterion in F_q[x]/P.
SymbolValue residue_symbol(const Polynomial& f, const Polynomial& P);
// Reciprocity descent; B monic.
SymbolValue jacobi_symbol(const Polynomial& A, const Polynomial& B);
// chi_D(f) = (D/f).
SymbolValue chi(const Polynomial& D, const Polynomial& f);

// Coefficient of 1/x in the Laurent expansion of u/f, found by long division in descending powers.
ffpoly::Coeff laurent_a1(const Polynomial& u, const Polynomial& f);
Complex exponential(const Polynomial& u, const Polynomial& f);

// Digit-wise arithmetic on residue codes of polynomials of degree < n.
class ResidueMap {
 public:
  ResidueMap(const Polynomial& f, unsigned max_input_degree);

  std::uint64_t reduce(std::uint64_t code) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  // Code of x^i mod f.
  std::uint64_t power_image(unsigned i) const { return images_.at(i); }
  unsigned width() const noexcept { return n_; }
  std::uint64_t residues() const noexcept { return size_; }

 private:
  std::uint32_t q_;
  unsigned n_;
  std::uint64_t size_;
  std::vector<std::uint64_t> images_;
};

// The character W -> (W/f) tabulated over all residue codes W mod f.
class ResidueCharacter {
 public:
  explicit ResidueCharacter(const Polynomial& f);

  SymbolValue operator[](std::uint64_t code) const { return table_[code]; }
  SymbolValue of(const Polynomial& w) const;
  const Polynomial& modulus() const noexcept { return f_; }
  std::uint64_t size() const noexcept { return table_.size(); }
  const ResidueMap& residue_map() const noexcept { return map_; }

 private:
  Polynomial f_;
  ResidueMap map_;
  std::vector<std::int8_t> table_;
};

struct GaussSum {
  Complex value;
  Polynomial modulus_f;
  Polynomial shift_V;
};

// Direct summation over all |f| residues.
GaussSum gauss_sum(const Polynomial& V, const Polynomial& f);
// Closed form for prime-power moduli P^i.
GaussSum gauss_sum_closed(const Polynomial& V, const Polynomial& P, unsigned i);

// G(V, chi_f) for every V mod f, by a separable transform over the digits of W.
class GaussTable {
 public:
  explicit GaussTable(const Polynomial& f);

  const Complex& operator[](std::uint64_t v_code) const { return values_[v_code]; }
  const Complex& at(const Polynomial& V) const;
  const ResidueCharacter& character() const noexcept { return chi_; }

 private:
  ResidueCharacter chi_;
  std::vector<Complex> values_;
};

std::int64_t char_sum(const Polynomial& f, unsigned m);
std::int64_t char_sum(const ResidueCharacter& chi, unsigned m);

struct PoissonResult {
  long double lhs;
  Complex rhs;
  long double abs_error;
};

PoissonResult poisson_check(const Polynomial& f, unsigned m);
PoissonResult poisson_check(const GaussTable& table, unsigned m);

struct SumdResult {
  std::int64_t lhs;
  std::int64_t rhs;
  bool equal() const { return lhs == rhs; }
};

SumdResult sumd_check(const Polynomial& f, unsigned g);

// Monic C whose prime factors divide f, with d(C) <= max_degree.
std::vector<Polynomial> divisors_of_power(const Polynomial& f, unsigned max_degree);

}  // namespace ffm::characters
