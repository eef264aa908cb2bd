#pragma once

#include <cstdint>
#include <vector>

#include "ffm/lfun.hpp"

namespace ffm::bounds {

struct MV {
  long double M;
  long double V;
};

MV MV_values(long double theta, unsigned g);

// f1 from the log-ratio of sines, with b' = (q^{alpha-1/2} - 1) / (2 q^{alpha/2-1/4}).
long double f1_closed(long double x, long double alpha, std::uint32_t q);
// Fourier series truncated at |n| <= M.
long double f1_fourier(long double x, long double alpha, std::uint32_t q, unsigned M);
// (q^{-(alpha-1/2)|n|} - q^{-2|n|}) / |n|; zero at n = 0.
long double f1_weight(int n, long double alpha, std::uint32_t q);
// n-th Fourier coefficient of f1_closed by the trapezoid rule on `nodes` points.
long double f1_numeric_coefficient(int n, long double alpha, std::uint32_t q, unsigned nodes);

class MinorantPolynomial {
 public:
  MinorantPolynomial(unsigned N, long double alpha, std::uint32_t q, std::vector<long double> rhat);

  unsigned N() const noexcept { return N_; }
  long double alpha() const noexcept { return alpha_; }
  std::uint32_t q() const noexcept { return q_; }
  // r-hat(m) for |m| <= N, zero beyond.
  long double rhat(int m) const;
  long double evaluate(long double x) const;

 private:
  unsigned N_;
  long double alpha_;
  std::uint32_t q_;
  std::vector<long double> rhat_;  // m = 0..N
};

long double rhat0_closed(unsigned N, long double alpha, std::uint32_t q);
// The displayed k-sum for 1 <= m <= N. At alpha = 1/2 the non-decaying part is summed via digamma.
long double rhat_ksum(unsigned m, unsigned N, long double alpha, std::uint32_t q);
MinorantPolynomial minorant_coeffs(unsigned N, long double alpha, std::uint32_t q);

struct MinorantCheck {
  long double max_violation;
  long double argmax;
  long double integral_gap;  // r-hat(0) minus the closed extremal value
  long double min_distance;  // smallest f1 - r over the grid
};

MinorantCheck minorant_check(unsigned N, long double alpha, std::uint32_t q, unsigned grid_size);

struct LalfaReport {
  long double lhs;
  long double explicit_rhs;
  long double gap;
  bool at_zero;
};

LalfaReport lalfa_report(const lfun::LPolynomial& L, long double alpha, long double t, unsigned N);

// log zeta_q(5/2): bounds log|L(5/2+it)|, hence the gap, for every D.
long double lalfa_gap_bound(std::uint32_t q);

struct UbalfaPreset {
  unsigned N;
  long double bound;  // leading term of the resulting upper bound
};

UbalfaPreset ubalfa_preset(std::uint32_t q, unsigned g, long double alpha);

}  // namespace ffm::bounds
