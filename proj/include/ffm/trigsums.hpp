#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ffm::trigsums {

// Truncated Taylor series in one variable: c[i] is the coefficient of t^i.
class Taylor {
 public:
  explicit Taylor(unsigned order, long double value = 0);
  static Taylor variable(unsigned order, long double at);

  unsigned order() const noexcept { return static_cast<unsigned>(c_.size()) - 1; }
  long double operator[](unsigned i) const { return c_[i]; }
  long double& operator[](unsigned i) { return c_[i]; }
  // i-th derivative at the expansion point.
  long double derivative(unsigned i) const;

  friend Taylor operator+(Taylor a, const Taylor& b);
  friend Taylor operator-(Taylor a, const Taylor& b);
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);
  friend Taylor operator*(long double s, Taylor a);

 private:
  std::vector<long double> c_;
};

struct SinCos {
  Taylor sin, cos;
};
SinCos sincos(const Taylor& u);

struct GeometricTrig {
  long double sin_sum;
  long double cos_sum;
};

// Closed forms of sum_{m=1}^{2g} sin(m theta) and cos(m theta).
GeometricTrig geometric_trig(std::uint64_t g, long double theta);
GeometricTrig geometric_trig_direct(std::uint64_t g, long double theta);

struct TrigSumResult {
  long double direct;
  long double closed;
  long double remainder;  // direct minus the asymptotic main term
  long double order;      // value of the claimed O-term at these parameters
  std::string claimed_order;
  bool regime_ok = true;
  std::optional<long double> alternative;  // a second reading of the closed form, if any
};

// sum_{m=1}^{2g} m^k sin(m theta) (sine = true) or m^k cos(m theta).
// closed: k-th derivative of the geometric closed forms via Taylor arithmetic.
// remainder: direct minus the leading term in (2g)^k.
TrigSumResult power_trig(unsigned k, std::uint64_t g, long double theta, bool sine = true);

// Closed power sum written as a polynomial in L = 2g + 1/2: coefficients c[0..k].
std::vector<long double> power_trig_L_coefficients(unsigned k, std::uint64_t g, long double theta, bool sine = true);

// sum_{k=1}^{a-1} sin(k theta)/k. alternative: the tail taken as cos((a-1/2)theta)/(2a sin(theta/2)).
TrigSumResult truncated_sin_series(std::uint64_t a, long double theta);

struct HarmonicBlock {
  long double A, B;                // Euler-Maclaurin forms, Bernoulli tail cut at B_16
  long double A_direct, B_direct;  // block sums minus alpha/(2m)
  long double A_bound, B_bound;    // first omitted Bernoulli term
};

// Requires 2m > alpha.
HarmonicBlock harmonic_block(std::uint64_t m, std::uint64_t alpha);

// The two-part double sum over 0 <= j < alpha. The 2m = j term is taken as its limit 2 pi theta m^k.
// alternative (k = 1 only): the A/B sum moved inside the bracket, scaled by -alpha/2.
TrigSumResult master_A(unsigned k, long double theta, std::uint64_t alpha, std::uint64_t g);
long double master_A_direct(unsigned k, long double theta, std::uint64_t alpha, std::uint64_t g);

struct UbvarResult {
  long double sum;
  long double bound;  // log min{g, 1/(2 theta')}, theta' = min(theta, pi - theta)
  long double slack;  // sum - bound
};

UbvarResult ubvar_check(std::uint64_t g, long double theta);

// Frozen from a sweep over g <= 10^4 and 4000 theta in [0, pi); attained at g = 1, theta = 0.
inline constexpr long double kUbvarConstant = 1;

struct Ladder {
  std::vector<long double> ratios;
  long double median;
  long double spread;  // max(max/median, median/min)
  bool stable;         // spread <= factor
};

Ladder summarize_ladder(std::vector<long double> ratios, long double factor = 4);

// max over theta in [theta0, 1.25 theta0], theta0 = g^{-1/2}, of |remainder| / order.
long double power_trig_envelope(unsigned k, std::uint64_t g, bool sine, unsigned samples = 16);
// Same for the truncated series with theta0 = a^{-1/2}.
long double truncated_envelope(std::uint64_t a, unsigned samples = 16);
// Envelope of |direct - closed| / order over the same window, alpha = 100 floor(log g).
// samples = 1 gives the single point theta = g^{-1/2}.
long double master_ratio(unsigned k, std::uint64_t g, unsigned samples = 16);

}  // namespace ffm::trigsums
