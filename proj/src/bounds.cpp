#include "ffm/bounds.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace ffm::bounds {

namespace {

constexpr long double pi = std::numbers::pi_v<long double>;

void require_alpha(long double alpha) {
  if (!(alpha >= 0.5L && alpha <= 1.0L)) throw InvalidArgument("alpha must lie in [1/2, 1]");
}

// sum_{k>=0} (-1)^k / (k + x)
long double beta(long double x) {
  using boost::math::digamma;
  return 0.5L * (digamma((x + 1) / 2) - digamma(x / 2));
}

// sum_k (-1)^k (k+1) [r^{A_k}/A_k - r^{B_k}/B_k], r < 1.
long double ksum_geometric(unsigned m, unsigned M, long double r) {
  long double s = 0;
  const long double logr = std::log(r);
  for (unsigned k = 0;; ++k) {
    const long double A = m + static_cast<long double>(k) * M, B = (k + 2.0L) * M - m;
    const long double term = (k + 1) * (std::exp(A * logr) / A - std::exp(B * logr) / B);
    s += (k % 2 ? -term : term);
    if (std::abs(term) < 1e-30L * std::max(1.0L, std::abs(s)) || k > 10'000'000) break;
  }
  return s;
}

}  // namespace

MV MV_values(long double theta, unsigned g) {
  if (theta < 0 || theta >= pi) throw InvalidArgument("theta must lie in [0, pi)");
  if (g < 1) throw InvalidArgument("g must be positive");
  const long double G = g;
  const long double m = theta == 0 ? G : std::min(G, 1 / (2 * theta));
  MV r;
  r.M = 0.5L * std::log(m);
  r.V = r.M + std::log(G) / 2;
  return r;
}

long double f1_closed(long double x, long double alpha, std::uint32_t q) {
  require_alpha(alpha);
  const long double Q = q;
  const long double a = (Q * Q - 1) / (2 * Q);
  const long double b = (std::pow(Q, alpha - 0.5L) - 1) / (2 * std::pow(Q, alpha / 2 - 0.25L));
  const long double s = std::sin(pi * x);
  const long double s2 = s * s;
  if (b == 0 && s2 == 0) return std::numeric_limits<long double>::infinity();
  return std::log((a * a + s2) / (b * b + s2)) - (2.5L - alpha) * std::log(Q);
}

long double f1_weight(int n, long double alpha, std::uint32_t q) {
  if (n == 0) return 0;
  const long double k = std::abs(n), lq = std::log(static_cast<long double>(q));
  return (std::exp(-(alpha - 0.5L) * k * lq) - std::exp(-2 * k * lq)) / k;
}

long double f1_fourier(long double x, long double alpha, std::uint32_t q, unsigned M) {
  require_alpha(alpha);
  long double s = 0;
  for (unsigned n = M; n >= 1; --n) s += 2 * f1_weight(static_cast<int>(n), alpha, q) * std::cos(2 * pi * n * x);
  return s;
}

long double f1_numeric_coefficient(int n, long double alpha, std::uint32_t q, unsigned nodes) {
  long double s = 0;
  for (unsigned i = 0; i < nodes; ++i) {
    const long double x = (i + 0.5L) / nodes;
    s += f1_closed(x, alpha, q) * std::cos(2 * pi * n * x);
  }
  return s / nodes;
}

MinorantPolynomial::MinorantPolynomial(unsigned N, long double alpha, std::uint32_t q, std::vector<long double> rhat)
    : N_(N), alpha_(alpha), q_(q), rhat_(std::move(rhat)) {
  if (rhat_.size() != N + 1) throw InvalidArgument("minorant needs N+1 coefficients");
}

long double MinorantPolynomial::rhat(int m) const {
  const unsigned k = static_cast<unsigned>(std::abs(m));
  return k > N_ ? 0 : rhat_[k];
}

long double MinorantPolynomial::evaluate(long double x) const {
  long double s = 0;
  for (unsigned m = N_; m >= 1; --m) s += 2 * rhat_[m] * std::cos(2 * pi * m * x);
  return s + rhat_[0];
}

long double rhat0_closed(unsigned N, long double alpha, std::uint32_t q) {
  require_alpha(alpha);
  const long double M = N + 1.0L, lq = std::log(static_cast<long double>(q));
  return -(2 / M) * std::log((1 + std::exp(-(alpha - 0.5L) * M * lq)) / (1 + std::exp(-2 * M * lq)));
}

long double rhat_ksum(unsigned m, unsigned N, long double alpha, std::uint32_t q) {
  require_alpha(alpha);
  if (m < 1 || m > N) throw InvalidArgument("rhat_ksum needs 1 <= m <= N");
  const unsigned M = N + 1;
  const long double lq = std::log(static_cast<long double>(q));
  const long double sigma = std::exp(-2 * lq);
  long double rho_part;
  if (alpha == 0.5L) {
    const long double c = static_cast<long double>(m) / M;
    rho_part = (static_cast<long double>(M) - m) / (static_cast<long double>(M) * M) * (beta(c) + beta(2 - c));
  } else {
    rho_part = ksum_geometric(m, M, std::exp(-(alpha - 0.5L) * lq));
  }
  return rho_part - ksum_geometric(m, M, sigma);
}

MinorantPolynomial minorant_coeffs(unsigned N, long double alpha, std::uint32_t q) {
  if (N < 1) throw InvalidArgument("minorant degree must be positive");
  std::vector<long double> r(N + 1);
  r[0] = rhat0_closed(N, alpha, q);
  for (unsigned m = 1; m <= N; ++m) r[m] = rhat_ksum(m, N, alpha, q);
  return MinorantPolynomial(N, alpha, q, std::move(r));
}

MinorantCheck minorant_check(unsigned N, long double alpha, std::uint32_t q, unsigned grid_size) {
  if (grid_size < 1000) throw InvalidArgument("minorant grid needs at least 1000 points");
  const auto r = minorant_coeffs(N, alpha, q);
  MinorantCheck out{-std::numeric_limits<long double>::infinity(), 0, 0, std::numeric_limits<long double>::infinity()};
  long double mean = 0;
  for (unsigned i = 0; i < grid_size; ++i) {
    const long double x = static_cast<long double>(i) / grid_size;
    const long double rv = r.evaluate(x);
    mean += rv;
    const long double diff = rv - f1_closed(x, alpha, q);
    if (diff > out.max_violation) {
      out.max_violation = diff;
      out.argmax = x;
    }
    out.min_distance = std::min(out.min_distance, -diff);
  }
  out.integral_gap = mean / grid_size - rhat0_closed(N, alpha, q);
  return out;
}

LalfaReport lalfa_report(const lfun::LPolynomial& L, long double alpha, long double t, unsigned N) {
  require_alpha(alpha);
  const auto r = minorant_coeffs(N, alpha, L.q());
  const auto S = lfun::prime_power_sums(L, N);
  const long double lq = std::log(static_cast<long double>(L.q()));
  LalfaReport out{};
  out.explicit_rhs = -static_cast<long double>(L.g()) * r.rhat(0);
  for (unsigned m = 1; m <= N; ++m)
    out.explicit_rhs += r.rhat(static_cast<int>(m)) * std::exp(-0.5L * m * lq) * static_cast<long double>(S[m]) *
                        std::cos(m * t * lq);
  const long double mod = std::abs(L.at_s({alpha, t}));
  out.at_zero = mod <= 1e-12L;
  out.lhs = out.at_zero ? -std::numeric_limits<long double>::infinity() : std::log(mod);
  out.gap = out.lhs - out.explicit_rhs;
  return out;
}

long double lalfa_gap_bound(std::uint32_t q) { return -std::log1p(-std::pow(static_cast<long double>(q), -1.5L)); }

UbalfaPreset ubalfa_preset(std::uint32_t q, unsigned g, long double alpha) {
  require_alpha(alpha);
  if (g < 2) throw InvalidArgument("ubalfa preset needs g >= 2");
  const long double lq = std::log(static_cast<long double>(q));
  const long double lqg = std::log(static_cast<long double>(g)) / lq;
  long double n = 2 * lqg;
  if (alpha == 0.5L && lqg > 1) n -= 4 * std::log(lqg) / lq;
  UbalfaPreset p{};
  p.N = static_cast<unsigned>(std::max(1.0L, std::round(n)));
  p.bound = alpha == 0.5L ? g * std::log(2.0L) / lqg : std::pow(static_cast<long double>(g), 2 - 2 * alpha) / lqg;
  return p;
}

}  // namespace ffm::bounds
