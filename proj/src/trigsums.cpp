#include "ffm/trigsums.hpp"

#include <algorithm>
#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>
#include <numbers>

#include "ffm/errors.hpp"

namespace ffm::trigsums {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double binomial(unsigned n, unsigned k) {
  long double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long double ipow(long double b, unsigned e) {
  long double r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

void check_theta(long double theta) {
  if (std::abs(std::sin(theta / 2)) < 1e-14L) throw DomainError("theta is a multiple of 2 pi");
}

// Euler-Maclaurin tail sum_{k=1}^{K} B_{2k}/(2k) (lo^{-2k} - hi^{-2k}) and the first omitted term.
std::pair<long double, long double> bernoulli_tail(long double lo, long double hi, unsigned K = 8) {
  long double s = 0;
  for (unsigned k = 1; k <= K; ++k) {
    const long double b = boost::math::bernoulli_b2n<long double>(static_cast<int>(k));
    s += b / (2 * k) * (std::pow(lo, -2.0L * k) - std::pow(hi, -2.0L * k));
  }
  const long double b = boost::math::bernoulli_b2n<long double>(static_cast<int>(K + 1));
  const long double next = b / (2 * (K + 1)) * (std::pow(lo, -2.0L * (K + 1)) - std::pow(hi, -2.0L * (K + 1)));
  return {s, std::abs(next)};
}

// Harmonic partial sums over a signed range, zero excluded.
class SignedHarmonic {
 public:
  explicit SignedHarmonic(std::int64_t reach) : h_(static_cast<std::size_t>(reach) + 1, 0) {
    for (std::int64_t y = 1; y <= reach; ++y) h_[static_cast<std::size_t>(y)] = h_[static_cast<std::size_t>(y - 1)] + 1.0L / y;
  }
  // sum_{y=lo}^{hi} 1/y, y != 0
  long double range(std::int64_t lo, std::int64_t hi) const {
    auto H = [&](std::int64_t n) { return h_[static_cast<std::size_t>(n)]; };
    if (lo >= 1) return H(hi) - H(lo - 1);
    if (hi <= -1) return -(H(-lo) - H(-hi - 1));
    return H(std::max<std::int64_t>(hi, 0)) - H(-lo);
  }

 private:
  std::vector<long double> h_;
};

}  // namespace

Taylor::Taylor(unsigned order, long double value) : c_(order + 1, 0) { c_[0] = value; }

Taylor Taylor::variable(unsigned order, long double at) {
  Taylor t(order, at);
  if (order >= 1) t.c_[1] = 1;
  return t;
}

long double Taylor::derivative(unsigned i) const {
  long double f = 1;
  for (unsigned j = 2; j <= i; ++j) f *= j;
  return c_[i] * f;
}

Taylor operator+(Taylor a, const Taylor& b) {
  for (unsigned i = 0; i <= a.order(); ++i) a.c_[i] += b.c_[i];
  return a;
}

Taylor operator-(Taylor a, const Taylor& b) {
  for (unsigned i = 0; i <= a.order(); ++i) a.c_[i] -= b.c_[i];
  return a;
}

Taylor operator*(long double s, Taylor a) {
  for (auto& x : a.c_) x *= s;
  return a;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor r(a.order());
  for (unsigned i = 0; i <= a.order(); ++i)
    for (unsigned j = 0; i + j <= a.order(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  Taylor r(a.order());
  for (unsigned n = 0; n <= a.order(); ++n) {
    long double s = a.c_[n];
    for (unsigned j = 1; j <= n; ++j) s -= b.c_[j] * r.c_[n - j];
    r.c_[n] = s / b.c_[0];
  }
  return r;
}

SinCos sincos(const Taylor& u) {
  const unsigned K = u.order();
  SinCos r{Taylor(K, std::sin(u[0])), Taylor(K, std::cos(u[0]))};
  for (unsigned n = 1; n <= K; ++n) {
    long double s = 0, c = 0;
    for (unsigned j = 1; j <= n; ++j) {
      s += j * u[j] * r.cos[n - j];
      c -= j * u[j] * r.sin[n - j];
    }
    r.sin[n] = s / n;
    r.cos[n] = c / n;
  }
  return r;
}

GeometricTrig geometric_trig(std::uint64_t g, long double theta) {
  check_theta(theta);
  const long double L = 2.0L * g + 0.5L, d = 2 * std::sin(theta / 2);
  return {(std::cos(theta / 2) - std::cos(L * theta)) / d, (std::sin(L * theta) - std::sin(theta / 2)) / d};
}

GeometricTrig geometric_trig_direct(std::uint64_t g, long double theta) {
  GeometricTrig r{0, 0};
  for (std::uint64_t m = 1; m <= 2 * g; ++m) {
    r.sin_sum += std::sin(m * theta);
    r.cos_sum += std::cos(m * theta);
  }
  return r;
}

namespace {

// k-th derivatives of the sine and cosine geometric closed forms.
std::pair<long double, long double> closed_derivatives(unsigned k, std::uint64_t g, long double theta) {
  const long double L = 2.0L * g + 0.5L;
  const Taylor t = Taylor::variable(k, theta);
  const SinCos half = sincos(0.5L * t), full = sincos(L * t);
  const Taylor den = 2.0L * half.sin;
  const Taylor f = (half.cos - full.cos) / den;
  const Taylor h = (full.sin - half.sin) / den;
  return {f.derivative(k), h.derivative(k)};
}

// sum m^k e^{i m theta} = (-i)^k (h + i f)^{(k)}, returned as (sin part, cos part).
std::pair<long double, long double> rotate(unsigned k, long double fk, long double hk) {
  switch (k % 4) {
    case 0: return {fk, hk};
    case 1: return {-hk, fk};
    case 2: return {-fk, -hk};
    default: return {hk, -fk};
  }
}

}  // namespace

TrigSumResult power_trig(unsigned k, std::uint64_t g, long double theta, bool sine) {
  if (k < 1 || k > 9) throw InvalidArgument("power_trig needs 1 <= k <= 9");
  check_theta(theta);
  TrigSumResult r{};
  r.direct = 0;
  for (std::uint64_t m = 1; m <= 2 * g; ++m) {
    const long double mk = ipow(static_cast<long double>(m), k);
    r.direct += mk * (sine ? std::sin(m * theta) : std::cos(m * theta));
  }
  const auto [fk, hk] = closed_derivatives(k, g, theta);
  const auto [s, c] = rotate(k, fk, hk);
  r.closed = sine ? s : c;
  const long double L = 2.0L * g + 0.5L, d = 2 * std::sin(theta / 2);
  const long double lead = ipow(2.0L * g, k) * (sine ? -std::cos(L * theta) : std::sin(L * theta)) / d;
  r.remainder = r.direct - lead;
  r.order = ipow(static_cast<long double>(g), k - 1) / (std::sin(theta / 2) * std::sin(theta / 2));
  r.claimed_order = "g^(k-1)/sin^2(theta/2)";
  r.regime_ok = g * theta > 1;
  return r;
}

std::vector<long double> power_trig_L_coefficients(unsigned k, std::uint64_t g, long double theta, bool sine) {
  if (k < 1 || k > 9) throw InvalidArgument("power_trig needs 1 <= k <= 9");
  check_theta(theta);
  const long double phi = (2.0L * g + 0.5L) * theta;
  const Taylor t = Taylor::variable(k, theta);
  const SinCos half = sincos(0.5L * t);
  const Taylor w = Taylor(k, 1) / (2.0L * half.sin);
  const Taylor a = half.cos * w;
  // Leibniz on cos(phi + L t) w(t) and sin(phi + L t) w(t) with phi held fixed.
  std::vector<long double> out(k + 1);
  for (unsigned i = 0; i <= k; ++i) {
    const long double shift = phi + i * kPi / 2;
    long double fi = -binomial(k, i) * std::cos(shift) * w.derivative(k - i);
    const long double hi = binomial(k, i) * std::sin(shift) * w.derivative(k - i);
    if (i == 0) fi += a.derivative(k);
    const auto [s, c] = rotate(k, fi, hi);
    out[i] = sine ? s : c;
  }
  return out;
}

TrigSumResult truncated_sin_series(std::uint64_t a, long double theta) {
  if (a < 2 || !(theta > 0) || !(theta < 2 * kPi)) throw InvalidArgument("truncated_sin_series needs a >= 2, 0 < theta < 2 pi");
  TrigSumResult r{};
  r.direct = 0;
  for (std::uint64_t k = 1; k < a; ++k) r.direct += std::sin(k * theta) / k;
  const long double A = static_cast<long double>(a), s = std::sin(theta / 2);
  r.closed = (kPi - theta) / 2 - std::cos(A * theta) / (2 * A * s) - std::sin(A * theta) / (2 * A);
  r.alternative = (kPi - theta) / 2 - std::cos((A - 0.5L) * theta) / (2 * A * s);
  r.remainder = r.direct - r.closed;
  r.order = 1 / (A * A * s * s);
  r.claimed_order = "1/(a^2 sin^2(theta/2))";
  r.regime_ok = A * theta > 1;
  return r;
}

HarmonicBlock harmonic_block(std::uint64_t m, std::uint64_t alpha) {
  if (alpha < 1 || 2 * m <= alpha) throw InvalidArgument("harmonic_block needs 2m > alpha >= 1");
  const long double M = static_cast<long double>(m), al = static_cast<long double>(alpha);
  HarmonicBlock r{};
  const long double t = al / (2 * M - 1);
  const auto [ta, ba] = bernoulli_tail(2 * M - 1, 2 * M + al - 1);
  r.A = al / (2 * M * (2 * M - 1)) - al / (2 * (2 * M - 1) * (2 * M + al - 1)) + (std::log1p(t) - t) + ta;
  r.A_bound = ba;
  const long double s = al / (2 * M);
  const auto [tb, bb] = bernoulli_tail(2 * M - al, 2 * M);
  r.B = (-std::log1p(-s) - s) + 1 / (4 * M) - 1 / (2 * (2 * M - al)) + tb;
  r.B_bound = bb;
  r.A_direct = -s;
  r.B_direct = -s;
  for (std::uint64_t j = 0; j < alpha; ++j) {
    r.A_direct += 1 / (2 * M + j);
    r.B_direct += 1 / (2 * M - j);
  }
  return r;
}

long double master_A_direct(unsigned k, long double theta, std::uint64_t alpha, std::uint64_t g) {
  if (k > 9) throw InvalidArgument("master_A needs 0 <= k <= 9");
  if (alpha < 1) throw InvalidArgument("master_A needs alpha >= 1");
  const std::int64_t G = static_cast<std::int64_t>(2 * g), al = static_cast<std::int64_t>(alpha);
  // prefix[m + 1] = sum_{i=0}^{m} i^k
  std::vector<long double> prefix(static_cast<std::size_t>(G) + 2, 0);
  for (std::int64_t m = 0; m <= G; ++m)
    prefix[static_cast<std::size_t>(m + 1)] = prefix[static_cast<std::size_t>(m)] + (k == 0 ? 1 : ipow(static_cast<long double>(m), k));
  auto weight = [&](std::int64_t lo, std::int64_t hi) {
    lo = std::max<std::int64_t>(lo, 0), hi = std::min(hi, G);
    return hi < lo ? 0.0L : prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)];
  };
  auto floor_div2 = [](std::int64_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); };
  auto ceil_div2 = [&](std::int64_t x) { return -floor_div2(-x); };
  auto kernel = [&](std::int64_t x) {
    return x == 0 ? 2 * kPi * theta : std::sin(2 * kPi * theta * x) / x;
  };
  long double total = 0;
  // x = 2m - j
  for (std::int64_t x = -(al - 1); x <= 2 * G; ++x) total += kernel(x) * weight(ceil_div2(x), floor_div2(x + al - 1));
  // x = 2m + j, m >= 1
  for (std::int64_t x = 2; x <= 2 * G + al - 1; ++x)
    total += kernel(x) * weight(std::max<std::int64_t>(1, ceil_div2(x - al + 1)), floor_div2(x));
  return total;
}

TrigSumResult master_A(unsigned k, long double theta, std::uint64_t alpha, std::uint64_t g) {
  TrigSumResult r{};
  r.direct = master_A_direct(k, theta, alpha, g);
  const long double al = static_cast<long double>(alpha), G = static_cast<long double>(g);
  const long double c8 = std::cos(8 * G * kPi * theta), s8 = std::sin(8 * G * kPi * theta);
  const long double tp = 2 * kPi * theta;
  if (k >= 2) {
    const long double p = ipow(2 * G, k - 1);
    r.closed = -al / 2 * (p * c8 / tp - p * s8);
    r.order = ipow(G, k - 1) * theta * al * al * al + ipow(G, k - 2) / theta * al;
    r.claimed_order = "g^(k-1) theta alpha^3 + g^(k-2) alpha/theta";
  } else if (k == 1) {
    const std::int64_t a = static_cast<std::int64_t>(alpha);
    const SignedHarmonic H(static_cast<std::int64_t>(4 * g) + a);
    long double ab = 0;
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(2 * g); ++m) {
      const long double A = H.range(2 * m, 2 * m + a - 1) - al / (2.0L * m);
      const long double B = H.range(2 * m - a + 1, 2 * m) - al / (2.0L * m);
      ab += m * std::sin(4 * kPi * m * theta) * (A + B);
    }
    const long double bracket = c8 / tp - s8 - std::cos(tp) / std::sin(tp);
    r.closed = -al / 2 * bracket + ab;
    r.alternative = -al / 2 * (bracket + ab);
    r.order = theta * al * al * al;
    r.claimed_order = "theta alpha^3";
  } else {
    r.closed = kPi * al / 2 - al / 2 * (c8 / (2 * G * tp) - s8 / (2 * G));
    r.order = theta * al * al * al / G + al / (G * G * theta * theta);
    r.claimed_order = "theta alpha^3/g + alpha/(g^2 theta^2)";
  }
  r.remainder = r.direct - r.closed;
  r.regime_ok = 2 * g >= alpha && G * theta > 1;
  return r;
}

UbvarResult ubvar_check(std::uint64_t g, long double theta) {
  if (g < 1 || theta < 0 || !(theta < kPi)) throw InvalidArgument("ubvar_check needs g >= 1 and theta in [0, pi)");
  UbvarResult r{};
  r.sum = 0;
  for (std::uint64_t n = 1; n <= g; ++n) r.sum += std::cos(2 * n * theta) / n;
  const long double folded = std::min(theta, kPi - theta);
  const long double G = static_cast<long double>(g);
  r.bound = std::log(folded > 0 ? std::min(G, 1 / (2 * folded)) : G);
  r.slack = r.sum - r.bound;
  return r;
}

Ladder summarize_ladder(std::vector<long double> ratios, long double factor) {
  if (ratios.empty()) throw InvalidArgument("empty ladder");
  Ladder l{ratios, 0, 0, false};
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  l.median = n % 2 ? ratios[n / 2] : (ratios[n / 2 - 1] + ratios[n / 2]) / 2;
  l.spread = std::max(ratios.back() / l.median, l.median / ratios.front());
  l.stable = std::isfinite(l.spread) && l.spread <= factor;
  return l;
}

long double power_trig_envelope(unsigned k, std::uint64_t g, bool sine, unsigned samples) {
  const long double t0 = 1 / std::sqrt(static_cast<long double>(g));
  long double best = 0;
  for (unsigned i = 0; i < samples; ++i) {
    const auto r = power_trig(k, g, t0 * (1 + 0.25L * i / (samples - 1)), sine);
    best = std::max(best, std::abs(r.remainder) / r.order);
  }
  return best;
}

long double truncated_envelope(std::uint64_t a, unsigned samples) {
  const long double t0 = 1 / std::sqrt(static_cast<long double>(a));
  long double best = 0;
  for (unsigned i = 0; i < samples; ++i) {
    const auto r = truncated_sin_series(a, t0 * (1 + 0.25L * i / (samples - 1)));
    best = std::max(best, std::abs(r.remainder) / r.order);
  }
  return best;
}

long double master_ratio(unsigned k, std::uint64_t g, unsigned samples) {
  const std::uint64_t alpha = 100 * static_cast<std::uint64_t>(std::floor(std::log(static_cast<long double>(g))));
  if (2 * g < alpha) throw InvalidArgument("master_ratio needs 2g >= 100 floor(log g)");
  const long double t0 = 1 / std::sqrt(static_cast<long double>(g));
  long double best = 0;
  for (unsigned i = 0; i < samples; ++i) {
    const auto r = master_A(k, samples == 1 ? t0 : t0 * (1 + 0.25L * i / (samples - 1)), alpha, g);
    best = std::max(best, std::abs(r.remainder) / r.order);
  }
  return best;
}

}  // namespace ffm::trigsums
