#include "ffm/eulerprod.hpp"

#include <algorithm>
#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

namespace ffm::eulerprod {

namespace mp = boost::multiprecision;

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1);
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_); }

namespace {

void require_q(std::uint32_t q) {
  if (q < 3 || q % 4 != 1) throw InvalidArgument("q must be an odd prime power with q = 1 mod 4");
}

void require_cutoff(unsigned N) {
  if (N < 1) throw InvalidArgument("Euler product cutoff must be positive");
}

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

// Geometric extrapolation from the last three block sizes.
Real geometric_tail(const std::vector<Real>& blocks) {
  const std::size_t n = blocks.size();
  bool all_zero = true;
  for (const Real& b : blocks) all_zero = all_zero && b == 0;
  if (all_zero) return Real(0);
  if (n < 3) return Real(std::numeric_limits<double>::infinity());
  const Real& b0 = blocks[n - 3];
  const Real& b1 = blocks[n - 2];
  const Real& b2 = blocks[n - 1];
  if (b2 == 0) return Real(0);
  Real ratio(0);
  if (b1 != 0) ratio = b2 / b1;
  if (b0 != 0 && b1 / b0 > ratio) ratio = b1 / b0;
  if (b1 == 0 || ratio >= 1) return Real(std::numeric_limits<double>::infinity());
  return 2 * b2 * ratio / (1 - ratio);
}

Real q_pow(std::uint32_t q, unsigned n) { return mp::pow(Real(q), n); }

struct LogProduct {
  Jet2<Real> log_sum;
  std::vector<Real> blocks;
};

LogProduct accumulate(std::uint32_t q, unsigned N, const std::function<Jet2<Real>(unsigned)>& factor) {
  const auto counts = prime_counts(q, N);
  LogProduct out;
  out.log_sum = Jet2<Real>(0);
  for (unsigned n = 1; n <= N; ++n) {
    const Jet2<Real> f = factor(n);
    if (f.v <= 0) throw DomainError("Euler factor not positive at degree " + std::to_string(n));
    const Real count(counts[n].str());
    Jet2<Real> lf = log(f);
    Jet2<Real> scaled = lf * Jet2<Real>(count);
    out.log_sum += scaled;
    out.blocks.push_back(mp::abs(scaled.v));
  }
  return out;
}

ProductValue finish_value(const LogProduct& lp, unsigned N) {
  ProductValue r;
  r.value = mp::exp(lp.log_sum.v);
  const Real t = geometric_tail(lp.blocks);
  r.tail_bound = mp::isinf(t) ? t : Real(r.value * mp::expm1(t));
  r.cutoff_degree = N;
  return r;
}

JetProduct finish_jet(const LogProduct& lp, unsigned N) {
  JetProduct r;
  r.value = exp(lp.log_sum);
  const Real t = geometric_tail(lp.blocks);
  r.tail_bound = mp::isinf(t) ? t : Real(r.value.v * mp::expm1(t));
  r.cutoff_degree = N;
  return r;
}

void require_H_region(const Real& w, const Real& u, std::uint32_t q) {
  const Real Q(q);
  if (!(mp::abs(w * u) < 1 / Q && mp::abs(w) < 1 / mp::sqrt(Q) && mp::abs(u) < 1))
    throw DomainError("H outside its region of absolute convergence");
}

void require_B_region(const Real& x, const Real& w, const Real& u, std::uint32_t q) {
  const Real Q(q), iq = 1 / Q, isq = 1 / mp::sqrt(Q);
  const Real ax = mp::abs(x), aw = mp::abs(w), au = mp::abs(u);
  const bool ok = aw < isq && aw * au < iq && ax * aw * au < iq && Q * ax * aw * aw * au < iq && ax * aw < isq &&
                  Q * Q * ax * ax * mp::pow(aw, 4) < iq && Q * ax * mp::pow(aw, 3) < iq &&
                  Q * ax * ax * mp::pow(aw, 3) < iq;
  if (!ok) throw DomainError("B outside its region of absolute convergence");
}

Jet2<Real> jpow(const Jet2<Real>& b, unsigned e) { return ipow(b, e); }

}  // namespace

std::vector<BigInt> prime_counts(std::uint32_t q, unsigned N) {
  std::vector<BigInt> out(N + 1, 0);
  for (unsigned n = 1; n <= N; ++n) {
    BigInt s = 0;
    for (unsigned d = 1; d <= n; ++d)
      if (n % d == 0) s += mobius(d) * mp::pow(BigInt(q), n / d);
    out[n] = s / n;
  }
  return out;
}

ProductValue closed_A(std::uint32_t q, unsigned N) {
  require_q(q);
  require_cutoff(N);
  const auto lp = accumulate(q, N, [&](unsigned n) { return Jet2<Real>(A_factor(q_pow(q, n))); });
  return finish_value(lp, N);
}

ProductValue compute_H(const Real& w, const Real& u, std::uint32_t q, unsigned N) {
  const auto j = compute_H_jet(w, u, q, N);
  return {j.value.v, j.tail_bound, N};
}

JetProduct compute_H_jet(const Real& w, const Real& u, std::uint32_t q, unsigned N) {
  require_q(q);
  require_cutoff(N);
  require_H_region(w, u, q);
  const auto wj = Jet2<Real>::var_x(w);
  const auto lp = accumulate(q, N, [&](unsigned n) {
    return H_factor(Jet2<Real>(q_pow(q, n)), jpow(wj, n), Jet2<Real>(mp::pow(u, n)));
  });
  return finish_jet(lp, N);
}

ProductValue compute_B(const Real& x, const Real& w, const Real& u, std::uint32_t q, unsigned N) {
  require_q(q);
  require_cutoff(N);
  require_B_region(x, w, u, q);
  const auto lp = accumulate(q, N, [&](unsigned n) {
    return Jet2<Real>(B_factor(q_pow(q, n), mp::pow(w, n), mp::pow(x, n), mp::pow(u, n)));
  });
  return finish_value(lp, N);
}

JetProduct compute_C_jet(const Real& x, const Real& w, std::uint32_t q, unsigned N) {
  require_q(q);
  require_cutoff(N);
  if (x == 0) throw DomainError("C needs x != 0");
  require_B_region(x, w, 1 / (Real(q) * q * x), q);
  const auto xj = Jet2<Real>::var_x(x), wj = Jet2<Real>::var_y(w);
  const auto uj = Jet2<Real>(1) / (Jet2<Real>(Real(q) * q) * xj);
  const auto lp = accumulate(q, N, [&](unsigned n) {
    return B_factor(Jet2<Real>(q_pow(q, n)), jpow(wj, n), jpow(xj, n), jpow(uj, n));
  });
  return finish_jet(lp, N);
}

ProductValue compute_C(const Real& x, const Real& w, std::uint32_t q, unsigned N) {
  const auto j = compute_C_jet(x, w, q, N);
  return {j.value.v, j.tail_bound, N};
}

PrimeSums prime_sums(std::uint32_t q, unsigned N) {
  require_q(q);
  require_cutoff(N);
  const auto counts = prime_counts(q, N);
  PrimeSums s{};
  s.a = s.h = s.b = s.e = s.r = s.f = s.zeta_id1 = s.zeta_id2 = 0;
  std::vector<Real> blocks;
  for (unsigned n = 1; n <= N; ++n) {
    const Real P = q_pow(q, n), d(n), c(counts[n].str());
    const Real d2 = d * d;
    const Real k = mp::pow(P, 5) + 7 * mp::pow(P, 4) - 3 * mp::pow(P, 3) + 6 * P * P - 4 * P + 1;
    const Real den2 = (P - 1) * (P - 1) * k * k;
    auto poly = [&P](std::initializer_list<int> cs) {
      Real v(0);
      for (int cf : cs) v = v * P + cf;
      return v;
    };
    const Real ta = d * poly({25, -16, 30, -20, 5}) / ((P - 1) * k);
    const Real th = -d2 * P * poly({17, 26, 13, 57, -117, 113, -65, 27, -8, 1}) / den2;
    const Real tb = d2 * P * poly({45, 117, -73, 330, -485, 450, -295, 138, -40, 5}) / den2;
    const Real te = d2 * P * poly({90, 234, -146, 660, -970, 900, -590, 276, -80, 10}) / den2;
    const Real tr = d2 * P * poly({38, 220, 123, 305, 89, -98, 34, 20, -89, 98, -43, 7}) / (den2 * (P + 1) * (P + 1));
    const Real tf = d2 * P * poly({28, 91, -86, 273, -368, 337, -230, 111, -32, 4}) / den2;
    s.a += c * ta;
    s.h += c * th;
    s.b += c * tb;
    s.e += c * te;
    s.r += c * tr;
    s.f += c * tf;
    s.zeta_id1 += c * d / (P * P - 1);
    s.zeta_id2 += c * d2 * P * P / ((P * P - 1) * (P * P - 1));
    blocks.push_back(c * (mp::abs(ta) + mp::abs(th) + mp::abs(tb) + mp::abs(te) + mp::abs(tr) + mp::abs(tf)));
  }
  s.tail_bound = geometric_tail(blocks);
  return s;
}

namespace {

Real rel(const Real& got, const Real& want) {
  return want == 0 ? mp::abs(got) : Real(mp::abs(got - want) / mp::abs(want));
}

}  // namespace

Real CoefficientSet::rel_diff_10() const { return rel(a10, b10); }
Real CoefficientSet::rel_diff_9() const { return rel(a9, b9); }
Real CoefficientSet::rel_diff_8() const { return rel(a8, b8); }

CoefficientSet coefficients(std::uint32_t q, unsigned N, bool require_tail) {
  require_q(q);
  require_cutoff(N);
  CoefficientSet cs;
  cs.q = q;
  cs.N = N;
  const Real Q(q), one(1);
  const Real w0 = one / Q;
  cs.zeta2 = Q / (Q - 1);

  const auto Aval = closed_A(q, N);
  const auto Hj = compute_H_jet(w0, one / (Q * Q), q, N);
  const auto Cj = compute_C_jet(one, w0, q, N);
  const auto ps = prime_sums(q, N);

  cs.A = Aval.value;
  cs.a = ps.a, cs.h = ps.h, cs.b = ps.b, cs.e = ps.e, cs.r = ps.r, cs.f = ps.f;
  cs.H = Hj.value.v, cs.Hw = Hj.value.x, cs.Hww = Hj.value.xx;
  cs.C = Cj.value.v, cs.Cx = Cj.value.x, cs.Cw = Cj.value.y;
  cs.Cxx = Cj.value.xx, cs.Cxw = Cj.value.xy, cs.Cww = Cj.value.yy;

  Real tail = Aval.tail_bound;
  for (const Real& t : {Hj.tail_bound, Cj.tail_bound, Real(ps.tail_bound * cs.A)})
    if (t > tail) tail = t;
  cs.tail_bound = tail;
  if (require_tail && !(tail / cs.A < Real(1e-10)))
    throw InvalidArgument("Euler product tail too large for the requested tolerance; raise the cutoff N (N=" +
                          std::to_string(N) + ")");

  const Real F = 3628800;
  const Real& z2 = cs.zeta2;
  const Real& H = cs.H;
  const Real& C = cs.C;

  cs.a10 = (2048 * H / F - 7680 * C / (6 * F)) / z2;
  cs.a9 = ((51200 * H - 10240 * cs.Hw / Q) / F -
           (-24000 * Q * C / (Q - 1) + 216000 * C - 13200 * cs.Cw / Q - 24000 * cs.Cx) / (6 * F)) /
          z2;
  cs.a8 = ((560640 * H - 207360 * cs.Hw / Q + 23040 * cs.Hww / (Q * Q)) / F -
           (-531360 * Q * C / (Q - 1) + 2616480 * C - 347760 * cs.Cw / Q + 58320 * cs.Cw / (Q - 1) -
            17280 * Q * cs.Cx / (Q - 1) - 531360 * cs.Cx + 7560 * cs.Cww / (Q * Q) + 58320 * cs.Cxw / Q -
            8640 * cs.Cxx) /
               (6 * F)) /
          z2;

  const Real& A = cs.A;
  const Real& a = cs.a;
  cs.b10 = A / (4725 * z2);
  cs.b9 = (10 * A + 4 * a * A) / (1890 * z2);
  cs.b8 = (74 * A + 60 * a * A + 12 * A * (a * a + cs.h)) / (1260 * z2);

  const Real z1 = one / (Q - 1);
  cs.id_Hw = rel(cs.Hw, -2 * Q * a * A);
  cs.id_Hww = rel(cs.Hww, Q * Q * A * (4 * a * a + 2 * a - 2 * cs.b));
  cs.id_Cw = rel(cs.Cw, -4 * Q * a * A);
  cs.id_Cw_literal = rel(cs.Cw / Q, -4 * Q * a * A);
  cs.id_Cx = rel(cs.Cx, A * (-a - z1));
  cs.id_Cww = rel(cs.Cww, Q * Q * A * (16 * a * a - 4 * (cs.e - a)));
  cs.id_Cxx = rel(cs.Cxx, A * ((a + z1) * (a + z1) - (cs.r - a - z1)));
  cs.id_Cxw = rel(cs.Cxw, Q * A * (4 * a * (a + z1) - 4 * cs.f));
  cs.id_combination = rel(7 * cs.e / 2 + 27 * cs.f - cs.r - 24 * cs.h - 32 * cs.b, Q / ((Q - 1) * (Q - 1)));
  cs.id_zeta1 = rel(ps.zeta_id1, z1);
  cs.id_zeta2 = rel(ps.zeta_id2, Q / ((Q - 1) * (Q - 1)));
  return cs;
}

QRValues qr_polynomials(const CoefficientSet& cs, const Real& alpha) {
  const Real Q(cs.q);
  const Real& z2 = cs.zeta2;
  const Real& H = cs.H;
  const Real& C = cs.C;
  const Real a2 = alpha * alpha;
  QRValues r;
  r.Q0 = H;
  r.Q1 = -5 * alpha * H + 55 * H - 10 * cs.Hw;
  r.Q2 = 45 * a2 / 4 * H + alpha * (-495 * H / 2 + 45 * cs.Hw) + 1320 * H - 450 * cs.Hw + 45 * cs.Hww;
  r.R0 = 640 * C;
  r.R1 = -2100 * alpha * C - 2000 * z2 * C + 20100 * C - 1100 * cs.Cw / Q - 2000 * cs.Cx;
  r.R2 = 2880 * a2 * C + alpha * (4140 * z2 * C - 57150 * C + 3690 * cs.Cw / Q + 4140 * cs.Cx) - 48420 * z2 * C +
         269430 * C - 32670 * cs.Cw / Q + 4860 * z2 * cs.Cw / Q + 630 * cs.Cww / (Q * Q) - 1440 * z2 * cs.Cx -
         48420 * cs.Cx + 4860 * cs.Cxw / Q - 720 * cs.Cxx;
  r.c9 = H;
  r.c8 = 45 * H - 9 * cs.Hw / Q;
  r.f9 = -420 * C;
  r.f8 = 828 * z2 * C - 10278 * C + 738 * cs.Cw / Q + 828 * cs.Cx;
  r.alpha2_cancellation = mp::pow(Real(2), 8) * 45 / 4 * H * a2 - 2880 * C * a2;
  return r;
}

double ConjectureQ::evaluate(double x) const {
  double s = 0;
  for (int i = 10; i >= 0; --i) s = s * x + x_coeffs[static_cast<std::size_t>(i)];
  return s;
}

namespace {

using cd = std::complex<long double>;

constexpr long double kSeriesCut = 0.02L;

// Horner evaluation of sum_{k>=1} c_k z^k.
cd series(cd z, std::initializer_list<long double> c) {
  cd s = 0;
  for (auto it = std::rbegin(c); it != std::rend(c); ++it) s = (s + *it) * z;
  return s;
}

cd clog1p(cd z) {
  if (std::norm(z) < kSeriesCut * kSeriesCut)
    return series(z, {1.0L, -1.0L / 2, 1.0L / 3, -1.0L / 4, 1.0L / 5, -1.0L / 6, 1.0L / 7, -1.0L / 8, 1.0L / 9,
                      -1.0L / 10, 1.0L / 11, -1.0L / 12, 1.0L / 13});
  const long double re = z.real(), im = z.imag();
  return {0.5L * std::log1p(2 * re + re * re + im * im), std::atan2(im, 1 + re)};
}

cd cexpm1(cd z) {
  if (std::norm(z) < kSeriesCut * kSeriesCut)
    return series(z, {1.0L, 1.0L / 2, 1.0L / 6, 1.0L / 24, 1.0L / 120, 1.0L / 720, 1.0L / 5040, 1.0L / 40320,
                      1.0L / 362880, 1.0L / 3628800, 1.0L / 39916800});
  const long double s = std::sin(z.imag() / 2);
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// log cosh t
cd clogcosh(cd t) {
  if (std::norm(t) < kSeriesCut * kSeriesCut) {
    return series(t * t, {1.0L / 2, -1.0L / 12, 1.0L / 45, -17.0L / 2520, 31.0L / 14175, -691.0L / 935550});
  }
  const cd sh = std::sinh(t / 2.0L);
  return clog1p(2.0L * sh * sh);
}

constexpr long double kWideCut = 0.1L;

// log(1 - w) + w
cd log1m_plus(cd w) {
  if (std::norm(w) < kWideCut * kWideCut) {
    cd s = 0, p = w * w;
    for (int m = 2; m <= 22; ++m, p *= w) s -= p / static_cast<long double>(m);
    return s;
  }
  return clog1p(-w) + w;
}

// atanh(y) - y
cd atanh_minus(cd y) {
  if (std::norm(y) < kWideCut * kWideCut) {
    const cd y2 = y * y;
    cd s = 0, p = y * y2;
    for (int m = 1; m <= 11; ++m, p *= y2) s += p / static_cast<long double>(2 * m + 1);
    return s;
  }
  return (clog1p(y) - clog1p(-y)) / 2.0L - y;
}

// log cosh t - t^2/2
cd logcosh_minus(cd t) {
  static const auto coef = [] {
    std::array<long double, 10> c{};
    long double fact = 2, pow4 = 16;
    for (unsigned n = 2; n < 12; ++n) {
      fact *= (2 * n - 1) * (2 * n);
      c[n - 2] = pow4 * (pow4 - 1) * boost::math::bernoulli_b2n<long double>(static_cast<int>(n)) / (2 * n * fact);
      pow4 *= 4;
    }
    return c;
  }();
  if (std::norm(t) < kWideCut * kWideCut) {
    const cd t2 = t * t;
    cd s = 0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) s = (s + *it) * t2;
    return s * t2;
  }
  return clogcosh(t) - t * t / 2.0L;
}


}  // namespace

ConjectureQ conjecture_Q(std::uint32_t q, unsigned N, unsigned nodes, double radius, unsigned workers) {
  require_q(q);
  require_cutoff(N);
  if (nodes < 32) throw InvalidArgument("conjecture quadrature needs at least 32 nodes");
  if (!(radius > 0 && radius < 0.25)) throw InvalidArgument("contour radius must lie in (0, 0.25)");
  const long double L = std::log(static_cast<long double>(q));
  const auto counts = prime_counts(q, N);
  std::vector<long double> pi_k(N + 1);
  for (unsigned k = 1; k <= N; ++k) pi_k[k] = static_cast<long double>(counts[k]);

  std::vector<cd> z(nodes);
  for (unsigned i = 0; i < nodes; ++i)
    z[i] = std::polar(static_cast<long double>(radius), 2 * std::numbers::pi_v<long double> * (i + 0.5L) / nodes);

  // Per-degree node tables, with y = q^{-kz}/sqrt(X).
  const std::size_t M = nodes;
  std::vector<cd> pair_c(N * M * M), ys(N * M), y2s(N * M), us(N * M), vs(N * M);
  std::vector<long double> X(N + 1);
  for (unsigned k = 1; k <= N; ++k) {
    X[k] = std::pow(static_cast<long double>(q), k);
    const long double sx = std::sqrt(X[k]);
    for (std::size_t i = 0; i < M; ++i) {
      const std::size_t at = (k - 1) * M + i;
      const cd yi = std::exp(-static_cast<long double>(k) * L * z[i]) / sx;
      ys[at] = yi;
      y2s[at] = yi * yi;
      us[at] = atanh_minus(yi);
      vs[at] = -log1m_plus(yi * yi);
      for (std::size_t j = 0; j < M; ++j) {
        const cd yj = std::exp(-static_cast<long double>(k) * L * z[j]) / sx;
        pair_c[at * M + j] = log1m_plus(yi * yj);
      }
    }
  }

  auto hs = [L](cd s) { return std::norm(s) < 1e-30L ? cd(1 / L) : s / -cexpm1(-L * s); };

  using Partial = std::array<long double, 11>;
  auto outer = [&](std::size_t i0) {
    Partial acc{};
    std::array<std::size_t, 4> idx{i0, 0, 0, 0};
    for (idx[1] = i0; idx[1] < M; ++idx[1])
      for (idx[2] = idx[1]; idx[2] < M; ++idx[2])
        for (idx[3] = idx[2]; idx[3] < M; ++idx[3]) {
          // Conjugation maps node i to M-1-i; keep one tuple of each mirror pair.
          const std::array<std::size_t, 4> mirror{M - 1 - idx[3], M - 1 - idx[2], M - 1 - idx[1], M - 1 - idx[0]};
          if (mirror < idx) continue;
          long double mult = mirror == idx ? 24 : 48;
          for (int t = 1, run = 1; t < 4; ++t) {
            run = idx[t] == idx[t - 1] ? run + 1 : 1;
            mult /= run;
          }
          const std::array<cd, 4> zz{z[idx[0]], z[idx[1]], z[idx[2]], z[idx[3]]};
          cd logA = 0;
          for (unsigned k = 1; k <= N; ++k) {
            const std::size_t row = (k - 1) * M;
            cd pairs = 0, Y1 = 0, Y2 = 0, U = 0, V = 0;
            for (int i = 0; i < 4; ++i) {
              const std::size_t at = row + idx[i];
              for (int j = i; j < 4; ++j) pairs += pair_c[at * M + idx[j]];
              Y1 += ys[at];
              Y2 += y2s[at];
              U += us[at];
              V += vs[at];
            }
            // log S = h2 + D with h2 = sum_{i<=j} y_i y_j, which cancels against the pair terms.
            const cd h2 = (Y1 * Y1 + Y2) / 2.0L;
            const cd D = V / 2.0L + logcosh_minus(Y1 + U) + U * (2.0L * Y1 + U) / 2.0L;
            const cd E = cexpm1(h2 + D);
            const cd logT = D + clog1p(-E / ((X[k] + 1) * (1.0L + E)));
            logA += pi_k[k] * (pairs + logT);
          }
          cd K = 1, zprod = 1;
          for (int i = 0; i < 4; ++i) {
            K *= hs(2.0L * zz[i]) / (2.0L * zz[i]);
            zprod *= zz[i];
            for (int j = i + 1; j < 4; ++j) {
              const cd d = zz[i] - zz[j], s = zz[i] + zz[j];
              K *= d * d * s * hs(s);
            }
          }
          const cd zsum = zz[0] + zz[1] + zz[2] + zz[3];
          const cd z6 = zprod * zprod * zprod;
          const cd base = std::exp(logA - L * zsum / 2.0L) * K / (z6 * z6) * mult;
          cd pw = 1;
          for (std::size_t m = 0; m <= 10; ++m, pw *= zsum) acc[m] += (base * pw).real();
        }
    return acc;
  };

  std::vector<Partial> partial(M);
  if (workers == 0) workers = std::thread::hardware_concurrency();
  workers = std::max(1u, std::min(workers, nodes));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i0 = w; i0 < M; i0 += workers) partial[i0] = outer(i0);
      });
  }
  std::array<long double, 11> I{};
  for (const auto& p : partial)
    for (std::size_t m = 0; m <= 10; ++m) I[m] += p[m];
  const long double total = std::pow(static_cast<long double>(M), 4);
  ConjectureQ out{q, N, nodes, radius, {}, {}, {}, false};
  long double fact = 1;
  for (std::size_t m = 0; m <= 10; ++m) {
    if (m > 0) fact *= static_cast<long double>(m);
    out.x_coeffs[m] = static_cast<double>((2.0L / 3.0L) * (I[m] / total) * std::pow(L / 2, static_cast<long double>(m)) / fact);
  }
  // Expand Q(2g+1) in g.
  const double z2q = static_cast<double>(q) / (q - 1.0);
  for (std::size_t i = 0; i <= 10; ++i) {
    double binom = 1;
    for (std::size_t j = 0; j <= i; ++j) {
      out.g_coeffs[j] += out.x_coeffs[i] * binom * std::pow(2.0, static_cast<double>(j)) / z2q;
      binom = binom * static_cast<double>(i - j) / static_cast<double>(j + 1);
    }
  }
  {
    PrecisionGuard guard(kDefaultPrecisionBits);
    const auto cs = coefficients(q, std::max(N, 20u), false);
    const std::array<Real, 3> b{cs.b10, cs.b9, cs.b8};
    out.self_consistent = true;
    for (std::size_t i = 0; i < 3; ++i) {
      const double want = static_cast<double>(b[i]);
      out.b_rel_error[i] = std::abs(out.g_coeffs[10 - i] - want) / std::abs(want);
      out.self_consistent = out.self_consistent && out.b_rel_error[i] <= 1e-6;
    }
  }
  return out;
}

ConjectureDoubling conjecture_Q_doubling(std::uint32_t q, unsigned N, unsigned nodes, double radius, double tol,
                                         unsigned workers) {
  ConjectureDoubling d{conjecture_Q(q, N, nodes, radius, workers), conjecture_Q(q, N, 2 * nodes, radius, workers), 0};
  std::size_t worst = 0;
  for (std::size_t i = 0; i <= 10; ++i) {
    const double c = std::abs(d.fine.x_coeffs[i] - d.coarse.x_coeffs[i]) / std::abs(d.fine.x_coeffs[i]);
    if (c > d.worst_rel_change) d.worst_rel_change = c, worst = i;
  }
  if (!(d.worst_rel_change <= tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "conjecture quadrature not converged at x^" << worst << ": " << d.coarse.x_coeffs[worst] << " ("
        << nodes << " nodes) vs " << d.fine.x_coeffs[worst] << " (" << 2 * nodes << " nodes)";
    throw ConvergenceError(msg.str());
  }
  return d;
}

Real theory_fourth_moment(const CoefficientSet& cs, unsigned g) {
  const Real G(g);
  return mp::pow(Real(cs.q), 2 * g + 1) * (cs.a10 * mp::pow(G, 10) + cs.a9 * mp::pow(G, 9) + cs.a8 * mp::pow(G, 8));
}

double conjectured_fourth_moment(const ConjectureQ& Q, unsigned g) {
  const double qd = Q.q;
  return std::pow(qd, 2.0 * g) * (qd - 1) * Q.evaluate(2.0 * g + 1);
}

}  // namespace ffm::eulerprod
