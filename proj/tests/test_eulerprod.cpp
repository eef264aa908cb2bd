#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

#include "ffm/characters.hpp"
#include "ffm/eulerprod.hpp"

using namespace ffm;
using namespace ffm::eulerprod;
namespace mp = boost::multiprecision;
using ffpoly::Polynomial;
using ffpoly::SetKind;

namespace {

struct Precision : ::testing::Test {
  PrecisionGuard guard{kDefaultPrecisionBits};
};

double rel(const Real& got, const Real& want) { return static_cast<double>(mp::abs(got - want) / mp::abs(want)); }

// Bivariate power series in (x, w), truncated at degree D in each variable.
constexpr int D = 3;
struct Series2 {
  std::array<std::array<long double, D + 1>, D + 1> c{};

  Series2() = default;
  Series2(long double v) { c[0][0] = v; }  // NOLINT
  Series2(int v) { c[0][0] = v; }          // NOLINT
  static Series2 x() {
    Series2 s;
    s.c[1][0] = 1;
    return s;
  }
  static Series2 w() {
    Series2 s;
    s.c[0][1] = 1;
    return s;
  }
  friend Series2 operator+(Series2 a, const Series2& b) {
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) a.c[i][j] += b.c[i][j];
    return a;
  }
  friend Series2 operator-(Series2 a, const Series2& b) {
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) a.c[i][j] -= b.c[i][j];
    return a;
  }
  friend Series2 operator*(const Series2& a, const Series2& b) {
    Series2 r;
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j)
        for (int k = 0; i + k <= D; ++k)
          for (int l = 0; j + l <= D; ++l) r.c[i + k][j + l] += a.c[i][j] * b.c[k][l];
    return r;
  }
  // 1/b by fixed-point iteration on the nilpotent part.
  friend Series2 operator/(const Series2& a, const Series2& b) {
    const long double b0 = b.c[0][0];
    Series2 n = b * Series2(1 / b0) - Series2(1);
    Series2 inv(1), p(1);
    for (int k = 1; k <= 2 * D; ++k) {
      p = p * n * Series2(-1);
      inv = inv + p;
    }
    return a * inv * Series2(1 / b0);
  }
};

Series2 geometric(const Series2& t, int power) {  // (1 - t)^{-power}
  Series2 base = Series2(1) / (Series2(1) - t), r(1);
  for (int i = 0; i < power; ++i) r = r * base;
  return r;
}

long double divisor_u_product(const Polynomial& f, long double u) {
  long double p = 1;
  if (f.deg() <= 0) return p;
  for (const auto& fa : ffpoly::factor(f).factors) p *= 1 - std::pow(u, static_cast<long double>(fa.prime.deg()));
  return p;
}

}  // namespace

TEST(PrimeCounts, SmallValuesAndNecklaceIdentity) {
  const auto c = prime_counts(5, 10);
  EXPECT_EQ(c[1], 5);
  EXPECT_EQ(c[2], 10);
  EXPECT_EQ(c[3], 40);
  EXPECT_EQ(c[4], 150);
  for (unsigned n = 1; n <= 10; ++n) {
    BigInt s = 0;
    for (unsigned d = 1; d <= n; ++d)
      if (n % d == 0) s += d * c[d];
    EXPECT_EQ(s, mp::pow(BigInt(5), n));
  }
  EXPECT_EQ(prime_counts(13, 3)[3], (2197 - 13) / 3);
}

TEST_F(Precision, ClosedAConvergesWithinTail) {
  for (unsigned N : {8u, 12u, 16u}) {
    const auto a = closed_A(5, N), b = closed_A(5, N + 5);
    EXPECT_LE(mp::abs(a.value - b.value), a.tail_bound) << N;
  }
}

TEST_F(Precision, ClosedAFixtureAndOracle) {
  const auto a = closed_A(5, 20);
  Real oracle;
  {
    // Direct product of powered factors at doubled precision, no logarithms.
    PrecisionGuard wide(2 * kDefaultPrecisionBits);
    const auto counts = prime_counts(5, 20);
    Real p = 1;
    for (unsigned n = 1; n <= 20; ++n) {
      const Real P = mp::pow(Real(5), n);
      const Real f = mp::pow(P - 1, 6) * (mp::pow(P, 5) + 7 * mp::pow(P, 4) - 3 * mp::pow(P, 3) + 6 * P * P - 4 * P + 1) /
                     (mp::pow(P, 10) * (P + 1));
      ASSERT_GT(f, 0);
      p *= mp::pow(f, Real(counts[n].str()));
    }
    oracle = p;
  }
  EXPECT_LT(rel(a.value, oracle), 1e-40);
  EXPECT_LT(rel(a.value, Real("0.0204592853318558479146920496795")), 1e-28);
}

TEST_F(Precision, TailBoundsAreMonotone) {
  const Real w = Real(1) / 5, u = Real(1) / 25;
  Real pa = 1, ph = 1, pc = 1, ps = 1e9;
  for (unsigned N = 4; N <= 24; ++N) {
    const auto a = closed_A(5, N);
    const auto h = compute_H(w, u, 5, N);
    const auto c = compute_C(Real(1), w, 5, N);
    const auto s = prime_sums(5, N);
    EXPECT_LE(a.tail_bound, pa) << N;
    EXPECT_LE(h.tail_bound, ph) << N;
    EXPECT_LE(c.tail_bound, pc) << N;
    EXPECT_LE(s.tail_bound, ps) << N;
    pa = a.tail_bound, ph = h.tail_bound, pc = c.tail_bound, ps = s.tail_bound;
  }
}

TEST_F(Precision, IdentityChainAtDefaults) {
  const auto a = closed_A(5, 20);
  const auto h = compute_H(Real(1) / 5, Real(1) / 25, 5, 20);
  const auto c = compute_C(Real(1), Real(1) / 5, 5, 20);
  const auto b = compute_B(Real(1), Real(1) / 5, Real(1) / 25, 5, 20);
  EXPECT_LT(mp::abs(h.value - a.value), 1e-12);
  EXPECT_LT(mp::abs(c.value - a.value), 1e-12);
  EXPECT_LT(mp::abs(b.value - c.value), 1e-40);
}

TEST_F(Precision, TrivialPointsAndRegions) {
  EXPECT_EQ(compute_H(Real(0), Real(1) / 2, 5, 10).value, 1);
  EXPECT_EQ(compute_H(Real(0), Real(1) / 2, 5, 10).tail_bound, 0);
  EXPECT_EQ(compute_B(Real("0.3"), Real(0), Real("0.2"), 5, 10).value, 1);
  EXPECT_THROW(compute_H(Real("0.5"), Real(0), 5, 10), DomainError);
  EXPECT_THROW(compute_H(Real("0.1"), Real(1), 5, 10), DomainError);
  EXPECT_THROW(compute_B(Real(3), Real("0.2"), Real("0.04"), 5, 10), DomainError);
  EXPECT_THROW(closed_A(7, 10), InvalidArgument);
}

TEST_F(Precision, BAtZeroX) {
  const Real w("0.2"), u("0.3");
  const auto counts = prime_counts(5, 12);
  Real expect = 1;
  for (unsigned n = 1; n <= 12; ++n) {
    const Real W = mp::pow(w, n), U = mp::pow(u, n);
    expect *= mp::pow(mp::pow(1 - W, 4) * (1 + 4 * W / (1 - U)), Real(counts[n].str()));
  }
  EXPECT_LT(rel(compute_B(Real(0), w, u, 5, 12).value, expect), 1e-40);
}

TEST(SeriesOracle, HMatchesDefiningSeries) {
  // sum_l d4(l^2) prod_{P|l}(1-1/|P|)/(1-u^{d(P)}) w^{d(l)} = Z(w)^10 H(w,u), w-degree <= 3
  const long double u = 0.3L;
  Series2 lhs;
  ffpoly::for_each(SetKind::MonicUpTo, 5, D, [&](const Polynomial& l) {
    const auto ar = ffpoly::arithmetic_functions(l * l);
    long double phi_ratio = 1;
    if (l.deg() > 0)
      for (const auto& fa : ffpoly::factor(l).factors) phi_ratio *= 1 - std::pow(5.0L, -fa.prime.deg());
    lhs.c[0][static_cast<std::size_t>(l.deg())] += ar.d4 * phi_ratio / divisor_u_product(l, u);
  });
  Series2 rhs = geometric(Series2(5) * Series2::w(), 10);
  for (int d = 1; d <= D; ++d) {
    const long double count = static_cast<double>(prime_counts(5, D)[static_cast<unsigned>(d)]);
    Series2 W(1);
    for (int i = 0; i < d; ++i) W = W * Series2::w();
    const Series2 f = H_factor(Series2(std::pow(5.0L, d)), W, Series2(std::pow(u, static_cast<long double>(d))));
    for (int i = 0; i < static_cast<int>(count); ++i) rhs = rhs * f;
  }
  for (int j = 0; j <= D; ++j) EXPECT_NEAR(rhs.c[0][j], lhs.c[0][j], 1e-9L * std::max(1.0L, std::abs(lhs.c[0][j]))) << j;
}

TEST(SeriesOracle, BMatchesDefiningSeries) {
  // sum_l x^{d(l)} sum_f d4(f) G(l^2, chi_f)/(sqrt|f| prod_{P|f}(1-u^{d(P)})) w^{d(f)}
  const long double u = 0.3L;
  const auto fs = ffpoly::enumerate(SetKind::MonicUpTo, 5, D);
  std::map<std::uint64_t, characters::GaussTable> tables;
  for (const auto& f : fs)
    if (f.deg() > 0) tables.emplace(f.code(), characters::GaussTable(f));
  Series2 lhs;
  for (const auto& l : fs) {
    const Polynomial l2 = l * l;
    for (const auto& f : fs) {
      const long double G = f.deg() == 0 ? 1.0L : tables.at(f.code()).at(l2).real();
      if (G == 0) continue;
      const long double term = ffpoly::arithmetic_functions(f).d4 * G / std::pow(5.0L, f.deg() / 2.0L) /
                               divisor_u_product(f, u);
      lhs.c[static_cast<std::size_t>(l.deg())][static_cast<std::size_t>(f.deg())] += term;
    }
  }
  const Series2 x = Series2::x(), w = Series2::w();
  Series2 rhs = geometric(Series2(5) * w, 4) * geometric(Series2(5) * x, 1) *
                geometric(Series2(25) * w * w * x, 10) * (Series2(1) - Series2(5) * w * x) *
                (Series2(1) - Series2(5) * w * x) * (Series2(1) - Series2(5) * w * x) * (Series2(1) - Series2(5) * w * x);
  const auto counts = prime_counts(5, D);
  for (int d = 1; d <= D; ++d) {
    Series2 W(1), X(1);
    for (int i = 0; i < d; ++i) W = W * w, X = X * x;
    const Series2 f = B_factor(Series2(std::pow(5.0L, d)), W, X, Series2(std::pow(u, static_cast<long double>(d))));
    for (int i = 0; i < static_cast<int>(counts[static_cast<unsigned>(d)]); ++i) rhs = rhs * f;
  }
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j)
      EXPECT_NEAR(rhs.c[i][j], lhs.c[i][j], 1e-8L * std::max(1.0L, std::abs(lhs.c[i][j]))) << i << "," << j;
}

TEST_F(Precision, PrimeSumIdentities) {
  const auto s = prime_sums(5, 20);
  EXPECT_LT(mp::abs(s.zeta_id1 - Real("0.25")), 1e-12);
  EXPECT_LT(mp::abs(s.zeta_id2 - Real(5) / 16), 1e-12);
  EXPECT_LT(mp::abs(7 * s.e / 2 + 27 * s.f - s.r - 24 * s.h - 32 * s.b - s.zeta_id2), 1e-10);
}

TEST_F(Precision, CoefficientsAgreeAndIdentitiesHold) {
  for (std::uint32_t q : {5u, 13u}) {
    const auto cs = coefficients(q, 20);
    EXPECT_LT(cs.rel_diff_10(), 1e-8) << q;
    EXPECT_LT(cs.rel_diff_9(), 1e-8) << q;
    EXPECT_LT(cs.rel_diff_8(), 1e-8) << q;
    for (const Real* r : {&cs.id_Hw, &cs.id_Hww, &cs.id_Cw, &cs.id_Cx, &cs.id_Cww, &cs.id_Cxx, &cs.id_Cxw})
      EXPECT_LT(*r, 1e-8) << q;
    // The displayed variant with an extra division by q is off by exactly that factor.
    EXPECT_LT(mp::abs(cs.id_Cw_literal - (1 - Real(1) / q)), 1e-8);
  }
  const auto cs = coefficients(5, 20);
  EXPECT_LT(rel(cs.b10, Real("3.464005982e-6")), 1e-9);
  EXPECT_LT(rel(cs.b9, Real("2.01888323653e-4")), 1e-10);
  EXPECT_LT(rel(cs.b8, Real("4.87581778455e-3")), 1e-9);
}

TEST_F(Precision, CoefficientsDemandAdequateCutoff) {
  EXPECT_THROW(coefficients(5, 6), InvalidArgument);
  EXPECT_NO_THROW(coefficients(5, 6, false));
}

TEST(Jets, MatchFiniteDifferences) {
  PrecisionGuard wide(2 * kDefaultPrecisionBits);
  const Real h("1e-8"), q(5), w0 = 1 / q, u0 = 1 / (q * q);
  auto H = [&](const Real& w) { return compute_H(w, u0, 5, 20).value; };
  const auto jet = compute_H_jet(w0, u0, 5, 20).value;
  EXPECT_LT(rel((H(w0 + h) - H(w0 - h)) / (2 * h), jet.x), 1e-6);
  EXPECT_LT(rel((H(w0 + h) - 2 * H(w0) + H(w0 - h)) / (h * h), jet.xx), 1e-6);

  auto C = [&](const Real& x, const Real& w) { return compute_C(x, w, 5, 20).value; };
  const auto cj = compute_C_jet(Real(1), w0, 5, 20).value;
  const Real one(1);
  EXPECT_LT(rel((C(one + h, w0) - C(one - h, w0)) / (2 * h), cj.x), 1e-6);
  EXPECT_LT(rel((C(one, w0 + h) - C(one, w0 - h)) / (2 * h), cj.y), 1e-6);
  EXPECT_LT(rel((C(one + h, w0) - 2 * C(one, w0) + C(one - h, w0)) / (h * h), cj.xx), 1e-6);
  EXPECT_LT(rel((C(one, w0 + h) - 2 * C(one, w0) + C(one, w0 - h)) / (h * h), cj.yy), 1e-6);
  const Real mixed = (C(one + h, w0 + h) - C(one + h, w0 - h) - C(one - h, w0 + h) + C(one - h, w0 - h)) / (4 * h * h);
  EXPECT_LT(rel(mixed, cj.xy), 1e-6);
}

TEST_F(Precision, QRPolynomials) {
  const auto cs = coefficients(5, 20);
  const auto r0 = qr_polynomials(cs, Real(0));
  EXPECT_LT(mp::abs(r0.Q0 - cs.A), 1e-12);
  EXPECT_EQ(r0.f9, -420 * cs.C);
  EXPECT_EQ(r0.Q1, 55 * cs.H - 10 * cs.Hw);
  EXPECT_EQ(r0.c9, cs.H);
  for (const char* a : {"0.5", "1", "3.25"}) {
    const auto r = qr_polynomials(cs, Real(a));
    EXPECT_LT(mp::abs(r.alpha2_cancellation), 1e-9) << a;
    EXPECT_EQ(r.R0, 640 * cs.C);
  }
}

TEST(Conjecture, MatchesClosedFormLeadingCoefficients) {
  const auto c = conjecture_Q(5, 20, 32);
  EXPECT_TRUE(c.self_consistent);
  for (double e : c.b_rel_error) EXPECT_LT(e, 1e-6);
  EXPECT_THROW(conjecture_Q(5, 20, 16), InvalidArgument);
}

TEST(Conjecture, IndependentOfContourRadius) {
  const auto a = conjecture_Q(5, 20, 32, 0.05), b = conjecture_Q(5, 20, 32, 0.1);
  for (std::size_t i = 0; i <= 10; ++i) EXPECT_NEAR(a.x_coeffs[i], b.x_coeffs[i], 1e-8 * std::abs(b.x_coeffs[i])) << i;
}

TEST(Conjecture, FixtureValues) {
  const auto c = conjecture_Q(5, 20, 32);
  EXPECT_NEAR(c.evaluate(3), 40.954828916224535, 1e-9);
  EXPECT_NEAR(c.evaluate(5), 410.1153071540233, 1e-8);
  EXPECT_NEAR(c.evaluate(7), 2368.1751851051831, 1e-7);
  // Ensemble-summed form: q^{2g}(q-1) Q(2g+1) = q^{2g+1} sum g_coeffs[i] g^i.
  for (unsigned g = 1; g <= 3; ++g) {
    double s = 0;
    for (int i = 10; i >= 0; --i) s = s * g + c.g_coeffs[static_cast<std::size_t>(i)];
    EXPECT_NEAR(conjectured_fourth_moment(c, g), std::pow(5.0, 2 * g + 1) * s, 1e-9 * conjectured_fourth_moment(c, g));
  }
}
