#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "ffm/moments.hpp"

using namespace ffm;
using namespace ffm::moments;
using ffpoly::SetKind;

namespace {

const std::vector<LPolynomial>& genus_one() {
  static const auto e = ensemble_sweep(5, 1);
  return e;
}

const std::vector<LPolynomial>& genus_two() {
  static const auto e = ensemble_sweep(5, 2);
  return e;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ffm_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(D4Table, MatchesFactorization) {
  const D4Table t(5, 5);
  for (unsigned n = 0; n <= 5; ++n)
    for (std::uint64_t c = ffpoly::ipow(5, n); c < 2 * ffpoly::ipow(5, n); c += (n == 5 ? 7 : 1))
      ASSERT_EQ(t[c], ffpoly::arithmetic_functions(Polynomial::from_code(5, c)).d4) << c;
  EXPECT_EQ(t[5 * 5 + 0], 10u);  // x^2: d4(P^2) = 10
}

TEST(Afe, ExactForAllGenusOne) {
  for (const auto& L : genus_one()) {
    const auto rec = afe_check(L.D());
    ASSERT_TRUE(rec.equal) << L.D();
    ASSERT_TRUE(rec.layers_match_power) << L.D();
    ASSERT_EQ(rec.lhs, lfun::value_at_half(L).pow(4));
  }
}

TEST(Afe, ExactForSampledGenusTwo) {
  std::mt19937 rng(4);
  const auto& all = genus_two();
  for (int i = 0; i < 4; ++i) {
    const auto& L = all[rng() % all.size()];
    const auto rec = afe_check(L.D());
    ASSERT_TRUE(rec.equal) << L.D();
    ASSERT_TRUE(rec.layers_match_power);
    // Left side again from the zeros, numerically.
    const auto zs = lfun::zeros(L);
    lfun::Complex v = 1;
    for (const auto& a : zs.alphas) v *= 1.0L - a;
    const long double num = std::pow(v.real(), 4);
    ASSERT_NEAR(rec.lhs.to_long_double(), num, 1e-8L * std::max(1.0L, num));
  }
}

TEST(Afe, RejectsInvalid) {
  EXPECT_THROW(afe_check(Polynomial(5, {0, 0, 1, 1})), InvalidArgument);
}

TEST(Ensemble, Cardinalities) {
  EXPECT_EQ(genus_one().size(), 100u);
  EXPECT_EQ(genus_two().size(), 2500u);
  for (std::size_t i = 1; i < genus_two().size(); ++i) ASSERT_LT(genus_two()[i - 1].D(), genus_two()[i].D());
}

TEST(Ensemble, FullCoefficientsAreSymmetric) {
  for (const auto& L : genus_two()) ASSERT_TRUE(L.symmetric()) << L.D();
}

TEST(Ensemble, ResumesFromCache) {
  const auto dir = fresh_dir("resume");
  SweepOptions opt{dir, 5, 1, 2};
  const auto partial = ensemble_sweep(5, 1, opt);
  EXPECT_EQ(partial.size(), 40u);
  opt.stop_after.reset();
  const auto resumed = ensemble_sweep(5, 1, opt);
  ASSERT_EQ(resumed.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) {
    ASSERT_EQ(resumed[i].D(), genus_one()[i].D());
    ASSERT_EQ(resumed[i].coeffs(), genus_one()[i].coeffs());
  }
  const auto warm = ensemble_sweep(5, 1, opt);
  EXPECT_EQ(warm.size(), 100u);
  std::filesystem::remove_all(dir);
}

TEST(Ensemble, RejectsStaleCache) {
  const auto dir = fresh_dir("stale");
  ensemble_sweep(5, 1, {dir, 2});
  const auto path = shard_path(dir, 5, 1, 0, 2);
  {
    std::ofstream out(path);
    out << "FFMCACHE,0,5,1\n";
  }
  EXPECT_THROW(ensemble_sweep(5, 1, {dir, 2}), CacheError);
  std::filesystem::remove_all(dir);
}

TEST(Ensemble, WorkersGiveIdenticalResults) {
  const auto par = ensemble_sweep(5, 1, {{}, 7, 3});
  ASSERT_EQ(par.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) ASSERT_EQ(par[i].coeffs(), genus_one()[i].coeffs());
}

TEST(Moment, ZerothIsEnsembleSize) {
  const auto r = kth_moment(genus_one(), 5, 1, 0);
  EXPECT_EQ(r.exact_sum.a(), 100);
  EXPECT_EQ(r.exact_sum.b(), 0);
  EXPECT_EQ(r.ensemble_size, 100u);
}

TEST(Moment, FourthGenusOneFrozen) {
  // Oracle: rational pow(4) of each exact value, summed.
  QuadraticAlgebraic oracle(5);
  for (const auto& L : genus_one()) oracle += lfun::value_at_half(lfun::compute_L(L.D())).pow(4);
  const auto r = kth_moment(genus_one(), 5, 1, 4);
  EXPECT_EQ(r.exact_sum, oracle);
  EXPECT_EQ(r.exact_sum.a(), lfun::Rational(20456, 5));
  EXPECT_EQ(r.exact_sum.b(), 0);
  EXPECT_NEAR(r.float_value, 4091.2L, 1e-12L * 4091.2L);
}

TEST(Moment, FourthGenusTwoFrozen) {
  const auto r = kth_moment(genus_two(), 5, 2, 4);
  EXPECT_EQ(r.exact_sum.a(), lfun::Rational(128164496, 125));
  EXPECT_EQ(r.exact_sum.b(), 0);
}

TEST(Moment, CauchySchwarz) {
  for (const auto* e : {&genus_one(), &genus_two()}) {
    const unsigned g = static_cast<unsigned>(e->front().g());
    const auto m0 = kth_moment(*e, 5, g, 0).float_value, m2 = kth_moment(*e, 5, g, 2).float_value,
               m4 = kth_moment(*e, 5, g, 4).float_value;
    EXPECT_LE(m2 * m2, m0 * m4);
    EXPECT_GT(m4, 0);
  }
}

TEST(Moment, ShardAdditivity) {
  const auto& e = genus_two();
  const auto total = exact_power_sum(e, 4);
  std::mt19937 rng(1);
  std::vector<LPolynomial> a, b, c;
  for (const auto& L : e) (rng() % 3 == 0 ? a : rng() % 2 ? b : c).push_back(L);
  EXPECT_EQ(exact_power_sum(a, 4) + exact_power_sum(b, 4) + exact_power_sum(c, 4), total);
}

TEST(Moment, OddRejected) {
  EXPECT_THROW(kth_moment(genus_one(), 5, 1, 3), InvalidArgument);
}

TEST(Moment, ThirteenGenusOneSize) {
  const auto r = kth_moment(13, 1, 4);
  EXPECT_EQ(r.ensemble_size, 2028u);
  EXPECT_NEAR(r.float_value, r.exact_sum.to_long_double(), 0);
}

TEST(Shifted, ConsistentWithExactMoment) {
  for (const auto* e : {&genus_one(), &genus_two()}) {
    const unsigned g = static_cast<unsigned>(e->front().g());
    const auto exact = kth_moment(*e, 5, g, 4).float_value;
    const auto p = shifted_moment(*e, g, 0, 4);
    EXPECT_NEAR(p.value, exact, 1e-10L * exact);
    EXPECT_LE(shifted_moment(*e, g, std::numbers::pi_v<long double> / 2, 4).value, p.value);
    EXPECT_NEAR(shifted_moment(*e, g, 1.0L, 0).value, static_cast<long double>(e->size()), 1e-9L);
    EXPECT_NEAR(p.M, 0.5L * std::log(static_cast<long double>(g)), 1e-15L);
  }
}

TEST(MainTerm, MatchesDirectEnumeration) {
  // f = l^2 with d(f) <= 4, via arithmetic_functions and divisors_of_power.
  long double total = 0;
  ffpoly::for_each(SetKind::MonicUpTo, 5, 2, [&](const Polynomial& l) {
    const Polynomial f = l * l;
    const auto ar = ffpoly::arithmetic_functions(f);
    long double csum = 0;
    for (const auto& C : characters::divisors_of_power(f, 1)) csum += std::pow(5.0L, -2.0L * C.deg());
    total += ar.d4 * static_cast<long double>(ar.euler_phi) / std::pow(5.0L, 1.5L * f.deg()) * csum;
  });
  EXPECT_NEAR(main_term_direct(5, 1, 1), 125.0L * 0.8L * total, 1e-9L);
}

TEST(MainTerm, MonotoneInY) {
  long double prev = 0;
  for (unsigned y = 0; y <= 2; ++y) {
    const auto v = main_term_direct(5, 2, y);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(main_term_direct(5, 1, 2), InvalidArgument);
}

TEST(Distribution, ReproducesShiftedMoment) {
  const auto& e = genus_two();
  const auto s = distribution_stats(e, 2, 0.7L);
  EXPECT_EQ(s.samples + s.excluded, 2500u);
  long double m = 0;
  for (auto v : s.log_values) m += std::exp(4 * v);
  const auto p = shifted_moment(e, 2, 0.7L, 4);
  EXPECT_NEAR(m, p.value, 1e-6L * p.value);
  std::uint64_t c = 0;
  for (auto n : s.counts) c += n;
  EXPECT_EQ(c, s.samples);
  EXPECT_GE(s.variance, 0);
}
