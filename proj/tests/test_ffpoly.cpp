#include <gtest/gtest.h>

#include <set>

#include "ffm/ffpoly.hpp"

using namespace ffm;
using namespace ffm::ffpoly;

namespace {

Polynomial P5(std::vector<Coeff> c) { return Polynomial(5, std::move(c)); }

// Reducible monic polynomials of degree n, built from products of lower-degree monics.
std::set<std::uint64_t> products_of_degree(std::uint32_t q, unsigned n) {
  std::set<std::uint64_t> out;
  for (unsigned i = 1; i < n; ++i) {
    const std::uint64_t a0 = ipow(q, i), b0 = ipow(q, n - i);
    for (std::uint64_t a = a0; a < 2 * a0; ++a)
      for (std::uint64_t b = b0; b < 2 * b0; ++b) out.insert((Polynomial::from_code(q, a) * Polynomial::from_code(q, b)).code());
  }
  return out;
}

}  // namespace

TEST(FieldElement, Arithmetic) {
  FieldElement a(3, 5), b(4, 5);
  EXPECT_EQ((a + b).value(), 2u);
  EXPECT_EQ((a - b).value(), 4u);
  EXPECT_EQ((a * b).value(), 2u);
  EXPECT_EQ((a / b * b).value(), 3u);
  EXPECT_EQ(FieldElement(-1, 5).value(), 4u);
  EXPECT_EQ(FieldElement(4, 5).legendre(), 1);
  EXPECT_EQ(FieldElement(2, 5).legendre(), -1);
  EXPECT_EQ(FieldElement(0, 5).legendre(), 0);
  EXPECT_THROW(FieldElement(1, 6), InvalidArgument);
  EXPECT_THROW(FieldElement(0, 5).inverse(), DomainError);
}

TEST(Degree, MinusInfinitySentinel) {
  Polynomial zero(5);
  EXPECT_TRUE(zero.degree().is_minus_infinity());
  EXPECT_THROW(zero.degree().value(), DomainError);
  EXPECT_TRUE((zero.degree() + Degree(3)).is_minus_infinity());
  EXPECT_LT(zero.degree(), Degree(0));
  EXPECT_EQ(P5({1, 1}).degree(), Degree(1));
  EXPECT_EQ((P5({1, 1}) * P5({0, 0, 1})).degree(), P5({1, 1}).degree() + P5({0, 0, 1}).degree());
}

TEST(PolyArith, Examples) {
  // (x+2)(x+3) = x^2+1 over F_5, while x^2+4 = (x+1)(x+4) is coprime to x+2.
  EXPECT_EQ(P5({2, 1}) * P5({3, 1}), P5({1, 0, 1}));
  EXPECT_EQ(gcd(P5({1, 0, 1}), P5({2, 1})), P5({2, 1}));
  EXPECT_TRUE(gcd(P5({4, 0, 1}), P5({2, 1})).is_one());
  EXPECT_EQ(gcd(P5({4, 0, 1}), P5({1, 1})), P5({1, 1}));
  Polynomial f = P5({1, 2, 3, 4});
  EXPECT_EQ(f * Polynomial::constant(5, 1), f);
  auto [quo, rem] = P5({0, 0, 0, 1}).div_rem(P5({0, 1}));
  EXPECT_EQ(quo, P5({0, 0, 1}));
  EXPECT_TRUE(rem.is_zero());
  EXPECT_THROW(f.div_rem(Polynomial(5)), DomainError);
  EXPECT_THROW(f + Polynomial(7, {1}), InvalidArgument);
}

TEST(PolyArith, DivRemReconstructs) {
  for (std::uint64_t a = 1; a < 800; a += 7)
    for (std::uint64_t b = 1; b < 200; b += 3) {
      Polynomial A = Polynomial::from_code(5, a), B = Polynomial::from_code(5, b);
      auto [qq, r] = A.div_rem(B);
      EXPECT_EQ(qq * B + r, A);
      EXPECT_LT(r.degree(), B.degree());
    }
}

TEST(PolyArith, DerivativeEvalPowMod) {
  Polynomial f = P5({1, 2, 3, 4});  // 1 + 2x + 3x^2 + 4x^3
  EXPECT_EQ(f.derivative(), P5({2, 6, 12}));
  EXPECT_EQ(f.eval(2), (1 + 4 + 12 + 32) % 5);
  Polynomial m = P5({2, 0, 1});
  EXPECT_EQ(f.pow_mod(7, m), f.pow(7) % m);
  EXPECT_EQ(P5({0, 0, 0, 0, 0, 1}).derivative(), Polynomial(5));  // 5x^4 = 0
}

TEST(PolyCodes, RoundTripAndOrder) {
  for (std::uint64_t c = 0; c < 3000; ++c) {
    Polynomial f = Polynomial::from_code(5, c);
    EXPECT_EQ(f.code(), c);
    EXPECT_EQ(Polynomial::from_digits(5, f.digits()), f);
    if (c > 0) EXPECT_LT(Polynomial::from_code(5, c - 1), f);
  }
  EXPECT_EQ(P5({3, 0, 1}).digits(), "301");
  EXPECT_EQ(Polynomial(13, {11, 12}).digits(), "bc");
}

TEST(Irreducible, Examples) {
  EXPECT_TRUE(is_irreducible(P5({2, 0, 1})));
  EXPECT_FALSE(is_irreducible(P5({0, 0, 1})));
  for (Coeff c = 0; c < 5; ++c) EXPECT_TRUE(is_irreducible(P5({c, 1})));
  EXPECT_THROW(is_irreducible(P5({1, 2})), InvalidArgument);
}

TEST(Irreducible, MatchesProductSieveOracle) {
  for (std::uint32_t q : {5u, 13u}) {
    for (unsigned n = 2; n <= (q == 5 ? 4u : 3u); ++n) {
      auto reducible = products_of_degree(q, n);
      const std::uint64_t lo = ipow(q, n);
      std::size_t count = 0;
      for (std::uint64_t c = lo; c < 2 * lo; ++c) {
        const bool irr = !reducible.count(c);
        EXPECT_EQ(is_irreducible(Polynomial::from_code(q, c)), irr);
        count += irr;
      }
      EXPECT_EQ(irreducibles(q, n).size(), count);
    }
  }
}

TEST(Irreducible, PrimeCounts) {
  EXPECT_EQ(irreducibles(5, 1).size(), 5u);
  EXPECT_EQ(irreducibles(5, 2).size(), 10u);
  EXPECT_EQ(irreducibles(5, 3).size(), 40u);
  for (const auto& p : irreducibles(5, 5)) ASSERT_TRUE(is_irreducible(p));
}

TEST(Ppt, Examples) {
  auto r1 = ppt_check(5, 1);
  EXPECT_EQ(r1.count, 5u);
  EXPECT_DOUBLE_EQ(r1.main_term, 5.0);
  EXPECT_DOUBLE_EQ(r1.deviation, 0.0);
  auto r2 = ppt_check(5, 2);
  EXPECT_EQ(r2.count, 10u);
  EXPECT_DOUBLE_EQ(r2.deviation, 2.5);
  EXPECT_TRUE(r2.within_bound);
  EXPECT_EQ(ppt_check(5, 3).count, 40u);
  for (unsigned n = 1; n <= 8; ++n) EXPECT_TRUE(ppt_check(5, n).within_bound) << n;
  for (unsigned n = 1; n <= 5; ++n) EXPECT_TRUE(ppt_check(13, n).within_bound) << n;
}

TEST(Factor, Examples) {
  auto fac = factor(P5({4, 0, 1}));  // x^2 - 1
  ASSERT_EQ(fac.factors.size(), 2u);
  EXPECT_EQ(fac.factors[0].prime, P5({1, 1}));
  EXPECT_EQ(fac.factors[1].prime, P5({4, 1}));
  EXPECT_EQ(fac.unit, 1u);
  auto p = factor(P5({2, 0, 1}));
  ASSERT_EQ(p.factors.size(), 1u);
  EXPECT_EQ(p.factors[0].exponent, 1u);
  auto c = factor(P5({3}));
  EXPECT_TRUE(c.factors.empty());
  EXPECT_EQ(c.unit, 3u);
  EXPECT_THROW(factor(Polynomial(5)), DomainError);
}

TEST(Factor, ReconstructsEverythingUpToDegreeFive) {
  for (std::uint64_t c = 1; c < ipow(5, 6); ++c) {
    Polynomial f = Polynomial::from_code(5, c);
    auto fac = factor(f);
    ASSERT_EQ(fac.reconstruct(5), f) << f.digits();
    for (std::size_t i = 0; i < fac.factors.size(); ++i) {
      ASSERT_TRUE(is_irreducible(fac.factors[i].prime));
      if (i) ASSERT_LT(fac.factors[i - 1].prime, fac.factors[i].prime);
    }
  }
}

TEST(Arithmetic, Examples) {
  Polynomial P = P5({2, 0, 1}), Q = P5({1, 1});
  EXPECT_EQ(arithmetic_functions(P * P).d4, 10u);
  EXPECT_EQ(arithmetic_functions(P * P * Q).moebius, 0);
  EXPECT_EQ(arithmetic_functions(Q).euler_phi, 4u);
  EXPECT_EQ(arithmetic_functions(P * Q).moebius, 1);
  EXPECT_EQ(arithmetic_functions(P.pow(3)).von_mangoldt, 2u);
  EXPECT_EQ(arithmetic_functions(P * Q).von_mangoldt, 0u);
  EXPECT_EQ(arithmetic_functions(P * P * Q).radical, P * Q);
  EXPECT_EQ(arithmetic_functions(P * P).euler_phi, 625u - 25u);
  EXPECT_THROW(arithmetic_functions(P5({1, 2})), InvalidArgument);
}

TEST(Arithmetic, SquarefreeAgreesWithMoebius) {
  for_each(SetKind::MonicUpTo, 5, 5, [](const Polynomial& f) {
    auto a = arithmetic_functions(f);
    ASSERT_EQ(is_squarefree(f), a.moebius != 0) << f.digits();
    ASSERT_EQ(a.is_squarefree, a.moebius != 0);
  });
}

TEST(Arithmetic, D4Multiplicative) {
  auto monics = enumerate(SetKind::MonicUpTo, 5, 4);
  for (const auto& f : monics)
    for (const auto& g : monics) {
      if (f.deg() + g.deg() > 5 || !gcd(f, g).is_one()) continue;
      ASSERT_EQ(arithmetic_functions(f * g).d4, arithmetic_functions(f).d4 * arithmetic_functions(g).d4);
    }
}

TEST(Enumerate, Cardinalities) {
  EXPECT_EQ(enumerate(SetKind::Squarefree, 5, 3).size(), 100u);
  EXPECT_EQ(enumerate(SetKind::Monic, 5, 2).size(), 25u);
  EXPECT_EQ(enumerate(SetKind::Irreducible, 5, 2).size(), 10u);
  for (std::uint32_t q : {5u, 13u}) {
    for (unsigned n = 1; n <= 6; ++n) {
      std::uint64_t monic = 0, sf = 0;
      for_each(SetKind::Monic, q, n, [&](const Polynomial&) { ++monic; });
      for_each(SetKind::Squarefree, q, n, [&](const Polynomial&) { ++sf; });
      EXPECT_EQ(monic, ipow(q, n));
      // Every linear polynomial is square-free, so |H_1| = q.
      EXPECT_EQ(sf, n == 1 ? q : ipow(q, n - 1) * (q - 1)) << q << " " << n;
    }
  }
  std::uint64_t upto = 0;
  for_each(SetKind::MonicUpTo, 5, 3, [&](const Polynomial&) { ++upto; });
  EXPECT_EQ(upto, 1u + 5u + 25u + 125u);
}

TEST(Enumerate, RadixOrderNoDuplicates) {
  auto all = enumerate(SetKind::Monic, 5, 4);
  for (std::size_t i = 1; i < all.size(); ++i) ASSERT_LT(all[i - 1], all[i]);
}

TEST(Enumerate, BudgetGuard) {
  const auto saved = enumeration_budget();
  set_enumeration_budget(1000);
  EXPECT_THROW(enumerate(SetKind::Monic, 5, 5), BudgetExceeded);
  EXPECT_NO_THROW(enumerate(SetKind::Monic, 5, 4));
  set_enumeration_budget(saved);
}

TEST(Codes, MultiplyCodes) {
  for (std::uint64_t a = 1; a < 200; ++a)
    for (std::uint64_t b = 1; b < 200; b += 11)
      ASSERT_EQ(multiply_codes(5, a, b), (Polynomial::from_code(5, a) * Polynomial::from_code(5, b)).code());
  EXPECT_EQ(code_degree(5, 125), 3u);
  EXPECT_EQ(code_degree(5, 124), 2u);
}
