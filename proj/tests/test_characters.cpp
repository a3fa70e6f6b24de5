#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "friable/characters.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace friable;

namespace {

constexpr double kTol = 1e-9;

CharacterCache& cache() {
  static CharacterCache c;
  return c;
}

}  // namespace

TEST(UnitGroup, OrdersMultiplyToPhiAndExponentsRoundTrip) {
  for (u64 q = 1; q <= 300; ++q) {
    const auto basis = UnitGroupBasis::make(q);
    u64 prod = 1;
    for (const auto& g : basis->generators()) prod *= g.order;
    ASSERT_EQ(prod, oracle::phi(q)) << q;
    std::set<std::vector<std::uint32_t>> seen;
    for (u64 n = 0; n < q; ++n) {
      ASSERT_EQ(basis->is_unit(n), oracle::gcd(static_cast<i64>(n), static_cast<i64>(q)) == 1);
      if (!basis->is_unit(n)) continue;
      const auto e = basis->exponents(n);
      ASSERT_EQ(basis->residue_of(e), n % q) << q;
      seen.emplace(e.begin(), e.end());
    }
    ASSERT_EQ(seen.size(), oracle::phi(q));
  }
}

TEST(UnitGroup, PowersOfTwoUseMinusOneAndFive) {
  const auto basis = UnitGroupBasis::make(32);
  ASSERT_EQ(basis->rank(), 2u);
  EXPECT_EQ(basis->generators()[0].order, 2u);
  EXPECT_EQ(basis->generators()[1].order, 8u);
}

TEST(Characters, EnumerationExamples) {
  EXPECT_EQ(enumerate_characters(5).size(), 4u);
  ASSERT_EQ(enumerate_characters(1).size(), 1u);
  EXPECT_TRUE(enumerate_characters(1)[0].is_principal());
  std::multiset<u64> conds;
  for (const auto& chi : enumerate_characters(12)) conds.insert(chi.conductor());
  EXPECT_EQ(conds, (std::multiset<u64>{1, 3, 4, 12}));
  EXPECT_TRUE(enumerate_characters(7)[0].is_principal());
}

TEST(Characters, CapIsEnforced) {
  try {
    enumerate_characters(10007);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModulusTooLarge);
  }
  EXPECT_EQ(enumerate_characters(29, 30).size(), 28u);
}

TEST(Characters, ConductorExamples) {
  for (const auto& chi : enumerate_characters(6)) {
    if (chi.is_principal()) {
      EXPECT_EQ(chi.conductor(), 1u);
    }
  }
  for (const auto& chi : enumerate_characters(4)) {
    if (!chi.is_principal()) {
      EXPECT_EQ(chi.conductor(), 4u);
    }
  }
  // The character mod 8 that is -1 on 3 and 7 is induced from mod 4.
  int found = 0;
  for (const auto& chi : enumerate_characters(8)) {
    if (std::abs(chi(3) + 1.0) < kTol && std::abs(chi(7) + 1.0) < kTol && std::abs(chi(5) - 1.0) < kTol) {
      EXPECT_EQ(chi.conductor(), 4u);
      ++found;
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(Characters, ConductorMatchesExhaustiveSearch) {
  // Smallest d | q for which chi is trivial on units congruent to 1 mod d.
  for (u64 q = 1; q <= 120; ++q)
    for (const auto& chi : cache().get(q)->all) {
      u64 expect = q;
      for (u64 d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        bool trivial = true;
        for (u64 n = 1; n < q && trivial; ++n)
          if (oracle::gcd(static_cast<i64>(n), static_cast<i64>(q)) == 1 && (n - 1) % d == 0) trivial = std::abs(chi(static_cast<i64>(n)) - 1.0) < kTol;
        if (trivial) {
          expect = d;
          break;
        }
      }
      ASSERT_EQ(chi.conductor(), expect) << q;
    }
}

TEST(Characters, MultiplicativeAndSupportedOnUnits) {
  for (u64 q = 1; q <= 60; ++q)
    for (const auto& chi : cache().get(q)->all)
      for (i64 m = 0; m < static_cast<i64>(q); ++m) {
        const bool unit = oracle::gcd(m, static_cast<i64>(q)) == 1;
        ASSERT_EQ(std::abs(chi(m)) > 0.5, unit);
        for (i64 n = 0; n < static_cast<i64>(q); ++n) ASSERT_LT(std::abs(chi(m * n) - chi(m) * chi(n)), kTol);
      }
}

TEST(Characters, PrimeModuliMatchPrimitiveRootConstruction) {
  for (u64 p : {3u, 5u, 7u, 11u, 13u, 31u}) {
    const oracle::PrimeCharacters ref(p);
    const auto mine = cache().get(p)->all;
    std::vector<bool> matched(p - 1, false);
    for (const auto& chi : mine) {
      int hits = 0;
      for (u64 j = 0; j + 1 < p; ++j) {
        bool same = true;
        for (i64 n = 0; n < static_cast<i64>(p) && same; ++n) same = std::abs(chi(n) - ref.value(j, n)) < kTol;
        if (same && !matched[j]) {
          matched[j] = true;
          ++hits;
          break;
        }
      }
      ASSERT_EQ(hits, 1) << p;
    }
  }
}

TEST(Characters, OrthogonalityUpTo100) {
  for (u64 q = 1; q <= 100; ++q) {
    const auto& chars = cache().get(q)->all;
    ASSERT_EQ(chars.size(), oracle::phi(q));
    for (i64 k = 0; k < static_cast<i64>(q); ++k) {
      cplx s{};
      for (const auto& chi : chars) s += chi(k);
      const double expect = oracle::mod(k - 1, static_cast<i64>(q)) == 0 ? static_cast<double>(oracle::phi(q)) : 0.0;
      ASSERT_LT(std::abs(s - expect), kTol) << q << " " << k;
    }
  }
}

TEST(Characters, PrimitiveCountIdentityUpTo500) {
  for (u64 q = 1; q <= 500; ++q) {
    i64 expect = 0;
    for (u64 d = 1; d <= q; ++d)
      if (q % d == 0) expect += oracle::mobius(q / d) * static_cast<i64>(oracle::phi(d));
    ASSERT_EQ(static_cast<i64>(cache().get(q)->primitive.size()), expect) << q;
  }
}

TEST(Characters, ConjugateInverts) {
  for (const auto& chi : cache().get(45)->all) {
    const auto bar = chi.conjugate();
    EXPECT_EQ(bar.conductor(), chi.conductor());
    for (i64 n = 0; n < 45; ++n) ASSERT_LT(std::abs(bar(n) - std::conj(chi(n))), kTol);
  }
}

TEST(Omega, Examples) {
  for (u64 r : {1u, 7u, 12u, 30u})
    for (i64 k : {1, 5, 11, 29}) EXPECT_LT(std::abs(omega_D(k, r, 1, cache()) - 1.0), kTol);
  EXPECT_LT(std::abs(omega_D(1, 12, 12, cache()) - 4.0), kTol);
  EXPECT_LT(std::abs(omega_D(5, 4, 4, cache()) - 2.0), kTol);
}

TEST(Omega, MatchesMobiusInversionOracleAndCrudeBound) {
  for (u64 r = 1; r <= 60; ++r)
    for (u64 D = 1; D <= 12; ++D) {
      const OmegaProjector proj(r, D, cache());
      for (i64 k = 0; k < static_cast<i64>(r); ++k) {
        if (oracle::gcd(k, static_cast<i64>(r)) != 1) continue;
        const cplx w = proj(k);
        ASSERT_LT(std::abs(w - oracle::omega_D(k, r, D)), kTol) << r << " " << D << " " << k;
        ASSERT_LE(std::abs(w), static_cast<double>(D * D) + kTol);
      }
    }
}

TEST(ErrorKernel, Examples) {
  EXPECT_LT(std::abs(error_kernel_E_D(1, 5, 5, cache())), kTol);
  EXPECT_LT(std::abs(error_kernel_E_D(2, 5, 1, cache()) - (-0.25)), kTol);
  EXPECT_LT(std::abs(error_kernel_E_D(6, 12, 3, cache())), kTol);
  EXPECT_LT(std::abs(error_kernel_E_D(13, 12, 3, cache()) - oracle::error_kernel(13, 12, 3)), kTol);
}

TEST(ErrorKernel, TwoDefinitionsAgree) {
  for (u64 q = 1; q <= 60; ++q)
    for (u64 D = 1; D <= 12; ++D)
      for (i64 k = 0; k < static_cast<i64>(q); ++k) {
        const cplx a = error_kernel_E_D(k, q, D, cache());
        ASSERT_LT(std::abs(a - error_kernel_tail(k, q, D, cache())), kTol) << q << " " << D << " " << k;
        ASSERT_LT(std::abs(a - oracle::error_kernel(k, q, D)), kTol);
      }
}

TEST(ErrorKernel, VanishesWhenEveryConductorIsCaptured) {
  for (u64 q = 1; q <= 40; ++q)
    for (i64 k = 0; k < static_cast<i64>(q); ++k) ASSERT_LT(std::abs(error_kernel_E_D(k, q, q, cache())), kTol);
}

TEST(GaussSums, Examples) {
  for (u64 q : {1u, 9u, 10u, 24u}) {
    const auto& chi = cache().get(q)->all.front();
    ASSERT_TRUE(chi.is_principal());
    EXPECT_LT(std::abs(gauss_sum(chi, 0).value - static_cast<double>(oracle::phi(q))), kTol);
  }
  for (const auto& chi : cache().get(5)->primitive) EXPECT_NEAR(std::abs(gauss_sum(chi, 1).value), std::sqrt(5.0), kTol);
  for (const auto& chi : cache().get(12)->all) {
    if (!chi.is_principal()) {
      EXPECT_LT(std::abs(gauss_sum(chi, 12).value), kTol);
    }
  }
}

TEST(GaussSums, BoundHoldsAndMatchesDirectSum) {
  for (u64 q = 1; q <= 60; ++q)
    for (const auto& chi : cache().get(q)->all)
      for (i64 a = 0; a < static_cast<i64>(q); ++a) {
        const auto g = gauss_sum(chi, a);
        ASSERT_TRUE(g.holds) << q << " " << a;
        cplx direct{};
        for (i64 b = 0; b < static_cast<i64>(q); ++b) direct += chi(b) * oracle::e(static_cast<double>(a * b % static_cast<i64>(q)) / q);
        ASSERT_LT(std::abs(direct - g.value), 1e-8);
      }
}

TEST(LargeSieve, Examples) {
  std::vector<cplx> zero(15);
  const auto z = large_sieve_check(7, 0, zero, cache());
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  EXPECT_TRUE(z.holds);

  gen::Engine g(3);
  const auto a = gen::disc_vector(g, 25);
  cplx s{};
  double l2 = 0;
  for (const auto& v : a) {
    s += v;
    l2 += std::norm(v);
  }
  const auto q1 = large_sieve_check(1, 10, a, cache());
  EXPECT_NEAR(q1.lhs, std::norm(s), 1e-9);
  EXPECT_NEAR(q1.rhs, 25 * l2, 1e-9);

  std::vector<cplx> signs(20);
  for (auto& v : signs) v = gen::integer(g, 0, 1) ? 1.0 : -1.0;
  EXPECT_TRUE(large_sieve_check(10, 0, signs, cache()).holds);
}

TEST(LargeSieve, HoldsOnRandomInstances) {
  gen::Engine g(77);
  for (int t = 0; t < 150; ++t) {
    const u64 Q = static_cast<u64>(gen::integer(g, 1, 100));
    const auto a = gen::disc_vector(g, static_cast<std::size_t>(gen::integer(g, 1, 100)));
    ASSERT_TRUE(large_sieve_check(Q, gen::integer(g, -500, 500), a, cache()).holds) << t;
  }
}

TEST(Harper, DegenerateCasesAndFixture) {
  const auto table = SmoothTable::build(10000);
  EXPECT_EQ(harper_sum(1e4, 20, 30, 1, table, cache()), 0.0);
  EXPECT_EQ(harper_sum(1e4, 20, 1, 5, table, cache()), 0.0);
  const double v = harper_sum(1e4, 20, 30, 5, table, cache());
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
  // Direct evaluation over the smooth set, character by character.
  std::vector<u64> smooth;
  for (u64 n = 1; n <= 10000; ++n)
    if (oracle::largest_prime_factor(n) <= 20) smooth.push_back(n);
  double ref = 0;
  for (u64 q = 1; q <= 30; ++q) {
    double inner = 0;
    for (const auto& chi : cache().get(q)->all) {
      if (chi.conductor() <= 1 || chi.conductor() > 5) continue;
      cplx s{};
      for (u64 n : smooth) s += chi(static_cast<i64>(n));
      inner += std::abs(s);
    }
    ref += inner / static_cast<double>(oracle::phi(q));
  }
  EXPECT_NEAR(v, ref, 1e-9 * ref);
}
