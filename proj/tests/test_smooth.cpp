#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "friable/smooth.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace friable;

namespace {

const SmoothTable& table_1e5() {
  static const SmoothTable t = SmoothTable::build(100000);
  return t;
}

}  // namespace

TEST(Table, SmallValuesAndCaps) {
  const auto t = SmoothTable::build(10);
  const std::vector<std::uint32_t> expect = {1, 2, 3, 2, 5, 3, 7, 2, 3, 5};
  EXPECT_TRUE(std::equal(t.values().begin(), t.values().end(), expect.begin(), expect.end()));
  EXPECT_EQ(t.x_max(), 10u);
  EXPECT_THROW(SmoothTable::build(0), Error);
  try {
    SmoothTable::build(1000, 999);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MemoryCap);
  }
}

TEST(Table, PrimesPowersOfTwoAndTrialDivision) {
  const auto& t = table_1e5();
  for (u64 k = 1; (u64{1} << k) <= 100000; ++k) ASSERT_EQ(t.lpf(u64{1} << k), 2u);
  for (u64 n = 2; n <= 100000; ++n) {
    if (oracle::is_prime(n)) {
      ASSERT_EQ(t.lpf(n), n);
    }
    ASSERT_EQ(t.lpf(n), oracle::largest_prime_factor(n)) << n;
  }
}

TEST(Psi, Examples) {
  const auto& t = table_1e5();
  EXPECT_EQ(psi(100, 100, t), 100u);
  EXPECT_EQ(psi(30, 3, t), 12u);
  EXPECT_EQ(psi_ap(30, 3, 1, 5, t), 3u);
  EXPECT_EQ(psi_q(30, 3, 5, t), 12u);
  EXPECT_EQ(psi_q(30, 3, 2, t), 4u);  // 1, 3, 9, 27
  EXPECT_EQ(psi(0.5, 10, t), 0u);
  EXPECT_EQ(psi(1, 1.5, t), 1u);
  try {
    psi(100001, 10, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TableTooSmall);
  }
}

TEST(Psi, MatchesTrialDivisionOnRandomQueries) {
  gen::Engine g(2024);
  // Prefix counts by trial division once; each query is then a lookup.
  const u64 X = 100000;
  std::vector<u64> lp(X + 1);
  for (u64 n = 1; n <= X; ++n) lp[n] = oracle::largest_prime_factor(n);
  for (int t = 0; t < 1000; ++t) {
    const u64 x = static_cast<u64>(gen::integer(g, 1, static_cast<i64>(X)));
    const double y = gen::real(g, 1.5, 400);
    u64 brute = 0;
    for (u64 n = 1; n <= x; ++n) brute += static_cast<double>(lp[n]) <= y;
    ASSERT_EQ(psi(static_cast<double>(x), y, table_1e5()), brute) << x << " " << y;
  }
}

TEST(Psi, ResidueClassesPartitionTheCount) {
  const auto& t = table_1e5();
  for (u64 q = 1; q <= 50; ++q) {
    u64 total = 0, coprime = 0;
    for (i64 a = 0; a < static_cast<i64>(q); ++a) {
      const u64 c = psi_ap(54321, 40, a, q, t);
      total += c;
      if (oracle::gcd(a, static_cast<i64>(q)) == 1) coprime += c;
    }
    ASSERT_EQ(total, psi(54321, 40, t));
    ASSERT_EQ(coprime, psi_q(54321, 40, q, t));
  }
  EXPECT_EQ(psi_ap(3000, 7, 4, 9, t), oracle::psi_ap(3000, 7, 4, 9));
}

TEST(Discrepancy, Examples) {
  const auto& t = table_1e5();
  EXPECT_EQ(discrepancy(30, 3, 1, 1, 1, t), 0.0);
  EXPECT_EQ(discrepancy(30, 3, 1, 1, 5, t), 0.0);
  EXPECT_EQ(discrepancy(30, 3, 2, 1, 5, t), 0.0);
  EXPECT_DOUBLE_EQ(discrepancy(30, 3, 1, 2, 5, t), static_cast<double>(oracle::psi_ap(30, 3, 3, 5)) - 3.0);
  try {
    discrepancy(30, 3, 1, 3, 6, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResidueNotCoprime);
  }
}

TEST(Discrepancy, SumMatchesPerModulusBruteForce) {
  const auto& t = table_1e5();
  EXPECT_EQ(discrepancy_sum(1e4, 30, 1, 1, 1, t), 0.0);
  for (auto [a1, a2] : std::vector<std::pair<i64, i64>>{{1, 1}, {3, 7}, {-2, 5}}) {
    double ref = 0;
    for (u64 q = 1; q <= 100; ++q) {
      if (oracle::gcd(a1, static_cast<i64>(q)) != 1 || oracle::gcd(a2, static_cast<i64>(q)) != 1) continue;
      const i64 a = oracle::mod(a1 * oracle::inverse_scan(a2, static_cast<i64>(q)), static_cast<i64>(q));
      u64 in_class = 0, coprime = 0;
      for (u64 n = 1; n <= 10000; ++n) {
        if (oracle::largest_prime_factor(n) > 30) continue;
        in_class += oracle::mod(static_cast<i64>(n) - a, static_cast<i64>(q)) == 0;
        coprime += oracle::gcd(static_cast<i64>(n), static_cast<i64>(q)) == 1;
      }
      ref += std::abs(static_cast<double>(in_class) - static_cast<double>(coprime) / static_cast<double>(oracle::phi(q)));
    }
    const double mine = discrepancy_sum(1e4, 30, a1, a2, 100, t);
    EXPECT_GE(mine, 0.0);
    EXPECT_NEAR(mine, ref, 1e-9 * std::max(1.0, ref)) << a1 << "/" << a2;
  }
}

TEST(Discrepancy, RowsSkipNonCoprimeModuliAndIgnoreThreadCount) {
  const auto& t = table_1e5();
  const auto rows1 = discrepancy_rows(1e5, 30, 2, 3, 316, t, 1);
  const auto rows8 = discrepancy_rows(1e5, 30, 2, 3, 316, t, 8);
  u64 expect = 0;
  for (u64 q = 1; q <= 316; ++q) expect += q % 2 != 0 && q % 3 != 0;
  ASSERT_EQ(rows1.size(), expect);
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    ASSERT_EQ(rows1[i].q, rows8[i].q);
    ASSERT_EQ(rows1[i].psi_ap, rows8[i].psi_ap);
    ASSERT_EQ(rows1[i].discrepancy, rows8[i].discrepancy);
  }
}

TEST(Discrepancy, UnitWeightsReproduceUnweightedSum) {
  const auto& t = table_1e5();
  const double plain = discrepancy_sum(2e4, 25, 1, 1, 150, t);
  const double weighted = discrepancy_sum_weighted(2e4, 25, 1, 1, 150, t, [](u64) { return std::complex<double>{1.0, 0.0}; });
  EXPECT_NEAR(plain, weighted, 1e-9 * plain);
  // A multiplicative weight: the Liouville function.
  const double lambda = discrepancy_sum_weighted(2e4, 25, 1, 1, 150, t, [](u64 n) {
    int omega = 0;
    for (u64 p = 2; p * p <= n; ++p)
      while (n % p == 0) {
        n /= p;
        ++omega;
      }
    if (n > 1) ++omega;
    return std::complex<double>{omega % 2 == 0 ? 1.0 : -1.0, 0.0};
  });
  EXPECT_GE(lambda, 0.0);
}

TEST(Dickman, Examples) {
  EXPECT_EQ(dickman_rho(0.5), 1.0);
  EXPECT_EQ(dickman_rho(1.0), 1.0);
  EXPECT_NEAR(dickman_rho(2.0), 1.0 - std::log(2.0), 1e-6);
  // rho(3) = rho(2) - int_2^3 (1 - log(t - 1)) / t dt.
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double t) { return (1.0 - std::log(t - 1.0)) / t; }, 2.0, 3.0, 10, 1e-14);
  EXPECT_NEAR(dickman_rho(3.0), 1.0 - std::log(2.0) - tail, 1e-6);
  EXPECT_NEAR(dickman_rho(3.0), 0.0486084, 1e-6);
  EXPECT_THROW(dickman_rho(-1), Error);
  EXPECT_THROW(dickman_rho(21), Error);
}

TEST(Dickman, ClosedFormOnOneToTwoAndGridHalving) {
  const DickmanTable coarse(1e-4, 10), fine(5e-5, 10);
  for (int i = 0; i <= 1000; ++i) {
    const double u = 1.0 + i * 1e-3;
    ASSERT_NEAR(coarse(u), 1.0 - std::log(u), 1e-6);
  }
  for (int i = 0; i <= 900; ++i) {
    const double u = 1.0 + i * 0.01;
    ASSERT_NEAR(coarse(u), fine(u), 1e-6) << u;
  }
}

TEST(Dickman, DecreasingAndPositive) {
  double prev = 1.0;
  for (int i = 1; i <= 190; ++i) {
    const double u = 1.0 + i * 0.1;
    const double r = dickman_rho(u);
    ASSERT_GT(r, 0.0);
    ASSERT_LT(r, prev);
    prev = r;
  }
}

TEST(Dickman, TailKeepsRelativeAccuracy) {
  EXPECT_NEAR(dickman_rho(10.0) / 2.77017183772596e-11, 1.0, 1e-6);
  EXPECT_NEAR(dickman_rho(20.0) / 2.461782e-29, 1.0, 1e-5);
}

TEST(SmoothStats, Fields) {
  const auto s = smooth_stats(1e6, 1e3);
  EXPECT_NEAR(s.u, 2.0, 1e-12);
  const double l = std::log(3.0);
  EXPECT_NEAR(s.H, std::exp(2.0 / (l * l)), 1e-12);
  EXPECT_THROW(smooth_stats(1, 2), Error);
}

TEST(FactorSmooth, Examples) {
  const auto f = factor_smooth(1024, 10, 10);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(*f, (SmoothFactorization{16, 16, 4}));
  EXPECT_FALSE(factor_smooth(9, 10, 2).has_value());
  EXPECT_FALSE(factor_smooth(10, 10, 2).has_value());
  EXPECT_EQ(factor_smooth(1024, 10, 10, table_1e5()), f);
}

TEST(FactorSmooth, RandomSmoothNumbersSatisfyTheBrackets) {
  gen::Engine g(17);
  const auto& t = table_1e5();
  int produced = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const u64 n = static_cast<u64>(gen::integer(g, 2, 100000));
    if (t.lpf(n) > 50) continue;
    const double L0 = gen::real(g, 1, 60), M0 = gen::real(g, 1, 60);
    const auto split = factor_smooth(n, L0, M0, t);
    ASSERT_EQ(split, factor_smooth(n, L0, M0));
    if (!split) continue;
    ++produced;
    const auto smallest = [](u64 v) { return factorize(v).smallest_prime(); };
    const auto largest = [](u64 v) { return factorize(v).largest_prime(); };
    const auto [l, m, rest] = *split;
    ASSERT_EQ(l * m * rest, n);
    ASSERT_GT(static_cast<double>(l), L0);
    ASSERT_LE(static_cast<double>(l), L0 * static_cast<double>(smallest(l)));
    ASSERT_GT(static_cast<double>(m), M0);
    ASSERT_LE(static_cast<double>(m), M0 * static_cast<double>(smallest(m)));
    ASSERT_LE(largest(m), smallest(l));
    if (rest > 1) {
      ASSERT_LE(largest(rest), smallest(m));
    }
  }
  EXPECT_GT(produced, 100);
}
