#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "friable/scan.hpp"
#include "friable/sieve_cache.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace friable;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("friable_scan_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

const SmoothTable& table_1e5() {
  static const SmoothTable t = SmoothTable::build(100000);
  return t;
}

ScanConfig base_config() {
  ScanConfig cfg;
  cfg.x = 1e5;
  cfg.y = 30;
  cfg.q_max = 316;
  cfg.cutoffs = parse_cutoffs("0.3,0.4,0.5");
  return cfg;
}

}  // namespace

TEST(Parsing, CutoffsKeepTokens) {
  const auto c = parse_cutoffs("0.5, 66/107,0.625");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].token, "0.5");
  EXPECT_EQ(c[1].token, "66/107");
  EXPECT_DOUBLE_EQ(c[1].value, 66.0 / 107.0);
  EXPECT_EQ(c[2].value, 0.625);
  EXPECT_TRUE(parse_cutoffs("").empty());
  EXPECT_THROW(parse_cutoffs("0.5,,0.6"), Error);
  EXPECT_THROW(parse_cutoffs("0.5,abc"), Error);
  EXPECT_THROW(parse_cutoffs("1/0"), Error);
}

TEST(Parsing, NumbersAndRationals) {
  EXPECT_EQ(parse_double("1e5"), 1e5);
  EXPECT_THROW(parse_double("12x"), Error);
  EXPECT_THROW(parse_double(""), Error);
  EXPECT_EQ(parse_rational("7/32"), Rational(7, 32));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("10/16"), Rational(5, 8));
  EXPECT_THROW(parse_rational("7/"), Error);
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e5), "100000");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333333");
}

TEST(Parsing, ConfigFile) {
  const auto path = scratch("scan.conf");
  {
    std::ofstream out(path);
    out << "# scan settings\n x = 1e5 \ny=30  # smoothness\n\nqmax=100\n";
  }
  const auto kv = parse_config_file(path.string());
  EXPECT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("x"), "1e5");
  EXPECT_EQ(kv.at("y"), "30");
  EXPECT_EQ(kv.at("qmax"), "100");
  {
    std::ofstream out(path);
    out << "x 1e5\n";
  }
  try {
    parse_config_file(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FormatError);
  }
  try {
    parse_config_file((path.parent_path() / "missing.conf").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Cutoffs, ModulusRoundsExactPowers) {
  EXPECT_EQ(cutoff_modulus(1e6, 0.5), 1000u);
  EXPECT_EQ(cutoff_modulus(1e5, 0.5), 316u);
  EXPECT_EQ(cutoff_modulus(1e6, 1.0 / 3.0), 100u);
  EXPECT_EQ(cutoff_modulus(1e6, 66.0 / 107.0), static_cast<u64>(std::floor(std::pow(1e6, 66.0 / 107.0))));
}

TEST(Scan, ValidationErrors) {
  auto cfg = base_config();
  cfg.y = 2;
  EXPECT_THROW(run_scan(cfg, table_1e5()), Error);
  cfg = base_config();
  cfg.cutoffs = parse_cutoffs("0.5,0.4");
  EXPECT_THROW(run_scan(cfg, table_1e5()), Error);
  cfg = base_config();
  cfg.cutoffs = parse_cutoffs("1.5");
  EXPECT_THROW(run_scan(cfg, table_1e5()), Error);
  cfg = base_config();
  cfg.x = 2e5;
  try {
    run_scan(cfg, table_1e5());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TableTooSmall);
  }
}

TEST(Scan, RowCountAggregatesAndReconciliation) {
  for (auto [a1, a2] : std::vector<std::pair<i64, i64>>{{1, 1}, {2, 3}, {-5, 7}}) {
    auto cfg = base_config();
    cfg.a1 = a1;
    cfg.a2 = a2;
    const auto rep = run_scan(cfg, table_1e5());
    u64 expect = 0;
    for (i64 q = 1; q <= 316; ++q) expect += oracle::gcd(q, a1 * a2) == 1;
    ASSERT_EQ(rep.rows.size(), expect);
    ASSERT_EQ(rep.psi_total, oracle::psi(100000, 30));
    ASSERT_EQ(rep.aggregates.size(), 3u);
    double prev = 0;
    for (const auto& agg : rep.aggregates) {
      EXPECT_GE(agg.sum_abs, prev);
      prev = agg.sum_abs;
      double recon = 0;
      for (const auto& row : rep.rows)
        if (row.q <= agg.Q) recon += std::abs(row.discrepancy);
      EXPECT_EQ(agg.sum_abs, recon) << agg.exponent;
      EXPECT_EQ(agg.ratio_to_psi, recon / static_cast<double>(rep.psi_total));
    }
    for (const auto& row : rep.rows) {
      if (row.q > 40) break;
      const i64 q = static_cast<i64>(row.q);
      const i64 a = oracle::mod(a1 * oracle::inverse_scan(oracle::mod(a2, q), q), q);
      ASSERT_EQ(row.psi_ap, oracle::psi_ap(100000, 30, a, row.q)) << row.q;
    }
  }
}

TEST(Scan, UnitModulusAndQuotedRational) {
  auto cfg = base_config();
  cfg.q_max = 1;
  cfg.cutoffs.clear();
  const auto rep = run_scan(cfg, table_1e5());
  ASSERT_EQ(rep.aggregates.size(), 1u);
  EXPECT_EQ(rep.aggregates[0].sum_abs, 0.0);

  // x^0.625 = 1333.5, so every cutoff sits below q_max.
  cfg.q_max = 2000;
  cfg.cutoffs = parse_cutoffs("0.5,66/107,0.625");
  cfg.threads = 2;
  const SmoothTable fresh = SmoothTable::build(100000);
  const auto rep3 = run_scan(cfg, fresh);
  ASSERT_EQ(rep3.aggregates.size(), 3u);
  EXPECT_EQ(rep3.aggregates[1].exponent, "66/107");
  EXPECT_EQ(rep3.aggregates[2].Q, 1333u);
  std::ostringstream csv;
  write_scan_csv(csv, rep3);
  EXPECT_NE(csv.str().find("\n66/107,"), std::string::npos);
  EXPECT_EQ(csv.str().rfind("q,psi_ap,expected,discrepancy\n", 0), 0u);
  EXPECT_NE(csv.str().find("\n\ncutoff_exponent,Q,sum_abs_discrepancy,ratio_to_psi\n"), std::string::npos);
}

TEST(Scan, CsvIdenticalAcrossThreadCounts) {
  auto cfg = base_config();
  std::string first;
  for (unsigned t : {1u, 2u, 8u}) {
    cfg.threads = t;
    std::ostringstream csv;
    write_scan_csv(csv, run_scan(cfg, table_1e5()));
    if (first.empty()) {
      first = csv.str();
    } else {
      EXPECT_EQ(csv.str(), first) << t << " threads";
    }
  }
}

TEST(SieveCache, RoundTripAgreesOnRandomQueries) {
  const auto path = scratch("table.smtb");
  const SmoothTable built = SmoothTable::build(100000);
  write_sieve_cache(path, built);
  EXPECT_EQ(fs::file_size(path), sieve_cache_size(100000));
  EXPECT_EQ(fs::file_size(path), 4u * 100000u + 13u);
  const SmoothTable loaded = load_sieve_cache(path);
  ASSERT_EQ(loaded.x_max(), built.x_max());
  gen::Engine g(404);
  for (int i = 0; i < 100; ++i) {
    const double x = gen::real(g, 1, 1e5), y = gen::real(g, 2, 1e3);
    ASSERT_EQ(psi(x, y, loaded), psi(x, y, built)) << x << " " << y;
  }
  EXPECT_TRUE(std::equal(loaded.values().begin(), loaded.values().end(), built.values().begin(), built.values().end()));
}

TEST(SieveCache, CorruptionIsDetected) {
  const auto path = scratch("bad.smtb");
  write_sieve_cache(path, SmoothTable::build(5000));
  auto expect_format_error = [&](const char* what) {
    try {
      load_sieve_cache(path);
      ADD_FAILURE() << what;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::FormatError) << what;
    }
  };
  auto patch = [&](std::streamoff at, char byte) {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(at);
    f.put(byte);
  };
  patch(0, 'X');
  expect_format_error("magic");
  write_sieve_cache(path, SmoothTable::build(5000));
  patch(4, 0x07);
  expect_format_error("version");
  write_sieve_cache(path, SmoothTable::build(5000));
  fs::resize_file(path, fs::file_size(path) - 4);
  expect_format_error("length");
  try {
    load_sieve_cache(path.parent_path() / "absent.smtb");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}
