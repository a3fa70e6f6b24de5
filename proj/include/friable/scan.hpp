#pragma once

// Discrepancy scans across moduli cutoffs and their CSV serialization.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "friable/arith.hpp"
#include "friable/error.hpp"
#include "friable/smooth.hpp"

namespace friable {

/// A cutoff exponent as typed ("0.5", "66/107") and its value.
struct Cutoff {
  std::string token;
  double value = 0;
};

struct ScanConfig {
  double x = 0, y = 0;
  i64 a1 = 1, a2 = 1;
  u64 q_max = 1;
  std::vector<Cutoff> cutoffs;
  unsigned threads = 1;
  std::optional<std::string> cache_path;

  void validate() const {
    if (!(y > 2) || !(y <= x)) throw Error(ErrorCode::OutOfRange, "scan: need 2 < y <= x");
    if (q_max < 1 || static_cast<double>(q_max) > x) throw Error(ErrorCode::OutOfRange, "scan: need 1 <= qmax <= x");
    if (a1 == 0 || a2 == 0) throw Error(ErrorCode::OutOfRange, "scan: a1, a2 nonzero");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
      if (!(cutoffs[i].value > 0 && cutoffs[i].value < 1)) throw Error(ErrorCode::OutOfRange, "scan: cutoff exponents lie in (0, 1)");
      if (i > 0 && !(cutoffs[i].value > cutoffs[i - 1].value)) {
        throw Error(ErrorCode::OutOfRange, "scan: cutoff exponents must be strictly increasing");
      }
    }
  }
};

struct ScanAggregate {
  std::string exponent;  // echoed token
  u64 Q = 0;
  double sum_abs = 0;
  double ratio_to_psi = 0;
};

struct ScanReport {
  std::vector<DiscrepancyRow> rows;
  std::vector<ScanAggregate> aggregates;
  u64 psi_total = 0;
};

/// Shortest round-trip-free rendering with 15 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw Error(ErrorCode::FormatError, "not a number: '" + s + "'");
  return v;
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    i64 v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw Error(ErrorCode::FormatError, "not a rational: '" + s + "'");
    }
    return v;
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const i64 den = parse_int(s.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::FormatError, "zero denominator in '" + s + "'");
  return Rational(parse_int(s.substr(0, slash)), den);
}

/// Comma-separated exponents; each is a decimal or p/q.
inline std::vector<Cutoff> parse_cutoffs(const std::string& list) {
  std::vector<Cutoff> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string::npos) end = list.size();
    std::string tok = list.substr(start, end - start);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (tok.empty()) {
      if (list.empty()) break;
      throw Error(ErrorCode::FormatError, "empty cutoff in '" + list + "'");
    }
    const double v = tok.find('/') != std::string::npos ? parse_rational(tok).to_double() : parse_double(tok);
    out.push_back({tok, v});
    start = end + 1;
  }
  return out;
}

/// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::FormatError, path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

/// floor(x^e), guarded against x^e landing a hair below an integer.
inline u64 cutoff_modulus(double x, double e) {
  const double v = std::pow(x, e);
  const double r = std::round(v);
  return static_cast<u64>(std::abs(v - r) <= 1e-9 * std::max(1.0, r) ? r : std::floor(v));
}

inline ScanReport run_scan(const ScanConfig& cfg, const SmoothTable& table) {
  cfg.validate();
  table.require_covers(cfg.x);
  ScanReport rep;
  rep.rows = discrepancy_rows(cfg.x, cfg.y, cfg.a1, cfg.a2, cfg.q_max, table, cfg.threads);
  rep.psi_total = psi(cfg.x, cfg.y, table);
  auto aggregate = [&](std::string token, u64 Q) {
    ScanAggregate agg{std::move(token), Q, 0.0, 0.0};
    for (const auto& row : rep.rows) {
      if (row.q > Q) break;
      agg.sum_abs += std::abs(row.discrepancy);
    }
    agg.ratio_to_psi = rep.psi_total == 0 ? 0.0 : agg.sum_abs / static_cast<double>(rep.psi_total);
    rep.aggregates.push_back(std::move(agg));
  };
  if (cfg.cutoffs.empty()) {
    aggregate(format_number(cfg.q_max <= 1 ? 0.0 : std::log(static_cast<double>(cfg.q_max)) / std::log(cfg.x)), cfg.q_max);
  }
  for (const auto& c : cfg.cutoffs) aggregate(c.token, std::min(cfg.q_max, cutoff_modulus(cfg.x, c.value)));
  return rep;
}

inline void write_scan_csv(std::ostream& out, const ScanReport& rep) {
  out << "q,psi_ap,expected,discrepancy\n";
  for (const auto& row : rep.rows) {
    out << row.q << ',' << row.psi_ap << ',' << format_number(row.expected) << ',' << format_number(row.discrepancy) << '\n';
  }
  out << '\n' << "cutoff_exponent,Q,sum_abs_discrepancy,ratio_to_psi\n";
  for (const auto& agg : rep.aggregates) {
    out << agg.exponent << ',' << agg.Q << ',' << format_number(agg.sum_abs) << ',' << format_number(agg.ratio_to_psi) << '\n';
  }
}

}  // namespace friable
