// friable: sieve caches, discrepancy scans, the exponent calculus, the
// invariant batteries, and passthroughs to the Kloosterman and dispersion
// evaluators.
//
// Exit status: 0 ok, 1 a check failed, 2 usage error, 3 IO or format error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "friable/friable.hpp"
#include "verify_suites.hpp"

namespace {

using namespace friable;

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct SharedFlags {
  double x = 0, y = 0;
  i64 a1 = 1, a2 = 1;
  u64 qmax = 1;
  std::string cutoffs;
  unsigned threads = 1;
  std::string cache;
  std::string config;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FormatError:
    case ErrorCode::IoError:
    case ErrorCode::TableTooSmall:
      return kExitIo;
    case ErrorCode::InvariantViolation:
      return kExitCheck;
    default:
      return kExitUsage;
  }
}

// Fills every flag the user left unset from the config file.
void apply_config(CLI::App& app, SharedFlags& f) {
  if (f.config.empty()) return;
  const auto kv = parse_config_file(f.config);
  auto unset = [&](const std::string& name) { return app.get_option("--" + name)->count() == 0; };
  for (const auto& [key, value] : kv) {
    if (key == "x" && unset("x")) f.x = parse_double(value);
    else if (key == "y" && unset("y")) f.y = parse_double(value);
    else if (key == "a1" && unset("a1")) f.a1 = static_cast<i64>(parse_double(value));
    else if (key == "a2" && unset("a2")) f.a2 = static_cast<i64>(parse_double(value));
    else if (key == "qmax" && unset("qmax")) f.qmax = static_cast<u64>(parse_double(value));
    else if (key == "cutoffs" && unset("cutoffs")) f.cutoffs = value;
    else if (key == "threads" && unset("threads")) f.threads = static_cast<unsigned>(parse_double(value));
    else if (key == "cache" && unset("cache")) f.cache = value;
    else if (key != "x" && key != "y" && key != "a1" && key != "a2" && key != "qmax" && key != "cutoffs" &&
             key != "threads" && key != "cache") {
      throw Error(ErrorCode::FormatError, f.config + ": unknown key '" + key + "'");
    }
  }
}

int cmd_sieve(const SharedFlags& f) {
  if (f.cache.empty()) throw Error(ErrorCode::OutOfRange, "sieve: --cache is required");
  if (!(f.x >= 1)) throw Error(ErrorCode::OutOfRange, "sieve: --x must be >= 1");
  const u64 x_max = static_cast<u64>(f.x);
  if (std::filesystem::exists(f.cache)) {
    const auto table = load_sieve_cache(f.cache);
    if (table.x_max() == x_max) {
      std::cout << f.cache << ": validated, skipped\n";
      return kExitOk;
    }
  }
  const auto table = SmoothTable::build(x_max, kHardTableCap);
  write_sieve_cache(f.cache, table);
  std::cout << f.cache << ": wrote " << sieve_cache_size(x_max) << " bytes (x_max=" << x_max << ")\n";
  return kExitOk;
}

int cmd_scan(const SharedFlags& f) {
  ScanConfig cfg;
  cfg.x = f.x;
  cfg.y = f.y;
  cfg.a1 = f.a1;
  cfg.a2 = f.a2;
  cfg.q_max = f.qmax;
  cfg.cutoffs = parse_cutoffs(f.cutoffs);
  cfg.threads = f.threads;
  if (!f.cache.empty()) cfg.cache_path = f.cache;
  cfg.validate();
  const SmoothTable table = cfg.cache_path ? load_sieve_cache(*cfg.cache_path) : SmoothTable::build(static_cast<u64>(cfg.x), kHardTableCap);
  write_scan_csv(std::cout, run_scan(cfg, table));
  return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& fault) {
  if (!fault.empty()) {
    if (fault != "kloosterman-sign") throw Error(ErrorCode::OutOfRange, "unknown fault '" + fault + "'");
    kloosterman_fault_injection().store(true);
  }
  std::vector<std::string> names;
  if (suite == "all") names = verify::suite_names();
  else names.push_back(suite);
  int failed = 0, total = 0;
  for (const auto& name : names) {
    const auto battery = verify::run_suite(name);
    for (const auto& check : battery) {
      ++total;
      failed += !check.pass;
      std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << name << ": " << check.name;
      if (!check.pass && !check.detail.empty()) std::cout << " (" << check.detail << ")";
      std::cout << '\n';
    }
  }
  std::cout << total - failed << "/" << total << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheck;
}

// Exact decimals print with '=', everything else rounded to five places.
std::string describe_rational(const Rational& r) {
  i64 d = r.den();
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d == 1) return r.str() + " = " + format_number(r.to_double());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", r.to_double());
  return r.str() + " ≈ " + buf;
}

int cmd_exponent(const std::string& theta) {
  std::cout << describe_rational(theta_alpha(parse_rational(theta))) << '\n';
  return kExitOk;
}

int cmd_kloosterman(i64 m, i64 n, u64 c) {
  const KloostermanQuery q{m, n, c};
  const double value = kloosterman_fast(q);
  const auto weil = weil_bound_check(q);
  std::cout << "m=" << m << "\nn=" << n << "\nc=" << c << "\nvalue=" << format_number(value)
            << "\nweil_bound=" << format_number(weil.bound) << "\nweil_holds=" << (weil.holds ? "true" : "false") << '\n';
  if (m % static_cast<i64>(c) == 0) std::cout << "ramanujan=" << ramanujan_sum(n, c) << '\n';
  return weil.holds ? kExitOk : kExitCheck;
}

struct DispersionFlags {
  double M = 2, N = 2, L = 2, R = 3, E = 2;
  u64 D = 1;
  bool conditions = false;
  bool proof_offsets = false;
  std::string theta = "7/32";
  double eps = 0.01;
};

void print_complex(const std::string& key, cplx v) {
  std::cout << key << ".re=" << format_number(v.real()) << '\n' << key << ".im=" << format_number(v.imag()) << '\n';
}

int cmd_dispersion_conditions(const SharedFlags& f, const DispersionFlags& d) {
  const ThetaParameter theta(parse_rational(d.theta));
  const double x = f.x > 0 ? f.x : 1e6;
  const auto t = d.proof_offsets ? proof_parameters(x, theta, d.eps) : optimal_parameters(x, theta, d.eps);
  const auto rep = condition_check(x, t.M, t.N, t.L, t.R, theta.to_double(), d.eps);
  std::cout << "x=" << format_number(x) << "\ntheta=" << theta.value().str() << "\neps=" << format_number(d.eps)
            << "\nalpha=" << t.alpha.str() << "\nR=" << format_number(t.R) << "\nM=" << format_number(t.M)
            << "\nN=" << format_number(t.N) << "\nL=" << format_number(t.L) << '\n';
  for (std::size_t i = 0; i < rep.items.size(); ++i) {
    const auto& it = rep.items[i];
    std::cout << "condition." << i + 1 << "=" << it.name << "\ncondition." << i + 1 << ".slack=" << format_number(it.slack)
              << "\ncondition." << i + 1 << ".holds=" << (it.holds ? "true" : "false") << '\n';
  }
  std::cout << "all_hold=" << (rep.all_hold ? "true" : "false") << '\n';
  return rep.all_hold ? kExitOk : kExitCheck;
}

int cmd_dispersion(const SharedFlags& f, const DispersionFlags& d) {
  if (d.conditions) return cmd_dispersion_conditions(f, d);
  DispersionConfig cfg;
  cfg.M = d.M;
  cfg.N = d.N;
  cfg.L = d.L;
  cfg.R = d.R;
  cfg.E = d.E;
  cfg.D = d.D;
  cfg.a1 = f.a1;
  cfg.a2 = f.a2;
  cfg.x = f.x > 0 ? f.x : d.M * d.N * d.L;
  cfg.threads = f.threads;
  cfg.alpha = IntSequence::ones(d.M);
  cfg.beta = IntSequence::ones(d.N);
  cfg.gamma = IntSequence::ones(d.L);
  const auto res = dispersion_sums(cfg);
  print_complex("S1", res.S1);
  print_complex("S2", res.S2);
  print_complex("S3", res.S3);
  print_complex("X1", res.X1);
  print_complex("X2", res.X2);
  print_complex("X3", res.X3);
  std::cout << "phi_hat_zero=" << format_number(res.phi_hat_zero) << "\ncombination=" << format_number(res.combination)
            << "\ndelta=" << format_number(delta_lhs(cfg)) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friable-number equidistribution toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  SharedFlags f;
  app.add_option("--x", f.x, "Range x (x_max for sieve)");
  app.add_option("--y", f.y, "Smoothness bound y");
  app.add_option("--a1", f.a1, "Residue numerator a1");
  app.add_option("--a2", f.a2, "Residue denominator a2");
  app.add_option("--qmax", f.qmax, "Largest modulus scanned");
  app.add_option("--cutoffs", f.cutoffs, "Comma-separated cutoff exponents, decimals or p/q");
  app.add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--cache", f.cache, "Sieve cache path");
  app.add_option("--config", f.config, "key=value config file; flags take precedence");

  auto* sieve = app.add_subcommand("sieve", "Build or validate a largest-prime-factor cache");
  auto* scan = app.add_subcommand("scan", "Discrepancy scan as CSV on stdout");

  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant battery");
  std::string suite;
  std::string fault;
  verify_cmd->add_option("suite", suite, "arith, characters, expsums, smooth, poisson, dispersion or all")->required();
  verify_cmd->add_option("--inject-fault", fault)->group("");

  auto* exponent = app.add_subcommand("exponent", "alpha(theta) = (5 - 4 theta) / (8 - 6 theta)");
  std::string theta;
  exponent->add_option("theta", theta, "theta as p/q or an integer")->required();

  auto* kloost = app.add_subcommand("kloosterman", "Evaluate S(m, n; c)");
  i64 km = 0, kn = 0;
  u64 kc = 1;
  kloost->add_option("m", km)->required();
  kloost->add_option("n", kn)->required();
  kloost->add_option("c", kc)->required()->check(CLI::Range(u64{1}, kFastModulusLimit - 1));

  auto* disp = app.add_subcommand("dispersion", "Dispersion sums for all-ones sequences, or the condition system");
  DispersionFlags d;
  disp->add_option("--M", d.M);
  disp->add_option("--N", d.N);
  disp->add_option("--L", d.L);
  disp->add_option("--R", d.R);
  disp->add_option("--E", d.E);
  disp->add_option("--D", d.D);
  disp->add_flag("--conditions", d.conditions, "Check the parameter conditions instead");
  disp->add_flag("--proof-offsets", d.proof_offsets, "Use the offset tuple rather than the optimal one");
  disp->add_option("--theta", d.theta);
  disp->add_option("--eps", d.eps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    apply_config(app, f);
    if (*sieve) return cmd_sieve(f);
    if (*scan) return cmd_scan(f);
    if (*verify_cmd) return cmd_verify(suite, fault);
    if (*exponent) return cmd_exponent(theta);
    if (*kloost) return cmd_kloosterman(km, kn, kc);
    if (*disp) return cmd_dispersion(f, d);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
