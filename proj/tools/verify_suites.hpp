#pragma once

// Invariant batteries behind `friable verify`. Each check cross-examines two
// routes through the library (sieve vs trial division, CRT vs direct loop,
// closed form vs quadrature) at sizes that finish in seconds.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "friable/friable.hpp"

namespace friable::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

using Battery = std::vector<CheckResult>;

namespace detail {

inline CheckResult run(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    return {name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace detail

inline Battery arith_suite() {
  Battery out;
  out.push_back(detail::run("mod_inverse against residue scan, m <= 200", [] {
    for (i64 m = 2; m <= 200; ++m)
      for (i64 a = 1; a < m; ++a) {
        if (std::gcd(a, m) != 1) continue;
        const i64 inv = mod_inverse(a, m);
        if (mul_mod(a, inv, m) != 1) return "a=" + std::to_string(a) + " m=" + std::to_string(m);
      }
    return std::string();
  }));
  out.push_back(detail::run("Bezout reciprocity for coprime a, b <= 60", [] {
    for (i64 a = 1; a <= 60; ++a)
      for (i64 b = 1; b <= 60; ++b)
        if (std::gcd(a, b) == 1) bezout_reciprocity(a, b);
    return std::string();
  }));
  out.push_back(detail::run("factorize reconstructs n <= 20000", [] {
    for (u64 n = 1; n <= 20000; ++n) {
      const auto f = factorize(n);
      u64 prod = 1;
      for (const auto& pp : f.factors)
        for (unsigned k = 0; k < pp.exponent; ++k) prod *= pp.prime;
      if (prod != n) return "n=" + std::to_string(n);
    }
    return std::string();
  }));
  out.push_back(detail::run("sum_{d|n} mu(d) = [n=1] and sum_{d|n} phi(d) = n", [] {
    for (u64 n = 1; n <= 5000; ++n) {
      i64 mu_sum = 0;
      u64 phi_sum = 0;
      for (u64 d : divisors(n)) {
        mu_sum += mobius(d);
        phi_sum += euler_phi(d);
      }
      if (mu_sum != (n == 1 ? 1 : 0) || phi_sum != n) return "n=" + std::to_string(n);
    }
    return std::string();
  }));
  out.push_back(detail::run("phi_table matches euler_phi up to 10^4", [] {
    const auto t = phi_table(10000);
    for (u64 n = 1; n <= 10000; ++n)
      if (t[n] != euler_phi(n)) return "n=" + std::to_string(n);
    return std::string();
  }));
  return out;
}

inline Battery characters_suite() {
  Battery out;
  CharacterCache cache;
  out.push_back(detail::run("orthogonality of characters, q <= 40", [&] {
    for (u64 q = 1; q <= 40; ++q) {
      const auto& chars = cache.get(q)->all;
      for (std::size_t i = 0; i < chars.size(); ++i)
        for (std::size_t j = i; j < chars.size(); ++j) {
          cplx s{};
          for (u64 n = 0; n < q; ++n) s += chars[i](static_cast<i64>(n)) * std::conj(chars[j](static_cast<i64>(n)));
          const double expect = i == j ? static_cast<double>(euler_phi(q)) : 0.0;
          if (std::abs(s - expect) > 1e-9) return "q=" + std::to_string(q);
        }
    }
    return std::string();
  }));
  out.push_back(detail::run("sum_{d | q} #primitive(d) = phi(q), q <= 200", [&] {
    for (u64 q = 1; q <= 200; ++q) {
      u64 total = 0;
      for (u64 d : divisors(q)) total += cache.get(d)->primitive.size();
      if (total != euler_phi(q)) return "q=" + std::to_string(q);
    }
    return std::string();
  }));
  out.push_back(detail::run("E_D direct form equals tail form, q <= 30, D <= 6", [&] {
    for (u64 q = 1; q <= 30; ++q)
      for (u64 D = 1; D <= 6; ++D)
        for (i64 k = 0; k < static_cast<i64>(q); ++k)
          if (std::abs(error_kernel_E_D(k, q, D, cache) - error_kernel_tail(k, q, D, cache)) > 1e-9) {
            return "q=" + std::to_string(q) + " D=" + std::to_string(D);
          }
    return std::string();
  }));
  out.push_back(detail::run("Gauss sum bound, q <= 40, all a", [&] {
    for (u64 q = 1; q <= 40; ++q)
      for (const auto& chi : cache.get(q)->all)
        for (i64 a = 0; a < static_cast<i64>(q); ++a)
          if (!gauss_sum(chi, a).holds) return "q=" + std::to_string(q) + " a=" + std::to_string(a);
    return std::string();
  }));
  out.push_back(detail::run("large sieve on 30 random instances", [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int t = 0; t < 30; ++t) {
      const u64 Q = 1 + rng() % 20;
      const u64 N = 1 + rng() % 40;
      std::vector<cplx> a(N);
      for (auto& v : a) v = {unit(rng), unit(rng)};
      if (!large_sieve_check(Q, static_cast<i64>(rng() % 50), a, cache).holds) return "trial " + std::to_string(t);
    }
    return std::string();
  }));
  return out;
}

inline Battery expsums_suite() {
  Battery out;
  out.push_back(detail::run("Weil bound and realness, c <= 60, all m, n", [] {
    for (u64 c = 1; c <= 60; ++c)
      for (i64 m = 0; m < static_cast<i64>(c); ++m) {
        const auto row = kloosterman_row(m, c);
        for (i64 n = 0; n < static_cast<i64>(c); ++n) {
          if (std::abs(row[n].imag()) >= 1e-6) return "imaginary part at c=" + std::to_string(c);
          if (std::abs(row[n].real()) > weil_bound(m, n, c) + 1e-9) return "Weil bound at c=" + std::to_string(c);
        }
      }
    return std::string();
  }));
  out.push_back(detail::run("CRT evaluation matches direct loop, c <= 300", [] {
    std::mt19937_64 rng(11);
    for (u64 c = 1; c <= 300; ++c)
      for (int t = 0; t < 10; ++t) {
        const KloostermanQuery q{static_cast<i64>(rng() % 1000) - 500, static_cast<i64>(rng() % 1000) - 500, c};
        if (std::abs(kloosterman_fast(q) - kloosterman_direct(q)) > 1e-6) return "c=" + std::to_string(c);
      }
    return std::string();
  }));
  out.push_back(detail::run("S(m, n; c) = S(n, m; c)", [] {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 500; ++t) {
      const u64 c = 1 + rng() % 400;
      const i64 m = static_cast<i64>(rng() % c), n = static_cast<i64>(rng() % c);
      if (std::abs(kloosterman_fast({m, n, c}) - kloosterman_fast({n, m, c})) > 1e-6) return "c=" + std::to_string(c);
    }
    return std::string();
  }));
  out.push_back(detail::run("Ramanujan formula against direct loop, c <= 150", [] {
    for (u64 c = 1; c <= 150; ++c)
      for (i64 n = -static_cast<i64>(c); n <= static_cast<i64>(c); ++n) ramanujan_sum_checked(n, c);
    return std::string();
  }));
  out.push_back(detail::run("alpha(theta) decreasing with endpoints 5/8 and 66/107", [] {
    if (theta_alpha(Rational(0)) != Rational(5, 8)) return std::string("alpha(0)");
    if (theta_alpha(Rational(7, 32)) != Rational(66, 107)) return std::string("alpha(7/32)");
    Rational prev = theta_alpha(Rational(0));
    for (i64 k = 1; k <= 70; ++k) {
      const Rational a = theta_alpha(Rational(k, 320));
      if (!(a < prev)) return "theta=" + std::to_string(k) + "/320";
      prev = a;
    }
    return std::string();
  }));
  out.push_back(detail::run("DI multilinear sum within its trivial bound", [] {
    const auto g = make_phi();
    for (int t = 0; t < 4; ++t) {
      const auto res = di_multilinear_sum(
          DiRanges{2, 2, 2, 2, 4}, [&](i64 m, i64 r, i64 s) { return cplx{std::sin(double(m * 7 + r * 3 + s + t)), 0.0}; }, g);
      if (std::abs(res.value) > res.trivial_bound + 1e-9) return "trial " + std::to_string(t);
    }
    return std::string();
  }));
  return out;
}

inline Battery smooth_suite() {
  Battery out;
  const auto table = SmoothTable::build(20000);
  out.push_back(detail::run("sieve largest prime factor equals trial division, n <= 20000", [&] {
    for (u64 n = 1; n <= 20000; ++n)
      if (table.lpf(n) != factorize(n).largest_prime()) return "n=" + std::to_string(n);
    return std::string();
  }));
  out.push_back(detail::run("psi from the table equals direct counting on 200 queries", [&] {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 200; ++t) {
      const double x = static_cast<double>(1 + rng() % 20000);
      const double y = static_cast<double>(2 + rng() % 200);
      u64 brute = 0;
      for (u64 n = 1; n <= static_cast<u64>(x); ++n) brute += static_cast<double>(factorize(n).largest_prime()) <= y;
      if (psi(x, y, table) != brute) return "x=" + format_number(x);
    }
    return std::string();
  }));
  out.push_back(detail::run("rho(2) = 1 - log 2", [] {
    const double err = std::abs(dickman_rho(2.0) - (1.0 - std::log(2.0)));
    return err < 1e-6 ? std::string() : "error " + format_number(err);
  }));
  out.push_back(detail::run("residue classes partition Psi_q", [&] {
    for (u64 q = 1; q <= 60; ++q) {
      u64 total = 0;
      for (u64 a = 0; a < q; ++a)
        if (std::gcd(a, q) == 1) total += psi_ap(20000, 50, static_cast<i64>(a), q, table);
      if (total != psi_q(20000, 50, q, table)) return "q=" + std::to_string(q);
    }
    return std::string();
  }));
  return out;
}

inline Battery poisson_suite() {
  Battery out;
  const auto phi = make_phi();
  const FourierEvaluator F(phi);
  out.push_back(detail::run("1_[1,2] <= Phi <= 1_(0.5,3)", [&] {
    for (int i = 0; i <= 4000; ++i) {
      const double t = 0.25 + 3.0 * i / 4000.0;
      const double v = phi(t);
      const double lo = t >= 1 && t <= 2 ? 1.0 : 0.0, hi = t > 0.5 && t < 3 ? 1.0 : 0.0;
      if (v < lo || v > hi) return "t=" + format_number(t);
    }
    return std::string();
  }));
  out.push_back(detail::run("Phi-hat(0) = 1.5 and Phi-hat(-xi) = conj Phi-hat(xi)", [&] {
    if (std::abs(F(0.0) - cplx{1.5, 0.0}) > 1e-10) return std::string("Phi-hat(0)");
    if (std::abs(F(-3.7) - std::conj(F(3.7))) > 1e-12) return std::string("conjugate symmetry");
    return std::string();
  }));
  out.push_back(detail::run("truncated Poisson fixtures", [&] {
    if (poisson_pair(F, 100, 1, 0, 10).gap >= 1e-6) return std::string("q=1");
    if (poisson_pair(F, 500, 7, 3, 70).gap >= 1e-6) return std::string("q=7");
    return std::string();
  }));
  out.push_back(detail::run("Kloosterman completion fixtures", [&] {
    if (completion_pair(F, 300, 3, 5, 2, 1, 150).gap >= 1e-6) return std::string("n=1");
    if (completion_pair(F, 300, 3, 5, 2, 0, 150).gap >= 1e-6) return std::string("n=0");
    const auto p = poisson_pair(F, 200, 3, 1, 30);
    const auto c = completion_pair(F, 200, 1, 3, 1, 5, 30);
    if (c.lhs != cplx(p.lhs) || c.rhs != p.rhs) return std::string("c=1 degenerate case");
    return std::string();
  }));
  return out;
}

inline Battery dispersion_suite() {
  Battery out;
  CharacterCache cache;
  auto tiny = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-0.7, 0.7);
    DispersionConfig cfg;
    cfg.M = 2 + static_cast<double>(rng() % 2);
    cfg.N = 2 + static_cast<double>(rng() % 2);
    cfg.L = 2;
    cfg.R = 3 + static_cast<double>(rng() % 2);
    cfg.E = 2 + static_cast<double>(rng() % 2);
    cfg.D = 1 + rng() % 3;
    cfg.x = cfg.M * cfg.N * cfg.L;
    auto seq = [&](double X) { return IntSequence::dyadic(X, [&](i64) { return cplx{unit(rng), unit(rng)}; }); };
    cfg.alpha = seq(cfg.M);
    cfg.beta = seq(cfg.N);
    cfg.gamma = seq(cfg.L);
    return cfg;
  };
  out.push_back(detail::run("X1 - 2 Re X2 + X3 >= 0 on random tiny configs", [&] {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 5; ++t) {
      const auto res = dispersion_sums(tiny(rng), cache);
      if (res.combination < -1e-9) return "combination " + format_number(res.combination);
    }
    return std::string();
  }));
  out.push_back(detail::run("delta vanishes when D captures every conductor", [&] {
    std::mt19937_64 rng(29);
    auto cfg = tiny(rng);
    cfg.D = static_cast<u64>(2 * cfg.R);
    const double d = delta_lhs(cfg, cache);
    return d < 1e-9 ? std::string() : "delta " + format_number(d);
  }));
  out.push_back(detail::run("good pairs: equal indices excluded, monotone in x^eta", [] {
    if (bad_pair(10, 10, 1, 4, 0.5, 16)) return std::string("k1 = k2 accepted");
    for (u64 k1 = 1; k1 <= 40; ++k1)
      for (u64 k2 = 1; k2 <= 40; ++k2)
        if (bad_pair(k1, k2, 3, 20, 0.25, 64) && !bad_pair(k1, k2, 3, 20, 0.5, 64)) return std::string("not monotone");
    return std::string();
  }));
  out.push_back(detail::run("proof-offset parameters satisfy every condition", [] {
    const auto t = proof_parameters(1e6, ThetaParameter::kim_sarnak(), 1e-4);
    const auto rep = condition_check(1e6, t.M, t.N, t.L, t.R, 7.0 / 32.0, 1e-4);
    std::string failed;
    for (const auto& name : rep.failing()) failed += name + "; ";
    return failed;
  }));
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"arith", "characters", "expsums", "smooth", "poisson", "dispersion"};
  return names;
}

inline Battery run_suite(const std::string& name) {
  if (name == "arith") return arith_suite();
  if (name == "characters") return characters_suite();
  if (name == "expsums") return expsums_suite();
  if (name == "smooth") return smooth_suite();
  if (name == "poisson") return poisson_suite();
  if (name == "dispersion") return dispersion_suite();
  throw Error(ErrorCode::OutOfRange, "unknown suite '" + name + "'");
}

}  // namespace friable::verify
