#pragma once

// Triple-convolution discrepancy, the dispersion sums S1, S2, S3 with
// deamplification over primes e ~ E, their main terms X1, X2, X3, the bad
// index pairs and the parameter conditions of the convolution estimate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "friable/arith.hpp"
#include "friable/bump.hpp"
#include "friable/characters.hpp"
#include "friable/error.hpp"
#include "friable/expsums.hpp"
#include "friable/parallel.hpp"
#include "friable/poisson.hpp"

namespace friable {

inline constexpr double kDefaultDispersionBudget = 1e9;

/// Coefficients on the integers first, first + 1, ..., first + values.size() - 1.
struct IntSequence {
  i64 first = 1;
  std::vector<cplx> values;

  i64 last() const { return first + static_cast<i64>(values.size()) - 1; }
  bool empty() const { return values.empty(); }
  cplx at(i64 n) const {
    return n < first || n > last() ? cplx{} : values[static_cast<std::size_t>(n - first)];
  }

  /// The sequence f(n) on X < n <= 2X.
  template <class F>
  static IntSequence dyadic(double X, F&& f) {
    IntSequence s;
    s.first = static_cast<i64>(std::floor(X)) + 1;
    for (i64 n = s.first; static_cast<double>(n) <= 2.0 * X; ++n) s.values.push_back(f(n));
    return s;
  }

  static IntSequence ones(double X) {
    return dyadic(X, [](i64) { return cplx{1.0, 0.0}; });
  }
};

struct DispersionConfig {
  double x = 0;
  double M = 1, N = 1, L = 1, R = 1, E = 2;
  u64 D = 1;
  i64 a1 = 1, a2 = 1;
  IntSequence alpha, beta, gamma;
  BumpFunction phi = make_phi();
  double epsilon = 0.05;
  double eta = 0.05;
  unsigned threads = 1;
  double budget = kDefaultDispersionBudget;

  void validate() const {
    if (a1 == 0 || a2 == 0) throw Error(ErrorCode::OutOfRange, "dispersion: a1, a2 nonzero");
    if (std::gcd(a1 < 0 ? -a1 : a1, a2 < 0 ? -a2 : a2) != 1) throw Error(ErrorCode::NotCoprime, "dispersion: gcd(a1, a2) > 1");
    if (!(R >= 1) || !(M >= 1) || !(N >= 1) || !(L >= 1) || D < 1) throw Error(ErrorCode::OutOfRange, "dispersion: ranges >= 1");
    if (!(E >= 2)) throw Error(ErrorCode::OutOfRange, "dispersion: E >= 2");
    check_sequence(alpha, M, "alpha");
    check_sequence(beta, N, "beta");
    check_sequence(gamma, L, "gamma");
  }

 private:
  static void check_sequence(const IntSequence& s, double X, const char* name) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const i64 n = s.first + static_cast<i64>(i);
      if (std::abs(s.values[i]) > 1.0 + 1e-12) throw Error(ErrorCode::OutOfRange, std::string(name) + " is not 1-bounded");
      if (s.values[i] != cplx{} && (static_cast<double>(n) <= X || static_cast<double>(n) > 2.0 * X)) {
        throw Error(ErrorCode::OutOfRange, std::string(name) + " has support outside its dyadic range");
      }
    }
  }
};

struct DispersionResult {
  cplx S1, S2, S3;
  cplx X1, X2, X3;
  double phi_hat_zero = 0;
  double combination = 0;  // X1 - 2 Re X2 + X3
};

/// u_k = sum_{n l = k} beta_n gamma_l, on (first products, last products).
inline IntSequence u_convolve(const IntSequence& beta, const IntSequence& gamma) {
  IntSequence u;
  if (beta.empty() || gamma.empty()) return u;
  u.first = beta.first * gamma.first;
  u.values.assign(static_cast<std::size_t>(beta.last() * gamma.last() - u.first + 1), cplx{});
  for (std::size_t i = 0; i < beta.values.size(); ++i)
    for (std::size_t j = 0; j < gamma.values.size(); ++j) {
      const i64 k = (beta.first + static_cast<i64>(i)) * (gamma.first + static_cast<i64>(j));
      u.values[static_cast<std::size_t>(k - u.first)] += beta.values[i] * gamma.values[j];
    }
  return u;
}

/// Primes e with E < e <= 2E and e not dividing a2.
inline std::vector<u64> averaging_set(double E, i64 a2) {
  if (!(E >= 2)) throw Error(ErrorCode::OutOfRange, "averaging_set: E >= 2");
  std::vector<u64> out;
  for (u64 p : primes_up_to(static_cast<u64>(std::floor(2.0 * E))))
    if (static_cast<double>(p) > E && a2 % static_cast<i64>(p) != 0) out.push_back(p);
  return out;
}

/// (1/M) sum_{m = c (r)} Phi(m/M), for any residue c.
inline double progression_mass(u64 r, i64 c, double M, const BumpFunction& phi) {
  if (r < 1 || !(M > 0)) throw Error(ErrorCode::OutOfRange, "progression_mass: r >= 1, M > 0");
  const i64 rs = static_cast<i64>(r);
  const i64 lo = static_cast<i64>(std::floor(phi.support_lo() * M));
  const i64 hi = static_cast<i64>(std::ceil(phi.support_hi() * M));
  double total = 0;
  for (i64 m = lo + mod_reduce(c - lo, rs); m <= hi; m += rs) total += phi(static_cast<double>(m) / M);
  return total / M;
}

/// E_r(c) = (1/M) sum_{m = c (r)} Phi(m/M) - Phi-hat(0) / r.
inline double poisson_difference_Er(u64 r, i64 c, double M, const BumpFunction& phi) {
  if (r < 1) throw Error(ErrorCode::OutOfRange, "poisson_difference_Er: r >= 1");
  if (std::gcd(static_cast<u64>(mod_reduce(c, static_cast<i64>(r))), r) != 1) {
    throw Error(ErrorCode::NotCoprime, "poisson_difference_Er: gcd(c, r) > 1");
  }
  return progression_mass(r, c, M, phi) - phi.integral() / static_cast<double>(r);
}

namespace detail {

inline u64 abs_u(i64 a) { return static_cast<u64>(a < 0 ? -a : a); }

// Moduli r with Phi(r/R) > 0 and (r, a1 a2) = 1.
inline std::vector<u64> smooth_moduli(const DispersionConfig& cfg) {
  std::vector<u64> out;
  const u64 lo = static_cast<u64>(std::max(1.0, std::floor(cfg.phi.support_lo() * cfg.R)));
  for (u64 r = lo; static_cast<double>(r) < cfg.phi.support_hi() * cfg.R; ++r) {
    if (std::gcd(r, abs_u(cfg.a1)) != 1 || std::gcd(r, abs_u(cfg.a2)) != 1) continue;
    if (cfg.phi(static_cast<double>(r) / cfg.R) > 0.0) out.push_back(r);
  }
  return out;
}

// Character tables chi(0..d-1), one per character, indexed by its own conductor.
struct ProjectorTables {
  std::vector<std::vector<cplx>> tables;
  std::vector<u64> moduli;

  explicit ProjectorTables(const OmegaProjector& proj) {
    for (const auto& chi : proj.characters()) {
      tables.push_back(chi.value_table());
      moduli.push_back(chi.modulus());
    }
  }
  std::size_t size() const { return tables.size(); }
  cplx value(std::size_t i, i64 n) const {
    return tables[i][static_cast<std::size_t>(mod_reduce(n, static_cast<i64>(moduli[i])))];
  }
};

}  // namespace detail

/// sum_{r ~ R, (r, a1 a2) = 1} | sum alpha_m beta_n gamma_l E_D(m n l a1-bar a2; r) |.
inline double delta_lhs(const DispersionConfig& cfg, CharacterCache& cache = default_character_cache()) {
  cfg.validate();
  const IntSequence u = u_convolve(cfg.beta, cfg.gamma);
  std::vector<u64> moduli;
  for (u64 r = static_cast<u64>(std::floor(cfg.R)) + 1; static_cast<double>(r) <= 2.0 * cfg.R; ++r)
    if (std::gcd(r, detail::abs_u(cfg.a1)) == 1 && std::gcd(r, detail::abs_u(cfg.a2)) == 1) moduli.push_back(r);
  double work = 0;
  for (u64 r : moduli) work += static_cast<double>(cfg.alpha.values.size() * u.values.size()) + static_cast<double>(r * r);
  if (work > cfg.budget) throw Error(ErrorCode::BudgetExceeded, "delta_lhs: work estimate above budget");

  const auto terms = parallel_map(moduli.size(), cfg.threads, [&](std::size_t idx) {
    const u64 r = moduli[idx];
    const i64 rs = static_cast<i64>(r);
    std::vector<cplx> bins(r);
    for (std::size_t i = 0; i < cfg.alpha.values.size(); ++i) {
      if (cfg.alpha.values[i] == cplx{}) continue;
      const i64 m = cfg.alpha.first + static_cast<i64>(i);
      for (std::size_t j = 0; j < u.values.size(); ++j) {
        const i64 k = u.first + static_cast<i64>(j);
        bins[static_cast<std::size_t>(mod_reduce(m % rs * (k % rs), rs))] += cfg.alpha.values[i] * u.values[j];
      }
    }
    const OmegaProjector proj(r, cfg.D, cache);
    const i64 shift = mul_mod(mod_inverse(mod_reduce(cfg.a1, rs), rs), mod_reduce(cfg.a2, rs), rs);
    cplx inner{};
    for (u64 j = 0; j < r; ++j) {
      if (bins[j] == cplx{}) continue;
      inner += bins[j] * proj.error_kernel(mul_mod(static_cast<i64>(j), shift, rs));
    }
    return std::abs(inner);
  });
  double total = 0;
  for (double t : terms) total += t;
  return total;
}

/// Estimated inner-loop operations for dispersion_sums.
inline double dispersion_work(const DispersionConfig& cfg, const IntSequence& u, std::size_t n_moduli, std::size_t n_e) {
  const double r_max = cfg.phi.support_hi() * cfg.R;
  const double chars = std::min(static_cast<double>(cfg.D) * static_cast<double>(cfg.D), r_max);
  const double per_pair = static_cast<double>(u.values.size()) * (1.0 + chars) + r_max * 4.0 * cfg.E + r_max * chars;
  return per_pair * static_cast<double>(n_moduli * n_e);
}

/// S1, S2, S3 and X1, X2, X3 with the weight Phi(r/R) on r and (1/M) Phi(m/M) on m.
inline DispersionResult dispersion_sums(const DispersionConfig& cfg, CharacterCache& cache = default_character_cache()) {
  cfg.validate();
  const IntSequence u = u_convolve(cfg.beta, cfg.gamma);
  const auto es = averaging_set(cfg.E, cfg.a2);
  const auto moduli = detail::smooth_moduli(cfg);
  if (dispersion_work(cfg, u, moduli.size(), es.size()) > cfg.budget) {
    throw Error(ErrorCode::BudgetExceeded, "dispersion_sums: work estimate above budget");
  }

  // Per r: the m-weights W[c] = (1/M) sum_{m = c (r)} Phi(m/M), and Phi(r/R).
  const auto weights = parallel_map(moduli.size(), cfg.threads, [&](std::size_t i) {
    const u64 r = moduli[i];
    std::vector<double> w(r, 0.0);
    for (u64 c = 0; c < r; ++c)
      if (std::gcd(c, r) == 1) w[c] = progression_mass(r, static_cast<i64>(c), cfg.M, cfg.phi);
    return w;
  });

  std::vector<std::pair<u64, std::size_t>> pairs;  // (e, index of r), sorted
  for (u64 e : es)
    for (std::size_t i = 0; i < moduli.size(); ++i) pairs.emplace_back(e, i);

  struct Partial {
    cplx S1, S2, S3, X1, X2, X3;
  };
  const auto partial = parallel_map(pairs.size(), cfg.threads, [&](std::size_t p) {
    const u64 e = pairs[p].first;
    const u64 r = moduli[pairs[p].second];
    const auto& W = weights[pairs[p].second];
    const u64 q = r * e;
    const i64 rs = static_cast<i64>(r);
    const double phi_r = static_cast<double>(euler_phi(r));
    const double phi_q = static_cast<double>(euler_phi(q));
    const double wr = cfg.phi(static_cast<double>(r) / cfg.R);

    const OmegaProjector proj(r, cfg.D, cache);
    const detail::ProjectorTables chars(proj);

    std::vector<cplx> B(q), C(r), U(chars.size());
    for (std::size_t j = 0; j < u.values.size(); ++j) {
      const i64 k = u.first + static_cast<i64>(j);
      if (u.values[j] == cplx{} || std::gcd(static_cast<u64>(k), q) != 1) continue;
      B[static_cast<u64>(k) % q] += u.values[j];
      C[static_cast<u64>(k) % r] += u.values[j];
      for (std::size_t i = 0; i < chars.size(); ++i) U[i] += u.values[j] * chars.value(i, k);
    }
    std::vector<double> T(r, 0.0);  // sum of |B_b|^2 over b = j (r)
    double B2 = 0;
    for (u64 b = 0; b < q; ++b) {
      T[b % r] += std::norm(B[b]);
      B2 += std::norm(B[b]);
    }

    Partial out;
    const i64 a1_inv = mod_inverse(mod_reduce(cfg.a1, rs), rs);
    const i64 shift = mul_mod(a1_inv, mod_reduce(cfg.a2, rs), rs);
    const i64 a1r = mod_reduce(cfg.a1, rs), a2r = mod_reduce(cfg.a2, rs);
    cplx s1{}, s2{}, s3{};
    double x3 = 0;
    for (u64 c = 0; c < r; ++c) {
      if (std::gcd(c, r) != 1) continue;
      const i64 ci = static_cast<i64>(c);
      const i64 t = mul_mod(a1r, mod_inverse(mul_mod(a2r, ci, rs), rs), rs);  // a1 (a2 c)^{-1}
      const i64 arg = mul_mod(ci, shift, rs);                                // c a1^{-1} a2
      cplx A{}, Ac{};
      for (std::size_t i = 0; i < chars.size(); ++i) {
        A += chars.value(i, arg) * U[i];
        Ac += chars.value(i, ci) * U[i];
      }
      s1 += W[c] * T[static_cast<u64>(t)];
      s2 += W[c] * A * std::conj(C[static_cast<u64>(t)]);
      s3 += W[c] * std::norm(A);
      x3 += std::norm(Ac);
    }
    double x2 = 0;
    for (const auto& v : U) x2 += std::norm(v);
    const double rd = static_cast<double>(r);
    out.S1 = wr * s1;
    out.S2 = wr * s2 / phi_q;
    out.S3 = wr * s3 / (phi_r * phi_q);
    out.X1 = wr * B2 / rd;
    out.X2 = wr * x2 / (rd * phi_q);
    out.X3 = wr * x3 / (rd * phi_r * phi_q);
    return out;
  });

  DispersionResult res;
  for (const auto& p : partial) {
    res.S1 += p.S1;
    res.S2 += p.S2;
    res.S3 += p.S3;
    res.X1 += p.X1;
    res.X2 += p.X2;
    res.X3 += p.X3;
  }
  res.phi_hat_zero = FourierEvaluator(cfg.phi)(0.0).real();
  res.combination = res.X1.real() - 2.0 * res.X2.real() + res.X3.real();
  return res;
}

/// Membership of (k1, k2) in the good set K(eta): all three gcd-parts at
/// most x^eta and |k1 - k2| > K / x^eta.
inline bool bad_pair(u64 k1, u64 k2, i64 a2, double K, double eta, double x) {
  if (k1 < 1 || k2 < 1) throw Error(ErrorCode::OutOfRange, "bad_pair: k1, k2 >= 1");
  if (a2 == 0) throw Error(ErrorCode::OutOfRange, "bad_pair: a2 nonzero");
  const double X = std::pow(x, eta);
  const u64 a = detail::abs_u(a2);
  const u64 diff = k1 > k2 ? k1 - k2 : k2 - k1;
  if (!(static_cast<double>(diff) > K / X)) return false;
  if (static_cast<double>(gcd_infinity_product(k1, {a, k2})) > X) return false;
  if (static_cast<double>(gcd_infinity_product(k2, {a, k1})) > X) return false;
  return static_cast<double>(gcd_infinity_product(diff, {a, k1, k2})) <= X;
}

struct ConditionItem {
  std::string name;
  double slack = 0;  // log(rhs / lhs) / log x; negative when violated
  bool holds = false;
};

struct ConditionReport {
  std::vector<ConditionItem> items;
  bool all_hold = false;

  std::vector<std::string> failing() const {
    std::vector<std::string> out;
    for (const auto& it : items)
      if (!it.holds) out.push_back(it.name);
    return out;
  }
};

/// The parameter conditions of the triple convolution estimate with every
/// implied constant equal to 1. The size condition on a1, a2 involves an
/// unspecified delta and is not evaluated.
inline ConditionReport condition_check(double x, double M, double N, double L, double R, double theta, double eps) {
  if (!(x > 1) || !(M > 0) || !(N > 0) || !(L > 0) || !(R > 0)) throw Error(ErrorCode::OutOfRange, "condition_check: positive inputs");
  const double lx = std::log(x), lm = std::log(M), ln = std::log(N), ll = std::log(L), lr = std::log(R);
  ConditionReport rep;
  auto le = [&](std::string name, double lhs, double rhs) {
    const double slack = (rhs - lhs) / lx;
    rep.items.push_back({std::move(name), slack, slack >= -1e-12});
  };
  const double mnl = (lm + ln + ll - lx) / lx;
  rep.items.push_back({"MNL = x", -std::abs(mnl), std::abs(mnl) <= 1e-9});
  le("x^((1-eps)/2) <= R", 0.5 * (1 - eps) * lx, lr);
  le("R <= x^(-5eps) N L", lr, -5 * eps * lx + ln + ll);
  le("x^(-5eps) N L <= x^(2/3-11eps)", -5 * eps * lx + ln + ll, (2.0 / 3.0 - 11 * eps) * lx);
  le("N^9 L^8 <= x^3 R^4", 9 * ln + 8 * ll, 3 * lx + 4 * lr);
  le("N <= x^(1-2eps) / R", ln, (1 - 2 * eps) * lx - lr);
  le("N^4 L^7 max(1,N/L)^(2theta) <= x^(2-16eps) R^2", 4 * ln + 7 * ll + 2 * theta * std::max(0.0, ln - ll),
     (2 - 16 * eps) * lx + 2 * lr);
  le("N^(12-6theta) L^(11-6theta) <= x^(6-4(theta+eps)) R^2", (12 - 6 * theta) * ln + (11 - 6 * theta) * ll,
     (6 - 4 * (theta + eps)) * lx + 2 * lr);
  rep.all_hold = std::all_of(rep.items.begin(), rep.items.end(), [](const ConditionItem& it) { return it.holds; });
  return rep;
}

struct ParameterTuple {
  double R = 0, M = 0, N = 0, L = 0;
  Rational alpha{0};
  double r_exponent = 0;  // log R / log x
};

/// R = x^(alpha(theta) - eps), M = N = x / R, L = R^2 / x.
inline ParameterTuple optimal_parameters(double x, const ThetaParameter& theta, double eps) {
  if (!(x > 2)) throw Error(ErrorCode::OutOfRange, "optimal_parameters: x > 2");
  ParameterTuple t;
  t.alpha = theta_alpha(theta);
  t.r_exponent = t.alpha.to_double() - eps;
  t.R = std::pow(x, t.r_exponent);
  t.M = x / t.R;
  t.N = x / t.R;
  t.L = t.R * t.R / x;
  return t;
}

/// The offset tuple used when the convolution estimate is applied to smooth
/// numbers: R = x^(alpha - 990 eps), M = N = x^(1-10eps) / R,
/// L = R^2 / x^(1-20eps). Satisfies every condition for small enough eps.
inline ParameterTuple proof_parameters(double x, const ThetaParameter& theta, double eps) {
  if (!(x > 2)) throw Error(ErrorCode::OutOfRange, "proof_parameters: x > 2");
  ParameterTuple t;
  t.alpha = theta_alpha(theta);
  t.r_exponent = t.alpha.to_double() - 990 * eps;
  t.R = std::pow(x, t.r_exponent);
  t.M = std::pow(x, 1 - 10 * eps) / t.R;
  t.N = t.M;
  t.L = t.R * t.R / std::pow(x, 1 - 20 * eps);
  return t;
}

}  // namespace friable
