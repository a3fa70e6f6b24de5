#pragma once

// Incomplete Kloosterman-type sums, the multilinear sum of complete
// Kloosterman sums with its envelope, and the exponent alpha(theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "friable/arith.hpp"
#include "friable/bump.hpp"
#include "friable/error.hpp"
#include "friable/kloosterman.hpp"
#include "friable/parallel.hpp"

namespace friable {

inline constexpr u64 kIncompleteWeilCap = 1'000'000;
inline constexpr double kDiWorkCap = 1e9;

/// theta in [0, 7/32]: an admissible exponent toward Selberg's conjecture.
class ThetaParameter {
 public:
  explicit ThetaParameter(Rational value) : value_(value) {
    if (value < Rational(0) || value > max()) throw Error(ErrorCode::OutOfRange, "theta must lie in [0, 7/32]");
  }
  static Rational max() { return Rational(7, 32); }
  static ThetaParameter kim_sarnak() { return ThetaParameter(max()); }

  const Rational& value() const { return value_; }
  double to_double() const { return value_.to_double(); }

 private:
  Rational value_;
};

/// alpha(theta) = (5 - 4 theta) / (8 - 6 theta). Accepts theta in [0, 1/2];
/// theta = 1/2 is the trivial eigenvalue bound and gives 3/5.
inline Rational theta_alpha(const Rational& theta) {
  if (theta < Rational(0) || theta > Rational(1, 2)) throw Error(ErrorCode::OutOfRange, "theta_alpha: theta in [0, 1/2]");
  return (Rational(5) - Rational(4) * theta) / (Rational(8) - Rational(6) * theta);
}

inline Rational theta_alpha(const ThetaParameter& theta) { return theta_alpha(theta.value()); }

struct IncompleteWeil {
  cplx value;
  double envelope = 0;
  double ratio = 0;
};

/// sum_{m <= M, l | m, (m, ck) = 1} (m / phi(m)) e(m-bar n / c).
inline cplx incomplete_weil_lhs(double M, i64 n, u64 c, u64 k, u64 l) {
  if (c < 1 || k < 1 || l < 1) throw Error(ErrorCode::OutOfRange, "incomplete_weil_lhs: c, k, l >= 1");
  if (M > static_cast<double>(kIncompleteWeilCap) || c > kIncompleteWeilCap || k > kIncompleteWeilCap || l > kIncompleteWeilCap ||
      static_cast<u64>(n < 0 ? -n : n) > kIncompleteWeilCap) {
    throw Error(ErrorCode::CapExceeded, "incomplete_weil_lhs: inputs limited to 10^6");
  }
  if (M < 1.0) return {};
  const u64 top = static_cast<u64>(std::floor(M));
  const auto phi = phi_table(top);
  const u64 ck = c * k;
  const i64 cs = static_cast<i64>(c);
  const i64 nr = mod_reduce(n, cs);
  cplx total{};
  for (u64 m = l; m <= top; m += l) {
    if (std::gcd(m, ck) != 1) continue;
    const i64 phase = c == 1 ? 0 : mul_mod(mod_inverse(static_cast<i64>(m % c), cs), nr, cs);
    total += (static_cast<double>(m) / static_cast<double>(phi[m])) * unit_root(static_cast<u64>(phase), c);
  }
  return total;
}

/// x^eps ((n, c)^{1/2} c^{1/2} + (n, c) M / (l c)), implied constant 1.
inline double incomplete_weil_envelope(double x, double eps, double M, i64 n, u64 c, u64 l) {
  const double g = static_cast<double>(std::gcd(static_cast<u64>(n < 0 ? -n : n), c));
  const double cd = static_cast<double>(c);
  return std::pow(x, eps) * (std::sqrt(g) * std::sqrt(cd) + g * M / (static_cast<double>(l) * cd));
}

inline IncompleteWeil incomplete_weil(double M, i64 n, u64 c, u64 k, u64 l, double x, double eps) {
  IncompleteWeil out;
  out.value = incomplete_weil_lhs(M, n, c, k, l);
  out.envelope = incomplete_weil_envelope(x, eps, M, n, c, l);
  out.ratio = std::abs(out.value) / out.envelope;
  return out;
}

struct DiRanges {
  double M = 1, N = 1, R = 1, S = 1, C = 1;
};

struct DiOptions {
  double omega = 0;           // frequency of e(n omega), taken mod 1
  bool negative_sign = false;  // S(m r-bar, -n; sc) instead of +n
  ThetaParameter theta = ThetaParameter::kim_sarnak();
  double x = 1;    // scale for the x^eta factor
  double eta = 0;  // envelope exponent; 0 reports the bare envelope
  unsigned threads = 1;
  double work_cap = kDiWorkCap;
};

struct DiResult {
  cplx value;
  double envelope = 0;
  double ratio = 0;
  double trivial_bound = 0;  // sum |a| * N-count * c-count * max phi(sc)
  double evaluations = 0;    // Kloosterman sums evaluated
};

namespace detail {

// Integers t with lo < t <= hi.
inline std::vector<i64> dyadic_range(double X) {
  std::vector<i64> out;
  for (i64 t = static_cast<i64>(std::floor(X)) + 1; static_cast<double>(t) <= 2.0 * X; ++t) out.push_back(t);
  return out;
}

}  // namespace detail

/// sum_{r~R, s~S, (r,s)=1} sum_{m~M} a(m,r,s) sum_{n~N} e(n omega)
///   sum_{(c,r)=1} g(c/C) S(m r-bar, +-n; sc),   with t ~ T meaning T < t <= 2T.
/// The envelope is the DI-type right-hand side with implied constant 1.
template <class Coeff, class Weight = BumpFunction>
DiResult di_multilinear_sum(const DiRanges& rg, Coeff&& a, const Weight& g, const DiOptions& opt = {}) {
  const auto ms = detail::dyadic_range(rg.M), ns = detail::dyadic_range(rg.N);
  const auto rs = detail::dyadic_range(rg.R), ss = detail::dyadic_range(rg.S);
  std::vector<i64> cs;
  for (i64 c = std::max<i64>(1, static_cast<i64>(std::floor(g.support_lo() * rg.C))); static_cast<double>(c) < g.support_hi() * rg.C; ++c)
    if (g(static_cast<double>(c) / rg.C) != 0.0) cs.push_back(c);

  std::vector<std::pair<i64, i64>> pairs;
  for (i64 r : rs)
    for (i64 s : ss)
      if (std::gcd(r, s) == 1) pairs.emplace_back(r, s);
  std::sort(pairs.begin(), pairs.end());

  double evaluations = 0;
  for (const auto& [r, s] : pairs) {
    double cnt = 0;
    for (i64 c : cs)
      if (std::gcd(c, r) == 1) ++cnt;
    evaluations += cnt * static_cast<double>(ms.size() * ns.size());
  }
  if (evaluations > opt.work_cap) throw Error(ErrorCode::WorkCapExceeded, "di_multilinear_sum: too many Kloosterman evaluations");

  std::vector<cplx> en(ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const double angle = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(ns[j]) * opt.omega, 1.0);
    en[j] = {std::cos(angle), std::sin(angle)};
  }

  const auto partial = parallel_map(pairs.size(), opt.threads, [&](std::size_t i) {
    const auto [r, s] = pairs[i];
    cplx total{};
    for (i64 c : cs) {
      if (std::gcd(c, r) != 1) continue;
      const double gc = g(static_cast<double>(c) / rg.C);
      const i64 mod = s * c;
      const i64 rinv = mod_inverse(mod_reduce(r, mod), mod);
      for (i64 m : ms) {
        const cplx am = a(m, r, s);
        if (am == cplx{}) continue;
        cplx inner{};
        for (std::size_t j = 0; j < ns.size(); ++j) {
          const i64 nn = opt.negative_sign ? -ns[j] : ns[j];
          inner += en[j] * kloosterman_fast({mul_mod(mod_reduce(m, mod), rinv, mod), nn, static_cast<u64>(mod)});
        }
        total += am * gc * inner;
      }
    }
    return total;
  });

  DiResult out;
  for (const auto& p : partial) out.value += p;
  out.evaluations = evaluations;

  double l2 = 0, l1 = 0;
  for (i64 r : rs)
    for (i64 s : ss)
      for (i64 m : ms) {
        const cplx am = a(m, r, s);
        l2 += std::norm(am);
        l1 += std::abs(am);
      }
  double max_phi = 0;
  for (i64 s : ss)
    for (i64 c : cs) max_phi = std::max(max_phi, static_cast<double>(euler_phi(static_cast<u64>(s * c))));
  out.trivial_bound = l1 * static_cast<double>(ns.size()) * static_cast<double>(cs.size()) * max_phi;

  const double M = rg.M, N = rg.N, R = rg.R, S = rg.S, C = rg.C;
  const double spectral = std::pow(1.0 + C / (R * std::sqrt(S)), opt.theta.to_double());
  const double bracket = C * C / R * (M + R * S) * (N + R * S) + M * N;
  out.envelope = std::pow(opt.x, opt.eta) * spectral * std::sqrt(l2) * std::sqrt(N * R * S) * std::sqrt(bracket);
  out.ratio = out.envelope > 0 ? std::abs(out.value) / out.envelope : 0.0;
  return out;
}

}  // namespace friable
