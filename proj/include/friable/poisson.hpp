#pragma once

// Fourier transform of the bump Phi, truncated Poisson summation over an
// arithmetic progression, and completion into Kloosterman sums.

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "friable/arith.hpp"
#include "friable/bump.hpp"
#include "friable/characters.hpp"
#include "friable/error.hpp"
#include "friable/kloosterman.hpp"

namespace friable {

inline constexpr double kFourierXiLimit = 1e6;
inline constexpr double kDefaultHMargin = 10.0;

namespace detail {

// Trapezoid rule with interval doubling for int_0^1 f, where f extends to an
// even function vanishing to all orders at 1. The rule is then spectrally
// accurate once the panel count exceeds the oscillation frequency, so the
// doubling test is a sharp stopping criterion.
class DoublingTrapezoid {
 public:
  DoublingTrapezoid(double tol, long budget) : tol_(tol), budget_(budget) {}

  template <class F>
  double integrate(const F& f, long panels) {
    double sum = 0.5 * f(0.0);
    for (long i = 1; i < panels; ++i) sum += f(static_cast<double>(i) / static_cast<double>(panels));
    spend(panels);
    double prev = sum / static_cast<double>(panels);
    for (int round = 0; round < 30; ++round) {
      // Midpoints of the current panels.
      for (long i = 0; i < panels; ++i) sum += f((static_cast<double>(i) + 0.5) / static_cast<double>(panels));
      spend(panels);
      panels *= 2;
      const double cur = sum / static_cast<double>(panels);
      if (std::abs(cur - prev) <= tol_) return cur;
      prev = cur;
    }
    throw Error(ErrorCode::QuadratureFailure, "Fourier quadrature tolerance unreachable");
  }

 private:
  void spend(long n) {
    budget_ -= n;
    if (budget_ < 0) throw Error(ErrorCode::QuadratureFailure, "Fourier quadrature budget exhausted");
  }

  double tol_;
  long budget_;
};

}  // namespace detail

/// Phi-hat(xi) = int Phi(t) e(-xi t) dt. Phi is an interval indicator
/// convolved with a scaled mollifier, so the transform factors into a
/// closed-form sinc part and the mollifier transform, which is the part
/// computed by quadrature.
class FourierEvaluator {
 public:
  explicit FourierEvaluator(BumpFunction phi, double tol = 1e-12) : phi_(phi), tol_(tol) {}

  const BumpFunction& bump() const { return phi_; }
  double tolerance() const { return tol_; }

  cplx operator()(double xi) const {
    if (!(std::abs(xi) <= kFourierXiLimit)) throw Error(ErrorCode::OutOfRange, "fourier_hat: |xi| <= 10^6");
    const auto key = static_cast<long long>(std::llround(xi * 1e12));
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const cplx v = compute(xi);
    std::lock_guard lock(mutex_);
    return cache_.try_emplace(key, v).first->second;
  }

  /// m-hat(eta) = 2 int_0^1 m(s) cos(2 pi eta s) ds.
  double mollifier_hat(double eta) const {
    const double w = 2.0 * std::numbers::pi * eta;
    auto f = [w](double s) { return detail::mollifier_raw(s) * std::cos(w * s); };
    long panels = 32;
    while (static_cast<double>(panels) < std::abs(eta) + 32.0) panels *= 2;
    detail::DoublingTrapezoid quad(tol_ * mollifier_mass() / 2.0, 200'000'000L);
    return 2.0 * quad.integrate(f, panels) / mollifier_mass();
  }

  std::size_t cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }

 private:
  cplx compute(double xi) const {
    const double a = phi_.plateau_lo(), b = phi_.plateau_hi();
    const double len = b - a, mid = 0.5 * (a + b);
    const double sinc = xi == 0.0 ? len : std::sin(std::numbers::pi * len * xi) / (std::numbers::pi * xi);
    const double angle = -2.0 * std::numbers::pi * mid * xi;
    return cplx{std::cos(angle), std::sin(angle)} * (sinc * mollifier_hat(phi_.width() * xi));
  }

  BumpFunction phi_;
  double tol_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<long long, cplx> cache_;
};

inline cplx fourier_hat(const FourierEvaluator& F, double xi) { return F(xi); }

struct PoissonPair {
  double lhs = 0;
  cplx rhs;
  double gap = 0;
};

struct CompletionPair {
  cplx lhs;
  cplx rhs;
  double gap = 0;
};

namespace detail {

// Integers m == a (mod q) with Phi(m/M) possibly nonzero, as [first, last].
inline std::pair<i64, i64> progression_window(const BumpFunction& phi, double M, i64 a, i64 q) {
  const i64 lo = static_cast<i64>(std::floor(phi.support_lo() * M));
  const i64 hi = static_cast<i64>(std::ceil(phi.support_hi() * M));
  const i64 first = lo + mod_reduce(a - lo, q);
  return {first, hi};
}

inline void require_poisson_inputs(double M, u64 q, double H, double margin, u64 c) {
  if (!(M > 1.0)) throw Error(ErrorCode::OutOfRange, "Poisson: M > 1");
  if (q < 1 || c < 1) throw Error(ErrorCode::OutOfRange, "Poisson: moduli >= 1");
  if (H < margin * static_cast<double>(c * q) / M) throw Error(ErrorCode::OutOfRange, "Poisson: H below margin * cq / M");
}

}  // namespace detail

/// lhs = sum_{m = a (q)} Phi(m/M); rhs = (M/q) sum_{|h| <= H} Phi-hat(hM/q) e(ah/q).
inline PoissonPair poisson_pair(const FourierEvaluator& F, double M, u64 q, i64 a, double H,
                                double margin = kDefaultHMargin) {
  detail::require_poisson_inputs(M, q, H, margin, 1);
  const BumpFunction& phi = F.bump();
  const i64 qs = static_cast<i64>(q);
  PoissonPair out;
  const auto [first, last] = detail::progression_window(phi, M, a, qs);
  for (i64 m = first; m <= last; m += qs) out.lhs += phi(static_cast<double>(m) / M);
  const i64 Hn = static_cast<i64>(std::floor(H));
  const double denom = static_cast<double>(q);
  cplx sum{};
  for (i64 h = -Hn; h <= Hn; ++h) {
    const cplx fh = F(static_cast<double>(h) * M / denom);
    const i64 phase = mod_reduce(static_cast<i64>(static_cast<i128>(a) * h % qs), qs);
    sum += fh * unit_root(static_cast<u64>(phase), q);
  }
  out.rhs = sum * (M / denom);
  out.gap = std::abs(cplx(out.lhs) - out.rhs);
  return out;
}

/// lhs = sum_{m = a (q), (m, c) = 1} Phi(m/M) e(m-bar n / c);
/// rhs = (M/cq) sum_{|h| <= H} Phi-hat(hM/cq) e(a h c-bar / q) S(h q-bar, n; c).
inline CompletionPair completion_pair(const FourierEvaluator& F, double M, u64 c, u64 q, i64 a, i64 n, double H,
                                      double margin = kDefaultHMargin) {
  if (std::gcd(c, q) != 1) throw Error(ErrorCode::NotCoprime, "completion_pair: gcd(c, q) > 1");
  detail::require_poisson_inputs(M, q, H, margin, c);
  const BumpFunction& phi = F.bump();
  const i64 qs = static_cast<i64>(q), cs = static_cast<i64>(c);
  CompletionPair out;
  const auto [first, last] = detail::progression_window(phi, M, a, qs);
  const i64 nr = mod_reduce(n, cs);
  for (i64 m = first; m <= last; m += qs) {
    if (std::gcd(static_cast<u64>(mod_reduce(m, cs)), c) != 1) continue;
    const i64 phase = c == 1 ? 0 : mul_mod(mod_inverse(m, cs), nr, cs);
    out.lhs += phi(static_cast<double>(m) / M) * unit_root(static_cast<u64>(phase), c);
  }
  const i64 Hn = static_cast<i64>(std::floor(H));
  const double denom = static_cast<double>(c * q);
  const i64 c_inv = mod_inverse(mod_reduce(cs, qs), qs);
  const i64 q_inv = mod_inverse(mod_reduce(qs, cs), cs);
  cplx sum{};
  for (i64 h = -Hn; h <= Hn; ++h) {
    const cplx fh = F(static_cast<double>(h) * M / denom);
    const i64 ah = static_cast<i64>(static_cast<i128>(a) * h % qs);
    const i64 phase = mod_reduce(static_cast<i64>(static_cast<i128>(ah) * c_inv % qs), qs);
    const double kl = c == 1 ? 1.0 : kloosterman_fast({mul_mod(mod_reduce(h, cs), q_inv, cs), nr, c});
    sum += fh * unit_root(static_cast<u64>(phase), q) * kl;
  }
  out.rhs = sum * (M / denom);
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace friable
