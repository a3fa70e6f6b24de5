#pragma once

// Smooth-number tables and counts: Psi(x,y), Psi_q(x,y), Psi(x,y;a,q),
// discrepancy sums over moduli, the Dickman function and H(u).

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "friable/arith.hpp"
#include "friable/error.hpp"
#include "friable/parallel.hpp"

namespace friable {

inline constexpr u64 kDefaultTableCap = 10'000'000;
inline constexpr u64 kHardTableCap = 200'000'000;

/// Largest prime factor of every n <= x_max; lpf(1) = 1.
class SmoothTable {
 public:
  SmoothTable() = default;

  static SmoothTable build(u64 x_max, u64 cap = kDefaultTableCap) {
    if (x_max < 1) throw Error(ErrorCode::OutOfRange, "SmoothTable: x_max >= 1");
    if (x_max > cap || x_max > kHardTableCap) {
      throw Error(ErrorCode::MemoryCap, "SmoothTable: x_max " + std::to_string(x_max) + " exceeds cap " +
                                            std::to_string(std::min(cap, kHardTableCap)));
    }
    SmoothTable t;
    t.lpf_.assign(x_max + 1, 0);
    auto& f = t.lpf_;
    // Linear sieve for the smallest prime factor ...
    std::vector<std::uint32_t> primes;
    for (u64 n = 2; n <= x_max; ++n) {
      if (f[n] == 0) {
        f[n] = static_cast<std::uint32_t>(n);
        primes.push_back(static_cast<std::uint32_t>(n));
      }
      for (std::uint32_t p : primes) {
        if (p > f[n] || static_cast<u64>(p) * n > x_max) break;
        f[p * n] = p;
      }
    }
    // ... then in place: P+(n) = max(p, P+(n/p)) with p = P-(n), since n/p < n is already final.
    f[1] = 1;
    for (u64 n = 2; n <= x_max; ++n) {
      const std::uint32_t p = f[n];
      const std::uint32_t rest = f[n / p];
      f[n] = std::max(p, rest);
    }
    return t;
  }

  /// Adopts raw values lpf(1..x_max); used by the cache loader.
  static SmoothTable from_values(std::vector<std::uint32_t> values_with_zero_slot) {
    SmoothTable t;
    t.lpf_ = std::move(values_with_zero_slot);
    return t;
  }

  u64 x_max() const { return lpf_.empty() ? 0 : lpf_.size() - 1; }
  std::uint32_t lpf(u64 n) const { return lpf_.at(n); }
  std::span<const std::uint32_t> values() const {
    return lpf_.empty() ? std::span<const std::uint32_t>{} : std::span<const std::uint32_t>(lpf_).subspan(1);
  }
  bool is_smooth(u64 n, double y) const { return static_cast<double>(lpf_[n]) <= y; }

  void require_covers(double x) const {
    if (x < 0 || std::floor(x) > static_cast<double>(x_max())) {
      throw Error(ErrorCode::TableTooSmall,
                  "table covers n <= " + std::to_string(x_max()) + ", query needs " + std::to_string(x));
    }
  }

  /// S(x, y) in increasing order; n = 1 is included.
  std::vector<u64> smooth_numbers(double x, double y) const {
    require_covers(x);
    const u64 top = static_cast<u64>(std::floor(x));
    std::vector<u64> out;
    for (u64 n = 1; n <= top; ++n)
      if (is_smooth(n, y)) out.push_back(n);
    return out;
  }

 private:
  std::vector<std::uint32_t> lpf_;
};

inline u64 psi(double x, double y, const SmoothTable& table) {
  table.require_covers(x);
  const u64 top = static_cast<u64>(std::floor(x));
  u64 count = 0;
  for (u64 n = 1; n <= top; ++n) count += table.is_smooth(n, y);
  return count;
}

inline u64 psi_q(double x, double y, u64 q, const SmoothTable& table) {
  table.require_covers(x);
  const u64 top = static_cast<u64>(std::floor(x));
  u64 count = 0;
  for (u64 n = 1; n <= top; ++n) count += table.is_smooth(n, y) && std::gcd(n, q) == 1;
  return count;
}

inline u64 psi_ap(double x, double y, i64 a, u64 q, const SmoothTable& table) {
  if (q < 1) throw Error(ErrorCode::OutOfRange, "psi_ap: q >= 1");
  table.require_covers(x);
  const u64 top = static_cast<u64>(std::floor(x));
  const u64 target = static_cast<u64>(mod_reduce(a, static_cast<i64>(q)));
  u64 count = 0;
  for (u64 n = target == 0 ? q : target; n <= top; n += q) count += table.is_smooth(n, y);
  return count;
}

/// One modulus of a discrepancy scan.
struct DiscrepancyRow {
  u64 q = 0;
  u64 psi_ap = 0;         // Psi(x, y; a1 * inv(a2), q)
  u64 psi_q = 0;          // Psi_q(x, y)
  double expected = 0.0;  // Psi_q / phi(q)
  double discrepancy = 0.0;
};

namespace detail {

inline void require_residues_coprime(u64 q, i64 a1, i64 a2) {
  const u64 g1 = std::gcd(static_cast<u64>(std::llabs(a1)), q);
  const u64 g2 = std::gcd(static_cast<u64>(std::llabs(a2)), q);
  if (a1 == 0 || a2 == 0 || g1 != 1 || g2 != 1) {
    throw Error(ErrorCode::ResidueNotCoprime, "gcd(q, a1*a2) > 1 for q = " + std::to_string(q));
  }
}

inline bool residues_coprime(u64 q, i64 a1, i64 a2) {
  return a1 != 0 && a2 != 0 && std::gcd(static_cast<u64>(std::llabs(a1)), q) == 1 &&
         std::gcd(static_cast<u64>(std::llabs(a2)), q) == 1;
}

// Single pass binning of the smooth numbers modulo q.
inline DiscrepancyRow bin_modulus(std::span<const u64> smooth, u64 q, i64 a1, i64 a2) {
  DiscrepancyRow row;
  row.q = q;
  const i64 qs = static_cast<i64>(q);
  const u64 target = static_cast<u64>(mul_mod(a1, mod_inverse(a2, qs), qs));
  std::vector<u64> bins(q, 0);
  for (u64 n : smooth) ++bins[n % q];
  for (u64 res = 0; res < q; ++res)
    if (std::gcd(res, q) == 1) row.psi_q += bins[res];
  row.psi_ap = bins[target];
  const double phi = static_cast<double>(euler_phi(q));
  row.expected = static_cast<double>(row.psi_q) / phi;
  row.discrepancy = static_cast<double>(row.psi_ap) - row.expected;
  return row;
}

}  // namespace detail

/// Psi(x, y; a1 * inv(a2) mod q, q) - Psi_q(x, y) / phi(q).
inline double discrepancy(double x, double y, i64 a1, i64 a2, u64 q, const SmoothTable& table) {
  if (q < 1) throw Error(ErrorCode::OutOfRange, "discrepancy: q >= 1");
  detail::require_residues_coprime(q, a1, a2);
  const auto smooth = table.smooth_numbers(x, y);
  return detail::bin_modulus(smooth, q, a1, a2).discrepancy;
}

/// Rows for every q <= Q with gcd(q, a1 a2) = 1, ascending in q.
inline std::vector<DiscrepancyRow> discrepancy_rows(double x, double y, i64 a1, i64 a2, u64 Q,
                                                    const SmoothTable& table, unsigned threads = 1) {
  if (a1 == 0 || a2 == 0) throw Error(ErrorCode::ResidueNotCoprime, "a1, a2 must be nonzero");
  if (static_cast<double>(Q) > x) throw Error(ErrorCode::OutOfRange, "discrepancy_rows: Q <= x");
  const auto smooth = table.smooth_numbers(x, y);
  std::vector<u64> moduli;
  for (u64 q = 1; q <= Q; ++q)
    if (detail::residues_coprime(q, a1, a2)) moduli.push_back(q);
  return parallel_map(moduli.size(), threads,
                      [&](std::size_t i) { return detail::bin_modulus(smooth, moduli[i], a1, a2); });
}

/// sum over q <= Q, (q, a1 a2) = 1 of |discrepancy|.
inline double discrepancy_sum(double x, double y, i64 a1, i64 a2, u64 Q, const SmoothTable& table,
                              unsigned threads = 1) {
  double total = 0.0;
  for (const auto& row : discrepancy_rows(x, y, a1, a2, Q, table, threads)) total += std::abs(row.discrepancy);
  return total;
}

/// Weighted form: f(n) replaces the indicator of S(x, y), i.e. the sum of
/// |sum_{n in S(x,y), n = a (q)} f(n) - phi(q)^{-1} sum_{n in S(x,y), (n,q)=1} f(n)|.
template <class Weight>
double discrepancy_sum_weighted(double x, double y, i64 a1, i64 a2, u64 Q, const SmoothTable& table,
                                Weight&& f, unsigned threads = 1) {
  if (a1 == 0 || a2 == 0) throw Error(ErrorCode::ResidueNotCoprime, "a1, a2 must be nonzero");
  if (static_cast<double>(Q) > x) throw Error(ErrorCode::OutOfRange, "discrepancy_sum: Q <= x");
  const auto smooth = table.smooth_numbers(x, y);
  std::vector<std::complex<double>> weights;
  weights.reserve(smooth.size());
  for (u64 n : smooth) weights.emplace_back(f(n));
  std::vector<u64> moduli;
  for (u64 q = 1; q <= Q; ++q)
    if (detail::residues_coprime(q, a1, a2)) moduli.push_back(q);
  const auto terms = parallel_map(moduli.size(), threads, [&](std::size_t i) {
    const u64 q = moduli[i];
    const i64 qs = static_cast<i64>(q);
    const u64 target = static_cast<u64>(mul_mod(a1, mod_inverse(a2, qs), qs));
    std::vector<std::complex<double>> bins(q);
    for (std::size_t j = 0; j < smooth.size(); ++j) bins[smooth[j] % q] += weights[j];
    std::complex<double> coprime{};
    for (u64 res = 0; res < q; ++res)
      if (std::gcd(res, q) == 1) coprime += bins[res];
    return std::abs(bins[target] - coprime / static_cast<double>(euler_phi(q)));
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

/// rho on a uniform grid from the window form u rho(u) = int_{u-1}^u rho(t) dt,
/// trapezoidal in t and solved for the new endpoint. Errors contract by 1/u
/// per unit step, so values stay relatively accurate far into the tail. The
/// grid step must divide 1.
class DickmanTable {
 public:
  explicit DickmanTable(double step = 1e-4, double u_max = 20.0) : u_max_(u_max) {
    if (!(step > 0) || !(u_max >= 1)) throw Error(ErrorCode::OutOfRange, "DickmanTable: bad grid");
    per_unit_ = static_cast<std::size_t>(std::llround(1.0 / step));
    if (std::abs(per_unit_ * step - 1.0) > 1e-12) throw Error(ErrorCode::OutOfRange, "DickmanTable: 1/step must be an integer");
    step_ = 1.0 / static_cast<double>(per_unit_);
    const std::size_t n = per_unit_;
    const std::size_t count = static_cast<std::size_t>(std::ceil(u_max * n - 1e-9)) + 1;
    values_.assign(count, 1.0);
    double interior = 0;  // sum of values strictly inside the window
    for (std::size_t i = n + 1; i < count; ++i) {
      // A fresh sum once per unit interval stops cancellation against the
      // much larger values that have left the window.
      if ((i - 1) % n == 0) {
        interior = 0;
        for (std::size_t j = i - n + 1; j < i; ++j) interior += values_[j];
      } else {
        interior += values_[i - 1] - values_[i - n];
      }
      const double u = static_cast<double>(i) * step_;
      values_[i] = step_ / u * (0.5 * values_[i - n] + interior) / (1.0 - 0.5 * step_ / u);
    }
  }

  double step() const { return step_; }
  double u_max() const { return u_max_; }
  std::span<const double> values() const { return values_; }

  double operator()(double u) const {
    if (!(u >= 0) || u > u_max_) throw Error(ErrorCode::OutOfRange, "dickman_rho: u outside [0, u_max]");
    if (u <= 1.0) return 1.0;
    const double pos = u * static_cast<double>(per_unit_);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

 private:
  double u_max_ = 20.0;
  std::size_t per_unit_ = 10000;
  double step_ = 1e-4;
  std::vector<double> values_;
};

inline double dickman_rho(double u) {
  static const DickmanTable table;
  return table(u);
}

struct SmoothStats {
  double x = 0, y = 0;
  double u = 0;  // log x / log y
  double H = 1;  // exp(u / log^2(u + 1))
};

inline SmoothStats smooth_stats(double x, double y) {
  if (!(x > 1) || !(y > 1)) throw Error(ErrorCode::OutOfRange, "smooth_stats: x, y > 1");
  SmoothStats s{x, y, std::log(x) / std::log(y), 1.0};
  const double l = std::log(s.u + 1.0);
  s.H = std::exp(s.u / (l * l));
  return s;
}

/// n = l * m * rest with L0 < l <= L0 P-(l), M0 < m <= M0 P-(m),
/// P+(m) <= P-(l) and P+(rest) <= P-(m).
struct SmoothFactorization {
  u64 l = 1;
  u64 m = 1;
  u64 rest = 1;
  friend bool operator==(const SmoothFactorization&, const SmoothFactorization&) = default;
};

/// Greedy split taking primes of n in decreasing order; nullopt when the
/// primes run out before a threshold is crossed.
inline std::optional<SmoothFactorization> factor_smooth(const Factorization& f, double L0, double M0) {
  std::vector<u64> primes;  // with multiplicity, descending
  for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it)
    for (unsigned k = 0; k < it->exponent; ++k) primes.push_back(it->prime);
  std::size_t next = 0;
  auto grow_past = [&](double threshold) -> std::optional<u64> {
    u64 product = 1;
    do {
      if (next == primes.size()) return std::nullopt;
      product *= primes[next++];
    } while (static_cast<double>(product) <= threshold);
    return product;
  };
  const auto l = grow_past(L0);
  if (!l) return std::nullopt;
  const auto m = grow_past(M0);
  if (!m) return std::nullopt;
  return SmoothFactorization{*l, *m, f.n / (*l * *m)};
}

inline std::optional<SmoothFactorization> factor_smooth(u64 n, double L0, double M0) {
  return factor_smooth(factorize(n), L0, M0);
}

/// Same split, reading prime factors off the table instead of trial division.
inline std::optional<SmoothFactorization> factor_smooth(u64 n, double L0, double M0, const SmoothTable& table) {
  table.require_covers(static_cast<double>(n));
  Factorization f;
  f.n = n;
  for (u64 rest = n; rest > 1;) {
    const u64 p = table.lpf(rest);
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    f.factors.insert(f.factors.begin(), PrimePower{p, e});
  }
  return factor_smooth(f, L0, M0);
}

}  // namespace friable
