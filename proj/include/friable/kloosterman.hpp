#pragma once

// Complete Kloosterman sums S(m, n; c), Ramanujan sums and the Weil bound.

#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "friable/arith.hpp"
#include "friable/characters.hpp"
#include "friable/error.hpp"

namespace friable {

inline constexpr u64 kDirectLoopCap = 1'000'000;
inline constexpr u64 kFastModulusLimit = u64{1} << 31;
inline constexpr u64 kKahanThreshold = 100'000;

struct KloostermanQuery {
  i64 m = 0;
  i64 n = 0;
  u64 c = 1;
};

/// Test hook: when set, kloosterman_fast returns the negated value.
inline std::atomic<bool>& kloosterman_fault_injection() {
  static std::atomic<bool> flag{false};
  return flag;
}

namespace detail {

class ComplexAccumulator {
 public:
  explicit ComplexAccumulator(bool compensated) : compensated_(compensated) {}

  void add(cplx v) {
    if (!compensated_) {
      sum_ += v;
      return;
    }
    add_one(sum_re_, err_re_, v.real());
    add_one(sum_im_, err_im_, v.imag());
  }

  cplx value() const { return compensated_ ? cplx{sum_re_ + err_re_, sum_im_ + err_im_} : sum_; }

 private:
  static void add_one(double& sum, double& err, double v) {
    const double y = v - err;
    const double t = sum + y;
    err = (t - sum) - y;
    sum = t;
  }

  bool compensated_;
  cplx sum_{};
  double sum_re_ = 0, err_re_ = 0, sum_im_ = 0, err_im_ = 0;
};

inline void require_real(cplx s, const KloostermanQuery& q) {
  if (std::abs(s.imag()) >= 1e-6) {
    throw Error(ErrorCode::InvariantViolation, "Kloosterman sum not real at (" + std::to_string(q.m) + ", " +
                                                   std::to_string(q.n) + "; " + std::to_string(q.c) + ")");
  }
}

inline cplx kloosterman_loop(i64 m, i64 n, u64 c) {
  const i64 cs = static_cast<i64>(c);
  const i64 mr = mod_reduce(m, cs);
  const i64 nr = mod_reduce(n, cs);
  ComplexAccumulator acc(c > kKahanThreshold);
  if (c == 1) return {1.0, 0.0};
  for (i64 b = 1; b < cs; ++b) {
    if (std::gcd(static_cast<u64>(b), c) != 1) continue;
    const i64 binv = mod_inverse(b, cs);
    const i64 phase = (mul_mod(mr, b, cs) + mul_mod(nr, binv, cs)) % cs;
    acc.add(unit_root(static_cast<u64>(phase), c));
  }
  return acc.value();
}

// Odd prime power p^k: walk the cyclic unit group along a primitive root so
// that b and its inverse advance together without per-term inversions.
inline cplx kloosterman_prime_power(i64 m, i64 n, u64 p, unsigned k) {
  u64 c = 1;
  for (unsigned i = 0; i < k; ++i) c *= p;
  if (c <= 4096) return kloosterman_loop(m, n, c);
  const i64 cs = static_cast<i64>(c);
  const i64 mr = mod_reduce(m, cs);
  const i64 nr = mod_reduce(n, cs);
  ComplexAccumulator acc(c > kKahanThreshold);
  auto term = [&](i64 b, i64 binv) {
    const i64 phase = (mul_mod(mr, b, cs) + mul_mod(nr, binv, cs)) % cs;
    acc.add(unit_root(static_cast<u64>(phase), c));
  };
  if (p == 2) {
    // units of Z/2^k are +-5^j
    const i64 g = 5 % cs;
    const i64 ginv = mod_inverse(g, cs);
    i64 b = 1, binv = 1;
    for (u64 j = 0; j < c / 4; ++j) {
      term(b, binv);
      term(cs - b, cs - binv);
      b = mul_mod(b, g, cs);
      binv = mul_mod(binv, ginv, cs);
    }
    return acc.value();
  }
  const auto basis_order = c / p * (p - 1);
  // primitive root modulo p^k
  const auto pm1 = factorize(p - 1);
  i64 g = 2;
  for (;; ++g) {
    bool ok = true;
    for (const auto& f : pm1.factors)
      if (pow_mod(g, (p - 1) / f.prime, static_cast<i64>(p)) == 1) ok = false;
    if (ok) break;
  }
  if (k >= 2 && pow_mod(g, p - 1, static_cast<i64>(p * p)) == 1) g += static_cast<i64>(p);
  const i64 ginv = mod_inverse(g, cs);
  i64 b = 1, binv = 1;
  for (u64 j = 0; j < basis_order; ++j) {
    term(b, binv);
    b = mul_mod(b, g, cs);
    binv = mul_mod(binv, ginv, cs);
  }
  return acc.value();
}

inline cplx kloosterman_crt(i64 m, i64 n, const Factorization& f, std::size_t first) {
  const auto& pp = f.factors[first];
  if (first + 1 == f.factors.size()) return kloosterman_prime_power(m, n, pp.prime, pp.exponent);
  i64 c1 = 1;
  for (unsigned i = 0; i < pp.exponent; ++i) c1 *= static_cast<i64>(pp.prime);
  const i64 c2 = static_cast<i64>(f.n) / c1;
  const i64 c1_inv = mod_inverse(c1, c2);
  const i64 c2_inv = mod_inverse(c2, c1);
  const cplx left = kloosterman_prime_power(mul_mod(mod_reduce(m, c1), c2_inv, c1), mul_mod(mod_reduce(n, c1), c2_inv, c1),
                                            pp.prime, pp.exponent);
  Factorization rest;
  rest.n = static_cast<u64>(c2);
  rest.factors.assign(f.factors.begin() + static_cast<std::ptrdiff_t>(first) + 1, f.factors.end());
  const cplx right = kloosterman_crt(mul_mod(mod_reduce(m, c2), c1_inv, c2), mul_mod(mod_reduce(n, c2), c1_inv, c2), rest, 0);
  return left * right;
}

}  // namespace detail

/// Direct loop over (Z/cZ)^x, returned as accumulated.
inline cplx kloosterman_direct_complex(const KloostermanQuery& q) {
  if (q.c < 1) throw Error(ErrorCode::OutOfRange, "Kloosterman modulus must be >= 1");
  if (q.c > kDirectLoopCap) throw Error(ErrorCode::CapExceeded, "direct Kloosterman loop limited to c <= 10^6");
  return detail::kloosterman_loop(q.m, q.n, q.c);
}

inline double kloosterman_direct(const KloostermanQuery& q) {
  const cplx s = kloosterman_direct_complex(q);
  detail::require_real(s, q);
  return s.real();
}

/// Twisted multiplicativity down to prime powers.
inline double kloosterman_fast(const KloostermanQuery& q) {
  if (q.c < 1 || q.c >= kFastModulusLimit) throw Error(ErrorCode::OutOfRange, "kloosterman_fast: need 1 <= c < 2^31");
  double value = 1.0;
  if (q.c > 1) {
    const cplx s = detail::kloosterman_crt(q.m, q.n, factorize(q.c), 0);
    detail::require_real(s, q);
    value = s.real();
  }
  return kloosterman_fault_injection().load(std::memory_order_relaxed) ? -value : value;
}

/// S(m, n; c) for n = 0, ..., c-1 at once, as complex accumulations.
inline std::vector<cplx> kloosterman_row(i64 m, u64 c) {
  if (c < 1 || c > kDirectLoopCap) throw Error(ErrorCode::CapExceeded, "kloosterman_row: 1 <= c <= 10^6");
  const i64 cs = static_cast<i64>(c);
  std::vector<cplx> roots(c);
  for (u64 j = 0; j < c; ++j) roots[j] = unit_root(j, c);
  std::vector<u64> inv;
  std::vector<cplx> head;
  const i64 mr = mod_reduce(m, cs);
  for (i64 b = 0; b < cs; ++b) {
    if (std::gcd(static_cast<u64>(b), c) != 1) continue;
    inv.push_back(static_cast<u64>(mod_inverse(b, cs)));
    head.push_back(roots[static_cast<u64>(mul_mod(mr, b, cs))]);
  }
  std::vector<cplx> row(c);
  std::vector<u64> idx(inv.size(), 0);
  for (u64 n = 0; n < c; ++n) {
    cplx s{};
    for (std::size_t i = 0; i < inv.size(); ++i) {
      s += head[i] * roots[idx[i]];
      idx[i] += inv[i];
      if (idx[i] >= c) idx[i] -= c;
    }
    row[n] = s;
  }
  return row;
}

/// S(0, n; c) = sum_{d | (n, c)} d mu(c/d).
inline i64 ramanujan_sum(i64 n, u64 c) {
  if (c < 1) throw Error(ErrorCode::OutOfRange, "ramanujan_sum: c >= 1");
  const u64 g = std::gcd(static_cast<u64>(n < 0 ? -n : n), c);
  i64 total = 0;
  for (u64 d : divisors(g)) total += static_cast<i64>(d) * mobius(c / d);
  return total;
}

/// ramanujan_sum with the Ramanujan bound and the direct loop both enforced.
inline i64 ramanujan_sum_checked(i64 n, u64 c) {
  const i64 value = ramanujan_sum(n, c);
  const u64 g = std::gcd(static_cast<u64>(n < 0 ? -n : n), c);
  if (static_cast<u64>(value < 0 ? -value : value) > g) throw Error(ErrorCode::InvariantViolation, "|c_c(n)| > (n, c)");
  const double direct = kloosterman_direct({0, n, c});
  if (std::abs(direct - static_cast<double>(value)) > 1e-6) {
    throw Error(ErrorCode::InvariantViolation, "Ramanujan formula disagrees with direct loop");
  }
  return value;
}

struct WeilCheck {
  double value = 0;  // |S(m, n; c)|
  double bound = 0;  // tau(c) (m, n, c)^{1/2} c^{1/2}
  bool holds = false;
};

inline double weil_bound(i64 m, i64 n, u64 c) {
  const u64 g = gcd3(static_cast<u64>(m < 0 ? -m : m), static_cast<u64>(n < 0 ? -n : n), c);
  return static_cast<double>(tau(c)) * std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c));
}

inline WeilCheck weil_bound_check(const KloostermanQuery& q) {
  WeilCheck out;
  out.value = std::abs(kloosterman_direct(q));
  out.bound = weil_bound(q.m, q.n, q.c);
  out.holds = out.value <= out.bound + 1e-9;
  return out;
}

}  // namespace friable
