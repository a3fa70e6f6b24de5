#pragma once

// Exact integer and modular arithmetic on 63-bit operands.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "friable/error.hpp"

namespace friable {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline constexpr u64 kArithLimit = u64{1} << 63;

/// Least nonnegative residue of a modulo m (m >= 1).
inline i64 mod_reduce(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<i128>(mod_reduce(a, m)) * mod_reduce(b, m) % m);
}

inline i64 pow_mod(i64 base, u64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  i64 b = mod_reduce(base, m);
  while (exp > 0) {
    if (exp & 1u) result = mul_mod(result, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return result;
}

inline u64 gcd3(u64 a, u64 b, u64 c) { return std::gcd(std::gcd(a, b), c); }

/// Inverse of a modulo m, in [0, m). Modulo 1 every residue is 0, so the
/// inverse is 0 as well.
inline i64 mod_inverse(i64 a, i64 m) {
  if (m < 1) throw Error(ErrorCode::OutOfRange, "mod_inverse: modulus must be positive");
  if (m == 1) return 0;
  i64 old_r = mod_reduce(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - quot * r};
    std::tie(old_s, s) = std::pair{s, old_s - quot * s};
  }
  if (old_r != 1) {
    throw Error(ErrorCode::NotInvertible,
                std::to_string(a) + " has no inverse modulo " + std::to_string(m));
  }
  return mod_reduce(old_s, m);
}

/// The pair of inverses behind 1/(ab) == inv_a/b + inv_b/a (mod 1).
struct BezoutReciprocity {
  i64 inv_a_mod_b = 0;  // a * inv_a_mod_b == 1 (mod b)
  i64 inv_b_mod_a = 0;  // b * inv_b_mod_a == 1 (mod a)
  i64 numerator = 0;    // common value of both sides, as numerator / (a*b) in [0, 1)
  i64 denominator = 1;  // a * b
};

inline BezoutReciprocity bezout_reciprocity(i64 a, i64 b) {
  if (a < 1 || b < 1) throw Error(ErrorCode::OutOfRange, "bezout_reciprocity: a, b >= 1");
  if (std::gcd(a, b) != 1) throw Error(ErrorCode::NotCoprime, "bezout_reciprocity: gcd(a,b) > 1");
  const i128 ab = static_cast<i128>(a) * b;
  if (ab >= static_cast<i128>(kArithLimit)) throw Error(ErrorCode::Overflow, "bezout_reciprocity: ab >= 2^63");
  BezoutReciprocity out;
  out.inv_a_mod_b = mod_inverse(a, b);
  out.inv_b_mod_a = mod_inverse(b, a);
  out.denominator = static_cast<i64>(ab);
  // Multiplied through by ab: inv_a * a + inv_b * b == 1 (mod ab).
  const i128 lhs = static_cast<i128>(out.inv_a_mod_b) * a + static_cast<i128>(out.inv_b_mod_a) * b;
  const i128 residue = lhs % ab;
  const i128 one = ab == 1 ? 0 : 1;
  if (residue != one) {
    throw Error(ErrorCode::InvariantViolation, "bezout_reciprocity identity failed");
  }
  out.numerator = static_cast<i64>(residue);
  return out;
}

/// (a, b^inf): the largest divisor of a all of whose primes divide b.
inline u64 gcd_infinity(u64 a, u64 b) {
  if (a == 0 || b == 0) throw Error(ErrorCode::OutOfRange, "gcd_infinity: a, b >= 1");
  u64 result = 1;
  u64 g = std::gcd(a, b);
  while (g > 1) {
    a /= g;
    result *= g;
    g = std::gcd(a, g);
  }
  return result;
}

/// (a, (b_1 b_2 ... b_k)^inf) without forming the product.
inline u64 gcd_infinity_product(u64 a, std::initializer_list<u64> factors) {
  if (a == 0) throw Error(ErrorCode::OutOfRange, "gcd_infinity: a >= 1");
  u64 common = 1;
  for (u64 b : factors) {
    if (b == 0) throw Error(ErrorCode::OutOfRange, "gcd_infinity: factors >= 1");
    common = std::lcm(common, std::gcd(a, b));  // divides a, so no overflow
  }
  return gcd_infinity(a, common);
}

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod prime^exponent with primes strictly increasing.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  u64 tau() const {
    u64 t = 1;
    for (const auto& f : factors) t *= f.exponent + 1;
    return t;
  }
  u64 phi() const {
    u64 p = n;
    for (const auto& f : factors) p = p / f.prime * (f.prime - 1);
    return p;
  }
  int mobius() const {
    for (const auto& f : factors)
      if (f.exponent > 1) return 0;
    return factors.size() % 2 == 0 ? 1 : -1;
  }
  u64 rad() const {
    u64 r = 1;
    for (const auto& f : factors) r *= f.prime;
    return r;
  }
  u64 largest_prime() const { return factors.empty() ? 1 : factors.back().prime; }
  u64 smallest_prime() const { return factors.empty() ? 1 : factors.front().prime; }
};

/// Trial division on a mod-30 wheel.
inline Factorization factorize(u64 n) {
  if (n == 0) throw Error(ErrorCode::OutOfRange, "factorize: n >= 1");
  if (n >= kArithLimit) throw Error(ErrorCode::Overflow, "factorize: n >= 2^63");
  Factorization out;
  out.n = n;
  auto take = [&](u64 p) {
    if (n % p != 0) return;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  };
  take(2);
  take(3);
  take(5);
  static constexpr unsigned kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};  // 7, 11, 13, 17, 19, 23, 29, 31, ...
  u64 p = 7;
  for (unsigned i = 0; p <= n / p; p += kWheel[i], i = (i + 1) & 7u) take(p);
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

inline u64 tau(u64 n) { return factorize(n).tau(); }
inline u64 euler_phi(u64 n) { return factorize(n).phi(); }
inline int mobius(u64 n) { return factorize(n).mobius(); }
inline u64 rad(u64 n) { return factorize(n).rad(); }

/// All positive divisors, ascending.
inline std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> divs{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = divs.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

inline std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

struct CrtResult {
  i64 residue = 0;
  i64 modulus = 1;
  friend bool operator==(const CrtResult&, const CrtResult&) = default;
};

inline CrtResult crt_combine(i64 r1, i64 m1, i64 r2, i64 m2) {
  if (m1 < 1 || m2 < 1) throw Error(ErrorCode::OutOfRange, "crt_combine: moduli must be positive");
  if (std::gcd(m1, m2) != 1) throw Error(ErrorCode::NotCoprime, "crt_combine: moduli not coprime");
  const i128 prod = static_cast<i128>(m1) * m2;
  if (prod >= static_cast<i128>(kArithLimit)) throw Error(ErrorCode::Overflow, "crt_combine: m1*m2 >= 2^63");
  const i64 m = static_cast<i64>(prod);
  r1 = mod_reduce(r1, m1);
  r2 = mod_reduce(r2, m2);
  // r1 + m1 * t with t == (r2 - r1) * m1^{-1} (mod m2)
  const i64 t = mul_mod(mod_reduce(r2 - r1, m2), mod_inverse(m1, m2), m2);
  return {static_cast<i64>((static_cast<i128>(m1) * t + r1) % m), m};
}

/// Primes p <= limit, ascending.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

/// phi(n) for 0 <= n <= limit (phi(0) stored as 0).
inline std::vector<u64> phi_table(u64 limit) {
  std::vector<u64> phi(limit + 1);
  std::iota(phi.begin(), phi.end(), u64{0});
  for (u64 p = 2; p <= limit; ++p) {
    if (phi[p] != p) continue;
    for (u64 k = p; k <= limit; k += p) phi[k] -= phi[k] / p;
  }
  return phi;
}

/// Reduced fraction with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(i64 num, i64 den = 1) {
    if (den == 0) throw Error(ErrorCode::OutOfRange, "Rational: zero denominator");
    assign(num, den);
  }

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                     static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                     static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorCode::OutOfRange, "Rational: division by zero");
    return from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_wide(i128 num, i128 den) {
    if (den == 0) throw Error(ErrorCode::OutOfRange, "Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 a = num < 0 ? -num : num, b = den;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    const i128 lim = static_cast<i128>(kArithLimit);
    if (num >= lim || num <= -lim || den >= lim) throw Error(ErrorCode::Overflow, "Rational: overflow");
    Rational r;
    r.num_ = static_cast<i64>(num);
    r.den_ = static_cast<i64>(den);
    return r;
  }
  void assign(i64 num, i64 den) { *this = from_wide(num, den); }

  i64 num_ = 0;
  i64 den_ = 1;
};

}  // namespace friable
