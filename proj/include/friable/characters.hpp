#pragma once

// Dirichlet characters modulo q as exponent vectors over an explicit
// generator basis of (Z/qZ)^x, plus the truncated projector omega_D, the
// error kernel E_D, Gauss sums and the multiplicative large sieve.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "friable/arith.hpp"
#include "friable/error.hpp"
#include "friable/smooth.hpp"

namespace friable {

using cplx = std::complex<double>;

inline constexpr u64 kDefaultCharacterCap = 10'000;

/// e(num / den) from an exact rational angle.
inline cplx unit_root(u64 num, u64 den) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num % den) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

/// (Z/qZ)^x as a product of cyclic groups with a discrete-log table.
class UnitGroupBasis {
 public:
  struct Generator {
    u64 residue = 1;
    u64 order = 1;
  };

  static std::shared_ptr<const UnitGroupBasis> make(u64 q) {
    return std::shared_ptr<const UnitGroupBasis>(new UnitGroupBasis(q));
  }

  u64 modulus() const { return q_; }
  u64 group_order() const { return phi_; }
  /// lcm of the generator orders; every character value is e(j / exponent()).
  u64 exponent() const { return lambda_; }
  std::size_t rank() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }

  bool is_unit(u64 n) const { return unit_[n % q_]; }

  /// Exponent vector of a unit residue.
  std::span<const std::uint32_t> exponents(u64 n) const {
    const u64 r = n % q_;
    return std::span<const std::uint32_t>(exps_).subspan(r * rank(), rank());
  }

  u64 residue_of(std::span<const std::uint32_t> e) const {
    i64 r = 1 % static_cast<i64>(q_);
    for (std::size_t i = 0; i < gens_.size(); ++i)
      r = mul_mod(r, pow_mod(static_cast<i64>(gens_[i].residue), e[i], static_cast<i64>(q_)), static_cast<i64>(q_));
    return static_cast<u64>(r);
  }

  u64 weight(std::size_t i) const { return lambda_ / gens_[i].order; }
  cplx root(u64 j) const { return roots_[j % lambda_]; }

 private:
  explicit UnitGroupBasis(u64 q) : q_(q) {
    if (q < 1) throw Error(ErrorCode::OutOfRange, "UnitGroupBasis: q >= 1");
    const auto f = factorize(q);
    phi_ = f.phi();
    const i64 qs = static_cast<i64>(q);
    for (const auto& [p, e] : f.factors) {
      u64 pk = 1;
      for (unsigned i = 0; i < e; ++i) pk *= p;
      const i64 cofactor = qs / static_cast<i64>(pk);
      auto lift = [&](i64 local) {
        return static_cast<u64>(crt_combine(local, static_cast<i64>(pk), 1, cofactor).residue);
      };
      if (p == 2) {
        if (e == 2) gens_.push_back({lift(3), 2});
        if (e >= 3) {
          gens_.push_back({lift(static_cast<i64>(pk) - 1), 2});
          gens_.push_back({lift(5), pk / 4});
        }
        continue;
      }
      gens_.push_back({lift(static_cast<i64>(primitive_root_prime_power(p, e))), pk / p * (p - 1)});
    }
    lambda_ = 1;
    for (const auto& g : gens_) lambda_ = std::lcm(lambda_, g.order);
    roots_.resize(lambda_);
    for (u64 j = 0; j < lambda_; ++j) roots_[j] = unit_root(j, lambda_);

    const std::size_t r = rank();
    exps_.assign(q * r, 0);
    unit_.assign(q, false);
    std::vector<std::uint32_t> e(r, 0);
    for (u64 count = 0; count < phi_; ++count) {
      const u64 res = residue_of(e);
      if (unit_[res]) throw Error(ErrorCode::InvariantViolation, "UnitGroupBasis: residue hit twice");
      unit_[res] = true;
      std::copy(e.begin(), e.end(), exps_.begin() + static_cast<std::ptrdiff_t>(res * r));
      for (std::size_t i = 0; i < r; ++i) {  // mixed-radix increment
        if (++e[i] < gens_[i].order) break;
        e[i] = 0;
      }
    }
  }

  static u64 primitive_root_prime_power(u64 p, unsigned e) {
    const auto pm1 = factorize(p - 1);
    const i64 ps = static_cast<i64>(p);
    u64 g = 2;
    for (;; ++g) {
      bool ok = true;
      for (const auto& f : pm1.factors)
        if (pow_mod(static_cast<i64>(g), (p - 1) / f.prime, ps) == 1) ok = false;
      if (ok) break;
    }
    if (p == 2) g = 1;
    if (e >= 2) {
      const i64 p2 = ps * ps;
      if (pow_mod(static_cast<i64>(g), p - 1, p2) == 1) g += p;
    }
    return g;
  }

  u64 q_ = 1;
  u64 phi_ = 1;
  u64 lambda_ = 1;
  std::vector<Generator> gens_;
  std::vector<std::uint32_t> exps_;
  std::vector<bool> unit_;
  std::vector<cplx> roots_;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroupBasis> basis, std::vector<std::uint32_t> exps)
      : basis_(std::move(basis)), exps_(std::move(exps)) {
    if (exps_.size() != basis_->rank()) throw Error(ErrorCode::OutOfRange, "DirichletCharacter: wrong rank");
    for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] %= basis_->generators()[i].order;
    conductor_ = compute_conductor();
  }

  u64 modulus() const { return basis_->modulus(); }
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  bool is_principal() const {
    for (auto a : exps_)
      if (a != 0) return false;
    return true;
  }
  std::span<const std::uint32_t> exponent_vector() const { return exps_; }
  const UnitGroupBasis& basis() const { return *basis_; }

  /// j with chi(n) = e(j / basis().exponent()), or -1 when gcd(n, q) > 1.
  i64 value_index(i64 n) const {
    const u64 r = static_cast<u64>(mod_reduce(n, static_cast<i64>(modulus())));
    if (!basis_->is_unit(r)) return -1;
    const auto e = basis_->exponents(r);
    const u64 lambda = basis_->exponent();
    u64 j = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i) j = (j + exps_[i] * e[i] * basis_->weight(i)) % lambda;
    return static_cast<i64>(j);
  }

  cplx operator()(i64 n) const {
    const i64 j = value_index(n);
    return j < 0 ? cplx{} : basis_->root(static_cast<u64>(j));
  }

  /// chi(0), ..., chi(q-1).
  std::vector<cplx> value_table() const {
    std::vector<cplx> t(modulus());
    for (u64 n = 0; n < modulus(); ++n) t[n] = (*this)(static_cast<i64>(n));
    return t;
  }

  DirichletCharacter conjugate() const {
    std::vector<std::uint32_t> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto ord = static_cast<std::uint32_t>(basis_->generators()[i].order);
      e[i] = (ord - exps_[i]) % ord;
    }
    return DirichletCharacter(basis_, std::move(e));
  }

 private:
  // Smallest d | q such that chi is trivial on every unit n == 1 (mod d),
  // i.e. chi factors through (Z/dZ)^x.
  u64 compute_conductor() const {
    const u64 q = modulus();
    if (is_principal()) return 1;
    for (u64 d : divisors(q)) {
      bool induced = true;
      for (u64 n = 1 % q; n < q || (q == 1 && n == 0); n += d) {
        if (basis_->is_unit(n) && value_index(static_cast<i64>(n)) != 0) {
          induced = false;
          break;
        }
        if (q == 1) break;
      }
      if (induced) return d;
    }
    return q;
  }

  std::shared_ptr<const UnitGroupBasis> basis_;
  std::vector<std::uint32_t> exps_;
  u64 conductor_ = 1;
};

inline u64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

/// All phi(q) characters mod q; the principal character comes first.
inline std::vector<DirichletCharacter> enumerate_characters(u64 q, u64 cap = kDefaultCharacterCap) {
  if (q < 1) throw Error(ErrorCode::OutOfRange, "enumerate_characters: q >= 1");
  if (q > cap) throw Error(ErrorCode::ModulusTooLarge, "enumerate_characters: q = " + std::to_string(q));
  auto basis = UnitGroupBasis::make(q);
  std::vector<DirichletCharacter> out;
  out.reserve(basis->group_order());
  std::vector<std::uint32_t> e(basis->rank(), 0);
  for (u64 count = 0; count < basis->group_order(); ++count) {
    out.emplace_back(basis, e);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (++e[i] < basis->generators()[i].order) break;
      e[i] = 0;
    }
  }
  return out;
}

struct CharacterSet {
  std::vector<DirichletCharacter> all;
  std::vector<DirichletCharacter> primitive;
};

/// Character lists keyed by modulus; entries are immutable once published.
class CharacterCache {
 public:
  explicit CharacterCache(u64 cap = kDefaultCharacterCap) : cap_(cap) {}

  std::shared_ptr<const CharacterSet> get(u64 q) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = sets_.find(q); it != sets_.end()) return it->second;
    }
    auto set = std::make_shared<CharacterSet>();
    set->all = enumerate_characters(q, cap_);
    for (const auto& chi : set->all)
      if (chi.is_primitive()) set->primitive.push_back(chi);
    std::lock_guard lock(mutex_);
    return sets_.try_emplace(q, std::move(set)).first->second;
  }

  u64 cap() const { return cap_; }

 private:
  u64 cap_;
  std::mutex mutex_;
  std::unordered_map<u64, std::shared_ptr<const CharacterSet>> sets_;
};

inline CharacterCache& default_character_cache() {
  static CharacterCache cache;
  return cache;
}

/// The primitive characters with cond | r and cond <= D, as one object.
class OmegaProjector {
 public:
  OmegaProjector(u64 r, u64 D, CharacterCache& cache = default_character_cache()) : r_(r), D_(D) {
    if (r < 1 || D < 1) throw Error(ErrorCode::OutOfRange, "omega_D: r, D >= 1");
    for (u64 d : divisors(r)) {
      if (d > D) break;
      auto set = cache.get(d);
      chars_.insert(chars_.end(), set->primitive.begin(), set->primitive.end());
    }
  }

  u64 modulus() const { return r_; }
  u64 conductor_bound() const { return D_; }
  std::span<const DirichletCharacter> characters() const { return chars_; }

  /// omega_D(k; r); each primitive chi is evaluated at its own conductor.
  cplx operator()(i64 k) const {
    cplx total{};
    for (const auto& chi : chars_) total += chi(k);
    return total;
  }

  /// E_D(k; r) = 1_{k = 1 (r)} - 1_{(k,r)=1} omega_D(k; r) / phi(r).
  cplx error_kernel(i64 k) const {
    const i64 rs = static_cast<i64>(r_);
    const double hit = mod_reduce(k - 1, rs) == 0 ? 1.0 : 0.0;
    if (std::gcd(static_cast<u64>(mod_reduce(k, rs)), r_) != 1) return {hit, 0.0};
    return cplx{hit, 0.0} - (*this)(k) / static_cast<double>(euler_phi(r_));
  }

 private:
  u64 r_;
  u64 D_;
  std::vector<DirichletCharacter> chars_;
};

inline cplx omega_D(i64 k, u64 r, u64 D, CharacterCache& cache = default_character_cache()) {
  return OmegaProjector(r, D, cache)(k);
}

inline cplx error_kernel_E_D(i64 k, u64 r, u64 D, CharacterCache& cache = default_character_cache()) {
  return OmegaProjector(r, D, cache).error_kernel(k);
}

/// The same kernel through its tail character sum over cond(chi) > D.
inline cplx error_kernel_tail(i64 k, u64 r, u64 D, CharacterCache& cache = default_character_cache()) {
  const i64 rs = static_cast<i64>(r);
  if (std::gcd(static_cast<u64>(mod_reduce(k, rs)), r) != 1) return {};
  cplx total{};
  for (const auto& chi : cache.get(r)->all)
    if (chi.conductor() > D) total += chi(k);
  return total / static_cast<double>(euler_phi(r));
}

struct GaussSum {
  cplx value;
  double bound = 0;  // cond(chi)^{1/2} * sum_{d | (a, q)} d
  bool holds = false;
};

inline GaussSum gauss_sum(const DirichletCharacter& chi, i64 a) {
  const u64 q = chi.modulus();
  const i64 qs = static_cast<i64>(q);
  const u64 ar = static_cast<u64>(mod_reduce(a, qs));
  cplx total{};
  for (u64 b = 0; b < q; ++b) {
    const i64 j = chi.value_index(static_cast<i64>(b));
    if (j < 0) continue;
    total += chi.basis().root(static_cast<u64>(j)) * unit_root(static_cast<u64>(mul_mod(static_cast<i64>(ar), static_cast<i64>(b), qs)), q);
  }
  GaussSum out;
  out.value = total;
  u64 sigma = 0;
  for (u64 d : divisors(std::gcd(ar, q) == 0 ? q : std::gcd(ar, q))) sigma += d;
  out.bound = std::sqrt(static_cast<double>(chi.conductor())) * static_cast<double>(sigma);
  out.holds = std::abs(total) <= out.bound + 1e-9;
  return out;
}

struct LargeSieveResult {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// sum_{q <= Q} q/phi(q) sum_{chi primitive mod q} |sum_{M < n <= M+N} a_n chi(n)|^2
/// against (N + Q^2 - 1) sum |a_n|^2; a[0] is the coefficient of n = M + 1.
inline LargeSieveResult large_sieve_check(u64 Q, i64 M, std::span<const cplx> a,
                                          CharacterCache& cache = default_character_cache()) {
  const u64 N = a.size();
  if (Q < 1 || N < 1) throw Error(ErrorCode::OutOfRange, "large_sieve_check: Q, N >= 1");
  LargeSieveResult out;
  double l2 = 0;
  for (const auto& v : a) l2 += std::norm(v);
  out.rhs = (static_cast<double>(N) + static_cast<double>(Q) * static_cast<double>(Q) - 1.0) * l2;
  for (u64 q = 1; q <= Q; ++q) {
    const auto set = cache.get(q);
    double inner = 0;
    for (const auto& chi : set->primitive) {
      const auto table = chi.value_table();
      cplx s{};
      for (u64 i = 0; i < N; ++i) s += a[i] * table[static_cast<u64>(mod_reduce(M + 1 + static_cast<i64>(i), static_cast<i64>(q)))];
      inner += std::norm(s);
    }
    out.lhs += static_cast<double>(q) / static_cast<double>(euler_phi(q)) * inner;
  }
  out.holds = out.lhs <= out.rhs + 1e-6 * out.rhs;
  return out;
}

/// sum_{q <= Q} phi(q)^{-1} sum_{chi mod q, 1 < cond <= D} |sum_{n in S(x,y)} chi(n)|.
inline double harper_sum(double x, double y, u64 Q, u64 D, const SmoothTable& table,
                         CharacterCache& cache = default_character_cache()) {
  if (Q > cache.cap()) throw Error(ErrorCode::CapExceeded, "harper_sum: Q above character cap");
  const auto smooth = table.smooth_numbers(x, y);
  double total = 0;
  for (u64 q = 1; q <= Q; ++q) {
    std::vector<u64> bins(q, 0);
    for (u64 n : smooth) ++bins[n % q];
    double inner = 0;
    for (const auto& chi : cache.get(q)->all) {
      if (chi.conductor() <= 1 || chi.conductor() > D) continue;
      cplx s{};
      for (u64 res = 0; res < q; ++res)
        if (bins[res] != 0) s += static_cast<double>(bins[res]) * chi(static_cast<i64>(res));
      inner += std::abs(s);
    }
    total += inner / static_cast<double>(euler_phi(q));
  }
  return total;
}

}  // namespace friable
