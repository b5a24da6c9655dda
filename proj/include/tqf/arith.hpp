#pragma once

// Exact integer kernel: Jacobi symbols, deterministic primality, trial-division
// factorization, square roots modulo n, CRT and prime search in progressions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tqf/errors.hpp"

namespace tqf {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr i64 kFactorizeCap = 1'000'000'000'000;  // 10^12
inline constexpr i64 kPrimeSearchCeiling = 10'000'000;
inline constexpr i64 kBruteForcePrimePower = 4096;

/// Least nonnegative residue of a modulo n (n > 0).
inline i64 mod(i128 a, i64 n) {
  i128 r = a % n;
  return static_cast<i64>(r < 0 ? r + n : r);
}

inline i64 mulmod(i64 a, i64 b, i64 n) { return mod(static_cast<i128>(a) * b, n); }

inline i64 powmod(i64 base, u64 exp, i64 n) {
  if (n == 1) return 0;
  i64 result = 1;
  base = mod(base, n);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

inline i64 ipow(i64 base, int exp) {
  i64 r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// Floor square root of a nonnegative 128-bit value.
inline i64 isqrt(i128 n) {
  if (n <= 0) return 0;
  if (n < (i128{1} << 52)) {
    auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
  }
  auto r = static_cast<i128>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<i64>(r);
}

namespace detail {

// Bit r of the mask is set iff r is a square mod n.
constexpr std::uint64_t square_mask(std::uint64_t n) {
  std::uint64_t mask = 0;
  for (std::uint64_t x = 0; x < n; ++x) mask |= std::uint64_t{1} << (x * x % n);
  return mask;
}

// Squares mod 64, 63, 65 (via 65 = 5 * 13) and 11; rejects most non-squares before isqrt.
inline bool square_residue_filter(i128 n) {
  constexpr std::uint64_t k64 = square_mask(64), k63 = square_mask(63), k5 = square_mask(5),
                          k13 = square_mask(13), k11 = square_mask(11);
  const auto low = static_cast<std::uint64_t>(n);
  if (!((k64 >> (low & 63)) & 1)) return false;
  std::uint64_t u = n <= INT64_MAX ? low : static_cast<std::uint64_t>(n % (63 * 65 * 11));
  return ((k63 >> (u % 63)) & 1) && ((k5 >> (u % 5)) & 1) && ((k13 >> (u % 13)) & 1) && ((k11 >> (u % 11)) & 1);
}

}  // namespace detail

inline bool is_square(i128 n) {
  if (n < 0 || !detail::square_residue_filter(n)) return false;
  i128 r = isqrt(n);
  return r * r == n;
}

/// Modular inverse of a mod n; requires gcd(a, n) = 1.
inline i64 invmod(i64 a, i64 n) {
  i64 g = n, x = 0, x1 = 1, r = mod(a, n);
  i64 g1 = r;
  while (g1 != 0) {
    i64 q = g / g1;
    std::tie(g, g1) = std::pair{g1, g - q * g1};
    std::tie(x, x1) = std::pair{x1, x - q * x1};
  }
  if (g != 1) throw invalid_input("invmod: arguments are not coprime");
  return mod(x, n);
}

/// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(i64 a, i64 n) {
  if (n < 1 || n % 2 == 0) throw invalid_input("jacobi: lower argument must be odd and positive");
  a = mod(a, n);
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 3.3e24.
inline bool is_prime(i64 n) {
  if (n < 2) return false;
  static constexpr i64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (i64 p : kSmall) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (i64 a : kSmall) {
    i64 x = powmod(a, static_cast<u64>(d), n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  i64 prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Canonical factorization, ascending primes; empty for 1.
using Factorization = std::vector<PrimePower>;

inline Factorization factorize(i64 n) {
  if (n < 1) throw invalid_input("factorize: argument must be positive");
  if (n > kFactorizeCap) throw invalid_input("factorize: argument exceeds 10^12");
  Factorization out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline i64 factorization_value(const Factorization& f) {
  i64 v = 1;
  for (auto [p, e] : f) v *= ipow(p, e);
  return v;
}

/// Distinct odd primes dividing n.
inline std::vector<i64> odd_prime_divisors(i64 n) {
  std::vector<i64> out;
  for (auto [p, e] : factorize(n)) {
    if (p != 2) out.push_back(p);
  }
  return out;
}

/// Smallest r in [0, p) with r^2 = c (mod p), absent for non-residues.
inline std::optional<i64> sqrt_mod_prime(i64 c, i64 p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) throw invalid_input("sqrt_mod_prime: modulus must be an odd prime");
  c = mod(c, p);
  if (c == 0) return 0;
  if (jacobi(c, p) != 1) return std::nullopt;
  i64 r;
  if (p % 4 == 3) {
    r = powmod(c, static_cast<u64>((p + 1) / 4), p);
  } else {
    // Tonelli-Shanks
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++s;
    }
    i64 z = 2;
    while (jacobi(z, p) != -1) ++z;
    i64 m = s;
    i64 cc = powmod(z, static_cast<u64>(q), p);
    i64 t = powmod(c, static_cast<u64>(q), p);
    r = powmod(c, static_cast<u64>((q + 1) / 2), p);
    while (t != 1) {
      i64 i = 0, tt = t;
      while (tt != 1) {
        tt = mulmod(tt, tt, p);
        ++i;
      }
      i64 b = cc;
      for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
      m = i;
      cc = mulmod(b, b, p);
      t = mulmod(t, cc, p);
      r = mulmod(r, b, p);
    }
  }
  return std::min(r, p - r);
}

namespace detail {

// All x mod p^e with alpha*x^2 + beta = 0, found by lifting roots one power at a time.
inline std::vector<i64> lift_by_testing(i64 alpha, i64 beta, i64 p, int e) {
  std::vector<i64> roots;
  for (i64 x = 0; x < p; ++x) {
    if (mod(static_cast<i128>(alpha) * x * x + beta, p) == 0) roots.push_back(x);
  }
  i64 pk = p;
  for (int k = 1; k < e; ++k) {
    i64 next = pk * p;
    std::vector<i64> lifted;
    for (i64 r : roots) {
      for (i64 j = 0; j < p; ++j) {
        i64 x = r + j * pk;
        if (mod(static_cast<i128>(alpha) * x % next * x + beta, next) == 0) lifted.push_back(x);
      }
    }
    roots = std::move(lifted);
    pk = next;
  }
  return roots;
}

// Roots of x^2 = c mod p^e for odd p not dividing c: Tonelli-Shanks then Newton lifting.
inline std::vector<i64> hensel_sqrt(i64 c, i64 p, int e) {
  auto r0 = sqrt_mod_prime(c, p);
  if (!r0) return {};
  i64 r = *r0, pk = p;
  for (int k = 1; k < e; ++k) {
    i64 next = pk * p;
    // r <- r - (r^2 - c) / (2r)  (mod p^(k+1))
    i64 f = mod(static_cast<i128>(r) * r - c, next);
    r = mod(r - mulmod(f, invmod(mod(2 * static_cast<i128>(r), next), next), next), next);
    pk = next;
  }
  return r == 0 ? std::vector<i64>{0} : std::vector<i64>{std::min(r, pk - r), std::max(r, pk - r)};
}

// Roots of alpha*x^2 + beta = 0 modulo a prime power.
inline std::vector<i64> quadratic_roots_prime_power(i64 alpha, i64 beta, i64 p, int e) {
  i64 q = ipow(p, e);
  if (q < kBruteForcePrimePower) {
    std::vector<i64> roots;
    for (i64 x = 0; x < q; ++x) {
      if (mod(static_cast<i128>(alpha) * x * x + beta, q) == 0) roots.push_back(x);
    }
    return roots;
  }
  if (p != 2 && alpha % p != 0 && mod(beta, p) != 0) {
    i64 c = mulmod(mod(-static_cast<i128>(beta), q), invmod(alpha, q), q);
    return hensel_sqrt(c, p, e);
  }
  if (p > 1'000'000) throw invalid_input("quadratic congruence modulo a large prime power is outside desk scale");
  return lift_by_testing(alpha, beta, p, e);
}

}  // namespace detail

/// Combine x = r1 (mod n1), x = r2 (mod n2) for coprime moduli.
inline i64 crt(i64 r1, i64 n1, i64 r2, i64 n2) {
  i64 n = n1 * n2;
  i64 k = mulmod(mod(r2 - r1, n2), invmod(mod(n1, n2), n2), n2);
  return mod(static_cast<i128>(r1) + static_cast<i128>(n1) * k, n);
}

/// Complete sorted set of t mod n with alpha*t^2 + beta = 0 (mod n).
inline std::vector<i64> solve_quadratic_mod(i64 alpha, i64 beta, i64 n) {
  if (n < 1) throw invalid_input("modulus must be positive");
  std::vector<i64> acc{0};
  i64 accn = 1;
  for (auto [p, e] : factorize(n)) {
    auto roots = detail::quadratic_roots_prime_power(alpha, beta, p, e);
    if (roots.empty()) return {};
    i64 q = ipow(p, e);
    std::vector<i64> next;
    next.reserve(acc.size() * roots.size());
    for (i64 a : acc) {
      for (i64 r : roots) next.push_back(crt(a, accn, r, q));
    }
    acc = std::move(next);
    accn *= q;
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

/// All r mod n with r^2 = c (mod n), sorted.
inline std::vector<i64> solve_square_mod(i64 c, i64 n) {
  if (n < 1) throw invalid_input("solve_square_mod: modulus must be positive");
  return solve_quadratic_mod(1, mod(-static_cast<i128>(c), n), n);
}

/// Required value of jacobi(-u*q, p) for a candidate prime q.
struct SymbolCondition {
  i64 prime;
  int sign;
};

/// Smallest prime q = r (mod modulus), q not in avoid, with jacobi(-u*q, p) = sign
/// for every side condition. Throws search_bound_exceeded past 10^7.
inline i64 find_prime_in_ap(i64 r, i64 modulus, std::span<const SymbolCondition> conditions, i64 u,
                            const std::set<i64>& avoid) {
  if (modulus < 1) throw invalid_input("find_prime_in_ap: modulus must be positive");
  r = mod(r, modulus);
  if (std::gcd(r, modulus) != 1) throw invalid_input("find_prime_in_ap: residue not coprime to modulus");
  for (const auto& c : conditions) {
    if (c.prime < 3 || c.prime % 2 == 0) throw invalid_input("find_prime_in_ap: side conditions need odd primes");
  }
  for (i64 q = r; q <= kPrimeSearchCeiling; q += modulus) {
    if (avoid.contains(q)) continue;
    bool ok = std::all_of(conditions.begin(), conditions.end(), [&](const SymbolCondition& c) {
      return jacobi(mod(-static_cast<i128>(u) * q, c.prime), c.prime) == c.sign;
    });
    if (ok && is_prime(q)) return q;
  }
  std::ostringstream msg;
  msg << "no prime = " << r << " (mod " << modulus << ") below " << kPrimeSearchCeiling
      << " meets the side conditions";
  throw search_bound_exceeded(msg.str());
}

/// Decimal text of a 128-bit integer.
inline std::string to_decimal(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string out;
  while (u) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  return {out.rbegin(), out.rend()};
}

/// Inverse of to_decimal; throws parse_error on malformed or out-of-range text.
inline i128 parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool neg = !text.empty() && text[0] == '-';
  if (neg) ++i;
  if (i == text.size()) throw parse_error("empty integer");
  u128 limit = neg ? static_cast<u128>(1) << 127 : (static_cast<u128>(1) << 127) - 1;
  u128 u = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw parse_error("bad digit in integer");
    if (u > (limit - static_cast<u128>(c - '0')) / 10) throw parse_error("integer out of range");
    u = u * 10 + static_cast<u128>(c - '0');
  }
  return neg ? static_cast<i128>(~u + 1) : static_cast<i128>(u);
}

}  // namespace tqf
