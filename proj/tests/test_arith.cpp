#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "tqf/arith.hpp"

using namespace tqf;

namespace {

// Legendre symbol by listing squares mod p.
int qr_oracle(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  for (i64 x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

bool prime_oracle(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<i64> square_roots_oracle(i64 c, i64 n) {
  std::vector<i64> out;
  for (i64 r = 0; r < n; ++r)
    if (mod(static_cast<i128>(r) * r - c, n) == 0) out.push_back(r);
  return out;
}

}  // namespace

TEST(Jacobi, Examples) {
  EXPECT_EQ(jacobi(1, 15), 1);
  EXPECT_EQ(jacobi(2, 7), 1);
  EXPECT_EQ(jacobi(-5, 3), 1);
  EXPECT_EQ(jacobi(3, 9), 0);
  EXPECT_EQ(jacobi(5, 1), 1);
}

TEST(Jacobi, RejectsEvenOrNonpositive) {
  EXPECT_THROW(jacobi(1, 8), invalid_input);
  EXPECT_THROW(jacobi(1, 0), invalid_input);
  EXPECT_THROW(jacobi(1, -3), invalid_input);
}

TEST(Jacobi, MatchesSquaresOracleForSmallPrimes) {
  for (i64 p = 3; p < 1000; p += 2) {
    if (!prime_oracle(p)) continue;
    for (i64 a = 0; a < p; ++a) ASSERT_EQ(jacobi(a, p), qr_oracle(a, p)) << a << "/" << p;
  }
}

TEST(Jacobi, MultiplicativeInTop) {
  for (i64 n = 1; n <= 499; n += 2)
    for (i64 a = -500; a <= 500; a += 37)
      for (i64 b = -500; b <= 500; b += 41) ASSERT_EQ(jacobi(a * b, n), jacobi(a, n) * jacobi(b, n));
}

TEST(Primality, Examples) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_FALSE(is_prime(561));
  EXPECT_TRUE(is_prime(1000003));
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(9223372036854775783LL));  // largest prime below 2^63
  EXPECT_FALSE(is_prime(3215031751LL));          // strong pseudoprime to 2,3,5,7
}

TEST(Primality, MatchesTrialDivision) {
  for (i64 n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), prime_oracle(n)) << n;
}

TEST(Factorize, Examples) {
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_EQ(factorize(360), (Factorization{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_EQ(factorize(8103), (Factorization{{3, 1}, {37, 1}, {73, 1}}));
  EXPECT_THROW(factorize(0), invalid_input);
  EXPECT_THROW(factorize(kFactorizeCap + 1), invalid_input);
}

TEST(Factorize, ProductAndPrimality) {
  for (i64 n = 1; n < 5000; ++n) {
    auto f = factorize(n);
    ASSERT_EQ(factorization_value(f), n);
    for (std::size_t i = 0; i < f.size(); ++i) {
      ASSERT_TRUE(is_prime(f[i].prime));
      if (i) {
        ASSERT_LT(f[i - 1].prime, f[i].prime);
      }
    }
  }
}

TEST(SqrtModPrime, Examples) {
  EXPECT_EQ(sqrt_mod_prime(2, 7), 3);
  EXPECT_EQ(sqrt_mod_prime(0, 13), 0);
  EXPECT_FALSE(sqrt_mod_prime(3, 7).has_value());
  EXPECT_THROW(sqrt_mod_prime(1, 2), invalid_input);
  EXPECT_THROW(sqrt_mod_prime(1, 15), invalid_input);
}

TEST(SqrtModPrime, RootsAreSmallestAndCorrect) {
  for (i64 p : {3, 5, 13, 17, 41, 73, 97, 113, 257, 65537, 1000003}) {
    for (i64 c = 0; c < std::min<i64>(p, 400); ++c) {
      auto r = sqrt_mod_prime(c, p);
      ASSERT_EQ(r.has_value(), jacobi(c, p) != -1);
      if (!r) continue;
      ASSERT_GE(*r, 0);
      ASSERT_LT(*r, p);
      ASSERT_EQ(mulmod(*r, *r, p), c % p);
      ASSERT_LE(*r, p - *r);
    }
  }
}

TEST(SolveSquareMod, Examples) {
  EXPECT_EQ(solve_square_mod(1, 8), (std::vector<i64>{1, 3, 5, 7}));
  EXPECT_EQ(solve_square_mod(4, 12), (std::vector<i64>{2, 4, 8, 10}));
  EXPECT_EQ(solve_square_mod(24, 73), (std::vector<i64>{30, 43}));
  EXPECT_EQ(solve_square_mod(5, 1), (std::vector<i64>{0}));
  EXPECT_TRUE(solve_square_mod(3, 8).empty());
  EXPECT_THROW(solve_square_mod(1, 0), invalid_input);
}

TEST(SolveSquareMod, MatchesBruteForceSample) {
  for (i64 n = 1; n <= 400; ++n)
    for (i64 c = 0; c < n; ++c) ASSERT_EQ(solve_square_mod(c, n), square_roots_oracle(c, n)) << c << " mod " << n;
}

TEST(SolveSquareMod, LargePrimePowersUseLifting) {
  // 5^6 = 15625 and 7^5 = 16807 exceed the brute-force threshold
  for (i64 n : {15625LL, 16807LL, 15625LL * 8, 73LL * 73 * 73}) {
    for (i64 c : {1LL, 2LL, 4LL, 11LL, 25LL, 49LL, 14LL}) ASSERT_EQ(solve_square_mod(c, n), square_roots_oracle(c, n)) << c << " mod " << n;
  }
}

TEST(SolveQuadraticMod, GeneralCoefficients) {
  // 5 t^2 + 3 = 0 mod 8
  std::vector<i64> want;
  for (i64 t = 0; t < 8; ++t)
    if ((5 * t * t + 3) % 8 == 0) want.push_back(t);
  EXPECT_EQ(solve_quadratic_mod(5, 3, 8), want);
  // a | D m t^2 + 1 for the worked witness a = 5, D m = 6: t = 2, 3
  EXPECT_EQ(solve_quadratic_mod(6, 1, 5), (std::vector<i64>{2, 3}));
}

TEST(Crt, Combines) {
  EXPECT_EQ(crt(2, 3, 3, 5), 8);
  EXPECT_EQ(crt(0, 1, 4, 7), 4);
}

TEST(FindPrimeInAp, Examples) {
  std::set<i64> none;
  EXPECT_EQ(find_prime_in_ap(1, 8, {}, 1, none), 17);
  std::vector<SymbolCondition> c3{{3, +1}};
  EXPECT_EQ(find_prime_in_ap(5, 8, c3, 1, none), 5);
  EXPECT_EQ(find_prime_in_ap(1, 24, {}, 1, none), 73);
}

TEST(FindPrimeInAp, AvoidAndPremultiplier) {
  EXPECT_EQ(find_prime_in_ap(1, 8, {}, 1, {17}), 41);
  // jacobi(-2 q, 3) = 1 needs q = 1 mod 3
  std::vector<SymbolCondition> c3{{3, +1}};
  i64 q = find_prime_in_ap(1, 4, c3, 2, {});
  EXPECT_EQ(q, 13);
}

TEST(FindPrimeInAp, NoSmallerQualifyingPrime) {
  std::vector<SymbolCondition> cs{{3, -1}, {7, 1}};
  for (i64 r : {1, 3, 5, 7}) {
    i64 q = find_prime_in_ap(r, 8, cs, 1, {});
    ASSERT_TRUE(is_prime(q));
    ASSERT_EQ(q % 8, r);
    for (i64 s = r; s < q; s += 8) {
      bool ok = is_prime(s) && jacobi(-s, 3) == -1 && jacobi(-s, 7) == 1;
      ASSERT_FALSE(ok) << s;
    }
  }
}

TEST(FindPrimeInAp, Errors) {
  EXPECT_THROW(find_prime_in_ap(2, 8, {}, 1, {}), invalid_input);
  std::vector<SymbolCondition> even{{2, 1}};
  EXPECT_THROW(find_prime_in_ap(1, 8, even, 1, {}), invalid_input);
  // -q is a square mod 3 and a non-square mod 3 at once: impossible
  std::vector<SymbolCondition> clash{{3, 1}, {3, -1}};
  EXPECT_THROW(find_prime_in_ap(1, 8, clash, 1, {}), search_bound_exceeded);
}
