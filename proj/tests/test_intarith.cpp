#include <gtest/gtest.h>

#include <random>

#include "qrl/intarith.hpp"

using namespace qrl;

namespace {

// Kronecker symbol straight from its definition: factor n, Legendre symbols
// by Euler's criterion, the 2-part by a mod 8 and the sign by a < 0.
int kronecker_oracle(Int a, Int n)
{
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int s = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) s = -s;
    }
    for (Int p = 2; n > 1; ++p) {
        while (n % p == 0) {
            n /= p;
            int f;
            if (p == 2) {
                Int r = ((a % 8) + 8) % 8;
                f = (r % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
            } else {
                Int r = ((a % p) + p) % p;
                if (r == 0) {
                    f = 0;
                } else {
                    Int e = 1, b = r;
                    for (Int k = (p - 1) / 2; k > 0; k >>= 1) {
                        if (k & 1) e = e * b % p;
                        b = b * b % p;
                    }
                    f = e == 1 ? 1 : -1;
                }
            }
            s *= f;
        }
    }
    return s;
}

}  // namespace

TEST(Kronecker, Examples)
{
    EXPECT_EQ(kronecker(5, 5), 0);
    EXPECT_EQ(kronecker(13, 3), 1);
    EXPECT_EQ(kronecker(17, 2), 1);
    EXPECT_EQ(kronecker(5, 2), -1);
    EXPECT_EQ(kronecker(-1, -1), -1);
    EXPECT_EQ(kronecker(3, 0), 0);
    EXPECT_EQ(kronecker(-1, 0), 1);
}

TEST(Kronecker, MatchesDefinition)
{
    for (Int a = -100; a <= 100; ++a)
        for (Int n = -100; n <= 100; ++n) ASSERT_EQ(kronecker(a, n), kronecker_oracle(a, n)) << a << " " << n;
}

TEST(Kronecker, Multiplicative)
{
    for (Int a = -50; a <= 50; ++a)
        for (Int b = -50; b <= 50; ++b)
            for (Int n = 1; n <= 50; ++n)
                ASSERT_EQ(kronecker(a, n) * kronecker(b, n), kronecker(a * b, n)) << a << " " << b << " " << n;
}

TEST(Kronecker, MultiplicativeInN)
{
    for (Int a = -50; a <= 50; ++a)
        for (Int m = -50; m <= 50; ++m)
            for (Int n = -50; n <= 50; ++n) {
                if (m == 0 || n == 0) continue;  // (+-1/0) = 1 breaks it through 0
                ASSERT_EQ(kronecker(a, m) * kronecker(a, n), kronecker(a, m * n)) << a << " " << m << " " << n;
            }
}

TEST(Kronecker, EulerCriterion)
{
    for (Int p : primes_up_to(200)) {
        if (p == 2) continue;
        for (Int a = -3 * p; a <= 3 * p; ++a) {
            if (mod(a, p) == 0) continue;
            auto e = powmod(static_cast<std::uint64_t>(mod(a, p)), static_cast<std::uint64_t>((p - 1) / 2),
                            static_cast<std::uint64_t>(p));
            ASSERT_EQ(kronecker(a, p), e == 1 ? 1 : -1) << a << " " << p;
        }
    }
}

TEST(Kronecker, LargeArguments)
{
    // 10^9+7 = 3 (mod 4) and 2 is a non-residue mod 3, 5 mod 8.
    EXPECT_EQ(kronecker(-1, 1'000'000'007), -1);
    const Int p = 1'000'000'007;
    for (Int a : {2LL, 3LL, 5LL, 12345LL, 999'999'999LL}) {
        auto e = powmod(static_cast<std::uint64_t>(a), (p - 1) / 2, p);
        EXPECT_EQ(kronecker(a, p), e == 1 ? 1 : -1);
    }
}

TEST(Squarefree, Examples)
{
    EXPECT_TRUE(is_squarefree(41).squarefree);
    auto r49 = is_squarefree(49);
    EXPECT_FALSE(r49.squarefree);
    EXPECT_EQ(r49.witness, 7);
    auto r12 = is_squarefree(12);
    EXPECT_FALSE(r12.squarefree);
    EXPECT_EQ(r12.witness, 2);
    EXPECT_TRUE(is_squarefree(1).squarefree);
    EXPECT_THROW(is_squarefree(0), domain_error);
}

TEST(Squarefree, BruteForce)
{
    for (Int n = 1; n <= 30000; ++n) {
        Int witness = 0;
        for (Int p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) {
                witness = p;
                break;
            }
        auto r = is_squarefree(n);
        ASSERT_EQ(r.squarefree, witness == 0) << n;
        ASSERT_EQ(r.witness, witness) << n;
    }
}

TEST(Squarefree, LargeCofactors)
{
    const Int p = 1'000'003, q = 1'000'033;  // both prime
    EXPECT_TRUE(is_squarefree(p * q).squarefree);
    auto sq = is_squarefree(p * p);
    EXPECT_FALSE(sq.squarefree);
    EXPECT_EQ(sq.witness, p);
    EXPECT_FALSE(is_squarefree(3 * p * p).squarefree);
    EXPECT_TRUE(is_squarefree(6 * p).squarefree);
    EXPECT_EQ(is_squarefree(p * p * 4).witness, 2);
}

TEST(Primes, AgreeWithSieve)
{
    auto primes = primes_up_to(200000);
    std::vector<bool> mark(200001, false);
    for (Int p : primes) mark[static_cast<std::size_t>(p)] = true;
    for (Int n = 0; n <= 200000; ++n) ASSERT_EQ(is_prime(n), mark[static_cast<std::size_t>(n)]) << n;
}

TEST(Primes, StrongPseudoprimes)
{
    EXPECT_FALSE(is_prime(3'215'031'751LL));              // spsp to bases 2, 3, 5, 7
    EXPECT_FALSE(is_prime(3'825'123'056'546'413'051LL));  // spsp to bases up to 23
    EXPECT_TRUE(is_prime(2'305'843'009'213'693'951LL));   // 2^61 - 1
    EXPECT_TRUE(is_prime(1'000'000'007));
    EXPECT_EQ(next_prime(1'000'000'000), 1'000'000'007);
}

TEST(Isqrt, Boundaries)
{
    for (Int k : {1LL, 2LL, 3LL, 1000LL, 65535LL, 65536LL, 3'037'000'499LL}) {
        EXPECT_EQ(isqrt(k * k), k);
        EXPECT_EQ(isqrt(k * k - 1), k - 1);
        EXPECT_TRUE(is_square(k * k));
        if (k > 1) {
            EXPECT_FALSE(is_square(k * k - 1));
        }
    }
    EXPECT_EQ(isqrt(std::numeric_limits<Int>::max()), 3'037'000'499LL);
    EXPECT_EQ(icbrt(1'000'000'000'000'000'000LL), 1'000'000);
    EXPECT_EQ(icbrt(999'999'999'999'999'999LL), 999'999);
}

TEST(FundamentalDecomposition, Examples)
{
    auto a = fundamental_decomposition(13);
    EXPECT_EQ(a.d0, 13);
    EXPECT_EQ(a.f, 1);
    auto b = fundamental_decomposition(45);
    EXPECT_EQ(b.d0, 5);
    EXPECT_EQ(b.f, 3);
    auto c = fundamental_decomposition(40);
    EXPECT_EQ(c.d0, 40);
    EXPECT_EQ(c.f, 1);
    auto e = fundamental_decomposition(32);
    EXPECT_EQ(e.d0, 8);
    EXPECT_EQ(e.f, 2);
}

TEST(FundamentalDecomposition, Errors)
{
    EXPECT_THROW(fundamental_decomposition(16), domain_error);
    EXPECT_THROW(fundamental_decomposition(6), domain_error);
    EXPECT_THROW(fundamental_decomposition(7), domain_error);
    EXPECT_THROW(fundamental_decomposition(0), domain_error);
    EXPECT_THROW(fundamental_decomposition(-3), domain_error);
}

TEST(FundamentalDecomposition, RoundTrip)
{
    for (Int d = 5; d <= 20000; ++d) {
        if (!is_discriminant(d)) continue;
        auto [d0, f] = fundamental_decomposition(d);
        ASSERT_EQ(d0 * f * f, d);
        // oracle: the largest f with d/f^2 = 0, 1 (mod 4)
        Int best = 1;
        for (Int g = 1; g * g <= d; ++g)
            if (d % (g * g) == 0 && (d / (g * g)) % 4 <= 1) best = g;
        ASSERT_EQ(f, best) << d;
        Int odd = d0 % 4 == 0 ? d0 / 4 : d0;
        while (odd % 2 == 0) odd /= 2;
        ASSERT_TRUE(is_squarefree(odd).squarefree) << d;
        ASSERT_TRUE(d0 % 4 == 1 || (d0 % 4 == 0 && (d0 / 4 % 4 == 2 || d0 / 4 % 4 == 3))) << d;
    }
}

TEST(Crt, Examples)
{
    auto a = crt({0, 1}, {3, 2});
    EXPECT_EQ(a.residue, 3);
    EXPECT_EQ(a.modulus, 6);
    auto b = crt({1, 1}, {2, 3});
    EXPECT_EQ(b.residue, 1);
    EXPECT_EQ(b.modulus, 6);
    auto empty = crt(std::span<const Int>{}, std::span<const Int>{});
    EXPECT_EQ(empty.residue, 0);
    EXPECT_EQ(empty.modulus, 1);
}

TEST(Crt, NamesTheOffendingPair)
{
    try {
        crt({0, 0}, {4, 6});
        FAIL() << "expected an error";
    } catch (const domain_error& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("4"), std::string::npos);
        EXPECT_NE(msg.find("6"), std::string::npos);
    }
    EXPECT_THROW(crt({0}, {3, 5}), domain_error);
}

TEST(Crt, RandomAgainstEnumeration)
{
    std::mt19937_64 rng(20240611);
    const std::vector<Int> pool{2, 3, 5, 7, 11, 13, 4, 9, 25, 17};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Int> mods, res;
        Int M = 1;
        for (Int m : pool) {
            if (rng() % 3 != 0) continue;
            if (gcd(M, m) != 1 || M * m > 200000) continue;
            mods.push_back(m);
            res.push_back(static_cast<Int>(rng() % 1000) - 500);
            M *= m;
        }
        auto c = crt(res, mods);
        ASSERT_EQ(c.modulus, M);
        Int found = -1;
        for (Int r = 0; r < M && found < 0; ++r) {
            bool ok = true;
            for (std::size_t i = 0; i < mods.size() && ok; ++i) ok = mod(r - res[i], mods[i]) == 0;
            if (ok) found = r;
        }
        ASSERT_EQ(c.residue, found);
    }
}

TEST(Discriminant, Accessors)
{
    Discriminant D(180);
    EXPECT_EQ(D.fundamental(), 5);
    EXPECT_EQ(D.conductor(), 6);
    EXPECT_EQ(D.sqrt_floor(), 13);
    EXPECT_FALSE(D.is_fundamental());
    EXPECT_TRUE(is_fundamental_discriminant(5));
    EXPECT_TRUE(is_fundamental_discriminant(12));
    EXPECT_FALSE(is_fundamental_discriminant(20));
    EXPECT_FALSE(is_fundamental_discriminant(9));
}

TEST(Factorize, Products)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        Int n = static_cast<Int>(rng() % 1'000'000'000) + 1;
        Int back = 1;
        for (auto [p, k] : factorize(n)) {
            ASSERT_TRUE(is_prime(p));
            for (int j = 0; j < k; ++j) back *= p;
        }
        ASSERT_EQ(back, n);
    }
}
