#pragma once

// Exact integer primitives: Kronecker symbols, square roots, primality,
// squarefree testing, fundamental-discriminant decomposition and CRT.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace qrl {

using Int = std::int64_t;
using Wide = __int128;

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct overflow_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

inline Int narrow(Wide w, const char* where = "narrow")
{
    if (w > static_cast<Wide>(INT64_MAX) || w < static_cast<Wide>(INT64_MIN))
        throw overflow_error(std::string(where) + ": value exceeds 64 bits");
    return static_cast<Int>(w);
}

inline Int checked_mul(Int a, Int b) { return narrow(static_cast<Wide>(a) * b, "checked_mul"); }

/// Floor division for signed integers (rounds toward -infinity).
template <class T>
constexpr T floor_div(T a, T b)
{
    T q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Least non-negative residue of a modulo m (m > 0).
template <class T>
constexpr T mod(T a, T m)
{
    T r = a % m;
    return r < 0 ? r + m : r;
}

template <class T>
constexpr T gcd(T a, T b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        T t = a % b;
        a = b;
        b = t;
    }
    return a;
}

template <class T>
struct Bezout {
    T g, x, y;  // g = a*x + b*y, g >= 0
};

template <class T>
constexpr Bezout<T> ext_gcd(T a, T b)
{
    T old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        T q = old_r / r;
        T tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

/// Exact floor(sqrt(n)) by integer Newton iteration.
template <class T>
T isqrt(T n)
{
    if (n < 0) throw domain_error("isqrt of negative number");
    if (n < 2) return n;
    // Start above the root: 2^(ceil(bits/2)).
    T x = n;
    int bits = 0;
    for (T t = n; t > 0; t >>= 1) ++bits;
    x = T(1) << ((bits + 1) / 2);
    while (true) {
        T y = (x + n / x) >> 1;
        if (y >= x) break;
        x = y;
    }
    while (x > n / x) --x;
    while (x + 1 <= n / (x + 1)) ++x;
    return x;
}

template <class T>
bool is_square(T n)
{
    if (n < 0) return false;
    T r = isqrt(n);
    return r * r == n;
}

/// floor(cbrt(n)) for n >= 0.
inline Int icbrt(Int n)
{
    if (n < 0) throw domain_error("icbrt of negative number");
    Int lo = 0, hi = 2097152;  // 2^21 > cbrt(2^63)
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (static_cast<Wide>(mid) * mid * mid <= n) lo = mid; else hi = mid - 1;
    }
    return lo;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic strong-pseudoprime test. Bases 2..17 decide every n below
/// 3.4e14; the full twelve-prime battery covers the rest of the 64-bit range.
inline bool is_prime(Int n)
{
    if (n < 2) return false;
    for (Int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    auto u = static_cast<std::uint64_t>(n);
    std::uint64_t dd = u - 1;
    int s = 0;
    while ((dd & 1) == 0) { dd >>= 1; ++s; }
    auto witness = [&](std::uint64_t a) {
        std::uint64_t x = powmod(a, dd, u);
        if (x == 1 || x == u - 1) return false;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, u);
            if (x == u - 1) return false;
        }
        return true;
    };
    static constexpr std::uint64_t small_bases[] = {2, 3, 5, 7, 11, 13, 17};
    static constexpr std::uint64_t all_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (u < 341550071728321ULL) {
        for (auto a : small_bases)
            if (witness(a)) return false;
        return true;
    }
    for (auto a : all_bases)
        if (witness(a)) return false;
    return true;
}

inline Int next_prime(Int n)
{
    if (n < 2) return 2;
    Int c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

/// Sieve of Eratosthenes: all primes p <= n.
inline std::vector<Int> primes_up_to(Int n)
{
    std::vector<Int> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (Int i = 2; i <= n; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        if (i <= n / i)
            for (Int j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

/// Kronecker symbol (a/n) for arbitrary integers a, n.
inline int kronecker(Int a, Int n)
{
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while ((n & 1) == 0) { n >>= 1; ++twos; }
    if (twos > 0) {
        if ((a & 1) == 0) return 0;
        Int r8 = mod<Int>(a, 8);
        if ((twos & 1) && (r8 == 3 || r8 == 5)) result = -result;
    }
    // Jacobi symbol (a/n), n odd positive.
    a = mod(a, n);
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            Int r = n & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

struct SquarefreeResult {
    bool squarefree;
    Int witness;  // smallest prime p with p^2 | n; 0 when squarefree
    explicit operator bool() const { return squarefree; }
};

/// Squarefree test by trial division up to max(bound, cbrt n), then a
/// perfect-square test on the cofactor. A cofactor free of primes <= cbrt n
/// has at most two prime factors, so the test is exact.
inline SquarefreeResult is_squarefree(Int n, Int bound = 0)
{
    if (n < 1) throw domain_error("is_squarefree requires n >= 1");
    Int limit = std::max(bound, icbrt(n) + 1);
    auto strip = [&](Int p) -> bool {
        if (n % p != 0) return false;
        n /= p;
        return n % p == 0;
    };
    if (strip(2)) return {false, 2};
    if (strip(3)) return {false, 3};
    for (Int p = 5; p <= limit && p <= n; p += 6) {
        if (strip(p)) return {false, p};
        if (strip(p + 2)) return {false, p + 2};
    }
    if (n > 1 && is_square(n)) return {false, isqrt(n)};
    return {true, 0};
}

/// n = core * root^2 with core squarefree.
struct SquareSplit {
    Int core;
    Int root;
};

inline SquareSplit square_split(Int n)
{
    if (n < 1) throw domain_error("square_split requires n >= 1");
    Int core = 1, root = 1;
    Int limit = icbrt(n) + 1;
    auto take = [&](Int p) {
        int k = 0;
        while (n % p == 0) { n /= p; ++k; }
        for (int i = 0; i < k / 2; ++i) root *= p;
        if (k & 1) core *= p;
    };
    take(2);
    take(3);
    for (Int p = 5; p <= limit && p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) {
        if (is_square(n)) root *= isqrt(n);
        else core *= n;
    }
    return {core, root};
}

/// Trial-division factorization into (prime, exponent) pairs.
inline std::vector<std::pair<Int, int>> factorize(Int n)
{
    if (n < 1) throw domain_error("factorize requires n >= 1");
    std::vector<std::pair<Int, int>> f;
    auto take = [&](Int p) {
        int k = 0;
        while (n % p == 0) { n /= p; ++k; }
        if (k) f.emplace_back(p, k);
    };
    take(2);
    take(3);
    for (Int p = 5; p <= n / p; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) f.emplace_back(n, 1);
    std::sort(f.begin(), f.end());
    return f;
}

inline bool is_discriminant(Int d)
{
    Int r = mod<Int>(d, 4);
    return d > 0 && (r == 0 || r == 1) && !is_square(d);
}

/// Positive quadratic discriminant d = d0 * f^2 with d0 fundamental.
class Discriminant {
public:
    explicit Discriminant(Int d) : d_(d)
    {
        if (d <= 0) throw domain_error("discriminant must be positive: " + std::to_string(d));
        Int r = mod<Int>(d, 4);
        if (r == 2 || r == 3)
            throw domain_error("not a discriminant (d = 2,3 mod 4): " + std::to_string(d));
        if (is_square(d)) throw domain_error("discriminant is a perfect square: " + std::to_string(d));
        auto [core, root] = square_split(d);
        if (mod<Int>(core, 4) == 1) {
            d0_ = core;
            f_ = root;
        } else {
            d0_ = 4 * core;
            f_ = root / 2;
        }
        sqrt_floor_ = isqrt(d);
    }

    Int value() const { return d_; }
    Int fundamental() const { return d0_; }
    Int conductor() const { return f_; }
    Int sqrt_floor() const { return sqrt_floor_; }
    bool is_fundamental() const { return f_ == 1; }
    long double sqrt() const { return sqrtl(static_cast<long double>(d_)); }

    friend bool operator==(const Discriminant& a, const Discriminant& b) { return a.d_ == b.d_; }

private:
    Int d_;
    Int d0_ = 0;
    Int f_ = 0;
    Int sqrt_floor_ = 0;
};

struct FundamentalSplit {
    Int d0;
    Int f;
};

inline FundamentalSplit fundamental_decomposition(Int d)
{
    Discriminant D(d);
    return {D.fundamental(), D.conductor()};
}

inline bool is_fundamental_discriminant(Int d)
{
    if (!is_discriminant(d)) return false;
    return Discriminant(d).is_fundamental();
}

struct CrtResult {
    Int residue;
    Int modulus;
};

/// Chinese remaindering for pairwise coprime moduli.
inline CrtResult crt(std::span<const Int> residues, std::span<const Int> moduli)
{
    if (residues.size() != moduli.size())
        throw domain_error("crt: residues and moduli differ in length");
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (moduli[i] <= 0) throw domain_error("crt: moduli must be positive");
        for (std::size_t j = i + 1; j < moduli.size(); ++j) {
            if (gcd(moduli[i], moduli[j]) != 1)
                throw domain_error("crt: moduli " + std::to_string(moduli[i]) + " and " +
                                   std::to_string(moduli[j]) + " are not coprime");
        }
    }
    Int r = 0, m = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        Int mi = moduli[i];
        Int ri = mod(residues[i], mi);
        // r + m*t = ri (mod mi)
        auto bz = ext_gcd<Wide>(mod(m, mi), mi);
        Wide t = mod<Wide>(static_cast<Wide>(ri - mod(r, mi)) * bz.x, mi);
        Wide next_m = static_cast<Wide>(m) * mi;
        r = narrow(mod<Wide>(r + static_cast<Wide>(m) * t, next_m), "crt");
        m = narrow(next_m, "crt modulus");
    }
    return {r, m};
}

inline CrtResult crt(std::initializer_list<Int> residues, std::initializer_list<Int> moduli)
{
    return crt(std::span<const Int>(residues.begin(), residues.size()),
               std::span<const Int>(moduli.begin(), moduli.size()));
}

}  // namespace qrl
