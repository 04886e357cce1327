#pragma once

// Ideals e*[a, (b+sqrt d)/2] and quadratic irrationals (b+sqrt d)/(2a) of the
// quadratic order O_d.

#include <optional>
#include <ostream>
#include <regex>
#include <string>

#include "qrl/intarith.hpp"

namespace qrl {

/// rho = (b + sqrt d) / (2a), with 4a | b^2 - d and gcd(a, b, (b^2-d)/4a) = 1.
class QuadIrrational {
public:
    QuadIrrational(Int d, Int a, Int b) : d_(d), a_(a), b_(b)
    {
        if (a <= 0) throw domain_error("quadratic irrational needs a > 0");
        Wide num = static_cast<Wide>(b) * b - d;
        if (num % (4 * static_cast<Wide>(a)) != 0)
            throw domain_error("quadratic irrational needs 4a | b^2 - d");
        Int c = narrow(num / (4 * static_cast<Wide>(a)));
        if (gcd(gcd(a, b), c) != 1)
            throw domain_error("quadratic irrational needs gcd(a, b, (b^2-d)/4a) = 1");
    }

    /// omega_d = sqrt(d)/2 or (1 + sqrt d)/2.
    static QuadIrrational omega(const Discriminant& D)
    {
        return QuadIrrational(D.value(), 1, mod<Int>(D.value(), 4) == 0 ? 0 : 1);
    }

    Int d() const { return d_; }
    Int a() const { return a_; }
    Int b() const { return b_; }

    long double value() const { return (b_ + sqrtl(static_cast<long double>(d_))) / (2.0L * a_); }
    long double conjugate() const { return (b_ - sqrtl(static_cast<long double>(d_))) / (2.0L * a_); }

    /// rho > 1 and -1 < rho' < 0, decided in exact integer arithmetic.
    bool is_reduced() const
    {
        // rho' < 0  <=>  b < sqrt d
        if (b_ > isqrt(d_)) return false;
        // rho' > -1  <=>  2a + b > sqrt d
        Wide lo = static_cast<Wide>(2) * a_ + b_;
        if (lo <= 0 || lo * lo <= d_) return false;
        // rho > 1  <=>  sqrt d > 2a - b
        Wide hi = static_cast<Wide>(2) * a_ - b_;
        return hi <= 0 || hi * hi < d_;
    }

    friend bool operator==(const QuadIrrational&, const QuadIrrational&) = default;

private:
    Int d_;
    Int a_;
    Int b_;
};

inline std::ostream& operator<<(std::ostream& os, const QuadIrrational& r)
{
    return os << "(" << r.b() << "+sqrt(" << r.d() << "))/" << 2 * r.a();
}

struct IdealFlags {
    bool primitive = false;
    bool regular = false;
    bool prime_to_conductor = false;
    bool reduced = false;
};

/// The ideal e * [a, (b + sqrt d)/2] = e*a Z + e*(b + sqrt d)/2 Z of O_d.
///
/// The primitive part [a, (b+sqrt d)/2] is kept with b reduced to the
/// canonical residue -a < b <= a, which makes structural equality the same
/// as equality of Z-modules.
class QuadIdeal {
public:
    Int d() const { return d_; }
    Int content() const { return e_; }
    Int a() const { return a_; }
    Int b() const { return b_; }
    Int norm() const { return checked_mul(a_, checked_mul(e_, e_)); }
    /// (b^2 - d) / 4a
    Int c() const { return narrow((static_cast<Wide>(b_) * b_ - d_) / (4 * static_cast<Wide>(a_))); }

    static QuadIdeal unit(Int d) { return QuadIdeal(d, 1, 1, mod<Int>(d, 2)); }

    /// Unchecked construction from a primitive part already known to be valid.
    static QuadIdeal from_valid(Int d, Int e, Int a, Int b) { return QuadIdeal(d, e, a, b); }

    QuadIdeal conjugate() const { return QuadIdeal(d_, e_, a_, -b_); }
    QuadIdeal primitive_part() const { return QuadIdeal(d_, 1, a_, b_); }
    QuadIdeal scaled(Int k) const { return QuadIdeal(d_, checked_mul(e_, k), a_, b_); }

    friend bool operator==(const QuadIdeal&, const QuadIdeal&) = default;

private:
    QuadIdeal(Int d, Int e, Int a, Int b) : d_(d), e_(e), a_(a), b_(b)
    {
        Int m = 2 * a_;
        b_ = mod(b_, m);
        if (b_ > a_) b_ -= m;
    }

    Int d_;
    Int e_;
    Int a_;
    Int b_;
};

inline std::string to_string(const QuadIdeal& I)
{
    return std::to_string(I.content()) + "*[" + std::to_string(I.a()) + ",(" + std::to_string(I.b()) +
           "+sqrt(" + std::to_string(I.d()) + "))/2]";
}

inline std::ostream& operator<<(std::ostream& os, const QuadIdeal& I) { return os << to_string(I); }

/// Validates e*[a, (b+sqrt d)/2] against the ideal conditions on its
/// standard-form Z-basis  A = e a,  (B + e sqrt d)/2 with B = e b:
///   e | A,   2e | (e d - B),   4 A e | (B^2 - d e^2).
inline QuadIdeal make_ideal(Int a, Int b, Int e, Int d)
{
    if (!is_discriminant(d)) throw domain_error("make_ideal: " + std::to_string(d) + " is not a discriminant");
    if (a <= 0) throw domain_error("make_ideal: a must be positive");
    if (e <= 0) throw domain_error("make_ideal: e must be positive");
    Wide A = static_cast<Wide>(e) * a;
    Wide B = static_cast<Wide>(e) * b;
    Wide E = e;
    if (A % E != 0) throw domain_error("make_ideal: condition e | a fails");
    if ((E * d - B) % (2 * E) != 0) throw domain_error("make_ideal: condition 2e | (ed - b) fails");
    if ((B * B - static_cast<Wide>(d) * E * E) % (4 * A * E) != 0)
        throw domain_error("make_ideal: condition 4ae | (b^2 - de^2) fails");
    return QuadIdeal::from_valid(d, e, a, b);
}

inline bool is_regular(const QuadIdeal& I)
{
    return I.content() == 1 && gcd(gcd(I.a(), I.b()), I.c()) == 1;
}

/// The b' = b (mod 2a) with sqrt d - 2a < b' < sqrt d, if the resulting
/// (b' + sqrt d)/(2a) is reduced.
inline std::optional<QuadIrrational> reduced_preimage(const QuadIdeal& I)
{
    if (!is_regular(I)) return std::nullopt;
    Int d = I.d(), a = I.a();
    Int s = isqrt(d);
    Int m = 2 * a;
    Int bp = s - mod(s - I.b(), m);
    QuadIrrational rho(d, a, bp);
    if (!rho.is_reduced()) return std::nullopt;
    return rho;
}

inline IdealFlags classify(const QuadIdeal& I)
{
    IdealFlags f;
    f.primitive = I.content() == 1;
    f.regular = is_regular(I);
    Discriminant D(I.d());
    f.prime_to_conductor = f.primitive && gcd(I.norm(), D.conductor()) == 1;
    if (!f.regular) return f;
    Wide n = I.norm();
    if (4 * n * n < I.d()) {
        f.reduced = true;
    } else if (n * n >= I.d()) {
        f.reduced = false;
    } else {
        f.reduced = reduced_preimage(I).has_value();
    }
    return f;
}

inline QuadIdeal theta(const QuadIrrational& rho)
{
    return QuadIdeal::from_valid(rho.d(), 1, rho.a(), rho.b());
}

/// Product of two ideals by Dirichlet composition of their primitive parts.
///
/// With g = gcd(a1, a2, (b1+b2)/2) = u a1 + v a2 + w (b1+b2)/2 the product has
/// content g, and b3 = (u a1 b2 + v a2 b1 + w (b1 b2 + d)/2) / g. The
/// primitive part has a3 = a1 a2 G / g^2, where
/// G = gcd(a1, a2, (b1+b2)/2, (b1-b2)/2, c1, c2) is 1 unless both factors
/// fail to be invertible.
inline QuadIdeal multiply_ideals(const QuadIdeal& I1, const QuadIdeal& I2)
{
    if (I1.d() != I2.d()) throw domain_error("multiply_ideals: ideals belong to different orders");
    const Int d = I1.d();
    const Int a1 = I1.a(), a2 = I2.a(), b1 = I1.b(), b2 = I2.b();
    const Int half_sum = (b1 + b2) / 2;  // b1 = b2 = d (mod 2)
    const Int half_diff = (b1 - b2) / 2;

    auto first = ext_gcd<Wide>(a1, a2);
    auto second = ext_gcd<Wide>(first.g, half_sum);
    const Wide g = second.g;
    const Wide u = first.x * second.x, v = first.y * second.x, w = second.y;

    Wide G = gcd<Wide>(gcd<Wide>(g, half_diff), gcd<Wide>(I1.c(), I2.c()));
    Wide a3 = static_cast<Wide>(a1) / g * a2 / g * G;
    Wide m = 2 * a3;
    Wide x = mod<Wide>(u * a1, m * g) * b2 + mod<Wide>(v * a2, m * g) * b1 +
             mod<Wide>(w, m * g) * ((static_cast<Wide>(b1) * b2 + d) / 2);
    if (x % g != 0) throw std::logic_error("multiply_ideals: composition produced non-integral b");
    Wide b3 = mod<Wide>(x / g, m);

    Int e = checked_mul(checked_mul(I1.content(), I2.content()), narrow(g));
    return QuadIdeal::from_valid(d, e, narrow(a3, "multiply_ideals"), narrow(b3));
}

inline QuadIdeal ideal_power(const QuadIdeal& I, Int t)
{
    if (t < 0) throw domain_error("ideal_power: exponent must be non-negative");
    QuadIdeal result = QuadIdeal::unit(I.d());
    QuadIdeal base = I;
    while (t > 0) {
        if (t & 1) result = multiply_ideals(result, base);
        t >>= 1;
        if (t > 0) base = multiply_ideals(base, base);
    }
    return result;
}

/// Parses "e*[a,(b+sqrt(d))/2]"; the "e*" prefix is optional.
inline QuadIdeal parse_ideal(const std::string& text)
{
    static const std::regex re(
        R"(^\s*(?:(\d+)\s*\*\s*)?\[\s*(\d+)\s*,\s*\(\s*([+-]?\d+)\s*\+\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*2\s*\]\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw domain_error("cannot parse ideal literal: " + text);
    Int e = m[1].matched ? std::stoll(m[1].str()) : 1;
    return make_ideal(std::stoll(m[2].str()), std::stoll(m[3].str()), e, std::stoll(m[4].str()));
}

}  // namespace qrl
