#pragma once

// Class numbers from cycles of reduced indefinite forms, L(1, chi_d) as a
// finite character sum and as a truncated Euler product.

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "qrl/cfrac.hpp"

namespace qrl {

struct ClassNumber {
    Int h = 0;
    Int h_narrow = 0;
};

struct Form {
    Int a, b, c;
    friend bool operator==(const Form&, const Form&) = default;
};

namespace detail {

struct FormKey {
    std::size_t operator()(const std::pair<Int, Int>& k) const noexcept
    {
        return std::hash<Int>{}(k.first) * 0x9e3779b97f4a7c15ULL ^ std::hash<Int>{}(k.second);
    }
};

inline void divisors_of(Int n, std::vector<Int>& out)
{
    out.assign(1, 1);
    for (auto [p, k] : factorize(n)) {
        std::size_t base = out.size();
        Int pk = 1;
        for (int i = 1; i <= k; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
}

}  // namespace detail

/// Primitive reduced forms (a, b, c) of discriminant d:
/// 0 < b < sqrt d and sqrt d - b < 2|a| < sqrt d + b.
inline std::vector<Form> reduced_forms(const Discriminant& D)
{
    const Int d = D.value(), s = D.sqrt_floor();
    std::vector<Form> out;
    std::vector<Int> divs;
    for (Int b = (d % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        Int n = (d - b * b) / 4;  // = -ac
        detail::divisors_of(n, divs);
        for (Int a : divs) {
            Wide lo = 2 * static_cast<Wide>(a) + b;  // 2|a| + b > sqrt d
            if (lo * lo <= d) continue;
            Wide hi = 2 * static_cast<Wide>(a) - b;  // 2|a| - b < sqrt d
            if (hi > 0 && hi * hi >= d) continue;
            Int c = n / a;
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back({a, b, -c});
            out.push_back({-a, b, c});
        }
    }
    return out;
}

/// One reduction step (a, b, c) -> (c, b', a') with b' = -b (mod 2c) and
/// sqrt d - 2|c| < b' < sqrt d.
inline Form rho_step(const Form& f, const Discriminant& D)
{
    const Int s = D.sqrt_floor();
    const Int m = 2 * (f.c < 0 ? -f.c : f.c);
    Int bp = s - mod(s + f.b, m);
    Int ap = narrow((static_cast<Wide>(bp) * bp - D.value()) / (4 * static_cast<Wide>(f.c)));
    return {f.c, bp, ap};
}

/// Number of cycles of reduced forms (the narrow class number) and the
/// wide class number obtained through the sign of N(xi_d).
inline ClassNumber class_number_forms(const Discriminant& D)
{
    auto forms = reduced_forms(D);
    std::unordered_map<std::pair<Int, Int>, bool, detail::FormKey> visited;
    visited.reserve(forms.size() * 2);
    for (const auto& f : forms) visited.emplace(std::make_pair(f.a, f.b), false);
    Int cycles = 0;
    for (const auto& f : forms) {
        auto& mark = visited[{f.a, f.b}];
        if (mark) continue;
        ++cycles;
        Form g = f;
        do {
            visited[{g.a, g.b}] = true;
            g = rho_step(g, D);
        } while (!(g.a == f.a && g.b == f.b));
    }
    ClassNumber cn;
    cn.h_narrow = cycles;
    cn.h = fundamental_unit(D).norm_sign == -1 ? cycles : cycles / 2;
    return cn;
}

inline ClassNumber class_number_forms(Int d) { return class_number_forms(Discriminant(d)); }

/// prod_{p <= bound} (1 - chi_d(p)/p)^{-1}; the empty product for bound < 2.
inline long double l_value_truncated(Int d, Int bound)
{
    long double prod = 1;
    for (Int p : primes_up_to(bound)) {
        int chi = kronecker(d, p);
        prod /= 1.0L - static_cast<long double>(chi) / static_cast<long double>(p);
    }
    return prod;
}

/// L(1, chi_d) = -(1/sqrt d) sum_{a=1}^{d-1} chi_d(a) log sin(pi a / d) for
/// fundamental d > 0 (chi_d is even, so only a < d/2 is summed, twice).
inline long double l_value_exact(Int d)
{
    if (!is_fundamental_discriminant(d))
        throw domain_error("l_value_exact: " + std::to_string(d) + " is not a fundamental discriminant");
    const long double pi = std::numbers::pi_v<long double>;
    long double sum = 0;
    for (Int a = 1; 2 * a < d; ++a) {
        int chi = kronecker(d, a);
        if (chi == 0) continue;
        long double term = logl(sinl(pi * static_cast<long double>(a) / static_cast<long double>(d)));
        sum += chi > 0 ? term : -term;
    }
    return -2.0L * sum / sqrtl(static_cast<long double>(d));
}

struct HBoundReport {
    Int d = 0;
    Int h = 0;
    long double bound = 0;
    bool satisfied = false;
};

/// bound = constant * sqrt d / ((log d)^2 log log d).
inline long double h_growth_bound(long double d, long double constant)
{
    long double L = logl(d);
    return constant * sqrtl(d) / (L * L * logl(L));
}

inline HBoundReport h_bound_report(Int d, long double constant)
{
    if (d < 16) throw domain_error("h_bound_report: d must be at least 16");
    HBoundReport r;
    r.d = d;
    r.h = class_number_forms(d).h;
    r.bound = h_growth_bound(static_cast<long double>(d), constant);
    r.satisfied = static_cast<long double>(r.h) <= r.bound;
    return r;
}

struct ClassData {
    Int d = 0;
    Int h = 0;
    Int h_narrow = 0;
    long double L_exact = NAN;  // NaN unless d is fundamental
    long double L_truncated = 0;
    Int euler_bound_B = 0;
    long double regulator = 0;
};

inline ClassData class_data(Int d, Int euler_bound)
{
    Discriminant D(d);
    ClassData cd;
    cd.d = d;
    auto cn = class_number_forms(D);
    cd.h = cn.h;
    cd.h_narrow = cn.h_narrow;
    if (D.is_fundamental()) cd.L_exact = l_value_exact(d);
    cd.L_truncated = l_value_truncated(d, euler_bound);
    cd.euler_bound_B = euler_bound;
    cd.regulator = fundamental_unit(D).regulator;
    return cd;
}

/// sqrt(d) L / (2 log xi_d), the unrounded right side of the class number formula.
inline long double class_number_formula(Int d, long double L, long double regulator)
{
    return sqrtl(static_cast<long double>(d)) * L / (2.0L * regulator);
}

}  // namespace qrl
