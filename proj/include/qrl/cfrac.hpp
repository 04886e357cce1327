#pragma once

// Continued fractions of quadratic irrationals in exact integer arithmetic,
// the principal cycle of omega_d, the fundamental unit and the regulator.

#include <cmath>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qrl/quadorder.hpp"

namespace qrl {

using BigInt = boost::multiprecision::cpp_int;

struct CFExpansion {
    std::vector<Int> preperiod;
    std::vector<Int> period;
    std::vector<QuadIrrational> cycle;  // cycle[nu] has expansion period rotated by nu

    std::size_t period_length() const { return period.size(); }
};

struct UnitInfo {
    Int d = 0;
    long double regulator = 0;
    std::size_t period_length = 0;
    int norm_sign = 0;
};

/// Exact unit xi = (x + y sqrt d)/2 with x^2 - d y^2 = 4 * norm.
struct ExactUnit {
    Int d;
    BigInt x;
    BigInt y;
    int norm;
    long double log() const;
};

inline Int default_max_steps(Int d)
{
    long double v = sqrtl(static_cast<long double>(d)) * logl(static_cast<long double>(d));
    return 10 * static_cast<Int>(ceill(v)) + 10;
}

namespace detail {

/// State (P + sqrt D)/Q of the complete quotient; Q | D - P^2, Q even.
struct CFState {
    Int P;
    Int Q;
    auto operator<=>(const CFState&) const = default;
};

inline Int partial_quotient(const CFState& st, Int s)
{
    // floor((P + sqrt D)/Q) from s = floor(sqrt D); sqrt D is irrational.
    if (st.Q > 0) return floor_div(st.P + s, st.Q);
    return -(floor_div(st.P + s, -st.Q) + 1);
}

inline CFState advance(const CFState& st, Int q, Int D)
{
    Int P = narrow(static_cast<Wide>(q) * st.Q - st.P);
    Int Q = narrow((static_cast<Wide>(D) - static_cast<Wide>(P) * P) / st.Q);
    return {P, Q};
}

}  // namespace detail

/// Expands rho = (b + sqrt d)/(2a) until the complete-quotient state repeats.
inline CFExpansion cf_expand(const QuadIrrational& rho, Int max_steps = 0)
{
    const Int D = rho.d();
    if (max_steps <= 0) max_steps = default_max_steps(D);
    const Int s = isqrt(D);
    std::map<detail::CFState, std::size_t> seen;
    std::vector<detail::CFState> states;
    std::vector<Int> quotients;
    detail::CFState st{rho.b(), 2 * rho.a()};
    for (Int step = 0;; ++step) {
        if (auto it = seen.find(st); it != seen.end()) {
            CFExpansion out;
            std::size_t start = it->second;
            out.preperiod.assign(quotients.begin(), quotients.begin() + static_cast<std::ptrdiff_t>(start));
            out.period.assign(quotients.begin() + static_cast<std::ptrdiff_t>(start), quotients.end());
            for (std::size_t i = start; i < states.size(); ++i)
                out.cycle.emplace_back(D, states[i].Q / 2, states[i].P);
            return out;
        }
        if (step >= max_steps)
            throw domain_error("cf_expand: no period within " + std::to_string(max_steps) +
                               " steps for d = " + std::to_string(D));
        seen.emplace(st, states.size());
        states.push_back(st);
        Int q = detail::partial_quotient(st, s);
        quotients.push_back(q);
        st = detail::advance(st, q, D);
    }
}

/// Principal cycle rho_1..rho_l of omega_d.
inline std::vector<QuadIrrational> principal_cycle(const Discriminant& D)
{
    return cf_expand(QuadIrrational::omega(D)).cycle;
}

/// Regulator log(xi_d) as the sum of log rho_nu over the principal cycle.
inline UnitInfo fundamental_unit(const Discriminant& D)
{
    auto cyc = principal_cycle(D);
    const long double root = D.sqrt();
    long double reg = 0;
    for (const auto& r : cyc) reg += logl((r.b() + root) / (2.0L * r.a()));
    UnitInfo u;
    u.d = D.value();
    u.regulator = reg;
    u.period_length = cyc.size();
    u.norm_sign = (cyc.size() % 2 == 0) ? 1 : -1;
    return u;
}

inline UnitInfo fundamental_unit(Int d) { return fundamental_unit(Discriminant(d)); }

/// xi_d from the convergent p/q of omega_d ending one step before the
/// first full period: xi = p - q omega'.
inline ExactUnit exact_unit(const Discriminant& D)
{
    auto cf = cf_expand(QuadIrrational::omega(D));
    std::vector<Int> terms = cf.preperiod;
    terms.insert(terms.end(), cf.period.begin(), cf.period.end());
    const std::size_t l = cf.period.size();
    // convergents p_n/q_n of [b0; b1, ...] for n = 0 .. l-1
    BigInt p_prev = 1, q_prev = 0, p = terms[0], q = 1;
    for (std::size_t n = 1; n < l; ++n) {
        BigInt pn = BigInt(terms[n]) * p + p_prev;
        BigInt qn = BigInt(terms[n]) * q + q_prev;
        p_prev = p; q_prev = q;
        p = pn; q = qn;
    }
    const Int delta = mod<Int>(D.value(), 2);
    ExactUnit u{D.value(), 2 * p - q * delta, q, 0};
    BigInt nm = u.x * u.x - BigInt(D.value()) * u.y * u.y;
    u.norm = nm > 0 ? 1 : -1;
    return u;
}

inline long double ExactUnit::log() const
{
    using Float = boost::multiprecision::cpp_bin_float_50;
    Float xi = (Float(x) + Float(y) * boost::multiprecision::sqrt(Float(d))) / 2;
    return static_cast<long double>(boost::multiprecision::log(xi));
}

/// theta(rho_nu) over the principal cycle: every reduced principal ideal.
inline std::vector<QuadIdeal> reduced_principal_ideals(const Discriminant& D)
{
    std::vector<QuadIdeal> out;
    for (const auto& r : principal_cycle(D)) {
        QuadIdeal I = theta(r);
        if (std::find(out.begin(), out.end(), I) == out.end()) out.push_back(I);
    }
    return out;
}

inline bool is_norm_of_reduced_principal(const Discriminant& D, Int n)
{
    if (n < 1) throw domain_error("is_norm_of_reduced_principal: n must be positive");
    for (const auto& r : principal_cycle(D))
        if (r.a() == n) return true;
    return false;
}

/// First ideal of norm n along the principal cycle.
inline std::optional<QuadIdeal> reduced_principal_of_norm(const Discriminant& D, Int n)
{
    for (const auto& r : principal_cycle(D))
        if (r.a() == n) return theta(r);
    return std::nullopt;
}

}  // namespace qrl
