#pragma once

// Lower bounds for the regulator from products of reduced principal ideals
// with prescribed norms: hypothesis checks, the n'' reduction, the set Omega,
// its discrete and exact log-sums, the continuous approximation I, and the
// non-primitive product that breaks the uncorrected argument.

#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "qrl/cfrac.hpp"

namespace qrl {

struct NormDecomposition {
    Int n = 0;        // n_i
    Int coprime = 0;  // n_i', prime to d
    Int ramified = 1; // n_i'', squarefree divisor of d0
    friend bool operator==(const NormDecomposition&, const NormDecomposition&) = default;
};

struct CriterionInput {
    Int d = 0;
    std::vector<NormDecomposition> decomps;
};

inline NormDecomposition make_decomposition(Int n, Int coprime, Int ramified)
{
    if (n < 2) throw domain_error("criterion: each n_i must be at least 2");
    if (coprime < 1 || ramified < 1 || checked_mul(coprime, ramified) != n)
        throw domain_error("criterion: n_i = n_i' n_i'' fails for n_i = " + std::to_string(n));
    return {n, coprime, ramified};
}

/// Parses "6=2*3, 3=3*1, 5" (a bare n means n = n * 1).
inline std::vector<NormDecomposition> parse_decompositions(const std::string& text)
{
    std::vector<NormDecomposition> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        auto eq = item.find('=');
        try {
            if (eq == std::string::npos) {
                Int n = std::stoll(item);
                out.push_back(make_decomposition(n, n, 1));
                continue;
            }
            auto star = item.find('*', eq);
            if (star == std::string::npos) throw domain_error("missing '*'");
            Int n = std::stoll(item.substr(0, eq));
            Int n1 = std::stoll(item.substr(eq + 1, star - eq - 1));
            Int n2 = std::stoll(item.substr(star + 1));
            out.push_back(make_decomposition(n, n1, n2));
        } catch (const std::logic_error& e) {
            throw domain_error("cannot parse norm decomposition '" + item + "': " + e.what());
        }
    }
    return out;
}

struct HypothesisCheck {
    bool a = false;   // n_i is the norm of a reduced principal ideal
    bool b1 = false;  // gcd(n_i', d) = 1
    bool b2 = false;  // n_i'' squarefree and n_i'' | d0
    bool b3 = false;  // n_i' prime to every other n_j'
    bool all() const { return a && b1 && b2 && b3; }
};

struct HypothesisReport {
    std::vector<HypothesisCheck> per_norm;
    bool all() const
    {
        return std::all_of(per_norm.begin(), per_norm.end(), [](const HypothesisCheck& c) { return c.all(); });
    }
};

inline HypothesisReport check_hypotheses(const CriterionInput& in)
{
    Discriminant D(in.d);
    std::set<Int> cycle_norms;
    for (const auto& r : principal_cycle(D)) cycle_norms.insert(r.a());
    HypothesisReport rep;
    for (std::size_t i = 0; i < in.decomps.size(); ++i) {
        const auto& x = in.decomps[i];
        HypothesisCheck c;
        c.a = cycle_norms.count(x.n) > 0;
        c.b1 = gcd(x.coprime, in.d) == 1;
        c.b2 = is_squarefree(x.ramified).squarefree && D.fundamental() % x.ramified == 0;
        c.b3 = true;
        for (std::size_t j = 0; j < in.decomps.size(); ++j)
            if (j != i && gcd(x.coprime, in.decomps[j].coprime) != 1) c.b3 = false;
        rep.per_norm.push_back(c);
    }
    return rep;
}

/// Some primitive ideal [n, (b+sqrt d)/2]: the reduced principal one if the
/// principal cycle has one of norm n, otherwise the first b found mod 2n.
inline std::optional<QuadIdeal> ideal_of_norm(const Discriminant& D, Int n)
{
    if (auto I = reduced_principal_of_norm(D, n)) return I;
    const Int d = D.value();
    for (Int b = mod<Int>(d, 2); b < 2 * n; b += 2)
        if (mod<Wide>(static_cast<Wide>(b) * b - d, 4 * static_cast<Wide>(n)) == 0)
            return QuadIdeal::from_valid(d, 1, n, b);
    return std::nullopt;
}

/// Replaces every n_i with n_i'' > 1 by n_i'^2 after checking, by ideal
/// multiplication, that the norm-n_i'' factor squares to n_i'' O_d.
/// Entries that collapse to n_i' = 1 carry no information and are dropped.
inline CriterionInput reduce_double_prime(const CriterionInput& in)
{
    Discriminant D(in.d);
    CriterionInput out{in.d, {}};
    for (const auto& x : in.decomps) {
        if (x.ramified == 1) {
            out.decomps.push_back(x);
            continue;
        }
        if (gcd(x.coprime, in.d) != 1) throw domain_error("reduce_double_prime: (b1) fails for n = " + std::to_string(x.n));
        if (!is_squarefree(x.ramified).squarefree || D.fundamental() % x.ramified != 0)
            throw domain_error("reduce_double_prime: (b2) fails for n = " + std::to_string(x.n));
        auto whole = ideal_of_norm(D, x.n);
        if (!whole) throw domain_error("reduce_double_prime: no ideal of norm " + std::to_string(x.n));
        QuadIdeal part = QuadIdeal::from_valid(in.d, 1, x.ramified, whole->b());
        QuadIdeal square = multiply_ideals(part, part);
        if (!(square == QuadIdeal::unit(in.d).scaled(x.ramified)))
            throw domain_error("reduce_double_prime: square of the norm-" + std::to_string(x.ramified) +
                               " factor is " + to_string(square) + ", not n'' O_d");
        if (x.coprime == 1) continue;
        Int sq = checked_mul(x.coprime, x.coprime);
        out.decomps.push_back({sq, sq, 1});
    }
    return out;
}

struct OmegaEntry {
    std::vector<Int> exponents;
    Int norm = 1;  // prod n_i^{e_i}
    QuadIdeal ideal = QuadIdeal::unit(5);
    QuadIrrational rho = QuadIrrational(5, 1, 1);
};

struct OmegaSet {
    Int d = 0;
    std::vector<Int> norms;
    std::vector<OmegaEntry> entries;
};

/// Calls visit(e) for every e >= 0 with prod n_i^{e_i} < sqrt(d)/2, i.e.
/// 4 (prod)^2 < d, in lexicographic order.
inline void for_each_exponent_vector(Int d, const std::vector<Int>& norms,
                                     const std::function<void(const std::vector<Int>&, Int)>& visit)
{
    std::vector<Int> e(norms.size(), 0);
    std::function<void(std::size_t, Int)> rec = [&](std::size_t i, Int prod) {
        if (i == norms.size()) {
            visit(e, prod);
            return;
        }
        Wide cur = prod;
        for (Int k = 0;; ++k) {
            if (4 * cur * cur >= d) break;
            e[i] = k;
            rec(i + 1, static_cast<Int>(cur));
            cur *= norms[i];
        }
        e[i] = 0;
    };
    rec(0, 1);
}

inline OmegaSet enumerate_omega(Int d, const std::vector<Int>& norms)
{
    Discriminant D(d);
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] < 2) throw domain_error("enumerate_omega: norms must be at least 2");
        for (std::size_t j = i + 1; j < norms.size(); ++j)
            if (gcd(norms[i], norms[j]) != 1) throw domain_error("enumerate_omega: norms must be pairwise coprime");
    }
    auto cycle = principal_cycle(D);
    std::set<std::pair<Int, Int>> principal;
    for (const auto& r : cycle) {
        QuadIdeal I = theta(r);
        principal.emplace(I.a(), I.b());
    }
    std::vector<QuadIdeal> base;
    for (Int n : norms) {
        auto I = reduced_principal_of_norm(D, n);
        if (!I) throw domain_error("enumerate_omega: " + std::to_string(n) + " is not the norm of a reduced principal ideal");
        base.push_back(*I);
    }
    OmegaSet omega{d, norms, {}};
    for_each_exponent_vector(d, norms, [&](const std::vector<Int>& e, Int prod) {
        QuadIdeal I = QuadIdeal::unit(d);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) I = multiply_ideals(I, ideal_power(base[i], e[i]));
        auto flags = classify(I);
        if (!flags.primitive)
            throw domain_error("enumerate_omega: product " + to_string(I) + " is not primitive");
        if (!flags.reduced) throw domain_error("enumerate_omega: product " + to_string(I) + " is not reduced");
        if (I.norm() != prod) throw std::logic_error("enumerate_omega: norm mismatch");
        if (!principal.count({I.a(), I.b()}))
            throw domain_error("enumerate_omega: product " + to_string(I) + " is not in the principal cycle");
        auto rho = reduced_preimage(I);
        if (!rho) throw domain_error("enumerate_omega: no reduced preimage for " + to_string(I));
        omega.entries.push_back({e, prod, I, *rho});
    });
    return omega;
}

struct BoundReport {
    long double discrete_sum = 0;
    long double exact_sum = 0;
    long double integral_I = 0;      // closed form
    long double integral_exact = 0;  // the integral itself
    Int lattice_count = 0;
    long double P_product = 1;
    long double regulator = 0;
};

/// The closed form I = m L^{m+1} / ((m+1)! P), L = log(sqrt(d)/2),
/// P = prod log n_i. Equals the integral over G only for m = 1.
inline long double integral_I_at(long double L, const std::vector<Int>& norms)
{
    const auto m = static_cast<long double>(norms.size());
    long double P = 1, fact = 1;
    for (Int n : norms) P *= logl(static_cast<long double>(n));
    for (std::size_t i = 2; i <= norms.size() + 1; ++i) fact *= static_cast<long double>(i);
    return m * powl(L, m + 1) / (fact * P);
}

/// The integral of (L - sum x_i log n_i) over G(L): L^{m+1} / ((m+1)! P).
inline long double integral_exact_at(long double L, const std::vector<Int>& norms)
{
    const auto m = static_cast<long double>(norms.size());
    return m > 0 ? integral_I_at(L, norms) / m : L;
}

inline long double half_root_log(long double d) { return logl(sqrtl(d) / 2); }

inline long double integral_I(long double d, const std::vector<Int>& norms)
{
    for (Int n : norms)
        if (n < 2) throw domain_error("integral_I: norms must be at least 2");
    return integral_I_at(half_root_log(d), norms);
}

inline BoundReport omega_lower_bound(const OmegaSet& omega)
{
    BoundReport rep;
    const long double d = static_cast<long double>(omega.d);
    const long double L = half_root_log(d);
    const long double root = sqrtl(d);
    for (const auto& entry : omega.entries) {
        long double t = L;
        for (std::size_t i = 0; i < entry.exponents.size(); ++i)
            t -= entry.exponents[i] * logl(static_cast<long double>(omega.norms[i]));
        rep.discrete_sum += t;
        rep.exact_sum += logl((entry.rho.b() + root) / (2.0L * entry.rho.a()));
    }
    rep.lattice_count = static_cast<Int>(omega.entries.size());
    for (Int n : omega.norms) rep.P_product *= logl(static_cast<long double>(n));
    rep.integral_I = integral_I_at(L, omega.norms);
    rep.integral_exact = integral_exact_at(L, omega.norms);
    rep.regulator = fundamental_unit(Discriminant(omega.d)).regulator;
    return rep;
}

struct LatticeComparison {
    long double lattice_sum = 0;
    Int lattice_count = 0;
    long double I = 0;            // the integral over G
    long double I_closed_form = 0;
    long double diff = 0;         // lattice_sum - I
};

/// Sum over e in Z^m, e >= 0, sum e_i log n_i <= L of (L - sum e_i log n_i).
inline LatticeComparison lattice_vs_integral_at(long double L, const std::vector<Int>& norms)
{
    for (Int n : norms)
        if (n < 2) throw domain_error("lattice_vs_integral: norms must be at least 2");
    std::vector<long double> logs;
    for (Int n : norms) logs.push_back(logl(static_cast<long double>(n)));
    LatticeComparison out;
    std::function<void(std::size_t, long double)> rec = [&](std::size_t i, long double budget) {
        if (i == logs.size()) {
            out.lattice_sum += budget;
            ++out.lattice_count;
            return;
        }
        for (long double rest = budget; rest >= 0; rest -= logs[i]) rec(i + 1, rest);
    };
    if (L >= 0) rec(0, L);
    out.I = integral_exact_at(L, norms);
    out.I_closed_form = integral_I_at(L, norms);
    out.diff = out.lattice_sum - out.I;
    return out;
}

inline LatticeComparison lattice_vs_integral(long double d, const std::vector<Int>& norms)
{
    return lattice_vs_integral_at(half_root_log(d), norms);
}

// ---------------------------------------------------------------------------
// The family d = (p^k q + c)^2 + 4 p^k q, p = rs, q = tp + r.

struct HKParams {
    Int r = 0, s = 0, t = 0, k = 0, c = 0;
};

struct HKReport {
    HKParams params;
    Int p = 0, q = 0, d = 0;
    QuadIdeal n1 = QuadIdeal::unit(5), n2 = QuadIdeal::unit(5), n3 = QuadIdeal::unit(5);
    QuadIdeal product = QuadIdeal::unit(5);
    Int product_content = 0;
    Int product_norm = 0;
    long double half_root_d = 0;
    bool norm_below_half_root = false;
    bool n1_reduced_principal = false;
    bool n2_reduced_principal = false;
    // Sums of (L - sum e_i log n_i) over Omega_j and Omega_{j,k}.
    std::vector<std::pair<std::string, long double>> subset_sums;
};

inline HKReport hk_counterexample(const HKParams& P)
{
    if (P.r < 2 || P.s < 2 || P.t < 1 || P.k < 1)
        throw domain_error("hk_counterexample: need r, s >= 2, t >= 1, k >= 1");
    HKReport rep;
    rep.params = P;
    rep.p = checked_mul(P.r, P.s);
    rep.q = checked_mul(P.t, rep.p) + P.r;
    if (gcd(rep.q, P.c) != 1) throw domain_error("hk_counterexample: gcd(q, c) != 1");
    Wide pkq = rep.q;
    for (Int i = 0; i < P.k; ++i) pkq *= rep.p;
    const Int base = narrow(pkq, "hk_counterexample p^k q");
    const Int d = narrow((pkq + P.c) * (pkq + P.c) + 4 * pkq, "hk_counterexample d");
    if (!is_discriminant(d)) throw domain_error("hk_counterexample: d = " + std::to_string(d) + " is not a discriminant");
    rep.d = d;
    const Int ts1 = P.t * P.s + 1;
    rep.n1 = make_ideal(P.r * P.s, base - P.c, 1, d);
    rep.n2 = make_ideal(P.r * ts1, base + P.c, 1, d);
    rep.n3 = make_ideal(P.s * ts1, base + rep.p + 1 - 2 * P.s * (P.t * P.s - P.t + 1), 1, d);
    rep.product = multiply_ideals(rep.n1, rep.n2);
    rep.product_content = rep.product.content();
    rep.product_norm = rep.product.norm();
    rep.half_root_d = sqrtl(static_cast<long double>(d)) / 2;
    rep.norm_below_half_root = 4 * static_cast<Wide>(rep.product_norm) * rep.product_norm < d;

    Discriminant D(d);
    std::set<std::pair<Int, Int>> principal;
    for (const auto& r : principal_cycle(D)) principal.emplace(r.a(), theta(r).b());
    auto reduced_principal = [&](const QuadIdeal& I) {
        return classify(I).reduced && principal.count({I.a(), I.b()}) > 0;
    };
    rep.n1_reduced_principal = reduced_principal(rep.n1);
    rep.n2_reduced_principal = reduced_principal(rep.n2);

    const std::vector<Int> ns{rep.n1.norm(), rep.n2.norm(), rep.n3.norm()};
    auto subset_sum = [&](std::vector<std::size_t> idx) {
        std::vector<Int> sub;
        for (auto i : idx) sub.push_back(ns[i]);
        long double L = half_root_log(static_cast<long double>(d)), sum = 0;
        for_each_exponent_vector(d, sub, [&](const std::vector<Int>& e, Int) {
            long double t = L;
            for (std::size_t i = 0; i < e.size(); ++i) t -= e[i] * logl(static_cast<long double>(sub[i]));
            sum += t;
        });
        return sum;
    };
    rep.subset_sums = {{"Omega_1", subset_sum({0})},       {"Omega_2", subset_sum({1})},
                       {"Omega_3", subset_sum({2})},       {"Omega_1_3", subset_sum({0, 2})},
                       {"Omega_2_3", subset_sum({1, 2})}};
    return rep;
}

struct HKSearchBounds {
    Int r_max = 6, s_max = 6, t_max = 4, k_max = 4, c_max = 200;
};

/// First (r, s, t, k, c) in lexicographic order whose ideals are valid, with
/// n1 and n2 reduced principal and n1 n2 non-primitive of norm below sqrt(d)/2.
inline std::optional<HKReport> hk_search(const HKSearchBounds& b = {})
{
    for (Int r = 2; r <= b.r_max; ++r)
        for (Int s = 2; s <= b.s_max; ++s)
            for (Int t = 1; t <= b.t_max; ++t)
                for (Int k = 1; k <= b.k_max; ++k)
                    for (Int c = 1; c <= b.c_max; ++c) {
                        try {
                            auto rep = hk_counterexample({r, s, t, k, c});
                            if (rep.product_content > 1 && rep.norm_below_half_root && rep.n1_reduced_principal &&
                                rep.n2_reduced_principal)
                                return rep;
                        } catch (const domain_error&) {
                        } catch (const overflow_error&) {
                        }
                    }
    return std::nullopt;
}

}  // namespace qrl
