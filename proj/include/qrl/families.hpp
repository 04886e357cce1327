#pragma once

// Families of discriminants n^2 + 4p_i along an arithmetic progression of n,
// condition (*) on the primes p_i, squarefree scans and their density, the
// constants C'(m), C(m), and scans of the Chowla, Shanks, Yamamoto and cubic
// families.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrl/classno.hpp"
#include "qrl/parallel.hpp"

namespace qrl {

/// m^2 4^m + 2, the split point between the sets S and S'.
inline Int small_prime_threshold(Int m)
{
    if (m < 0 || m > 28) throw domain_error("small_prime_threshold: m out of range");
    return narrow(static_cast<Wide>(m) * m * (static_cast<Wide>(1) << (2 * m)) + 2);
}

inline bool contains(const std::vector<Int>& v, Int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

/// #{y in F_p : (y/p) = 1 and ((y + 4p_i)/p) = -1 for every i}.
inline Int count_good_residues(Int p, const std::vector<Int>& primes)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw domain_error("count_good_residues: p must be an odd prime");
    if (contains(primes, p)) throw domain_error("count_good_residues: p = " + std::to_string(p) + " is one of the p_i");
    std::vector<Int> shifts;
    for (Int pi : primes) shifts.push_back(mod(4 * pi, p));
    Int count = 0;
    for (Int y = 1; y < p; ++y) {
        if (kronecker(y, p) != 1) continue;
        bool ok = true;
        for (Int s : shifts)
            if (kronecker(y + s, p) != -1) { ok = false; break; }
        if (ok) ++count;
    }
    return count;
}

/// p/2^{m+1} - ((m-1)/2 + 2^{-(m+1)}) sqrt p - (m+1)/2
inline long double good_residue_lower_bound(Int p, Int m)
{
    long double scale = ldexpl(1.0L, static_cast<int>(-(m + 1)));
    return p * scale - ((m - 1) / 2.0L + scale) * sqrtl(static_cast<long double>(p)) - (m + 1) / 2.0L;
}

struct StarWitness {
    Int modulus = 1;        // product of the p_i <= 2m
    Int N = 0;              // quadratic residue class
    Int root = 0;           // n with n^2 = N (mod modulus)
    std::vector<Int> small; // the p_i <= 2m
};

/// Condition (*): a square N modulo prod_{p_j <= 2m} p_j such that every
/// N + 4p_i is prime to each of those p_j. Searched over roots n.
inline std::optional<StarWitness> check_star(Int m, const std::vector<Int>& primes)
{
    std::set<Int> distinct(primes.begin(), primes.end());
    if (distinct.size() != primes.size()) throw domain_error("check_star: primes must be distinct");
    StarWitness w;
    for (Int p : primes)
        if (p <= 2 * m) {
            w.small.push_back(p);
            w.modulus = checked_mul(w.modulus, p);
        }
    std::sort(w.small.begin(), w.small.end());
    for (Int n = 0; n < w.modulus; ++n) {
        Int N = narrow(static_cast<Wide>(n) * n % w.modulus);
        bool ok = true;
        for (Int pj : w.small) {
            for (Int pi : primes)
                if ((N + 4 * pi) % pj == 0) { ok = false; break; }
            if (!ok) break;
        }
        if (ok) {
            w.N = N;
            w.root = n;
            return w;
        }
    }
    return std::nullopt;
}

/// Greedy p_1 < ... < p_m <= bound, all 1 mod 4, with (-p_j/p_i) = -1 for i != j.
inline std::optional<std::vector<Int>> find_prime_tuple(Int m, Int bound)
{
    if (m < 1) throw domain_error("find_prime_tuple: m must be positive");
    std::vector<Int> chosen;
    for (Int p = 5; p <= bound && static_cast<Int>(chosen.size()) < m; p += 4) {
        if (!is_prime(p)) continue;
        bool ok = true;
        for (Int q : chosen)
            if (kronecker(-q, p) != -1 || kronecker(-p, q) != -1) { ok = false; break; }
        if (ok) chosen.push_back(p);
    }
    if (static_cast<Int>(chosen.size()) < m) return std::nullopt;
    if (!check_star(m, chosen)) return std::nullopt;
    return chosen;
}

struct ProgressionSpec {
    Int m = 0;
    std::vector<Int> primes;
    long double x = 0;
    long double eps1 = 0;
    std::vector<Int> S;        // p <= m^2 4^m + 2, p not a p_i
    std::vector<Int> P_small;  // p_i <= 2m
    std::vector<Int> S_prime;  // m^2 4^m + 2 < p <= (log x)^eps1, p not a p_i
    std::vector<Int> residues; // n mod p for each p | q, ascending p
    std::vector<Int> residue_moduli;
    Int q = 1;
    Int n0 = 0;
};

/// Smallest r mod p with ((r^2 + 4p_i)/p) = -1 for all i.
inline std::optional<Int> inert_residue(Int p, const std::vector<Int>& primes)
{
    for (Int r = 0; r < p; ++r) {
        bool ok = true;
        for (Int pi : primes)
            if (kronecker(r * r + 4 * pi, p) != -1) { ok = false; break; }
        if (ok) return r;
    }
    return std::nullopt;
}

inline ProgressionSpec build_progression(Int m, const std::vector<Int>& primes, long double x, long double eps1)
{
    if (m < 1) throw domain_error("build_progression: m must be positive");
    if (static_cast<Int>(primes.size()) != m) throw domain_error("build_progression: expected m primes");
    for (Int p : primes)
        if (!is_prime(p)) throw domain_error("build_progression: " + std::to_string(p) + " is not prime");
    if (!(eps1 > 0 && eps1 < 1)) throw domain_error("build_progression: eps1 must lie in (0, 1)");
    if (!(x > 1)) throw domain_error("build_progression: x must exceed 1");
    auto star = check_star(m, primes);
    if (!star) throw domain_error("build_progression: condition (*) fails for the given primes");

    ProgressionSpec spec;
    spec.m = m;
    spec.primes = primes;
    spec.x = x;
    spec.eps1 = eps1;
    const Int T = small_prime_threshold(m);
    const long double top = powl(logl(x), eps1);
    const Int upper = static_cast<Int>(floorl(top));
    for (Int p : primes_up_to(std::max(T, upper))) {
        if (p <= T && !contains(primes, p)) spec.S.push_back(p);
        if (p > T && p <= upper && !contains(primes, p)) spec.S_prime.push_back(p);
    }
    spec.P_small = star->small;

    std::vector<std::pair<Int, Int>> classes;  // (p, n mod p)
    for (Int p : spec.S) classes.emplace_back(p, p == 2 ? 1 : 0);
    for (Int p : spec.P_small) classes.emplace_back(p, mod(star->root, p));
    for (Int p : spec.S_prime) {
        auto r = inert_residue(p, primes);
        if (!r) throw domain_error("build_progression: no residue makes chi_d(" + std::to_string(p) + ") = -1");
        classes.emplace_back(p, *r);
    }
    std::sort(classes.begin(), classes.end());
    for (auto [p, r] : classes) {
        spec.residue_moduli.push_back(p);
        spec.residues.push_back(r);
    }
    auto c = crt(spec.residues, spec.residue_moduli);
    spec.q = c.modulus;
    spec.n0 = c.residue;
    return spec;
}

inline std::vector<Int> family_discriminants(const std::vector<Int>& primes, Int n)
{
    std::vector<Int> out;
    Wide n2 = static_cast<Wide>(n) * n;
    for (Int p : primes) out.push_back(narrow(n2 + 4 * static_cast<Wide>(p), "family discriminant"));
    return out;
}

struct ScanRecord {
    Int k = 0;
    Int n = 0;
    std::vector<Int> d;
    std::vector<bool> squarefree;
    std::vector<std::optional<Int>> h;
    std::vector<std::optional<long double>> regulator;
    std::vector<std::optional<long double>> L_truncated;
    std::optional<bool> bound_ok;

    bool all_squarefree() const { return std::all_of(squarefree.begin(), squarefree.end(), [](bool b) { return b; }); }
};

struct ScanOptions {
    Int k_max = 0;
    bool strict_range = false;  // only k >= x^{1/4}/q, so that every d_i > sqrt x
    bool survivors_only = false;
    unsigned jobs = 1;
};

/// K = floor(sqrt(x - 4 max p_i)/q - 1), M = n0 + K q and z = q^2 (log x)^{4m}:
/// reported for diagnostics only, the scan tests squarefreeness directly.
struct ScanDiagnostics {
    Int k_first = 0;
    long double K = 0;
    long double M = 0;
    long double z = 0;
};

inline ScanDiagnostics scan_diagnostics(const ProgressionSpec& spec, bool strict_range)
{
    ScanDiagnostics g;
    Int pmax = spec.primes.empty() ? 0 : *std::max_element(spec.primes.begin(), spec.primes.end());
    long double q = static_cast<long double>(spec.q);
    g.K = floorl(sqrtl(std::max(0.0L, spec.x - 4.0L * pmax)) / q - 1.0L);
    g.M = spec.n0 + g.K * q;
    g.z = q * q * powl(logl(spec.x), 4.0L * spec.m);
    if (strict_range) g.k_first = static_cast<Int>(ceill(powl(spec.x, 0.25L) / q));
    return g;
}

inline std::vector<ScanRecord> scan_squarefree(const ProgressionSpec& spec, const ScanOptions& opt)
{
    auto diag = scan_diagnostics(spec, opt.strict_range);
    std::vector<ScanRecord> out;
    if (opt.k_max < diag.k_first) return out;
    auto count = static_cast<std::size_t>(opt.k_max - diag.k_first + 1);
    auto records = parallel_map(count, opt.jobs, [&](std::size_t i) {
        ScanRecord r;
        r.k = diag.k_first + static_cast<Int>(i);
        r.n = narrow(static_cast<Wide>(spec.n0) + static_cast<Wide>(r.k) * spec.q, "scan n");
        r.d = family_discriminants(spec.primes, r.n);
        for (Int d : r.d) r.squarefree.push_back(is_squarefree(d).squarefree);
        return r;
    });
    for (auto& r : records)
        if (!opt.survivors_only || r.all_squarefree()) out.push_back(std::move(r));
    return out;
}

/// rho(p^2) = #{k mod p^2 : (n0 + k q)^2 + 4 p_1 = 0 (mod p^2)}. Only the
/// k mod p that vanish mod p are lifted, each over its p classes mod p^2.
inline Int root_count_mod_p2(Int n0, Int q, Int p1, Int p)
{
    const Wide p2 = static_cast<Wide>(p) * p;
    auto value = [&](Wide k, Wide m) {
        Wide n = mod<Wide>(n0 + k % m * (q % m), m);
        return mod<Wide>(n * n + 4 * static_cast<Wide>(p1), m);
    };
    Int count = 0;
    for (Int k = 0; k < p; ++k) {
        if (value(k, p) != 0) continue;
        for (Int t = 0; t < p; ++t)
            if (value(k + static_cast<Wide>(t) * p, p2) == 0) ++count;
    }
    return count;
}

/// Truncated prod_{p <= prime_bound} (1 - rho(p^2)/p^2) for a single family.
inline long double squarefree_density(const ProgressionSpec& spec, Int prime_bound)
{
    if (spec.m != 1 || spec.primes.size() != 1)
        throw domain_error("squarefree_density: only defined for a single family (m = 1)");
    long double prod = 1;
    for (Int p : primes_up_to(prime_bound)) {
        Int rho = root_count_mod_p2(spec.n0, spec.q, spec.primes[0], p);
        prod *= 1.0L - static_cast<long double>(rho) / (static_cast<long double>(p) * p);
    }
    return prod;
}

struct Constants {
    long double C_prime_m = 0;
    long double C_m = 0;
    long double mertens_M = 0.26149L;
    long double intro_constant = 192;  // stated constant multiplying log p for m = 1
};

/// C'(m) = prod_{p_i > T} (p_i+1)/(p_i-1) prod_{p <= T} (p+1)/(p-1),
/// T = m^2 4^m + 2, and C(m) = 16 C'(m).
inline Constants compute_constants(Int m, const std::vector<Int>& primes)
{
    std::set<Int> distinct(primes.begin(), primes.end());
    if (distinct.size() != primes.size()) throw domain_error("compute_constants: primes must be distinct");
    const Int T = small_prime_threshold(m);
    if (T > 100'000'000) throw domain_error("compute_constants: m^2 4^m + 2 too large to sieve");
    Constants c;
    long double prod = 1;
    for (Int p : primes)
        if (p > T) prod *= static_cast<long double>(p + 1) / (p - 1);
    for (Int p : primes_up_to(T)) prod *= static_cast<long double>(p + 1) / (p - 1);
    c.C_prime_m = prod;
    c.C_m = 16 * prod;
    return c;
}

/// C * log(max p_i) * sqrt N / ((log N)^2 log log N).
inline long double family_h_bound(long double constant, Int pmax, long double N)
{
    return h_growth_bound(N, constant * logl(static_cast<long double>(pmax)));
}

struct AnnotateOptions {
    Int euler_bound = 1000;
    Int h_limit = 100'000'000;  // class numbers only for d up to this
    std::optional<long double> bound_constant;  // for bound_ok; default C(m)
};

inline void annotate(ScanRecord& r, const ProgressionSpec& spec, const AnnotateOptions& opt)
{
    r.h.assign(r.d.size(), std::nullopt);
    r.regulator.assign(r.d.size(), std::nullopt);
    r.L_truncated.assign(r.d.size(), std::nullopt);
    if (!r.all_squarefree()) return;
    bool all_known = true, ok = true;
    long double C = opt.bound_constant ? *opt.bound_constant : compute_constants(spec.m, spec.primes).C_m;
    Int pmax = *std::max_element(spec.primes.begin(), spec.primes.end());
    long double N = static_cast<long double>(r.n) * r.n;
    for (std::size_t i = 0; i < r.d.size(); ++i) {
        Discriminant D(r.d[i]);
        r.regulator[i] = fundamental_unit(D).regulator;
        r.L_truncated[i] = l_value_truncated(r.d[i], opt.euler_bound);
        if (r.d[i] <= opt.h_limit) {
            r.h[i] = class_number_forms(D).h;
            if (N >= 16) ok = ok && static_cast<long double>(*r.h[i]) <= family_h_bound(C, pmax, N);
        } else {
            all_known = false;
        }
    }
    if (all_known && N >= 16) r.bound_ok = ok;
}

// ---------------------------------------------------------------------------
// Named families

enum class FamilyKind { chowla, shanks, yamamoto_plus, yamamoto_minus, cubic };

inline std::string to_string(FamilyKind k)
{
    switch (k) {
        case FamilyKind::chowla: return "chowla";
        case FamilyKind::shanks: return "shanks";
        case FamilyKind::yamamoto_plus: return "yamamoto_plus";
        case FamilyKind::yamamoto_minus: return "yamamoto_minus";
        case FamilyKind::cubic: return "cubic";
    }
    return "?";
}

inline FamilyKind parse_family_kind(const std::string& s)
{
    for (auto k : {FamilyKind::chowla, FamilyKind::shanks, FamilyKind::yamamoto_plus, FamilyKind::yamamoto_minus,
                   FamilyKind::cubic})
        if (to_string(k) == s) return k;
    throw domain_error("unknown family: " + s);
}

struct FamilyParams {
    Int p = 0;  // yamamoto, cubic
    Int q = 0;  // cubic
    Int euler_bound = 1000;
    Int h_limit = 100'000'000;
    bool with_h = true;
    unsigned jobs = 1;
};

struct FamilyRecord {
    Int index = 0;  // n for chowla / yamamoto, k for shanks / cubic
    Int value = 0;  // the family polynomial value (4n^2+1, n^2 +- 4p, ...)
    Int d = 0;      // discriminant of Q(sqrt value)
    bool squarefree = false;
    std::optional<Int> h;
    std::optional<long double> regulator;
    std::optional<long double> L_truncated;
    std::optional<long double> reference;   // closed-form log unit or the family bound
    std::optional<long double> reference2;  // yamamoto: the simplified bound
    std::optional<bool> bound_ok;
};

/// Value of the family polynomial at `index`, or nullopt when undefined.
inline std::optional<Int> family_value(FamilyKind kind, const FamilyParams& params, Int index)
{
    switch (kind) {
        case FamilyKind::chowla:
            return narrow(4 * static_cast<Wide>(index) * index + 1);
        case FamilyKind::shanks: {
            if (index < 1 || index > 30) return std::nullopt;
            Wide t = (static_cast<Wide>(1) << index) + 3;
            return narrow(t * t - 8);
        }
        case FamilyKind::yamamoto_plus:
            return narrow(static_cast<Wide>(index) * index + 4 * static_cast<Wide>(params.p));
        case FamilyKind::yamamoto_minus: {
            Wide v = static_cast<Wide>(index) * index - 4 * static_cast<Wide>(params.p);
            if (v <= 1) return std::nullopt;
            return narrow(v);
        }
        case FamilyKind::cubic: {
            if (index < 1) return std::nullopt;
            Wide t = params.q;
            for (Int i = 0; i < index; ++i) {
                t *= params.p;
                if (t > static_cast<Wide>(3'000'000'000LL)) return std::nullopt;
            }
            t += params.p + 1;
            return narrow(t * t - 4 * static_cast<Wide>(params.p));
        }
    }
    return std::nullopt;
}

/// log of xi_d = ((2^k+3+sqrt d)/4)^k (2^k+1+sqrt d)/2 for d = (2^k+3)^2 - 8.
inline long double shanks_closed_form_log(Int k)
{
    long double t = ldexpl(1.0L, static_cast<int>(k));
    long double root = sqrtl((t + 3) * (t + 3) - 8);
    return k * logl((t + 3 + root) / 4) + logl((t + 1 + root) / 2);
}

/// (log d)^2/(4 log p) - (3 log d + 2 log p + 5 log 2)
inline long double yamamoto_full_bound(long double d, Int p)
{
    long double L = logl(d), lp = logl(static_cast<long double>(p));
    return L * L / (4 * lp) - (3 * L + 2 * lp + 5 * logl(2.0L));
}

/// (log d)^2/(8 log p)
inline long double yamamoto_simplified_bound(long double d, Int p)
{
    long double L = logl(d);
    return L * L / (8 * logl(static_cast<long double>(p)));
}

inline Int field_discriminant(Int value)
{
    auto [core, root] = square_split(value);
    (void)root;
    return mod<Int>(core, 4) == 1 ? core : 4 * core;
}

inline std::vector<FamilyRecord> family_scan(FamilyKind kind, const FamilyParams& params, Int lo, Int hi)
{
    if ((kind == FamilyKind::yamamoto_plus || kind == FamilyKind::yamamoto_minus) && !is_prime(params.p))
        throw domain_error("family_scan: yamamoto families need a prime p");
    if (kind == FamilyKind::cubic && !(is_prime(params.p) && is_prime(params.q) && params.p < params.q))
        throw domain_error("family_scan: cubic family needs primes p < q");
    if (lo > hi) return {};
    auto count = static_cast<std::size_t>(hi - lo + 1);
    auto rows = parallel_map(count, params.jobs, [&](std::size_t i) -> std::optional<FamilyRecord> {
        Int index = lo + static_cast<Int>(i);
        auto v = family_value(kind, params, index);
        if (!v || *v < 2 || is_square(*v)) return std::nullopt;
        FamilyRecord r;
        r.index = index;
        r.value = *v;
        r.squarefree = is_squarefree(*v).squarefree;
        if (kind == FamilyKind::cubic) {
            r.d = field_discriminant(*v);
        } else {
            if (!r.squarefree) return r;
            if (mod<Int>(*v, 4) != 1) return r;  // squarefree and 1 mod 4 is a field discriminant
            r.d = *v;
        }
        if (!r.squarefree) return r;
        Discriminant D(r.d);
        auto unit = fundamental_unit(D);
        r.regulator = unit.regulator;
        r.L_truncated = l_value_truncated(r.d, params.euler_bound);
        if (params.with_h && r.d <= params.h_limit) r.h = class_number_forms(D).h;
        long double dd = static_cast<long double>(r.d);
        switch (kind) {
            case FamilyKind::chowla:
                r.reference = logl(2 * sqrtl(dd));
                r.bound_ok = unit.regulator <= *r.reference;
                break;
            case FamilyKind::shanks:
                r.reference = shanks_closed_form_log(index);
                r.bound_ok = fabsl(unit.regulator - *r.reference) <= 1e-9L * *r.reference;
                break;
            case FamilyKind::yamamoto_plus:
            case FamilyKind::yamamoto_minus:
                r.reference = yamamoto_full_bound(dd, params.p);
                r.reference2 = yamamoto_simplified_bound(dd, params.p);
                r.bound_ok = unit.regulator >= *r.reference;
                break;
            case FamilyKind::cubic:
                break;
        }
        return r;
    });
    std::vector<FamilyRecord> out;
    for (auto& r : rows)
        if (r) out.push_back(std::move(*r));
    return out;
}

}  // namespace qrl
