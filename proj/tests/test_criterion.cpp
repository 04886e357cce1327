#include <gtest/gtest.h>

#include <random>

#include "qrl/criterion.hpp"

using namespace qrl;

namespace {

CriterionInput input(Int d, const std::string& norms) { return {d, parse_decompositions(norms)}; }

// Composite Simpson on [0, budget / log n_i] in each coordinate of
// (budget - sum x_i log n_i), nested over the simplex G.
long double quadrature(const std::vector<long double>& logs, std::size_t i, long double budget, int steps)
{
    if (i == logs.size()) return budget;
    const long double top = budget / logs[i];
    const long double h = top / steps;
    long double sum = 0;
    for (int j = 0; j <= steps; ++j) {
        long double w = (j == 0 || j == steps) ? 1 : (j % 2 ? 4 : 2);
        long double rest = budget - j * h * logs[i];
        sum += w * quadrature(logs, i + 1, rest < 0 ? 0 : rest, steps);
    }
    return sum * h / 3;
}

// Cycle norms coprime to d and to each other, smallest first.
std::vector<Int> coprime_cycle_norms(Int d, std::size_t m)
{
    std::set<Int> norms;
    for (const auto& r : principal_cycle(Discriminant(d)))
        if (r.a() > 1) norms.insert(r.a());
    std::vector<Int> out;
    for (Int n : norms) {
        if (out.size() == m) break;
        if (gcd(n, d) != 1) continue;
        bool ok = true;
        for (Int x : out) ok = ok && gcd(x, n) == 1;
        if (ok) out.push_back(n);
    }
    return out;
}

}  // namespace

TEST(Parse, Decompositions)
{
    auto v = parse_decompositions("6=2*3, 3=3*1, 5");
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0].n, 6);
    EXPECT_EQ(v[0].coprime, 2);
    EXPECT_EQ(v[0].ramified, 3);
    EXPECT_EQ(v[2].coprime, 5);
    EXPECT_EQ(v[2].ramified, 1);
    EXPECT_THROW(parse_decompositions("6=2*2"), domain_error);
    EXPECT_THROW(parse_decompositions("1"), domain_error);
    EXPECT_THROW(parse_decompositions("6=2"), domain_error);
    EXPECT_THROW(parse_decompositions("abc"), domain_error);
}

TEST(Hypotheses, Examples)
{
    EXPECT_TRUE(check_hypotheses(input(61, "3")).all());
    auto r13 = check_hypotheses(input(13, "3"));
    EXPECT_FALSE(r13.per_norm[0].a);
    EXPECT_TRUE(r13.per_norm[0].b1);
    auto r61 = check_hypotheses(input(61, "6=2*3"));
    EXPECT_FALSE(r61.per_norm[0].b2);
    EXPECT_FALSE(r61.all());
}

TEST(Hypotheses, PairwiseCoprime)
{
    // 229 has reduced principal ideals of norm 3 and 5
    auto rep = check_hypotheses(input(229, "3, 5, 15"));
    EXPECT_TRUE(rep.per_norm[0].b1);
    EXPECT_FALSE(rep.per_norm[0].b3);
    EXPECT_FALSE(rep.per_norm[2].b3);
}

TEST(ReduceDoublePrime, Identity)
{
    auto in = input(61, "3, 5");
    auto out = reduce_double_prime(in);
    ASSERT_EQ(out.decomps.size(), 2u);
    EXPECT_EQ(out.decomps[0].n, 3);
    EXPECT_EQ(out.decomps[1].n, 5);
}

TEST(ReduceDoublePrime, RamifiedFactor)
{
    // 33 = 1 (mod 8) so 2 splits, and 3 | 33
    auto out = reduce_double_prime(input(33, "6=2*3"));
    ASSERT_EQ(out.decomps.size(), 1u);
    EXPECT_EQ(out.decomps[0].n, 4);
    EXPECT_EQ(out.decomps[0].coprime, 4);
    EXPECT_EQ(out.decomps[0].ramified, 1);
    // the oracle: [3, (b + sqrt 33)/2] squared is 3 O_33
    auto P = make_ideal(3, 3, 1, 33);
    EXPECT_EQ(multiply_ideals(P, P), QuadIdeal::unit(33).scaled(3));
}

TEST(ReduceDoublePrime, MixedList)
{
    auto out = reduce_double_prime(input(33, "6=2*3, 2, 3=1*3"));
    ASSERT_EQ(out.decomps.size(), 2u);
    EXPECT_EQ(out.decomps[0].n, 4);
    EXPECT_EQ(out.decomps[1].n, 2);
}

TEST(ReduceDoublePrime, FalseClaimRejected)
{
    EXPECT_THROW(reduce_double_prime(input(61, "6=2*3")), domain_error);
    EXPECT_THROW(reduce_double_prime(input(33, "9=3*3")), domain_error);
}

TEST(ReduceDoublePrime, ConservativeBounds)
{
    int used = 0;
    for (Int d = 5; d <= 30000 && used < 20; ++d) {
        if (!is_fundamental_discriminant(d) || d % 3 != 0 || d % 2 == 0) continue;
        Int n = 0;
        for (const auto& r : principal_cycle(Discriminant(d)))
            if (r.a() > 1 && r.a() % 3 == 0 && gcd(r.a() / 3, 3 * d) == 1 && r.a() / 3 > 1) {
                n = r.a();
                break;
            }
        if (n == 0) continue;
        CriterionInput in{d, {make_decomposition(n, n / 3, 3)}};
        if (!check_hypotheses(in).all()) continue;
        auto out = reduce_double_prime(in);
        if (!check_hypotheses(out).all()) continue;
        std::vector<Int> norms;
        for (const auto& x : out.decomps) norms.push_back(x.n);
        auto rep = omega_lower_bound(enumerate_omega(d, norms));
        ASSERT_LE(rep.discrete_sum, rep.regulator) << d;
        ASSERT_LE(rep.exact_sum, rep.regulator) << d;
        ++used;
    }
    EXPECT_GT(used, 0);
}

TEST(Omega, Examples)
{
    auto w = enumerate_omega(61, {3});
    ASSERT_EQ(w.entries.size(), 2u);
    EXPECT_EQ(w.entries[0].exponents, std::vector<Int>{0});
    EXPECT_EQ(w.entries[1].exponents, std::vector<Int>{1});
    auto empty = enumerate_omega(1021, {});
    ASSERT_EQ(empty.entries.size(), 1u);
    EXPECT_TRUE(empty.entries[0].exponents.empty());
    EXPECT_THROW(enumerate_omega(13, {3}), domain_error);
    EXPECT_THROW(enumerate_omega(229, {3, 15}), domain_error);
}

TEST(Omega, TwoNormsNearMillion)
{
    Int d = 1'000'001;
    for (;; d += 2) {
        if (!is_discriminant(d)) continue;
        if (is_norm_of_reduced_principal(Discriminant(d), 2) && is_norm_of_reduced_principal(Discriminant(d), 3)) break;
    }
    ASSERT_LT(d, 1'040'000);
    auto w = enumerate_omega(d, {2, 3});
    Int expected = 0;
    for (Int a = 1; a < 500; a *= 2)
        for (Int b = a; b < 500; b *= 3) ++expected;
    EXPECT_EQ(static_cast<Int>(w.entries.size()), expected) << d;
    for (const auto& e : w.entries) {
        EXPECT_EQ(e.ideal.content(), 1);
        EXPECT_EQ(e.ideal.norm(), e.norm);
    }
}

TEST(Omega, LowerBoundExample)
{
    auto rep = omega_lower_bound(enumerate_omega(61, {3}));
    long double h = logl(sqrtl(61.0L) / 2);
    EXPECT_NEAR(static_cast<double>(rep.discrete_sum), static_cast<double>(2 * h - logl(3.0L)), 1e-12);
    EXPECT_NEAR(static_cast<double>(rep.discrete_sum), 1.626, 1e-3);
    EXPECT_NEAR(static_cast<double>(rep.regulator), 3.664, 1e-3);
    EXPECT_LE(rep.discrete_sum, rep.exact_sum);
    EXPECT_LE(rep.exact_sum, rep.regulator);
    auto none = omega_lower_bound(enumerate_omega(1021, {}));
    EXPECT_NEAR(static_cast<double>(none.discrete_sum), static_cast<double>(logl(sqrtl(1021.0L) / 2)), 1e-12);
}

TEST(Omega, Soundness)
{
    std::mt19937_64 rng(31337);
    int done[3] = {0, 0, 0};
    while (done[1] < 30 || done[2] < 30) {
        Int d = 1000 + static_cast<Int>(rng() % 999000);
        if (!is_discriminant(d)) continue;
        for (std::size_t m : {1u, 2u}) {
            if (done[m] >= 30) continue;
            auto norms = coprime_cycle_norms(d, m);
            if (norms.size() != m) continue;
            CriterionInput in{d, {}};
            for (Int n : norms) in.decomps.push_back(make_decomposition(n, n, 1));
            ASSERT_TRUE(check_hypotheses(in).all()) << d;
            auto w = enumerate_omega(d, norms);
            auto cf = cf_expand(QuadIrrational::omega(Discriminant(d)));
            for (const auto& e : w.entries) {
                // each rho_a is one of the complete quotients whose product is xi_d
                ASSERT_NE(std::find(cf.cycle.begin(), cf.cycle.end(), e.rho), cf.cycle.end()) << d;
                ASSERT_EQ(e.ideal.content(), 1) << d;
            }
            auto rep = omega_lower_bound(w);
            ASSERT_LE(rep.discrete_sum, rep.exact_sum + 1e-12L) << d;
            ASSERT_LE(rep.exact_sum, rep.regulator + 1e-12L) << d;
            ++done[m];
        }
    }
}

TEST(Integral, Examples)
{
    EXPECT_NEAR(static_cast<double>(integral_I_at(10, {2})), 100 / (2 * std::log(2.0)), 1e-10);
    EXPECT_NEAR(static_cast<double>(integral_I_at(10, {2})), 72.1348, 1e-4);
    EXPECT_NEAR(static_cast<double>(integral_I_at(10, {2, 3})), 2000 / (6 * std::log(2.0) * std::log(3.0)), 1e-9);
    EXPECT_NEAR(static_cast<double>(integral_I_at(10, {2, 3})), 437.73, 1e-2);
    EXPECT_THROW(integral_I(1e6L, {1}), domain_error);
}

TEST(Integral, ClosedFormIsMTimesIntegral)
{
    for (const auto& norms : std::vector<std::vector<Int>>{{2}, {2, 3}, {2, 3, 5}, {3, 7, 11, 13}})
        for (long double L : {1.0L, 5.0L, 12.5L})
            ASSERT_NEAR(static_cast<double>(integral_I_at(L, norms)),
                        static_cast<double>(norms.size() * integral_exact_at(L, norms)), 1e-9);
}

TEST(Integral, MatchesQuadrature)
{
    for (const auto& norms : std::vector<std::vector<Int>>{{2}, {3}, {2, 3}, {5, 7}, {2, 3, 5}}) {
        std::vector<long double> logs;
        for (Int n : norms) logs.push_back(logl(static_cast<long double>(n)));
        for (long double L : {2.0L, 6.2L, 10.0L}) {
            int steps = norms.size() == 3 ? 120 : 400;
            long double q = quadrature(logs, 0, L, steps);
            long double exact = integral_exact_at(L, norms);
            ASSERT_NEAR(static_cast<double>(q / exact), 1.0, 1e-6) << norms.size() << " " << static_cast<double>(L);
        }
    }
}

TEST(Lattice, Example)
{
    auto c = lattice_vs_integral(1e6L, {2});
    EXPECT_EQ(c.lattice_count, 9);
    EXPECT_NEAR(static_cast<double>(c.lattice_sum), 30.979, 1e-3);
    EXPECT_NEAR(static_cast<double>(c.I), 27.859, 1e-3);
    EXPECT_NEAR(static_cast<double>(c.diff), 3.12, 1e-2);
    auto tiny = lattice_vs_integral_at(0.5L, {2});
    EXPECT_EQ(tiny.lattice_count, 1);
    EXPECT_NEAR(static_cast<double>(tiny.lattice_sum), 0.5, 1e-15);
    EXPECT_NEAR(static_cast<double>(tiny.diff + tiny.I), 0.5, 1e-15);
}

TEST(Lattice, ErrorTermStaysBounded)
{
    for (const auto& norms : std::vector<std::vector<Int>>{{2}, {2, 3}}) {
        long double worst = 0;
        for (long double d : {1e6L, 1e8L, 1e10L, 1e12L}) {
            auto c = lattice_vs_integral(d, norms);
            worst = std::max(worst, fabsl(c.diff) / powl(logl(d), static_cast<long double>(norms.size())));
        }
        EXPECT_LT(worst, 0.25L) << norms.size();
    }
}

TEST(Lattice, AgreesWithOmegaDiscreteSum)
{
    auto w = enumerate_omega(61, {3});
    auto rep = omega_lower_bound(w);
    auto c = lattice_vs_integral(61.0L, {3});
    EXPECT_EQ(c.lattice_count, rep.lattice_count);
    EXPECT_NEAR(static_cast<double>(c.lattice_sum), static_cast<double>(rep.discrete_sum), 1e-12);
}

TEST(HalterKoch, SearchedCounterexample)
{
    auto rep = hk_search();
    ASSERT_TRUE(rep.has_value());
    const auto& P = rep->params;
    EXPECT_EQ(rep->product_content, P.r);
    EXPECT_GT(rep->product_content, 1);
    EXPECT_EQ(rep->product_norm, P.r * P.s * P.r * (P.t * P.s + 1));
    EXPECT_TRUE(rep->norm_below_half_root);
    EXPECT_EQ(rep->n1.content(), 1);
    EXPECT_EQ(rep->n2.content(), 1);
    // product checked against the Z-module it must generate
    EXPECT_EQ(rep->product.norm(), rep->n1.norm() * rep->n2.norm());
    EXPECT_EQ(rep->d, 7729);
}

TEST(HalterKoch, InvalidParameters)
{
    EXPECT_THROW(hk_counterexample({1, 2, 1, 1, 1}), domain_error);
    // q = tp + r = 2*4 + 2 = 10 shares a factor with c = 5
    EXPECT_THROW(hk_counterexample({2, 2, 2, 1, 5}), domain_error);
}
