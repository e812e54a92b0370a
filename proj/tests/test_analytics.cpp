#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "pam/analytics.hpp"
#include "pam/errors.hpp"
#include "pam/generators.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

ModelSpec spec_of(const char* law, double delta, Variant v = Variant::D) {
    ModelSpec s;
    s.variant = v;
    s.out_degree = OutDegreeLaw::parse(law);
    s.delta = delta;
    return s;
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b);
}

}  // namespace

TEST(MixedPoisson, AgeOneIsPointMass) {
    EXPECT_NEAR(mixed_poisson_pmf(2, 1.0, 2, 0.6, 1.0), 1.0, 1e-15);
    EXPECT_EQ(mixed_poisson_pmf(2, 1.0, 3, 0.6, 1.0), 0.0);
    EXPECT_EQ(mixed_poisson_pmf(3, 0.5, 2, 0.6, 1.0), 0.0);
}

TEST(MixedPoisson, Normalised) {
    const double chi = derive_constants(spec_of("degenerate:2", 1.0)).chi;
    double s = 0.0;
    for (int t = 2; t <= 500; ++t) s += mixed_poisson_pmf(2, 0.3, t, chi, 1.0);
    EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(MixedPoisson, MatchesTwoStageSampling) {
    const double chi = 0.6, delta = 1.0, a = 0.3;
    const int m = 2, reps = 1000000;
    Rng rng(1);
    std::vector<double> c(40, 0.0);
    for (int i = 0; i < reps; ++i) {
        const double g = sample_gamma(m + delta, 1.0, rng);
        std::poisson_distribution<int> p(g * lambda_fn(a, chi));
        const int y = p(rng);
        if (y < 40) c[y] += 1;
    }
    std::vector<double> q(40);
    double rest = 1.0;
    for (int y = 0; y < 39; ++y) rest -= (q[y] = mixed_poisson_pmf(m, a, m + y, chi, delta));
    q[39] = std::max(rest, 0.0);
    c[39] = reps - std::accumulate(c.begin(), c.end() - 1, 0.0);
    EXPECT_GT(chi2_test(c, q).pvalue, 1e-3);
}

TEST(MixedPoisson, DependsOnAgeThroughPower) {
    // equal a^{1-chi}: (0.25, 1/2) and (0.0625, 3/4)
    for (int t = 1; t < 12; ++t)
        EXPECT_NEAR(mixed_poisson_pmf(1, 0.25, t, 0.5, 0.3), mixed_poisson_pmf(1, 0.0625, t, 0.75, 0.3),
                    1e-14);
}

TEST(RootDegree, BarabasiAlbert) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    EXPECT_NEAR(root_degree_pmf(1, s), 2.0 / 3, 1e-14);
    for (int t = 1; t < 60; ++t)
        EXPECT_NEAR(root_degree_pmf(t, s), 4.0 / (double(t) * (t + 1) * (t + 2)), 1e-14);
}

TEST(RootDegree, NormalisedWithTail) {
    const ModelSpec s = spec_of("uniform:1,2", 0.5);
    const auto law = degree_law_table(DegreeLawKind::Root, s, 2000);
    EXPECT_NEAR(law.mass() + law.tail, 1.0, 1e-12);
    EXPECT_GE(law.mass(), 1 - 1e-6);
    for (double p : law.pmf) EXPECT_GE(p, 0.0);
}

TEST(RootDegree, TailSlope) {
    for (int m : {1, 2, 3})
        for (double d : {0.0, 1.0}) {
            const ModelSpec s = spec_of(("degenerate:" + std::to_string(m)).c_str(), d);
            const auto law = degree_law_table(DegreeLawKind::Root, s, 500);
            EXPECT_NEAR(pmf_tail_slope(law.pmf, 50, 500).slope, -derive_constants(s).tau_e, 0.1);
        }
}

TEST(OlderDegree, NormalisedWithExactTail) {
    const ModelSpec s = spec_of("degenerate:2", 1.0);
    const auto law = degree_law_table(DegreeLawKind::Older, s, 1000);
    EXPECT_NEAR(law.mass() + law.tail, 1.0, 1e-6);
    const auto big = degree_law_table(DegreeLawKind::Older, s, 4000);
    EXPECT_NEAR(big.mass() - law.mass(), law.tail - big.tail, 1e-10);
}

TEST(OlderDegree, TailSlope) {
    const ModelSpec s = spec_of("degenerate:2", 1.0);
    const auto law = degree_law_table(DegreeLawKind::Older, s, 2000);
    EXPECT_NEAR(pmf_tail_slope(law.pmf, 100, 2000).slope, -2.5, 0.15);
}

TEST(YoungerDegree, UnconditionedMatchesSeries) {
    for (const char* law : {"degenerate:1", "uniform:1,2"}) {
        const ModelSpec s = spec_of(law, 0.5);
        for (int t = 1; t <= 12; ++t)
            EXPECT_NEAR(younger_neighbor_pmf_unconditioned(t, s), younger_neighbor_pmf_series(t, s),
                        1e-9);
    }
}

TEST(YoungerDegree, MatchesRpptSampler) {
    const ModelSpec s = spec_of("uniform:1,2", 0.5);
    const int kmax = 40;
    const auto mc = rppt_degree_laws(s, 1000000, kmax, 3);
    std::vector<double> emp(kmax + 1), exact(kmax + 1, 0.0), older(kmax + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) emp[k] = mc.younger[k];
    for (int k = 1; k <= kmax; ++k) {
        exact[k] = younger_neighbor_pmf(k, s);
        older[k] = older_neighbor_pmf(k, s);
    }
    EXPECT_LE(tv_distance(emp, exact), 0.02);
    std::vector<double> eo(kmax + 1);
    for (int k = 0; k <= kmax; ++k) eo[k] = mc.older[k];
    EXPECT_LE(tv_distance(eo, older), 0.02);
}

TEST(YoungerDegree, TableNormalised) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    const auto law = degree_law_table(DegreeLawKind::Younger, s, 300);
    EXPECT_NEAR(law.mass() + law.tail, 1.0, 1e-12);
    EXPECT_GT(law.mass(), 0.999);
}

TEST(AgeDensities, OlderClosedFormAndNormalisation) {
    for (double a : {0.1, 0.5, 0.9}) EXPECT_NEAR(older_age_density(a, 0.5), 1 / std::sqrt(a) - 1, 1e-14);
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 10; ++i) {
        const double chi = u(rng);
        EXPECT_NEAR(integrate([&](double a) { return older_age_density(a, chi); }, 0, 1), 1.0, 1e-10)
            << chi;
        EXPECT_NEAR(older_age_cdf(0.4, chi),
                    integrate([&](double a) { return older_age_density(a, chi); }, 0, 0.4), 1e-9);
    }
}

TEST(AgeDensities, YoungerNormalised) {
    for (double chi : {0.3, 0.5, 0.7}) {
        EXPECT_NEAR(integrate([&](double x) { return younger_age_density(x, chi); }, 0, 1), 1.0, 1e-8);
        EXPECT_NEAR(younger_age_cdf(0.5, chi),
                    integrate([&](double x) { return younger_age_density(x, chi); }, 0, 0.5), 1e-8);
    }
    const ModelSpec s = spec_of("uniform:1,2", 0.5);
    EXPECT_NEAR(
        integrate([&](double x) { return younger_age_density_conditioned(x, s); }, 0, 1), 1.0, 1e-8);
    EXPECT_NEAR(younger_age_cdf_conditioned(1.0, s), 1.0, 1e-12);
}

TEST(AgeDensities, NoYoungerChild) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    EXPECT_NEAR(no_younger_child_prob(1.0, s), 1.0, 1e-15);
    EXPECT_NEAR(no_younger_child_prob(0.25, s), 0.5, 1e-15);
}

TEST(TreeDensity, SingleNode) {
    const ModelSpec s = spec_of("uniform:1,3", 0.4);
    EXPECT_DOUBLE_EQ(rppt_tree_density(AgedTree{{-1}, {0.37}}, 0, s), 1.0);
}

TEST(TreeDensity, RootWithOlderChildTwoWays) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    const AgedTree t{{-1, 0}, {0.6, 0.2}};
    const double exact = rppt_tree_density(t, 1, s);
    // chi E[exp(-Gamma lambda(a))] a^{-chi} b^{-(1-chi)} with Gamma ~ Exp(1)
    const double chi = 0.5, a = 0.6, b = 0.2;
    const double expect = integrate(
        [&](double g) { return std::exp(-g) * std::exp(-g * lambda_fn(a, chi)); }, 0, 60);
    EXPECT_NEAR(exact, chi * expect * std::pow(a, -chi) * std::pow(b, -(1 - chi)), 1e-12);
    const auto mc = rppt_tree_density_mc(t, 1, s, 200000, 5);
    EXPECT_LE(std::abs(mc.value - exact), 3 * mc.se);
}

TEST(TreeDensity, DepthOneIntegratesToOne) {
    // root with its single forced older child and d younger children, summed over d
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    Rng rng(6);
    double total = 0.0;
    for (int d = 0; d <= 14; ++d) {
        const int reps = 100000;
        double acc = 0.0, fact = std::tgamma(d + 1.0);
        for (int i = 0; i < reps; ++i) {
            AgedTree t{{-1, 0}, {uniform_open(rng), 0.0}};
            const double a = t.age[0];
            t.age[1] = a * uniform_open(rng);
            double w = a;  // volume of the older child's range
            for (int k = 0; k < d; ++k) {
                t.parent.push_back(0);
                t.age.push_back(a + (1 - a) * uniform_open(rng));
                w *= 1 - a;
            }
            acc += rppt_tree_density(t, 1, s) * w / fact;
        }
        total += acc / reps;
    }
    EXPECT_NEAR(total, 1.0, 0.01);
}

TEST(NoFurtherEdge, Values) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    EXPECT_DOUBLE_EQ(no_further_edge_factor(1.0, 2.0, s), 1.0);
    EXPECT_GT(no_further_edge_factor(0.5, 1.0, s), no_further_edge_factor(0.5, 2.0, s));
    EXPECT_GT(no_further_edge_factor(0.6, 1.0, s), no_further_edge_factor(0.3, 1.0, s));
}

TEST(NoFurtherEdge, AgainstSimulation) {
    // P(vertex n/2 receives no later edge) vs E[exp(-Gamma lambda(1/2))], Gamma ~ Gamma(1 + delta)
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    const int n = 2000, reps = 10000, v = n / 2;
    int none = 0;
    for (int i = 0; i < reps; ++i) {
        const auto g = generate(s, n, 1000 + i);
        none += g.degree[v] == g.out_degree[v];
    }
    Rng rng(7);
    double e = 0.0;
    for (int i = 0; i < 200000; ++i) e += no_further_edge_factor(0.5, sample_gamma(1.0, 1.0, rng), s);
    e /= 200000;
    EXPECT_NEAR(e, no_younger_child_prob(0.5, s), 0.005);
    const double q = double(none) / reps;
    EXPECT_LE(std::abs(q - e), 3 * std::sqrt(e * (1 - e) / reps) + 0.005);
}

TEST(CouplingTv, SingleEdgeIsZero) {
    const ModelSpec s = spec_of("uniform:1,2", 0.3);
    for (int d : {1, 5, 20}) EXPECT_NEAR(coupling_tv_bound(d, 1, 1000, s), 0.0, 1e-15);
}

TEST(CouplingTv, EnumerationAtTwoEdges) {
    const ModelSpec s = spec_of("degenerate:2", 0.0);
    const int d = 4, n = 1000;
    const std::int64_t mp = 2 + 2 * (n - 3);
    const double c = s.a_sum() + 2.0 * (mp - 2);
    const double p = d / c;
    const double q[3] = {(1 - p) * (1 - p), 2 * p * (1 - p), p * p};
    // sequential: the second edge sees the degree after the first
    const double hit2 = (d + 1) / (c + 1), miss2 = d / (c + 1);
    const double t[3] = {(1 - p) * (1 - miss2), p * (1 - hit2) + (1 - p) * miss2, p * hit2};
    double tv = 0.0;
    for (int k = 0; k < 3; ++k) tv += 0.5 * std::abs(q[k] - t[k]);
    EXPECT_NEAR(coupling_tv_bound(d, 2, n, mp, s), tv, 1e-15);
    EXPECT_LE(coupling_tv_bound(d, 2, n, mp, s), coupling_tv_envelope(d, 2, n, s));
}

TEST(Coupling, MarginalsAreModels) {
    const ModelSpec s = spec_of("uniform:1,2", 0.0);
    for (Variant other : {Variant::E, Variant::F}) {
        const auto c = couple_models(s, other, 2000, 3);
        EXPECT_EQ(c.d.degree, c.d.recompute_degrees());
        EXPECT_EQ(c.other.degree, c.other.recompute_degrees());
        EXPECT_FALSE(c.d.has_self_loops());
        EXPECT_FALSE(c.other.has_self_loops());
        if (other == Variant::F) EXPECT_FALSE(c.other.has_multi_edges());
        EXPECT_EQ(c.d.out_degree, c.other.out_degree);
        EXPECT_LE(c.disagreements, c.edges);
        EXPECT_GT(c.edges, 0);
        EXPECT_LT(double(c.disagreements) / c.edges, 0.1);
    }
}

TEST(Coupling, MismatchShrinks) {
    const ModelSpec s = spec_of("uniform:1,2", 0.0);
    const auto a = couple_report(s, Variant::E, 1000, 2, {1, 2, 3, 4, 5});
    const auto b = couple_report(s, Variant::E, 30000, 2, {1, 2, 3, 4, 5});
    EXPECT_LT(b.mismatch_mean, a.mismatch_mean);
}

TEST(Coupling, IdenticalGraphsNoMismatch) {
    const auto g = generate(spec_of("uniform:1,2", 0.0), 500, 2);
    EXPECT_EQ(ball_mismatch_fraction(g, g, 2), 0.0);
}

TEST(Empirical, WeightedMassIsMeanInverseOutDegree) {
    const auto g = generate(spec_of("pmf:1=0.5,4=0.5", 0.0), 20000, 3);
    const auto e = empirical_degree_pmf(g, 100000);
    double wu = 0, ww = 0, inv = 0;
    for (double x : e.unweighted) wu += x;
    for (double x : e.weighted) ww += x;
    for (int u = 1; u <= g.n; ++u) inv += 1.0 / g.out_degree[u];
    EXPECT_NEAR(wu, 1.0, 1e-9);
    EXPECT_NEAR(ww, inv / g.n, 1e-9);
}

TEST(Empirical, SurvivalMonotone) {
    const auto g = generate(spec_of("degenerate:1", 0.0), 10000, 4);
    const auto sv = degree_survival(g, 200);
    EXPECT_NEAR(sv[0], 1.0, 1e-12);
    for (std::size_t k = 1; k < sv.size(); ++k) EXPECT_LE(sv[k], sv[k - 1] + 1e-15);
}

TEST(SlopeFit, ExactPowerLaw) {
    std::vector<double> x, y;
    for (int k = 1; k <= 100; ++k) {
        x.push_back(k);
        y.push_back(3.0 * std::pow(k, -1.7));
    }
    const auto f = fit_log_log(x, y, 5, 80);
    EXPECT_NEAR(f.slope, -1.7, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
    EXPECT_EQ(f.points, 76);
}

TEST(PatternProbability, RootOnly) {
    TreePattern p;
    p.id = "root";
    p.parent = {-1};
    p.lo = {0.2};
    p.hi = {0.5};
    const auto e = rppt_pattern_probability(spec_of("degenerate:1", 0.0), p, 0, 100000, 1);
    EXPECT_LE(std::abs(e.value - 0.3), 3 * e.se);
}
