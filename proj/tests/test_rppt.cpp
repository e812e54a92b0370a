#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pam/analytics.hpp"
#include "pam/errors.hpp"
#include "pam/rppt.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

ModelSpec spec_of(const char* law, double delta) {
    ModelSpec s;
    s.variant = Variant::D;
    s.out_degree = OutDegreeLaw::parse(law);
    s.delta = delta;
    return s;
}

}  // namespace

TEST(UlamHarris, OrderAndStrings) {
    UlamHarrisLabel root;
    const auto a = root.child(2), b = root.child(1).child(1);
    EXPECT_EQ(root.to_string(), "root");
    EXPECT_EQ(b.to_string(), "1.1");
    EXPECT_TRUE(a < b);
    EXPECT_TRUE(root.child(1) < a);
    EXPECT_EQ(b.parent(), root.child(1));
}

TEST(Sample, DepthZeroIsRoot) {
    Rng rng(1);
    const auto t = sample_rppt(spec_of("degenerate:1", 0.0), 0, rng);
    ASSERT_EQ(t.size(), 1);
    EXPECT_EQ(t.root().type, NodeType::Root);
    EXPECT_GT(t.root().age, 0.0);
    EXPECT_LT(t.root().age, 1.0);
}

TEST(Sample, StructuralInvariants) {
    const ModelSpec s = spec_of("uniform:1,3", 0.5);
    Rng rng(2);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto t = sample_rppt(s, 3, rng);
        std::set<std::string> labels;
        for (int i = 0; i < t.size(); ++i) {
            const auto& nd = t.nodes[i];
            labels.insert(nd.label.to_string());
            if (i == 0) continue;
            const auto& par = t.nodes[nd.parent];
            EXPECT_EQ(nd.label.parent(), par.label);
            if (nd.type == NodeType::O) EXPECT_LT(nd.age, par.age);
            if (nd.type == NodeType::Y) EXPECT_GE(nd.age, par.age);
            EXPECT_GT(nd.gamma, 0.0);
        }
        for (int i = 0; i < t.size(); ++i) {
            const auto& nd = t.nodes[i];
            if (!nd.explored) continue;
            ASSERT_EQ(int(nd.children.size()), nd.m_minus + nd.d_in);
            for (int k = 0; k < int(nd.children.size()); ++k) {
                const auto& c = t.nodes[nd.children[k]];
                EXPECT_EQ(c.label, nd.label.child(k + 1));
                EXPECT_EQ(c.type, k < nd.m_minus ? NodeType::O : NodeType::Y);
                if (k > nd.m_minus) EXPECT_LE(t.nodes[nd.children[k - 1]].age, c.age);
            }
        }
        EXPECT_EQ(int(labels.size()), t.size());
        for (int i = 1; i < t.size(); ++i) EXPECT_FALSE(t.nodes[i].label < t.nodes[i - 1].label);
    }
}

TEST(Sample, NodeLawsByType) {
    // O-nodes: m_minus ~ M^(delta); Y-nodes: m_minus + 1 ~ M^(0)
    const ModelSpec s = spec_of("uniform:1,2", 1.0);
    Rng rng(3);
    double o1 = 0, on = 0, y1 = 0, yn = 0;
    for (int rep = 0; rep < 40000; ++rep) {
        const auto t = sample_rppt(s, 2, rng);
        for (const auto& nd : t.nodes) {
            if (!nd.explored) continue;
            if (nd.type == NodeType::O) {
                on += 1;
                o1 += nd.m_minus == 1;
            }
            if (nd.type == NodeType::Y) {
                yn += 1;
                y1 += nd.m_minus == 0;
            }
        }
    }
    EXPECT_NEAR(o1 / on, 2.0 / 5, 0.01);  // (1+1)/(2 (1.5+1))
    EXPECT_NEAR(y1 / yn, 1.0 / 3, 0.01);
}

TEST(Sample, TruncationCarriesPartialTree) {
    Rng rng(4);
    try {
        sample_rppt(spec_of("degenerate:3", 5.0), 6, rng, 50);
        FAIL() << "expected truncation";
    } catch (const RpptTruncated& e) {
        EXPECT_LE(e.partial().size(), 50);
        EXPECT_GE(e.partial().size(), 1);
    }
}

TEST(Sample, JsonRoundTrip) {
    Rng rng(5);
    const auto t = sample_rppt(spec_of("uniform:1,2", 0.3), 2, rng);
    const auto j = t.to_json();
    const auto back = MarkedTree::from_json(j);
    EXPECT_EQ(back.to_json().dump(), j.dump());
    ASSERT_EQ(back.size(), t.size());
    for (int i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back.nodes[i].age, t.nodes[i].age);
        EXPECT_EQ(back.nodes[i].gamma, t.nodes[i].gamma);
    }
}

TEST(PoissonAges, EmptyAtAgeOne) {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) EXPECT_TRUE(sample_poisson_ages(3.0, 1.0, 0.4, rng).empty());
    EXPECT_THROW(sample_poisson_ages(1.0, 0.0, 0.4, rng), DomainError);
}

TEST(PoissonAges, CountMeanAndConditionalLaw) {
    Rng rng(7);
    const int reps = 100000;
    double cnt = 0;
    std::vector<double> ages;
    for (int i = 0; i < reps; ++i) {
        const auto x = sample_poisson_ages(1.0, 0.25, 0.5, rng);
        cnt += x.size();
        for (std::size_t k = 1; k < x.size(); ++k) EXPECT_LE(x[k - 1], x[k]);
        if (!x.empty()) ages.push_back(x[rng() % x.size()]);
    }
    EXPECT_NEAR(cnt / reps, 1.0, 3 * std::sqrt(1.0 / reps));
    const double a = 0.25, chi = 0.5;
    const double d = ks_statistic(ages, [&](double x) {
        return (std::pow(x, 1 - chi) - std::pow(a, 1 - chi)) / (1 - std::pow(a, 1 - chi));
    });
    EXPECT_GT(ks_pvalue(d, ages.size()), 0.01);
}

TEST(Sample, RootYoungerMeanGivenAgeAndStrength) {
    // condition on root age and strength by drawing the process directly
    Rng rng(8);
    const double g = 1.7, a = 0.3, chi = 0.6;
    double s = 0.0;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) s += sample_poisson_ages(g, a, chi, rng).size();
    const double mean = g * lambda_fn(a, chi);
    EXPECT_NEAR(s / reps, mean, 3 * std::sqrt(mean / reps));
}

TEST(Sample, OlderAgeLaw) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    const double chi = derive_constants(s).chi;
    Rng rng(9);
    std::vector<double> x;
    while (x.size() < 100000) {
        const auto t = sample_rppt(s, 1, rng);
        x.push_back(t.nodes[t.root().children[0]].age);
    }
    const double d = ks_statistic(x, [&](double v) { return older_age_cdf(v, chi); });
    EXPECT_GT(ks_pvalue(d, x.size()), 0.01);
}

TEST(Sample, RootDegreeLaw) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    Rng rng(10);
    const int trees = 1000000, kmax = 20;
    std::vector<double> emp(kmax + 1, 0.0), exact(kmax + 1, 0.0);
    for (int i = 0; i < trees; ++i) {
        const int d = sample_rppt(s, 1, rng).degree(0);
        if (d <= kmax) emp[d] += 1.0 / trees;
    }
    for (int k = 1; k <= kmax; ++k) exact[k] = 4.0 / (double(k) * (k + 1) * (k + 2));
    EXPECT_LE(tv_distance(emp, exact), 0.01);
}

TEST(Regularity, Quantiles) {
    const ModelSpec s = spec_of("degenerate:1", 0.0);
    const auto r0 = regularity_report(s, 0, 0.1, 20000, 1);
    EXPECT_NEAR(r0.eta, 0.1, 0.01);
    EXPECT_DOUBLE_EQ(r0.C, 1.0);
    const auto r1 = regularity_report(s, 1, 0.1, 20000, 2);
    const auto r2 = regularity_report(s, 2, 0.1, 20000, 3);
    EXPECT_GE(r1.C, 2.0);
    EXPECT_GE(r2.C, r1.C);
    EXPECT_GE(r2.K, r1.K * 0.9);
}
