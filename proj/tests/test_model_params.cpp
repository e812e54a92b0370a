#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <cmath>

#include "pam/errors.hpp"
#include "pam/model_params.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

ModelSpec spec_of(const char* law, double delta) {
    ModelSpec s;
    s.out_degree = OutDegreeLaw::parse(law);
    s.delta = delta;
    return s;
}

double pmf_sum(const OutDegreeLaw& l) {
    double s = 0.0;
    for (double p : l.probabilities()) s += p;
    return s;
}

}  // namespace

TEST(DerivedConstants, BarabasiAlbertCase) {
    const auto c = derive_constants(spec_of("degenerate:1", 0.0));
    EXPECT_DOUBLE_EQ(c.chi, 0.5);
    EXPECT_DOUBLE_EQ(c.phi, 1.0);
    EXPECT_DOUBLE_EQ(c.tau_e, 3.0);
}

TEST(DerivedConstants, DegenerateTwoDeltaOne) {
    const auto c = derive_constants(spec_of("degenerate:2", 1.0));
    EXPECT_NEAR(c.chi, 0.6, 1e-15);
    EXPECT_NEAR(c.phi, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(c.tau_e, 3.5, 1e-15);
}

TEST(DerivedConstants, ChiVanishesAtLowerLimit) {
    ModelSpec s = spec_of("degenerate:3", -3.0 + 1e-8);
    s.initial_edges = {{2, 1}, {2, 1}, {2, 1}};
    const auto c = derive_constants(s);
    EXPECT_LT(c.chi, 1e-7);
}

TEST(DerivedConstants, ScaleConsistency) {
    for (const char* law : {"degenerate:1", "uniform:1,3", "geometric:0.4", "zeta:3.5,1000"})
        for (double d : {-0.5, 0.0, 0.7, 4.0}) {
            const auto c = derive_constants(spec_of(law, d));
            EXPECT_NEAR(c.phi * c.chi, 1 - c.chi, 1e-15);
            EXPECT_GT(c.chi, 0.0);
            EXPECT_LT(c.chi, 1.0);
            if (d > 0) EXPECT_GT(c.chi, 0.5);
        }
}

TEST(DerivedConstants, TauUsesHeavierTail) {
    const auto c = derive_constants(spec_of("zeta:2.5,1000000", 0.0));
    EXPECT_DOUBLE_EQ(c.tau, 2.5);
}

TEST(ModelSpec, RejectsDeltaAtInfimum) {
    EXPECT_THROW(spec_of("degenerate:2", -2.0).validate(), ParameterError);
    EXPECT_THROW(derive_constants(spec_of("uniform:1,4", -1.0)), ParameterError);
    EXPECT_NO_THROW(spec_of("degenerate:2", -0.9).validate());
}

TEST(ModelSpec, InitialDegreesFromEdges) {
    ModelSpec s;
    s.initial_edges = {{1, 1}, {2, 1}};
    EXPECT_EQ(s.a1(), 3);
    EXPECT_EQ(s.a2(), 1);
    EXPECT_EQ(s.a_sum(), 4);
}

TEST(ModelSpec, JsonRoundTrip) {
    ModelSpec s = spec_of("pmf:2=0.5,5=0.5", 1.25);
    s.variant = Variant::E;
    const auto back = ModelSpec::from_json(s.to_json());
    EXPECT_EQ(back.to_json().dump(), s.to_json().dump());
    EXPECT_EQ(back.variant, Variant::E);
}

TEST(OutDegreeLaw, ParsesCompactAndKeyValue) {
    const auto a = OutDegreeLaw::parse("uniform:1,2");
    const auto b = OutDegreeLaw::parse("kind=uniform\na=1\nb=2");
    EXPECT_EQ(a.support(), b.support());
    EXPECT_DOUBLE_EQ(a.pmf(2), 0.5);
    EXPECT_THROW(OutDegreeLaw::parse("uniform:0,2"), ParameterError);
    EXPECT_THROW(OutDegreeLaw::parse("bogus:1"), ParameterError);
}

TEST(OutDegreeLaw, PmfSumsToOne) {
    for (const char* law : {"degenerate:4", "uniform:2,7", "zeta:2.5,1000", "geometric:0.3",
                            "pmf:1=0.2,3=0.3,9=0.5"})
        EXPECT_NEAR(pmf_sum(OutDegreeLaw::parse(law)), 1.0, 1e-12) << law;
}

TEST(OutDegreeLaw, SupportStartsAtOne) {
    EXPECT_GE(OutDegreeLaw::parse("geometric:0.5").min_support(), 1);
    EXPECT_THROW(OutDegreeLaw::parse("pmf:0=1"), ParameterError);
}

TEST(SampleOutDegrees, DegenerateThree) {
    Rng rng(1);
    EXPECT_EQ(sample_out_degrees(OutDegreeLaw::degenerate(3), 4, rng),
              (std::vector<int>{0, 1, 1, 3, 3}));
}

TEST(SampleOutDegrees, ForcedPrefix) {
    Rng rng(2);
    EXPECT_EQ(sample_out_degrees(OutDegreeLaw::parse("uniform:3,9"), 2, rng),
              (std::vector<int>{0, 1, 1}));
}

TEST(SampleOutDegrees, LawOfLargeNumbers) {
    Rng rng(3);
    const int n = 1000000;
    const auto m = sample_out_degrees(OutDegreeLaw::parse("pmf:2=0.5,5=0.5"), n, rng);
    double s = 0.0;
    for (int v = 3; v <= n; ++v) s += m[v];
    EXPECT_NEAR(s / (n - 2), 3.5, 0.01);
}

TEST(SampleOutDegrees, SeededDeterminism) {
    Rng a(99), b(99);
    const auto law = OutDegreeLaw::parse("geometric:0.3");
    EXPECT_EQ(sample_out_degrees(law, 1000, a), sample_out_degrees(law, 1000, b));
}

TEST(SizeBiased, PointMassUnchanged) {
    const auto l = size_biased_law(OutDegreeLaw::degenerate(3), 1.7);
    EXPECT_EQ(l.support(), std::vector<int>{3});
    EXPECT_DOUBLE_EQ(l.pmf(3), 1.0);
}

TEST(SizeBiased, UniformOneTwo) {
    const auto l = size_biased_law(OutDegreeLaw::parse("uniform:1,2"), 0.0);
    EXPECT_NEAR(l.pmf(1), 1.0 / 3, 1e-15);
    EXPECT_NEAR(l.pmf(2), 2.0 / 3, 1e-15);
}

TEST(SizeBiased, TwiceIsSquareWeighting) {
    const auto base = OutDegreeLaw::parse("pmf:1=0.2,3=0.3,9=0.5");
    const auto twice = size_biased_law(size_biased_law(base, 0.0), 0.0);
    const double z = 0.2 * 1 + 0.3 * 9 + 0.5 * 81;
    EXPECT_NEAR(twice.pmf(1), 0.2 / z, 1e-14);
    EXPECT_NEAR(twice.pmf(3), 2.7 / z, 1e-14);
    EXPECT_NEAR(twice.pmf(9), 40.5 / z, 1e-14);
    EXPECT_NEAR(pmf_sum(twice), 1.0, 1e-12);
}

TEST(SizeBiased, HeavyZetaRejected) {
    EXPECT_THROW(size_biased_law(OutDegreeLaw::parse("zeta:1.8,1000000"), 0.0), ParameterError);
}

TEST(Lambda, Values) {
    EXPECT_DOUBLE_EQ(lambda_fn(1.0, 0.3), 0.0);
    EXPECT_NEAR(lambda_fn(0.25, 0.5), 1.0, 1e-15);
    for (double chi : {0.1, 0.5, 0.9}) EXPECT_GT(lambda_fn(0.3, chi), lambda_fn(0.7, chi));
    EXPECT_GT(lambda_fn(1e-12, 0.5), 1e5);
    EXPECT_THROW(lambda_fn(0.0, 0.5), DomainError);
}

TEST(Samplers, BetaUniformMean) {
    Rng rng(5);
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += sample_beta(1, 1, rng);
    EXPECT_NEAR(s / 1e5, 0.5, 0.005);
}

TEST(Samplers, GammaMean) {
    Rng rng(6);
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += sample_gamma(2 - 0.5, 1, rng);
    EXPECT_NEAR(s / 1e5, 1.5, 0.02);
}

TEST(Samplers, BetaZeroIsOne) {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_beta(2.5, 0.0, rng), 1.0);
    EXPECT_THROW(sample_gamma(0.0, 1.0, rng), ParameterError);
}

TEST(Samplers, KolmogorovSmirnov) {
    Rng rng(8);
    const int n = 100000;
    for (double shape : {0.3, 1.0, 2.5, 7.0, 0.05}) {
        std::vector<double> x(n);
        for (auto& v : x) v = sample_gamma(shape, 2.0, rng);
        const boost::math::gamma_distribution<> g(shape, 0.5);
        const double d = ks_statistic(x, [&](double t) { return boost::math::cdf(g, t); });
        EXPECT_GT(ks_pvalue(d, n), 0.01) << "gamma shape " << shape;
    }
    const double ab[5][2] = {{0.5, 0.5}, {1, 1}, {2, 5}, {0.2, 3}, {30, 2}};
    for (const auto& p : ab) {
        std::vector<double> x(n);
        for (auto& v : x) v = sample_beta(p[0], p[1], rng);
        const boost::math::beta_distribution<> b(p[0], p[1]);
        const double d = ks_statistic(x, [&](double t) { return boost::math::cdf(b, t); });
        EXPECT_GT(ks_pvalue(d, n), 0.01) << "beta " << p[0] << "," << p[1];
    }
}

TEST(Samplers, LogGammaTinyShape) {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) EXPECT_TRUE(std::isfinite(sample_log_gamma(1e-6, rng)));
}
