#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/generators.hpp"
#include "pam/io.hpp"
#include "pam/polya_urn.hpp"
#include "pam/stats.hpp"

using namespace pam;

TEST(Stats, KsUniform) {
    Rng rng(1);
    std::vector<double> x(50000);
    for (auto& v : x) v = uniform01(rng);
    const double d = ks_statistic(x, [](double t) { return std::clamp(t, 0.0, 1.0); });
    EXPECT_GT(ks_pvalue(d, x.size()), 0.01);
    for (auto& v : x) v = v * v;
    const double d2 = ks_statistic(x, [](double t) { return std::clamp(t, 0.0, 1.0); });
    EXPECT_LT(ks_pvalue(d2, x.size()), 1e-6);
}

TEST(Stats, KsPvalueKnownPoint) {
    // Kolmogorov distribution: P(K > 1.36) ~ 0.049
    const int n = 1000000;
    EXPECT_NEAR(ks_pvalue(1.36 / std::sqrt(n), n), 0.0494, 0.001);
}

TEST(Stats, ChiSquare) {
    EXPECT_NEAR(chi2_pvalue(3.841458820694124, 1), 0.05, 1e-9);
    EXPECT_NEAR(chi2_pvalue(18.307038053275146, 10), 0.05, 1e-9);
    const auto r = chi2_test({25, 25, 25, 25}, {0.25, 0.25, 0.25, 0.25});
    EXPECT_DOUBLE_EQ(r.stat, 0.0);
    EXPECT_EQ(r.df, 3);
    EXPECT_DOUBLE_EQ(r.pvalue, 1.0);
}

TEST(Stats, TvAndMeanSe) {
    EXPECT_DOUBLE_EQ(tv_distance({0.5, 0.5}, {0.5, 0.25, 0.25}), 0.25);
    const auto m = mean_se({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.se, std::sqrt(5.0 / 3 / 4), 1e-15);
}

TEST(Io, GraphRoundTripBitExact) {
    ModelSpec s;
    s.variant = Variant::A;
    s.out_degree = OutDegreeLaw::parse("uniform:1,3");
    s.delta = 0.3;
    const auto g = generate(s, 500, 4);
    std::stringstream a;
    write_graph(a, g, {{"spec", s.to_json()}, {"seed", 4}});
    const std::string first = a.str();
    const auto f = read_graph(a);
    EXPECT_EQ(f.graph.edges, g.edges);
    EXPECT_EQ(f.graph.initial_edges, g.initial_edges);
    EXPECT_EQ(f.graph.degree, g.degree);
    EXPECT_EQ(f.graph.out_degree, g.out_degree);
    std::stringstream b;
    write_graph(b, f.graph, f.header);
    EXPECT_EQ(b.str(), first);
}

TEST(Io, GraphRejectsGarbage) {
    std::stringstream a("{\"format\":\"other\"}\n");
    EXPECT_THROW(read_graph(a), ParameterError);
    std::stringstream b("not json\n");
    EXPECT_THROW(read_graph(b), ParameterError);
}

TEST(Io, SidecarRoundTrip) {
    std::vector<double> psi = {0, 1, 0.3, 0.125, 1.0 / 3};
    const auto st = make_urn_state(psi);
    std::stringstream ss;
    write_urn_sidecar(ss, st);
    EXPECT_EQ(ss.str().size(), 16 + 8 * (4 + 5));
    EXPECT_EQ(ss.str().substr(0, 8), "PAMURN01");
    const auto back = read_urn_sidecar(ss);
    EXPECT_EQ(back.psi, st.psi);
    EXPECT_EQ(back.S, st.S);
}

TEST(Io, CsvHeaderRoundTrip) {
    ExperimentConfig c{"stats", {{"n", 100}, {"model", "D"}}, 7, ""};
    std::stringstream ss;
    write_csv_header(ss, c);
    ss << "k,pmf\n";
    const auto back = read_csv_header(ss);
    EXPECT_EQ(back.to_json(), c.to_json());
    std::stringstream bad("k,pmf\n");
    EXPECT_THROW(read_csv_header(bad), ParameterError);
}

TEST(Io, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3, 1e-300, 12345.678, -2.5}) EXPECT_EQ(std::stod(format_double(x)), x);
}
