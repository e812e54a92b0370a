#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "pam/generators.hpp"
#include "pam/neighborhoods.hpp"
#include "pam/rppt.hpp"

using namespace pam;

namespace {

/// Graph on n vertices: initial edge 2 -> 1, then one edge per listed pair.
EvolvingGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    EvolvingGraph g;
    g.n = n;
    g.out_degree.assign(n + 1, 1);
    g.out_degree[0] = 0;
    g.initial_edges = {{2, 0, 1}};
    std::vector<int> idx(n + 1, 0);
    for (auto [s, t] : edges) g.edges.push_back({s, ++idx[s], t});
    g.degree = g.recompute_degrees();
    return g;
}

ModelSpec spec_of(Variant v, const char* law, double delta) {
    ModelSpec s;
    s.variant = v;
    s.out_degree = OutDegreeLaw::parse(law);
    s.delta = delta;
    return s;
}

/// Brute force over all root-fixing permutations of the non-root vertices.
bool brute_isomorphic(const RootedGraph& a, const RootedGraph& b) {
    if (a.size() != b.size()) return false;
    const int n = a.size();
    auto mult = [](const RootedGraph& g, int x, int y) {
        return std::count(g.nbrs[x].begin(), g.nbrs[x].end(), y);
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) {
            ok = a.loops[x] == b.loops[perm[x]];
            for (int y = 0; y < n && ok; ++y) ok = mult(a, x, y) == mult(b, perm[x], perm[y]);
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return false;
}

RootedGraph random_tree(int n, Rng& rng) {
    RootedGraph t;
    t.nbrs.resize(n);
    t.loops.assign(n, 0);
    t.marks.assign(n, 0.5);
    t.labels.resize(n);
    for (int i = 1; i < n; ++i) {
        const int p = std::uniform_int_distribution<int>(0, i - 1)(rng);
        t.nbrs[i].push_back(p);
        t.nbrs[p].push_back(i);
    }
    // relabel non-root vertices randomly
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    RootedGraph out = t;
    for (int i = 0; i < n; ++i) {
        out.nbrs[perm[i]].clear();
        for (int j : t.nbrs[i]) out.nbrs[perm[i]].push_back(perm[j]);
    }
    return out;
}

}  // namespace

TEST(Ball, RadiusZeroKeepsLoops) {
    auto g = make_graph(3, {{3, 3}});
    const auto b = extract_ball(g, 3, 0);
    EXPECT_EQ(b.size(), 1);
    EXPECT_EQ(b.loops[0], 1);
    EXPECT_EQ(b.degree(0), 2);
}

TEST(Ball, PathCentre) {
    const auto g = make_graph(3, {{3, 2}});
    const auto b = extract_ball(g, 2, 1);
    EXPECT_EQ(b.size(), 3);
    EXPECT_EQ(b.edge_count(), 2);
    EXPECT_DOUBLE_EQ(b.marks[0], 2.0 / 3);
}

TEST(Ball, StarLeafSeesHubOnly) {
    const auto g = make_graph(5, {{3, 1}, {4, 1}, {5, 1}});
    const auto b = extract_ball(g, 4, 1);
    EXPECT_EQ(b.size(), 2);
    EXPECT_EQ(b.edge_count(), 1);
}

TEST(Ball, MultiEdgesPreserved) {
    const auto g = make_graph(3, {{3, 1}, {3, 1}});
    const auto b = extract_ball(g, 3, 1);
    EXPECT_EQ(b.edge_count(), 2);
    EXPECT_FALSE(b.is_tree());
}

TEST(Ball, Nested) {
    const auto g = generate(spec_of(Variant::A, "uniform:1,2", 0.0), 500, 3);
    const Adjacency adj(g);
    for (int v = 1; v <= 500; v += 37) {
        const auto small = extract_ball(adj, v, 1), big = extract_ball(adj, v, 2);
        ASSERT_LE(small.size(), big.size());
        std::vector<int> a = small.labels, b = big.labels;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        EXPECT_EQ(small.labels[0], v);
    }
}

TEST(Isomorphism, Reflexive) {
    const auto g = generate(spec_of(Variant::A, "degenerate:2", 0.0), 300, 5);
    const Adjacency adj(g);
    for (int v = 1; v <= 300; v += 23) {
        const auto b = extract_ball(adj, v, 1);
        EXPECT_TRUE(rooted_isomorphic(b, b, false, 0));
        EXPECT_TRUE(rooted_isomorphic(b, b, true, 0));
    }
}

TEST(Isomorphism, StarsMarkedAndUnmarked) {
    const auto g1 = make_graph(4, {{3, 1}, {4, 1}});
    auto a = extract_ball(g1, 1, 1);
    auto b = a;
    EXPECT_TRUE(rooted_isomorphic(a, b, false, 0.1));
    for (auto& m : b.marks) m += 0.3;
    b.marks[0] = a.marks[0];
    EXPECT_TRUE(rooted_isomorphic(a, b, false, 0.01));
    EXPECT_FALSE(rooted_isomorphic(a, b, true, 0.01));
}

TEST(Isomorphism, PathEndVersusCentre) {
    const auto g = make_graph(3, {{3, 2}});
    EXPECT_FALSE(rooted_isomorphic(extract_ball(g, 1, 2), extract_ball(g, 2, 2), false, 0));
    EXPECT_TRUE(rooted_isomorphic(extract_ball(g, 1, 2), extract_ball(g, 3, 2), false, 0));
}

TEST(Isomorphism, CanonicalFormMatchesBruteForce) {
    Rng rng(11);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 2 + rep % 7;
        const auto a = random_tree(n, rng), b = random_tree(n, rng);
        const bool brute = brute_isomorphic(a, b);
        EXPECT_EQ(tree_canonical_form(a) == tree_canonical_form(b), brute);
        EXPECT_EQ(rooted_isomorphic(a, b, false, 0), brute);
        EXPECT_EQ(rooted_isomorphic(a, b, true, 0.0), brute);
    }
}

TEST(Isomorphism, EquivalenceOnRandomBalls) {
    const auto g = generate(spec_of(Variant::A, "uniform:1,2", 0.5), 400, 13);
    const Adjacency adj(g);
    std::vector<RootedGraph> balls;
    for (int v = 200; v <= 400; ++v) {
        auto b = extract_ball(adj, v, 1, 8);
        if (b.size() > 0) balls.push_back(std::move(b));
    }
    Rng rng(2);
    std::uniform_int_distribution<std::size_t> pick(0, balls.size() - 1);
    for (int rep = 0; rep < 500; ++rep) {
        const auto &a = balls[pick(rng)], &b = balls[pick(rng)], &c = balls[pick(rng)];
        const bool ab = rooted_isomorphic(a, b, false, 0), ba = rooted_isomorphic(b, a, false, 0);
        EXPECT_EQ(ab, ba);
        if (ab && rooted_isomorphic(b, c, false, 0)) EXPECT_TRUE(rooted_isomorphic(a, c, false, 0));
        EXPECT_EQ(ab, brute_isomorphic(a, b));
    }
}

TEST(Patterns, SingleVertexFullWindowCountsEveryRoot) {
    for (std::uint64_t seed : {1, 2}) {
        const auto g = generate(spec_of(Variant::D, "uniform:1,3", 0.2), 1000, seed);
        const auto p = TreePattern::from_ages("all", {-1}, {0.5}, 1.0);
        EXPECT_EQ(count_patterns(g, p, 0), 1000);
    }
}

TEST(Patterns, PathStar) {
    const auto g = make_graph(3, {{3, 2}});
    const auto p = TreePattern::from_ages("star", {-1, 0, 0}, {2.0 / 3, 0.5, 0.5}, 0.5);
    EXPECT_EQ(count_patterns(g, p, 1), 1);
    const auto tight = TreePattern::from_ages("star", {-1, 0, 0}, {0.1, 0.5, 0.5}, 0.05);
    EXPECT_EQ(count_patterns(g, tight, 1), 0);
}

TEST(Patterns, MonotoneInWindows) {
    const auto g = generate(spec_of(Variant::D, "degenerate:1", 0.0), 5000, 4);
    std::int64_t prev = -1;
    for (double tol : {0.05, 0.1, 0.2, 0.4, 1.0}) {
        const auto p = TreePattern::from_ages("po", {-1, 0}, {0.6, 0.3}, tol);
        const auto c = count_patterns(g, p, 1);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(Patterns, JsonForms) {
    const auto p = TreePattern::from_ages("x", {-1, 0}, {0.5, 0.2}, 0.1);
    const auto q = TreePattern::from_json(p.to_json());
    EXPECT_EQ(q.lo, p.lo);
    EXPECT_EQ(q.hi, p.hi);
    const auto r = TreePattern::from_json(
        nlohmann::json::parse(R"({"id":"y","parent":[-1,0],"ages":[0.5,0.2],"tol":0.1})"));
    EXPECT_EQ(r.lo, p.lo);
    EXPECT_EQ(p.depth(), 1);
}

TEST(Patterns, SampledTrees) {
    Rng rng(3);
    const auto t = sample_rppt(spec_of(Variant::D, "degenerate:1", 0.0), 1, rng);
    const auto rooted = tree_to_rooted(t, 1);
    std::vector<int> parent(rooted.size(), 0);
    parent[0] = -1;
    const auto p = TreePattern::from_ages("self", parent, std::vector<double>(rooted.size(), 0.5), 1.0);
    EXPECT_TRUE(matches_pattern(t, p, 1));
}

TEST(Disjointness, TinyGraphOverlaps) {
    const auto g = make_graph(4, {{3, 1}, {4, 1}});
    const auto rep = two_ball_disjointness(g, 1, 1, 2000);
    EXPECT_LT(rep.disjoint_fraction, 0.01);
}

TEST(Disjointness, LargeGraphAndIdentity) {
    const auto g = generate(spec_of(Variant::D, "degenerate:1", 0.0), 100000, 6);
    const auto rep = two_ball_disjointness(g, 2, 7, 20000);
    EXPECT_GE(rep.disjoint_fraction, 0.99);
    EXPECT_LE(std::abs(rep.disjoint_fraction - rep.ball_estimate),
              3 * std::hypot(rep.disjoint_se, rep.ball_se) + 1e-12);
}
