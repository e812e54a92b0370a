#pragma once
#include <json.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/rppt.hpp"

namespace pam {

/// Finite rooted multigraph with a real mark per vertex. Vertex 0 is the root.
/// `nbrs[v]` lists neighbours with multiplicity; self-loops are kept in `loops`.
struct RootedGraph {
    std::vector<std::vector<int>> nbrs;
    std::vector<int> loops;
    std::vector<double> marks;
    std::vector<int> labels;  // original vertex ids (or tree node indices)

    int size() const { return static_cast<int>(nbrs.size()); }
    int degree(int v) const { return static_cast<int>(nbrs[v].size()) + 2 * loops[v]; }
    int edge_count() const;
    bool is_tree() const;
};

/// B_r(v): vertices within graph distance r of v, with every edge among them.
/// Marks are ages v/n. Returns an empty graph if the ball exceeds `cap` vertices.
RootedGraph extract_ball(const Adjacency& adj, int v, int r, int cap = 1 << 30);
RootedGraph extract_ball(const EvolvingGraph& g, int v, int r);

/// Nodes of a sampled tree up to depth r, marked by age.
RootedGraph tree_to_rooted(const MarkedTree& t, int r);

/// Root-preserving isomorphism; in marked mode every vertex mark must move by
/// at most tol. Trees use canonical forms (unmarked) or recursive matching
/// (marked); other graphs use backtracking with degree and mark pruning.
bool rooted_isomorphic(const RootedGraph& a, const RootedGraph& b, bool marked, double tol);

/// AHU canonical string of an unmarked rooted tree.
std::string tree_canonical_form(const RootedGraph& t);

/// Rooted tree with an age window per node.
struct TreePattern {
    std::string id;
    std::vector<int> parent;  // parent[0] = -1
    std::vector<double> lo;
    std::vector<double> hi;

    int size() const { return static_cast<int>(parent.size()); }
    int depth() const;
    /// Windows a +- tol clipped to [0,1].
    static TreePattern from_ages(std::string id, std::vector<int> parent,
                                 const std::vector<double>& ages, double tol);
    nlohmann::json to_json() const;
    static TreePattern from_json(const nlohmann::json& j);
};

/// True iff the rooted graph is a tree isomorphic to the pattern with every
/// mark inside its node's window.
bool matches_pattern(const RootedGraph& ball, const TreePattern& p);
/// Same test on a sampled tree explored to depth r (nodes beyond r ignored).
bool matches_pattern(const MarkedTree& t, const TreePattern& p, int r);

/// Number of roots whose r-ball matches the pattern.
std::int64_t count_patterns(const EvolvingGraph& g, const TreePattern& p, int r);
std::int64_t count_patterns(const Adjacency& adj, const TreePattern& p, int r);

struct DisjointnessReport {
    int reps;
    double disjoint_fraction;  // over independent uniform pairs
    double disjoint_se;
    double ball_estimate;      // 1 - E|B_{2r}(o)| / n
    double ball_se;
};

/// Two estimators of P(B_r(o1) and B_r(o2) are disjoint).
DisjointnessReport two_ball_disjointness(const EvolvingGraph& g, int r, std::uint64_t seed,
                                         int reps);

}  // namespace pam
