#pragma once
#include <cstdint>
#include <vector>

#include "pam/model_params.hpp"

namespace pam {

/// Directed attachment: the `index`-th out-edge of `source` lands on `target`.
/// Initial-graph edges carry index 0.
struct Edge {
    int source;
    int index;
    int target;
    bool operator==(const Edge&) const = default;
};

/// Multigraph grown in arrival order. All per-vertex arrays are 1-based.
struct EvolvingGraph {
    int n = 0;
    int a1 = 1;
    int a2 = 1;
    std::vector<int> out_degree;          // m_v; [0] unused
    std::vector<Edge> initial_edges;      // edges of G0
    std::vector<Edge> edges;              // attachments, in creation order
    std::vector<std::int64_t> degree;     // total degree; self-loops count 2

    std::int64_t total_degree() const;
    /// Degrees recomputed from the edge lists.
    std::vector<std::int64_t> recompute_degrees() const;
    bool has_self_loops() const;
    bool has_multi_edges() const;
};

EvolvingGraph make_initial_graph(const ModelSpec& spec, std::vector<int> out_degrees);

/// Undirected CSR view. Self-loops are listed once in the neighbour list of
/// their endpoint and counted in `loops`.
class Adjacency {
public:
    explicit Adjacency(const EvolvingGraph& g);

    int n() const { return n_; }
    const int* begin(int v) const { return nbr_.data() + off_[v]; }
    const int* end(int v) const { return nbr_.data() + off_[v + 1]; }
    int size(int v) const { return off_[v + 1] - off_[v]; }
    int loops(int v) const { return loops_[v]; }
    /// Degree with self-loops counted twice.
    int degree(int v) const { return size(v) + loops_[v]; }

private:
    int n_;
    std::vector<int> off_;
    std::vector<int> nbr_;
    std::vector<int> loops_;
};

}  // namespace pam
