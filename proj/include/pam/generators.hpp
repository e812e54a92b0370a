#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "pam/fenwick.hpp"
#include "pam/graph.hpp"
#include "pam/model_params.hpp"
#include "pam/rng.hpp"

namespace pam {

/// Exact law of one attachment decision. prob[u] for u in [1, v]; prob[0] unused.
struct AttachmentStep {
    int v = 0;
    int j = 0;
    double normalizer = 0.0;
    std::vector<double> prob;
};

/// Normaliser c_{v,j} of the sequential models (for E and F: the frozen one).
double normalizer(Variant variant, const ModelSpec& spec, std::int64_t m_prefix_prev, int v, int j,
                  int m_v);

/// Sequential growth state. Vertices are inserted strictly in order; within a
/// vertex the edges j = 1..m_v are placed in order.
class GrowthState {
public:
    GrowthState(const ModelSpec& spec, std::vector<int> out_degrees);

    Variant variant() const { return spec_.variant; }
    /// Vertex currently being inserted (n + 1 once complete).
    int current_vertex() const { return v_; }
    /// Out-edges of the current vertex already placed.
    int placed() const { return j_; }
    bool done() const { return v_ > g_.n; }

    /// Law of the next decision of the current vertex. For E it is the frozen
    /// law; for F the frozen law restricted to unchosen targets.
    AttachmentStep law() const;
    /// Place the next edge of the current vertex on `target` without sampling.
    void place(int target);

    int step_model_A(int v, int j, Rng& rng);
    int step_model_B(int v, int j, Rng& rng);
    int step_model_D(int v, int j, Rng& rng);
    std::vector<int> step_model_E(int v, Rng& rng);
    std::vector<int> step_model_F(int v, Rng& rng);

    /// Insert the current vertex according to the spec's variant.
    void step_vertex(Rng& rng);

    const EvolvingGraph& graph() const { return g_; }
    EvolvingGraph take() { return std::move(g_); }

    /// Committed degree of u < current vertex (intra-vertex hits excluded).
    std::int64_t committed_degree(int u) const { return g_.degree[u]; }
    double frozen_weight_total() const { return fen_.prefix(v_ - 1); }
    const DegreeFenwick& fenwick() const { return fen_; }

private:
    void check_position(int v, int j) const;
    int hits_on(int u) const;
    int sample_frozen(Rng& rng) const;
    int sample_sequential(Rng& rng, double self_weight) const;
    void record(int target);
    void finish_vertex();
    std::int64_t m_prefix_prev() const { return m_prefix_[v_ - 1]; }

    ModelSpec spec_;
    EvolvingGraph g_;
    DegreeFenwick fen_;
    std::vector<std::int64_t> m_prefix_;  // m_[v]
    int v_ = 3;
    int j_ = 0;
    int self_ = 0;
    std::vector<std::pair<int, int>> hits_;  // (u < v, count) for the current vertex
    std::vector<int> chosen_;                // F: distinct targets chosen so far
};

EvolvingGraph generate_with_degrees(const ModelSpec& spec, std::vector<int> out_degrees, Rng& rng);
/// Out-degrees from stream "out-degrees", attachments from stream "attach".
EvolvingGraph generate(const ModelSpec& spec, int n, std::uint64_t seed);

}  // namespace pam
