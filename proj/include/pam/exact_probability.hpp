#pragma once
#include <map>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/model_params.hpp"
#include "pam/polya_urn.hpp"

namespace pam {

/// Largest m_[n] accepted by the enumerators.
inline constexpr int kEnumerationBound = 12;

/// (x)_k = x (x-1) ... (x-k+1), by direct product.
double falling_factorial(double x, int k);
/// log (x)_k through log-Gamma; needs x - k + 1 > 0.
double log_falling_factorial(double x, int k);
/// Rising factorial x (x+1) ... (x+k-1) in log space.
double log_rising_factorial(double x, int k);

/// E[psi^a (1-psi)^b] for psi ~ Beta(alpha, beta); beta == 0 means psi = 1.
double beta_moment(double alpha, double beta, int a, int b);

struct UrnExponents {
    std::vector<int> p;  // 1-based
    std::vector<int> q;
    bool feasible = true;
};

/// p_s counts attachment edges landing on s; q_s counts edges k -> u with
/// s in (u, k] (SL) or s in (u, k-1] (NSL).
UrnExponents urn_exponents(const EvolvingGraph& h, Placement placement);

/// Degree-sum expressions for q_s: single-edge SL graphs use
/// d_[s-1] - a_[2] - 2(s-3); multi-edge NSL graphs use
/// d_[s-1] - a_[2] - 2(m_[s-1]-2) - m_s. Valid for s >= 3.
std::vector<int> q_from_degrees(const EvolvingGraph& h, Placement placement);

/// Product of Beta moments over the urn positions.
double prob_pu_closed(const EvolvingGraph& h, const BetaSchedule& schedule, Placement placement);

/// Pre-collapsed single-edge graph H on m_[n] vertices; `m` is the collapsed
/// out-degree vector that fixes the groups.
double prob_model_A_closed(const EvolvingGraph& h, const ModelSpec& spec, const std::vector<int>& m);
double prob_model_B_closed(const EvolvingGraph& h, const ModelSpec& spec, const std::vector<int>& m);
/// Multi-edge graph G on n vertices.
double prob_model_D_closed(const EvolvingGraph& g, const ModelSpec& spec);

/// Product of the exact step probabilities of spec.variant along the edge
/// sequence of g (edges in creation order).
double sequential_probability(const EvolvingGraph& g, const ModelSpec& spec);

/// All realisable pre-images of a collapsed graph under its (1,1,m_3,...) map.
std::vector<EvolvingGraph> preimages(const EvolvingGraph& g, Placement placement);

struct EnumeratedGraph {
    std::vector<int> m;        // 1-based out-degrees
    std::vector<int> targets;  // in creation order
    double probability = 0.0;  // sequential probability, times P(m) when weighted
    double m_weight = 1.0;     // P(m)
};

/// Exhaustive product tree over step choices for a fixed out-degree vector.
std::vector<EnumeratedGraph> enumerate_feasible(const ModelSpec& spec, const std::vector<int>& m);
/// Same, summed over all out-degree vectors with m_1 = m_2 = 1, weighted by
/// their probability.
std::vector<EnumeratedGraph> enumerate_feasible(const ModelSpec& spec, int n);

/// Out-degree vectors with positive probability, with their weights.
std::vector<std::pair<std::vector<int>, double>> out_degree_vectors(const OutDegreeLaw& law, int n);

EvolvingGraph to_graph(const EnumeratedGraph& e, const ModelSpec& spec);
/// Fully labelled key: targets in creation order.
std::string labelled_key(const EvolvingGraph& g);
/// Class key: out-degrees plus the sorted target multiset of each vertex.
std::string class_key(const EvolvingGraph& g);

struct EquivalenceRow {
    std::string id;
    double sequential = 0.0;
    double urn = 0.0;
    double closed = 0.0;
};

struct EquivalenceReport {
    Variant variant;
    int n;
    std::vector<EquivalenceRow> rows;  // one per class
    double max_abs_diff = 0.0;          // over classes, urn and closed vs sequential
    double max_labelled_diff = 0.0;     // same at the labelled level
    double total_sequential = 0.0;
    double total_urn = 0.0;
    double total_closed = 0.0;
    bool pass(double tol) const;
};

/// Model A vs CPU(SL), B vs CPU(NSL), D vs PU(NSL). `urn_delta` replaces delta
/// on the urn side only (sensitivity checks); NaN keeps it.
EquivalenceReport verify_equivalence(const ModelSpec& spec, int n, double urn_delta);
EquivalenceReport verify_equivalence(const ModelSpec& spec, int n);

}  // namespace pam
