#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/model_params.hpp"
#include "pam/neighborhoods.hpp"
#include "pam/rppt.hpp"

namespace pam {

/// P(Y(m, a) = t - m): Gamma(m + delta)-mixed Poisson with mean Gamma lambda(a).
double mixed_poisson_pmf(int m, double a, int t, double chi, double delta);
double mixed_poisson_pmf(int m, double a, int t, const ModelSpec& spec);

/// Limit law of the degree of a uniform vertex (the root).
double root_degree_pmf(int t, const ModelSpec& spec);
/// Limit law of the degree of a uniform older neighbour.
double older_neighbor_pmf(int t, const ModelSpec& spec);
/// Limit law of the degree of a uniform younger neighbour of a vertex that has one.
double younger_neighbor_pmf(int t, const ModelSpec& spec);
/// Same with the root age uniform and no conditioning on existence.
double younger_neighbor_pmf_unconditioned(int t, const ModelSpec& spec);
/// Series form of the unconditioned law, for cross-checks.
double younger_neighbor_pmf_series(int t, const ModelSpec& spec);

enum class DegreeLawKind { Root, Older, Younger };
const char* degree_law_name(DegreeLawKind k);
DegreeLawKind parse_degree_law(const std::string& s);

struct DegreeLaw {
    DegreeLawKind which;
    std::vector<double> pmf;  // pmf[k], k = 0..T
    double tail = 0.0;        // P(D > T)
    double mass() const;
};
/// P(D > T): exact telescoping sums for the root and older laws, 1 minus the
/// computed mass for the younger law.
double degree_law_tail(DegreeLawKind which, const ModelSpec& spec, int T);
DegreeLaw degree_law_table(DegreeLawKind which, const ModelSpec& spec, int T);

/// Age of an O-child of a uniform-age root.
double older_age_density(double a, double chi);
double older_age_cdf(double a, double chi);
/// Age of a Y-child of a uniform-age root, by intensity (no conditioning).
double younger_age_density(double x, double chi);
double younger_age_cdf(double x, double chi);
/// Age of a uniform Y-child of a root that has at least one.
double younger_age_density_conditioned(double x, const ModelSpec& spec);
double younger_age_cdf_conditioned(double x, const ModelSpec& spec);
/// P(root with age a has no Y-child) = E_M[a^{(1-chi)(M+delta)}].
double no_younger_child_prob(double a, const ModelSpec& spec);

struct SlopeFit {
    double slope;
    double intercept;
    double se;
    int points;
};
/// Least squares of log y on log x over points with x in [lo, hi] and y > 0.
SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y, double lo,
                     double hi);
/// Slope of log pmf(k) against log k over k in [lo, hi].
SlopeFit pmf_tail_slope(const std::vector<double>& pmf, int lo, int hi);

/// Rooted tree with one age per node; a child older than its parent is an O-node.
struct AgedTree {
    std::vector<int> parent;  // parent[0] = -1
    std::vector<double> age;
    int size() const { return static_cast<int>(parent.size()); }
    int depth_of(int i) const;
};

/// Density of the RPPT explored to depth r at the aged tree, with respect to
/// Lebesgue measure on the unordered child ages of every node.
double rppt_tree_density(const AgedTree& t, int r, const ModelSpec& spec);

struct McEstimate {
    double value;
    double se;
    int reps;
};
/// Same density with the per-node expectations estimated by sampling (m, Gamma).
McEstimate rppt_tree_density_mc(const AgedTree& t, int r, const ModelSpec& spec, int reps,
                                std::uint64_t seed);

/// Probability that the RPPT explored to depth r matches the pattern, by sampling.
McEstimate rppt_pattern_probability(const ModelSpec& spec, const TreePattern& p, int r, int trees,
                                    std::uint64_t seed);

/// exp(-chi_hat lambda(a)).
double no_further_edge_factor(double a, double chi_hat, const ModelSpec& spec);

/// Exact TV distance between the number of the last vertex's edges that hit a
/// vertex of degree d under the binomial (frozen) law and the sequential law.
double coupling_tv_bound(int d, int m_n, int n, std::int64_t m_prefix_prev,
                         const ModelSpec& spec);
/// m_[n-1] replaced by 2 + (n-3) E[M].
double coupling_tv_bound(int d, int m_n, int n, const ModelSpec& spec);
/// Binomial law Q_k and sequential law T_k, k = 0..m_n.
std::vector<double> coupling_binomial_law(int d, int m_n, int n, std::int64_t m_prefix_prev,
                                          const ModelSpec& spec);
std::vector<double> coupling_sequential_law(int d, int m_n, int n, std::int64_t m_prefix_prev,
                                            const ModelSpec& spec);
/// Envelope 1 ^ m^2 (d + |delta| + 1)^2 / n^2 (diagnostic only).
double coupling_tv_envelope(int d, int m_n, int n, const ModelSpec& spec);

struct CoupledGraphs {
    EvolvingGraph d;      // model D
    EvolvingGraph other;  // model E or F
    std::int64_t edges = 0;
    std::int64_t disagreements = 0;  // coupled edges with different targets
};

/// Maximal coupling, edge by edge, of model D with model E or F (other.variant).
CoupledGraphs couple_models(const ModelSpec& spec, Variant other, int n, std::uint64_t seed);

/// Fraction of vertices whose labelled r-balls differ between the two graphs.
double ball_mismatch_fraction(const EvolvingGraph& g1, const EvolvingGraph& g2, int r);

struct CouplingRow {
    int n;
    int r;
    Variant other;
    double mismatch_mean;
    double mismatch_se;
    double edge_disagreement;
    int seeds;
};
CouplingRow couple_report(const ModelSpec& spec, Variant other, int n, int r,
                          const std::vector<std::uint64_t>& seeds);

/// Empirical degree laws of a finite graph.
struct EmpiricalDegrees {
    std::vector<double> unweighted;  // (1/n) sum 1{d_u = k}
    std::vector<double> weighted;    // (1/n) sum 1{d_u = k} / m_u
};
EmpiricalDegrees empirical_degree_pmf(const EvolvingGraph& g, int kmax);
/// Uniform vertex, uniform one of its out-edges (self-loops skipped).
std::vector<double> empirical_older_neighbor_pmf(const EvolvingGraph& g, int kmax);
/// Uniform vertex among those with a younger neighbour, uniform such edge.
std::vector<double> empirical_younger_neighbor_pmf(const EvolvingGraph& g, int kmax);
/// Empirical survival P(D >= k) for k = 0..kmax.
std::vector<double> survival(const std::vector<double>& pmf);
std::vector<double> degree_survival(const EvolvingGraph& g, int kmax);

/// RPPT Monte Carlo of the root, older and younger degree laws.
struct RpptDegreeLaws {
    std::vector<double> root;
    std::vector<double> older;
    std::vector<double> younger;
    int trees;
    int trees_with_younger;
};
RpptDegreeLaws rppt_degree_laws(const ModelSpec& spec, int trees, int kmax, std::uint64_t seed);

}  // namespace pam
