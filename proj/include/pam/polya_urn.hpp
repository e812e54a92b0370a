#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/model_params.hpp"
#include "pam/rng.hpp"

namespace pam {

enum class Placement { SL, NSL };
enum class ScheduleKind { Collapsed, ModelD };

/// Beta parameters per urn position, 1-based. beta[1] = 0 encodes psi_1 = 1.
struct BetaSchedule {
    ScheduleKind kind;
    std::vector<double> alpha;
    std::vector<double> beta;
    int size() const { return static_cast<int>(alpha.size()) - 1; }
};

/// Positions 1..m_[n] of the single-edge urn behind the collapsed graph. The
/// NSL urn adds 1 to every beta for k >= 3: the new position's own edge is
/// already attached below it when its weight starts competing.
BetaSchedule collapsed_schedule(const ModelSpec& spec, const std::vector<int>& out_degrees,
                                Placement placement = Placement::SL);
/// One position per vertex, for multi-edge vertices.
BetaSchedule model_d_schedule(const ModelSpec& spec, const std::vector<int>& out_degrees);

std::vector<double> sample_psi(const BetaSchedule& schedule, Rng& rng);
/// psi_k replaced by its mean alpha/(alpha+beta).
std::vector<double> mean_psi(const BetaSchedule& schedule);

struct UrnState {
    std::vector<double> psi;  // 1-based
    std::vector<double> S;    // S[0..N]; S[k] = prod_{a in (k, N]} (1 - psi_a)

    int size() const { return static_cast<int>(psi.size()) - 1; }
    double interval_length(int k) const { return S[k] - S[k - 1]; }
    /// Index u with x in [S_{u-1}, S_u), searched among u <= limit.
    int locate(double x, int limit) const;
};

/// Backward sweep in log space.
UrnState make_urn_state(std::vector<double> psi);

struct CollapseMap {
    std::vector<int> r;  // group sizes, 0-based list
    std::vector<int> group_of;  // 1-based vertex -> group
    std::vector<int> group_start;  // 1-based group -> first vertex

    static CollapseMap from_sizes(std::vector<int> sizes);
    /// (1, 1, m_3, ..., m_n) for an out-degree vector.
    static CollapseMap for_out_degrees(const std::vector<int>& out_degrees);
    int groups() const { return static_cast<int>(r.size()); }
    int vertices() const { return static_cast<int>(group_of.size()) - 1; }
};

EvolvingGraph collapse(const EvolvingGraph& g, const CollapseMap& map);

struct UrnGraph {
    EvolvingGraph graph;
    UrnState state;
};

/// Vertex k >= 3 places each of its m_k edges at U * S_k (SL) or U * S_{k-1} (NSL).
UrnGraph build_pu(const ModelSpec& spec, std::vector<int> out_degrees, std::vector<double> psi,
                  Placement placement, Rng& rng);
/// psi from the model-D schedule.
UrnGraph build_pu(const ModelSpec& spec, std::vector<int> out_degrees, Placement placement, Rng& rng);

struct CpuGraph {
    EvolvingGraph graph;        // collapsed
    EvolvingGraph precollapsed; // single-edge urn graph on m_[n] vertices
    UrnState state;             // of the single-edge urn
    CollapseMap map;
    /// S_{k,j} = S'_{m_[k-1] + j}; S_k = S_{k, m_k}.
    double sub_position(int k, int j) const;
    double position(int k) const;
};

CpuGraph build_cpu(const ModelSpec& spec, std::vector<int> out_degrees, Placement placement,
                   Rng& rng);
CpuGraph build_cpu(const ModelSpec& spec, std::vector<int> out_degrees, std::vector<double> psi,
                   Placement placement, Rng& rng);

/// Graph-level urn generators keyed by name: pu-sl, pu-nsl, cpu-sl, cpu-nsl.
EvolvingGraph generate_urn(const ModelSpec& spec, const std::string& kind, int n,
                           std::uint64_t seed);

struct ConcentrationRow {
    std::uint64_t seed;
    double max_abs;
    double max_rel;  // over k > K
    int argmax_abs;
};

struct ConcentrationReport {
    int n;
    int K;
    double chi;
    std::vector<ConcentrationRow> rows;
    double fraction_within(double omega) const;
};

/// Positions of the urn behind the graph: CPU (collapsed schedule, S at group
/// ends) or PU (model-D schedule).
ConcentrationReport position_concentration_report(const ModelSpec& spec, int n,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  ScheduleKind kind = ScheduleKind::Collapsed,
                                                  int K = 0, bool use_mean_psi = false);

struct BetaGammaRow {
    int k;
    int m_k;
    double fraction_within;  // of quantile points inside the bounds
    int points;
    double mean_k_phi;
};

/// For each k, compares the quantile map of phi_k = sum_j psi_{m_[k-1]+j}
/// against Gamma(m_k + delta, 1) through the linear envelope
/// (1 +- eta) x / (k (2E[M] + delta)), for x <= k^{1 - rho/2}.
std::vector<BetaGammaRow> beta_gamma_coupling_report(const ModelSpec& spec,
                                                     const std::vector<int>& ks, double eta,
                                                     double rho, int samples, int points,
                                                     std::uint64_t seed);

}  // namespace pam
