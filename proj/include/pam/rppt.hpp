#pragma once
#include <json.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "pam/errors.hpp"
#include "pam/model_params.hpp"
#include "pam/rng.hpp"

namespace pam {

/// Finite word over positive integers; the empty word is the root.
struct UlamHarrisLabel {
    std::vector<int> path;

    int depth() const { return static_cast<int>(path.size()); }
    bool is_root() const { return path.empty(); }
    UlamHarrisLabel parent() const;
    UlamHarrisLabel child(int k) const;
    std::string to_string() const;
    /// Length first, then componentwise.
    bool operator<(const UlamHarrisLabel& o) const;
    bool operator==(const UlamHarrisLabel& o) const = default;
};

enum class NodeType { Root, O, Y };
const char* node_type_name(NodeType t);
NodeType parse_node_type(const std::string& s);

struct RpptNode {
    UlamHarrisLabel label;
    double age = 0.0;
    double gamma = 0.0;
    NodeType type = NodeType::Root;
    int m_minus = 0;  // number of O-children
    int d_in = 0;     // number of Y-children (0 when not explored)
    int parent = -1;  // index into MarkedTree::nodes
    bool explored = false;
    std::vector<int> children;  // O-children first, then Y-children by age
};

/// Nodes in breadth-first (Ulam-Harris) order; nodes[0] is the root. Nodes at
/// depth < depth carry their children; nodes at the last level do not.
struct MarkedTree {
    int depth = 0;
    std::vector<RpptNode> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
    const RpptNode& root() const { return nodes.front(); }
    /// Degree of an explored node: O-children, Y-children, plus the parent edge.
    int degree(int i) const;
    nlohmann::json to_json() const;
    static MarkedTree from_json(const nlohmann::json& j);
};

class RpptTruncated : public ResourceError {
public:
    RpptTruncated(const std::string& what, MarkedTree partial)
        : ResourceError(what), partial_(std::move(partial)) {}
    const MarkedTree& partial() const { return partial_; }

private:
    MarkedTree partial_;
};

/// Laws used by the exploration, precomputed once per spec.
struct RpptLaws {
    double chi;
    double delta;
    OutDegreeLaw root;       // M
    OutDegreeLaw older;      // M^{(delta)}
    OutDegreeLaw younger;    // M^{(0)}, the Y-node draws m_minus = M^{(0)} - 1
    explicit RpptLaws(const ModelSpec& spec);
};

/// Breadth-first exploration to depth r.
MarkedTree sample_rppt(const ModelSpec& spec, int r, Rng& rng, int node_cap = 1000000);
MarkedTree sample_rppt(const RpptLaws& laws, int r, Rng& rng, int node_cap = 1000000);

/// Points of the Poisson process with intensity (1-chi) gamma x^{-chi} / a^{1-chi}
/// on [a, 1], sorted.
std::vector<double> sample_poisson_ages(double gamma, double a, double chi, Rng& rng);

/// Age of an O-child of a node with age a.
double sample_older_age(double a, double chi, Rng& rng);

struct RegularityReport {
    int r;
    double eps;
    int samples;
    double eta;  // eps-quantile of the minimal age
    double C;    // (1-eps)-quantile of the tree size
    double K;    // (1-eps)-quantile of the maximal strength
    int truncated;
};

RegularityReport regularity_report(const ModelSpec& spec, int r, double eps, int samples,
                                   std::uint64_t seed, int node_cap = 100000);

}  // namespace pam
