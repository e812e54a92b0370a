#include "pam/rppt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace pam {

UlamHarrisLabel UlamHarrisLabel::parent() const {
    if (path.empty()) throw DomainError("root has no parent");
    UlamHarrisLabel p{path};
    p.path.pop_back();
    return p;
}

UlamHarrisLabel UlamHarrisLabel::child(int k) const {
    if (k < 1) throw DomainError("child index must be positive");
    UlamHarrisLabel c{path};
    c.path.push_back(k);
    return c;
}

std::string UlamHarrisLabel::to_string() const {
    if (path.empty()) return "root";
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) os << (i ? "." : "") << path[i];
    return os.str();
}

bool UlamHarrisLabel::operator<(const UlamHarrisLabel& o) const {
    if (path.size() != o.path.size()) return path.size() < o.path.size();
    return path < o.path;
}

const char* node_type_name(NodeType t) {
    switch (t) {
    case NodeType::Root: return "root";
    case NodeType::O: return "O";
    case NodeType::Y: return "Y";
    }
    return "?";
}

NodeType parse_node_type(const std::string& s) {
    if (s == "root") return NodeType::Root;
    if (s == "O") return NodeType::O;
    if (s == "Y") return NodeType::Y;
    throw ParameterError("unknown node type: " + s);
}

int MarkedTree::degree(int i) const {
    const auto& nd = nodes[i];
    return nd.m_minus + nd.d_in + (nd.type == NodeType::Root ? 0 : 1);
}

nlohmann::json MarkedTree::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& nd : nodes) {
        arr.push_back({{"label", nd.label.path},
                       {"age", nd.age},
                       {"gamma", nd.gamma},
                       {"type", node_type_name(nd.type)},
                       {"m_minus", nd.m_minus},
                       {"d_in", nd.d_in},
                       {"explored", nd.explored}});
    }
    return {{"depth", depth}, {"nodes", arr}};
}

MarkedTree MarkedTree::from_json(const nlohmann::json& j) {
    MarkedTree t;
    t.depth = j.at("depth").get<int>();
    std::map<std::vector<int>, int> index;
    for (const auto& r : j.at("nodes")) {
        RpptNode nd;
        nd.label.path = r.at("label").get<std::vector<int>>();
        nd.age = r.at("age").get<double>();
        nd.gamma = r.at("gamma").get<double>();
        nd.type = parse_node_type(r.at("type").get<std::string>());
        nd.m_minus = r.at("m_minus").get<int>();
        nd.d_in = r.at("d_in").get<int>();
        nd.explored = r.value("explored", false);
        const int id = t.size();
        if (!nd.label.is_root()) {
            auto it = index.find(nd.label.parent().path);
            if (it == index.end()) throw ParameterError("tree labels are not prefix closed");
            nd.parent = it->second;
            t.nodes[it->second].children.push_back(id);
        }
        index[nd.label.path] = id;
        t.nodes.push_back(std::move(nd));
    }
    if (t.nodes.empty() || !t.nodes.front().label.is_root())
        throw ParameterError("tree must start with the root");
    return t;
}

RpptLaws::RpptLaws(const ModelSpec& spec)
    : chi(derive_constants(spec).chi),
      delta(spec.delta),
      root(spec.out_degree),
      older(size_biased_law(spec.out_degree, spec.delta)),
      younger(size_biased_law(spec.out_degree, 0.0)) {}

std::vector<double> sample_poisson_ages(double gamma, double a, double chi, Rng& rng) {
    if (!(a > 0.0) || a > 1.0) throw DomainError("age must lie in (0,1]");
    if (!(gamma > 0.0)) throw DomainError("strength must be positive");
    const double lo = std::pow(a, 1.0 - chi);
    const double mean = gamma * (1.0 - lo) / lo;
    std::vector<double> ages;
    if (!(mean > 0.0)) return ages;
    std::poisson_distribution<long long> pois(mean);
    const long long count = pois(rng);
    ages.reserve(static_cast<std::size_t>(count));
    const double inv = 1.0 / (1.0 - chi);
    for (long long i = 0; i < count; ++i) {
        const double u = uniform01(rng);
        ages.push_back(std::min(1.0, std::pow(lo + u * (1.0 - lo), inv)));
    }
    std::sort(ages.begin(), ages.end());
    return ages;
}

double sample_older_age(double a, double chi, Rng& rng) {
    return std::pow(uniform_open(rng), 1.0 / chi) * a;
}

MarkedTree sample_rppt(const ModelSpec& spec, int r, Rng& rng, int node_cap) {
    spec.validate();
    return sample_rppt(RpptLaws(spec), r, rng, node_cap);
}

MarkedTree sample_rppt(const RpptLaws& laws, int r, Rng& rng, int node_cap) {
    if (r < 0) throw ParameterError("depth must be non-negative");
    if (node_cap < 1) throw ParameterError("node cap must be positive");
    MarkedTree t;
    t.depth = r;
    RpptNode root;
    root.age = uniform_open(rng);
    root.m_minus = laws.root.sample(rng);
    root.gamma = sample_gamma(root.m_minus + laws.delta, 1.0, rng);
    root.type = NodeType::Root;
    t.nodes.push_back(root);
    for (std::size_t head = 0; head < t.nodes.size(); ++head) {
        if (t.nodes[head].label.depth() >= r) continue;
        const RpptNode cur = t.nodes[head];
        std::vector<double> o_ages(cur.m_minus);
        for (auto& x : o_ages) x = sample_older_age(cur.age, laws.chi, rng);
        const auto y_ages = sample_poisson_ages(cur.gamma, cur.age, laws.chi, rng);
        const std::size_t kids = o_ages.size() + y_ages.size();
        if (t.nodes.size() + kids > static_cast<std::size_t>(node_cap)) {
            throw RpptTruncated("node cap exceeded while exploring " + cur.label.to_string(),
                                std::move(t));
        }
        t.nodes[head].explored = true;
        t.nodes[head].d_in = static_cast<int>(y_ages.size());
        int k = 0;
        auto add = [&](double age, NodeType type) {
            RpptNode c;
            c.label = cur.label.child(++k);
            c.age = age;
            c.type = type;
            c.parent = static_cast<int>(head);
            if (type == NodeType::O) {
                c.m_minus = laws.older.sample(rng);
                c.gamma = sample_gamma(c.m_minus + laws.delta + 1.0, 1.0, rng);
            } else {
                c.m_minus = laws.younger.sample(rng) - 1;
                c.gamma = sample_gamma(c.m_minus + 1.0 + laws.delta, 1.0, rng);
            }
            t.nodes[head].children.push_back(static_cast<int>(t.nodes.size()));
            t.nodes.push_back(std::move(c));
        };
        for (double x : o_ages) add(x, NodeType::O);
        for (double x : y_ages) add(x, NodeType::Y);
    }
    return t;
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(std::ceil(q * v.size()));
    return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

}  // namespace

RegularityReport regularity_report(const ModelSpec& spec, int r, double eps, int samples,
                                   std::uint64_t seed, int node_cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
    if (samples < 1) throw ParameterError("need at least one sample");
    spec.validate();
    const RpptLaws laws(spec);
    std::vector<double> min_age, size, max_gamma;
    int truncated = 0;
    for (int s = 0; s < samples; ++s) {
        Rng rng = make_stream(seed, "regularity", s);
        MarkedTree t;
        try {
            t = sample_rppt(laws, r, rng, node_cap);
        } catch (const RpptTruncated& e) {
            t = e.partial();
            ++truncated;
        }
        double a = 1.0, g = 0.0;
        for (const auto& nd : t.nodes) {
            a = std::min(a, nd.age);
            g = std::max(g, nd.gamma);
        }
        min_age.push_back(a);
        size.push_back(t.size());
        max_gamma.push_back(g);
    }
    return {r, eps, samples, quantile(min_age, eps), quantile(size, 1 - eps),
            quantile(max_gamma, 1 - eps), truncated};
}

}  // namespace pam
