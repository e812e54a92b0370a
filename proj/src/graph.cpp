#include "pam/graph.hpp"

#include <algorithm>
#include <set>

#include "pam/errors.hpp"

namespace pam {

std::int64_t EvolvingGraph::total_degree() const {
    std::int64_t s = 0;
    for (int v = 1; v <= n; ++v) s += degree[v];
    return s;
}

std::vector<std::int64_t> EvolvingGraph::recompute_degrees() const {
    std::vector<std::int64_t> d(n + 1, 0);
    for (const auto* list : {&initial_edges, &edges})
        for (const auto& e : *list) {
            d[e.source] += 1;
            d[e.target] += 1;
        }
    return d;
}

bool EvolvingGraph::has_self_loops() const {
    for (const auto* list : {&initial_edges, &edges})
        for (const auto& e : *list)
            if (e.source == e.target) return true;
    return false;
}

bool EvolvingGraph::has_multi_edges() const {
    std::set<std::pair<int, int>> seen;
    for (const auto* list : {&initial_edges, &edges})
        for (const auto& e : *list) {
            auto key = std::minmax(e.source, e.target);
            if (!seen.insert(key).second) return true;
        }
    return false;
}

EvolvingGraph make_initial_graph(const ModelSpec& spec, std::vector<int> out_degrees) {
    spec.validate();
    EvolvingGraph g;
    g.n = static_cast<int>(out_degrees.size()) - 1;
    if (g.n < 2) throw ParameterError("need n >= 2");
    if (out_degrees[1] != 1 || out_degrees[2] != 1)
        throw ParameterError("m_1 and m_2 must equal 1");
    for (int v = 3; v <= g.n; ++v)
        if (out_degrees[v] < 1) throw ParameterError("out-degrees must be positive");
    g.a1 = spec.a1();
    g.a2 = spec.a2();
    g.out_degree = std::move(out_degrees);
    g.degree.assign(g.n + 1, 0);
    for (auto [x, y] : spec.initial_edges) {
        int s = std::max(x, y), t = std::min(x, y);
        g.initial_edges.push_back({s, 0, t});
        g.degree[s] += 1;
        g.degree[t] += 1;
    }
    return g;
}

Adjacency::Adjacency(const EvolvingGraph& g) : n_(g.n), off_(g.n + 2, 0), loops_(g.n + 1, 0) {
    auto count = [&](const Edge& e) {
        if (e.source == e.target) {
            off_[e.source + 1] += 1;
            loops_[e.source] += 1;
        } else {
            off_[e.source + 1] += 1;
            off_[e.target + 1] += 1;
        }
    };
    for (const auto& e : g.initial_edges) count(e);
    for (const auto& e : g.edges) count(e);
    for (int v = 1; v <= n_ + 1; ++v) off_[v] += off_[v - 1];
    nbr_.resize(off_[n_ + 1]);
    std::vector<int> fill(off_.begin(), off_.end() - 1);
    auto place = [&](const Edge& e) {
        if (e.source == e.target) {
            nbr_[fill[e.source]++] = e.source;
        } else {
            nbr_[fill[e.source]++] = e.target;
            nbr_[fill[e.target]++] = e.source;
        }
    };
    for (const auto& e : g.initial_edges) place(e);
    for (const auto& e : g.edges) place(e);
    for (int v = 1; v <= n_; ++v) std::sort(nbr_.begin() + off_[v], nbr_.begin() + off_[v + 1]);
}

}  // namespace pam
