#include "pam/neighborhoods.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "pam/errors.hpp"

namespace pam {

int RootedGraph::edge_count() const {
    std::int64_t s = 0;
    for (int v = 0; v < size(); ++v) s += static_cast<std::int64_t>(nbrs[v].size()) + 2 * loops[v];
    return static_cast<int>(s / 2);
}

bool RootedGraph::is_tree() const {
    if (size() == 0) return false;
    for (int v = 0; v < size(); ++v) {
        if (loops[v] > 0) return false;
        auto s = nbrs[v];
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    }
    return edge_count() == size() - 1;
}

RootedGraph extract_ball(const Adjacency& adj, int v, int r, int cap) {
    if (v < 1 || v > adj.n()) throw ParameterError("root outside [n]");
    if (r < 0) throw ParameterError("radius must be non-negative");
    std::unordered_map<int, int> local;
    std::vector<int> order{v};
    std::vector<int> dist{0};
    local[v] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
        if (dist[head] == r) continue;
        const int u = order[head];
        for (const int* it = adj.begin(u); it != adj.end(u); ++it) {
            if (local.count(*it)) continue;
            if (static_cast<int>(order.size()) >= cap) return {};
            local[*it] = static_cast<int>(order.size());
            order.push_back(*it);
            dist.push_back(dist[head] + 1);
        }
    }
    RootedGraph b;
    const int k = static_cast<int>(order.size());
    b.nbrs.resize(k);
    b.loops.assign(k, 0);
    b.marks.resize(k);
    b.labels = order;
    for (int i = 0; i < k; ++i) {
        const int u = order[i];
        b.marks[i] = static_cast<double>(u) / adj.n();
        b.loops[i] = adj.loops(u);
        for (const int* it = adj.begin(u); it != adj.end(u); ++it) {
            if (*it == u) continue;
            auto f = local.find(*it);
            if (f != local.end()) b.nbrs[i].push_back(f->second);
        }
    }
    return b;
}

RootedGraph extract_ball(const EvolvingGraph& g, int v, int r) {
    return extract_ball(Adjacency(g), v, r);
}

RootedGraph tree_to_rooted(const MarkedTree& t, int r) {
    std::vector<int> local(t.size(), -1);
    RootedGraph b;
    for (int i = 0; i < t.size(); ++i) {
        if (t.nodes[i].label.depth() > r) continue;
        local[i] = b.size();
        b.nbrs.emplace_back();
        b.loops.push_back(0);
        b.marks.push_back(t.nodes[i].age);
        b.labels.push_back(i);
        if (t.nodes[i].parent >= 0) {
            const int p = local[t.nodes[i].parent];
            b.nbrs[p].push_back(local[i]);
            b.nbrs[local[i]].push_back(p);
        }
    }
    return b;
}

namespace {

/// Children lists of a tree rooted at vertex 0.
std::vector<std::vector<int>> rooted_children(const RootedGraph& t) {
    std::vector<std::vector<int>> ch(t.size());
    std::vector<int> parent(t.size(), -2);
    std::vector<int> queue{0};
    parent[0] = -1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const int v = queue[h];
        for (int w : t.nbrs[v]) {
            if (parent[w] != -2) continue;
            parent[w] = v;
            ch[v].push_back(w);
            queue.push_back(w);
        }
    }
    return ch;
}

std::string ahu(const std::vector<std::vector<int>>& ch, int v) {
    std::vector<std::string> parts;
    for (int c : ch[v]) parts.push_back(ahu(ch, c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    return s + ")";
}

/// Perfect matching of two equal-size sides under a compatibility predicate.
bool perfect_matching(int k, const std::function<bool(int, int)>& ok) {
    std::vector<std::vector<char>> adj(k, std::vector<char>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) adj[i][j] = ok(i, j);
    std::vector<int> match_r(k, -1);
    std::function<bool(int, std::vector<char>&)> aug = [&](int i, std::vector<char>& seen) {
        for (int j = 0; j < k; ++j) {
            if (!adj[i][j] || seen[j]) continue;
            seen[j] = 1;
            if (match_r[j] < 0 || aug(match_r[j], seen)) {
                match_r[j] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < k; ++i) {
        std::vector<char> seen(k, 0);
        if (!aug(i, seen)) return false;
    }
    return true;
}

/// Recursive rooted-tree matching; `node_ok(a, b)` checks the marks.
bool match_trees(const std::vector<std::vector<int>>& ca, const std::vector<std::vector<int>>& cb,
                 int a, int b, const std::function<bool(int, int)>& node_ok,
                 std::map<std::pair<int, int>, bool>& memo) {
    auto key = std::make_pair(a, b);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool res = node_ok(a, b) && ca[a].size() == cb[b].size();
    if (res && !ca[a].empty()) {
        const auto& xa = ca[a];
        const auto& xb = cb[b];
        res = perfect_matching(static_cast<int>(xa.size()), [&](int i, int j) {
            return match_trees(ca, cb, xa[i], xb[j], node_ok, memo);
        });
    }
    memo[key] = res;
    return res;
}

int multiplicity(const RootedGraph& g, int u, int w) {
    if (u == w) return g.loops[u];
    return static_cast<int>(std::count(g.nbrs[u].begin(), g.nbrs[u].end(), w));
}

std::vector<int> bfs_dist(const RootedGraph& g) {
    std::vector<int> d(g.size(), -1);
    std::vector<int> q{0};
    d[0] = 0;
    for (std::size_t h = 0; h < q.size(); ++h)
        for (int w : g.nbrs[q[h]])
            if (d[w] < 0) {
                d[w] = d[q[h]] + 1;
                q.push_back(w);
            }
    return d;
}

bool backtrack_isomorphic(const RootedGraph& a, const RootedGraph& b, bool marked, double tol) {
    const int k = a.size();
    const auto da = bfs_dist(a), db = bfs_dist(b);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return da[x] < da[y]; });
    std::vector<int> phi(k, -1);
    std::vector<char> used(k, 0);
    auto compatible = [&](int u, int w) {
        if (a.degree(u) != b.degree(w) || a.loops[u] != b.loops[w] || da[u] != db[w]) return false;
        if (marked && std::abs(a.marks[u] - b.marks[w]) > tol) return false;
        for (int i = 0; i < k; ++i) {
            const int x = order[i];
            if (phi[x] < 0) continue;
            if (multiplicity(a, u, x) != multiplicity(b, w, phi[x])) return false;
        }
        return true;
    };
    std::function<bool(int)> rec = [&](int i) {
        if (i == k) return true;
        const int u = order[i];
        for (int w = 0; w < k; ++w) {
            if (used[w]) continue;
            if (i == 0 && w != 0) continue;
            if (!compatible(u, w)) continue;
            phi[u] = w;
            used[w] = 1;
            if (rec(i + 1)) return true;
            phi[u] = -1;
            used[w] = 0;
        }
        return false;
    };
    return rec(0);
}

}  // namespace

std::string tree_canonical_form(const RootedGraph& t) {
    if (!t.is_tree()) throw ParameterError("canonical form needs a tree");
    return ahu(rooted_children(t), 0);
}

bool rooted_isomorphic(const RootedGraph& a, const RootedGraph& b, bool marked, double tol) {
    if (a.size() != b.size() || a.edge_count() != b.edge_count()) return false;
    if (a.size() == 0) return true;
    const bool ta = a.is_tree(), tb = b.is_tree();
    if (ta != tb) return false;
    if (ta) {
        const auto ca = rooted_children(a), cb = rooted_children(b);
        if (!marked) return ahu(ca, 0) == ahu(cb, 0);
        std::map<std::pair<int, int>, bool> memo;
        return match_trees(ca, cb, 0, 0,
                           [&](int x, int y) { return std::abs(a.marks[x] - b.marks[y]) <= tol; },
                           memo);
    }
    return backtrack_isomorphic(a, b, marked, tol);
}

int TreePattern::depth() const {
    int best = 0;
    for (int i = 0; i < size(); ++i) {
        int d = 0;
        for (int v = i; parent[v] >= 0; v = parent[v]) ++d;
        best = std::max(best, d);
    }
    return best;
}

TreePattern TreePattern::from_ages(std::string id, std::vector<int> parent,
                                   const std::vector<double>& ages, double tol) {
    if (parent.size() != ages.size() || parent.empty() || parent[0] != -1)
        throw ParameterError("pattern needs parent[0] = -1 and one age per node");
    TreePattern p{std::move(id), std::move(parent), {}, {}};
    for (double a : ages) {
        p.lo.push_back(std::max(0.0, a - tol));
        p.hi.push_back(std::min(1.0, a + tol));
    }
    return p;
}

nlohmann::json TreePattern::to_json() const {
    return {{"id", id}, {"parent", parent}, {"lo", lo}, {"hi", hi}};
}

TreePattern TreePattern::from_json(const nlohmann::json& j) {
    TreePattern p;
    p.id = j.value("id", std::string("pattern"));
    p.parent = j.at("parent").get<std::vector<int>>();
    if (j.contains("ages")) {
        const double tol = j.value("tol", 1.0);
        return from_ages(p.id, p.parent, j.at("ages").get<std::vector<double>>(), tol);
    }
    p.lo = j.at("lo").get<std::vector<double>>();
    p.hi = j.at("hi").get<std::vector<double>>();
    if (p.lo.size() != p.parent.size() || p.hi.size() != p.parent.size())
        throw ParameterError("pattern windows must cover every node");
    return p;
}

namespace {

std::vector<std::vector<int>> pattern_children(const TreePattern& p) {
    std::vector<std::vector<int>> ch(p.size());
    for (int i = 1; i < p.size(); ++i) {
        if (p.parent[i] < 0 || p.parent[i] >= i) throw ParameterError("pattern parents must precede children");
        ch[p.parent[i]].push_back(i);
    }
    return ch;
}

}  // namespace

bool matches_pattern(const RootedGraph& ball, const TreePattern& p) {
    if (ball.size() != p.size() || !ball.is_tree()) return false;
    const auto cb = rooted_children(ball);
    const auto cp = pattern_children(p);
    std::map<std::pair<int, int>, bool> memo;
    return match_trees(
        cb, cp, 0, 0,
        [&](int x, int y) { return ball.marks[x] >= p.lo[y] && ball.marks[x] <= p.hi[y]; }, memo);
}

bool matches_pattern(const MarkedTree& t, const TreePattern& p, int r) {
    int count = 0;
    for (const auto& nd : t.nodes) count += nd.label.depth() <= r;
    if (count != p.size()) return false;
    return matches_pattern(tree_to_rooted(t, r), p);
}

std::int64_t count_patterns(const Adjacency& adj, const TreePattern& p, int r) {
    if (p.depth() > r) throw ParameterError("pattern deeper than the radius");
    const auto cp = pattern_children(p);
    const int root_deg = static_cast<int>(cp[0].size());
    std::int64_t count = 0;
    const int n = adj.n();
    for (int v = 1; v <= n; ++v) {
        const double mark = static_cast<double>(v) / n;
        if (mark < p.lo[0] || mark > p.hi[0]) continue;
        if (r > 0 && adj.degree(v) != root_deg) continue;
        const RootedGraph b = extract_ball(adj, v, r, p.size());
        if (b.size() == 0) continue;
        count += matches_pattern(b, p);
    }
    return count;
}

std::int64_t count_patterns(const EvolvingGraph& g, const TreePattern& p, int r) {
    return count_patterns(Adjacency(g), p, r);
}

DisjointnessReport two_ball_disjointness(const EvolvingGraph& g, int r, std::uint64_t seed,
                                         int reps) {
    if (reps < 1) throw ParameterError("need reps >= 1");
    const Adjacency adj(g);
    const int n = adj.n();
    std::vector<int> stamp(n + 1, 0);
    std::vector<int> dist(n + 1, 0);
    int epoch = 0;
    // BFS to radius R; returns the ball size and whether `target` was reached.
    auto bfs = [&](int src, int R, int target, bool stop_at_target) {
        ++epoch;
        std::vector<int> q{src};
        stamp[src] = epoch;
        dist[src] = 0;
        bool hit = src == target;
        for (std::size_t h = 0; h < q.size() && !(hit && stop_at_target); ++h) {
            const int u = q[h];
            if (dist[u] == R) continue;
            for (const int* it = adj.begin(u); it != adj.end(u); ++it) {
                if (stamp[*it] == epoch) continue;
                stamp[*it] = epoch;
                dist[*it] = dist[u] + 1;
                q.push_back(*it);
                if (*it == target) hit = true;
            }
        }
        return std::make_pair(static_cast<std::int64_t>(q.size()), hit);
    };
    Rng rng = make_stream(seed, "disjointness");
    std::uniform_int_distribution<int> pick(1, n);
    double disjoint = 0, s1 = 0, s2 = 0;
    for (int i = 0; i < reps; ++i) {
        const int o1 = pick(rng), o2 = pick(rng);
        disjoint += !bfs(o1, 2 * r, o2, true).second;
        const int o = pick(rng);
        const double frac = static_cast<double>(bfs(o, 2 * r, 0, false).first) / n;
        s1 += frac;
        s2 += frac * frac;
    }
    DisjointnessReport rep;
    rep.reps = reps;
    rep.disjoint_fraction = disjoint / reps;
    rep.disjoint_se = std::sqrt(rep.disjoint_fraction * (1 - rep.disjoint_fraction) / reps);
    const double mean = s1 / reps;
    rep.ball_estimate = 1 - mean;
    rep.ball_se = std::sqrt(std::max(0.0, s2 / reps - mean * mean) / reps);
    return rep;
}

}  // namespace pam
