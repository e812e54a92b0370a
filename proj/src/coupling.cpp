#include <algorithm>
#include <cmath>

#include "pam/analytics.hpp"
#include "pam/errors.hpp"
#include "pam/fenwick.hpp"

namespace pam {

namespace {

/// Vertices below this index use the explicit per-edge laws.
constexpr int kExplicitBelow = 64;

struct CouplingChains {
    const ModelSpec& spec;
    Variant other;
    int n;
    std::vector<int> m;
    std::vector<std::int64_t> deg_d, deg_o;
    DegreeFenwick fen;  // frozen degrees of the D chain
    std::vector<char> in_delta;
    std::vector<int> delta_list;
    std::vector<int> stamp;
    int epoch = 0;
    Rng rng;

    // per-vertex state
    std::vector<std::pair<int, int>> hits_d;  // D targets with multiplicity
    std::vector<int> targets_o;               // other chain targets so far

    CouplingChains(const ModelSpec& s, Variant o, std::vector<int> mm, std::uint64_t seed)
        : spec(s), other(o), n(static_cast<int>(mm.size()) - 1), m(std::move(mm)),
          deg_d(n + 1, 0), deg_o(n + 1, 0), fen(n, s.delta), in_delta(n + 1, 0),
          stamp(n + 1, 0), rng(make_stream(seed, "couple")) {}

    int hits_on(int u) const {
        for (auto [w, c] : hits_d)
            if (w == u) return c;
        return 0;
    }
    bool chosen_o(int u) const {
        return other == Variant::F &&
               std::find(targets_o.begin(), targets_o.end(), u) != targets_o.end();
    }

    double p_d(int u, double alpha) const { return (deg_d[u] + hits_on(u) + spec.delta) * alpha; }
    double p_o(int u, double beta) const {
        if (chosen_o(u)) return 0.0;
        return (deg_o[u] + spec.delta) * beta;
    }

    /// Draw u < v with probability proportional to the frozen D weight, outside
    /// the current exception set.
    int sample_off(int v) {
        const double W = fen.prefix(v - 1);
        for (int tries = 0; tries < 100000000; ++tries) {
            const int u = std::min(fen.find(uniform01(rng) * W), v - 1);
            if (stamp[u] != epoch) return u;
        }
        throw ResourceError("coupling rejection sampler did not terminate");
    }

    /// Pick from explicit weights; `w` is indexed like `cand`.
    int pick(const std::vector<int>& cand, const std::vector<double>& w, double total) {
        double x = uniform01(rng) * total;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (w[i] <= 0.0) continue;
            if (x < w[i]) return cand[i];
            x -= w[i];
        }
        for (std::size_t i = cand.size(); i-- > 0;)
            if (w[i] > 0.0) return cand[i];
        throw ResourceError("empty law in coupling");
    }

    /// Single draw from the D law when the other chain has no matching edge.
    int sample_d_alone(int v, int j) {
        const double W = fen.prefix(v - 1);
        const double extra = j - 1;
        double x = uniform01(rng) * (W + extra);
        if (x < W) return std::min(fen.find(x), v - 1);
        x -= W;
        int k = static_cast<int>(x);
        for (auto [u, c] : hits_d) {
            if (k < c) return u;
            k -= c;
        }
        return hits_d.back().first;
    }

    /// Explicit maximal coupling for small v.
    std::pair<int, int> couple_explicit(int v, int j) {
        std::vector<int> cand(v - 1);
        std::vector<double> p(v - 1), q(v - 1);
        double sp = 0, sq = 0;
        const bool forced = other == Variant::F && m[v] >= v - 1;
        for (int u = 1; u < v; ++u) {
            cand[u - 1] = u;
            p[u - 1] = deg_d[u] + hits_on(u) + spec.delta;
            if (forced)
                q[u - 1] = u == j ? 1.0 : 0.0;
            else
                q[u - 1] = other == Variant::F && chosen_o(u) ? 0.0 : deg_o[u] + spec.delta;
            sp += p[u - 1];
            sq += q[u - 1];
        }
        std::vector<double> lo(v - 1), rd(v - 1), ro(v - 1);
        double overlap = 0, tot_rd = 0, tot_ro = 0;
        for (int i = 0; i < v - 1; ++i) {
            p[i] /= sp;
            q[i] /= sq;
            lo[i] = std::min(p[i], q[i]);
            rd[i] = std::max(p[i] - q[i], 0.0);
            ro[i] = std::max(q[i] - p[i], 0.0);
            overlap += lo[i];
            tot_rd += rd[i];
            tot_ro += ro[i];
        }
        if (uniform01(rng) < overlap) {
            const int u = pick(cand, lo, overlap);
            return {u, u};
        }
        return {pick(cand, rd, tot_rd), pick(cand, ro, tot_ro)};
    }

    std::pair<int, int> couple_edge(int v, int j) {
        if (v <= kExplicitBelow) return couple_explicit(v, j);
        const double W = fen.prefix(v - 1);
        const double alpha = 1.0 / (W + (j - 1));
        double W_chosen = 0.0;
        for (int u : targets_o)
            if (other == Variant::F) W_chosen += deg_o[u] + spec.delta;
        const double beta = 1.0 / (W - W_chosen);
        // exception set
        ++epoch;
        std::vector<int> X;
        auto add = [&](int u) {
            if (stamp[u] == epoch) return;
            stamp[u] = epoch;
            X.push_back(u);
        };
        for (int u : delta_list)
            if (in_delta[u]) add(u);
        for (auto [u, c] : hits_d) add(u);
        if (other == Variant::F)
            for (int u : targets_o) add(u);
        double WX = 0.0;
        std::vector<double> px(X.size()), qx(X.size());
        std::vector<double> lo(X.size()), rd(X.size()), ro(X.size());
        double sum_lo = 0, sum_rd = 0, sum_ro = 0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            const int u = X[i];
            WX += deg_d[u] + spec.delta;
            px[i] = p_d(u, alpha);
            qx[i] = p_o(u, beta);
            lo[i] = std::min(px[i], qx[i]);
            rd[i] = std::max(px[i] - qx[i], 0.0);
            ro[i] = std::max(qx[i] - px[i], 0.0);
            sum_lo += lo[i];
            sum_rd += rd[i];
            sum_ro += ro[i];
        }
        const double Woff = std::max(0.0, W - WX);
        const double off_lo = std::min(alpha, beta) * Woff;
        const double off_rd = std::max(alpha - beta, 0.0) * Woff;
        const double off_ro = std::max(beta - alpha, 0.0) * Woff;
        const double overlap = off_lo + sum_lo;
        double x = uniform01(rng);
        if (x < overlap) {
            const int u = x < off_lo ? sample_off(v) : pick(X, lo, sum_lo);
            return {u, u};
        }
        auto residual = [&](double off, const std::vector<double>& w, double sw) {
            const double y = uniform01(rng) * (off + sw);
            if (y < off) return sample_off(v);
            return pick(X, w, sw);
        };
        const int ud = residual(off_rd, rd, sum_rd);
        const int uo = residual(off_ro, ro, sum_ro);
        return {ud, uo};
    }

    void refresh_delta(int u) {
        const bool diff = deg_d[u] != deg_o[u];
        if (diff && !in_delta[u]) delta_list.push_back(u);
        in_delta[u] = diff;
    }

    void compact_delta() {
        if (delta_list.size() < 64) return;
        std::size_t live = 0;
        for (int u : delta_list) live += in_delta[u];
        if (live * 2 > delta_list.size()) return;
        std::vector<int> keep;
        for (int u : delta_list)
            if (in_delta[u]) keep.push_back(u);
        delta_list.swap(keep);
    }
};

}  // namespace

CoupledGraphs couple_models(const ModelSpec& spec, Variant other, int n, std::uint64_t seed) {
    if (other != Variant::E && other != Variant::F)
        throw ParameterError("coupling partner must be model E or F");
    ModelSpec sd = spec;
    sd.variant = Variant::D;
    sd.validate();
    ModelSpec so = spec;
    so.variant = other;
    Rng mrng = make_stream(seed, "out-degrees");
    auto m = sample_out_degrees(spec.out_degree, n, mrng);
    CoupledGraphs out;
    out.d = make_initial_graph(sd, m);
    out.other = make_initial_graph(so, m);
    CouplingChains c(spec, other, m, seed);
    c.deg_d = out.d.degree;
    c.deg_o = out.other.degree;
    c.fen.activate(1, c.deg_d[1]);
    c.fen.activate(2, c.deg_d[2]);
    for (int v = 3; v <= n; ++v) {
        const int mv = m[v];
        const int need_o = other == Variant::F ? std::min(mv, v - 1) : mv;
        c.hits_d.clear();
        c.targets_o.clear();
        for (int j = 1; j <= mv; ++j) {
            int ud, uo = -1;
            if (j > need_o) {
                ud = c.sample_d_alone(v, j);
            } else {
                std::tie(ud, uo) = c.couple_edge(v, j);
            }
            ++out.edges;
            if (ud != uo) ++out.disagreements;
            auto it = std::find_if(c.hits_d.begin(), c.hits_d.end(),
                                   [&](auto& p) { return p.first == ud; });
            if (it == c.hits_d.end())
                c.hits_d.emplace_back(ud, 1);
            else
                ++it->second;
            out.d.edges.push_back({v, j, ud});
            if (uo > 0) {
                c.targets_o.push_back(uo);
                out.other.edges.push_back({v, j, uo});
            }
        }
        for (auto [u, k] : c.hits_d) {
            c.deg_d[u] += k;
            c.fen.add_degree(u, k);
        }
        for (int u : c.targets_o) c.deg_o[u] += 1;
        c.deg_d[v] = mv;
        c.deg_o[v] = static_cast<std::int64_t>(c.targets_o.size());
        c.fen.activate(v, mv);
        for (auto [u, k] : c.hits_d) c.refresh_delta(u);
        for (int u : c.targets_o) c.refresh_delta(u);
        c.refresh_delta(v);
        c.compact_delta();
    }
    out.d.degree = c.deg_d;
    out.other.degree = c.deg_o;
    return out;
}

double ball_mismatch_fraction(const EvolvingGraph& g1, const EvolvingGraph& g2, int r) {
    if (g1.n != g2.n) throw ParameterError("graphs must share the vertex set");
    const int n = g1.n;
    std::vector<std::vector<int>> t1(n + 1), t2(n + 1);
    for (const auto& e : g1.edges) t1[e.source].push_back(e.target);
    for (const auto& e : g2.edges) t2[e.source].push_back(e.target);
    // edges present in one graph only, as (graph, a, b)
    std::vector<std::pair<int, int>> only1, only2;
    for (int v = 1; v <= n; ++v) {
        if (t1[v] == t2[v]) continue;
        auto a = t1[v], b = t2[v];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<int> d1, d2;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d1));
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(d2));
        for (int u : d1) only1.emplace_back(v, u);
        for (int u : d2) only2.emplace_back(v, u);
    }
    std::vector<char> bad(n + 1, 0);
    std::vector<int> stamp(n + 1, 0), dist(n + 1, 0);
    int epoch = 0;
    auto bfs = [&](const Adjacency& adj, int src, std::vector<int>& reached) {
        ++epoch;
        reached.clear();
        reached.push_back(src);
        stamp[src] = epoch;
        dist[src] = 0;
        for (std::size_t h = 0; h < reached.size(); ++h) {
            const int u = reached[h];
            if (dist[u] == r) continue;
            for (const int* it = adj.begin(u); it != adj.end(u); ++it) {
                if (stamp[*it] == epoch) continue;
                stamp[*it] = epoch;
                dist[*it] = dist[u] + 1;
                reached.push_back(*it);
            }
        }
    };
    std::vector<int> ra, rb;
    std::vector<int> mark(n + 1, 0);
    int mark_epoch = 0;
    auto process = [&](const EvolvingGraph& g, const std::vector<std::pair<int, int>>& diff) {
        if (diff.empty()) return;
        const Adjacency adj(g);
        for (auto [a, b] : diff) {
            bfs(adj, a, ra);
            ++mark_epoch;
            for (int x : ra) mark[x] = mark_epoch;
            if (a == b) {
                for (int x : ra) bad[x] = 1;
                continue;
            }
            bfs(adj, b, rb);
            for (int x : rb)
                if (mark[x] == mark_epoch) bad[x] = 1;
        }
    };
    process(g1, only1);
    process(g2, only2);
    std::int64_t count = 0;
    for (int v = 1; v <= n; ++v) count += bad[v];
    return static_cast<double>(count) / n;
}

CouplingRow couple_report(const ModelSpec& spec, Variant other, int n, int r,
                          const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw ParameterError("need at least one seed");
    double s1 = 0, s2 = 0, dis = 0;
    for (auto seed : seeds) {
        const auto c = couple_models(spec, other, n, seed);
        const double f = ball_mismatch_fraction(c.d, c.other, r);
        s1 += f;
        s2 += f * f;
        dis += c.edges ? double(c.disagreements) / c.edges : 0.0;
    }
    const int k = static_cast<int>(seeds.size());
    const double mean = s1 / k;
    const double se = k > 1 ? std::sqrt(std::max(0.0, s2 / k - mean * mean) / (k - 1)) : 0.0;
    return {n, r, other, mean, se, dis / k, k};
}

}  // namespace pam
