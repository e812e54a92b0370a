#include "pam/polya_urn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "pam/errors.hpp"

namespace pam {

namespace {

std::vector<std::int64_t> prefix_sums(const std::vector<int>& m) {
    std::vector<std::int64_t> p(m.size(), 0);
    for (std::size_t v = 1; v < m.size(); ++v) p[v] = p[v - 1] + m[v];
    return p;
}

}  // namespace

BetaSchedule collapsed_schedule(const ModelSpec& spec, const std::vector<int>& m, Placement placement) {
    spec.validate();
    const int n = static_cast<int>(m.size()) - 1;
    const auto mp = prefix_sums(m);
    const double d = spec.delta;
    const double a = spec.a_sum();
    BetaSchedule s{ScheduleKind::Collapsed, std::vector<double>(mp[n] + 1, 0.0),
                   std::vector<double>(mp[n] + 1, 0.0)};
    s.alpha[1] = 1.0;
    s.beta[1] = 0.0;
    if (n >= 2) {
        s.alpha[2] = spec.a2() + d;
        s.beta[2] = spec.a1() + d;
    }
    for (int k = 3; k <= n; ++k)
        for (int l = 1; l <= m[k]; ++l) {
            const auto pos = mp[k - 1] + l;
            s.alpha[pos] = 1.0 + d / m[k];
            s.beta[pos] = a + 2.0 * (mp[k - 1] + l - 3) + (k - 1) * d + (l - 1) * d / m[k];
            if (placement == Placement::NSL) s.beta[pos] += 1.0;
        }
    return s;
}

BetaSchedule model_d_schedule(const ModelSpec& spec, const std::vector<int>& m) {
    spec.validate();
    const int n = static_cast<int>(m.size()) - 1;
    const auto mp = prefix_sums(m);
    const double d = spec.delta;
    const double a = spec.a_sum();
    BetaSchedule s{ScheduleKind::ModelD, std::vector<double>(n + 1, 0.0),
                   std::vector<double>(n + 1, 0.0)};
    s.alpha[1] = 1.0;
    s.beta[1] = 0.0;
    if (n >= 2) {
        s.alpha[2] = spec.a2() + d;
        s.beta[2] = spec.a1() + d;
    }
    for (int v = 3; v <= n; ++v) {
        s.alpha[v] = m[v] + d;
        s.beta[v] = a + 2.0 * (mp[v - 1] - 2) + m[v] + (v - 1) * d;
    }
    return s;
}

std::vector<double> sample_psi(const BetaSchedule& s, Rng& rng) {
    std::vector<double> psi(s.alpha.size(), 0.0);
    for (int k = 1; k <= s.size(); ++k) psi[k] = sample_beta(s.alpha[k], s.beta[k], rng);
    return psi;
}

std::vector<double> mean_psi(const BetaSchedule& s) {
    std::vector<double> psi(s.alpha.size(), 0.0);
    for (int k = 1; k <= s.size(); ++k) psi[k] = s.alpha[k] / (s.alpha[k] + s.beta[k]);
    return psi;
}

int UrnState::locate(double x, int limit) const {
    auto it = std::upper_bound(S.begin(), S.begin() + limit + 1, x);
    int u = static_cast<int>(it - S.begin());
    return std::clamp(u, 1, limit);
}

UrnState make_urn_state(std::vector<double> psi) {
    UrnState st;
    const int N = static_cast<int>(psi.size()) - 1;
    st.psi = std::move(psi);
    st.S.assign(N + 1, 0.0);
    double logS = 0.0;
    st.S[N] = 1.0;
    for (int k = N; k >= 1; --k) {
        logS += std::log1p(-st.psi[k]);
        st.S[k - 1] = std::exp(logS);
    }
    // make the sequence exactly monotone against rounding
    for (int k = 1; k <= N; ++k) st.S[k] = std::max(st.S[k], st.S[k - 1]);
    return st;
}

CollapseMap CollapseMap::from_sizes(std::vector<int> sizes) {
    CollapseMap c;
    c.r = std::move(sizes);
    int total = 0;
    for (int x : c.r) {
        if (x < 1) throw ParameterError("collapse group sizes must be positive");
        total += x;
    }
    c.group_of.assign(total + 1, 0);
    c.group_start.assign(c.r.size() + 1, 0);
    int v = 1;
    for (std::size_t g = 0; g < c.r.size(); ++g) {
        c.group_start[g + 1] = v;
        for (int i = 0; i < c.r[g]; ++i) c.group_of[v++] = static_cast<int>(g) + 1;
    }
    return c;
}

CollapseMap CollapseMap::for_out_degrees(const std::vector<int>& m) {
    std::vector<int> sizes(m.begin() + 1, m.end());
    return from_sizes(sizes);
}

EvolvingGraph collapse(const EvolvingGraph& g, const CollapseMap& map) {
    if (map.vertices() < g.n) throw ParameterError("collapse map shorter than vertex count");
    if (map.vertices() > g.n) throw ParameterError("collapse map longer than vertex count");
    EvolvingGraph h;
    h.n = map.groups();
    h.a1 = g.a1;
    h.a2 = g.a2;
    h.out_degree.assign(h.n + 1, 0);
    h.degree.assign(h.n + 1, 0);
    for (int v = 1; v <= g.n; ++v) {
        h.out_degree[map.group_of[v]] += g.out_degree[v];
        h.degree[map.group_of[v]] += g.degree[v];
    }
    std::vector<int> counter(h.n + 1, 0);
    for (const auto& e : g.initial_edges)
        h.initial_edges.push_back({map.group_of[e.source], 0, map.group_of[e.target]});
    h.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        int s = map.group_of[e.source];
        h.edges.push_back({s, ++counter[s], map.group_of[e.target]});
    }
    return h;
}

UrnGraph build_pu(const ModelSpec& spec, std::vector<int> out_degrees, std::vector<double> psi,
                  Placement placement, Rng& rng) {
    EvolvingGraph g = make_initial_graph(spec, std::move(out_degrees));
    if (static_cast<int>(psi.size()) != g.n + 1) throw ParameterError("psi length must equal n");
    UrnState st = make_urn_state(std::move(psi));
    std::size_t total = 0;
    for (int k = 3; k <= g.n; ++k) total += g.out_degree[k];
    g.edges.reserve(total);
    for (int k = 3; k <= g.n; ++k) {
        const int limit = placement == Placement::SL ? k : k - 1;
        const double base = st.S[limit];
        for (int j = 1; j <= g.out_degree[k]; ++j) {
            int u = st.locate(uniform01(rng) * base, limit);
            g.edges.push_back({k, j, u});
            g.degree[k] += 1;
            g.degree[u] += 1;
        }
    }
    return {std::move(g), std::move(st)};
}

UrnGraph build_pu(const ModelSpec& spec, std::vector<int> out_degrees, Placement placement, Rng& rng) {
    auto psi = sample_psi(model_d_schedule(spec, out_degrees), rng);
    return build_pu(spec, std::move(out_degrees), std::move(psi), placement, rng);
}

double CpuGraph::sub_position(int k, int j) const { return state.S[map.group_start[k] + j - 1]; }

double CpuGraph::position(int k) const { return state.S[map.group_start[k] + map.r[k - 1] - 1]; }

CpuGraph build_cpu(const ModelSpec& spec, std::vector<int> out_degrees, std::vector<double> psi,
                   Placement placement, Rng& rng) {
    CollapseMap map = CollapseMap::for_out_degrees(out_degrees);
    std::vector<int> ones(map.vertices() + 1, 1);
    ones[0] = 0;
    UrnGraph pu = build_pu(spec, std::move(ones), std::move(psi), placement, rng);
    CpuGraph c;
    c.graph = collapse(pu.graph, map);
    c.graph.out_degree = out_degrees;
    c.precollapsed = std::move(pu.graph);
    c.state = std::move(pu.state);
    c.map = std::move(map);
    return c;
}

CpuGraph build_cpu(const ModelSpec& spec, std::vector<int> out_degrees, Placement placement,
                   Rng& rng) {
    auto psi = sample_psi(collapsed_schedule(spec, out_degrees, placement), rng);
    return build_cpu(spec, std::move(out_degrees), std::move(psi), placement, rng);
}

EvolvingGraph generate_urn(const ModelSpec& spec, const std::string& kind, int n,
                           std::uint64_t seed) {
    spec.validate();
    Rng mrng = make_stream(seed, "out-degrees");
    auto m = sample_out_degrees(spec.out_degree, n, mrng);
    Rng prng = make_stream(seed, "psi");
    Rng arng = make_stream(seed, "attach");
    if (kind == "pu-sl" || kind == "pu-nsl") {
        auto psi = sample_psi(model_d_schedule(spec, m), prng);
        return build_pu(spec, m, std::move(psi), kind == "pu-sl" ? Placement::SL : Placement::NSL,
                        arng)
            .graph;
    }
    if (kind == "cpu-sl" || kind == "cpu-nsl") {
        const Placement pl = kind == "cpu-sl" ? Placement::SL : Placement::NSL;
        auto psi = sample_psi(collapsed_schedule(spec, m, pl), prng);
        return build_cpu(spec, m, std::move(psi), pl, arng).graph;
    }
    throw ParameterError("unknown urn generator: " + kind);
}

double ConcentrationReport::fraction_within(double omega) const {
    if (rows.empty()) return 0.0;
    int ok = 0;
    for (const auto& r : rows) ok += r.max_abs <= omega;
    return static_cast<double>(ok) / rows.size();
}

ConcentrationReport position_concentration_report(const ModelSpec& spec, int n,
                                                  const std::vector<std::uint64_t>& seeds,
                                                  ScheduleKind kind, int K, bool use_mean_psi) {
    const auto dc = derive_constants(spec);
    ConcentrationReport rep;
    rep.n = n;
    rep.K = K > 0 ? K : static_cast<int>(std::ceil(std::sqrt(double(n))));
    rep.chi = dc.chi;
    for (auto seed : seeds) {
        Rng mrng = make_stream(seed, "out-degrees");
        auto m = sample_out_degrees(spec.out_degree, n, mrng);
        Rng prng = make_stream(seed, "psi");
        BetaSchedule sch = kind == ScheduleKind::Collapsed ? collapsed_schedule(spec, m)
                                                            : model_d_schedule(spec, m);
        auto psi = use_mean_psi ? mean_psi(sch) : sample_psi(sch, prng);
        UrnState st = make_urn_state(std::move(psi));
        ConcentrationRow row{seed, 0.0, 0.0, 0};
        std::int64_t pos = 0;
        for (int k = 1; k <= n; ++k) {
            pos += m[k];
            const double S = kind == ScheduleKind::Collapsed ? st.S[pos] : st.S[k];
            const double target = std::pow(double(k) / n, dc.chi);
            const double dev = std::abs(S - target);
            if (dev > row.max_abs) {
                row.max_abs = dev;
                row.argmax_abs = k;
            }
            if (k > rep.K) row.max_rel = std::max(row.max_rel, dev / target);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<BetaGammaRow> beta_gamma_coupling_report(const ModelSpec& spec,
                                                     const std::vector<int>& ks, double eta,
                                                     double rho, int samples, int points,
                                                     std::uint64_t seed) {
    spec.validate();
    const int kmax = *std::max_element(ks.begin(), ks.end());
    Rng mrng = make_stream(seed, "out-degrees");
    auto m = sample_out_degrees(spec.out_degree, kmax, mrng);
    const BetaSchedule sch = collapsed_schedule(spec, m);
    const auto mp = prefix_sums(m);
    const double scale = 2 * spec.out_degree.mean() + spec.delta;
    Rng rng = make_stream(seed, "beta-gamma");
    std::vector<BetaGammaRow> out;
    for (int k : ks) {
        if (k < 3) throw ParameterError("beta-gamma report needs k >= 3");
        BetaGammaRow row{k, m[k], 0.0, 0, 0.0};
        const double shape = m[k] + spec.delta;
        std::vector<double> phi;
        double mean = 0;
        for (int l = 1; l <= m[k]; ++l) {
            auto p = mp[k - 1] + l;
            mean += sch.alpha[p] / (sch.alpha[p] + sch.beta[p]);
        }
        row.mean_k_phi = k * mean;
        if (m[k] > 1) {
            phi.resize(samples);
            for (auto& x : phi) {
                x = 0;
                for (int l = 1; l <= m[k]; ++l) {
                    auto p = mp[k - 1] + l;
                    x += sample_beta(sch.alpha[p], sch.beta[p], rng);
                }
            }
            std::sort(phi.begin(), phi.end());
        }
        const double xmax = std::pow(double(k), 1 - rho / 2);
        int inside = 0, used = 0;
        for (int i = 0; i < points; ++i) {
            const double p = (i + 0.5) / points;
            const double x = boost::math::gamma_p_inv(shape, p);
            if (x > xmax) continue;
            double h;
            if (m[k] == 1) {
                auto pos = mp[k - 1] + 1;
                h = boost::math::ibeta_inv(sch.alpha[pos], sch.beta[pos], p);
            } else {
                auto idx = static_cast<std::size_t>(std::min<double>(p * samples, samples - 1));
                h = phi[idx];
            }
            ++used;
            const double lin = x / (k * scale);
            inside += (h >= (1 - eta) * lin && h <= (1 + eta) * lin);
        }
        row.points = used;
        row.fraction_within = used ? double(inside) / used : 0.0;
        out.push_back(row);
    }
    return out;
}

}  // namespace pam
