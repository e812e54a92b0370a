#include "pam/exact_probability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/generators.hpp"

namespace pam {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::int64_t> prefix_sums(const std::vector<int>& m) {
    std::vector<std::int64_t> p(m.size(), 0);
    for (std::size_t v = 1; v < m.size(); ++v) p[v] = p[v - 1] + m[v];
    return p;
}

/// log prod_{i=lo}^{hi-1} (i + shift)
double log_shifted_product(int lo, std::int64_t hi, double shift) {
    double s = 0;
    for (std::int64_t i = lo; i < hi; ++i) s += std::log(i + shift);
    return s;
}

}  // namespace

double falling_factorial(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (x - i);
    return r;
}

double log_falling_factorial(double x, int k) {
    return std::lgamma(x + 1) - std::lgamma(x - k + 1);
}

double log_rising_factorial(double x, int k) {
    if (k == 0) return 0.0;
    if (k < 64) {
        double s = 0;
        for (int i = 0; i < k; ++i) s += std::log(x + i);
        return s;
    }
    return std::lgamma(x + k) - std::lgamma(x);
}

double beta_moment(double alpha, double beta, int a, int b) {
    if (beta == 0.0) return b == 0 ? 1.0 : 0.0;
    return std::exp(log_rising_factorial(alpha, a) + log_rising_factorial(beta, b) -
                    log_rising_factorial(alpha + beta, a + b));
}

UrnExponents urn_exponents(const EvolvingGraph& h, Placement placement) {
    UrnExponents ex;
    ex.p.assign(h.n + 2, 0);
    ex.q.assign(h.n + 2, 0);
    std::vector<int> diff(h.n + 3, 0);
    for (const auto& e : h.edges) {
        const int k = e.source, u = e.target;
        const int top = placement == Placement::SL ? k : k - 1;
        if (u > top || u < 1) {
            ex.feasible = false;
            continue;
        }
        ex.p[u] += 1;
        // s in (u, top]
        diff[u + 1] += 1;
        diff[top + 1] -= 1;
    }
    int run = 0;
    for (int s = 1; s <= h.n; ++s) {
        run += diff[s];
        ex.q[s] = run;
    }
    ex.p.resize(h.n + 1);
    ex.q.resize(h.n + 1);
    return ex;
}

std::vector<int> q_from_degrees(const EvolvingGraph& h, Placement placement) {
    std::vector<int> q(h.n + 1, 0);
    const auto mp = prefix_sums(h.out_degree);
    std::int64_t dsum = 0;
    const int a = h.a1 + h.a2;
    for (int s = 1; s <= h.n; ++s) {
        if (s >= 3) {
            if (placement == Placement::SL)
                q[s] = static_cast<int>(dsum - a - 2 * (s - 3));
            else
                q[s] = static_cast<int>(dsum - a - 2 * (mp[s - 1] - 2) - h.out_degree[s]);
        }
        dsum += h.degree[s];
    }
    return q;
}

double prob_pu_closed(const EvolvingGraph& h, const BetaSchedule& schedule, Placement placement) {
    if (schedule.size() != h.n) throw ParameterError("schedule length must equal vertex count");
    const auto ex = urn_exponents(h, placement);
    if (!ex.feasible) return 0.0;
    double logp = 0.0;
    for (int s = 1; s <= h.n; ++s) {
        const double b = beta_moment(schedule.alpha[s], schedule.beta[s], ex.p[s], ex.q[s]);
        if (b == 0.0) return 0.0;
        logp += std::log(b);
    }
    return std::exp(logp);
}

namespace {

/// Shared numerator of the pre-collapsed models A and B.
double precollapsed_closed(const EvolvingGraph& h, const ModelSpec& spec, const std::vector<int>& m,
                           bool self_loops) {
    const CollapseMap map = CollapseMap::for_out_degrees(m);
    if (map.vertices() != h.n) throw ParameterError("pre-collapsed graph size must equal m_[n]");
    const auto mp = prefix_sums(m);
    const double d = spec.delta;
    const double a = spec.a_sum();
    for (const auto& e : h.edges) {
        if (self_loops ? e.target > e.source : e.target >= e.source) return 0.0;
    }
    double logp = 0.0;
    for (int s = 1; s <= h.n; ++s) {
        const int k = map.group_of[s];
        const int base = s == 1 ? h.a1 : (s == 2 ? h.a2 : 1);
        logp += log_shifted_product(base, h.degree[s], d / m[k]);
    }
    for (int s = 3; s <= h.n; ++s) {
        const int k = map.group_of[s];
        const int j = s - map.group_start[k] + 1;
        double c;
        if (self_loops)
            c = a + 2.0 * (mp[k - 1] + j - 2) - 1 + (k - 1) * d + j * d / m[k];
        else
            c = a + 2.0 * (mp[k - 1] + j - 3) + (k - 1) * d + (j - 1) * d / m[k];
        logp -= std::log(c);
    }
    return std::exp(logp);
}

}  // namespace

double prob_model_A_closed(const EvolvingGraph& h, const ModelSpec& spec, const std::vector<int>& m) {
    return precollapsed_closed(h, spec, m, true);
}

double prob_model_B_closed(const EvolvingGraph& h, const ModelSpec& spec, const std::vector<int>& m) {
    return precollapsed_closed(h, spec, m, false);
}

double prob_model_D_closed(const EvolvingGraph& g, const ModelSpec& spec) {
    for (const auto& e : g.edges)
        if (e.target >= e.source) return 0.0;
    const auto mp = prefix_sums(g.out_degree);
    const double d = spec.delta;
    const double a = spec.a_sum();
    double logp = 0.0;
    for (int u = 1; u <= g.n; ++u) {
        const int f = u == 1 ? g.a1 : (u == 2 ? g.a2 : g.out_degree[u]);
        logp += log_shifted_product(f, g.degree[u], d);
    }
    for (int v = 3; v <= g.n; ++v)
        for (int j = 1; j <= g.out_degree[v]; ++j)
            logp -= std::log(a + 2.0 * (mp[v - 1] - 2) + (j - 1) + (v - 1) * d);
    return std::exp(logp);
}

double sequential_probability(const EvolvingGraph& g, const ModelSpec& spec) {
    GrowthState st(spec, g.out_degree);
    double logp = 0.0;
    for (const auto& e : g.edges) {
        if (st.done() || e.source != st.current_vertex()) return 0.0;
        const auto law = st.law();
        if (e.target < 1 || e.target > e.source) return 0.0;
        const double p = law.prob[e.target];
        if (!(p > 0.0)) return 0.0;
        logp += std::log(p);
        st.place(e.target);
    }
    if (!st.done()) return 0.0;
    return std::exp(logp);
}

std::vector<EvolvingGraph> preimages(const EvolvingGraph& g, Placement placement) {
    const CollapseMap map = CollapseMap::for_out_degrees(g.out_degree);
    const int N = map.vertices();
    EvolvingGraph base;
    base.n = N;
    base.a1 = g.a1;
    base.a2 = g.a2;
    base.out_degree.assign(N + 1, 1);
    base.out_degree[0] = 0;
    base.initial_edges = g.initial_edges;
    base.degree.assign(N + 1, 0);
    for (const auto& e : base.initial_edges) {
        base.degree[e.source] += 1;
        base.degree[e.target] += 1;
    }
    std::vector<std::vector<int>> choices;
    std::vector<int> sources;
    for (const auto& e : g.edges) {
        const int s = map.group_start[e.source] + e.index - 1;
        const int lo = map.group_start[e.target];
        const int hi = lo + map.r[e.target - 1] - 1;
        const int top = placement == Placement::SL ? s : s - 1;
        std::vector<int> c;
        for (int t = lo; t <= std::min(hi, top); ++t) c.push_back(t);
        if (c.empty()) return {};
        choices.push_back(std::move(c));
        sources.push_back(s);
    }
    std::vector<EvolvingGraph> out;
    std::vector<int> pick(choices.size(), 0);
    while (true) {
        EvolvingGraph h = base;
        for (std::size_t i = 0; i < choices.size(); ++i) {
            const int s = sources[i], t = choices[i][pick[i]];
            h.edges.push_back({s, 1, t});
            h.degree[s] += 1;
            h.degree[t] += 1;
        }
        // pre-images list edges in source order already, since sources are increasing
        out.push_back(std::move(h));
        std::size_t i = 0;
        for (; i < choices.size(); ++i) {
            if (++pick[i] < static_cast<int>(choices[i].size())) break;
            pick[i] = 0;
        }
        if (i == choices.size()) break;
    }
    return out;
}

std::vector<std::pair<std::vector<int>, double>> out_degree_vectors(const OutDegreeLaw& law, int n) {
    std::vector<std::pair<std::vector<int>, double>> out;
    std::vector<int> m(n + 1, 0);
    m[1] = m[2] = 1;
    const auto& sup = law.support();
    std::function<void(int, int, double)> rec = [&](int v, int total, double w) {
        if (v > n) {
            out.emplace_back(m, w);
            return;
        }
        for (std::size_t i = 0; i < sup.size(); ++i) {
            if (total + sup[i] > kEnumerationBound) break;
            m[v] = sup[i];
            rec(v + 1, total + sup[i], w * law.probabilities()[i]);
        }
    };
    rec(3, 2, 1.0);
    // vectors exceeding the bound are dropped; report them as an error
    double mass = 0;
    for (auto& [mm, w] : out) mass += w;
    if (mass < 1 - 1e-12) throw ResourceError("enumeration bound m_[n] <= 12 exceeded");
    return out;
}

std::vector<EnumeratedGraph> enumerate_feasible(const ModelSpec& spec, const std::vector<int>& m) {
    std::int64_t total = 0;
    for (std::size_t v = 1; v < m.size(); ++v) total += m[v];
    if (total > kEnumerationBound) throw ResourceError("enumeration bound m_[n] <= 12 exceeded");
    std::vector<EnumeratedGraph> out;
    std::vector<int> targets;
    std::function<void(const GrowthState&, double)> rec = [&](const GrowthState& st, double p) {
        if (st.done()) {
            out.push_back({m, targets, p, 1.0});
            return;
        }
        const auto law = st.law();
        for (int u = 1; u <= law.v; ++u) {
            if (!(law.prob[u] > 0.0)) continue;
            GrowthState next = st;
            next.place(u);
            targets.push_back(u);
            rec(next, p * law.prob[u]);
            targets.pop_back();
        }
    };
    rec(GrowthState(spec, m), 1.0);
    return out;
}

std::vector<EnumeratedGraph> enumerate_feasible(const ModelSpec& spec, int n) {
    std::vector<EnumeratedGraph> out;
    for (auto& [m, w] : out_degree_vectors(spec.out_degree, n)) {
        for (auto& e : enumerate_feasible(spec, m)) {
            e.m_weight = w;
            e.probability *= w;
            out.push_back(std::move(e));
        }
    }
    return out;
}

EvolvingGraph to_graph(const EnumeratedGraph& e, const ModelSpec& spec) {
    GrowthState st(spec, e.m);
    for (int u : e.targets) st.place(u);
    return st.take();
}

std::string labelled_key(const EvolvingGraph& g) {
    std::ostringstream os;
    os << "m=";
    for (int v = 3; v <= g.n; ++v) os << (v > 3 ? "," : "") << g.out_degree[v];
    os << ";";
    for (const auto& e : g.edges) os << e.source << '.' << e.index << '>' << e.target << ' ';
    return os.str();
}

std::string class_key(const EvolvingGraph& g) {
    std::vector<std::vector<int>> per(g.n + 1);
    for (const auto& e : g.edges) per[e.source].push_back(e.target);
    std::ostringstream os;
    os << "m=";
    for (int v = 3; v <= g.n; ++v) os << (v > 3 ? "," : "") << g.out_degree[v];
    os << ";";
    for (int v = 3; v <= g.n; ++v) {
        std::sort(per[v].begin(), per[v].end());
        os << v << ":{";
        for (std::size_t i = 0; i < per[v].size(); ++i) os << (i ? "," : "") << per[v][i];
        os << "}";
    }
    return os.str();
}

bool EquivalenceReport::pass(double tol) const {
    return max_abs_diff <= tol && std::abs(total_sequential - 1) <= tol &&
           std::abs(total_urn - 1) <= tol && std::abs(total_closed - 1) <= tol;
}

EquivalenceReport verify_equivalence(const ModelSpec& spec, int n, double urn_delta) {
    if (spec.variant == Variant::E || spec.variant == Variant::F)
        throw ParameterError("no urn representation for models E and F");
    ModelSpec urn_spec = spec;
    if (!std::isnan(urn_delta)) urn_spec.delta = urn_delta;
    EquivalenceReport rep;
    rep.variant = spec.variant;
    rep.n = n;
    std::map<std::string, EquivalenceRow> classes;
    for (auto& [m, w] : out_degree_vectors(spec.out_degree, n)) {
        BetaSchedule sch = spec.variant == Variant::D ? model_d_schedule(urn_spec, m)
                           : spec.variant == Variant::A
                               ? collapsed_schedule(urn_spec, m, Placement::SL)
                               : collapsed_schedule(urn_spec, m, Placement::NSL);
        for (const auto& e : enumerate_feasible(spec, m)) {
            EvolvingGraph g = to_graph(e, spec);
            double urn = 0, closed = 0;
            if (spec.variant == Variant::D) {
                urn = prob_pu_closed(g, sch, Placement::NSL);
                closed = prob_model_D_closed(g, urn_spec);
            } else {
                const Placement pl = spec.variant == Variant::A ? Placement::SL : Placement::NSL;
                for (const auto& h : preimages(g, pl)) {
                    urn += prob_pu_closed(h, sch, pl);
                    closed += spec.variant == Variant::A ? prob_model_A_closed(h, urn_spec, m)
                                                         : prob_model_B_closed(h, urn_spec, m);
                }
            }
            const double seq = e.probability * w;
            urn *= w;
            closed *= w;
            rep.max_labelled_diff =
                std::max({rep.max_labelled_diff, std::abs(seq - urn), std::abs(seq - closed)});
            auto& row = classes[class_key(g)];
            row.id = class_key(g);
            row.sequential += seq;
            row.urn += urn;
            row.closed += closed;
            rep.total_sequential += seq;
            rep.total_urn += urn;
            rep.total_closed += closed;
        }
    }
    for (auto& [k, row] : classes) {
        rep.max_abs_diff = std::max(
            {rep.max_abs_diff, std::abs(row.sequential - row.urn), std::abs(row.sequential - row.closed)});
        rep.rows.push_back(row);
    }
    return rep;
}

EquivalenceReport verify_equivalence(const ModelSpec& spec, int n) {
    return verify_equivalence(spec, n, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace pam
