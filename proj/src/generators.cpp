#include "pam/generators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "pam/errors.hpp"

namespace pam {

double normalizer(Variant variant, const ModelSpec& spec, std::int64_t mp, int v, int j, int m_v) {
    const double a = spec.a_sum();
    const double d = spec.delta;
    const double M = static_cast<double>(mp);
    switch (variant) {
    case Variant::A: return a + 2 * (M + j - 2) - 1 + (v - 1) * d + j * d / m_v;
    case Variant::B: return a + 2 * (M + j - 3) + (v - 1) * d + (j - 1) * d / m_v;
    case Variant::D: return a + 2 * (M - 2) + (j - 1) + (v - 1) * d;
    case Variant::E:
    case Variant::F: return a + 2 * (M - 2) + (v - 1) * d;
    }
    return 0.0;
}

GrowthState::GrowthState(const ModelSpec& spec, std::vector<int> out_degrees)
    : spec_(spec), g_(make_initial_graph(spec, std::move(out_degrees))) {
    const int n = g_.n;
    fen_ = DegreeFenwick(n, spec_.delta);
    fen_.activate(1, g_.degree[1]);
    fen_.activate(2, g_.degree[2]);
    m_prefix_.assign(n + 1, 0);
    for (int v = 1; v <= n; ++v) m_prefix_[v] = m_prefix_[v - 1] + g_.out_degree[v];
    std::int64_t total = 0;
    for (int v = 3; v <= n; ++v) total += g_.out_degree[v];
    g_.edges.reserve(static_cast<std::size_t>(total));
}

void GrowthState::check_position(int v, int j) const {
    if (v != v_) throw ParameterError("vertices must be inserted in order");
    if (j != j_ + 1) throw ParameterError("edges must be placed in order");
}

int GrowthState::hits_on(int u) const {
    for (auto [w, c] : hits_)
        if (w == u) return c;
    return 0;
}

AttachmentStep GrowthState::law() const {
    if (done()) throw ParameterError("graph already complete");
    const int v = v_;
    const int j = j_ + 1;
    const int m = g_.out_degree[v];
    const double delta = spec_.delta;
    AttachmentStep st;
    st.v = v;
    st.j = j;
    st.prob.assign(v + 1, 0.0);
    const Variant var = spec_.variant;
    if (var == Variant::F && m >= v - 1) {
        for (int u = 1; u < v; ++u)
            if (std::find(chosen_.begin(), chosen_.end(), u) == chosen_.end()) {
                st.prob[u] = 1.0;
                st.normalizer = 1.0;
                return st;
            }
    }
    double c = normalizer(var, spec_, m_prefix_prev(), v, j, m);
    if (var == Variant::E || var == Variant::F) {
        c = fen_.prefix(v - 1);
        for (int u = 1; u < v; ++u) st.prob[u] = (static_cast<double>(g_.degree[u]) + delta);
        if (var == Variant::F)
            for (int u : chosen_) {
                c -= st.prob[u];
                st.prob[u] = 0.0;
            }
    } else {
        for (int u = 1; u < v; ++u)
            st.prob[u] = static_cast<double>(g_.degree[u] + hits_on(u)) + delta;
        const double dv = (j - 1) + self_;
        if (var == Variant::A) st.prob[v] = dv + 1 + j * delta / m;
        if (var == Variant::B) st.prob[v] = dv + (j - 1) * delta / m;
    }
    st.normalizer = c;
    for (int u = 1; u <= v; ++u) st.prob[u] /= c;
    return st;
}

int GrowthState::sample_frozen(Rng& rng) const {
    double x = uniform01(rng) * fen_.prefix(v_ - 1);
    return std::min(fen_.find(x), v_ - 1);
}

int GrowthState::sample_sequential(Rng& rng, double self_weight) const {
    const double frozen = fen_.prefix(v_ - 1);
    const int extra = j_ - self_;
    const double total = frozen + extra + self_weight;
    double x = uniform01(rng) * total;
    if (x < frozen) return std::min(fen_.find(x), v_ - 1);
    x -= frozen;
    if (x < extra) {
        int k = static_cast<int>(x);
        for (auto [u, c] : hits_) {
            if (k < c) return u;
            k -= c;
        }
        return hits_.back().first;
    }
    return v_;
}

void GrowthState::record(int target) {
    const int v = v_;
    ++j_;
    g_.edges.push_back({v, j_, target});
    if (target == v) {
        ++self_;
    } else {
        auto it = std::find_if(hits_.begin(), hits_.end(), [&](auto& p) { return p.first == target; });
        if (it == hits_.end())
            hits_.emplace_back(target, 1);
        else
            ++it->second;
        if (spec_.variant == Variant::F) chosen_.push_back(target);
    }
    const int m = g_.out_degree[v];
    const int needed = spec_.variant == Variant::F ? std::min(m, v - 1) : m;
    if (j_ == needed) finish_vertex();
}

void GrowthState::finish_vertex() {
    const int v = v_;
    for (auto [u, c] : hits_) {
        g_.degree[u] += c;
        fen_.add_degree(u, c);
    }
    g_.degree[v] = j_ + self_;
    fen_.activate(v, g_.degree[v]);
    hits_.clear();
    chosen_.clear();
    self_ = 0;
    j_ = 0;
    ++v_;
}

void GrowthState::place(int target) {
    if (done()) throw ParameterError("graph already complete");
    if (target < 1 || target > v_) throw ParameterError("target out of range");
    record(target);
}

int GrowthState::step_model_A(int v, int j, Rng& rng) {
    check_position(v, j);
    const int m = g_.out_degree[v];
    const double self_w = (j - 1) + self_ + 1 + j * spec_.delta / m;
    int u = sample_sequential(rng, self_w);
    assert(std::abs(fen_.prefix(v - 1) + (j - 1 - self_) + self_w -
                    normalizer(Variant::A, spec_, m_prefix_prev(), v, j, m)) < 1e-6);
    record(u);
    return u;
}

int GrowthState::step_model_B(int v, int j, Rng& rng) {
    check_position(v, j);
    const int m = g_.out_degree[v];
    const double self_w = (j - 1) + self_ + (j - 1) * spec_.delta / m;
    int u = sample_sequential(rng, self_w);
    record(u);
    return u;
}

int GrowthState::step_model_D(int v, int j, Rng& rng) {
    check_position(v, j);
    int u = sample_sequential(rng, 0.0);
    record(u);
    return u;
}

std::vector<int> GrowthState::step_model_E(int v, Rng& rng) {
    check_position(v, 1);
    const int m = g_.out_degree[v];
    std::vector<int> out(m);
    for (int j = 0; j < m; ++j) out[j] = sample_frozen(rng);
    for (int u : out) record(u);
    return out;
}

std::vector<int> GrowthState::step_model_F(int v, Rng& rng) {
    check_position(v, 1);
    const int m = g_.out_degree[v];
    std::vector<int> out;
    if (m >= v - 1) {
        for (int u = 1; u < v; ++u) out.push_back(u);
    } else {
        out.reserve(m);
        for (int j = 0; j < m; ++j) {
            int u = 0;
            for (int tries = 0; tries < 64; ++tries) {
                int cand = sample_frozen(rng);
                if (std::find(out.begin(), out.end(), cand) == out.end()) {
                    u = cand;
                    break;
                }
            }
            if (u == 0) {
                // explicit draw over the unchosen targets
                double total = 0;
                std::vector<double> w(v, 0.0);
                for (int t = 1; t < v; ++t) {
                    if (std::find(out.begin(), out.end(), t) != out.end()) continue;
                    w[t] = static_cast<double>(g_.degree[t]) + spec_.delta;
                    total += w[t];
                }
                double x = uniform01(rng) * total;
                for (int t = 1; t < v; ++t) {
                    if (w[t] == 0.0) continue;
                    u = t;
                    if (x < w[t]) break;
                    x -= w[t];
                }
            }
            out.push_back(u);
        }
    }
    for (int u : out) record(u);
    return out;
}

void GrowthState::step_vertex(Rng& rng) {
    const int v = v_;
    const int m = g_.out_degree[v];
    switch (spec_.variant) {
    case Variant::A:
        for (int j = 1; j <= m; ++j) step_model_A(v, j, rng);
        break;
    case Variant::B:
        for (int j = 1; j <= m; ++j) step_model_B(v, j, rng);
        break;
    case Variant::D:
        for (int j = 1; j <= m; ++j) step_model_D(v, j, rng);
        break;
    case Variant::E: step_model_E(v, rng); break;
    case Variant::F: step_model_F(v, rng); break;
    }
}

EvolvingGraph generate_with_degrees(const ModelSpec& spec, std::vector<int> out_degrees, Rng& rng) {
    GrowthState st(spec, std::move(out_degrees));
    while (!st.done()) st.step_vertex(rng);
    return st.take();
}

EvolvingGraph generate(const ModelSpec& spec, int n, std::uint64_t seed) {
    spec.validate();
    Rng mrng = make_stream(seed, "out-degrees");
    auto m = sample_out_degrees(spec.out_degree, n, mrng);
    Rng arng = make_stream(seed, "attach");
    return generate_with_degrees(spec, std::move(m), arng);
}

}  // namespace pam
