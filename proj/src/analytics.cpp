#include "pam/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "pam/errors.hpp"

namespace pam {

namespace {

namespace bq = boost::math::quadrature;

double gk(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return bq::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}


/// E_M[u^{M + delta}], truncating the support once the remaining terms vanish.
double expect_power(const OutDegreeLaw& law, double u, double delta) {
    if (u <= 0.0) return 0.0;
    const auto& v = law.support();
    const auto& p = law.probabilities();
    const double lu = std::log(u);
    double s = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double term = std::exp((v[i] + delta) * lu);
        s += p[i] * term;
        mass += p[i];
        if (term < 1e-300 || mass > 1 - 1e-16) break;
    }
    return s;
}

/// (1 - E_M[u^{M+delta}]) / (1 - u), stable near u = 1.
double survival_ratio(const OutDegreeLaw& law, double u, double delta) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return law.mean() + delta;
    const auto& v = law.support();
    const auto& p = law.probabilities();
    const double lu = std::log(u);
    const double den = -std::expm1(lu);
    double s = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double num = -std::expm1((v[i] + delta) * lu);
        s += p[i] * num;
        mass += p[i];
        if (mass > 1 - 1e-16) break;
    }
    s += 1.0 - mass;  // remaining mass has u^{m+delta} ~ 0
    return s / den;
}

double conditioned_normalizer(const ModelSpec& spec, double chi) {
    const auto& v = spec.out_degree.support();
    const auto& p = spec.out_degree.probabilities();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += p[i] / ((1 - chi) * (v[i] + spec.delta) + 1);
    return 1.0 - s;
}

/// J0(y) = int_0^y v^c / (1 - v) dv with c = chi / (1 - chi).
double younger_inner_unconditioned(double y, double chi) {
    const double c = chi / (1 - chi);
    if (y <= 0.0) return 0.0;
    if (y < 0.5) {
        // series sum_i y^{c+1+i} / (c+1+i)
        double s = 0.0, yp = std::pow(y, c + 1);
        for (int i = 0; i < 100000; ++i) {
            const double term = yp / (c + 1 + i);
            s += term;
            if (term < 1e-17 * s) break;
            yp *= y;
        }
        return s;
    }
    // bounded part plus the logarithm
    const double bounded = gk(
        [&](double v) {
            if (v >= 1.0) return -c;
            return std::expm1(c * std::log(v)) / (1.0 - v);
        },
        0.0, y);
    return bounded - std::log1p(-y);
}

/// J(y) = int_0^y v^c (1 - E[v^{M+delta}]) / (1 - v) dv.
double younger_inner_conditioned(double y, double chi, const ModelSpec& spec) {
    const double c = chi / (1 - chi);
    return gk([&](double v) { return std::pow(v, c) * survival_ratio(spec.out_degree, v, spec.delta); },
              0.0, y);
}

void check_age(double a) {
    if (!(a > 0.0) || a > 1.0) throw DomainError("age must lie in (0,1]");
}

}  // namespace

double mixed_poisson_pmf(int m, double a, int t, double chi, double delta) {
    check_age(a);
    if (t < m) return 0.0;
    const double s = m + delta;
    if (!(s > 0.0)) throw DomainError("mixed Poisson needs m + delta > 0");
    const int k = t - m;
    if (a == 1.0) return k == 0 ? 1.0 : 0.0;
    const double lu = (1 - chi) * std::log(a);
    const double l1mu = std::log(-std::expm1(lu));
    return std::exp(std::lgamma(t + delta) - std::lgamma(s) - std::lgamma(k + 1.0) + k * l1mu +
                    s * lu);
}

double mixed_poisson_pmf(int m, double a, int t, const ModelSpec& spec) {
    return mixed_poisson_pmf(m, a, t, derive_constants(spec).chi, spec.delta);
}

double root_degree_pmf(int t, const ModelSpec& spec) {
    if (t < 1) return 0.0;
    const double te = derive_constants(spec).tau_e;
    const double d = spec.delta;
    const auto& v = spec.out_degree.support();
    const auto& p = spec.out_degree.probabilities();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size() && v[i] <= t; ++i) {
        const int m = v[i];
        s += p[i] * (te - 1) *
             std::exp(std::lgamma(t + d) + std::lgamma(m + d + te - 1) - std::lgamma(m + d) -
                      std::lgamma(t + d + te));
    }
    return s;
}

double older_neighbor_pmf(int t, const ModelSpec& spec) {
    if (t < 2) return 0.0;
    const double te = derive_constants(spec).tau_e;
    const double d = spec.delta;
    const OutDegreeLaw sb = size_biased_law(spec.out_degree, d);
    const auto& v = sb.support();
    const auto& p = sb.probabilities();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size() && v[i] < t; ++i) {
        const int m = v[i];
        s += p[i] * (te - 2) * (te - 1) * (t - m) *
             std::exp(std::lgamma(t + d) + std::lgamma(m + d + te - 1) - std::lgamma(m + 1 + d) -
                      std::lgamma(t + d + te));
    }
    return s;
}

namespace {

/// int_0^1 g(v) sum_m pmf_{M^{(0)}}(m) int_v^1 P(m + Y(m, u) = t) du dv, with
/// u = x^{1-chi}; the inner integral is an incomplete Beta function.
double younger_swapped(const ModelSpec& spec, int t, const std::function<double(double)>& g) {
    const OutDegreeLaw sb0 = size_biased_law(spec.out_degree, 0.0);
    const auto& v = sb0.support();
    const auto& p = sb0.probabilities();
    const double d = spec.delta;
    double total = 0.0;
    for (std::size_t i = 0; i < v.size() && v[i] <= t; ++i) {
        const int m = v[i];
        const double a = m + d + 1, b = t - m + 1;
        const double w = p[i] * (m + d) / ((t + d) * (t + d + 1));
        total += w * gk([&](double x) { return x >= 1.0 ? 0.0 : g(x) * boost::math::ibetac(a, b, x); },
                        0.0, 1.0);
    }
    return total;
}

}  // namespace

double younger_neighbor_pmf(int t, const ModelSpec& spec) {
    if (t < 1) return 0.0;
    const double chi = derive_constants(spec).chi;
    const double c = chi / (1 - chi);
    const double Z = conditioned_normalizer(spec, chi);
    const double val = younger_swapped(spec, t, [&](double v) {
        return std::pow(v, c) * survival_ratio(spec.out_degree, v, spec.delta);
    });
    return val / ((1 - chi) * Z);
}

double younger_neighbor_pmf_unconditioned(int t, const ModelSpec& spec) {
    if (t < 1) return 0.0;
    const double chi = derive_constants(spec).chi;
    const double c = chi / (1 - chi);
    const double val = younger_swapped(spec, t, [&](double v) { return std::pow(v, c) / (1 - v); });
    return val / (1 - chi);
}

double younger_neighbor_pmf_series(int t, const ModelSpec& spec) {
    if (t < 1) return 0.0;
    const auto dc = derive_constants(spec);
    const double chi = dc.chi, te = dc.tau_e, d = spec.delta;
    const OutDegreeLaw sb0 = size_biased_law(spec.out_degree, 0.0);
    const auto& v = sb0.support();
    const auto& p = sb0.probabilities();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size() && v[i] <= t; ++i) {
        const int m = v[i];
        const int k = t - m;
        const double logc = std::lgamma(t + d) - std::lgamma(m + d) - std::lgamma(k + 1.0);
        // sum_j B(te + j + m + delta, k + 1) / (te - 1 + j)
        const double alpha = te + m + d;
        double logb = std::lgamma(alpha) + std::lgamma(k + 1.0) - std::lgamma(alpha + k + 1);
        double s = 0.0, term = 0.0;
        const int N = 200000;
        int j = 0;
        for (; j < N; ++j) {
            term = std::exp(logb) / (te - 1 + j);
            s += term;
            if (term < 1e-16 * s) break;
            logb += std::log((alpha + j) / (alpha + j + k + 1));
        }
        if (j == N) {
            // terms decay like j^{-(k+2)}; integral tail estimate
            s += term * (j / (k + 1.0) - 0.5);
        }
        total += p[i] * std::exp(logc) * s;
    }
    return total / (1 - chi);
}

const char* degree_law_name(DegreeLawKind k) {
    switch (k) {
    case DegreeLawKind::Root: return "root";
    case DegreeLawKind::Older: return "older";
    case DegreeLawKind::Younger: return "younger";
    }
    return "?";
}

DegreeLawKind parse_degree_law(const std::string& s) {
    if (s == "root") return DegreeLawKind::Root;
    if (s == "older") return DegreeLawKind::Older;
    if (s == "younger") return DegreeLawKind::Younger;
    throw ParameterError("unknown degree law: " + s);
}

double DegreeLaw::mass() const {
    double s = 0;
    for (double x : pmf) s += x;
    return s;
}

DegreeLaw degree_law_table(DegreeLawKind which, const ModelSpec& spec, int T) {
    spec.validate();
    DegreeLaw law{which, std::vector<double>(T + 1, 0.0)};
    for (int k = 1; k <= T; ++k) {
        switch (which) {
        case DegreeLawKind::Root: law.pmf[k] = root_degree_pmf(k, spec); break;
        case DegreeLawKind::Older: law.pmf[k] = older_neighbor_pmf(k, spec); break;
        case DegreeLawKind::Younger: law.pmf[k] = younger_neighbor_pmf(k, spec); break;
        }
    }
    law.tail = which == DegreeLawKind::Younger ? std::max(0.0, 1.0 - law.mass())
                                               : degree_law_tail(which, spec, T);
    return law;
}

namespace {

/// sum_{t > T} Gamma(t + delta) / Gamma(t + delta + s) for s > 1, by telescoping.
double gamma_ratio_tail(int T, double delta, double s) {
    return std::exp(std::lgamma(T + 1 + delta) - std::lgamma(T + delta + s)) / (s - 1);
}

}  // namespace

double degree_law_tail(DegreeLawKind which, const ModelSpec& spec, int T) {
    const double te = derive_constants(spec).tau_e;
    const double d = spec.delta;
    if (which == DegreeLawKind::Root) {
        const auto& v = spec.out_degree.support();
        const auto& p = spec.out_degree.probabilities();
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int m = v[i];
            if (m > T) {
                s += p[i];
                continue;
            }
            s += p[i] * (te - 1) * std::exp(std::lgamma(m + d + te - 1) - std::lgamma(m + d)) *
                 gamma_ratio_tail(T, d, te);
        }
        return s;
    }
    if (which == DegreeLawKind::Older) {
        const OutDegreeLaw sb = size_biased_law(spec.out_degree, d);
        const auto& v = sb.support();
        const auto& p = sb.probabilities();
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int m = v[i];
            if (m >= T) {
                s += p[i];
                continue;
            }
            // (t - m) = (t + delta + te - 1) - (m + delta + te - 1)
            const double lead = (te - 2) * (te - 1) *
                                std::exp(std::lgamma(m + d + te - 1) - std::lgamma(m + 1 + d));
            s += p[i] * lead *
                 (gamma_ratio_tail(T, d, te - 1) - (m + d + te - 1) * gamma_ratio_tail(T, d, te));
        }
        return s;
    }
    double mass = 0.0;
    for (int k = 1; k <= T; ++k) mass += younger_neighbor_pmf(k, spec);
    return std::max(0.0, 1.0 - mass);
}

double older_age_density(double a, double chi) {
    check_age(a);
    return chi / (1 - chi) * (std::pow(a, chi - 1) - 1);
}

double older_age_cdf(double a, double chi) {
    if (a <= 0.0) return 0.0;
    if (a >= 1.0) return 1.0;
    return (std::pow(a, chi) - chi * a) / (1 - chi);
}

double younger_age_density(double x, double chi) {
    check_age(x);
    if (x == 1.0) return INFINITY;
    return std::pow(x, -chi) * younger_inner_unconditioned(std::pow(x, 1 - chi), chi);
}

double younger_age_cdf(double x, double chi) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double c = chi / (1 - chi);
    const double y = std::pow(x, 1 - chi);
    const double val = gk([&](double v) { return std::pow(v, c) * (y - v) / (1 - v); }, 0.0, y);
    return std::min(1.0, val / (1 - chi));
}

double no_younger_child_prob(double a, const ModelSpec& spec) {
    check_age(a);
    const double chi = derive_constants(spec).chi;
    return expect_power(spec.out_degree, std::pow(a, 1 - chi), spec.delta);
}

double younger_age_density_conditioned(double x, const ModelSpec& spec) {
    check_age(x);
    const double chi = derive_constants(spec).chi;
    const double Z = conditioned_normalizer(spec, chi);
    return std::pow(x, -chi) * younger_inner_conditioned(std::pow(x, 1 - chi), chi, spec) / Z;
}

double younger_age_cdf_conditioned(double x, const ModelSpec& spec) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double chi = derive_constants(spec).chi;
    const double c = chi / (1 - chi);
    const double Z = conditioned_normalizer(spec, chi);
    const double y = std::pow(x, 1 - chi);
    const double val = gk(
        [&](double v) {
            return std::pow(v, c) * survival_ratio(spec.out_degree, v, spec.delta) * (y - v);
        },
        0.0, y);
    return std::min(1.0, val / ((1 - chi) * Z));
}

SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y, double lo,
                     double hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] < lo || x[i] > hi || !(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const int n = static_cast<int>(lx.size());
    if (n < 3) throw DomainError("need at least three positive points for a slope fit");
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double b = sxy / sxx;
    const double a = my - b * mx;
    double rss = 0;
    for (int i = 0; i < n; ++i) rss += std::pow(ly[i] - a - b * lx[i], 2);
    return {b, a, std::sqrt(rss / (n - 2) / sxx), n};
}

SlopeFit pmf_tail_slope(const std::vector<double>& pmf, int lo, int hi) {
    std::vector<double> x(pmf.size());
    for (std::size_t k = 0; k < pmf.size(); ++k) x[k] = static_cast<double>(k);
    return fit_log_log(x, pmf, lo, hi);
}

int AgedTree::depth_of(int i) const {
    int d = 0;
    for (int v = i; parent[v] >= 0; v = parent[v]) ++d;
    return d;
}

namespace {

struct NodeShape {
    NodeType type;
    int k_older;    // children older than the node
    int d_younger;  // children younger than the node
};

std::vector<NodeShape> node_shapes(const AgedTree& t) {
    if (t.size() == 0 || t.parent[0] != -1) throw ParameterError("aged tree needs parent[0] = -1");
    if (t.age.size() != t.parent.size()) throw ParameterError("one age per node required");
    std::vector<NodeShape> s(t.size(), {NodeType::Root, 0, 0});
    for (int i = 0; i < t.size(); ++i) check_age(t.age[i]);
    for (int i = 1; i < t.size(); ++i) {
        const int p = t.parent[i];
        if (p < 0 || p >= i) throw ParameterError("parents must precede children");
        if (t.age[i] == t.age[p]) throw DomainError("ages must be distinct");
        if (t.age[i] < t.age[p]) {
            s[i].type = NodeType::O;
            ++s[p].k_older;
        } else {
            s[i].type = NodeType::Y;
            ++s[p].d_younger;
        }
    }
    return s;
}

/// Common deterministic part: type weights and the edge product.
double density_prefactor(const AgedTree& t, const std::vector<NodeShape>& s, double chi) {
    double logv = 0.0;
    for (int i = 1; i < t.size(); ++i) {
        const double a = t.age[i], b = t.age[t.parent[i]];
        logv += std::log(s[i].type == NodeType::O ? chi : 1 - chi);
        logv += -chi * std::log(std::max(a, b)) - (1 - chi) * std::log(std::min(a, b));
    }
    return std::exp(logv);
}

}  // namespace

double rppt_tree_density(const AgedTree& t, int r, const ModelSpec& spec) {
    spec.validate();
    const auto s = node_shapes(t);
    const RpptLaws laws(spec);
    const double chi = laws.chi, d = spec.delta;
    double logv = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        const int depth = t.depth_of(i);
        if (depth > r) throw ParameterError("tree deeper than the exploration depth");
        if (depth == r) continue;
        const int k = s[i].k_older, din = s[i].d_younger;
        double pk, shape;
        switch (s[i].type) {
        case NodeType::Root:
            pk = laws.root.pmf(k);
            shape = k + d;
            break;
        case NodeType::O:
            pk = laws.older.pmf(k);
            shape = k + d + 1;
            break;
        default:
            pk = laws.younger.pmf(k + 1);
            shape = k + 1 + d;
            break;
        }
        if (pk <= 0.0) return 0.0;
        logv += std::log(pk) + std::lgamma(k + 1.0) + std::lgamma(shape + din) - std::lgamma(shape) +
                (1 - chi) * (shape + din) * std::log(t.age[i]);
    }
    return std::exp(logv) * density_prefactor(t, s, chi);
}

McEstimate rppt_tree_density_mc(const AgedTree& t, int r, const ModelSpec& spec, int reps,
                                std::uint64_t seed) {
    spec.validate();
    if (reps < 2) throw ParameterError("need at least two replicas");
    const auto s = node_shapes(t);
    const RpptLaws laws(spec);
    const double chi = laws.chi, d = spec.delta;
    const double pre = density_prefactor(t, s, chi);
    Rng rng = make_stream(seed, "tree-density");
    double s1 = 0, s2 = 0;
    for (int rep = 0; rep < reps; ++rep) {
        double v = 1.0;
        for (int i = 0; i < t.size() && v > 0.0; ++i) {
            const int depth = t.depth_of(i);
            if (depth > r) throw ParameterError("tree deeper than the exploration depth");
            if (depth == r) continue;
            const int k = s[i].k_older, din = s[i].d_younger;
            int m;
            double shape;
            switch (s[i].type) {
            case NodeType::Root:
                m = laws.root.sample(rng);
                shape = m + d;
                break;
            case NodeType::O:
                m = laws.older.sample(rng);
                shape = m + d + 1;
                break;
            default:
                m = laws.younger.sample(rng) - 1;
                shape = m + 1 + d;
                break;
            }
            if (m != k) {
                v = 0.0;
                break;
            }
            const double g = sample_gamma(shape, 1.0, rng);
            v *= std::exp(std::lgamma(k + 1.0) + din * std::log(g) - g * lambda_fn(t.age[i], chi));
        }
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / reps;
    const double var = std::max(0.0, s2 / reps - mean * mean);
    return {mean * pre, pre * std::sqrt(var / (reps - 1)), reps};
}

McEstimate rppt_pattern_probability(const ModelSpec& spec, const TreePattern& p, int r, int trees,
                                    std::uint64_t seed) {
    if (trees < 1) throw ParameterError("need at least one tree");
    if (p.depth() > r) throw ParameterError("pattern deeper than the radius");
    const RpptLaws laws(spec);
    Rng rng = make_stream(seed, "pattern-trees");
    std::int64_t hits = 0;
    for (int i = 0; i < trees; ++i) {
        try {
            hits += matches_pattern(sample_rppt(laws, r, rng, p.size()), p, r);
        } catch (const RpptTruncated&) {
            // more nodes than the pattern
        }
    }
    const double q = static_cast<double>(hits) / trees;
    return {q, std::sqrt(q * (1 - q) / trees), trees};
}

double no_further_edge_factor(double a, double chi_hat, const ModelSpec& spec) {
    check_age(a);
    if (!(chi_hat > 0.0)) throw DomainError("chi_hat must be positive");
    return std::exp(-chi_hat * lambda_fn(a, derive_constants(spec).chi));
}

namespace {

double coupling_c(int n, std::int64_t mp, const ModelSpec& spec) {
    return spec.a_sum() + 2.0 * (mp - 2) + (n - 1) * spec.delta;
}

double log_binom(int m, int k) {
    return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

}  // namespace

std::vector<double> coupling_binomial_law(int d, int m_n, int n, std::int64_t mp,
                                          const ModelSpec& spec) {
    const double c = coupling_c(n, mp, spec);
    const double p = (d + spec.delta) / c;
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("degree too large for the normaliser");
    std::vector<double> q(m_n + 1);
    for (int k = 0; k <= m_n; ++k)
        q[k] = std::exp(log_binom(m_n, k) + (k ? k * std::log(p) : 0.0) +
                        (m_n - k ? (m_n - k) * std::log1p(-p) : 0.0));
    return q;
}

std::vector<double> coupling_sequential_law(int d, int m_n, int n, std::int64_t mp,
                                            const ModelSpec& spec) {
    const double c = coupling_c(n, mp, spec);
    const double delta = spec.delta;
    std::vector<double> t(m_n + 1);
    for (int k = 0; k <= m_n; ++k) {
        double v = std::exp(log_binom(m_n, k));
        for (int l = 0; l < k; ++l) v *= (d + l + delta) / (c + l);
        for (int l = k; l < m_n; ++l) v *= 1.0 - (d + k + delta) / (c + l);
        t[k] = v;
    }
    return t;
}

double coupling_tv_bound(int d, int m_n, int n, std::int64_t mp, const ModelSpec& spec) {
    const auto q = coupling_binomial_law(d, m_n, n, mp, spec);
    const auto t = coupling_sequential_law(d, m_n, n, mp, spec);
    double s = 0;
    for (int k = 0; k <= m_n; ++k) s += std::abs(q[k] - t[k]);
    return 0.5 * s;
}

double coupling_tv_bound(int d, int m_n, int n, const ModelSpec& spec) {
    const auto mp = static_cast<std::int64_t>(std::llround(2 + (n - 3) * spec.out_degree.mean()));
    return coupling_tv_bound(d, m_n, n, mp, spec);
}

double coupling_tv_envelope(int d, int m_n, int n, const ModelSpec& spec) {
    const double x = double(m_n) * (d + std::abs(spec.delta) + 1) / n;
    return std::min(1.0, x * x);
}

EmpiricalDegrees empirical_degree_pmf(const EvolvingGraph& g, int kmax) {
    EmpiricalDegrees e{std::vector<double>(kmax + 1, 0.0), std::vector<double>(kmax + 1, 0.0)};
    for (int u = 1; u <= g.n; ++u) {
        const auto k = g.degree[u];
        if (k > kmax) continue;
        e.unweighted[k] += 1.0 / g.n;
        e.weighted[k] += 1.0 / (g.n * double(std::max(1, g.out_degree[u])));
    }
    return e;
}

std::vector<double> empirical_older_neighbor_pmf(const EvolvingGraph& g, int kmax) {
    std::vector<std::vector<int>> out(g.n + 1);
    for (const auto& e : g.initial_edges)
        if (e.source != e.target) out[e.source].push_back(e.target);
    for (const auto& e : g.edges)
        if (e.source != e.target) out[e.source].push_back(e.target);
    std::vector<double> pmf(kmax + 1, 0.0);
    int count = 0;
    for (int v = 1; v <= g.n; ++v) {
        if (out[v].empty()) continue;
        ++count;
        const double w = 1.0 / out[v].size();
        for (int u : out[v])
            if (g.degree[u] <= kmax) pmf[g.degree[u]] += w;
    }
    for (auto& x : pmf) x /= std::max(count, 1);
    return pmf;
}

std::vector<double> empirical_younger_neighbor_pmf(const EvolvingGraph& g, int kmax) {
    std::vector<std::vector<int>> in(g.n + 1);
    for (const auto& e : g.initial_edges)
        if (e.source != e.target) in[e.target].push_back(e.source);
    for (const auto& e : g.edges)
        if (e.source != e.target) in[e.target].push_back(e.source);
    std::vector<double> pmf(kmax + 1, 0.0);
    int count = 0;
    for (int u = 1; u <= g.n; ++u) {
        if (in[u].empty()) continue;
        ++count;
        const double w = 1.0 / in[u].size();
        for (int v : in[u])
            if (g.degree[v] <= kmax) pmf[g.degree[v]] += w;
    }
    for (auto& x : pmf) x /= std::max(count, 1);
    return pmf;
}

std::vector<double> survival(const std::vector<double>& pmf) {
    std::vector<double> s(pmf.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = pmf.size(); k-- > 0;) {
        acc += pmf[k];
        s[k] = acc;
    }
    return s;
}

std::vector<double> degree_survival(const EvolvingGraph& g, int kmax) {
    std::vector<double> s(kmax + 1, 0.0);
    for (int u = 1; u <= g.n; ++u) {
        const auto k = std::min<std::int64_t>(g.degree[u], kmax);
        s[k] += 1.0 / g.n;
    }
    // entries > kmax were folded into kmax, so suffix sums give P(D >= k) for k <= kmax
    return survival(s);
}

RpptDegreeLaws rppt_degree_laws(const ModelSpec& spec, int trees, int kmax, std::uint64_t seed) {
    spec.validate();
    const RpptLaws laws(spec);
    const double chi = laws.chi, d = spec.delta;
    Rng rng = make_stream(seed, "rppt-degrees");
    RpptDegreeLaws out{std::vector<double>(kmax + 1, 0.0), std::vector<double>(kmax + 1, 0.0),
                       std::vector<double>(kmax + 1, 0.0), trees, 0};
    auto poisson = [&](double mean) -> long long {
        if (!(mean > 0.0)) return 0;
        std::poisson_distribution<long long> p(mean);
        return p(rng);
    };
    for (int i = 0; i < trees; ++i) {
        const double a = uniform_open(rng);
        const int m = laws.root.sample(rng);
        const double g = sample_gamma(m + d, 1.0, rng);
        const auto y_ages = sample_poisson_ages(g, a, chi, rng);
        const long long deg = m + static_cast<long long>(y_ages.size());
        if (deg <= kmax) out.root[deg] += 1;
        // one O-child
        const double ao = sample_older_age(a, chi, rng);
        const int mo = laws.older.sample(rng);
        const double go = sample_gamma(mo + d + 1, 1.0, rng);
        const long long dego = mo + 1 + poisson(go * lambda_fn(ao, chi));
        if (dego <= kmax) out.older[dego] += 1;
        if (!y_ages.empty()) {
            ++out.trees_with_younger;
            std::uniform_int_distribution<std::size_t> pick(0, y_ages.size() - 1);
            const double ay = y_ages[pick(rng)];
            const int my = laws.younger.sample(rng) - 1;
            const double gy = sample_gamma(my + 1 + d, 1.0, rng);
            const long long degy = my + 1 + poisson(gy * lambda_fn(ay, chi));
            if (degy <= kmax) out.younger[degy] += 1;
        }
    }
    for (auto& x : out.root) x /= trees;
    for (auto& x : out.older) x /= trees;
    for (auto& x : out.younger) x /= std::max(out.trees_with_younger, 1);
    return out;
}

}  // namespace pam
