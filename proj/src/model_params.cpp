#include "pam/model_params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pam/errors.hpp"

namespace pam {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) pos = s.size();
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw ParameterError("bad number: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw ParameterError("bad number: " + s);
    }
}

int to_int(const std::string& s) {
    double v = to_double(s);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ParameterError("bad integer: " + s);
    return static_cast<int>(v);
}

}  // namespace

OutDegreeLaw::OutDegreeLaw(LawKind kind, std::vector<double> params, std::vector<int> values,
                           std::vector<double> probs)
    : kind_(kind), params_(std::move(params)), values_(std::move(values)), probs_(std::move(probs)) {
    if (values_.empty()) throw ParameterError("empty out-degree law");
    if (values_.front() < 1) throw ParameterError("out-degree support must be >= 1");
    long double total = 0;
    for (double p : probs_) {
        if (!(p >= 0)) throw ParameterError("negative probability in out-degree law");
        total += p;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12)
        throw ParameterError("out-degree pmf does not sum to 1");
    cdf_.resize(probs_.size());
    long double acc = 0, m = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += probs_[i];
        m += static_cast<long double>(probs_[i]) * values_[i];
        cdf_[i] = static_cast<double>(acc);
    }
    cdf_.back() = 1.0;
    mean_ = static_cast<double>(m);
}

OutDegreeLaw OutDegreeLaw::degenerate(int m) {
    if (m < 1) throw ParameterError("degenerate out-degree must be >= 1");
    return OutDegreeLaw(LawKind::Degenerate, {double(m)}, {m}, {1.0});
}

OutDegreeLaw OutDegreeLaw::uniform_range(int a, int b) {
    if (a < 1 || b < a) throw ParameterError("uniform range needs 1 <= a <= b");
    std::vector<int> v;
    std::vector<double> p;
    for (int k = a; k <= b; ++k) {
        v.push_back(k);
        p.push_back(1.0 / (b - a + 1));
    }
    return OutDegreeLaw(LawKind::UniformRange, {double(a), double(b)}, v, p);
}

OutDegreeLaw OutDegreeLaw::truncated_zeta(double exponent, int cutoff) {
    if (!(exponent > 1.0)) throw ParameterError("zeta exponent must exceed 1");
    if (cutoff < 1) throw ParameterError("zeta cutoff must be >= 1");
    std::vector<int> v(cutoff);
    std::vector<double> w(cutoff);
    long double z = 0;
    // sum smallest terms first
    for (int k = cutoff; k >= 1; --k) {
        w[k - 1] = std::pow(double(k), -exponent);
        z += w[k - 1];
    }
    for (int k = 1; k <= cutoff; ++k) {
        v[k - 1] = k;
        w[k - 1] = static_cast<double>(w[k - 1] / z);
    }
    return OutDegreeLaw(LawKind::TruncatedZeta, {exponent, double(cutoff)}, v, w);
}

OutDegreeLaw OutDegreeLaw::geometric(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("geometric p must lie in (0,1]");
    std::vector<int> v;
    std::vector<double> w;
    double q = 1.0 - p;
    for (int k = 1;; ++k) {
        double pk = p * std::pow(q, k - 1);
        v.push_back(k);
        w.push_back(pk);
        if (q == 0.0 || std::pow(q, k) < 1e-18) break;
    }
    long double z = std::accumulate(w.begin(), w.end(), 0.0L);
    for (double& x : w) x = static_cast<double>(x / z);
    return OutDegreeLaw(LawKind::Geometric, {p}, v, w);
}

OutDegreeLaw OutDegreeLaw::explicit_pmf(const std::map<int, double>& table) {
    std::vector<int> v;
    std::vector<double> w;
    std::vector<double> params;
    for (auto [k, p] : table) {
        if (k < 1) throw ParameterError("pmf support must be >= 1");
        if (p < 0) throw ParameterError("negative probability in pmf");
        params.push_back(k);
        params.push_back(p);
        if (p == 0) continue;
        v.push_back(k);
        w.push_back(p);
    }
    return OutDegreeLaw(LawKind::Explicit, params, v, w);
}

OutDegreeLaw OutDegreeLaw::parse(std::string_view text) {
    std::string t = trim(text);
    if (t.find('\n') != std::string::npos || t.rfind("kind=", 0) == 0) {
        std::map<std::string, std::string> kv;
        for (const auto& line : split(t, '\n')) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParameterError("expected key=value: " + line);
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        auto get = [&](const std::string& k) {
            auto it = kv.find(k);
            if (it == kv.end()) throw ParameterError("missing key: " + k);
            return it->second;
        };
        std::string kind = get("kind");
        if (kind == "degenerate") return degenerate(to_int(get("m")));
        if (kind == "uniform") return uniform_range(to_int(get("a")), to_int(get("b")));
        if (kind == "zeta")
            return truncated_zeta(to_double(get("exponent")),
                                  kv.count("cutoff") ? to_int(kv["cutoff"]) : 1000000);
        if (kind == "geometric") return geometric(to_double(get("p")));
        if (kind == "pmf") return parse("pmf:" + get("table"));
        throw ParameterError("unknown law kind: " + kind);
    }
    auto colon = t.find(':');
    std::string kind = t.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : t.substr(colon + 1);
    auto args = split(rest, ',');
    if (kind == "degenerate" && args.size() == 1) return degenerate(to_int(args[0]));
    if (kind == "uniform" && args.size() == 2) return uniform_range(to_int(args[0]), to_int(args[1]));
    if (kind == "zeta" && (args.size() == 1 || args.size() == 2))
        return truncated_zeta(to_double(args[0]), args.size() == 2 ? to_int(args[1]) : 1000000);
    if (kind == "geometric" && args.size() == 1) return geometric(to_double(args[0]));
    if (kind == "pmf") {
        std::map<int, double> table;
        for (const auto& a : args) {
            auto eq = a.find('=');
            if (eq == std::string::npos) throw ParameterError("pmf entries are value=prob");
            table[to_int(a.substr(0, eq))] += to_double(a.substr(eq + 1));
        }
        return explicit_pmf(table);
    }
    throw ParameterError("cannot parse out-degree law: " + t);
}

double OutDegreeLaw::pmf(int m) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), m);
    if (it == values_.end() || *it != m) return 0.0;
    return probs_[it - values_.begin()];
}

double OutDegreeLaw::moment(double p) const {
    long double acc = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) acc += probs_[i] * std::pow(values_[i], p);
    return static_cast<double>(acc);
}

double OutDegreeLaw::tail_exponent() const {
    if (kind_ == LawKind::TruncatedZeta) return params_[0];
    return std::numeric_limits<double>::infinity();
}

int OutDegreeLaw::sample(Rng& rng) const {
    if (values_.size() == 1) return values_[0];
    double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return values_[it - cdf_.begin()];
}

std::string OutDegreeLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case LawKind::Degenerate: os << "degenerate:" << values_[0]; break;
    case LawKind::UniformRange: os << "uniform:" << int(params_[0]) << ',' << int(params_[1]); break;
    case LawKind::TruncatedZeta: os << "zeta:" << params_[0] << ',' << int(params_[1]); break;
    case LawKind::Geometric: os << "geometric:" << params_[0]; break;
    case LawKind::Explicit:
        os << "pmf:";
        for (std::size_t i = 0; i < values_.size(); ++i)
            os << (i ? "," : "") << values_[i] << '=' << probs_[i];
        break;
    }
    return os.str();
}

nlohmann::json OutDegreeLaw::to_json() const {
    nlohmann::json j;
    switch (kind_) {
    case LawKind::Degenerate: j = {{"kind", "degenerate"}, {"m", values_[0]}}; break;
    case LawKind::UniformRange:
        j = {{"kind", "uniform"}, {"a", int(params_[0])}, {"b", int(params_[1])}};
        break;
    case LawKind::TruncatedZeta:
        j = {{"kind", "zeta"}, {"exponent", params_[0]}, {"cutoff", int(params_[1])}};
        break;
    case LawKind::Geometric: j = {{"kind", "geometric"}, {"p", params_[0]}}; break;
    case LawKind::Explicit: {
        j = {{"kind", "pmf"}};
        nlohmann::json t = nlohmann::json::array();
        for (std::size_t i = 0; i < values_.size(); ++i) t.push_back({values_[i], probs_[i]});
        j["table"] = t;
        break;
    }
    }
    return j;
}

OutDegreeLaw OutDegreeLaw::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "degenerate") return degenerate(j.at("m"));
    if (kind == "uniform") return uniform_range(j.at("a"), j.at("b"));
    if (kind == "zeta") return truncated_zeta(j.at("exponent"), j.value("cutoff", 1000000));
    if (kind == "geometric") return geometric(j.at("p"));
    if (kind == "pmf") {
        std::map<int, double> t;
        for (const auto& e : j.at("table")) t[e.at(0).get<int>()] = e.at(1).get<double>();
        return explicit_pmf(t);
    }
    throw ParameterError("unknown law kind: " + kind);
}

OutDegreeLaw size_biased_law(const OutDegreeLaw& law, double delta) {
    if (!(delta > -law.min_support())) throw ParameterError("size bias needs delta > -min supp(M)");
    if (law.kind() == LawKind::TruncatedZeta && law.tail_exponent() <= 2.0)
        throw ParameterError("size-biased zeta law needs exponent > 2");
    const auto& v = law.support();
    const auto& p = law.probabilities();
    std::vector<long double> w(v.size());
    long double z = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = (v[i] + static_cast<long double>(delta)) * p[i];
        z += w[i];
    }
    std::map<int, double> table;
    for (std::size_t i = 0; i < v.size(); ++i) table[v[i]] = static_cast<double>(w[i] / z);
    // re-normalise against rounding in the double conversion
    long double s = 0;
    for (auto& [k, q] : table) s += q;
    for (auto& [k, q] : table) q = static_cast<double>(q / s);
    return OutDegreeLaw::explicit_pmf(table);
}

std::vector<int> sample_out_degrees(const OutDegreeLaw& law, int n, Rng& rng) {
    if (n < 2) throw ParameterError("need n >= 2");
    std::vector<int> m(n + 1, 0);
    m[1] = m[2] = 1;
    for (int v = 3; v <= n; ++v) m[v] = law.sample(rng);
    return m;
}

Variant parse_variant(std::string_view s) {
    if (s == "A" || s == "a") return Variant::A;
    if (s == "B" || s == "b") return Variant::B;
    if (s == "D" || s == "d") return Variant::D;
    if (s == "E" || s == "e") return Variant::E;
    if (s == "F" || s == "f") return Variant::F;
    throw ParameterError("unknown model variant: " + std::string(s));
}

const char* variant_name(Variant v) {
    switch (v) {
    case Variant::A: return "A";
    case Variant::B: return "B";
    case Variant::D: return "D";
    case Variant::E: return "E";
    case Variant::F: return "F";
    }
    return "?";
}

int ModelSpec::a1() const {
    int d = 0;
    for (auto [x, y] : initial_edges) d += (x == 1) + (y == 1);
    return d;
}

int ModelSpec::a2() const {
    int d = 0;
    for (auto [x, y] : initial_edges) d += (x == 2) + (y == 2);
    return d;
}

void ModelSpec::validate() const {
    for (auto [x, y] : initial_edges)
        if (x < 1 || x > 2 || y < 1 || y > 2) throw ParameterError("initial edges must lie on {1,2}");
    if (a1() < 1 || a2() < 1) throw ParameterError("initial degrees must be positive");
    if (a1() + a2() != 2 * static_cast<int>(initial_edges.size()))
        throw ParameterError("initial degrees inconsistent with edge count");
    if (!(delta >= -out_degree.min_support() + kDeltaGuard))
        throw ParameterError("delta must exceed -min supp(M)");
    if (!(delta >= -std::min(a1(), a2()) + kDeltaGuard))
        throw ParameterError("delta must exceed -min(a1, a2)");
}

nlohmann::json ModelSpec::to_json() const {
    nlohmann::json e = nlohmann::json::array();
    for (auto [x, y] : initial_edges) e.push_back({x, y});
    return {{"variant", variant_name(variant)},
            {"delta", delta},
            {"out_degree", out_degree.to_json()},
            {"initial_edges", e}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
    ModelSpec s;
    s.variant = parse_variant(j.at("variant").get<std::string>());
    s.delta = j.at("delta");
    s.out_degree = OutDegreeLaw::from_json(j.at("out_degree"));
    s.initial_edges.clear();
    for (const auto& e : j.at("initial_edges")) s.initial_edges.emplace_back(e.at(0), e.at(1));
    return s;
}

DerivedConstants derive_constants(const OutDegreeLaw& law, double delta) {
    if (!(delta >= -law.min_support() + kDeltaGuard))
        throw ParameterError("delta must exceed -min supp(M)");
    const double em = law.mean();
    DerivedConstants c{};
    c.chi = (em + delta) / (2 * em + delta);
    c.phi = (1 - c.chi) / c.chi;
    c.tau_e = 3 + delta / em;
    c.tau = std::min(c.tau_e, law.tail_exponent());
    return c;
}

DerivedConstants derive_constants(const ModelSpec& spec) {
    spec.validate();
    return derive_constants(spec.out_degree, spec.delta);
}

double lambda_fn(double x, double chi) {
    if (!(x > 0.0) || x > 1.0) throw DomainError("lambda needs 0 < x <= 1");
    double y = std::pow(x, 1.0 - chi);
    return (1.0 - y) / y;
}

double sample_log_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
    if (shape >= 1.0) {
        std::gamma_distribution<double> g(shape, 1.0);
        return std::log(g(rng));
    }
    std::gamma_distribution<double> g(shape + 1.0, 1.0);
    return std::log(g(rng)) + std::log(uniform_open(rng)) / shape;
}

double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
    if (!(rate > 0.0)) throw ParameterError("gamma rate must be positive");
    std::gamma_distribution<double> g(shape, 1.0 / rate);
    return g(rng);
}

double sample_beta(double alpha, double beta, Rng& rng) {
    if (!(alpha > 0.0)) throw ParameterError("beta alpha must be positive");
    if (beta == 0.0) return 1.0;
    if (!(beta > 0.0)) throw ParameterError("beta parameter must be non-negative");
    double lx = sample_log_gamma(alpha, rng);
    double ly = sample_log_gamma(beta, rng);
    // x / (x + y) = 1 / (1 + exp(ly - lx))
    double d = ly - lx;
    if (d > 0) {
        double e = std::exp(-d);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(d));
}

}  // namespace pam
