// pam: generation, sampling and verification driver.
// Exit codes: 0 ok, 1 usage, 2 parameter, 3 resource, 4 verification failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pam/analytics.hpp"
#include "pam/errors.hpp"
#include "pam/exact_probability.hpp"
#include "pam/generators.hpp"
#include "pam/io.hpp"
#include "pam/neighborhoods.hpp"
#include "pam/polya_urn.hpp"
#include "pam/rppt.hpp"
#include "pam/stats.hpp"

using namespace pam;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParameter = 2;
constexpr int kExitResource = 3;
constexpr int kExitVerification = 4;
constexpr const char* kOutputDirEnv = "PAM_OUTPUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string out;
    bool no_timestamp = false;
    int threads = 0;
    std::uint64_t seed = 1;
};

struct ModelFlags {
    std::string model = "D";
    int n = 1000;
    double delta = 0.0;
    std::string degree_dist = "degenerate:1";
};

void add_model_flags(CLI::App* sub, ModelFlags& m, bool with_model = true) {
    if (with_model)
        sub->add_option("--model", m.model, "A|B|D|E|F|pu-sl|pu-nsl|cpu-sl|cpu-nsl")
            ->capture_default_str();
    sub->add_option("--n", m.n, "number of vertices")->capture_default_str();
    sub->add_option("--delta", m.delta, "additive fitness")->capture_default_str();
    sub->add_option("--degree-dist", m.degree_dist,
                    "degenerate:m | uniform:a,b | zeta:tau[,cutoff] | geometric:p | explicit:k=p,...")
        ->capture_default_str();
}

bool is_urn_model(const std::string& m) {
    return m == "pu-sl" || m == "pu-nsl" || m == "cpu-sl" || m == "cpu-nsl";
}

ModelSpec make_spec(const ModelFlags& f) {
    ModelSpec s;
    s.variant = is_urn_model(f.model) ? Variant::A : parse_variant(f.model);
    s.delta = f.delta;
    s.out_degree = OutDegreeLaw::parse(f.degree_dist);
    s.validate();
    return s;
}

json model_params(const ModelFlags& f) {
    return {{"model", f.model},
            {"n", f.n},
            {"delta", f.delta},
            {"degree_dist", OutDegreeLaw::parse(f.degree_dist).to_json()}};
}

int thread_count(const Common& c) {
    if (c.threads > 0) return c.threads;
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

/// Runs fn(i) for i in [0, count); results are written by index only.
template <class F>
void parallel_for(int count, int threads, F fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!err) err = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

class Output {
public:
    Output(const Common& c, const std::string& command, const char* ext) {
        std::string path = c.out;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
                path = (std::filesystem::path(dir) / (command + ext)).string();
        }
        if (path.empty() || path == "-") {
            os_ = &std::cout;
            dir_ = "-";
            return;
        }
        const auto p = std::filesystem::path(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw ResourceError("cannot open output file " + path);
        os_ = file_.get();
        dir_ = p.has_parent_path() ? p.parent_path().string() : ".";
    }
    std::ostream& os() { return *os_; }
    const std::string& dir() const { return dir_; }
    void close() {
        os_->flush();
        if (!*os_) throw ResourceError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
    std::string dir_;
};

ExperimentConfig make_config(const Common& c, const std::string& command, json params,
                             const Output& out) {
    ExperimentConfig cfg;
    cfg.command = command;
    params["output_dir"] = out.dir();
    cfg.params = std::move(params);
    cfg.seed = c.seed;
    if (!c.no_timestamp) cfg.timestamp = utc_timestamp();
    return cfg;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

std::string fmt(double x) { return format_double(x); }

// generate -------------------------------------------------------------------

struct GenerateArgs {
    ModelFlags model;
    std::string psi_out;
};

void warn_f_exhaustion(const EvolvingGraph& g) {
    int count = 0, first = 0;
    for (int v = 3; v <= g.n; ++v)
        if (g.out_degree[v] >= v - 1) {
            if (count++ == 0) first = v;
        }
    if (count > 0)
        warn("model F: " + std::to_string(count) + " vertices (first v=" + std::to_string(first) +
             ") have m_v >= v-1 and attach once to every older vertex");
}

int cmd_generate(const Common& c, const GenerateArgs& a) {
    const ModelSpec spec = make_spec(a.model);
    if (a.model.n < 2) throw ParameterError("--n must be at least 2");
    if (!a.psi_out.empty() && !is_urn_model(a.model.model))
        throw ParameterError("--psi-out requires an urn model (pu-sl, pu-nsl, cpu-sl, cpu-nsl)");

    EvolvingGraph g;
    std::unique_ptr<UrnState> urn;
    if (is_urn_model(a.model.model)) {
        const std::string& kind = a.model.model;
        Rng mrng = make_stream(c.seed, "out-degrees");
        auto m = sample_out_degrees(spec.out_degree, a.model.n, mrng);
        Rng prng = make_stream(c.seed, "psi");
        Rng arng = make_stream(c.seed, "attach");
        if (kind.rfind("pu-", 0) == 0) {
            const Placement pl = kind == "pu-sl" ? Placement::SL : Placement::NSL;
            auto psi = sample_psi(model_d_schedule(spec, m), prng);
            auto r = build_pu(spec, std::move(m), std::move(psi), pl, arng);
            g = std::move(r.graph);
            urn = std::make_unique<UrnState>(std::move(r.state));
        } else {
            const Placement pl = kind == "cpu-sl" ? Placement::SL : Placement::NSL;
            auto psi = sample_psi(collapsed_schedule(spec, m, pl), prng);
            auto r = build_cpu(spec, std::move(m), std::move(psi), pl, arng);
            g = std::move(r.graph);
            urn = std::make_unique<UrnState>(std::move(r.state));
        }
    } else {
        g = generate(spec, a.model.n, c.seed);
        if (spec.variant == Variant::F) warn_f_exhaustion(g);
    }

    Output out(c, "generate", ".jsonl");
    json params = model_params(a.model);
    if (!a.psi_out.empty()) params["psi_out"] = a.psi_out;
    const auto cfg = make_config(c, "generate", params, out);
    write_graph(out.os(), g, cfg.to_json());
    out.close();
    if (urn) {
        if (!a.psi_out.empty()) {
            std::ofstream ps(a.psi_out, std::ios::binary);
            if (!ps) throw ResourceError("cannot open sidecar " + a.psi_out);
            write_urn_sidecar(ps, *urn);
            if (!ps) throw ResourceError("sidecar write failed");
        }
    }
    return 0;
}

// verify-equivalence ---------------------------------------------------------

struct VerifyArgs {
    ModelFlags model{"A", 3, 0.0, "degenerate:1"};
    double perturb_delta = 0.0;
    double tol = 1e-10;
    int mc_reps = 100000;
    double alpha = 1e-3;
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
    const ModelSpec spec = make_spec(a.model);
    if (spec.variant != Variant::A && spec.variant != Variant::B && spec.variant != Variant::D)
        throw ParameterError("verify-equivalence supports models A, B and D");
    if (a.model.n < 2) throw ParameterError("--n must be at least 2");
    if (a.model.n > kEnumerationBound)
        throw ResourceError("--n exceeds the enumeration bound " +
                            std::to_string(kEnumerationBound));
    const double urn_delta = spec.delta + a.perturb_delta;
    const auto rep = verify_equivalence(spec, a.model.n, urn_delta);

    // Monte Carlo over the urn construction, against the sequential class law.
    ModelSpec urn_spec = spec;
    urn_spec.delta = urn_delta;
    urn_spec.validate();
    const Placement pl = spec.variant == Variant::A ? Placement::SL : Placement::NSL;
    std::map<std::string, double> counts;
    Rng rng = make_stream(c.seed, "verify-mc");
    for (int i = 0; i < a.mc_reps; ++i) {
        auto m = sample_out_degrees(urn_spec.out_degree, a.model.n, rng);
        const EvolvingGraph g = spec.variant == Variant::D
                                    ? build_pu(urn_spec, std::move(m), Placement::NSL, rng).graph
                                    : build_cpu(urn_spec, std::move(m), pl, rng).graph;
        counts[class_key(g)] += 1;
    }
    std::vector<double> obs, probs;
    double unknown = 0.0;
    for (const auto& [key, cnt] : counts) {
        bool found = false;
        for (const auto& r : rep.rows) found = found || r.id == key;
        if (!found) unknown += cnt;
    }
    for (const auto& r : rep.rows) {
        obs.push_back(counts.count(r.id) ? counts.at(r.id) : 0.0);
        probs.push_back(r.sequential);
    }
    const auto chi = a.mc_reps > 0 ? chi2_test(obs, probs)
                                   : Chi2Result{0.0, 0, 1.0};

    Output out(c, "verify-equivalence", ".csv");
    json params = model_params(a.model);
    params["perturb_delta"] = a.perturb_delta;
    params["tol"] = a.tol;
    params["mc_reps"] = a.mc_reps;
    params["alpha"] = a.alpha;
    write_csv_header(out.os(), make_config(c, "verify-equivalence", params, out));
    auto& os = out.os();
    os << "class_id,sequential,urn,closed,abs_diff,mc_count,mc_expected\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        const double d = std::max(std::abs(r.urn - r.sequential), std::abs(r.closed - r.sequential));
        os << '"' << r.id << "\"," << fmt(r.sequential) << ',' << fmt(r.urn) << ',' << fmt(r.closed)
           << ',' << fmt(d) << ',' << fmt(obs[i]) << ',' << fmt(probs[i] * a.mc_reps) << '\n';
    }
    const double worst = std::max(rep.max_abs_diff, rep.max_labelled_diff);
    const double total_err = std::max({std::abs(rep.total_sequential - 1), std::abs(rep.total_urn - 1),
                                       std::abs(rep.total_closed - 1)});
    const bool exact_ok = worst <= a.tol && total_err <= a.tol;
    const bool mc_ok = unknown == 0.0 && chi.pvalue > a.alpha;
    const bool ok = exact_ok && mc_ok;
    const json verdict = {{"verdict", ok ? "PASS" : "FAIL"},
                          {"max_abs_diff", worst},
                          {"max_total_error", total_err},
                          {"classes", rep.rows.size()},
                          {"chi2", chi.stat},
                          {"chi2_df", chi.df},
                          {"chi2_pvalue", chi.pvalue},
                          {"mc_unknown_classes", unknown}};
    os << "# " << verdict.dump() << '\n';
    out.close();
    std::cerr << (ok ? "PASS" : "FAIL") << ": model " << variant_name(spec.variant) << ", n=" << a.model.n
              << ", max abs diff " << worst << ", chi2 p=" << chi.pvalue << '\n';
    return ok ? 0 : kExitVerification;
}

// rppt -----------------------------------------------------------------------

struct RpptArgs {
    ModelFlags model;
    int r = 2;
    int trees = 10;
    int node_cap = 1000000;
};

int cmd_rppt(const Common& c, const RpptArgs& a) {
    const ModelSpec spec = make_spec(a.model);
    if (a.r < 0 || a.trees < 1) throw ParameterError("--r must be >= 0 and --trees >= 1");
    const RpptLaws laws(spec);
    std::vector<MarkedTree> trees(a.trees);
    parallel_for(a.trees, thread_count(c), [&](int i) {
        Rng rng = make_stream(c.seed, "rppt", i);
        trees[i] = sample_rppt(laws, a.r, rng, a.node_cap);
    });
    Output out(c, "rppt", ".csv");
    json params = {{"delta", a.model.delta},
                   {"degree_dist", spec.out_degree.to_json()},
                   {"r", a.r},
                   {"trees", a.trees},
                   {"node_cap", a.node_cap}};
    write_csv_header(out.os(), make_config(c, "rppt", params, out));
    auto& os = out.os();
    os << "tree,label,type,age,gamma,m_minus,d_in,explored,degree\n";
    for (int t = 0; t < a.trees; ++t)
        for (int i = 0; i < trees[t].size(); ++i) {
            const auto& nd = trees[t].nodes[i];
            os << t << ',' << nd.label.to_string() << ',' << node_type_name(nd.type) << ','
               << fmt(nd.age) << ',' << fmt(nd.gamma) << ',' << nd.m_minus << ',' << nd.d_in << ','
               << (nd.explored ? 1 : 0) << ',' << trees[t].degree(i) << '\n';
        }
    out.close();
    return 0;
}

// neighborhood ---------------------------------------------------------------

struct NeighborhoodArgs {
    ModelFlags model;
    std::string graph;
    std::string patterns;
    int r = 1;
    int rppt_trees = 0;
};

EvolvingGraph load_or_generate(const Common& c, const ModelFlags& f, const std::string& path,
                               json& params) {
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ParameterError("cannot open graph file " + path);
        auto gf = read_graph(is);
        params["graph"] = path;
        params["graph_header"] = gf.header;
        return std::move(gf.graph);
    }
    const ModelSpec spec = make_spec(f);
    if (f.n < 2) throw ParameterError("--n must be at least 2");
    params.update(model_params(f));
    if (is_urn_model(f.model)) return generate_urn(spec, f.model, f.n, c.seed);
    auto g = generate(spec, f.n, c.seed);
    if (spec.variant == Variant::F) warn_f_exhaustion(g);
    return g;
}

std::vector<TreePattern> load_patterns(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open pattern file " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad pattern file: ") + e.what());
    }
    std::vector<TreePattern> out;
    try {
        if (j.is_array())
            for (const auto& p : j) out.push_back(TreePattern::from_json(p));
        else
            out.push_back(TreePattern::from_json(j));
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad pattern: ") + e.what());
    }
    return out;
}

int cmd_neighborhood(const Common& c, const NeighborhoodArgs& a) {
    if (a.patterns.empty()) throw ParameterError("--patterns is required");
    if (a.r < 0) throw ParameterError("--r must be >= 0");
    const auto patterns = load_patterns(a.patterns);
    json params = {{"patterns", a.patterns}, {"r", a.r}, {"rppt_trees", a.rppt_trees}};
    const EvolvingGraph g = load_or_generate(c, a.model, a.graph, params);
    const Adjacency adj(g);
    std::vector<std::int64_t> counts(patterns.size());
    std::vector<McEstimate> limits(patterns.size(), McEstimate{0, 0, 0});
    parallel_for(static_cast<int>(patterns.size()), thread_count(c), [&](int i) {
        counts[i] = count_patterns(adj, patterns[i], a.r);
        if (a.rppt_trees > 0)
            limits[i] = rppt_pattern_probability(make_spec(a.model), patterns[i], a.r, a.rppt_trees,
                                                 stream_seed(c.seed, "neighborhood-rppt", i));
    });
    Output out(c, "neighborhood", ".csv");
    write_csv_header(out.os(), make_config(c, "neighborhood", params, out));
    auto& os = out.os();
    os << "pattern_id,n,r,count,fraction";
    if (a.rppt_trees > 0) os << ",rppt_probability,rppt_se";
    os << '\n';
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        os << patterns[i].id << ',' << g.n << ',' << a.r << ',' << counts[i] << ','
           << fmt(static_cast<double>(counts[i]) / g.n);
        if (a.rppt_trees > 0) os << ',' << fmt(limits[i].value) << ',' << fmt(limits[i].se);
        os << '\n';
    }
    out.close();
    return 0;
}

// stats ----------------------------------------------------------------------

struct StatsArgs {
    std::string which = "degree";
    ModelFlags model;
    std::string graph;
    int k_max = 30;
    int seeds = 1;
};

int cmd_stats(const Common& c, const StatsArgs& a) {
    if (a.k_max < 1 || a.seeds < 1) throw ParameterError("--k-max and --seeds must be positive");
    const DegreeLawKind kind = parse_degree_law(a.which == "degree" ? "root" : a.which);
    json params = {{"which", a.which}, {"k_max", a.k_max}, {"seeds", a.seeds}};
    const int reps = a.graph.empty() ? a.seeds : 1;
    std::vector<EmpiricalDegrees> emp(reps);
    std::vector<json> headers(reps);
    ModelSpec spec = make_spec(a.model);
    parallel_for(reps, thread_count(c), [&](int i) {
        Common ci = c;
        ci.seed = c.seed + i;
        json p;
        const EvolvingGraph g = load_or_generate(ci, a.model, a.graph, p);
        if (i == 0) headers[0] = p;
        switch (kind) {
        case DegreeLawKind::Root: emp[i] = empirical_degree_pmf(g, a.k_max); break;
        case DegreeLawKind::Older:
            emp[i].unweighted = empirical_older_neighbor_pmf(g, a.k_max);
            break;
        case DegreeLawKind::Younger:
            emp[i].unweighted = empirical_younger_neighbor_pmf(g, a.k_max);
            break;
        }
    });
    params.update(headers[0]);
    if (!a.graph.empty()) {
        // limit law from the graph's own header when present
        const auto& h = headers[0]["graph_header"];
        if (h.contains("params") && h["params"].contains("delta"))
            spec.delta = h["params"]["delta"].get<double>();
        if (h.contains("params") && h["params"].contains("degree_dist"))
            spec.out_degree = OutDegreeLaw::from_json(h["params"]["degree_dist"]);
    }
    const auto law = degree_law_table(kind, spec, a.k_max);

    Output out(c, "stats", ".csv");
    write_csv_header(out.os(), make_config(c, "stats", params, out));
    auto& os = out.os();
    const bool root = kind == DegreeLawKind::Root;
    os << "k,unweighted" << (root ? ",weighted" : "") << ",p_k\n";
    for (int k = 0; k <= a.k_max; ++k) {
        double u = 0.0, w = 0.0;
        for (const auto& e : emp) {
            u += e.unweighted[k];
            if (root) w += e.weighted[k];
        }
        os << k << ',' << fmt(u / reps);
        if (root) os << ',' << fmt(w / reps);
        os << ',' << fmt(law.pmf[k]) << '\n';
    }
    out.close();
    return 0;
}

// couple ---------------------------------------------------------------------

struct CoupleArgs {
    ModelFlags model{"D", 10000, 0.0, "uniform:1,2"};
    int r = 2;
    int seeds = 5;
    std::string other = "both";
};

int cmd_couple(const Common& c, const CoupleArgs& a) {
    const ModelSpec spec = make_spec(a.model);
    if (a.model.n < 3 || a.r < 0 || a.seeds < 1)
        throw ParameterError("--n >= 3, --r >= 0 and --seeds >= 1 required");
    std::vector<Variant> others;
    if (a.other == "both" || a.other == "E") others.push_back(Variant::E);
    if (a.other == "both" || a.other == "F") others.push_back(Variant::F);
    if (others.empty()) throw ParameterError("--other must be E, F or both");
    const int jobs = static_cast<int>(others.size()) * a.seeds;
    std::vector<double> mismatch(jobs), disagree(jobs);
    parallel_for(jobs, thread_count(c), [&](int i) {
        const Variant v = others[i / a.seeds];
        const auto cg = couple_models(spec, v, a.model.n, c.seed + i % a.seeds);
        mismatch[i] = ball_mismatch_fraction(cg.d, cg.other, a.r);
        disagree[i] = cg.edges ? static_cast<double>(cg.disagreements) / cg.edges : 0.0;
    });
    Output out(c, "couple", ".csv");
    json params = model_params(a.model);
    params.erase("model");
    params["r"] = a.r;
    params["seeds"] = a.seeds;
    params["other"] = a.other;
    write_csv_header(out.os(), make_config(c, "couple", params, out));
    auto& os = out.os();
    os << "other,n,r,seeds,mismatch_mean,mismatch_se,edge_disagreement\n";
    for (std::size_t o = 0; o < others.size(); ++o) {
        const std::vector<double> mm(mismatch.begin() + o * a.seeds,
                                     mismatch.begin() + (o + 1) * a.seeds);
        const std::vector<double> dd(disagree.begin() + o * a.seeds,
                                     disagree.begin() + (o + 1) * a.seeds);
        const auto m = mean_se(mm);
        os << variant_name(others[o]) << ',' << a.model.n << ',' << a.r << ',' << a.seeds << ','
           << fmt(m.mean) << ',' << fmt(m.se) << ',' << fmt(mean_se(dd).mean) << '\n';
    }
    out.close();
    return 0;
}

// concentration --------------------------------------------------------------

struct ConcentrationArgs {
    ModelFlags model{"A", 100000, 1.0, "degenerate:2"};
    int seeds = 100;
    std::string schedule = "collapsed";
    double omega = 0.05;
};

int cmd_concentration(const Common& c, const ConcentrationArgs& a) {
    const ModelSpec spec = make_spec(a.model);
    if (a.model.n < 2 || a.seeds < 1) throw ParameterError("--n >= 2 and --seeds >= 1 required");
    ScheduleKind kind;
    if (a.schedule == "collapsed")
        kind = ScheduleKind::Collapsed;
    else if (a.schedule == "model-d")
        kind = ScheduleKind::ModelD;
    else
        throw ParameterError("--schedule must be collapsed or model-d");
    std::vector<ConcentrationReport> reps(a.seeds);
    parallel_for(a.seeds, thread_count(c), [&](int i) {
        reps[i] = position_concentration_report(spec, a.model.n, {c.seed + i}, kind);
    });
    Output out(c, "concentration", ".csv");
    json params = model_params(a.model);
    params.erase("model");
    params["seeds"] = a.seeds;
    params["schedule"] = a.schedule;
    params["omega"] = a.omega;
    write_csv_header(out.os(), make_config(c, "concentration", params, out));
    auto& os = out.os();
    os << "seed,n,chi,max_abs,max_rel,argmax_abs,within_omega\n";
    int within = 0;
    for (const auto& r : reps)
        for (const auto& row : r.rows) {
            const bool ok = row.max_abs <= a.omega;
            within += ok;
            os << row.seed << ',' << r.n << ',' << fmt(r.chi) << ',' << fmt(row.max_abs) << ','
               << fmt(row.max_rel) << ',' << row.argmax_abs << ',' << (ok ? 1 : 0) << '\n';
        }
    os << "# " << json{{"seeds_within_omega", within}, {"seeds", a.seeds}}.dump() << '\n';
    out.close();
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Preferential attachment models with random out-degrees"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out,
                   std::string("output file; default $") + kOutputDirEnv + "/<command>.<ext> or stdout");
    app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp from output headers");
    app.add_option("--threads", common.threads, "worker threads (default: available cores)");
    app.add_option("--seed", common.seed, "master seed")->capture_default_str();
    auto global = [&](CLI::App* sub) {
        sub->fallthrough();
        return sub;
    };

    GenerateArgs gen;
    auto* s_gen = global(app.add_subcommand("generate", "generate a graph (JSON lines)"));
    add_model_flags(s_gen, gen.model);
    s_gen->add_option("--psi-out", gen.psi_out, "binary sidecar with psi and S (urn models)");

    VerifyArgs ver;
    auto* s_ver = global(app.add_subcommand("verify-equivalence",
                                            "exact and Monte Carlo check of the urn representations"));
    add_model_flags(s_ver, ver.model);
    s_ver->add_option("--perturb-delta", ver.perturb_delta, "shift delta on the urn side")
        ->capture_default_str();
    s_ver->add_option("--tol", ver.tol, "absolute tolerance")->capture_default_str();
    s_ver->add_option("--mc-reps", ver.mc_reps, "Monte Carlo graphs")->capture_default_str();
    s_ver->add_option("--alpha", ver.alpha, "chi-square rejection level")->capture_default_str();

    RpptArgs rp;
    auto* s_rp = global(app.add_subcommand("rppt", "sample Pólya point trees"));
    add_model_flags(s_rp, rp.model, false);
    s_rp->add_option("--r", rp.r, "exploration depth")->capture_default_str();
    s_rp->add_option("--trees", rp.trees, "number of trees")->capture_default_str();
    s_rp->add_option("--node-cap", rp.node_cap, "node bound per tree")->capture_default_str();

    NeighborhoodArgs nb;
    auto* s_nb = global(app.add_subcommand("neighborhood", "count rooted tree patterns"));
    add_model_flags(s_nb, nb.model);
    s_nb->add_option("--graph", nb.graph, "graph file from generate (instead of model flags)");
    s_nb->add_option("--patterns", nb.patterns, "JSON pattern or array of patterns")->required();
    s_nb->add_option("--r", nb.r, "ball radius")->capture_default_str();
    s_nb->add_option("--rppt-trees", nb.rppt_trees, "also estimate the limit probability")
        ->capture_default_str();

    StatsArgs st;
    auto* s_st = global(app.add_subcommand("stats", "empirical degree laws against the limits"));
    s_st->add_option("which", st.which, "degree | older | younger")
        ->check(CLI::IsMember({"degree", "older", "younger"}))
        ->capture_default_str();
    add_model_flags(s_st, st.model);
    s_st->add_option("--graph", st.graph, "graph file from generate (instead of model flags)");
    s_st->add_option("--k-max", st.k_max, "largest degree reported")->capture_default_str();
    s_st->add_option("--seeds", st.seeds, "graphs averaged (seed, seed+1, ...)")->capture_default_str();

    CoupleArgs cp;
    auto* s_cp = global(app.add_subcommand("couple", "couple model D with models E and F"));
    add_model_flags(s_cp, cp.model, false);
    s_cp->add_option("--r", cp.r, "ball radius")->capture_default_str();
    s_cp->add_option("--seeds", cp.seeds, "replicas")->capture_default_str();
    s_cp->add_option("--other", cp.other, "E | F | both")->capture_default_str();

    ConcentrationArgs cc;
    auto* s_cc = global(app.add_subcommand("concentration", "urn position concentration"));
    add_model_flags(s_cc, cc.model, false);
    s_cc->add_option("--seeds", cc.seeds, "replicas")->capture_default_str();
    s_cc->add_option("--schedule", cc.schedule, "collapsed | model-d")->capture_default_str();
    s_cc->add_option("--omega", cc.omega, "deviation threshold")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (common.threads < 0) throw UsageError("--threads must be >= 0");
    if (s_gen->parsed()) return cmd_generate(common, gen);
    if (s_ver->parsed()) return cmd_verify(common, ver);
    if (s_rp->parsed()) return cmd_rppt(common, rp);
    if (s_nb->parsed()) return cmd_neighborhood(common, nb);
    if (s_st->parsed()) return cmd_stats(common, st);
    if (s_cp->parsed()) return cmd_couple(common, cp);
    if (s_cc->parsed()) return cmd_concentration(common, cc);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kExitResource;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    }
}
