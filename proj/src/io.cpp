#include "pam/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <istream>
#include <ostream>

#include "pam/errors.hpp"

namespace pam {

namespace {

constexpr char kMagic[8] = {'P', 'A', 'M', 'U', 'R', 'N', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t x) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> b;
    if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw ParameterError("truncated sidecar");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

void put_double(std::ostream& os, double d) {
    std::uint64_t x;
    std::memcpy(&x, &d, 8);
    put_u64(os, x);
}

double get_double(std::istream& is) {
    const std::uint64_t x = get_u64(is);
    double d;
    std::memcpy(&d, &x, 8);
    return d;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j = {{"command", command}, {"params", params}, {"seed", seed}};
    if (!timestamp.empty()) j["timestamp"] = timestamp;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.command = j.at("command").get<std::string>();
        c.params = j.at("params");
        if (!c.params.is_object()) throw ParameterError("params must be an object");
        c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("timestamp")) c.timestamp = j.at("timestamp").get<std::string>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("bad config record: ") + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_graph(std::ostream& os, const EvolvingGraph& g, const nlohmann::json& header) {
    nlohmann::json h = header;
    h["format"] = "pam-graph";
    h["n"] = g.n;
    h["a1"] = g.a1;
    h["a2"] = g.a2;
    h["out_degrees"] = std::vector<int>(g.out_degree.begin() + 1, g.out_degree.end());
    os << h.dump() << '\n';
    char buf[96];
    for (const auto* list : {&g.initial_edges, &g.edges})
        for (const auto& e : *list) {
            const int len = std::snprintf(buf, sizeof buf, "{\"v\":%d,\"j\":%d,\"u\":%d}\n", e.source,
                                          e.index, e.target);
            os.write(buf, len);
        }
}

GraphFile read_graph(std::istream& is) {
    GraphFile f;
    std::string line;
    if (!std::getline(is, line)) throw ParameterError("empty graph file");
    try {
        f.header = nlohmann::json::parse(line);
        if (f.header.value("format", "") != "pam-graph") throw ParameterError("not a graph file");
        EvolvingGraph& g = f.graph;
        g.n = f.header.at("n").get<int>();
        g.a1 = f.header.at("a1").get<int>();
        g.a2 = f.header.at("a2").get<int>();
        const auto m = f.header.at("out_degrees").get<std::vector<int>>();
        if (static_cast<int>(m.size()) != g.n) throw ParameterError("out-degree count mismatch");
        g.out_degree.assign(1, 0);
        g.out_degree.insert(g.out_degree.end(), m.begin(), m.end());
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto r = nlohmann::json::parse(line);
            Edge e{r.at("v").get<int>(), r.at("j").get<int>(), r.at("u").get<int>()};
            if (e.source < 1 || e.source > g.n || e.target < 1 || e.target > g.n)
                throw ParameterError("edge endpoint out of range");
            (e.index == 0 ? g.initial_edges : g.edges).push_back(e);
        }
        g.degree = g.recompute_degrees();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("bad graph file: ") + e.what());
    }
    return f;
}

void write_urn_sidecar(std::ostream& os, const UrnState& s) {
    const int n = s.size();
    os.write(kMagic, 8);
    put_u64(os, static_cast<std::uint64_t>(n));
    for (int k = 1; k <= n; ++k) put_double(os, s.psi[k]);
    for (int k = 0; k <= n; ++k) put_double(os, s.S[k]);
}

UrnState read_urn_sidecar(std::istream& is) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw ParameterError("not an urn sidecar");
    const std::uint64_t n = get_u64(is);
    if (n > (1ULL << 32)) throw ParameterError("sidecar size out of range");
    UrnState s;
    s.psi.assign(n + 1, 0.0);
    s.S.assign(n + 1, 0.0);
    for (std::uint64_t k = 1; k <= n; ++k) s.psi[k] = get_double(is);
    for (std::uint64_t k = 0; k <= n; ++k) s.S[k] = get_double(is);
    return s;
}

void write_csv_header(std::ostream& os, const ExperimentConfig& cfg) {
    os << "# " << cfg.to_json().dump() << '\n';
}

ExperimentConfig read_csv_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw ParameterError("missing config header");
    try {
        return ExperimentConfig::from_json(nlohmann::json::parse(line.substr(2)));
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("bad config header: ") + e.what());
    }
}

std::string format_double(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

}  // namespace pam
