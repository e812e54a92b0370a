#pragma once
#include <json.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/polya_urn.hpp"

namespace pam {

/// Provenance record carried by every output: command, parameters, master
/// seed and an optional timestamp.
struct ExperimentConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string timestamp;  // empty when suppressed

    nlohmann::json to_json() const;
    /// Throws ParameterError on a malformed record.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Line-oriented JSON: one header record, then one record {"v","j","u"} per
/// directed edge in creation order (initial edges first, with j = 0).
void write_graph(std::ostream& os, const EvolvingGraph& g, const nlohmann::json& header);
struct GraphFile {
    nlohmann::json header;
    EvolvingGraph graph;
};
GraphFile read_graph(std::istream& is);

/// 8-byte magic, uint64 N, psi_1..psi_N, S_0..S_N; little-endian doubles.
void write_urn_sidecar(std::ostream& os, const UrnState& s);
UrnState read_urn_sidecar(std::istream& is);

/// "# {json}" comment line.
void write_csv_header(std::ostream& os, const ExperimentConfig& cfg);
ExperimentConfig read_csv_header(std::istream& is);

/// Shortest decimal that round-trips a double.
std::string format_double(double x);

}  // namespace pam
