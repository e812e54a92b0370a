#pragma once
#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pam/rng.hpp"

namespace pam {

/// Guard used for the strict inequality delta > -inf supp(M).
inline constexpr double kDeltaGuard = 1e-9;

enum class LawKind { Degenerate, UniformRange, TruncatedZeta, Geometric, Explicit };

/// Law of the i.i.d. out-degrees. Stored as a finite pmf table in all cases;
/// the geometric law is cut where the remaining tail drops below 1e-18.
class OutDegreeLaw {
public:
    static OutDegreeLaw degenerate(int m);
    static OutDegreeLaw uniform_range(int a, int b);
    static OutDegreeLaw truncated_zeta(double exponent, int cutoff = 1000000);
    static OutDegreeLaw geometric(double p);
    static OutDegreeLaw explicit_pmf(const std::map<int, double>& table);

    /// Compact form ("degenerate:2", "uniform:1,2", "zeta:2.5,1000",
    /// "geometric:0.4", "pmf:2=0.5,5=0.5") or a key=value block
    /// ("kind=uniform\na=1\nb=2").
    static OutDegreeLaw parse(std::string_view text);
    static OutDegreeLaw from_json(const nlohmann::json& j);

    LawKind kind() const { return kind_; }
    double pmf(int m) const;
    int min_support() const { return values_.front(); }
    int max_support() const { return values_.back(); }
    double mean() const { return mean_; }
    double moment(double p) const;
    /// Exponent tau_M of P(M=t) ~ t^{-tau_M}; +inf for light-tailed kinds.
    double tail_exponent() const;
    bool is_degenerate() const { return values_.size() == 1; }

    const std::vector<int>& support() const { return values_; }
    const std::vector<double>& probabilities() const { return probs_; }

    int sample(Rng& rng) const;

    nlohmann::json to_json() const;
    std::string describe() const;

private:
    OutDegreeLaw(LawKind kind, std::vector<double> params, std::vector<int> values,
                 std::vector<double> probs);

    LawKind kind_;
    std::vector<double> params_;
    std::vector<int> values_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
    double mean_ = 0.0;
};

/// pmf(m) proportional to (m + delta) pmf_M(m). delta = 0 gives M^{(0)}.
OutDegreeLaw size_biased_law(const OutDegreeLaw& law, double delta);

/// Sequence m_1..m_n stored 1-based (index 0 unused) with m_1 = m_2 = 1.
std::vector<int> sample_out_degrees(const OutDegreeLaw& law, int n, Rng& rng);

enum class Variant { A, B, D, E, F };

Variant parse_variant(std::string_view s);
const char* variant_name(Variant v);

struct ModelSpec {
    Variant variant = Variant::A;
    double delta = 0.0;
    OutDegreeLaw out_degree = OutDegreeLaw::degenerate(1);
    /// Edges of the initial graph on {1,2}; self-loops allowed.
    std::vector<std::pair<int, int>> initial_edges{{2, 1}};

    int a1() const;
    int a2() const;
    int a_sum() const { return a1() + a2(); }

    /// Throws ParameterError when the spec is inconsistent.
    void validate() const;

    nlohmann::json to_json() const;
    static ModelSpec from_json(const nlohmann::json& j);
};

struct DerivedConstants {
    double chi;
    double phi;
    double tau_e;
    double tau;
};

DerivedConstants derive_constants(const ModelSpec& spec);
DerivedConstants derive_constants(const OutDegreeLaw& law, double delta);

/// lambda(x) = (1 - x^{1-chi}) / x^{1-chi}.
double lambda_fn(double x, double chi);

double sample_gamma(double shape, double rate, Rng& rng);
/// log of a Gamma(shape, 1) variate; stays finite for tiny shapes.
double sample_log_gamma(double shape, Rng& rng);
/// beta == 0 returns exactly 1.
double sample_beta(double alpha, double beta, Rng& rng);

}  // namespace pam
