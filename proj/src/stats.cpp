#include "pam/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "pam/errors.hpp"

namespace pam {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw ParameterError("empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_pvalue(double d, int n) {
    if (n < 1) throw ParameterError("n must be positive");
    const double sn = std::sqrt(static_cast<double>(n));
    const double x = (sn + 0.12 + 0.11 / sn) * d;
    if (x < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-300) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

double chi2_pvalue(double stat, int df) {
    if (df < 1) throw ParameterError("df must be positive");
    if (stat <= 0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

Chi2Result chi2_test(const std::vector<double>& counts, const std::vector<double>& probs,
                     double min_expected) {
    if (counts.size() != probs.size() || counts.empty()) throw ParameterError("size mismatch");
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0) throw ParameterError("no observations");
    double stat = 0.0, pool_obs = 0.0, pool_exp = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = probs[i] * total;
        if (e < min_expected) {
            pool_obs += counts[i];
            pool_exp += e;
            continue;
        }
        stat += (counts[i] - e) * (counts[i] - e) / e;
        ++cells;
    }
    if (pool_exp > 0) {
        stat += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
        ++cells;
    } else if (pool_obs > 0) {
        stat = INFINITY;
    }
    const int df = std::max(1, cells - 1);
    return {stat, df, std::isinf(stat) ? 0.0 : chi2_pvalue(stat, df)};
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

MeanSe mean_se(const std::vector<double>& x) {
    if (x.empty()) throw ParameterError("empty sample");
    double m = 0.0;
    for (double v : x) m += v;
    m /= x.size();
    if (x.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (x.size() - 1) / x.size())};
}

}  // namespace pam
