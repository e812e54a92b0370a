#pragma once
#include <functional>
#include <vector>

namespace pam {

/// sup |F_n - F| of the sample against a continuous cdf. Sorts a copy.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double ks_pvalue(double d, int n);
/// Upper tail of chi-square with `df` degrees of freedom.
double chi2_pvalue(double stat, int df);

struct Chi2Result {
    double stat;
    int df;
    double pvalue;
};
/// Pearson test of counts against probabilities; cells with expected count
/// below `min_expected` are pooled into one.
Chi2Result chi2_test(const std::vector<double>& counts, const std::vector<double>& probs,
                     double min_expected = 5.0);

/// 1/2 sum |p - q| over the common index range plus the unmatched tails.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

struct MeanSe {
    double mean;
    double se;
};
MeanSe mean_se(const std::vector<double>& x);

}  // namespace pam
