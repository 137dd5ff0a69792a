#pragma once
// Small statistics helpers for the Monte Carlo checks: sample moments and a
// chi-square goodness-of-fit p-value (regularized incomplete gamma).

#include <cstddef>
#include <vector>

namespace treelim {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // unbiased, 0 if size < 2
double sample_sd(const std::vector<double>& xs);

// Upper regularized incomplete gamma Q(a, x); series + continued fraction.
double regularized_gamma_q(double a, double x);

// P(X >= stat) for X ~ chi-square with dof degrees of freedom.
double chi_square_pvalue(double stat, int dof);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double pvalue = 1.0;
};

// Goodness of fit of observed counts against expected class probabilities.
// Classes with zero expected probability must have zero observed count.
ChiSquareResult chi_square_gof(const std::vector<long long>& observed,
                               const std::vector<double>& expected_probs);

// Homogeneity test for two samples of counts over the same categories.
ChiSquareResult chi_square_homogeneity(const std::vector<long long>& a,
                                       const std::vector<long long>& b);

}  // namespace treelim
