#pragma once

#include <vector>

namespace causal {

// P(X > x) for X ~ chi-square with df degrees of freedom.
double chi_squared_survival(double x, double df);

double logistic(double x);

double median(std::vector<double> values);  // ParameterError on empty input

// Ranks 1..n with ties assigned the mean of the covered positions.
std::vector<double> mid_ranks(const std::vector<double>& values);

// Spearman rank correlation; NaN when either side has zero rank variance.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace causal
