#pragma once

#include <cstddef>
#include <vector>

#include "brt/errors.hpp"

namespace brt {

// Upper regularised incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// Survival function of the chi-square distribution with k degrees of freedom.
double chi2_sf(double x, int dof);
// Kolmogorov distribution tail Q_KS(lambda) = 2 sum_j (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

// Goodness-of-fit p-value of integer counts against Poisson(mean); bins are
// merged from the tails so every expected count is at least 5.
double chi_square_poisson(const std::vector<std::size_t>& counts, double mean);

// Counts on {1,2,...} against the geometric law with the given mean
// (success probability 1/mean).
double ks_geometric(const std::vector<std::size_t>& counts, double mean);
double chi_square_geometric(const std::vector<std::size_t>& counts, double mean);

// Two-sample Kolmogorov-Smirnov p-value.
double two_sample_ks(std::vector<double> xs, std::vector<double> ys);

struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};
MeanStdErr mean_std_error(const std::vector<double>& values);

} // namespace brt
