// Small statistics toolbox: incomplete gamma, chi-square tails, quantiles,
// least-squares slope. Enough for the goodness-of-fit and regularity checks;
// not a general-purpose stats library.
#ifndef MDP_STATS_HPP
#define MDP_STATS_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace mdp {

// Regularized lower incomplete gamma P(a,x); Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic with `df` degrees of freedom.
// df == 0 is the degenerate single-cell case and returns 1.
double chi_square_pvalue(double stat, std::int64_t df);

// Pearson statistic against given expected counts (must be positive).
double chi_square_stat(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected);

// Quantile of a sample by linear interpolation; qu in [0,1]. Sorts a copy.
double quantile(std::vector<double> values, double qu);
inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

// Slope and intercept of the least-squares line through (x_i, y_i).
std::pair<double, double> least_squares_slope(const std::vector<double>& x,
                                              const std::vector<double>& y);

double mean(const std::vector<double>& values);
double sample_sd(const std::vector<double>& values);

}  // namespace mdp

#endif  // MDP_STATS_HPP
