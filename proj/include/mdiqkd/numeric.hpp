#ifndef MDIQKD_NUMERIC_HPP
#define MDIQKD_NUMERIC_HPP

#include <vector>

namespace mdiqkd {

// Sum with a fixed binary-tree shape; the result depends only on the input
// order, never on how the inputs were produced.
double pairwise_sum(const std::vector<double>& v);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept; needs >= 2 distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mdiqkd

#endif  // MDIQKD_NUMERIC_HPP
