#include "mdiqkd/numeric.hpp"

#include <cstddef>

#include "mdiqkd/error.hpp"

namespace mdiqkd {

namespace {

double tree(const double* p, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t h = n / 2;
    return tree(p, h) + tree(p + h, n - h);
}

}  // namespace

double pairwise_sum(const std::vector<double>& v) { return tree(v.data(), v.size()); }

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line needs >= 2 paired points");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("fit_line needs distinct x values");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

}  // namespace mdiqkd
