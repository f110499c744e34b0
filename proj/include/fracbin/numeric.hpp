#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fracbin/errors.hpp"

namespace fracbin {

// Neumaier-compensated accumulator. Keeps the running error of the naive
// sum in a second double, so alternating sums with heavy cancellation stay
// accurate to ~eps * sum |x_i|.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// sum_{j=1}^{len} a[j] * b[len + 1 - j], i.e. the discrete convolution of
// two sequences stored from index 1, evaluated at lag len + 1. Plain sums
// inside fixed-size blocks (vectorizable), Neumaier across blocks.
inline double convolve_at(const double* a, const double* b, std::int64_t len) {
    constexpr std::int64_t kBlock = 1024;
    NeumaierSum total;
    std::int64_t j = 1;
    while (j <= len) {
        const std::int64_t end = std::min(len, j + kBlock - 1);
        double s = 0.0;
        for (std::int64_t i = j; i <= end; ++i) s += a[i] * b[len + 1 - i];
        total.add(s);
        j = end + 1;
    }
    return total.value();
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y ~ intercept + slope * x, with the usual
// residual-based standard error of the slope.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t m = x.size();
    if (m != y.size() || m < 3) throw GuardError("fit_line: need at least 3 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw GuardError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = m;
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    return f;
}

// Geometrically spaced integers in [lo, hi], deduplicated, ascending.
inline std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, int count) {
    if (lo < 1 || hi < lo || count < 2) throw GuardError("geometric_grid: bad range");
    std::vector<std::int64_t> out;
    const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo)) /
                         static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        const auto k = static_cast<std::int64_t>(
            std::llround(static_cast<double>(lo) * std::exp(ratio * i)));
        if (out.empty() || k > out.back()) out.push_back(std::min(k, hi));
    }
    return out;
}

// Median of an unsorted range (copies, then nth_element).
inline double median_of(std::vector<double> v) {
    if (v.empty()) throw GuardError("median_of: empty");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

}  // namespace fracbin
