#ifndef WALSHCTL_COMMON_HPP
#define WALSHCTL_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace walshctl {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Noise quadrature a quantity refers to: dephasing (along sigma_z) or
// amplitude (multiplicative on the drive).
enum class Quadrature { dephasing, amplitude };

// Thrown when a numerical routine cannot produce a trustworthy result
// (divergent integrand, violated step-size bound, ...). The CLI maps this
// to exit code 3, while std::invalid_argument / std::domain_error map to 2.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Log-spaced grid from w_min to w_max with a fixed density per decade.
// Both endpoints are included; at least two points are produced.
inline std::vector<double> log_grid(double w_min, double w_max, double points_per_decade) {
    if (!(w_min > 0.0) || !(w_max > w_min))
        throw std::invalid_argument("log_grid: need 0 < w_min < w_max");
    if (!(points_per_decade > 0.0))
        throw std::invalid_argument("log_grid: points per decade must be positive");
    const double decades = std::log10(w_max / w_min);
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1);
    std::vector<double> grid(n);
    const double step = decades / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = w_min * std::pow(10.0, step * static_cast<double>(i));
    grid.front() = w_min;
    grid.back() = w_max;
    return grid;
}

// Least-squares slope of y against x. Returns {slope, intercept, rms_residual}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need two or more paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

} // namespace walshctl

#endif
