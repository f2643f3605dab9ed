#ifndef WALSHCTL_SPECTRAL_HPP
#define WALSHCTL_SPECTRAL_HPP

// Scalar figures of merit built on the filter-transfer functions: stopband
// cost integrals, log-log slope estimates of the filter order, and the
// first-order infidelity predicted by the noise-filter overlap integral.

#include <functional>

#include "walshctl/filters.hpp"
#include "walshctl/noise.hpp"

namespace walshctl {

struct CostBand {
    double w_low = 0.0; // 0 means "from DC": realized via a split at 1e-9/tau
    double w_high = 0.1;
    Quadrature quadrature = Quadrature::dephasing;
    // Default density keeps the trapezoid bias below 1e-4 even for the
    // steepest (twelfth-power) filter roll-offs; 200/decade is the floor.
    double points_per_decade = 800.0;

    void validate() const {
        if (!(w_low >= 0.0) || !(w_high > w_low))
            throw std::invalid_argument("CostBand: need 0 <= w_low < w_high");
    }
};

namespace detail {

// Trapezoid rule on a log-spaced grid (exact for constants by construction).
inline double integrate_log_trapezoid(const std::function<double(double)>& f,
                                      double a, double b, double points_per_decade) {
    const auto grid = log_grid(a, b, points_per_decade);
    double acc = 0.0;
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        acc += 0.5 * (grid[i] - grid[i - 1]) * (prev + cur);
        prev = cur;
    }
    return acc;
}

} // namespace detail

// Stopband cost A = int_{w_low}^{w_high} F(w) dw. A band starting at zero is
// integrated from 1e-9/tau upward, plus a power-law extrapolation of the
// remaining mass below the split (negligible for any high-pass filter, but
// accounted for rather than silently dropped).
inline double cost(const ControlSequence& seq, const CostBand& band) {
    band.validate();
    const double ppd = std::max(band.points_per_decade, 200.0);
    const FilterWorkspace ws(seq);
    auto f = [&](double w) {
        return band.quadrature == Quadrature::dephasing
                   ? dephasing_control_vector(ws, w).norm_squared()
                   : amplitude_control_vector(ws, w).norm_squared();
    };
    double lo = band.w_low;
    double tail = 0.0;
    if (lo == 0.0) {
        lo = 1e-9 / seq.duration();
        if (lo >= band.w_high)
            throw std::invalid_argument("CostBand: upper edge below the DC split");
        const double f0 = f(lo);
        const double f1 = f(lo * 1.1);
        if (f0 > 0.0 && f1 > 0.0) {
            const double slope = std::log(f1 / f0) / std::log(1.1);
            if (slope > -0.9)
                tail = f0 * lo / (slope + 1.0);
        }
    }
    return tail + detail::integrate_log_trapezoid(f, lo, band.w_high, ppd);
}

struct OrderEstimate {
    double slope = 0.0;        // d log F / d log w
    double order = 0.0;        // (p - 1) = slope/2 - 1
    double w_low = 0.0;
    double w_high = 0.0;
    double rms_residual = 0.0; // decades
    bool poor_fit = false;     // residual above 0.1 decades
};

// Least-squares log-log slope of the filter function over a band.
inline OrderEstimate filter_order(const ControlSequence& seq, Quadrature quadrature,
                                  double w_low, double w_high,
                                  double points_per_decade = 30.0) {
    if (!(w_low > 0.0) || !(w_high > w_low))
        throw std::invalid_argument("filter_order: need 0 < w_low < w_high");
    const FilterWorkspace ws(seq);
    const auto grid = log_grid(w_low, w_high, points_per_decade);
    std::vector<double> lx, ly;
    lx.reserve(grid.size());
    ly.reserve(grid.size());
    for (double w : grid) {
        const double f = quadrature == Quadrature::dephasing
                             ? dephasing_control_vector(ws, w).norm_squared()
                             : amplitude_control_vector(ws, w).norm_squared();
        if (f > 0.0) {
            lx.push_back(std::log10(w));
            ly.push_back(std::log10(f));
        }
    }
    if (lx.size() < 3)
        throw numeric_error("filter_order: filter vanishes over the band");
    const LineFit fit = fit_line(lx, ly);
    OrderEstimate est;
    est.slope = fit.slope;
    est.order = fit.slope / 2.0 - 1.0;
    est.w_low = w_low;
    est.w_high = w_high;
    est.rms_residual = fit.rms_residual;
    est.poor_fit = fit.rms_residual > 0.1;
    return est;
}

struct OrderPoint {
    double w = 0.0;
    double p_star = 0.0; // local slope / 2
};

// Instantaneous filter order across a band: centered log-log derivative of F
// at interior grid points, divided by two.
inline std::vector<OrderPoint> instantaneous_order(const ControlSequence& seq,
                                                   Quadrature quadrature,
                                                   double w_low, double w_high,
                                                   double points_per_decade = 50.0) {
    if (!(w_low > 0.0) || !(w_high > w_low))
        throw std::invalid_argument("instantaneous_order: need 0 < w_low < w_high");
    const FilterWorkspace ws(seq);
    const auto grid = log_grid(w_low, w_high, points_per_decade);
    std::vector<double> lf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = quadrature == Quadrature::dephasing
                             ? dephasing_control_vector(ws, grid[i]).norm_squared()
                             : amplitude_control_vector(ws, grid[i]).norm_squared();
        lf[i] = f > 0.0 ? std::log10(f) : -400.0;
    }
    std::vector<OrderPoint> out;
    out.reserve(grid.size() - 2);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double dlw = std::log10(grid[i + 1] / grid[i - 1]);
        out.push_back({grid[i], (lf[i + 1] - lf[i - 1]) / dlw / 2.0});
    }
    return out;
}

struct InfidelityPrediction {
    double value = 0.0;
    double dephasing_part = 0.0;
    double amplitude_part = 0.0;
    bool divergence_flag = false;
};

namespace detail {

// Overlap (1/2pi) int S(w) F(w) / w^2 dw over the PSD support band.
inline double overlap_integral(const std::function<double(double)>& filter,
                               const NoiseModel& model, double points_per_decade) {
    if (model.amplitude == 0.0) return 0.0;
    auto integrand = [&](double w) { return model.psd(w) * filter(w) / (w * w); };
    if (model.w_low > 0.0)
        return integrate_log_trapezoid(integrand, model.w_low, model.w_high,
                                       points_per_decade) / two_pi;
    // Band reaching DC: the integrand stays finite (F ~ w^2 or faster), so a
    // dense linear grid over [0, w_high] is adequate; the w = 0 endpoint is
    // evaluated just above zero.
    const int n = 4000;
    const double h = model.w_high / n;
    double acc = 0.5 * (integrand(1e-12 * model.w_high) + integrand(model.w_high));
    for (int i = 1; i < n; ++i)
        acc += integrand(h * i);
    return acc * h / two_pi;
}

} // namespace detail

// First-order infidelity <a_1^2> from the noise-filter overlap, summed over
// the supplied noise models (each applied to its own quadrature's filter).
inline InfidelityPrediction predicted_infidelity(const ControlSequence& seq,
                                                 const std::vector<NoiseModel>& models,
                                                 double points_per_decade = 400.0) {
    const FilterWorkspace ws(seq);
    InfidelityPrediction out;
    for (const NoiseModel& m : models) {
        m.validate();
        if (m.quadrature == Quadrature::dephasing) {
            auto f = [&](double w) { return dephasing_control_vector(ws, w).norm_squared(); };
            out.dephasing_part += detail::overlap_integral(f, m, points_per_decade);
        } else {
            auto f = [&](double w) { return amplitude_control_vector(ws, w).norm_squared(); };
            out.amplitude_part += detail::overlap_integral(f, m, points_per_decade);
        }
    }
    out.value = out.dephasing_part + out.amplitude_part;
    return out;
}

// Overlap prediction on precomputed filter samples. The PSD support must be
// covered by the sample grid; mass falling outside raises the divergence
// flag when the edge integrand is not yet negligible.
inline InfidelityPrediction predicted_infidelity(const FilterSamples& samples,
                                                 const std::vector<NoiseModel>& models) {
    if (samples.omega.size() < 2)
        throw std::invalid_argument("predicted_infidelity: need at least 2 samples");
    InfidelityPrediction out;
    for (const NoiseModel& m : models) {
        m.validate();
        const std::vector<double>& f =
            m.quadrature == Quadrature::dephasing ? samples.f_z : samples.f_omega;
        std::vector<double> g(samples.omega.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = samples.omega[i];
            g[i] = m.psd(w) * f[i] / (w * w);
            peak = std::max(peak, g[i]);
        }
        double acc = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i)
            acc += 0.5 * (samples.omega[i] - samples.omega[i - 1]) * (g[i] + g[i - 1]);
        acc /= two_pi;
        const bool uncovered_low = m.w_low < samples.omega.front() * (1.0 - 1e-12);
        const bool uncovered_high = m.w_high > samples.omega.back() * (1.0 + 1e-12);
        if ((uncovered_low && g.front() > 1e-3 * peak) ||
            (uncovered_high && g.back() > 1e-3 * peak))
            out.divergence_flag = true;
        if (m.quadrature == Quadrature::dephasing)
            out.dephasing_part += acc;
        else
            out.amplitude_part += acc;
    }
    out.value = out.dephasing_part + out.amplitude_part;
    return out;
}

} // namespace walshctl

#endif
