#ifndef WALSHCTL_FILTERS_HPP
#define WALSHCTL_FILTERS_HPP

// Frequency-domain control vectors and filter-transfer functions for
// piecewise-constant control sequences, in both noise quadratures.
//
// Conventions: a time-domain response R(t) maps to frequency space as
// R(w) = -iw int_0^tau e^{iwt} R(t) dt. For one segment of Rabi rate W,
// duration s and phase phi, the dephasing-quadrature row evaluates to
//   R_z(w) = w/(w^2 - W^2) * (sin(phi) B, -cos(phi) B, V),
//   B(w) = iW e^{iws} cos(Ws) + w e^{iws} sin(Ws) - iW,
//   V(w) = iW e^{iws} sin(Ws) - w e^{iws} cos(Ws) + w.
// Both numerators vanish at w = W, making the pole removable; inside a
// relative guard band the ratio is evaluated by a series about w = W.

#include <algorithm>
#include <complex>
#include <thread>

#include "walshctl/common.hpp"
#include "walshctl/control.hpp"

namespace walshctl {

struct ControlVector {
    std::array<cplx, 3> v{};
    Quadrature quadrature = Quadrature::dephasing;

    double norm_squared() const {
        return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
    }
};

namespace detail {

// Row-vector times 3x3 matrix.
inline std::array<cplx, 3> row_times(const std::array<cplx, 3>& r, const HistoryMatrix& m) {
    std::array<cplx, 3> out{};
    for (int j = 0; j < 3; ++j)
        out[j] = r[0] * m(0, j) + r[1] * m(1, j) + r[2] * m(2, j);
    return out;
}

// {w B(w)/(w^2-W^2), w V(w)/(w^2-W^2)} with the removable singularity at
// w = W handled by a third-order series in (w - W).
inline std::pair<cplx, cplx> z_row_ratios(double W, double s, double w) {
    const double guard = 1e-6 * W;
    if (W > 0.0 && std::abs(w - W) < guard) {
        const double theta = W * s;
        const double ct = std::cos(theta), st = std::sin(theta);
        const cplx eit(ct, st);
        const cplx is(0.0, s);
        // Derivatives of B and V at w = W.
        const cplx b1 = eit * st - theta;
        const cplx b2 = is * (2.0 * eit * st - theta);
        const cplx b3 = -s * s * (3.0 * eit * st - theta);
        const cplx v1 = 1.0 - eit * ct - cplx(0.0, theta);
        const cplx v2 = s * theta - 2.0 * is * eit * ct;
        const cplx v3 = s * s * (cplx(0.0, theta) + 3.0 * eit * ct);
        const double d = w - W;
        const double front = w / (w + W);
        const cplx fb = front * (b1 + b2 * (d / 2.0) + b3 * (d * d / 6.0));
        const cplx fv = front * (v1 + v2 * (d / 2.0) + v3 * (d * d / 6.0));
        return {fb, fv};
    }
    const double theta = W * s;
    const double ct = std::cos(theta), st = std::sin(theta);
    const cplx eiws = std::polar(1.0, w * s);
    const cplx iW(0.0, W);
    const cplx b = iW * eiws * ct + w * eiws * st - iW;
    const cplx v = iW * eiws * st - w * eiws * ct + w;
    const double pref = w / (w * w - W * W);
    return {pref * b, pref * v};
}

} // namespace detail

// Dephasing-quadrature spectral row of a single segment (history not applied).
inline ControlVector local_z_row(const Segment& s, double w) {
    if (!(w > 0.0))
        throw std::domain_error("local_z_row: frequency must be positive");
    const auto [fb, fv] = detail::z_row_ratios(s.omega, s.tau, w);
    ControlVector r;
    r.quadrature = Quadrature::dephasing;
    r.v = {std::sin(s.phi) * fb, -std::cos(s.phi) * fb, fv};
    return r;
}

// Precomputed per-sequence state shared by grid evaluations.
struct FilterWorkspace {
    std::vector<Segment> segments;
    std::vector<double> t;                // boundary times
    std::vector<HistoryMatrix> lambdas;   // Lambda^{(l-1)} for l = 1..n

    explicit FilterWorkspace(const ControlSequence& seq)
        : segments(seq.segments), t(seq.boundaries()) {
        const auto q = cumulative_operators(seq);
        lambdas.reserve(seq.size());
        for (std::size_t l = 0; l < seq.size(); ++l)
            lambdas.push_back(history_matrix(q[l]));
    }
};

inline ControlVector dephasing_control_vector(const FilterWorkspace& ws, double w) {
    if (!(w > 0.0))
        throw std::domain_error("dephasing_control_vector: frequency must be positive");
    std::array<cplx, 3> acc{};
    for (std::size_t l = 0; l < ws.segments.size(); ++l) {
        const Segment& s = ws.segments[l];
        const auto [fb, fv] = detail::z_row_ratios(s.omega, s.tau, w);
        const std::array<cplx, 3> row{std::sin(s.phi) * fb, -std::cos(s.phi) * fb, fv};
        const auto rotated = detail::row_times(row, ws.lambdas[l]);
        const cplx phase = std::polar(1.0, w * ws.t[l]);
        for (int j = 0; j < 3; ++j)
            acc[j] += phase * rotated[j];
    }
    ControlVector r;
    r.quadrature = Quadrature::dephasing;
    r.v = acc;
    return r;
}

inline ControlVector amplitude_control_vector(const FilterWorkspace& ws, double w) {
    if (!(w > 0.0))
        throw std::domain_error("amplitude_control_vector: frequency must be positive");
    std::array<cplx, 3> acc{};
    for (std::size_t l = 0; l < ws.segments.size(); ++l) {
        const Segment& s = ws.segments[l];
        const std::array<cplx, 3> proj{0.5 * s.omega * std::cos(s.phi),
                                       0.5 * s.omega * std::sin(s.phi), 0.0};
        const auto rotated = detail::row_times(proj, ws.lambdas[l]);
        const cplx bracket = std::polar(1.0, w * ws.t[l]) - std::polar(1.0, w * ws.t[l + 1]);
        for (int j = 0; j < 3; ++j)
            acc[j] += bracket * rotated[j];
    }
    ControlVector r;
    r.quadrature = Quadrature::amplitude;
    r.v = acc;
    return r;
}

inline ControlVector dephasing_control_vector(const ControlSequence& seq, double w) {
    return dephasing_control_vector(FilterWorkspace(seq), w);
}

inline ControlVector amplitude_control_vector(const ControlSequence& seq, double w) {
    return amplitude_control_vector(FilterWorkspace(seq), w);
}

struct FilterSamples {
    std::vector<double> omega; // ascending, positive, rad/time
    std::vector<double> f_z;
    std::vector<double> f_omega;
    std::string label;
};

// Filter-transfer functions over a frequency grid: F = |R|^2 per quadrature.
// Points are independent; n_threads > 1 splits the grid (results identical
// to the serial evaluation since every point lands in a fixed slot).
inline FilterSamples filter_functions(const ControlSequence& seq,
                                      const std::vector<double>& grid,
                                      unsigned n_threads = 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw std::invalid_argument("filter_functions: grid must be ascending and positive");
    }
    const FilterWorkspace ws(seq);
    FilterSamples out;
    out.omega = grid;
    out.label = seq.label;
    out.f_z.resize(grid.size());
    out.f_omega.resize(grid.size());
    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            out.f_z[i] = dephasing_control_vector(ws, grid[i]).norm_squared();
            out.f_omega[i] = amplitude_control_vector(ws, grid[i]).norm_squared();
        }
    };
    if (n_threads <= 1 || grid.size() < 64) {
        eval_range(0, grid.size());
    } else {
        const unsigned workers = std::min<unsigned>(n_threads, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        const std::size_t chunk = (grid.size() + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(grid.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

// Diagnostics from the low-frequency polynomial fit behind taylor_coefficient.
struct TaylorFitInfo {
    double rms_relative_residual = 0.0;
    bool ill_conditioned = false;
    std::array<double, 5> coefficients{}; // C_2, C_4, ..., C_10
};

namespace detail {

// Weighted least squares via modified Gram-Schmidt QR on the column-scaled
// design matrix. Rows: F_i / F_i = sum_j c_j x_i^j / F_i.
inline std::array<double, 5> fit_even_polynomial(const std::vector<double>& x,
                                                 const std::vector<double>& f,
                                                 double* rms_rel_residual) {
    constexpr int n_basis = 5;
    std::vector<std::array<double, n_basis>> a;
    std::vector<double> b;
    a.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(f[i] > 0.0) || !std::isfinite(f[i]))
            continue; // exact zeros carry no relative information
        std::array<double, n_basis> row;
        double p = x[i];
        for (int j = 0; j < n_basis; ++j, p *= x[i])
            row[j] = p / f[i];
        a.push_back(row);
        b.push_back(1.0);
    }
    if (a.size() < n_basis + 2)
        throw numeric_error("taylor fit: too few usable samples");

    std::array<double, n_basis> scale{};
    for (int j = 0; j < n_basis; ++j) {
        double m = 0.0;
        for (const auto& row : a) m = std::max(m, std::abs(row[j]));
        scale[j] = m > 0.0 ? m : 1.0;
    }
    for (auto& row : a)
        for (int j = 0; j < n_basis; ++j)
            row[j] /= scale[j];

    // Modified Gram-Schmidt: a = q r with q stored in place.
    std::array<std::array<double, n_basis>, n_basis> r{};
    for (int j = 0; j < n_basis; ++j) {
        for (int k = 0; k < j; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i][k] * a[i][j];
            r[k][j] = dot;
            for (std::size_t i = 0; i < a.size(); ++i) a[i][j] -= dot * a[i][k];
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) nrm += a[i][j] * a[i][j];
        nrm = std::sqrt(nrm);
        if (nrm < 1e-14)
            throw numeric_error("taylor fit: rank-deficient design matrix");
        r[j][j] = nrm;
        for (std::size_t i = 0; i < a.size(); ++i) a[i][j] /= nrm;
    }
    std::array<double, n_basis> qtb{};
    for (int j = 0; j < n_basis; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += a[i][j] * b[i];
        qtb[j] = dot;
    }
    std::array<double, n_basis> c{};
    for (int j = n_basis - 1; j >= 0; --j) {
        double acc = qtb[j];
        for (int k = j + 1; k < n_basis; ++k) acc -= r[j][k] * c[k];
        c[j] = acc / r[j][j];
    }
    for (int j = 0; j < n_basis; ++j)
        c[j] /= scale[j];

    if (rms_rel_residual) {
        // Residuals of the unscaled relative system.
        double ss = 0.0;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(f[i] > 0.0) || !std::isfinite(f[i])) continue;
            double fit = 0.0, p = x[i];
            for (int j = 0; j < n_basis; ++j, p *= x[i]) fit += c[j] * p;
            const double res = fit / f[i] - 1.0;
            ss += res * res;
            ++idx;
        }
        *rms_rel_residual = std::sqrt(ss / static_cast<double>(idx));
    }
    return c;
}

} // namespace detail

// Low-frequency Taylor coefficient C_{2k} of F(w) = sum_j C_{2j} (w tau)^{2j},
// extracted by a relative-error-weighted polynomial fit on a log grid
// w*tau in [1e-5, 1e-2], then refined by re-fitting with the dominant
// competing orders subtracted (one Richardson-style correction pass).
inline double taylor_coefficient(const ControlSequence& seq, Quadrature quadrature,
                                 int k, TaylorFitInfo* info = nullptr) {
    if (k < 1 || k > 4)
        throw std::invalid_argument("taylor_coefficient: order index k must be in [1,4]");
    const double tau = seq.duration();
    const auto wt_grid = log_grid(1e-5, 1e-2, 30.0);
    const FilterWorkspace ws(seq);
    std::vector<double> x(wt_grid.size()), f(wt_grid.size());
    for (std::size_t i = 0; i < wt_grid.size(); ++i) {
        const double w = wt_grid[i] / tau;
        x[i] = wt_grid[i] * wt_grid[i];
        f[i] = quadrature == Quadrature::dephasing
                   ? dephasing_control_vector(ws, w).norm_squared()
                   : amplitude_control_vector(ws, w).norm_squared();
    }
    double rms = 0.0;
    auto c = detail::fit_even_polynomial(x, f, &rms);

    // Refinement: remove the fitted contribution of the other orders and
    // re-fit the target order alone against the cleaned samples, weighting
    // by the target term's share so leakage from dominant orders cancels.
    {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(f[i] > 0.0)) continue;
            double others = 0.0, p = x[i];
            for (int j = 0; j < 5; ++j, p *= x[i])
                if (j != k - 1) others += c[j] * p;
            const double target_basis = std::pow(x[i], k);
            const double wgt = (target_basis * target_basis) / (f[i] * f[i]);
            num += wgt * (f[i] - others) / target_basis;
            den += wgt;
        }
        if (den > 0.0) {
            const double refined = num / den;
            // Accept the refinement only when it stays consistent with the
            // joint fit; wildly different values indicate the target order is
            // buried below the fit noise, where the joint value is safer.
            const double fit_scale = std::abs(c[k - 1]) + 1e-300;
            if (std::abs(refined - c[k - 1]) < 0.5 * fit_scale + 1e-9)
                c[k - 1] = refined;
        }
    }

    if (info) {
        info->rms_relative_residual = rms;
        info->ill_conditioned = rms > 1e-4;
        info->coefficients = c;
    }
    return c[k - 1];
}

} // namespace walshctl

#endif
