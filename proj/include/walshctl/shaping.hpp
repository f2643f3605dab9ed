#ifndef WALSHCTL_SHAPING_HPP
#define WALSHCTL_SHAPING_HPP

// Non-square segment profiles driven by rotation-angle Walsh spectra
// (Gaussian and trapezoidal envelopes sampled into fine-grained constant
// sub-segments), plus Butterworth bandlimited reconstruction of an existing
// square sequence.

#include <cmath>
#include <cstdio>
#include <vector>

#include "walshctl/control.hpp"
#include "walshctl/walsh.hpp"

namespace walshctl {

namespace detail {

// Midpoint-sample a unit profile over one segment and rescale the discrete
// sum so the sub-segments integrate exactly to the requested angle.
template <class Profile>
inline void append_shaped(std::vector<Segment>& out, double theta, double s,
                          int n_sub, Profile profile) {
    const double dt = s / n_sub;
    std::vector<double> raw(static_cast<std::size_t>(n_sub));
    double area = 0.0;
    for (int j = 0; j < n_sub; ++j) {
        const double t = (j + 0.5) * dt - 0.5 * s; // centered on the segment
        raw[static_cast<std::size_t>(j)] = profile(t);
        area += raw[static_cast<std::size_t>(j)] * dt;
    }
    const double scale = area != 0.0 ? theta / area : 0.0;
    for (int j = 0; j < n_sub; ++j)
        out.emplace_back(raw[static_cast<std::size_t>(j)] * scale, dt, 0.0);
}

inline std::vector<double> segment_angles(const WalshSpectrum& spectrum) {
    const std::vector<double> rates = synthesize(spectrum);
    std::vector<double> theta(rates.size());
    for (std::size_t l = 0; l < rates.size(); ++l)
        theta[l] = rates[l] / static_cast<double>(rates.size());
    return theta;
}

inline void check_shape_args(const WalshSpectrum& spectrum, int n_sub) {
    if (!(spectrum.tau > 0.0))
        throw std::invalid_argument("shaping: tau must be positive");
    if (n_sub < 10)
        throw std::invalid_argument("shaping: need at least 10 sub-segments");
}

inline std::string shape_label(const char* name, double value, std::size_t m) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s(%g,M=%zu)", name, value, m);
    return buf;
}

} // namespace detail

// Gaussian envelope per segment: mean at the segment midpoint, width
// sigma = g * tau / M, truncated at the segment boundaries and renormalized
// so each segment still rotates by its synthesized angle.
inline ControlSequence gaussian_sequence(const WalshSpectrum& spectrum, double g,
                                         int n_sub = 100) {
    detail::check_shape_args(spectrum, n_sub);
    if (!(g > 0.0))
        throw std::invalid_argument("gaussian_sequence: g must be positive");
    const std::vector<double> theta = detail::segment_angles(spectrum);
    const double s = spectrum.tau / static_cast<double>(theta.size());
    const double sigma = g * s;
    std::vector<Segment> segs;
    segs.reserve(theta.size() * static_cast<std::size_t>(n_sub));
    for (double th : theta)
        detail::append_shaped(segs, th, s, n_sub, [sigma](double t) {
            return std::exp(-0.5 * t * t / (sigma * sigma));
        });
    return ControlSequence(std::move(segs),
                           detail::shape_label("gaussian", g, theta.size()));
}

// Symmetric trapezoid per segment. The ramp corner subtends the angle
// f * pi/2 against the time axis in segment-normalized units, so the ramp
// occupies a fraction cot(f * pi/2) of the segment (clamped at the
// half-width, the triangle limit) and f = 1 recovers vertical edges.
inline ControlSequence trapezoid_sequence(const WalshSpectrum& spectrum, double f,
                                          int n_sub = 100) {
    detail::check_shape_args(spectrum, n_sub);
    if (!(f > 0.0) || f > 1.0)
        throw std::invalid_argument("trapezoid_sequence: need 0 < f <= 1");
    const std::vector<double> theta = detail::segment_angles(spectrum);
    const double s = spectrum.tau / static_cast<double>(theta.size());
    const double ramp = std::min(1.0 / std::tan(f * pi / 2.0), 0.5);
    std::vector<Segment> segs;
    segs.reserve(theta.size() * static_cast<std::size_t>(n_sub));
    for (double th : theta)
        detail::append_shaped(segs, th, s, n_sub, [ramp, s](double t) {
            if (ramp <= 0.0)
                return 1.0;
            const double u = t / s + 0.5; // position in [0, 1]
            if (u < ramp)
                return u / ramp;
            if (u > 1.0 - ramp)
                return (1.0 - u) / ramp;
            return 1.0;
        });
    return ControlSequence(std::move(segs),
                           detail::shape_label("trapezoid", f, theta.size()));
}

// Bandlimited reconstruction: sample the signed amplitude envelope of a
// square sequence, run it once through a causal first-order low-pass
// Butterworth (bilinear transform, zero initial state), and emit the
// reconstructed waveform as a fine-grained amplitude-modulated sequence.
inline ControlSequence butterworth_sequence(const ControlSequence& seq,
                                            double fc_over_fs,
                                            int n_total = 1 << 11) {
    if (!(fc_over_fs > 0.0) || !(fc_over_fs < 0.5))
        throw std::domain_error("butterworth_sequence: need 0 < fc/fs < 0.5");
    if (n_total < 16)
        throw std::invalid_argument("butterworth_sequence: need at least 16 samples");

    const double tau = seq.duration();
    const auto bounds = seq.boundaries();
    std::vector<double> x(static_cast<std::size_t>(n_total));
    std::size_t l = 0;
    for (int n = 0; n < n_total; ++n) {
        const double t = (n + 0.5) * tau / n_total;
        while (l + 1 < seq.segments.size() && t >= bounds[l + 1])
            ++l;
        const Segment& sg = seq.segments[l];
        const double folded = std::fmod(sg.phi, two_pi);
        double sign = 0.0;
        if (std::abs(folded) < 1e-9 || std::abs(folded - two_pi) < 1e-9)
            sign = 1.0;
        else if (std::abs(folded - pi) < 1e-9)
            sign = -1.0;
        else
            throw std::invalid_argument(
                "butterworth_sequence: envelope filtering needs phases of 0 or pi");
        x[static_cast<std::size_t>(n)] = sign * sg.omega;
    }

    const double k = std::tan(pi * fc_over_fs);
    const double b = k / (k + 1.0);
    const double a1 = (k - 1.0) / (k + 1.0);
    std::vector<Segment> segs;
    segs.reserve(x.size());
    double x_prev = 0.0, y_prev = 0.0;
    for (double xn : x) {
        const double yn = b * (xn + x_prev) - a1 * y_prev;
        segs.emplace_back(yn, tau / n_total, 0.0);
        x_prev = xn;
        y_prev = yn;
    }
    return ControlSequence(std::move(segs),
                           detail::shape_label("butterworth", fc_over_fs, x.size()));
}

} // namespace walshctl

#endif
