#ifndef WALSHCTL_NOISE_HPP
#define WALSHCTL_NOISE_HPP

// Stationary noise power spectral densities. S(w) is one-sided: the process
// variance is <b^2> = (1/2pi) int_0^inf S(w) dw, matching harmonic synthesis
// with amplitudes a_j = sqrt(S(w_j) dw / pi) over a one-sided frequency grid.
// Two PSD families with hard band edges are provided: flat band S = A on
// [w1, w2], and power law S = A w^alpha on [w1, w2].

#include <cmath>
#include <stdexcept>

#include "walshctl/common.hpp"

namespace walshctl {

enum class PsdFamily { flat_band, power_law };

struct NoiseModel {
    Quadrature quadrature = Quadrature::dephasing;
    PsdFamily family = PsdFamily::flat_band;
    double amplitude = 0.0; // A, units of time (PSD of a dimensionless process)
    double alpha = 0.0;     // power-law exponent, ignored for flat band
    double w_low = 0.0;
    double w_high = 0.0;

    NoiseModel() = default;

    static NoiseModel flat_band(Quadrature q, double amplitude, double w_low,
                                double w_high) {
        NoiseModel m;
        m.quadrature = q;
        m.family = PsdFamily::flat_band;
        m.amplitude = amplitude;
        m.w_low = w_low;
        m.w_high = w_high;
        m.validate();
        return m;
    }

    static NoiseModel power_law(Quadrature q, double amplitude, double alpha,
                                double w_low, double w_high) {
        NoiseModel m;
        m.quadrature = q;
        m.family = PsdFamily::power_law;
        m.amplitude = amplitude;
        m.alpha = alpha;
        m.w_low = w_low;
        m.w_high = w_high;
        m.validate();
        return m;
    }

    void validate() const {
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw std::invalid_argument("NoiseModel: amplitude must be finite and >= 0");
        if (!(w_low >= 0.0) || !(w_high > w_low))
            throw std::invalid_argument("NoiseModel: band must satisfy 0 <= w_low < w_high");
        if (family == PsdFamily::power_law && !(w_low > 0.0))
            throw std::invalid_argument("NoiseModel: power-law band needs w_low > 0");
        if (!std::isfinite(alpha))
            throw std::invalid_argument("NoiseModel: alpha must be finite");
    }

    double psd(double w) const {
        if (w < w_low || w > w_high) return 0.0;
        if (family == PsdFamily::flat_band) return amplitude;
        return amplitude * std::pow(w, alpha);
    }

    // int_{w_low}^{w_high} S(w) dw, in closed form.
    double band_power() const {
        if (family == PsdFamily::flat_band) return amplitude * (w_high - w_low);
        if (std::abs(alpha + 1.0) < 1e-12)
            return amplitude * std::log(w_high / w_low);
        const double e = alpha + 1.0;
        return amplitude * (std::pow(w_high, e) - std::pow(w_low, e)) / e;
    }

    double variance() const { return band_power() / two_pi; }

    // Smallness parameter xi^2 = <b^2> tau^2; first-order filter predictions
    // assume xi^2 well below 1.
    double xi_squared(double tau) const { return variance() * tau * tau; }

    bool weak_noise(double tau) const { return xi_squared(tau) < 1.0; }

    // Rescales the amplitude so that xi_squared(tau) == target.
    void set_xi_squared(double target, double tau) {
        if (!(target >= 0.0))
            throw std::invalid_argument("NoiseModel: xi^2 target must be >= 0");
        const double base = xi_squared(tau);
        if (base <= 0.0)
            throw std::invalid_argument("NoiseModel: cannot rescale a zero-power model");
        amplitude *= target / base;
    }
};

} // namespace walshctl

#endif
