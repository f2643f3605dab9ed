#ifndef WALSHCTL_CATALOG_HPP
#define WALSHCTL_CATALOG_HPP

// Constructors for the named control-sequence families: the primitive
// rotation, Walsh amplitude-modulated filters (4- and 8-segment), composite
// pulses for amplitude noise (single-Walsh phase corrections, BB1), Walsh
// rotary spin echo, and the two universal (dual-quadrature) concatenations.
// All constructors emit a ControlSequence of total duration tau, with the
// analytic first-order Taylor coefficients supplied alongside where a closed
// form exists.

#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "walshctl/control.hpp"
#include "walshctl/walsh.hpp"

namespace walshctl {

enum class Family {
    primitive,
    wamf03,
    wamf07,
    wpmf_correction,
    bb1,
    wrse,
    uwmf1,
    uwmf2,
};

namespace detail {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

inline void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("catalog: tau must be positive and finite");
}

inline std::string format_params(const char* fmt, double a, double b = 0.0,
                                 double c = 0.0, double d = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
    return std::string(buf);
}

// Walsh-function sign at the midpoint of bin l out of m bins.
inline double pal_bin(std::uint32_t k, std::size_t l, std::size_t m) {
    return static_cast<double>(paley(k, (static_cast<double>(l) + 0.5) /
                                            static_cast<double>(m)));
}

} // namespace detail

inline ControlSequence primitive(double theta, double phi, double tau = 1.0) {
    detail::check_tau(tau);
    if (!(theta > 0.0))
        throw std::invalid_argument("primitive: theta must be positive");
    ControlSequence seq(std::vector<Segment>{Segment(theta / tau, tau, phi)});
    seq.label = "primitive(" + detail::format_params("theta=%g,phi=%g", theta, phi) + ")";
    return seq;
}

// Four-segment amplitude-modulated filter with plateau rates
// (X0+X3, X0-X3, X0-X3, X0+X3)/tau; negative plateaus become phase-pi
// segments via the signed-rate normalization.
inline ControlSequence wamf03(double x0, double x3, double tau = 1.0) {
    detail::check_tau(tau);
    if (!std::isfinite(x0) || !std::isfinite(x3))
        throw std::invalid_argument("wamf03: parameters must be finite");
    std::vector<Segment> segs;
    for (double v : {x0 + x3, x0 - x3, x0 - x3, x0 + x3})
        segs.push_back(Segment(v / tau, tau / 4.0, 0.0));
    ControlSequence seq(std::move(segs));
    seq.label = "wamf03(" + detail::format_params("X0=%g,X3=%g", x0, x3) + ")";
    return seq;
}

// Eight-segment amplitude modulation synthesized from Paley orders {0,3,5,6}.
inline ControlSequence wamf07(double x0, double x3, double x5, double x6,
                              double tau = 1.0) {
    detail::check_tau(tau);
    WalshSpectrum spectrum;
    spectrum.amplitudes = {x0, 0.0, 0.0, x3, 0.0, x5, x6};
    spectrum.quadrature = Quadrature::amplitude;
    spectrum.tau = tau;
    const std::vector<double> envelope = synthesize(spectrum);
    std::vector<Segment> segs;
    const double dt = tau / static_cast<double>(envelope.size());
    for (double v : envelope)
        segs.push_back(Segment(v / tau, dt, 0.0));
    ControlSequence seq(std::move(segs));
    seq.label = "wamf07(" +
                detail::format_params("X0=%g,X3=%g,X5=%g,X6=%g", x0, x3, x5, x6) + ")";
    return seq;
}

// Optimized phase offset for the single-Walsh correction of a theta target:
// Y_k = arccos(-theta / (2 pi M)) with M = 2^{m(k)} correction segments.
inline double wpmf_correction_phase(std::uint32_t k, double theta) {
    if (k == 0)
        throw std::invalid_argument("wpmf_correction: k must be >= 1");
    const double m_count = static_cast<double>(std::size_t{1} << msb_index(k));
    const double arg = -theta / (two_pi * m_count);
    if (arg < -1.0 || arg > 1.0)
        throw std::domain_error("wpmf_correction: arccos argument outside [-1,1]");
    return std::acos(arg);
}

// Target pulse P(theta, 0) followed by M(k) 2pi-identity segments whose
// phases follow Y_k * PAL_k; constant Rabi rate (theta + 2 pi M)/tau.
inline ControlSequence wpmf_correction(std::uint32_t k, double theta, double tau = 1.0) {
    detail::check_tau(tau);
    if (!(theta > 0.0) || !(theta < two_pi))
        throw std::invalid_argument("wpmf_correction: theta must lie in (0, 2pi)");
    const double y = wpmf_correction_phase(k, theta);
    const std::size_t m_count = std::size_t{1} << msb_index(k);
    const double rate = (theta + two_pi * static_cast<double>(m_count)) / tau;
    std::vector<Segment> segs;
    segs.push_back(Segment(rate, theta / rate, 0.0));
    for (std::size_t l = 0; l < m_count; ++l)
        segs.push_back(Segment(rate, two_pi / rate, y * detail::pal_bin(k, l, m_count)));
    ControlSequence seq(std::move(segs));
    seq.label = "wpmf_correction(" +
                detail::format_params("k=%g,theta=%g", static_cast<double>(k), theta) + ")";
    return seq;
}

inline double bb1_phase(double theta) {
    const double arg = -theta / (2.0 * two_pi);
    if (arg < -1.0 || arg > 1.0)
        throw std::domain_error("bb1: arccos argument outside [-1,1]");
    return std::acos(arg);
}

// Broadband composite pulse in the collapsed four-segment form
// P(theta,0) P(pi,phi) P(2pi,3phi) P(pi,phi), constant rate (4pi+theta)/tau.
inline ControlSequence bb1(double theta, double tau = 1.0) {
    detail::check_tau(tau);
    if (!(theta > 0.0) || !(theta < two_pi))
        throw std::invalid_argument("bb1: theta must lie in (0, 2pi)");
    const double phi = bb1_phase(theta);
    const double rate = (2.0 * two_pi + theta) / tau;
    std::vector<Segment> segs;
    segs.push_back(Segment(rate, theta / rate, 0.0));
    segs.push_back(Segment(rate, pi / rate, phi));
    segs.push_back(Segment(rate, two_pi / rate, 3.0 * phi));
    segs.push_back(Segment(rate, pi / rate, phi));
    ControlSequence seq(std::move(segs));
    seq.label = "bb1(" + detail::format_params("theta=%g", theta) + ")";
    return seq;
}

// Rotary spin echo patterned by PAL_k: 2^{m(k)} equal segments of constant
// rate whose sign follows the Walsh function (realized as phase flips by pi),
// a net identity with zero total rotation.
inline ControlSequence wrse(std::uint32_t k, double omega0, double phi0,
                            double tau = 1.0) {
    detail::check_tau(tau);
    if (k == 0)
        throw std::invalid_argument("wrse: k must be >= 1");
    if (!(omega0 > 0.0))
        throw std::invalid_argument("wrse: omega0 must be positive");
    const std::size_t m_count = std::size_t{1} << msb_index(k);
    const double dt = tau / static_cast<double>(m_count);
    std::vector<Segment> segs;
    for (std::size_t l = 0; l < m_count; ++l)
        segs.push_back(Segment(detail::pal_bin(k, l, m_count) * omega0, dt, phi0));
    ControlSequence seq(std::move(segs));
    seq.label = "wrse(" +
                detail::format_params("k=%g,omega0=%g,phi0=%g",
                                      static_cast<double>(k), omega0, phi0) + ")";
    return seq;
}

namespace detail {

// Shared 9-segment concatenation: three constant-phase pulses of angles
// (xp/4, xm/2, xp/4), each followed by its own two-segment 2pi correction
// with phases (+y, -y). Slot durations are supplied by the caller.
inline ControlSequence build_uwmf(double xp, double xm, double rate1, double rate2) {
    // Correction phases for the replaced pulse angles xp/4 and xm/2:
    // Y = arccos(-angle / 4pi).
    const double y1 = std::acos(-(xp / 4.0) / (2.0 * two_pi));
    const double y2 = std::acos(-(xm / 2.0) / (2.0 * two_pi));
    std::vector<Segment> segs;
    auto corrected_pulse = [&](double angle, double rate, double y) {
        segs.push_back(Segment(rate, angle / rate, 0.0));
        segs.push_back(Segment(rate, two_pi / rate, y));
        segs.push_back(Segment(rate, two_pi / rate, -y));
    };
    corrected_pulse(xp / 4.0, rate1, y1);
    corrected_pulse(xm / 2.0, rate2, y2);
    corrected_pulse(xp / 4.0, rate1, y1);
    return ControlSequence(std::move(segs));
}

inline void check_uwmf_domain(double xp, double xm) {
    if (!(xp > 0.0) || !(xm > 0.0))
        throw std::invalid_argument("uwmf: X0+X3 and X0-X3 must be positive");
    if (xp > 8.0 * two_pi || xm > 4.0 * two_pi)
        throw std::domain_error("uwmf: correction arccos argument outside [-1,1]");
}

} // namespace detail

// Concatenation method 1: each corrected pulse fills the duration slot of the
// plateau it replaces (tau/4, tau/2, tau/4), giving rates (X+ + 16pi)/tau and
// (X- + 8pi)/tau.
inline ControlSequence uwmf1(double x0, double x3, double tau = 1.0) {
    detail::check_tau(tau);
    const double xp = x0 + x3, xm = x0 - x3;
    detail::check_uwmf_domain(xp, xm);
    const double rate1 = (xp + 8.0 * two_pi) / tau;
    const double rate2 = (xm + 4.0 * two_pi) / tau;
    ControlSequence seq = detail::build_uwmf(xp, xm, rate1, rate2);
    seq.label = "uwmf1(" + detail::format_params("X0=%g,X3=%g", x0, x3) + ")";
    return seq;
}

// Concatenation method 2: pulse durations constrained to ratio 1:2:1 with
// nu = (tau/4) / (1 + pi kappa), kappa = 4 (2/X+ + 1/X-); rates X+/(4 nu)
// and X-/(4 nu).
inline ControlSequence uwmf2(double x0, double x3, double tau = 1.0) {
    detail::check_tau(tau);
    const double xp = x0 + x3, xm = x0 - x3;
    detail::check_uwmf_domain(xp, xm);
    const double kappa = 4.0 * (2.0 / xp + 1.0 / xm);
    const double nu = tau / 4.0 / (1.0 + pi * kappa);
    const double rate1 = xp / (4.0 * nu);
    const double rate2 = xm / (4.0 * nu);
    ControlSequence seq = detail::build_uwmf(xp, xm, rate1, rate2);
    seq.label = "uwmf2(" + detail::format_params("X0=%g,X3=%g", x0, x3) + ")";
    return seq;
}

// Analytic first-order coefficients.

// Signed inner expression of the 4-segment filter's leading dephasing
// coefficient; the coefficient itself is 4 * inner^2, so root finding
// bisects this signed form.
inline double wamf03_c2_inner(double x0, double x3) {
    const double num = (x0 - x3) * std::sin(x0 / 2.0) +
                       2.0 * x3 * std::sin((x0 - x3) / 4.0);
    return num / (x0 * x0 - x3 * x3);
}

inline double wamf03_c2_dephasing(double x0, double x3) {
    const double u = wamf03_c2_inner(x0, x3);
    return 4.0 * u * u;
}

// Leading amplitude coefficient of a theta pulse followed by M(k) identity
// segments at phase offset y: [theta + 2 pi M cos(y)]^2 / 4.
inline double wpmf_c2_amplitude(std::uint32_t k, double theta, double y) {
    if (k == 0)
        throw std::invalid_argument("wpmf_c2_amplitude: k must be >= 1");
    const double m_count = static_cast<double>(std::size_t{1} << msb_index(k));
    const double bracket = theta + two_pi * m_count * std::cos(y);
    return bracket * bracket / 4.0;
}

// Leading dephasing coefficient of the rotary echo family:
// sinc^2(Omega0 / 2^kappa), kappa = m(k) except m(k)+1 when r(k) = 1.
inline double wrse_c2_dephasing(std::uint32_t k, double omega0) {
    if (k == 0)
        throw std::invalid_argument("wrse_c2_dephasing: k must be >= 1");
    const int kappa = msb_index(k) + (hamming_weight(k) == 1 ? 1 : 0);
    const double s = detail::sinc(omega0 / static_cast<double>(std::size_t{1} << kappa));
    return s * s;
}

// Second-order dephasing coefficient of the k=3 rotary echo at the first-order
// zeros Omega0 = 4 pi q.
inline double wrse3_c4_dephasing_at_zero(int q) {
    if (q < 1)
        throw std::invalid_argument("wrse3_c4_dephasing_at_zero: q must be >= 1");
    const double qd = static_cast<double>(q);
    return (1.0 - ((q % 2 == 0) ? 1.0 : -1.0)) / (8.0 * qd * qd * pi * pi);
}

// Dispatch record for building sequences from named parameters.
struct CatalogSpec {
    Family family = Family::primitive;
    std::map<std::string, double> params;
    double tau = 1.0;
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::primitive: return "primitive";
        case Family::wamf03: return "wamf03";
        case Family::wamf07: return "wamf07";
        case Family::wpmf_correction: return "wpmf_correction";
        case Family::bb1: return "bb1";
        case Family::wrse: return "wrse";
        case Family::uwmf1: return "uwmf1";
        case Family::uwmf2: return "uwmf2";
    }
    throw std::logic_error("family_name: unreachable");
}

inline Family family_from_name(const std::string& name) {
    for (Family f : {Family::primitive, Family::wamf03, Family::wamf07,
                     Family::wpmf_correction, Family::bb1, Family::wrse,
                     Family::uwmf1, Family::uwmf2}) {
        if (name == family_name(f)) return f;
    }
    throw std::invalid_argument("unknown sequence family: " + name);
}

namespace detail {

class ParamReader {
  public:
    ParamReader(const std::map<std::string, double>& params, const char* family)
        : params_(params), family_(family) {}

    double require(const std::string& key) {
        auto it = params_.find(key);
        if (it == params_.end())
            throw std::invalid_argument(std::string(family_) + ": missing parameter '" +
                                        key + "'");
        used_.insert(key);
        return it->second;
    }

    double optional(const std::string& key, double fallback) {
        auto it = params_.find(key);
        if (it == params_.end()) return fallback;
        used_.insert(key);
        return it->second;
    }

    void finish() const {
        for (const auto& [key, value] : params_) {
            (void)value;
            if (used_.find(key) == used_.end())
                throw std::invalid_argument(std::string(family_) +
                                            ": unknown parameter '" + key + "'");
        }
    }

  private:
    const std::map<std::string, double>& params_;
    const char* family_;
    std::set<std::string> used_;
};

inline std::uint32_t integer_param(double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
        throw std::invalid_argument(std::string(what) + " must be a small non-negative integer");
    return static_cast<std::uint32_t>(v);
}

} // namespace detail

inline ControlSequence make_sequence(const CatalogSpec& spec) {
    detail::ParamReader p(spec.params, family_name(spec.family));
    ControlSequence seq = [&]() -> ControlSequence {
        switch (spec.family) {
            case Family::primitive:
                return primitive(p.require("theta"), p.optional("phi", 0.0), spec.tau);
            case Family::wamf03:
                return wamf03(p.require("x0"), p.require("x3"), spec.tau);
            case Family::wamf07:
                return wamf07(p.require("x0"), p.require("x3"), p.require("x5"),
                              p.require("x6"), spec.tau);
            case Family::wpmf_correction:
                return wpmf_correction(detail::integer_param(p.require("k"), "k"),
                                       p.require("theta"), spec.tau);
            case Family::bb1:
                return bb1(p.require("theta"), spec.tau);
            case Family::wrse:
                return wrse(detail::integer_param(p.require("k"), "k"),
                            p.require("omega0"), p.optional("phi0", 0.0), spec.tau);
            case Family::uwmf1:
                return uwmf1(p.require("x0"), p.require("x3"), spec.tau);
            case Family::uwmf2:
                return uwmf2(p.require("x0"), p.require("x3"), spec.tau);
        }
        throw std::logic_error("make_sequence: unreachable");
    }();
    p.finish();
    return seq;
}

} // namespace walshctl

#endif
