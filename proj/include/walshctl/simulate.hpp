#ifndef WALSHCTL_SIMULATE_HPP
#define WALSHCTL_SIMULATE_HPP

// Time-domain Monte-Carlo validation: harmonic-sum noise synthesis from a
// PSD, exact piecewise-frozen SU(2) integration of the noisy control
// Hamiltonian, and ensemble operational infidelity with standard errors.

#include <cstdint>
#include <random>
#include <thread>

#include "walshctl/control.hpp"
#include "walshctl/noise.hpp"

namespace walshctl {

// One stochastic trajectory beta(t) = sum_j a_j cos(w_j t + phase_j),
// stored as its harmonic decomposition so it can be evaluated exactly at
// any substep midpoint.
struct NoiseRealization {
    std::vector<double> a;
    std::vector<double> w;
    std::vector<double> phase;
    std::uint64_t seed = 0;

    bool silent() const { return a.empty(); }

    double beta(double t) const {
        double b = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j)
            b += a[j] * std::cos(w[j] * t + phase[j]);
        return b;
    }

    double rms() const {
        double s2 = 0.0;
        for (double aj : a)
            s2 += 0.5 * aj * aj;
        return std::sqrt(s2);
    }
};

namespace detail {

// splitmix64: cheap stateless mixing for derived per-realization seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t idx,
                              std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (2 * idx + tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

// Wiener-Khinchin harmonic synthesis on a one-sided frequency grid: linear
// bins for the flat band, logarithmic bins for the power law. Amplitudes
// a_j = sqrt(S(w_j) dw_j / pi) give sample variance band_power / (2 pi).
// The component count is floored at 1000 so the trajectory stays
// effectively aperiodic over a sequence duration.
inline NoiseRealization realize_noise(const NoiseModel& model,
                                      std::size_t n_harmonics,
                                      std::uint64_t seed) {
    model.validate();
    const std::size_t n = std::max<std::size_t>(n_harmonics, 1000);
    NoiseRealization r;
    r.seed = seed;
    if (model.amplitude == 0.0)
        return r;
    r.a.resize(n);
    r.w.resize(n);
    r.phase.resize(n);
    const bool log_bins = model.family == PsdFamily::power_law;
    const double lin_dw = (model.w_high - model.w_low) / static_cast<double>(n);
    const double log_step = std::pow(model.w_high / model.w_low,
                                     1.0 / static_cast<double>(n));
    std::seed_seq ss{static_cast<std::uint32_t>(seed),
                     static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937 rng(ss);
    std::uniform_real_distribution<double> uniform(0.0, two_pi);
    double edge = model.w_low;
    for (std::size_t j = 0; j < n; ++j) {
        double next, wj;
        if (log_bins) {
            next = edge * log_step;
            wj = std::sqrt(edge * next);
        } else {
            next = model.w_low + lin_dw * static_cast<double>(j + 1);
            wj = 0.5 * (edge + next);
        }
        r.w[j] = wj;
        r.a[j] = std::sqrt(model.psd(wj) * (next - edge) / pi);
        r.phase[j] = uniform(rng);
        edge = next;
    }
    return r;
}

// Noisy propagator: H(t) = (Omega_l/2)(1 + beta_Omega) sigma_phi +
// beta_z sigma_z, frozen at substep midpoints and exponentiated exactly, so
// the product stays unitary to rounding. substeps_per_segment = 0 picks a
// count that keeps max(Omega, beta) dt below 0.04 (5 rms for the noise
// scale); a forced coarser count sets *step_warning instead.
inline Unitary2 evolve(const ControlSequence& seq, const NoiseRealization& noise_z,
                       const NoiseRealization& noise_omega,
                       int substeps_per_segment = 0,
                       bool* step_warning = nullptr) {
    if (substeps_per_segment < 0)
        throw std::invalid_argument("evolve: negative substep count");
    if (step_warning)
        *step_warning = false;
    const double beta_scale = 5.0 * (noise_z.rms() + noise_omega.rms());
    Unitary2 u = Unitary2::identity();
    double t0 = 0.0;
    for (const Segment& sg : seq.segments) {
        const double rate_scale = sg.omega * (1.0 + 5.0 * noise_omega.rms());
        int n_sub = substeps_per_segment;
        if (n_sub == 0) {
            const double target = (rate_scale + beta_scale) * sg.tau / 0.04;
            n_sub = std::max(4, static_cast<int>(std::ceil(target)));
        } else if (step_warning &&
                   (rate_scale + beta_scale) * sg.tau / n_sub >= 0.05) {
            *step_warning = true;
        }
        const double dt = sg.tau / n_sub;
        const double cphi = std::cos(sg.phi), sphi = std::sin(sg.phi);
        for (int k = 0; k < n_sub; ++k) {
            const double tm = t0 + (k + 0.5) * dt;
            const double drive =
                0.5 * sg.omega * (1.0 + (noise_omega.silent() ? 0.0 : noise_omega.beta(tm)));
            const double hx = drive * cphi;
            const double hy = drive * sphi;
            const double hz = noise_z.silent() ? 0.0 : noise_z.beta(tm);
            const double norm = std::sqrt(hx * hx + hy * hy + hz * hz);
            if (norm > 0.0)
                u = axis_angle_unitary(2.0 * norm * dt, hx / norm, hy / norm,
                                       hz / norm) *
                    u;
        }
        t0 += sg.tau;
    }
    return u;
}

struct EnsembleOptions {
    int substeps_per_segment = 0; // 0 = automatic per segment
    std::size_t n_harmonics = 1024;
    unsigned n_threads = 1;
};

struct EnsembleResult {
    double infidelity = 0.0;
    double standard_error = 0.0;
    std::size_t n_realizations = 0;
    bool step_warning = false;
};

// Ensemble average of the operational fidelity |Tr(Uc^dag U)|^2 / 4 over
// independent noise realizations. Realizations are indexed, their seeds are
// derived from (seed, index, quadrature), and the reduction runs in index
// order, so results are identical for any thread count.
inline EnsembleResult ensemble_infidelity(const ControlSequence& seq,
                                          const std::vector<NoiseModel>& models,
                                          std::size_t n_realizations,
                                          std::uint64_t seed,
                                          const EnsembleOptions& options = {}) {
    if (n_realizations < 100)
        throw std::invalid_argument("ensemble_infidelity: need >= 100 realizations");
    const NoiseModel* model_z = nullptr;
    const NoiseModel* model_omega = nullptr;
    for (const NoiseModel& m : models) {
        m.validate();
        const NoiseModel*& slot =
            m.quadrature == Quadrature::dephasing ? model_z : model_omega;
        if (slot)
            throw std::invalid_argument(
                "ensemble_infidelity: one model per quadrature");
        slot = &m;
    }

    const Unitary2 u_control = cumulative_operators(seq).back();
    std::vector<double> fidelity(n_realizations);
    std::vector<char> warned(n_realizations, 0);
    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            NoiseRealization nz, nw;
            if (model_z)
                nz = realize_noise(*model_z, options.n_harmonics,
                                   detail::mix_seed(seed, i, 0));
            if (model_omega)
                nw = realize_noise(*model_omega, options.n_harmonics,
                                   detail::mix_seed(seed, i, 1));
            bool warn = false;
            const Unitary2 u =
                evolve(seq, nz, nw, options.substeps_per_segment, &warn);
            warned[i] = warn ? 1 : 0;
            const cplx overlap = (u_control.dagger() * u).trace();
            fidelity[i] = 0.25 * std::norm(overlap);
        }
    };
    if (options.n_threads <= 1 || n_realizations < 128) {
        run(0, n_realizations);
    } else {
        const unsigned workers = std::min<unsigned>(
            options.n_threads, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_realizations + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n_realizations, lo + chunk);
            if (lo >= hi)
                break;
            pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool)
            th.join();
    }

    double mean = 0.0;
    for (double f : fidelity)
        mean += f;
    mean /= static_cast<double>(n_realizations);
    double var = 0.0;
    for (double f : fidelity)
        var += (f - mean) * (f - mean);
    var /= static_cast<double>(n_realizations) *
           static_cast<double>(n_realizations - 1);

    EnsembleResult out;
    out.infidelity = 1.0 - mean;
    out.standard_error = std::sqrt(var);
    out.n_realizations = n_realizations;
    for (char w : warned)
        out.step_warning = out.step_warning || w;
    return out;
}

} // namespace walshctl

#endif
