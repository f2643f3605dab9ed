#ifndef WALSHCTL_WALSH_HPP
#define WALSHCTL_WALSH_HPP

// Walsh functions in Paley ordering, Sylvester Hadamard matrices, and the
// synthesis/analysis transforms between Paley spectra and segment values.

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "walshctl/common.hpp"

namespace walshctl {

// Position of the most significant set bit, 1-based; m(0) = 0.
inline int msb_index(std::uint32_t k) {
    int m = 0;
    while (k != 0) { ++m; k >>= 1; }
    return m;
}

// Hamming weight r(k): number of set bits.
inline int hamming_weight(std::uint32_t k) {
    int r = 0;
    while (k != 0) { r += static_cast<int>(k & 1u); k >>= 1; }
    return r;
}

// Rademacher function R_j(x) = sgn sin(2^j pi x) on [0,1].
// At interior sign changes the right-limit value is used; x = 1 takes the
// left limit. Both conventions follow from evaluating (-1)^floor(x 2^j),
// which keeps bin discretizations exactly consistent with Hadamard columns.
inline int rademacher(int j, double x) {
    if (j < 0)
        throw std::domain_error("rademacher: index must be non-negative");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("rademacher: argument outside [0,1]");
    if (x == 1.0)
        return j == 0 ? 1 : -1;
    const auto cell = static_cast<std::int64_t>(std::floor(std::ldexp(x, j)));
    return (cell & 1) == 0 ? 1 : -1;
}

// Paley-ordered Walsh function PAL_k(x): product of Rademacher factors
// selected by the binary digits of k. PAL_0 is identically +1.
inline int paley(std::uint32_t k, double x) {
    int value = 1;
    for (int j = 1; k != 0; ++j, k >>= 1) {
        if (k & 1u)
            value *= rademacher(j, x);
    }
    return value;
}

// Entry of the Sylvester Hadamard matrix H_{2^n} without materializing it:
// H[i][j] = (-1)^popcount(i & j) with 0-based indices.
inline int hadamard_entry(std::size_t i, std::size_t j) {
    return (hamming_weight(static_cast<std::uint32_t>(i & j)) & 1) == 0 ? 1 : -1;
}

struct HadamardMatrix {
    int n = 0;                        // H has order 2^n
    std::size_t order = 1;
    std::vector<std::int8_t> entries; // row-major, order x order

    std::int8_t at(std::size_t row, std::size_t col) const {
        return entries[row * order + col];
    }
};

// Dense Sylvester Hadamard matrix H_{2^n} = S^{x n}, S = [[1,1],[1,-1]].
// Dense storage is capped at n <= 13 (64 MB of int8); the synthesis and
// analysis transforms below use hadamard_entry and have no such cap.
inline HadamardMatrix hadamard(int n) {
    if (n < 0 || n > 13)
        throw std::length_error("hadamard: dense storage supported for 0 <= n <= 13");
    HadamardMatrix h;
    h.n = n;
    h.order = std::size_t{1} << n;
    h.entries.resize(h.order * h.order);
    for (std::size_t i = 0; i < h.order; ++i)
        for (std::size_t j = 0; j < h.order; ++j)
            h.entries[i * h.order + j] = static_cast<std::int8_t>(hadamard_entry(i, j));
    return h;
}

// Column of H_{2^n} (1-based) that carries PAL_k: i(k) = 1 + sum b_j 2^{n-j}
// over the binary digits b_j of k. Bijective over k in [0, 2^n).
inline std::size_t paley_to_hadamard_index(std::uint32_t k, int n) {
    const int m = msb_index(k);
    if (n < 0 || m > n)
        throw std::domain_error("paley_to_hadamard_index: k requires more than 2^n bins");
    std::size_t i = 1;
    for (int j = 1; j <= m; ++j) {
        if ((k >> (j - 1)) & 1u)
            i += std::size_t{1} << (n - j);
    }
    return i;
}

// Paley-ordered spectrum q_0..q_N over either modulation quadrature,
// with the total sequence duration it will synthesize into.
struct WalshSpectrum {
    std::vector<double> amplitudes;
    Quadrature quadrature = Quadrature::amplitude;
    double tau = 1.0;
};

// Synthesis transform f = H_M q~: reorders Paley amplitudes into Hadamard
// slots, zero-fills the rest, and applies H. Output has length M = 2^{m(N)}.
inline std::vector<double> synthesize(const WalshSpectrum& spectrum) {
    const auto& q = spectrum.amplitudes;
    if (q.empty())
        throw std::invalid_argument("synthesize: empty spectrum");
    const auto N = static_cast<std::uint32_t>(q.size() - 1);
    const int n = msb_index(N);
    if (n > 20)
        throw std::length_error("synthesize: segment count above 2^20 guard");
    const std::size_t M = std::size_t{1} << n;
    std::vector<double> f(M, 0.0);
    for (std::uint32_t k = 0; k <= N; ++k) {
        if (q[k] == 0.0)
            continue;
        const std::size_t col = paley_to_hadamard_index(k, n) - 1;
        for (std::size_t i = 0; i < M; ++i)
            f[i] += hadamard_entry(i, col) * q[k];
    }
    return f;
}

// Analysis transform q~ = H^T f / 2^n (H is symmetric), mapped back to Paley
// order. Inverse of synthesize up to trailing zero amplitudes.
inline WalshSpectrum analyze(const std::vector<double>& values,
                             Quadrature quadrature = Quadrature::amplitude,
                             double tau = 1.0) {
    const std::size_t M = values.size();
    if (M == 0 || (M & (M - 1)) != 0)
        throw std::length_error("analyze: length must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < M) ++n;
    if (n > 13)
        throw std::length_error("analyze: dense transform supported for length <= 2^13");
    WalshSpectrum spectrum;
    spectrum.quadrature = quadrature;
    spectrum.tau = tau;
    spectrum.amplitudes.assign(M, 0.0);
    for (std::uint32_t k = 0; k < M; ++k) {
        const std::size_t col = paley_to_hadamard_index(k, n) - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < M; ++i)
            acc += hadamard_entry(i, col) * values[i];
        spectrum.amplitudes[k] = acc / static_cast<double>(M);
    }
    return spectrum;
}

} // namespace walshctl

#endif
