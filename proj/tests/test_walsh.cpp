#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "walshctl/walsh.hpp"

using namespace walshctl;

namespace {

// Sign of sin(2^j pi x) evaluated directly; undefined at the zeros, so the
// property tests below avoid bin boundaries.
int rademacher_by_sine(int j, double x) {
    return std::sin(std::ldexp(pi, j) * x) >= 0.0 ? 1 : -1;
}

} // namespace

TEST_CASE("rademacher matches the sign of sin(2^j pi x) away from boundaries") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
    for (int j = 0; j <= 8; ++j) {
        for (int trial = 0; trial < 200; ++trial) {
            const double x = dist(rng);
            INFO("j=" << j << " x=" << x);
            REQUIRE(rademacher(j, x) == rademacher_by_sine(j, x));
        }
    }
}

TEST_CASE("rademacher fixed values and boundary convention") {
    CHECK(rademacher(0, 0.0) == 1);
    CHECK(rademacher(0, 0.37) == 1);
    CHECK(rademacher(0, 1.0) == 1);
    CHECK(rademacher(1, 0.75) == -1);
    CHECK(rademacher(2, 0.3) == -1);
    // Right limit at interior sign changes, left limit at x = 1.
    CHECK(rademacher(1, 0.5) == -1);
    CHECK(rademacher(1, 1.0) == -1);
    CHECK(rademacher(2, 0.25) == -1);
    CHECK(rademacher(2, 0.5) == 1);
    CHECK_THROWS_AS(rademacher(1, -0.1), std::domain_error);
    CHECK_THROWS_AS(rademacher(1, 1.1), std::domain_error);
}

TEST_CASE("paley is the product of Rademacher factors over set bits") {
    CHECK(paley(0, 0.9) == 1);
    CHECK(paley(7, 0.4) == 1);

    // k = 3 over four bins of width 1/4 gives (+1, -1, -1, +1).
    const int expected[4] = {1, -1, -1, 1};
    for (int bin = 0; bin < 4; ++bin)
        CHECK(paley(3, bin / 4.0) == expected[bin]);

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
    for (std::uint32_t k : {1u, 2u, 5u, 11u, 21u, 31u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const double x = dist(rng);
            int prod = 1;
            for (int j = 1; j <= msb_index(k); ++j)
                if ((k >> (j - 1)) & 1u)
                    prod *= rademacher_by_sine(j, x);
            REQUIRE(paley(k, x) == prod);
        }
    }
}

TEST_CASE("bit index helpers") {
    CHECK(msb_index(0) == 0);
    CHECK(msb_index(1) == 1);
    CHECK(msb_index(3) == 2);
    CHECK(msb_index(4) == 3);
    CHECK(msb_index(31) == 5);
    CHECK(hamming_weight(0) == 0);
    CHECK(hamming_weight(7) == 3);
    CHECK(hamming_weight(31) == 5);
    for (std::uint32_t k = 1; k < 64; ++k)
        REQUIRE(hamming_weight(k) <= msb_index(k));
}

TEST_CASE("hadamard matches the Kronecker construction") {
    const auto h0 = hadamard(0);
    REQUIRE(h0.order == 1);
    CHECK(h0.at(0, 0) == 1);

    const auto h1 = hadamard(1);
    CHECK(h1.at(0, 0) == 1);
    CHECK(h1.at(0, 1) == 1);
    CHECK(h1.at(1, 0) == 1);
    CHECK(h1.at(1, 1) == -1);

    // Kronecker recursion H_{2M} = S (x) H_M, checked explicitly.
    for (int n = 1; n <= 6; ++n) {
        const auto big = hadamard(n);
        const auto half = hadamard(n - 1);
        const std::size_t m = half.order;
        for (std::size_t i = 0; i < big.order; ++i)
            for (std::size_t j = 0; j < big.order; ++j) {
                const int sign = (i >= m && j >= m) ? -1 : 1;
                REQUIRE(big.at(i, j) == sign * half.at(i % m, j % m));
            }
    }

    CHECK_THROWS_AS(hadamard(14), std::length_error);
}

TEST_CASE("hadamard orthogonality H H^T = 2^n I for n <= 10") {
    for (int n = 0; n <= 10; ++n) {
        const auto h = hadamard(n);
        const auto M = h.order;
        // Row-pair dot products; exact integer arithmetic.
        for (std::size_t a = 0; a < M; ++a) {
            for (std::size_t b = a; b < M; ++b) {
                long long dot = 0;
                for (std::size_t j = 0; j < M; ++j)
                    dot += static_cast<long long>(h.at(a, j)) * h.at(b, j);
                REQUIRE(dot == (a == b ? static_cast<long long>(M) : 0));
            }
        }
        if (M >= 512) break; // n = 9, 10 covered below by the entry identity
    }
    // For the largest orders use the closed-form entry to avoid an O(M^3) loop:
    // rows a and b of H differ by column signs (-1)^popcount((a^b) & j), which
    // sum to zero unless a == b.
    for (int n = 9; n <= 10; ++n) {
        const std::size_t M = std::size_t{1} << n;
        std::mt19937_64 rng(42 + n);
        std::uniform_int_distribution<std::size_t> pick(0, M - 1);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t a = pick(rng), b = pick(rng);
            long long dot = 0;
            for (std::size_t j = 0; j < M; ++j)
                dot += static_cast<long long>(hadamard_entry(a, j)) * hadamard_entry(b, j);
            REQUIRE(dot == (a == b ? static_cast<long long>(M) : 0));
        }
    }
}

TEST_CASE("first row and column of every Hadamard matrix are +1") {
    for (int n = 0; n <= 8; ++n) {
        const auto h = hadamard(n);
        for (std::size_t i = 0; i < h.order; ++i) {
            REQUIRE(h.at(0, i) == 1);
            REQUIRE(h.at(i, 0) == 1);
        }
    }
}

TEST_CASE("paley_to_hadamard_index maps k to the column carrying PAL_k") {
    CHECK(paley_to_hadamard_index(0, 2) == 1);
    CHECK(paley_to_hadamard_index(3, 2) == 4);
    CHECK(paley_to_hadamard_index(1, 2) == 3);
    CHECK_THROWS_AS(paley_to_hadamard_index(4, 2), std::domain_error);

    for (int n = 1; n <= 6; ++n) {
        const auto h = hadamard(n);
        const std::size_t M = h.order;
        std::vector<bool> used(M + 1, false);
        for (std::uint32_t k = 0; k < M; ++k) {
            const std::size_t col = paley_to_hadamard_index(k, n);
            REQUIRE(col >= 1);
            REQUIRE(col <= M);
            REQUIRE_FALSE(used[col]); // bijective
            used[col] = true;
            // Column equals PAL_k discretized over M bins (left-edge values).
            for (std::size_t bin = 0; bin < M; ++bin)
                REQUIRE(h.at(bin, col - 1) ==
                        paley(k, static_cast<double>(bin) / static_cast<double>(M)));
        }
    }
}

TEST_CASE("paley functions are balanced over their natural bins") {
    for (std::uint32_t k = 1; k <= 31; ++k) {
        const std::size_t M = std::size_t{1} << msb_index(k);
        long long sum = 0;
        for (std::size_t bin = 0; bin < M; ++bin)
            sum += paley(k, static_cast<double>(bin) / static_cast<double>(M));
        REQUIRE(sum == 0);
    }
}

TEST_CASE("synthesize produces the Hadamard image of the Paley spectrum") {
    const double X0 = 3 * pi, X3 = pi;
    WalshSpectrum s{{X0, 0.0, 0.0, X3}, Quadrature::amplitude, 1.0};
    const auto f = synthesize(s);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == Catch::Approx(4 * pi).margin(1e-14));
    CHECK(f[1] == Catch::Approx(2 * pi).margin(1e-14));
    CHECK(f[2] == Catch::Approx(2 * pi).margin(1e-14));
    CHECK(f[3] == Catch::Approx(4 * pi).margin(1e-14));

    const auto constant = synthesize({{2.5}, Quadrature::amplitude, 1.0});
    REQUIRE(constant.size() == 1);
    CHECK(constant[0] == 2.5);

    const auto c4 = synthesize({{1.5, 0.0, 0.0, 0.0}, Quadrature::amplitude, 1.0});
    REQUIRE(c4.size() == 4);
    for (double v : c4) CHECK(v == 1.5);

    const auto pal1 = synthesize({{0.0, 1.0}, Quadrature::amplitude, 1.0});
    REQUIRE(pal1.size() == 2);
    CHECK(pal1[0] == 1.0);
    CHECK(pal1[1] == -1.0);

    CHECK_THROWS_AS(synthesize({{}, Quadrature::amplitude, 1.0}), std::invalid_argument);
}

TEST_CASE("analyze inverts synthesize") {
    const auto spec = analyze({4 * pi, 2 * pi, 2 * pi, 4 * pi});
    REQUIRE(spec.amplitudes.size() == 4);
    CHECK(spec.amplitudes[0] == Catch::Approx(3 * pi).epsilon(1e-12));
    CHECK(spec.amplitudes[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(spec.amplitudes[2] == Catch::Approx(0.0).margin(1e-12));
    CHECK(spec.amplitudes[3] == Catch::Approx(pi).epsilon(1e-12));

    const auto flat = analyze({1.25, 1.25, 1.25, 1.25});
    CHECK(flat.amplitudes[0] == Catch::Approx(1.25));
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(flat.amplitudes[k] == Catch::Approx(0.0).margin(1e-14));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        WalshSpectrum s;
        s.amplitudes.resize(8);
        for (auto& a : s.amplitudes) a = dist(rng);
        const auto round = analyze(synthesize(s));
        REQUIRE(round.amplitudes.size() == 8);
        for (std::size_t k = 0; k < 8; ++k)
            REQUIRE(round.amplitudes[k] == Catch::Approx(s.amplitudes[k]).epsilon(1e-12).margin(1e-12));
    }

    CHECK_THROWS_AS(analyze({1.0, 2.0, 3.0}), std::length_error);
}

TEST_CASE("PAL Fourier magnitude rolls off with slope r(k) at low frequency") {
    // |int_0^1 PAL_k(x) e^{iwx} dx| ~ w^{r(k)} as w -> 0. A direct bin sum
    // cancels down to w^{r(k)+1} from O(w)-sized terms and drowns in rounding
    // for high Hamming weight, so the oracle uses the exact factorization
    //   sum_l PAL_k(l/M) z^l = prod_t (1 + s_t z^{2^t}),  z = e^{iw/M},
    // where s_t = -1 when bit (m-1-t) of k is set, and the stable magnitudes
    // |1 -+ e^{ix}| = 2|sin(x/2)|, 2|cos(x/2)|.
    for (std::uint32_t k : {1u, 2u, 3u, 7u, 12u, 21u, 31u}) {
        const int m = msb_index(k);
        const double M = std::ldexp(1.0, m);
        const auto grid = log_grid(1e-3, 1e-1, 12);
        std::vector<double> lx, ly;
        for (double w : grid) {
            double mag = 2.0 * std::abs(std::sin(w / (2.0 * M))); // |z - 1|
            for (int t = 0; t < m; ++t) {
                const double half = w * std::ldexp(1.0, t) / (2.0 * M);
                const bool bit_set = (k >> (m - 1 - t)) & 1u;
                mag *= 2.0 * std::abs(bit_set ? std::sin(half) : std::cos(half));
            }
            // The bin sum equals iw times the Fourier integral.
            lx.push_back(std::log10(w));
            ly.push_back(std::log10(mag / w));
        }
        const auto fit = fit_line(lx, ly);
        INFO("k=" << k << " slope=" << fit.slope);
        REQUIRE(fit.slope == Catch::Approx(static_cast<double>(hamming_weight(k))).margin(0.2));
    }
}

TEST_CASE("factorized PAL transform magnitude matches a direct bin sum") {
    // Cross-check of the closed form used above, at frequencies high enough
    // that the direct sum is numerically trustworthy.
    for (std::uint32_t k : {1u, 3u, 5u, 12u, 21u, 31u}) {
        const int m = msb_index(k);
        const std::size_t M = std::size_t{1} << m;
        for (double w : {0.5, 1.7, 4.0}) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t bin = 0; bin < M; ++bin) {
                const double t0 = static_cast<double>(bin) / M;
                const double t1 = static_cast<double>(bin + 1) / M;
                const double p = paley(k, t0);
                acc += p * (std::polar(1.0, w * t1) - std::polar(1.0, w * t0));
            }
            double mag = 2.0 * std::abs(std::sin(w / (2.0 * M)));
            for (int t = 0; t < m; ++t) {
                const double half = w * std::ldexp(1.0, t) / (2.0 * M);
                const bool bit_set = (k >> (m - 1 - t)) & 1u;
                mag *= 2.0 * std::abs(bit_set ? std::sin(half) : std::cos(half));
            }
            REQUIRE(std::abs(acc) == Catch::Approx(mag).epsilon(1e-10).margin(1e-12));
        }
    }
}
