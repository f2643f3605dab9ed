#ifndef WALSHCTL_CONTROL_HPP
#define WALSHCTL_CONTROL_HPP

// Piecewise-constant control sequences on a single qubit: segment data model,
// SU(2) segment propagators, cumulative operators, and the SO(3) history
// matrices that rotate noise axes into the toggling frame.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "walshctl/common.hpp"

namespace walshctl {

using cplx = std::complex<double>;

// One constant-drive segment. A negative Rabi rate is normalized at
// construction into (|omega|, phi + pi): driving along -sigma_phi equals
// driving along sigma_{phi+pi}. The sign is retained so signed rotation
// angles can still be summed.
struct Segment {
    double omega = 0.0;  // Rabi rate, rad/time, >= 0 after normalization
    double tau = 0.0;    // duration, > 0
    double phi = 0.0;    // drive phase in [0, 2pi)
    int rabi_sign = 1;   // sign of the rate as constructed

    Segment() = default;
    Segment(double rabi, double duration, double phase) {
        if (!(duration > 0.0))
            throw std::invalid_argument("Segment: duration must be positive");
        if (!std::isfinite(rabi) || !std::isfinite(phase))
            throw std::invalid_argument("Segment: non-finite parameter");
        rabi_sign = rabi < 0.0 ? -1 : 1;
        omega = std::abs(rabi);
        tau = duration;
        phi = phase + (rabi_sign < 0 ? pi : 0.0);
        phi = std::fmod(phi, two_pi);
        if (phi < 0.0)
            phi += two_pi;
    }

    double theta() const { return omega * tau; }               // unsigned angle
    double signed_theta() const { return rabi_sign * theta(); }
};

struct ControlSequence {
    std::vector<Segment> segments;
    std::string label;

    ControlSequence() = default;
    explicit ControlSequence(std::vector<Segment> segs, std::string name = {})
        : segments(std::move(segs)), label(std::move(name)) {
        if (segments.empty())
            throw std::invalid_argument("ControlSequence: need at least one segment");
    }

    std::size_t size() const { return segments.size(); }

    double duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.tau;
        return t;
    }

    // Boundary times t_0 = 0 < t_1 < ... < t_n.
    std::vector<double> boundaries() const {
        std::vector<double> t(segments.size() + 1, 0.0);
        for (std::size_t l = 0; l < segments.size(); ++l)
            t[l + 1] = t[l] + segments[l].tau;
        return t;
    }
};

// 2x2 complex matrix, row-major.
struct Unitary2 {
    std::array<cplx, 4> m{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};

    static Unitary2 identity() { return {}; }

    cplx operator()(int r, int c) const { return m[2 * r + c]; }
    cplx& operator()(int r, int c) { return m[2 * r + c]; }

    Unitary2 operator*(const Unitary2& o) const {
        Unitary2 p;
        p.m[0] = m[0] * o.m[0] + m[1] * o.m[2];
        p.m[1] = m[0] * o.m[1] + m[1] * o.m[3];
        p.m[2] = m[2] * o.m[0] + m[3] * o.m[2];
        p.m[3] = m[2] * o.m[1] + m[3] * o.m[3];
        return p;
    }

    Unitary2 dagger() const {
        Unitary2 d;
        d.m[0] = std::conj(m[0]);
        d.m[1] = std::conj(m[2]);
        d.m[2] = std::conj(m[1]);
        d.m[3] = std::conj(m[3]);
        return d;
    }

    cplx trace() const { return m[0] + m[3]; }

    double unitarity_defect() const {
        const Unitary2 g = dagger() * (*this);
        double d = 0.0;
        d = std::max(d, std::abs(g.m[0] - cplx(1, 0)));
        d = std::max(d, std::abs(g.m[1]));
        d = std::max(d, std::abs(g.m[2]));
        d = std::max(d, std::abs(g.m[3] - cplx(1, 0)));
        return d;
    }
};

inline const std::array<Unitary2, 3>& pauli_matrices() {
    static const std::array<Unitary2, 3> sigma = [] {
        std::array<Unitary2, 3> s{};
        s[0].m = {cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)};   // x
        s[1].m = {cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)};  // y
        s[2].m = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)};  // z
        return s;
    }();
    return sigma;
}

// exp(-i (angle/2) n.sigma) for a unit axis n; exact closed form.
inline Unitary2 axis_angle_unitary(double angle, double nx, double ny, double nz) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    Unitary2 u;
    u.m[0] = cplx(c, -s * nz);
    u.m[1] = cplx(-s * ny, -s * nx);
    u.m[2] = cplx(s * ny, -s * nx);
    u.m[3] = cplx(c, s * nz);
    return u;
}

// Segment propagator exp(-i theta sigma_phi / 2), sigma_phi in the xy plane.
inline Unitary2 segment_unitary(const Segment& s) {
    return axis_angle_unitary(s.theta(), std::cos(s.phi), std::sin(s.phi), 0.0);
}

// Cumulative operators Q_0 = I, Q_l = P_l Q_{l-1}.
inline std::vector<Unitary2> cumulative_operators(const ControlSequence& seq) {
    std::vector<Unitary2> q;
    q.reserve(seq.size() + 1);
    q.push_back(Unitary2::identity());
    for (const auto& s : seq.segments)
        q.push_back(segment_unitary(s) * q.back());
    return q;
}

// 3x3 real rotation, row-major.
struct HistoryMatrix {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int r, int c) const { return m[3 * r + c]; }
    double& operator()(int r, int c) { return m[3 * r + c]; }

    double orthogonality_defect() const {
        double d = 0.0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double dot = 0.0;
                for (int k = 0; k < 3; ++k)
                    dot += (*this)(r, k) * (*this)(c, k);
                d = std::max(d, std::abs(dot - (r == c ? 1.0 : 0.0)));
            }
        return d;
    }

    double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7])
             - m[1] * (m[3] * m[8] - m[5] * m[6])
             + m[2] * (m[3] * m[7] - m[4] * m[6]);
    }
};

// Adjoint image Lambda_ij = Tr[Q^dag sigma_i Q sigma_j] / 2 of a unitary:
// the SO(3) rotation it induces on the Pauli axes.
inline HistoryMatrix history_matrix(const Unitary2& q) {
    const auto& sigma = pauli_matrices();
    HistoryMatrix lambda;
    const Unitary2 qd = q.dagger();
    for (int i = 0; i < 3; ++i) {
        const Unitary2 rotated = qd * sigma[i] * q;
        for (int j = 0; j < 3; ++j) {
            const Unitary2& sj = sigma[j];
            const cplx tr = rotated.m[0] * sj.m[0] + rotated.m[1] * sj.m[2]
                          + rotated.m[2] * sj.m[1] + rotated.m[3] * sj.m[3];
            lambda(i, j) = 0.5 * tr.real();
        }
    }
    return lambda;
}

// Total accumulated rotation angle (signed by the as-constructed Rabi sign)
// and the effective rotation angle modulo 2pi.
struct TotalRotation {
    double big_theta = 0.0;
    double theta_eff = 0.0;
};

inline TotalRotation total_rotation(const ControlSequence& seq) {
    TotalRotation t;
    for (const auto& s : seq.segments)
        t.big_theta += s.signed_theta();
    t.theta_eff = std::fmod(t.big_theta, two_pi);
    if (t.theta_eff < 0.0)
        t.theta_eff += two_pi;
    return t;
}

} // namespace walshctl

#endif
