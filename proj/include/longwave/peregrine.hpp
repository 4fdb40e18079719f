#ifndef LONGWAVE_PEREGRINE_HPP
#define LONGWAVE_PEREGRINE_HPP

#include <cmath>
#include <stdexcept>
#include <utility>

#include "longwave/errors.hpp"
#include "longwave/grid.hpp"
#include "longwave/spectral.hpp"

// Peregrine system for surface elevation xi and depth-averaged velocity u:
//   xi_t + [(1 + eps xi) u]_x = 0,
//   (1 - mu/3 d_x^2) u_t = -xi_x - eps u u_x.
// The nonlocal operator is inverted by its Fourier symbol 1/(1 + mu k^2/3).
// Both nonlinear terms are kept in flux form so that int(xi) and
// int(u - mu/3 u_xx) are conserved exactly by the semi-discretization.

namespace longwave {

struct PeregrineState {
    RealField xi;
    RealField u;
    double time = 0.0;
};

inline void check_depth(const RealField& surface, double eps) {
    double mn = surface[0];
    for (double v : surface.values()) mn = std::min(mn, v);
    if (!(1.0 + eps * mn > 0.0))
        throw DepthError("total depth 1 + eps*min(surface) is non-positive");
}

// Apply (1 - mu/3 d_x^2)^{-1}.
inline RealField helmholtz_inverse(const RealField& f, double mu) {
    const Grid1D& g = f.grid();
    Spectrum s = to_spectrum(f);
    for (int m = 0; m <= g.size() / 2; ++m) {
        const double k = g.wavenumber(m);
        s[static_cast<std::size_t>(m)] /= 1.0 + mu * k * k / 3.0;
    }
    return from_spectrum(g, s);
}

inline std::pair<RealField, RealField>
peregrine_rhs(const PeregrineState& st, const ModelParams& p) {
    check_depth(st.xi, p.eps);
    RealField flux1 = st.u;
    flux1 += p.eps * dealias(st.xi * st.u);
    RealField xi_t = -derivative(flux1, 1);

    RealField flux2 = st.xi;
    flux2 += (p.eps * 0.5) * dealias(st.u * st.u);
    RealField u_t = helmholtz_inverse(-derivative(flux2, 1), p.mu);
    return {std::move(xi_t), std::move(u_t)};
}

// Classical RK4 step.
inline PeregrineState peregrine_step(const PeregrineState& st, double dt,
                                     const ModelParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("peregrine_step: dt must be > 0");
    auto [k1x, k1u] = peregrine_rhs(st, p);
    PeregrineState s2{st.xi + (dt / 2.0) * k1x, st.u + (dt / 2.0) * k1u,
                      st.time + dt / 2.0};
    auto [k2x, k2u] = peregrine_rhs(s2, p);
    PeregrineState s3{st.xi + (dt / 2.0) * k2x, st.u + (dt / 2.0) * k2u,
                      st.time + dt / 2.0};
    auto [k3x, k3u] = peregrine_rhs(s3, p);
    PeregrineState s4{st.xi + dt * k3x, st.u + dt * k3u, st.time + dt};
    auto [k4x, k4u] = peregrine_rhs(s4, p);

    PeregrineState out{
        st.xi + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        st.u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        st.time + dt};
    if (!out.xi.all_finite() || !out.u.all_finite())
        throw BlowUpError("Peregrine solution became non-finite");
    check_depth(out.xi, p.eps);
    return out;
}

// Conserved density of the second equation: u - mu/3 u_xx.
inline double dispersive_momentum(const RealField& u, const ModelParams& p) {
    return integral(u - (p.mu / 3.0) * derivative(u, 2));
}

// Raw residuals of an arbitrary pair (xi, v) under the two Peregrine
// operators (the consistency defect; for a consistent family these are
// eps^2 * bounded):
//   r = xi_t + [(1 + eps xi) v]_x,
//   R = v_t - mu/3 v_xxt + xi_x + eps v v_x.
// Time-derivative fields are supplied by the caller (for KdV pairs they
// come from substituting the KdV equation).
inline std::pair<RealField, RealField>
consistency_residuals(const RealField& xi, const RealField& v,
                      const RealField& xi_t, const RealField& v_t,
                      const RealField& v_xxt, const ModelParams& p) {
    RealField flux1 = v;
    flux1 += p.eps * dealias(xi * v);
    RealField r = xi_t + derivative(flux1, 1);

    RealField flux2 = xi;
    flux2 += (p.eps * 0.5) * dealias(v * v);
    RealField R = v_t - (p.mu / 3.0) * v_xxt + derivative(flux2, 1);
    return {std::move(r), std::move(R)};
}

}  // namespace longwave

#endif  // LONGWAVE_PEREGRINE_HPP
