#ifndef LONGWAVE_KDV_HPP
#define LONGWAVE_KDV_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <tuple>

#include "longwave/errors.hpp"
#include "longwave/grid.hpp"
#include "longwave/spectral.hpp"

// KdV solver and diagnostics for
//   eta_t + eta_x + eps (3/2) eta eta_x + mu (1/6) eta_xxx = 0.
// Time integration is integrating-factor RK4: the linear symbol
// i(mu k^3/6 - k) is propagated exactly, the nonlinear flux is evaluated
// pseudospectrally in conservation form with 2/3-rule dealiasing.

namespace longwave {

struct KdVState {
    RealField eta;
    double time = 0.0;
};

inline constexpr double kKdVAmplitudeGuard = 10.0;

// Right side eta_t = -eta_x - eps(3/4)(eta^2)_x - mu/6 eta_xxx,
// nonlinear term in conservation (flux) form so the spatial mean is
// preserved exactly.
inline RealField kdv_rhs(const RealField& eta, const ModelParams& p) {
    RealField flux = dealias(eta * eta);
    flux *= p.eps * 0.75;
    flux += eta;
    RealField out = -derivative(flux, 1);
    out -= (p.mu / 6.0) * derivative(eta, 3);
    return out;
}

// Directional derivative of kdv_rhs at eta in direction w.
inline RealField kdv_rhs_jacobian_apply(const RealField& eta, const RealField& w,
                                        const ModelParams& p) {
    RealField flux = dealias(eta * w);
    flux *= p.eps * 1.5;
    flux += w;
    RealField out = -derivative(flux, 1);
    out -= (p.mu / 6.0) * derivative(w, 3);
    return out;
}

// Exact sech^2 traveling wave: eta = A sech^2(K(x - x0 - c t)) with
// c = 1 + eps A/2 and K = sqrt(3 eps A / (4 mu)).
struct Soliton {
    double amplitude;
    double center;
    ModelParams params;

    double speed() const { return 1.0 + params.eps * amplitude / 2.0; }
    double width_k() const {
        return std::sqrt(3.0 * params.eps * amplitude / (4.0 * params.mu));
    }
    RealField sample(const Grid1D& grid, double t = 0.0) const {
        const double c = speed();
        const double K = width_k();
        const double a = amplitude;
        const double x0 = center;
        return RealField::sample(grid, [=](double x) {
            const double s = 1.0 / std::cosh(K * (x - x0 - c * t));
            return a * s * s;
        });
    }
};

class KdVStepper {
public:
    KdVStepper(const Grid1D& grid, const ModelParams& p, double dt)
        : grid_(grid), p_(p), dt_(dt) {
        if (!(dt > 0.0)) throw std::invalid_argument("KdVStepper: dt must be > 0");
        if (dt > grid.dx())
            throw std::invalid_argument("KdVStepper: dt exceeds dx CFL bound");
        const int nm = grid.num_modes();
        half_.resize(nm);
        full_.resize(nm);
        for (int m = 0; m < nm; ++m) {
            const double k = grid.wavenumber(m);
            const double omega = p.mu * k * k * k / 6.0 - k;  // eta_t = i*omega*eta
            half_[m] = std::exp(std::complex<double>(0.0, omega * dt / 2.0));
            full_[m] = half_[m] * half_[m];
        }
    }

    double dt() const { return dt_; }

    KdVState step(const KdVState& state) const {
        if (state.eta.grid() != grid_)
            throw std::invalid_argument("KdVStepper: grid mismatch");
        Spectrum v = to_spectrum(state.eta);
        const Spectrum k1 = nonlinear(v);
        Spectrum u = shifted(v, k1, dt_ / 2.0);
        const Spectrum k2 = nonlinear(u);
        u = v;
        apply(u, half_);
        add_scaled(u, k2, dt_ / 2.0);
        const Spectrum k3 = nonlinear(u);
        u = shifted_mult(v, full_);
        {
            Spectrum ek3 = k3;
            apply(ek3, half_);
            add_scaled(u, ek3, dt_);
        }
        const Spectrum k4 = nonlinear(u);

        Spectrum out = shifted_mult(v, full_);
        Spectrum t = k1;
        apply(t, full_);
        add_scaled(out, t, dt_ / 6.0);
        t = k2;
        apply(t, half_);
        add_scaled(out, t, dt_ / 3.0);
        t = k3;
        apply(t, half_);
        add_scaled(out, t, dt_ / 3.0);
        add_scaled(out, k4, dt_ / 6.0);

        KdVState next{from_spectrum(grid_, out), state.time + dt_};
        if (!next.eta.all_finite() || norm_linf(next.eta) > kKdVAmplitudeGuard)
            throw BlowUpError("KdV solution exceeded amplitude guard");
        return next;
    }

private:
    // N(v) = -eps(3/4) ik dealias((eta^2)^), evaluated pseudospectrally
    Spectrum nonlinear(const Spectrum& v) const {
        RealField eta = from_spectrum(grid_, v);
        Spectrum s = to_spectrum(eta * eta);
        dealias_spectrum(s, grid_.size());
        const int nyq = grid_.size() / 2;
        for (int m = 0; m <= nyq; ++m) {
            const double k = grid_.wavenumber(m);
            s[static_cast<std::size_t>(m)] *=
                std::complex<double>(0.0, -p_.eps * 0.75 * k);
        }
        s[static_cast<std::size_t>(nyq)] = 0.0;
        return s;
    }

    static void apply(Spectrum& v, const Spectrum& mult) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= mult[i];
    }
    static void add_scaled(Spectrum& v, const Spectrum& w, double a) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += a * w[i];
    }
    Spectrum shifted(const Spectrum& v, const Spectrum& k, double a) const {
        Spectrum out = v;
        add_scaled(out, k, a);
        apply(out, half_);
        return out;
    }
    Spectrum shifted_mult(const Spectrum& v, const Spectrum& mult) const {
        Spectrum out = v;
        apply(out, mult);
        return out;
    }

    Grid1D grid_;
    ModelParams p_;
    double dt_;
    Spectrum half_, full_;
};

inline KdVState kdv_step(const KdVState& state, double dt, const ModelParams& p) {
    return KdVStepper(state.eta.grid(), p, dt).step(state);
}

// First three conserved integrals:
//   int eta,  int eta^2,  int (mu/(3 eps)) eta_x^2 - eta^3.
inline std::tuple<double, double, double>
conserved_integrals(const RealField& eta, const ModelParams& p) {
    const double i1 = integral(eta);
    const double i2 = integral(eta * eta);
    RealField ex = derivative(eta, 1);
    RealField third = (p.mu / (3.0 * p.eps)) * (ex * ex) - eta * eta * eta;
    return {i1, i2, integral(third)};
}

// Mass flux through a cross section: eta + eps(3/4) eta^2 + mu/6 eta_xx.
inline RealField mass_flux(const RealField& eta, const ModelParams& p) {
    RealField out = eta;
    out += (p.eps * 0.75) * dealias(eta * eta);
    out += (p.mu / 6.0) * derivative(eta, 2);
    return out;
}

// Approximate momentum density I; identical expression to the mass flux.
inline RealField momentum_density_I(const RealField& eta, const ModelParams& p) {
    return mass_flux(eta, p);
}

// eta_xt obtained by substituting the evolution equation (no time history).
inline RealField eta_xt(const RealField& eta, const ModelParams& p) {
    return derivative(kdv_rhs(eta, p), 1);
}

// Reconstructed velocity v_KdV = eta - eps/4 eta^2 - mu/6 eta_xt.
inline RealField kdv_velocity(const RealField& eta, const ModelParams& p) {
    RealField out = eta;
    out -= (p.eps * 0.25) * dealias(eta * eta);
    out -= (p.mu / 6.0) * eta_xt(eta, p);
    return out;
}

// Time derivative of v_KdV along the flow, again by substituting the
// equation: v_t = eta_t - eps/2 eta eta_t - mu/6 d_x(eta_tt),
// eta_tt = DF(eta)[eta_t].
inline RealField kdv_velocity_time_derivative(const RealField& eta,
                                              const ModelParams& p) {
    RealField et = kdv_rhs(eta, p);
    RealField ett = kdv_rhs_jacobian_apply(eta, et, p);
    RealField out = et;
    out -= (p.eps * 0.5) * dealias(eta * et);
    out -= (p.mu / 6.0) * derivative(ett, 1);
    return out;
}

}  // namespace longwave

#endif  // LONGWAVE_KDV_HPP
