#ifndef LONGWAVE_EXPERIMENTS_HPP
#define LONGWAVE_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "longwave/errors.hpp"
#include "longwave/grid.hpp"
#include "longwave/kdv.hpp"
#include "longwave/peregrine.hpp"
#include "longwave/spectral.hpp"
#include "longwave/waterwave.hpp"

// Coupled runs of the three models (KdV / Peregrine / ZCS water waves)
// from shared initial data, the error quantities of the convergence
// estimates, and log-log rate fits across mu-sweeps.

namespace longwave {

struct InitialProfile {
    enum class Shape { gaussian, sech2, soliton };
    Shape shape = Shape::gaussian;
    double amplitude = 1.0;
    double width = 2.0;
    double center = 0.0;  // 0 means cell midpoint

    RealField sample(const Grid1D& grid, const ModelParams& p) const {
        const double x0 = (center == 0.0) ? grid.length() / 2.0 : center;
        switch (shape) {
            case Shape::gaussian:
                return RealField::sample(grid, [&](double x) {
                    const double r = (x - x0) / width;
                    return amplitude * std::exp(-r * r);
                });
            case Shape::sech2:
                return RealField::sample(grid, [&](double x) {
                    const double s = 1.0 / std::cosh((x - x0) / width);
                    return amplitude * s * s;
                });
            case Shape::soliton:
                return Soliton{amplitude, x0, p}.sample(grid);
        }
        throw std::logic_error("InitialProfile: unknown shape");
    }
};

inline InitialProfile::Shape profile_shape_from_string(const std::string& s) {
    if (s == "gaussian") return InitialProfile::Shape::gaussian;
    if (s == "sech2") return InitialProfile::Shape::sech2;
    if (s == "soliton") return InitialProfile::Shape::soliton;
    throw std::invalid_argument("unknown profile shape: " + s);
}

// Localization: the periodic cell stands in for the real line, so the
// solution must stay negligible at the cell edges.
inline double edge_magnitude(const RealField& f) {
    const int n = f.size();
    return std::max(std::abs(f[0]), std::abs(f[n - 1]));
}

inline void check_localized(const RealField& f, double tol = 1e-8) {
    if (edge_magnitude(f) > tol)
        throw std::runtime_error("field is not localized: cell-edge magnitude " +
                                 std::to_string(edge_magnitude(f)));
}

struct CoupledInitialData {
    RealField eta0;   // KdV
    RealField xi0;    // Peregrine surface
    RealField u0;     // Peregrine velocity
    RealField zeta0;  // ZCS surface
    RealField phi0;   // ZCS surface potential trace (periodic part)
    double flow = 0.0;  // background flow carrying the mean of v_KdV
};

// Shared right-moving initial data.  The surface is the profile for all
// three models.  The surface potential trace is chosen so that the
// averaged Euler velocity matches v_KdV(eta0) up to O(eps mu): the trace
// derivative is the flat-strip depth-averaging multiplier tanh(X)/X
// (X = sqrt(mu) k) inverted on the mean-free part of v_KdV, and the mean
// itself rides on the background flow (a periodic trace cannot carry it).
// u0 is then recomputed exactly from (zeta0, Phi0) through the elliptic
// solve, so the Peregrine coupling u0 = V-bar(0) holds by construction.
inline CoupledInitialData
build_coupled_initial_data(const InitialProfile& profile, const ModelParams& p,
                           const WaterWaveSolver& solver) {
    const Grid1D& grid = solver.grid();
    RealField zeta0 = dealias(profile.sample(grid, p));
    check_localized(zeta0);

    RealField v0 = kdv_velocity(zeta0, p);
    const double vmean = mean(v0);
    Spectrum s = to_spectrum(v0);
    s[0] = 0.0;
    const int nyq = grid.size() / 2;
    for (int m = 1; m <= nyq; ++m) {
        const double X = std::sqrt(p.mu) * grid.wavenumber(m);
        s[static_cast<std::size_t>(m)] *= X / std::tanh(X);
    }
    RealField w0 = from_spectrum(grid, s);
    RealField phi0 = antiderivative(w0);

    PotentialField pf = solver.solve_potential(zeta0, phi0, vmean);
    RealField u0 = averaged_velocity(pf, solver);

    return CoupledInitialData{zeta0, zeta0, std::move(u0), zeta0,
                              std::move(phi0), vmean};
}

// || int phi_x dz - I(eta) ||_Linf at a common time.
inline double momentum_error(const WaterWaveState& ww, const KdVState& kdv,
                             const WaterWaveSolver& solver) {
    if (std::abs(ww.time - kdv.time) > 1e-10)
        throw std::invalid_argument("momentum_error: states at different times");
    PotentialField pf = solver.solve_potential(ww.zeta, ww.phi_s, ww.flow);
    RealField q = momentum_density_exact(pf, solver);
    return norm_linf(q - momentum_density_I(kdv.eta, solver.params()));
}

struct PairError {
    double linf = 0.0;   // max over surface/velocity Linf errors
    double hs_mu = 0.0;  // H^s x H^s_mu metric of the stability estimate
};

inline PairError pair_error_fields(const RealField& surf_a, const RealField& vel_a,
                                   const RealField& surf_b, const RealField& vel_b,
                                   const ModelParams& p, double s) {
    RealField ds = surf_a - surf_b;
    RealField dv = vel_a - vel_b;
    PairError e;
    e.linf = std::max(norm_linf(ds), norm_linf(dv));
    e.hs_mu = std::max(norm_hs_mu(ds, s, 0.0), norm_hs_mu(dv, s, p.mu));
    return e;
}

inline PairError pair_error_kdv(const KdVState& kdv, const PeregrineState& pg,
                                const ModelParams& p, double s) {
    if (std::abs(kdv.time - pg.time) > 1e-10)
        throw std::invalid_argument("pair_error_kdv: states at different times");
    return pair_error_fields(kdv.eta, kdv_velocity(kdv.eta, p), pg.xi, pg.u, p, s);
}

inline PairError pair_error_ww(const WaterWaveState& ww, const PeregrineState& pg,
                               const WaterWaveSolver& solver, double s) {
    if (std::abs(ww.time - pg.time) > 1e-10)
        throw std::invalid_argument("pair_error_ww: states at different times");
    PotentialField pf = solver.solve_potential(ww.zeta, ww.phi_s, ww.flow);
    RealField vbar = averaged_velocity(pf, solver);
    return pair_error_fields(ww.zeta, vbar, pg.xi, pg.u, solver.params(), s);
}

struct TripleConfig {
    double length = 80.0;
    int n = 512;
    int nz = 24;
    double eps = 0.04;
    double mu = 0.04;
    InitialProfile profile;
    double dt = 0.01;
    double horizon = 5.0;
    double sample_dt = 0.25;
    double sobolev_s = 2.0;

    void validate() const {
        if (!(dt > 0.0 && horizon > 0.0 && sample_dt > 0.0))
            throw std::invalid_argument("TripleConfig: dt, T, sample_dt must be > 0");
        if (sample_dt < dt)
            throw std::invalid_argument("TripleConfig: sample_dt < dt");
    }
};

struct RunResult {
    double eps = 0.0;
    double mu = 0.0;
    std::vector<double> times;
    std::vector<double> e_momentum;
    std::vector<double> e_kdv_pair_linf;
    std::vector<double> e_ww_pair_linf;
    std::vector<double> e_kdv_pair_hsmu;
    std::vector<double> e_ww_pair_hsmu;
    std::vector<double> residual_r_linf;
    std::vector<double> residual_R_linf;
    std::vector<double> proofbound_linf;
    std::vector<double> mass_kdv;
    std::vector<double> mass_peregrine;
    std::vector<double> mass_ww;

    // sup over sampled t <= t_max of series(t) / (1 + t)
    double sup_weighted(const std::vector<double>& series,
                        double t_max = 1e30) const {
        double m = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] <= t_max + 1e-12)
                m = std::max(m, series[i] / (1.0 + times[i]));
        return m;
    }
    double sup_plain(const std::vector<double>& series, double t_max = 1e30) const {
        double m = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] <= t_max + 1e-12) m = std::max(m, series[i]);
        return m;
    }
};

// Step all three models from coupled data, sampling every error quantity.
inline RunResult run_triple(const TripleConfig& cfg) {
    cfg.validate();
    const ModelParams p(cfg.eps, cfg.mu);
    const Grid1D grid(cfg.length, cfg.n);
    const VerticalGrid vg(cfg.nz);
    WaterWaveSolver solver(grid, vg, p);

    CoupledInitialData init = build_coupled_initial_data(cfg.profile, p, solver);

    const int steps_per_sample =
        std::max(1, static_cast<int>(std::llround(cfg.sample_dt / cfg.dt)));
    const double dt = cfg.sample_dt / steps_per_sample;
    const int num_samples = static_cast<int>(std::llround(cfg.horizon / cfg.sample_dt));

    KdVStepper kdv_stepper(grid, p, dt);
    KdVState kdv{init.eta0, 0.0};
    PeregrineState pg{init.xi0, init.u0, 0.0};
    WaterWaveState ww{init.zeta0, init.phi0, 0.0, init.flow};

    RunResult out;
    out.eps = cfg.eps;
    out.mu = cfg.mu;

    auto record = [&](double t) {
        PotentialField pf = solver.solve_potential(ww.zeta, ww.phi_s, ww.flow);
        RealField q = momentum_density_exact(pf, solver);
        RealField vbar = averaged_velocity(pf, solver);
        RealField vkdv = kdv_velocity(kdv.eta, p);

        out.times.push_back(t);
        out.e_momentum.push_back(norm_linf(q - momentum_density_I(kdv.eta, p)));
        PairError ek = pair_error_fields(kdv.eta, vkdv, pg.xi, pg.u, p, cfg.sobolev_s);
        PairError ew =
            pair_error_fields(ww.zeta, vbar, pg.xi, pg.u, p, cfg.sobolev_s);
        out.e_kdv_pair_linf.push_back(ek.linf);
        out.e_kdv_pair_hsmu.push_back(ek.hs_mu);
        out.e_ww_pair_linf.push_back(ew.linf);
        out.e_ww_pair_hsmu.push_back(ew.hs_mu);

        auto [r, R] = consistency_residuals(
            kdv.eta, vkdv, kdv_rhs(kdv.eta, p),
            kdv_velocity_time_derivative(kdv.eta, p),
            derivative(kdv_velocity_time_derivative(kdv.eta, p), 2), p);
        out.residual_r_linf.push_back(norm_linf(r));
        out.residual_R_linf.push_back(norm_linf(R));
        out.proofbound_linf.push_back(
            norm_linf(derivative(kdv.eta, 2) + eta_xt(kdv.eta, p)));

        out.mass_kdv.push_back(integral(kdv.eta));
        out.mass_peregrine.push_back(integral(pg.xi));
        out.mass_ww.push_back(integral(ww.zeta));

        check_localized(kdv.eta);
        check_localized(pg.xi);
        check_localized(ww.zeta);
    };

    record(0.0);
    for (int sample = 1; sample <= num_samples; ++sample) {
        for (int s = 0; s < steps_per_sample; ++s) {
            kdv = kdv_stepper.step(kdv);
            pg = peregrine_step(pg, dt, p);
            ww = solver.step(ww, dt);
        }
        // keep recorded times exact multiples of sample_dt
        const double t = sample * cfg.sample_dt;
        kdv.time = pg.time = ww.time = t;
        record(t);
    }
    return out;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<double, double>> points;  // (mu, E)
};

// Ordinary least squares of log E against log mu.
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_rate: need at least 3 points");
    const std::size_t n = points.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [mu, e] : points) {
        if (!(mu > 0.0) || !(e > 0.0))
            throw std::invalid_argument("fit_rate: points must be positive");
        const double x = std::log(mu);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12)
        throw std::invalid_argument("fit_rate: degenerate abscissa spread");
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (const auto& [mu, e] : points) {
        const double x = std::log(mu);
        const double y = std::log(e);
        const double f = fit.slope * x + fit.intercept;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = points;
    return fit;
}

struct SweepConfig {
    std::vector<double> mu_list = {0.08, 0.04, 0.02, 0.01};
    double eps_over_mu = 1.0;  // sweeps couple eps = eps_over_mu * mu
    TripleConfig base;
    int workers = 1;

    void validate() const {
        if (mu_list.size() < 3)
            throw std::invalid_argument("SweepConfig: need >= 3 mu values");
        for (std::size_t i = 1; i < mu_list.size(); ++i)
            if (!(mu_list[i] < mu_list[i - 1]))
                throw std::invalid_argument("SweepConfig: mu_list must be strictly decreasing");
        if (!(eps_over_mu > 0.0))
            throw std::invalid_argument("SweepConfig: eps_over_mu must be > 0");
        if (workers < 1)
            throw std::invalid_argument("SweepConfig: workers must be >= 1");
    }
};

struct SweepReport {
    SweepConfig config;
    std::vector<RunResult> runs;  // ordered like mu_list (decreasing mu)
    // family name -> fit of sup_t E(t)/(1+t) against mu
    std::map<std::string, RateFit> rates_weighted;
    // family name -> fit of E(T) against mu
    std::map<std::string, RateFit> rates_final;
};

inline const std::vector<std::string>& error_family_names() {
    static const std::vector<std::string> names = {
        "momentum",      "kdv_pair_linf", "ww_pair_linf", "kdv_pair_hsmu",
        "ww_pair_hsmu",  "residual_r",    "residual_R",   "proof_bound"};
    return names;
}

inline const std::vector<double>&
family_series(const RunResult& r, const std::string& name) {
    if (name == "momentum") return r.e_momentum;
    if (name == "kdv_pair_linf") return r.e_kdv_pair_linf;
    if (name == "ww_pair_linf") return r.e_ww_pair_linf;
    if (name == "kdv_pair_hsmu") return r.e_kdv_pair_hsmu;
    if (name == "ww_pair_hsmu") return r.e_ww_pair_hsmu;
    if (name == "residual_r") return r.residual_r_linf;
    if (name == "residual_R") return r.residual_R_linf;
    if (name == "proof_bound") return r.proofbound_linf;
    throw std::invalid_argument("unknown error family: " + name);
}

// The sweep value of a family for one run: sup_t E/(1+t), except the
// proof-bound quantity which the estimate states as sup over t <= 1.
inline double family_sweep_value(const RunResult& r, const std::string& name) {
    if (name == "proof_bound") return r.sup_plain(family_series(r, name), 1.0);
    return r.sup_weighted(family_series(r, name));
}

inline SweepReport convergence_study(const SweepConfig& sweep) {
    sweep.validate();
    const std::size_t n = sweep.mu_list.size();
    std::vector<RunResult> runs(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(n);

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            TripleConfig cfg = sweep.base;
            cfg.mu = sweep.mu_list[i];
            cfg.eps = sweep.eps_over_mu * cfg.mu;
            try {
                runs[i] = run_triple(cfg);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const int nw = std::min<int>(sweep.workers, static_cast<int>(n));
    if (nw <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw std::runtime_error("sweep point mu=" +
                                     std::to_string(sweep.mu_list[i]) +
                                     " failed: " + failures[i]);

    SweepReport report;
    report.config = sweep;
    report.runs = std::move(runs);
    for (const std::string& name : error_family_names()) {
        std::vector<std::pair<double, double>> pw, pf;
        for (const RunResult& r : report.runs) {
            pw.emplace_back(r.mu, family_sweep_value(r, name));
            pf.emplace_back(r.mu, family_series(r, name).back());
        }
        report.rates_weighted[name] = fit_rate(pw);
        report.rates_final[name] = fit_rate(pf);
    }
    return report;
}

}  // namespace longwave

#endif  // LONGWAVE_EXPERIMENTS_HPP
