#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "longwave/experiments.hpp"

using namespace longwave;

TEST_CASE("profile localization guard") {
    Grid1D g(80.0, 256);
    ModelParams p(0.04, 0.04);
    InitialProfile wide{InitialProfile::Shape::gaussian, 1.0, 30.0, 0.0};
    CHECK_THROWS(check_localized(wide.sample(g, p)));
    InitialProfile ok{InitialProfile::Shape::gaussian, 1.0, 2.0, 0.0};
    CHECK_NOTHROW(check_localized(ok.sample(g, p)));
}

TEST_CASE("coupled initial data is self-consistent") {
    Grid1D g(80.0, 256);
    ModelParams p(0.04, 0.04);
    VerticalGrid vg(20);
    WaterWaveSolver solver(g, vg, p);
    InitialProfile prof{InitialProfile::Shape::gaussian, 1.0, 2.0, 0.0};
    CoupledInitialData d = build_coupled_initial_data(prof, p, solver);

    // the three surface fields coincide bitwise
    for (int j = 0; j < g.size(); ++j) {
        CHECK(d.eta0[j] == d.xi0[j]);
        CHECK(d.eta0[j] == d.zeta0[j]);
    }
    // u0 is exactly the averaged velocity of the elliptic solve
    solver.reset_warm_start();
    PotentialField pf = solver.solve_potential(d.zeta0, d.phi0, d.flow);
    RealField u = averaged_velocity(pf, solver);
    CHECK(norm_linf(u - d.u0) <= 1e-13);
    // the background flow carries the mean of the reconstructed velocity
    CHECK(d.flow == doctest::Approx(mean(kdv_velocity(d.eta0, p))).epsilon(1e-12));
}

TEST_CASE("momentum error: identical rest states give zero") {
    Grid1D g(80.0, 128);
    ModelParams p(0.04, 0.04);
    VerticalGrid vg(16);
    WaterWaveSolver solver(g, vg, p);
    WaterWaveState ww{RealField(g), RealField(g), 0.0};
    KdVState kdv{RealField(g), 0.0};
    CHECK(momentum_error(ww, kdv, solver) <= 1e-12);
    KdVState late{RealField(g), 1.0};
    CHECK_THROWS_AS(momentum_error(ww, late, solver), std::invalid_argument);
}

TEST_CASE("initial momentum error is O(mu^2) for coupled data") {
    Grid1D g(80.0, 256);
    VerticalGrid vg(20);
    InitialProfile prof{InitialProfile::Shape::gaussian, 1.0, 2.0, 0.0};
    std::vector<double> mus = {0.08, 0.04, 0.02, 0.01};
    std::vector<double> errs;
    for (double mu : mus) {
        ModelParams p(mu, mu);
        WaterWaveSolver solver(g, vg, p);
        CoupledInitialData d = build_coupled_initial_data(prof, p, solver);
        WaterWaveState ww{d.zeta0, d.phi0, 0.0, d.flow};
        KdVState kdv{d.eta0, 0.0};
        errs.push_back(momentum_error(ww, kdv, solver));
    }
    const double slope = std::log(errs.front() / errs.back()) /
                         std::log(mus.front() / mus.back());
    CHECK(slope > 1.6);
    CHECK(slope < 2.5);
}

TEST_CASE("pair errors: identical states and triangle inequality") {
    Grid1D g(80.0, 128);
    ModelParams p(0.04, 0.04);
    InitialProfile prof{InitialProfile::Shape::sech2, 0.8, 2.5, 0.0};
    RealField f = dealias(prof.sample(g, p));
    KdVState kdv{f, 0.0};
    PeregrineState pg{f, kdv_velocity(f, p), 0.0};
    PairError self = pair_error_kdv(kdv, pg, p, 2.0);
    CHECK(self.linf <= 1e-13);
    CHECK(self.hs_mu <= 1e-11);

    RealField h = RealField::sample(g, [&](double x) {
        const double r = (x - 35.0) / 3.0;
        return 0.5 * std::exp(-r * r);
    });
    auto dist = [&](const RealField& a, const RealField& b) {
        return pair_error_fields(a, a, b, b, p, 2.0).linf;
    };
    CHECK(dist(f, h) <= dist(f, RealField(g)) + dist(RealField(g), h) + 1e-12);
}

TEST_CASE("fit_rate: synthetic slopes") {
    std::vector<std::pair<double, double>> quad, lin;
    for (double mu : {0.08, 0.04, 0.02, 0.01}) {
        quad.emplace_back(mu, mu * mu);
        lin.emplace_back(mu, 3.0 * mu);
    }
    RateFit fq = fit_rate(quad);
    CHECK(fq.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fq.r2 == doctest::Approx(1.0).epsilon(1e-12));
    RateFit fl = fit_rate(lin);
    CHECK(fl.slope == doctest::Approx(1.0).epsilon(1e-12));

    // 1% multiplicative perturbation barely moves the slope
    std::vector<std::pair<double, double>> noisy;
    int sign = 1;
    for (double mu : {0.08, 0.04, 0.02, 0.01}) {
        noisy.emplace_back(mu, mu * mu * (1.0 + 0.01 * sign));
        sign = -sign;
    }
    RateFit fn = fit_rate(noisy);
    CHECK(std::abs(fn.slope - 2.0) < 0.05);
}

TEST_CASE("fit_rate rejects bad input") {
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, -0.5}, {0.02, 0.1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.1, 1.0}, {0.1, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("run_triple: determinism and sane output on a coarse run") {
    TripleConfig cfg;
    cfg.n = 256;
    cfg.nz = 12;
    cfg.eps = cfg.mu = 0.08;
    cfg.dt = 0.02;
    cfg.horizon = 0.5;
    cfg.sample_dt = 0.25;
    RunResult a = run_triple(cfg);
    RunResult b = run_triple(cfg);
    REQUIRE(a.times.size() == 3);
    CHECK(a.times[1] == 0.25);
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        CHECK(a.e_momentum[i] == b.e_momentum[i]);  // bitwise determinism
        CHECK(std::isfinite(a.e_momentum[i]));
        CHECK(std::isfinite(a.e_kdv_pair_hsmu[i]));
        CHECK(a.mass_kdv[i] == b.mass_kdv[i]);
    }
    CHECK(a.times.front() < a.times.back());
}

TEST_CASE("sweep config validation") {
    SweepConfig sw;
    sw.mu_list = {0.04, 0.08, 0.02};
    CHECK_THROWS_AS(sw.validate(), std::invalid_argument);
    sw.mu_list = {0.08, 0.04};
    CHECK_THROWS_AS(sw.validate(), std::invalid_argument);
    sw.mu_list = {0.08, 0.04, 0.02};
    CHECK_NOTHROW(sw.validate());
}

TEST_CASE("convergence_study on a coarse sweep produces finite fits") {
    SweepConfig sw;
    sw.mu_list = {0.08, 0.04, 0.02};
    sw.base.n = 256;
    sw.base.nz = 12;
    sw.base.dt = 0.02;
    sw.base.horizon = 0.5;
    sw.base.sample_dt = 0.25;
    sw.workers = 2;
    SweepReport rep = convergence_study(sw);
    REQUIRE(rep.runs.size() == 3);
    CHECK(rep.runs[0].mu == 0.08);
    CHECK(rep.runs[2].mu == 0.02);
    for (const auto& name : error_family_names()) {
        CHECK(std::isfinite(rep.rates_weighted.at(name).slope));
        CHECK(rep.rates_weighted.at(name).points.size() == 3);
    }
    // residuals of the KdV pair already scale ~ eps^2 on short horizons
    CHECK(rep.rates_weighted.at("residual_r").slope > 1.5);
}
