#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "longwave/experiments.hpp"
#include "longwave/peregrine.hpp"

using namespace longwave;

namespace {
const Grid1D kGrid(80.0, 512);
const ModelParams kP(0.04, 0.04);

RealField gaussian(const Grid1D& g, double amp, double width, double x0) {
    return RealField::sample(g, [=](double x) {
        const double r = (x - x0) / width;
        return amp * std::exp(-r * r);
    });
}
}  // namespace

TEST_CASE("rest state has zero right side") {
    PeregrineState st{RealField(kGrid), RealField(kGrid), 0.0};
    auto [xt, ut] = peregrine_rhs(st, kP);
    CHECK(norm_linf(xt) == 0.0);
    CHECK(norm_linf(ut) == 0.0);
}

TEST_CASE("constant state is steady") {
    RealField a(kGrid), b(kGrid);
    a += 0.3;
    b += -0.2;
    auto [xt, ut] = peregrine_rhs(PeregrineState{a, b, 0.0}, kP);
    CHECK(norm_linf(xt) <= 1e-13);
    CHECK(norm_linf(ut) <= 1e-13);
}

TEST_CASE("linearized mode matches the analytic dispersion computation") {
    // xi = cos(kx), u = 0: the quadratic term vanishes identically, so
    // u_t = k sin(kx)/(1 + mu k^2/3) exactly
    const double k = 6.0 * 2.0 * M_PI / kGrid.length();
    RealField xi = RealField::sample(kGrid, [&](double x) { return std::cos(k * x); });
    auto [xt, ut] = peregrine_rhs(PeregrineState{xi, RealField(kGrid), 0.0}, kP);
    RealField expect = RealField::sample(kGrid, [&](double x) {
        return k * std::sin(k * x) / (1.0 + kP.mu * k * k / 3.0);
    });
    CHECK(norm_linf(ut - expect) <= 1e-12);
}

TEST_CASE("depth violation is signalled") {
    RealField deep(kGrid);
    deep += -1.0 / kP.eps - 0.1;
    CHECK_THROWS_AS(peregrine_rhs(PeregrineState{deep, RealField(kGrid), 0.0}, kP),
                    DepthError);
}

TEST_CASE("rest state is an exact fixed point of step") {
    PeregrineState st{RealField(kGrid), RealField(kGrid), 0.0};
    for (int i = 0; i < 5; ++i) st = peregrine_step(st, 0.01, kP);
    CHECK(norm_linf(st.xi) == 0.0);
    CHECK(norm_linf(st.u) == 0.0);
}

TEST_CASE("mass and dispersive momentum conservation over T = 10") {
    PeregrineState st{gaussian(kGrid, 0.8, 2.0, 40.0), gaussian(kGrid, 0.7, 2.0, 40.0),
                      0.0};
    st.xi = dealias(st.xi);
    st.u = dealias(st.u);
    const double m0 = integral(st.xi);
    const double q0 = dispersive_momentum(st.u, kP);
    for (int i = 0; i < 1000; ++i) st = peregrine_step(st, 0.01, kP);
    CHECK(std::abs(integral(st.xi) - m0) <= 1e-10);
    CHECK(std::abs(dispersive_momentum(st.u, kP) - q0) <= 1e-8);
}

TEST_CASE("dt-halving shows 4th-order self-convergence") {
    PeregrineState init{dealias(gaussian(kGrid, 1.0, 2.0, 40.0)),
                        dealias(gaussian(kGrid, 0.9, 2.0, 40.0)), 0.0};
    const double T = 0.5;
    auto run = [&](double dt) {
        PeregrineState st = init;
        const int n = static_cast<int>(std::llround(T / dt));
        for (int i = 0; i < n; ++i) st = peregrine_step(st, dt, kP);
        return st;
    };
    PeregrineState ref = run(T / 512.0);
    const double e1 = norm_linf(run(T / 16.0).xi - ref.xi);
    const double e2 = norm_linf(run(T / 32.0).xi - ref.xi);
    const double ratio = e1 / e2;
    CHECK(ratio > 11.0);
    CHECK(ratio < 21.0);
}

TEST_CASE("consistency residuals: zero pair and exact solution fields") {
    RealField zero(kGrid);
    auto [r0, R0] = consistency_residuals(zero, zero, zero, zero, zero, kP);
    CHECK(norm_linf(r0) == 0.0);
    CHECK(norm_linf(R0) == 0.0);

    // fields of an exact Peregrine solution: residuals vanish by definition
    PeregrineState st{dealias(gaussian(kGrid, 0.9, 2.5, 40.0)),
                      dealias(gaussian(kGrid, 0.8, 2.5, 40.0)), 0.0};
    auto [xt, ut] = peregrine_rhs(st, kP);
    auto [r, R] = consistency_residuals(st.xi, st.u, xt, ut, derivative(ut, 2), kP);
    CHECK(norm_linf(r) <= 1e-8);
    CHECK(norm_linf(R) <= 1e-8);
}

TEST_CASE("KdV pair residuals scale like eps^2") {
    std::vector<double> mus = {0.08, 0.04, 0.02, 0.01};
    std::vector<double> rv, Rv;
    for (double mu : mus) {
        ModelParams p(mu, mu);
        RealField eta = dealias(gaussian(kGrid, 1.0, 2.0, 40.0));
        RealField v = kdv_velocity(eta, p);
        RealField vt = kdv_velocity_time_derivative(eta, p);
        auto [r, R] = consistency_residuals(eta, v, kdv_rhs(eta, p), vt,
                                            derivative(vt, 2), p);
        rv.push_back(norm_linf(r));
        Rv.push_back(norm_linf(R));
    }
    const double span = std::log(mus.front() / mus.back());
    const double slope_r = std::log(rv.front() / rv.back()) / span;
    const double slope_R = std::log(Rv.front() / Rv.back()) / span;
    CHECK(slope_r > 1.7);
    CHECK(slope_r < 2.3);
    CHECK(slope_R > 1.7);
    CHECK(slope_R < 2.3);
}
