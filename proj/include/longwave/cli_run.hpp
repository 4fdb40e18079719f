#ifndef LONGWAVE_CLI_RUN_HPP
#define LONGWAVE_CLI_RUN_HPP

#include <cstdio>
#include <filesystem>
#include <string>

#include "longwave/cli_config.hpp"
#include "longwave/output.hpp"

// Workflow execution behind the CLI subcommands.

namespace longwave {

namespace detail_cli {

inline std::string csv_head(const std::string& columns, double eps, double mu) {
    std::string out;
    out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
    out += "# eps=" + format_double(eps) + " mu=" + format_double(mu) + "\n";
    out += columns + "\n";
    return out;
}

inline std::string mu_tag(double mu) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", mu);
    return buf;
}

inline nlohmann::ordered_json timeseries_rows_json(const RunResult& r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        nlohmann::ordered_json row;
        row["t"] = r.times[i];
        row["E_momentum"] = r.e_momentum[i];
        row["E_kdv_pair_linf"] = r.e_kdv_pair_linf[i];
        row["E_ww_pair_linf"] = r.e_ww_pair_linf[i];
        row["E_kdv_pair_hsmu"] = r.e_kdv_pair_hsmu[i];
        row["E_ww_pair_hsmu"] = r.e_ww_pair_hsmu[i];
        row["residual_r_linf"] = r.residual_r_linf[i];
        row["residual_R_linf"] = r.residual_R_linf[i];
        row["proofbound_linf"] = r.proofbound_linf[i];
        row["mass_kdv"] = r.mass_kdv[i];
        row["mass_peregrine"] = r.mass_peregrine[i];
        row["mass_ww"] = r.mass_ww[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string timeseries_json_doc(const RunResult& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["eps"] = r.eps;
    j["mu"] = r.mu;
    j["rows"] = timeseries_rows_json(r);
    return j.dump(2) + "\n";
}

inline void write_timeseries(const std::filesystem::path& dir,
                             const std::string& stem, const RunConfig& cfg,
                             const RunResult& r) {
    if (cfg.format == "json")
        atomic_write(dir / (stem + ".json"), timeseries_json_doc(r));
    else
        atomic_write(dir / (stem + ".csv"), timeseries_csv(r));
}

inline void progress(const std::string& msg) {
    std::fprintf(stderr, "%s\n", msg.c_str());
}

}  // namespace detail_cli

inline int run_single_kdv(const RunConfig& cfg) {
    const ModelParams p(cfg.effective_eps(), cfg.mu);
    const Grid1D grid(cfg.length, cfg.n);
    RealField eta0 = dealias(cfg.make_profile().sample(grid, p));
    check_localized(eta0);
    const double dt0 = cfg.effective_dt(norm_linf(eta0));
    const int steps_per_sample =
        std::max(1, static_cast<int>(std::llround(cfg.sample_dt / dt0)));
    const double dt = cfg.sample_dt / steps_per_sample;
    const int samples = static_cast<int>(std::llround(cfg.horizon / cfg.sample_dt));

    KdVStepper stepper(grid, p, dt);
    KdVState st{eta0, 0.0};
    std::string body = detail_cli::csv_head(
        "t,mass,l2_momentum,energy,linf", p.eps, p.mu);
    auto row = [&](double t) {
        auto [i1, i2, i3] = conserved_integrals(st.eta, p);
        body += format_double(t) + "," + format_double(i1) + "," +
                format_double(i2) + "," + format_double(i3) + "," +
                format_double(norm_linf(st.eta)) + "\n";
    };
    row(0.0);
    for (int sample = 1; sample <= samples; ++sample) {
        for (int i = 0; i < steps_per_sample; ++i) st = stepper.step(st);
        st.time = sample * cfg.sample_dt;
        row(st.time);
        detail_cli::progress("run-kdv t=" + format_double(st.time));
    }
    atomic_write(std::filesystem::path(cfg.out_dir) / "kdv_timeseries.csv", body);
    return 0;
}

inline int run_single_peregrine(const RunConfig& cfg) {
    const ModelParams p(cfg.effective_eps(), cfg.mu);
    const Grid1D grid(cfg.length, cfg.n);
    RealField xi0 = dealias(cfg.make_profile().sample(grid, p));
    check_localized(xi0);
    RealField u0 = kdv_velocity(xi0, p);  // right-moving companion velocity
    const double dt0 = cfg.effective_dt(norm_linf(xi0));
    const int steps_per_sample =
        std::max(1, static_cast<int>(std::llround(cfg.sample_dt / dt0)));
    const double dt = cfg.sample_dt / steps_per_sample;
    const int samples = static_cast<int>(std::llround(cfg.horizon / cfg.sample_dt));

    PeregrineState st{xi0, u0, 0.0};
    std::string body = detail_cli::csv_head(
        "t,mass_xi,dispersive_momentum,linf_xi,linf_u", p.eps, p.mu);
    auto row = [&](double t) {
        body += format_double(t) + "," + format_double(integral(st.xi)) + "," +
                format_double(dispersive_momentum(st.u, p)) + "," +
                format_double(norm_linf(st.xi)) + "," +
                format_double(norm_linf(st.u)) + "\n";
    };
    row(0.0);
    for (int sample = 1; sample <= samples; ++sample) {
        for (int i = 0; i < steps_per_sample; ++i) st = peregrine_step(st, dt, p);
        st.time = sample * cfg.sample_dt;
        row(st.time);
        detail_cli::progress("run-peregrine t=" + format_double(st.time));
    }
    atomic_write(std::filesystem::path(cfg.out_dir) / "peregrine_timeseries.csv",
                 body);
    return 0;
}

inline int run_single_waterwave(const RunConfig& cfg) {
    const ModelParams p(cfg.effective_eps(), cfg.mu);
    const Grid1D grid(cfg.length, cfg.n);
    const VerticalGrid vg(cfg.nz);
    WaterWaveSolver solver(grid, vg, p);
    CoupledInitialData init =
        build_coupled_initial_data(cfg.make_profile(), p, solver);
    const double dt0 = cfg.effective_dt(norm_linf(init.zeta0));
    const int steps_per_sample =
        std::max(1, static_cast<int>(std::llround(cfg.sample_dt / dt0)));
    const double dt = cfg.sample_dt / steps_per_sample;
    const int samples = static_cast<int>(std::llround(cfg.horizon / cfg.sample_dt));

    WaterWaveState st{init.zeta0, init.phi0, 0.0, init.flow};
    std::string body =
        detail_cli::csv_head("t,mass_zeta,energy,linf_zeta", p.eps, p.mu);
    auto row = [&](double t) {
        body += format_double(t) + "," + format_double(integral(st.zeta)) + "," +
                format_double(solver.energy(st)) + "," +
                format_double(norm_linf(st.zeta)) + "\n";
    };
    row(0.0);
    for (int sample = 1; sample <= samples; ++sample) {
        for (int i = 0; i < steps_per_sample; ++i) st = solver.step(st, dt);
        st.time = sample * cfg.sample_dt;
        row(st.time);
        detail_cli::progress("run-waterwave t=" + format_double(st.time));
    }
    atomic_write(std::filesystem::path(cfg.out_dir) / "waterwave_timeseries.csv",
                 body);
    return 0;
}

inline int run_compare(const RunConfig& cfg) {
    const double dt = cfg.effective_dt(cfg.amplitude);
    RunResult r = run_triple(cfg.to_triple(dt));
    detail_cli::write_timeseries(cfg.out_dir, "timeseries", cfg, r);
    detail_cli::progress("compare: wrote " + cfg.out_dir + "/timeseries." +
                         cfg.format);
    return 0;
}

inline int run_sweep(const RunConfig& cfg) {
    const double dt = cfg.effective_dt(cfg.amplitude);
    SweepReport report = convergence_study(cfg.to_sweep(dt));
    const std::filesystem::path dir(cfg.out_dir);
    for (const RunResult& r : report.runs) {
        detail_cli::write_timeseries(dir, "timeseries_mu" + detail_cli::mu_tag(r.mu),
                                     cfg, r);
        detail_cli::progress("sweep: finished mu=" + detail_cli::mu_tag(r.mu));
    }
    atomic_write(dir / "rates.json", rates_json(report));
    detail_cli::progress("sweep: wrote " + (dir / "rates.json").string());
    return 0;
}

inline int run_selftest(const RunConfig&) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& name) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
        if (!ok) ++failures;
    };

    Grid1D grid(80.0, 128);
    ModelParams p(0.04, 0.04);
    {
        VerticalGrid vg(16);
        WaterWaveSolver solver(grid, vg, p);
        const double k = grid.wavenumber(3);
        const double X = std::sqrt(p.mu) * k;
        RealField phi =
            RealField::sample(grid, [&](double x) { return std::cos(k * x); });
        RealField G = solver.dirichlet_neumann(RealField(grid), phi);
        RealField expect = RealField::sample(grid, [&](double x) {
            return std::sqrt(p.mu) * k * std::tanh(X) * std::cos(k * x);
        });
        check(norm_linf(G - expect) <= 1e-9, "flat-strip DNO multiplier");
    }
    {
        Grid1D fine(80.0, 512);
        Soliton sol{1.0, 40.0, p};
        KdVState st{dealias(sol.sample(fine)), 0.0};
        KdVStepper stepper(fine, p, 5e-3);
        for (int i = 0; i < 100; ++i) st = stepper.step(st);
        check(norm_linf(st.eta - sol.sample(fine, st.time)) <= 1e-5,
              "KdV soliton transport");
    }
    {
        PeregrineState st{RealField(grid), RealField(grid), 0.0};
        st = peregrine_step(st, 0.01, p);
        check(norm_linf(st.xi) == 0.0 && norm_linf(st.u) == 0.0,
              "Peregrine rest state fixed point");
    }
    return failures == 0 ? 0 : 1;
}

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"pseudospectral long-wave model suite"};
    RunConfig cfg;
    setup_cli(app, cfg);
    select_config_reader(app, argc, argv);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; any malformed input exits 2
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        cfg.validate();
        if (app.got_subcommand("run-kdv")) return run_single_kdv(cfg);
        if (app.got_subcommand("run-peregrine")) return run_single_peregrine(cfg);
        if (app.got_subcommand("run-waterwave")) return run_single_waterwave(cfg);
        if (app.got_subcommand("compare")) return run_compare(cfg);
        if (app.got_subcommand("sweep")) return run_sweep(cfg);
        if (app.got_subcommand("selftest")) return run_selftest(cfg);
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return 2;
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const BlowUpError& e) {
        std::fprintf(stderr, "solver failure (blow-up): %s\n", e.what());
        return 1;
    } catch (const DepthError& e) {
        std::fprintf(stderr, "solver failure (depth): %s\n", e.what());
        return 1;
    } catch (const EllipticError& e) {
        std::fprintf(stderr, "solver failure (elliptic): %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace longwave

#endif  // LONGWAVE_CLI_RUN_HPP
