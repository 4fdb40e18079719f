#ifndef LONGWAVE_CLI_CONFIG_HPP
#define LONGWAVE_CLI_CONFIG_HPP

#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "longwave/experiments.hpp"

// Command-line / config-file front end shared by the CLI tool and its
// tests.  Configuration may come from a flat key=value text file or a
// JSON file (--config); explicit flags override file values.

namespace longwave {

struct RunConfig {
    double length = 80.0;
    int n = 512;
    int nz = 24;
    double mu = 0.04;
    double eps = 0.0;  // 0 means eps = mu
    std::vector<double> mu_list = {0.08, 0.04, 0.02, 0.01};
    double eps_over_mu = 1.0;
    std::string profile = "gaussian";
    double amplitude = 1.0;
    double width = 2.0;
    double center = 0.0;  // 0 means cell midpoint
    double dt = 0.0;      // 0 means automatic choice
    double horizon = 5.0;
    double sample_dt = 0.25;
    double sobolev_s = 2.0;
    std::string out_dir = "out";
    int workers = 4;
    std::string format = "csv";
    unsigned seed = 0;  // reserved; runs are deterministic

    double effective_eps() const { return eps > 0.0 ? eps : mu; }

    double effective_dt(double eta0_linf) const {
        if (dt > 0.0) return dt;
        // kdv-style default capped for the dispersive companions
        const double dx = length / n;
        return std::min(0.01, 0.5 * dx / (1.0 + effective_eps() * eta0_linf));
    }

    void validate() const {
        auto positive = [](double v, const char* key) {
            if (!(v > 0.0))
                throw CLI::ValidationError(std::string(key) + " must be positive");
        };
        positive(length, "L");
        if (n < 8 || n % 2 != 0) throw CLI::ValidationError("N must be even and >= 8");
        if (nz < 4) throw CLI::ValidationError("Nz must be >= 4");
        positive(mu, "mu");
        if (eps < 0.0) throw CLI::ValidationError("eps must be nonnegative");
        positive(amplitude, "amplitude");
        positive(width, "width");
        positive(horizon, "T");
        positive(sample_dt, "sample-dt");
        positive(eps_over_mu, "eps-over-mu");
        if (dt < 0.0) throw CLI::ValidationError("dt must be nonnegative");
        if (workers < 1) throw CLI::ValidationError("workers must be >= 1");
        if (format != "csv" && format != "json")
            throw CLI::ValidationError("format must be csv or json");
        if (mu_list.size() < 3)
            throw CLI::ValidationError("mu-list needs at least 3 values");
        for (std::size_t i = 1; i < mu_list.size(); ++i)
            if (!(mu_list[i] < mu_list[i - 1]))
                throw CLI::ValidationError("mu-list must be strictly decreasing");
    }

    InitialProfile make_profile() const {
        return InitialProfile{profile_shape_from_string(profile), amplitude, width,
                              center};
    }

    TripleConfig to_triple(double dt_used) const {
        TripleConfig cfg;
        cfg.length = length;
        cfg.n = n;
        cfg.nz = nz;
        cfg.eps = effective_eps();
        cfg.mu = mu;
        cfg.profile = make_profile();
        cfg.dt = dt_used;
        cfg.horizon = horizon;
        cfg.sample_dt = sample_dt;
        cfg.sobolev_s = sobolev_s;
        return cfg;
    }

    SweepConfig to_sweep(double dt_used) const {
        SweepConfig sw;
        sw.mu_list = mu_list;
        sw.eps_over_mu = eps_over_mu;
        sw.base = to_triple(dt_used);
        sw.workers = workers;
        return sw;
    }
};

// JSON config reader for CLI11: a flat object of option values.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool,
                          std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        if (!j.is_object())
            throw CLI::FileError("JSON config must be an object");
        std::vector<CLI::ConfigItem> out;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_array()) {
                for (const auto& e : value) item.inputs.push_back(scalar(e));
            } else {
                item.inputs.push_back(scalar(value));
            }
            out.push_back(item);
        }
        return out;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }
};

// Registers the shared option set on the root app and one (option-less)
// subcommand per workflow.  Returns pointers used to query which
// subcommand ran.
inline void setup_cli(CLI::App& app, RunConfig& cfg) {
    app.option_defaults()->ignore_case();
    app.fallthrough();
    app.set_config("--config", "", "flat key=value or JSON config file");

    app.add_option("--L", cfg.length, "periodic cell length")->capture_default_str();
    app.add_option("--N", cfg.n, "number of Fourier collocation points")
        ->capture_default_str();
    app.add_option("--Nz", cfg.nz, "Chebyshev points in the vertical")
        ->capture_default_str();
    app.add_option("--mu", cfg.mu, "long-wave parameter")->capture_default_str();
    app.add_option("--eps", cfg.eps, "amplitude parameter (0: eps = mu)")
        ->capture_default_str();
    app.add_option("--mu-list", cfg.mu_list,
                   "strictly decreasing mu values for sweeps")
        ->delimiter(',');
    app.add_option("--eps-over-mu", cfg.eps_over_mu, "sweep coupling eps/mu")
        ->capture_default_str();
    app.add_option("--profile", cfg.profile, "gaussian | sech2 | soliton")
        ->capture_default_str();
    app.add_option("--amplitude", cfg.amplitude, "profile amplitude")
        ->capture_default_str();
    app.add_option("--width", cfg.width, "profile width")->capture_default_str();
    app.add_option("--center", cfg.center, "profile center (0: cell midpoint)")
        ->capture_default_str();
    app.add_option("--dt", cfg.dt, "time step (0: automatic)")
        ->capture_default_str();
    app.add_option("--T", cfg.horizon, "run horizon")->capture_default_str();
    app.add_option("--sample-dt", cfg.sample_dt, "sampling interval")
        ->capture_default_str();
    app.add_option("--s", cfg.sobolev_s, "Sobolev index of the reported norms")
        ->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")
        ->envname("OUT_DIR")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "parallel sweep workers")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "timeseries format: csv | json")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "reserved (runs are deterministic)")
        ->capture_default_str();

    app.require_subcommand(0, 1);
    app.add_subcommand("run-kdv", "run the KdV model alone");
    app.add_subcommand("run-peregrine", "run the Peregrine system alone");
    app.add_subcommand("run-waterwave", "run the ZCS water-wave model alone");
    app.add_subcommand("compare", "coupled three-model comparison run");
    app.add_subcommand("sweep", "mu-sweep with convergence-rate fits");
    app.add_subcommand("selftest", "quick built-in checks");
}

// Pre-scan for a JSON --config argument so the right reader is installed.
inline void select_config_reader(CLI::App& app, int argc, const char* const* argv) {
    for (int i = 1; i < argc - 1; ++i) {
        std::string a = argv[i];
        if (a == "--config") {
            std::string path = argv[i + 1];
            if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
                app.config_formatter(std::make_shared<JsonConfig>());
            return;
        }
        const std::string prefix = "--config=";
        if (a.rfind(prefix, 0) == 0) {
            std::string path = a.substr(prefix.size());
            if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
                app.config_formatter(std::make_shared<JsonConfig>());
            return;
        }
    }
}

}  // namespace longwave

#endif  // LONGWAVE_CLI_CONFIG_HPP
