#ifndef LONGWAVE_OUTPUT_HPP
#define LONGWAVE_OUTPUT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "longwave/experiments.hpp"

// Result persistence: CSV time series and JSON rate reports.  Output
// bodies carry no timestamps, so identical runs produce identical bytes.
// Files are written to a temporary sibling and renamed into place, so a
// failure never leaves a partial file.

namespace longwave {

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string timeseries_csv(const RunResult& r) {
    std::string out;
    out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
    out += "# eps=" + format_double(r.eps) + " mu=" + format_double(r.mu) + "\n";
    out +=
        "t,E_momentum,E_kdv_pair_linf,E_ww_pair_linf,E_kdv_pair_hsmu,"
        "E_ww_pair_hsmu,residual_r_linf,residual_R_linf,proofbound_linf,"
        "mass_kdv,mass_peregrine,mass_ww\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        out += format_double(r.times[i]);
        for (const auto* col :
             {&r.e_momentum, &r.e_kdv_pair_linf, &r.e_ww_pair_linf,
              &r.e_kdv_pair_hsmu, &r.e_ww_pair_hsmu, &r.residual_r_linf,
              &r.residual_R_linf, &r.proofbound_linf, &r.mass_kdv,
              &r.mass_peregrine, &r.mass_ww}) {
            out += ',';
            out += format_double((*col)[i]);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json rate_fit_json(const RateFit& fit) {
    nlohmann::ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& [mu, value] : fit.points)
        j["points"].push_back({{"mu", mu}, {"value", value}});
    return j;
}

inline std::string rates_json(const SweepReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    nlohmann::ordered_json cfg;
    cfg["mu_list"] = report.config.mu_list;
    cfg["eps_over_mu"] = report.config.eps_over_mu;
    cfg["L"] = report.config.base.length;
    cfg["N"] = report.config.base.n;
    cfg["Nz"] = report.config.base.nz;
    cfg["dt"] = report.config.base.dt;
    cfg["T"] = report.config.base.horizon;
    cfg["sample_dt"] = report.config.base.sample_dt;
    cfg["sobolev_s"] = report.config.base.sobolev_s;
    cfg["workers"] = report.config.workers;
    j["config"] = cfg;
    nlohmann::ordered_json fams;
    for (const std::string& name : error_family_names()) {
        nlohmann::ordered_json f;
        f["sup_weighted"] = rate_fit_json(report.rates_weighted.at(name));
        f["final_time"] = rate_fit_json(report.rates_final.at(name));
        fams[name] = f;
    }
    j["rates"] = fams;
    return j.dump(2) + "\n";
}

}  // namespace longwave

#endif  // LONGWAVE_OUTPUT_HPP
