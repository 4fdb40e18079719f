#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "longwave/output.hpp"

using namespace longwave;
namespace fs = std::filesystem;

namespace {

RunResult tiny_result() {
    RunResult r;
    r.eps = 0.04;
    r.mu = 0.04;
    r.times = {0.0, 0.25};
    r.e_momentum = {1e-4, 2e-4};
    r.e_kdv_pair_linf = {1e-5, 2e-5};
    r.e_ww_pair_linf = {3e-5, 4e-5};
    r.e_kdv_pair_hsmu = {1e-4, 2e-4};
    r.e_ww_pair_hsmu = {3e-4, 4e-4};
    r.residual_r_linf = {1e-6, 1e-6};
    r.residual_R_linf = {2e-6, 2e-6};
    r.proofbound_linf = {1e-2, 1e-2};
    r.mass_kdv = {1.0, 1.0};
    r.mass_peregrine = {1.0, 1.0};
    r.mass_ww = {1.0, 1.0};
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, -2.5e-9}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("timeseries_csv has the documented header and schema marker") {
    std::string csv = timeseries_csv(tiny_result());
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema_version=1");
    std::getline(in, line);
    CHECK(line.rfind("# eps=", 0) == 0);
    std::getline(in, line);
    CHECK(line ==
          "t,E_momentum,E_kdv_pair_linf,E_ww_pair_linf,E_kdv_pair_hsmu,"
          "E_ww_pair_hsmu,residual_r_linf,residual_R_linf,proofbound_linf,"
          "mass_kdv,mass_peregrine,mass_ww");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    // deterministic bytes
    CHECK(csv == timeseries_csv(tiny_result()));
}

TEST_CASE("atomic_write leaves no temporary behind and creates directories") {
    fs::path dir = fs::temp_directory_path() / "longwave_output_test";
    fs::remove_all(dir);
    fs::path target = dir / "nested" / "file.csv";
    atomic_write(target, "hello\n");
    CHECK(slurp(target) == "hello\n");
    CHECK(!fs::exists(target.string() + ".tmp"));
    atomic_write(target, "replaced\n");  // overwrite goes through rename too
    CHECK(slurp(target) == "replaced\n");
    fs::remove_all(dir);
}

TEST_CASE("rates_json carries schema, config echo and one entry per family") {
    SweepConfig sw;
    sw.mu_list = {0.08, 0.04, 0.02};
    SweepReport rep;
    rep.config = sw;
    RateFit fit;
    fit.slope = 2.0;
    fit.intercept = 0.5;
    fit.r2 = 0.999;
    fit.points = {{0.08, 6.4e-3}, {0.04, 1.6e-3}, {0.02, 4e-4}};
    for (const auto& name : error_family_names()) {
        rep.rates_weighted[name] = fit;
        rep.rates_final[name] = fit;
    }
    auto j = nlohmann::json::parse(rates_json(rep));
    CHECK(j["schema_version"] == 1);
    CHECK(j["config"]["mu_list"].size() == 3);
    CHECK(j["config"]["N"] == rep.config.base.n);
    for (const auto& name : error_family_names()) {
        REQUIRE(j["rates"].contains(name));
        CHECK(j["rates"][name]["sup_weighted"]["slope"] == 2.0);
        CHECK(j["rates"][name]["final_time"]["points"].size() == 3);
    }
    CHECK(rates_json(rep) == rates_json(rep));
}
