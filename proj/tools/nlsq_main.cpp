#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "nlsq/scenario.hpp"

namespace {

nlsq::ScenarioConfig load_config(const std::string& spec) {
    // a path to a JSON file, or a builtin scenario name
    std::ifstream f(spec);
    if (f) {
        nlohmann::json j;
        f >> j;
        return nlsq::ScenarioConfig::from_json(j);
    }
    return nlsq::builtin_scenario(spec);
}

void apply_cli_overrides(nlsq::ScenarioConfig& cfg, const std::vector<std::string>& overrides,
                         double dt, int grid_points) {
    nlohmann::json j = cfg.to_json();
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw nlsq::ConfigError("--override expects key=value, got '" + ov + "'");
        nlsq::apply_override(j, ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (dt > 0.0) nlsq::apply_override(j, "time.dt", std::to_string(dt));
    if (grid_points > 0) {
        nlohmann::json pts = nlohmann::json::array();
        for (int a = 0; a < j.at("dim").get<int>(); ++a) pts.push_back(grid_points);
        j["grid"]["points"] = pts;
    }
    cfg = nlsq::ScenarioConfig::from_json(j);
}

int print_report(const nlsq::RunReport& rep, const std::string& expect_abort) {
    std::printf("run %s: status=%s", rep.name.c_str(),
                rep.status == nlsq::RunStatus::Completed ? "completed" : "aborted");
    if (!rep.abort_message.empty()) std::printf(" (%s)", rep.abort_message.c_str());
    std::printf(" t=%.6g mass=%.9g\n", rep.final_time, rep.final_mass);
    for (const auto& ch : rep.checks)
        std::printf("  check %-24s %-4s  value=%.3e  threshold=%.3e\n", ch.name.c_str(),
                    ch.pass ? "PASS" : "FAIL", ch.value, ch.threshold);
    for (const auto& [k, f] : rep.fits)
        std::printf("  fit   %-10s %-12s  exp_rate=%.4f  alg_exponent=%.4f\n", k.c_str(),
                    f.classification.c_str(), f.exp_rate, f.alg_exponent);
    const bool status_ok = (rep.status == nlsq::RunStatus::Completed) ||
                           (!expect_abort.empty() && rep.expected_abort_matched);
    return (status_ok && rep.all_pass()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlsq: nonlinear Schrodinger solver with time-dependent quadratic potentials"};
    app.require_subcommand(1);

    std::string config_spec, out_dir = "out";
    std::vector<std::string> overrides;
    std::vector<std::string> params;
    int jobs = 1, grid_points = 0;
    double dt = 0.0;

    auto add_common = [&](CLI::App* sub, bool need_out) {
        sub->add_option("--config", config_spec, "config JSON path or builtin scenario name")
            ->required();
        if (need_out) sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--override", overrides,
                        "dotted-path config override, e.g. nonlinearity.lambda=2 (repeatable)");
        sub->add_option("--dt", dt, "shorthand for time.dt");
        sub->add_option("--grid", grid_points, "shorthand: points per axis");
    };

    auto* c_run = app.add_subcommand("run", "execute one scenario");
    add_common(c_run, true);
    auto* c_sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(c_sweep, true);
    c_sweep->add_option("--param", params,
                        "sweep axis as path=v1,v2,... (repeatable; cartesian product)");
    c_sweep->add_option("--jobs", jobs, "parallel sweep points");
    auto* c_validate = app.add_subcommand("validate", "static config checks only");
    add_common(c_validate, false);
    auto* c_list = app.add_subcommand("list-scenarios", "print the builtin registry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_list->parsed()) {
            for (const auto& name : nlsq::builtin_scenario_names()) {
                const auto c = nlsq::builtin_scenario(name);
                std::printf("%-22s %s\n", name.c_str(), c.description.c_str());
            }
            return 0;
        }

        nlsq::ScenarioConfig cfg = load_config(config_spec);
        apply_cli_overrides(cfg, overrides, dt, grid_points);

        if (c_validate->parsed()) {
            const auto rep = nlsq::validate(cfg);
            for (const auto& v : rep.violations) std::printf("violation: %s\n", v.c_str());
            for (const auto& f : rep.flags) std::printf("flag: %s\n", f.c_str());
            std::printf("%s\n", rep.ok() ? "valid" : "invalid");
            return rep.ok() ? 0 : 1;
        }
        if (c_run->parsed()) {
            const auto rep = nlsq::run_scenario(cfg, out_dir);
            return print_report(rep, cfg.expect_abort);
        }
        if (c_sweep->parsed()) {
            std::vector<std::pair<std::string, std::vector<std::string>>> grid;
            for (const auto& p : params) {
                const auto eq = p.find('=');
                if (eq == std::string::npos)
                    throw nlsq::ConfigError("--param expects path=v1,v2,..., got '" + p + "'");
                std::vector<std::string> vals;
                std::string rest = p.substr(eq + 1);
                std::size_t pos = 0;
                while (pos <= rest.size()) {
                    const auto comma = rest.find(',', pos);
                    vals.push_back(
                        rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
                grid.emplace_back(p.substr(0, eq), vals);
            }
            const auto points = nlsq::sweep(cfg, grid, out_dir, jobs);
            int failed = 0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto& pt = points[i];
                if (pt.failed) {
                    ++failed;
                    std::printf("point %zu: error: %s\n", i, pt.error.c_str());
                } else {
                    std::printf("point %zu: %s%s\n", i,
                                pt.report.status == nlsq::RunStatus::Completed ? "completed"
                                                                               : "aborted",
                                pt.report.all_pass() ? "" : " (checks failed)");
                }
            }
            std::printf("sweep: %zu points, %d failed; table at %s/sweep.csv\n", points.size(),
                        failed, out_dir.c_str());
            return 0;  // per-point failures are recorded, the sweep itself succeeds
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
