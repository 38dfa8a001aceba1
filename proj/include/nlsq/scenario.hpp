#pragma once

// Scenario configuration, validation, execution and batch sweeps. Configs are
// versioned JSON; runs are fully deterministic (no seeds, serial execution
// inside a run, fixed-format CSV output).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlsq/diagnostics.hpp"
#include "nlsq/lens.hpp"

namespace nlsq {

struct InitialSpec {
    enum class Type { Gaussian, GroundStateScaled, StationaryState, PlateauGaussian, SnapshotFile };
    Type type = Type::Gaussian;
    // gaussian
    std::array<double, 3> center{0, 0, 0};
    std::array<double, 3> width{1, 1, 1};
    std::array<double, 3> momentum{0, 0, 0};
    double amplitude = 1.0;
    // ground_state_scaled / stationary_state
    double gs_tol = 1e-8;
    double omega_chem = 1.0;
    double st_tol = 1e-9;
    // plateau_gaussian
    int n = 1;
    // snapshot_file
    std::string path;
};

struct ScenarioConfig {
    int schema_version = 1;
    std::string name = "unnamed";
    std::string description;
    int dim = 1;
    std::array<int, 3> points{256, 1, 1};
    std::array<double, 3> half_width{8.0, 0, 0};

    bool isotropic = true;
    std::vector<TimeCoefficient> omega;   // size 1 if isotropic, else dim
    std::vector<TimeCoefficient> efield;  // empty or size dim

    NonlinearitySpec nonlinearity;
    InitialSpec initial;

    double t_start = 0.0;
    double t_end = 1.0;
    double dt = 1e-3;
    int snapshot_stride = 10;
    int snapshot_file_stride = 0;  // 0: only the final field is written

    StepControls::Scheme scheme = StepControls::Scheme::Strang;
    double boundary_mass_cap = 1e-6;
    double gradient_cap = 0.0;
    double gradient_cap_factor = 0.0;  // cap = factor * ||grad u0|| when > 0
    bool keep_fields = false;
    double ode_rtol = 1e-10;

    DiagnosticsSelection diagnostics;
    // pass/fail checks, "name" or "name:threshold"
    std::vector<std::string> checks;
    // mixed norms to report: pairs (p, q)
    std::vector<std::pair<double, double>> mixed_norms;
    std::string expect_abort;  // "", "gradient_cap", "boundary_mass"
    std::string cache_dir = "nlsq_cache";

    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& j);

    Grid make_grid() const;
    QuadraticPotential make_potential() const;
    std::vector<TimeCoefficient> omega_per_axis() const;
};

struct ValidationReport {
    std::vector<std::string> violations;  // fatal
    std::vector<std::string> flags;       // informational
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const ScenarioConfig& config);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunReport {
    std::string name;
    RunStatus status = RunStatus::Completed;
    std::string abort_message;
    bool expected_abort_matched = false;
    std::vector<CheckResult> checks;
    std::map<std::string, GrowthFit> fits;  // per recorded H^k / momentum series
    double final_time = 0.0;
    double final_mass = 0.0;
    double final_grad = 0.0;
    double elapsed_seconds = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    nlohmann::json to_json() const;
};

// Executes the scenario, writing trace.csv, diagnostics.json and
// snapshots/*.wfld under out_dir.
RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir);

struct SweepPoint {
    std::map<std::string, std::string> overrides;  // dotted path -> json literal
    RunReport report;
    bool failed = false;
    std::string error;
};

// dotted-path override into the config JSON ("nonlinearity.lambda=2.0")
void apply_override(nlohmann::json& j, const std::string& path, const std::string& value);

// One run per grid point (cartesian product of the per-key value lists),
// executed on `jobs` threads; per-point failures are recorded and the sweep
// continues. Writes sweep.csv plus one subdirectory per point.
std::vector<SweepPoint> sweep(const ScenarioConfig& base,
                              const std::vector<std::pair<std::string, std::vector<std::string>>>& grid,
                              const std::string& out_dir, int jobs);

// builtin registry
std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace nlsq
