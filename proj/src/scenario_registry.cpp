#include <cmath>

#include "nlsq/scenario.hpp"

namespace nlsq {

namespace {

ScenarioConfig base_1d(const std::string& name, int n, double L) {
    ScenarioConfig c;
    c.name = name;
    c.dim = 1;
    c.points = {n, 1, 1};
    c.half_width = {L, 0, 0};
    c.omega = {TimeCoefficient::constant(0.0)};
    c.isotropic = true;
    return c;
}

ScenarioConfig make_free() {
    auto c = base_1d("free", 2048, 64.0);
    c.description = "V = 0 linear flow: bounded Sobolev norms, algebraic momenta";
    c.t_end = 10.0;
    c.dt = 2e-3;
    c.snapshot_stride = 25;
    c.diagnostics.hk = 2;
    c.diagnostics.momenta = 3;
    c.diagnostics.pseudo_conformal = true;
    c.checks = {"mass", "pc_conserved:1e-6"};
    return c;
}

ScenarioConfig make_harmonic_linear() {
    auto c = base_1d("harmonic_linear", 512, 12.0);
    c.description = "Omega = 1, lambda = 0, displaced gaussian: all linear laws";
    c.omega = {TimeCoefficient::constant(1.0)};
    c.initial.center = {1.2, 0, 0};
    c.t_end = 2.0 * M_PI;
    c.dt = 1e-3;
    c.snapshot_stride = 10;
    c.diagnostics.virial = true;
    c.diagnostics.ab_laws = true;
    c.checks = {"mass", "energy_law:1e-4", "virial:1e-3", "ab_conserved:1e-6"};
    return c;
}

ScenarioConfig make_repulsive_defocusing() {
    auto c = base_1d("repulsive_defocusing", 8192, 64.0);
    c.description = "Omega = -1, defocusing cubic: exponential Sobolev growth";
    c.omega = {TimeCoefficient::constant(-1.0)};
    c.nonlinearity.lambda = 1.0;
    c.nonlinearity.sigma = 1;
    c.t_end = 3.0;
    c.dt = 1e-3;
    c.snapshot_stride = 20;
    c.diagnostics.hk = 2;
    c.diagnostics.momenta = 1;
    c.diagnostics.ab_laws = true;
    c.checks = {"mass"};
    return c;
}

ScenarioConfig make_bounded_oscillating() {
    auto c = base_1d("bounded_oscillating", 256, 8.0);
    c.description = "Omega = cos t with a cubic defocusing term: evolution laws";
    c.omega = {TimeCoefficient::named("cosine")};
    c.nonlinearity.lambda = 1.0;
    c.initial.center = {0.5, 0, 0};
    c.t_end = 2.0;
    c.dt = 1e-3;
    c.snapshot_stride = 10;
    c.diagnostics.virial = true;
    c.checks = {"mass", "energy_law:1e-4", "virial:1e-3"};
    return c;
}

ScenarioConfig make_pulsed() {
    auto c = base_1d("pulsed", 512, 8.0);
    c.description = "staircase Omega plateaus: mixed-norm growth with n";
    c.omega = {TimeCoefficient::named("pulsed")};
    const int n = 2;
    c.initial.type = InitialSpec::Type::PlateauGaussian;
    c.initial.n = n;
    c.t_start = 4.0 * n + 1.0;
    c.t_end = 4.0 * n + 2.0;
    c.dt = 1e-3;
    c.snapshot_stride = 5;
    c.diagnostics.lq_nl = true;  // sigma = 1 records ||u||_4
    c.mixed_norms = {{8.0, 4.0}};
    c.checks = {"mass"};
    return c;
}

ScenarioConfig make_double_exponential() {
    auto c = base_1d("double_exponential", 4096, 32.0);
    c.description = "Omega = -mu''/mu of the double-exponential profile (linear demo)";
    c.omega = {TimeCoefficient::named("double_exponential")};
    c.t_end = 1.6;
    c.dt = 1e-4;
    c.snapshot_stride = 20;
    c.diagnostics.hk = 2;
    c.checks = {"mass"};
    return c;
}

ScenarioConfig make_blowup_critical() {
    auto c = base_1d("blowup_critical", 8192, 8.0);
    c.description = "focusing quintic blow-up family run toward the blow-up time";
    c.omega = {TimeCoefficient::named("cosine")};
    c.nonlinearity.lambda = -1.0;
    c.nonlinearity.sigma = 2;
    c.initial.type = InitialSpec::Type::GroundStateScaled;
    c.t_start = 2.0;
    c.t_end = 0.01;
    c.dt = 4e-5;
    c.snapshot_stride = 250;
    c.gradient_cap_factor = 25.0;
    c.boundary_mass_cap = 5e-4;  // wide initial tails; the focusing run only contracts
    c.expect_abort = "gradient_cap";
    c.checks = {"mass"};
    return c;
}

ScenarioConfig make_stationary_periodic() {
    auto c = base_1d("stationary_periodic", 256, 8.0);
    c.description = "nonlinear stationary state under Omega = 1: |u| stays put";
    c.omega = {TimeCoefficient::constant(1.0)};
    c.nonlinearity.lambda = 1.0;
    c.initial.type = InitialSpec::Type::StationaryState;
    c.initial.omega_chem = 1.0;
    c.t_end = 5.0;
    c.dt = 1e-4;
    c.snapshot_stride = 500;
    c.keep_fields = true;
    c.checks = {"mass", "stationary_modulus:1e-6"};
    return c;
}

ScenarioConfig make_avron_herbst_demo() {
    auto c = base_1d("avron_herbst_demo", 512, 16.0);
    c.description = "linear electric field removed by the Avron-Herbst transport";
    c.efield = {TimeCoefficient::constant(0.5)};
    c.nonlinearity.lambda = 1.0;
    c.t_end = 1.5;
    c.dt = 2e-4;
    c.snapshot_stride = 50;
    c.checks = {"mass", "avron_herbst_gap:1e-4"};
    return c;
}

ScenarioConfig make_lens_roundtrip() {
    auto c = base_1d("lens_roundtrip", 256, 8.0);
    c.description = "direct vs lens-transformed solve, critical quintic";
    c.omega = {TimeCoefficient::constant(1.0)};
    c.nonlinearity.lambda = 1.0;
    c.nonlinearity.sigma = 2;
    c.t_end = 0.5;
    c.dt = 1e-4;
    c.snapshot_stride = 100;
    c.checks = {"mass", "lens_roundtrip:1e-4"};
    return c;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
    return {"free",          "harmonic_linear",     "repulsive_defocusing",
            "bounded_oscillating", "pulsed",        "double_exponential",
            "blowup_critical",     "stationary_periodic", "avron_herbst_demo",
            "lens_roundtrip"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
    if (name == "free") return make_free();
    if (name == "harmonic_linear") return make_harmonic_linear();
    if (name == "repulsive_defocusing") return make_repulsive_defocusing();
    if (name == "bounded_oscillating") return make_bounded_oscillating();
    if (name == "pulsed") return make_pulsed();
    if (name == "double_exponential") return make_double_exponential();
    if (name == "blowup_critical") return make_blowup_critical();
    if (name == "stationary_periodic") return make_stationary_periodic();
    if (name == "avron_herbst_demo") return make_avron_herbst_demo();
    if (name == "lens_roundtrip") return make_lens_roundtrip();
    throw ConfigError("unknown builtin scenario '" + name + "'");
}

}  // namespace nlsq
