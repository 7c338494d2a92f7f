#pragma once

#include "nlr/coefficient.hpp"
#include "nlr/mesh.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlr {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Descriptor for a coefficient or radial field: "constant c",
/// "polynomial c0 c1 ...", "table x:y x:y ...", "paper-example a0 imin imax"
/// (coefficients only).
struct Descriptor {
    std::string kind;
    std::vector<double> params;
    std::vector<std::pair<double, double>> table;

    std::string echo() const;
};

struct ScenarioConfig {
    int n = 3;
    double d = 2.0;
    std::size_t N = 128;
    double r = 0.0;  // required
    std::string task;
    Descriptor a{"constant", {1.0}, {}};
    Descriptor f{"constant", {1.0}, {}};
    Descriptor g{"constant", {1.0}, {}};
    Descriptor u0{"constant", {0.0}, {}};
    double tol = 1e-10;
    double dt = 1e-3;
    double t_end = 1.0;
    double damping = 0.5;
    std::size_t max_iter = 400;
    std::size_t r_grid = 33;
    std::size_t store_every = 0;
    double coeff_m = 0.0;  // 0 -> derived from the descriptor
    double coeff_M = 0.0;
    double i_lo = 0.0;  // multi-solution target interval
    double i_hi = 0.0;
    double t0 = 1.0;
    double rho0 = 1.0;
    double transfer_K = 0.0;  // 0 -> fit from randomized fields
    double p = 2.0;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    /// Every key with its resolved value, defaults included.
    std::map<std::string, std::string> echo() const;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct EmittedFile {
    std::string name;
    std::string digest;  // FNV-1a 64-bit, hex
};

struct RunManifest {
    std::map<std::string, std::string> config_echo;
    std::string version;
    std::map<std::string, double> wall_seconds;
    std::vector<EmittedFile> files;
    bool ok = true;
    std::string error;
};

/// Runs the configured task and writes its artifacts plus manifest.json
/// into the output directory (env NLR_OUTPUT_DIR overrides the config).
RunManifest run_scenario(const ScenarioConfig& config);

std::string format_value(double v);                    // 17 significant digits
std::uint64_t fnv1a(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

const char* version_string();

/// Materialized problem ingredients shared by the task runners.
struct BuiltScenario {
    MeshPtr mesh;
    Field f;
    Field g;
    Field u0;
    CoefficientSpec coeff;
    std::vector<double> thresholds;  // nonempty for the paper-example builder
};
BuiltScenario build_scenario(const ScenarioConfig& config);

}  // namespace nlr
