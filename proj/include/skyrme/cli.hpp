#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "skyrme/solutions.hpp"

namespace skyrme::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct Tolerances {
    double residual = 5e-4;    ///< r1, r2 and scalar BPS2 checks
    double gap = 0.01;         ///< |E - bound| / E
    double degree = 0.01;      ///< distance of the extrapolated degree from its integer
    double moment = 1e-6;
    double bianchi = 1e-5;
    double naturality = 1e-5;
};

/// Validated run configuration. Unknown keys anywhere are a ConfigError.
struct RunConfig {
    std::string family;
    ojson params = ojson::object();
    ojson target;   ///< string preset or profile object; null for the family default
    ojson surface;  ///< string preset or object; null for s2-round
    int n = 48;
    std::vector<double> margins;
    double order = 1.0;  ///< leading power of the margin error in extrapolation (family default)
    std::optional<std::array<double, 3>> bps;  ///< (alpha, beta, gamma) override for evaluation
    Tolerances tol;
    double epsilon = 0;  ///< phi perturbation amplitude
    bool diagnostics = true;
    std::string out_dir = ".";
    ojson sweep;  ///< {"grid": {"dotted.path": [values]}} for cmd_sweep
};

RunConfig parse_config(const ojson& j);

/// Constructs the family at one margin, perturbation included.
Solution build_solution(const RunConfig& cfg, double margin);

struct Check {
    std::string name;
    double value = 0, tolerance = 0;
    bool pass = false;
};

struct VerifyResult {
    ojson report;
    std::vector<std::string> csv_rows;
    std::vector<Check> checks;
    std::vector<std::string> failures;
    std::vector<EnergyReport> runs;  ///< one per margin
    double degree_extrapolated = 0;
    int exit_code = 0;
};

/// Full pipeline, no files written.
VerifyResult run_verify(const RunConfig& cfg);

struct SweepResult {
    std::vector<std::string> rows;         ///< results.csv body
    std::vector<std::string> convergence;  ///< rows of convergence.csv
    ojson report;
    int exit_code = 0;
};
SweepResult run_sweep(const RunConfig& base);

struct ObstructionResult {
    double K = 0, contraction = 0, def_residual = 0, constraint_residual = 0;
    bool pass = false;
};
/// Throws ConfigError unless K > 0.
ObstructionResult run_obstruction(double K);

std::string convergence_header();

/// Writes via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace skyrme::cli
