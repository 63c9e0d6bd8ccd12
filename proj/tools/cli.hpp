#pragma once

// Front end shared by the vofde executable and its tests: config parsing,
// output writers, and the convergence study.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vofde/errors.hpp"
#include "vofde/reference.hpp"

namespace vofde::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSolverFailure = 3,
    kImplicitStability = 4,
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Builds the scenario on a grid of step h.
using ScenarioFactory = std::function<reference::Scenario(double h)>;

struct RunConfig {
    std::string label;
    ScenarioFactory make;
    double h = 0.0;
    bool trace = true;
    bool stability = false;
    bool convergence = false;
    std::vector<double> convergence_steps;
    std::string out_path;
};

/// Parses a JSON config document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

struct ConvergenceRow {
    double h = 0.0;
    std::size_t N = 0;
    double max_abs_error = 0.0;
    /// error(previous row) / error(this row); empty on the first row.
    std::optional<double> observed_ratio;
};

/// Max nodal error against the scenario's ground truth for each step, in the
/// given order. Throws ConfigError when the scenario has no exact solution.
std::vector<ConvergenceRow> convergence_study(const ScenarioFactory& make, const std::vector<double>& steps);

std::string format_double(double x);
std::string stability_path(const std::string& out_path);
std::string convergence_path(const std::string& out_path);

/// Runs the configured outputs. Diagnostics go to err; returns an ExitCode.
int run(const RunConfig& config, std::ostream& err);

/// Command-line entry: run / scenario / list.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace vofde::cli
