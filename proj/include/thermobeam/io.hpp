/**
 * @file io.hpp
 * @brief Run configuration files and CSV / gnuplot output.
 *
 * A configuration is flat `key = value` text; `#` starts a comment. The key
 * `preset` (test1 | test2) loads the two reference parameter sets, and any
 * later key overrides it. Without a preset every model coefficient must be
 * given, either directly or through the raw constants b, beta, gamma, varrho,
 * varpi, rho3 (which then determine alpha, xi1, xi2, c_cap and r_cap).
 */
#pragma once

#include "thermobeam/energy.hpp"
#include "thermobeam/fem.hpp"
#include "thermobeam/model.hpp"
#include "thermobeam/state.hpp"
#include "thermobeam/stepper.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thermobeam {

struct RunConfig {
    ModelParams params;
    int num_elements = 16;
    std::optional<double> dt; ///< explicit step; otherwise dt_ratio * h
    double dt_ratio = 0.5;
    double t_final = 4.0;
    std::string initial = "cubic"; ///< cubic | zero | expr
    /// Per-field expressions in x, keyed phi0 phi1 phi2 psi0 psi1 theta0 p0 (initial = expr).
    std::map<std::string, std::string> initial_exprs;
    std::string output_dir = "out";
    bool emit_fields = true;
    int snapshot_stride = 1;
    AccelerationSeed seed = AccelerationSeed::InitialData;
    LyapunovConfig lyapunov;

    bool operator==(const RunConfig&) const = default;

    double mesh_size() const noexcept { return params.length / num_elements; }
    double time_step() const noexcept { return dt ? *dt : dt_ratio * mesh_size(); }
    InitialData initial_data() const;
};

/// Names of the initial-data fields, in the order phi0 phi1 phi2 psi0 psi1 theta0 p0.
const std::vector<std::string>& initial_field_names();

/// Throws ParseError (with line number) or ValidationError.
RunConfig parse_config(std::string_view text);

/// Every key written explicitly; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Builtin configuration for test1 / test2. Throws ParseError for other names.
RunConfig preset_config(std::string_view name);

/// Reads a config file, or returns the builtin preset when the argument names one
/// and no such file exists. Throws IoError when the file cannot be read.
RunConfig load_config(const std::string& path_or_preset);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

void write_energy_csv(const EnergySeries& series, const std::filesystem::path& path);
void write_snapshot_csv(const BeamState& state, const Mesh1D& mesh, const std::filesystem::path& path);
/// Whitespace-separated t x phi psi theta p blocks, one per state, for surface plots.
void write_fields_dat(const std::vector<BeamState>& states, const Mesh1D& mesh, const std::filesystem::path& path);
/// Writes plots.gp into run_dir, drawing the seven standard figures from
/// energy.csv and fields.dat.
void emit_plot_scripts(const std::filesystem::path& run_dir);

} // namespace thermobeam
