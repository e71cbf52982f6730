/**
 * @file convergence.hpp
 * @brief Self-convergence study of the scheme under joint space-time refinement.
 *
 * The composite error between two states on the same grid is
 *
 *   |e_Phi|^2 + |(e_phi)_x + e_psi|^2 + |e_Psi|^2 + |(e_psi)_x|^2 + |e_theta|^2 + |e_P|^2,
 *
 * which the a priori estimate bounds by c (dt^2 + h^2). A fine reference run
 * stands in for the exact solution and is sampled at the coarse nodes.
 */
#pragma once

#include "thermobeam/fem.hpp"
#include "thermobeam/model.hpp"
#include "thermobeam/state.hpp"
#include "thermobeam/stepper.hpp"

#include <optional>
#include <string>
#include <vector>

namespace thermobeam {

/// Both states on the grid of fem. Symmetric in its state arguments.
double composite_error(const BeamState& a, const BeamState& b, const FemMatrices& fem);

/// Samples a fine-grid state at the nodes of a coarse mesh. Throws
/// GridMismatch unless every coarse node is a fine node.
BeamState restrict_to(const BeamState& fine, const Mesh1D& fine_mesh, const Mesh1D& coarse_mesh);

/// Error of a coarse state against a reference on a nested finer grid.
double composite_error(const BeamState& coarse, const Mesh1D& coarse_mesh, const BeamState& reference,
                       const Mesh1D& reference_mesh);

struct RefinementLevel {
    int num_elements = 0;
    double dt = 0.0;
};

/// Levels s, 2s, 4s, ... with dt = dt_ratio * h at each.
std::vector<RefinementLevel> coupled_levels(int coarsest, int count, double dt_ratio, double length);

struct LevelResult {
    RefinementLevel level;
    double error = 0.0;
    std::optional<double> order; ///< log2(error_{k-1} / error_k); empty on the first level or when undefined
};

struct RefinementStudy {
    RefinementLevel reference;
    std::vector<LevelResult> levels;
    std::optional<double> mean_order; ///< empty when no pair had a defined order
    bool exact = false;               ///< every error is zero
    bool monotone = false;            ///< errors non-increasing across levels

    /// Delimited table: level, s, dt, error, order.
    std::string table(char delimiter = ',') const;
};

struct StudyOptions {
    int reference_factor = 4;
    /// Maximum over shared time levels instead of the final time only.
    bool max_over_time = false;
    /// Concurrent level runs; 0 means hardware concurrency.
    unsigned max_threads = 0;
    AccelerationSeed seed = AccelerationSeed::InitialData;
};

/// Runs the reference (finest s times the factor, smallest dt over the factor)
/// and every level, then compares at the final time.
RefinementStudy run_study(const ModelParams& params, const InitialData& initial, double t_final,
                          const std::vector<RefinementLevel>& levels, const StudyOptions& options = {});

} // namespace thermobeam
