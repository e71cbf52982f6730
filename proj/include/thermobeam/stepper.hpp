/**
 * @file stepper.hpp
 * @brief Implicit Euler P1 scheme for the coupled beam.
 *
 * Per step the unknowns (Phi^n, Psi^n, theta^n, P^n) solve one linear system;
 * displacements follow from phi^n = phi^{n-1} + dt Phi^n and
 * psi^n = psi^{n-1} + dt Psi^n. The block system (rows: test functions of the
 * four equations, columns: [Phi, Psi, theta, P]) reads
 *
 *   [ r1/dt M + k dt K (+mu M)   k dt G^T                  0                  0              ]
 *   [ r2/dt G^T + k dt G         a dt K + k dt M (+mu M)    xi1 G^T            xi2 G^T        ]
 *   [ 0                          xi1 G^T                    c/dt M + kt K      d/dt M         ]
 *   [ 0                          xi2 G^T                    d/dt M             r/dt M + hd K  ]
 *
 * where the mu M terms enter the Phi row (DisplacementDamped) or the Psi row
 * (RotationDamped). The matrix does not depend on the state and is factored once.
 */
#pragma once

#include "thermobeam/energy.hpp"
#include "thermobeam/fem.hpp"
#include "thermobeam/model.hpp"
#include "thermobeam/state.hpp"

#include <Eigen/SparseLU>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thermobeam {

/// Offsets of the four unknown blocks in the monolithic vector.
enum class Block : int { Phi = 0, Psi = 1, Theta = 2, P = 3 };

class StepSystem {
public:
    /// Assembles and factors the block matrix. Throws SingularSystem if the
    /// factorization fails.
    StepSystem(const ModelParams& params, const FemMatrices& fem, double dt);

    const SparseMatrix& matrix() const noexcept { return matrix_; }
    double dt() const noexcept { return dt_; }
    int block_dim() const noexcept { return m_; }
    const ModelParams& params() const noexcept { return params_; }

    /// Throws SolveFailure if the factorization cannot be applied.
    Vector solve(const Vector& rhs) const;

private:
    ModelParams params_;
    double dt_;
    int m_;
    SparseMatrix matrix_;
    std::shared_ptr<const Eigen::SparseLU<SparseMatrix>> lu_;
};

inline StepSystem assemble_step_system(const ModelParams& params, const FemMatrices& fem, double dt) {
    return StepSystem(params, fem, dt);
}

/// Right-hand side collecting every level n-1 term of the scheme.
Vector assemble_rhs(const BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt);

/// Advances one step of size system.dt().
BeamState step(const BeamState& state, const StepSystem& system, const ModelParams& params, const FemMatrices& fem);

/// Source of the backward-difference seed Phi^{-1}.
enum class AccelerationSeed {
    InitialData, ///< interpolant of phi2
    Discrete,    ///< acceleration from the displacement equation at n = 0
};

std::string to_string(AccelerationSeed seed);
/// Accepts phi2 | discrete. Throws ParseError otherwise.
AccelerationSeed parse_acceleration_seed(std::string_view text);

/// Replaces Phi_prev so that the first equation of the scheme holds at n = 0:
/// rho1 M (Phi - Phi_prev) / dt = -kappa (K phi + G^T psi).
void apply_discrete_seed(BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt);

struct RunOptions {
    std::optional<LyapunovConfig> lyapunov;
    AccelerationSeed seed = AccelerationSeed::InitialData;
    /// Keep every k-th state in the trajectory; the final state is always kept.
    int trajectory_stride = 1;
};

struct RunResult {
    std::vector<BeamState> trajectory;
    EnergySeries energy;
};

/// Number of steps round(t_final / dt). Throws ValidationError unless dt divides t_final.
int step_count(double dt, double t_final);

RunResult run(const ModelParams& params, const Mesh1D& mesh, double dt, double t_final, const InitialData& initial,
              const RunOptions& options = {});

} // namespace thermobeam
