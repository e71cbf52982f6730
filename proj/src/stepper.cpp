#include "thermobeam/stepper.hpp"

#include "thermobeam/error.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <string>

namespace thermobeam {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, const SparseMatrix& a, double scale, Block row, Block col, int m) {
    if (scale == 0.0) return;
    const int r0 = static_cast<int>(row) * m;
    const int c0 = static_cast<int>(col) * m;
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            out.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), scale * it.value());
        }
    }
}

auto segment(Vector& v, Block b, int m) {
    return v.segment(static_cast<int>(b) * m, m);
}

auto segment(const Vector& v, Block b, int m) {
    return v.segment(static_cast<int>(b) * m, m);
}

} // namespace

StepSystem::StepSystem(const ModelParams& params, const FemMatrices& fem, double dt)
    : params_(params), dt_(dt), m_(fem.dim()) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorCode::ValidationError, "time step must be positive, got " + std::to_string(dt));
    }
    const int m = m_;
    const SparseMatrix& M = fem.mass;
    const SparseMatrix& K = fem.stiffness;
    const SparseMatrix& G = fem.gradient;
    const SparseMatrix Gt = SparseMatrix(G.transpose());
    const auto& p = params;
    const double damp_phi = p.variant == DampingVariant::DisplacementDamped ? p.mu : 0.0;
    const double damp_psi = p.variant == DampingVariant::RotationDamped ? p.mu : 0.0;

    Triplets t;
    t.reserve(static_cast<std::size_t>(40 * m));
    // Phi row
    add_block(t, M, p.rho1 / dt + damp_phi, Block::Phi, Block::Phi, m);
    add_block(t, K, p.kappa * dt, Block::Phi, Block::Phi, m);
    add_block(t, Gt, p.kappa * dt, Block::Phi, Block::Psi, m);
    // Psi row
    add_block(t, Gt, p.rho2 / dt, Block::Psi, Block::Phi, m);
    add_block(t, G, p.kappa * dt, Block::Psi, Block::Phi, m);
    add_block(t, K, p.alpha * dt, Block::Psi, Block::Psi, m);
    add_block(t, M, p.kappa * dt + damp_psi, Block::Psi, Block::Psi, m);
    add_block(t, Gt, p.xi1, Block::Psi, Block::Theta, m);
    add_block(t, Gt, p.xi2, Block::Psi, Block::P, m);
    // theta row
    add_block(t, Gt, p.xi1, Block::Theta, Block::Psi, m);
    add_block(t, M, p.c_cap / dt, Block::Theta, Block::Theta, m);
    add_block(t, K, p.k_theta, Block::Theta, Block::Theta, m);
    add_block(t, M, p.d_cap / dt, Block::Theta, Block::P, m);
    // P row
    add_block(t, Gt, p.xi2, Block::P, Block::Psi, m);
    add_block(t, M, p.d_cap / dt, Block::P, Block::Theta, m);
    add_block(t, M, p.r_cap / dt, Block::P, Block::P, m);
    add_block(t, K, p.h_diff, Block::P, Block::P, m);

    matrix_.resize(4 * m, 4 * m);
    matrix_.setFromTriplets(t.begin(), t.end());
    matrix_.makeCompressed();

    auto lu = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    lu->analyzePattern(matrix_);
    lu->factorize(matrix_);
    if (lu->info() != Eigen::Success) {
        throw Error(ErrorCode::SingularSystem, "factorization of the step matrix failed: " + lu->lastErrorMessage());
    }
    lu_ = std::move(lu);
}

Vector StepSystem::solve(const Vector& rhs) const {
    if (rhs.size() != 4 * m_) {
        throw Error(ErrorCode::DimensionMismatch, "rhs has length " + std::to_string(rhs.size()));
    }
    Vector x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success || !x.allFinite()) {
        throw Error(ErrorCode::SolveFailure, "applying the step factorization failed");
    }
    return x;
}

Vector assemble_rhs(const BeamState& s, const ModelParams& p, const FemMatrices& fem, double dt) {
    const int m = fem.dim();
    check_dims(s, m);
    const SparseMatrix& M = fem.mass;
    const SparseMatrix& K = fem.stiffness;
    const SparseMatrix& G = fem.gradient;

    Vector b(4 * m);
    segment(b, Block::Phi, m) = (p.rho1 / dt) * (M * s.Phi) - p.kappa * (K * s.phi + G.transpose() * s.psi);
    segment(b, Block::Psi, m) = (p.rho2 / dt) * (G.transpose() * s.Phi) - p.alpha * (K * s.psi) -
                                p.kappa * (G * s.phi + M * s.psi);
    segment(b, Block::Theta, m) = (p.c_cap / dt) * (M * s.theta) + (p.d_cap / dt) * (M * s.p);
    segment(b, Block::P, m) = (p.d_cap / dt) * (M * s.theta) + (p.r_cap / dt) * (M * s.p);
    return b;
}

BeamState step(const BeamState& s, const StepSystem& system, const ModelParams& params, const FemMatrices& fem) {
    const int m = system.block_dim();
    if (fem.dim() != m) {
        throw Error(ErrorCode::DimensionMismatch, "step system and matrices were built on different meshes");
    }
    if (!(system.params() == params)) {
        throw Error(ErrorCode::ValidationError, "step system was assembled with different parameters");
    }
    const double dt = system.dt();
    const Vector x = system.solve(assemble_rhs(s, params, fem, dt));

    BeamState next;
    next.time = s.time + dt;
    next.Phi = segment(x, Block::Phi, m);
    next.Psi = segment(x, Block::Psi, m);
    next.theta = segment(x, Block::Theta, m);
    next.p = segment(x, Block::P, m);
    next.phi = s.phi + dt * next.Phi;
    next.psi = s.psi + dt * next.Psi;
    next.Phi_prev = s.Phi;
    return next;
}

int step_count(double dt, double t_final) {
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw Error(ErrorCode::ValidationError, "dt and T_final must be positive");
    }
    const double ratio = t_final / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
        throw Error(ErrorCode::ValidationError,
                    "dt = " + std::to_string(dt) + " does not divide T_final = " + std::to_string(t_final));
    }
    return static_cast<int>(n);
}

std::string to_string(AccelerationSeed seed) {
    return seed == AccelerationSeed::Discrete ? "discrete" : "phi2";
}

AccelerationSeed parse_acceleration_seed(std::string_view text) {
    if (text == "phi2") return AccelerationSeed::InitialData;
    if (text == "discrete") return AccelerationSeed::Discrete;
    throw Error(ErrorCode::ParseError, "unknown acceleration seed '" + std::string(text) + "' (expected phi2 or discrete)");
}

void apply_discrete_seed(BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt) {
    check_dims(state, fem.dim());
    Eigen::SimplicialLDLT<SparseMatrix> mass(fem.mass);
    if (mass.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "mass matrix factorization failed");
    const Vector force = -params.kappa / params.rho1 * (fem.stiffness * state.phi + SparseMatrix(fem.gradient.transpose()) * state.psi);
    state.Phi_prev = state.Phi - dt * mass.solve(force);
}

RunResult run(const ModelParams& params, const Mesh1D& mesh, double dt, double t_final, const InitialData& initial,
              const RunOptions& options) {
    require_valid(params);
    if (std::abs(mesh.length - params.length) > 1e-12 * params.length) {
        throw Error(ErrorCode::BadMesh, "mesh length differs from the model length");
    }
    const int n_steps = step_count(dt, t_final);
    const int stride = std::max(1, options.trajectory_stride);

    const FemMatrices fem = assemble_matrices(mesh);
    const StepSystem system(params, fem, dt);

    RunResult result;
    result.energy.dt = dt;
    result.energy.records.reserve(static_cast<std::size_t>(n_steps) + 1);
    result.trajectory.reserve(static_cast<std::size_t>(n_steps / stride) + 2);

    BeamState state = initial_state(initial, mesh, dt);
    if (options.seed == AccelerationSeed::Discrete) apply_discrete_seed(state, params, fem, dt);
    const auto record = [&](const BeamState& s) {
        result.energy.records.push_back(make_energy_record(s, params, fem, dt, options.lyapunov));
    };
    record(state);
    result.trajectory.push_back(state);
    for (int n = 1; n <= n_steps; ++n) {
        state = step(state, system, params, fem);
        state.time = n * dt;
        record(state);
        if (n % stride == 0 || n == n_steps) {
            result.trajectory.push_back(state);
        }
    }
    return result;
}

} // namespace thermobeam
