#pragma once

#include "thermobeam/fem.hpp"

namespace thermobeam {

/// Nodal fields at one time level. Phi and Psi are the velocities of phi and psi.
struct BeamState {
    double time = 0.0;
    Vector phi, psi;
    Vector Phi, Psi;
    Vector theta, p;
    /// Phi at the previous level; at t = 0 it is Phi - dt * phi_tt(0) so that
    /// (Phi - Phi_prev) / dt reproduces the initial acceleration.
    Vector Phi_prev;

    static BeamState zero(int m);

    int dim() const noexcept { return static_cast<int>(phi.size()); }
    bool has_prev() const noexcept { return Phi_prev.size() == phi.size() && phi.size() > 0; }
};

/// Throws DimensionMismatch unless every field has length m (Phi_prev may be empty).
void check_dims(const BeamState& state, int m);

/// Interpolates the initial data; the backward-difference seed is phi2.
BeamState initial_state(const InitialData& initial, const Mesh1D& mesh, double dt);

} // namespace thermobeam
