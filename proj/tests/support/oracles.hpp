// Test-only oracles. Everything here evaluates P1 functions pointwise and
// integrates with Gauss quadrature; none of it touches the assembled matrices.
#pragma once

#include "thermobeam/fem.hpp"
#include "thermobeam/model.hpp"
#include "thermobeam/state.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracle {

using thermobeam::BeamState;
using thermobeam::Mesh1D;
using thermobeam::ModelParams;
using thermobeam::Vector;

/// Value and slope of the P1 function with interior coefficients v at x.
struct Eval {
    double value;
    double slope;
};
Eval eval_p1(const Vector& v, const Mesh1D& mesh, double x);

/// Hat function of interior node i (x_{i+1}).
Eval eval_hat(int i, const Mesh1D& mesh, double x);

/// Sum over elements of 4-point Gauss quadrature of f(x).
double integrate(const Mesh1D& mesh, const std::function<double(double)>& f);

/// Dense mass, stiffness and gradient matrices by quadrature.
Eigen::MatrixXd mass(const Mesh1D& mesh);
Eigen::MatrixXd stiffness(const Mesh1D& mesh);
Eigen::MatrixXd gradient(const Mesh1D& mesh);

/// Residual of the four discrete equations at every test function, given the
/// level n-1 state and candidate level n unknowns (Phi, Psi, theta, P).
/// Block order [Phi, Psi, theta, P].
Vector weak_residual(const BeamState& old, const Vector& Phi, const Vector& Psi, const Vector& theta,
                     const Vector& p, const ModelParams& params, const Mesh1D& mesh, double dt);

/// Dense system matrix and right-hand side recovered from weak_residual.
Eigen::MatrixXd weak_matrix(const ModelParams& params, const Mesh1D& mesh, double dt);
Vector weak_rhs(const BeamState& old, const ModelParams& params, const Mesh1D& mesh, double dt);

/// Gaussian elimination with partial pivoting.
Vector dense_solve(Eigen::MatrixXd a, Vector b);

/// Discrete energy by quadrature of the seven quadratic terms and the cross term.
double energy(const BeamState& s, const ModelParams& params, const Mesh1D& mesh, double dt);

/// Lyapunov functional by quadrature of the F1..F4 definitions.
double lyapunov(const BeamState& s, const ModelParams& params, const Mesh1D& mesh, double n_weight, double n1_weight,
                double dt);

/// Random state with entries in [-1, 1]; deterministic in the seed.
BeamState random_state(int m, unsigned seed);

} // namespace oracle
