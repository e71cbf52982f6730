/**
 * @file fem.hpp
 * @brief Uniform 1D mesh and P1 matrices on the homogeneous-Dirichlet space.
 *
 * Unknowns live on the interior nodes x_1 .. x_{s-1}; boundary values are
 * implicitly zero. With u_i the hat function of interior node i,
 *
 *   mass       M[i][j] = (u_j,  u_i)    = h/6 [1 4 1]
 *   stiffness  K[i][j] = (u_j', u_i')   = 1/h [-1 2 -1]
 *   gradient   G[i][j] = (u_j', u_i)    = 1/2 [-1 0 1]
 *
 * so that (v_x, w) = w^T G v and (v, w_x) = w^T G^T v = -w^T G v.
 */
#pragma once

#include "thermobeam/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace thermobeam {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Mesh1D {
    double length = 1.0;
    int num_elements = 0;
    double h = 0.0;
    std::vector<double> nodes; ///< x_0 = 0 .. x_s = length

    /// Number of interior nodes, s - 1.
    int interior_dim() const noexcept { return num_elements - 1; }
    double interior_node(int i) const { return nodes.at(static_cast<std::size_t>(i + 1)); }
};

/// Throws BadMesh unless length > 0 and num_elements >= 2.
Mesh1D build_mesh(double length, int num_elements);

struct FemMatrices {
    SparseMatrix mass;
    SparseMatrix stiffness;
    SparseMatrix gradient;

    int dim() const noexcept { return static_cast<int>(mass.rows()); }
};

FemMatrices assemble_matrices(const Mesh1D& mesh);

/// Nodal interpolant restricted to interior nodes: v[i] = f(x_{i+1}).
Vector interpolate(const ScalarFunction& f, const Mesh1D& mesh);

/// u^T A v. Throws DimensionMismatch on size disagreement.
double pairing(const Vector& u, const Vector& v, const SparseMatrix& a);

/// ||v||^2 in L^2, i.e. v^T M v.
double l2_norm_sq(const Vector& v, const FemMatrices& fem);
/// ||v_x||^2, i.e. v^T K v.
double h1_seminorm_sq(const Vector& v, const FemMatrices& fem);
/// ||phi_x + psi||^2 = phi^T K phi + 2 psi^T G phi + psi^T M psi.
double shear_norm_sq(const Vector& phi, const Vector& psi, const FemMatrices& fem);

} // namespace thermobeam
