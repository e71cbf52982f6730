#include "thermobeam/fem.hpp"

#include "thermobeam/error.hpp"

#include <cmath>
#include <string>

namespace thermobeam {

Mesh1D build_mesh(double length, int num_elements) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error(ErrorCode::BadMesh, "length must be positive, got " + std::to_string(length));
    }
    if (num_elements < 2) {
        throw Error(ErrorCode::BadMesh, "need at least 2 elements, got " + std::to_string(num_elements));
    }
    Mesh1D mesh;
    mesh.length = length;
    mesh.num_elements = num_elements;
    mesh.h = length / num_elements;
    mesh.nodes.resize(static_cast<std::size_t>(num_elements) + 1);
    for (int j = 0; j < num_elements; ++j) {
        mesh.nodes[static_cast<std::size_t>(j)] = j * mesh.h;
    }
    mesh.nodes.back() = length;
    return mesh;
}

namespace {

SparseMatrix tridiagonal(int m, double sub, double diag, double super) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(3 * m));
    for (int i = 0; i < m; ++i) {
        if (i > 0) entries.emplace_back(i, i - 1, sub);
        entries.emplace_back(i, i, diag);
        if (i + 1 < m) entries.emplace_back(i, i + 1, super);
    }
    SparseMatrix a(m, m);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    return a;
}

} // namespace

FemMatrices assemble_matrices(const Mesh1D& mesh) {
    const int m = mesh.interior_dim();
    const double h = mesh.h;
    FemMatrices fem;
    fem.mass = tridiagonal(m, h / 6.0, 2.0 * h / 3.0, h / 6.0);
    fem.stiffness = tridiagonal(m, -1.0 / h, 2.0 / h, -1.0 / h);
    fem.gradient = tridiagonal(m, -0.5, 0.0, 0.5);
    return fem;
}

Vector interpolate(const ScalarFunction& f, const Mesh1D& mesh) {
    const int m = mesh.interior_dim();
    Vector v(m);
    for (int i = 0; i < m; ++i) {
        v[i] = f(mesh.interior_node(i));
    }
    return v;
}

double pairing(const Vector& u, const Vector& v, const SparseMatrix& a) {
    if (u.size() != a.rows() || v.size() != a.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "pairing of sizes " + std::to_string(u.size()) + " and " +
                                                      std::to_string(v.size()) + " through a " +
                                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                      " matrix");
    }
    return u.dot(a * v);
}

double l2_norm_sq(const Vector& v, const FemMatrices& fem) {
    return pairing(v, v, fem.mass);
}

double h1_seminorm_sq(const Vector& v, const FemMatrices& fem) {
    return pairing(v, v, fem.stiffness);
}

double shear_norm_sq(const Vector& phi, const Vector& psi, const FemMatrices& fem) {
    return pairing(phi, phi, fem.stiffness) + 2.0 * pairing(psi, phi, fem.gradient) + pairing(psi, psi, fem.mass);
}

} // namespace thermobeam
