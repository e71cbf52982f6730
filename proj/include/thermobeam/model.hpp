/**
 * @file model.hpp
 * @brief Physical parameters of the thermodiffusive Bresse-Timoshenko beam.
 *
 * The model solved on (0, L) is
 *
 *     rho1 phi_tt - kappa (phi_x + psi)_x             [+ mu phi_t] = 0
 *    -rho2 phi_ttx - alpha psi_xx + kappa (phi_x + psi)
 *                  - xi1 theta_x - xi2 P_x             [+ mu psi_t] = 0
 *     c theta_t + d P_t - k_theta theta_xx - xi1 psi_tx              = 0
 *     d theta_t + r P_t - h_diff  P_xx     - xi2 psi_tx              = 0
 *
 * with homogeneous Dirichlet conditions on all four fields. The bracketed
 * damping terms select the DisplacementDamped / RotationDamped variants.
 */
#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace thermobeam {

enum class DampingVariant { Undamped, RotationDamped, DisplacementDamped };

std::string_view to_string(DampingVariant variant) noexcept;
/// Accepts the enumerator names, case-insensitively. Throws ParseError otherwise.
DampingVariant parse_variant(std::string_view name);

/// Constants of the original model, before the chemical-potential substitution.
struct RawConstants {
    double b = 0.0;      ///< bending stiffness
    double beta = 0.0;   ///< stress-diffusion coupling
    double gamma = 0.0;  ///< stress-temperature coupling
    double varrho = 0.0; ///< measure of the diffusive effect
    double varpi = 0.0;  ///< measure of the thermo-diffusion effect
    double rho3 = 0.0;   ///< thermal capacity

    bool operator==(const RawConstants&) const = default;
};

struct EffectiveCoefficients {
    double alpha = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    double c_cap = 0.0;
    double r_cap = 0.0;
};

/**
 * alpha = b - beta^2/varrho, xi1 = gamma + beta varpi/varrho, xi2 = beta/varrho,
 * c = rho3 + varpi/varrho, r = 1/varrho.
 *
 * Throws DivisionDomain when varrho <= 0 and NonPositiveAlpha when alpha <= 0.
 */
EffectiveCoefficients derive_effective_params(const RawConstants& raw);

struct ModelParams {
    double rho1 = 1.0;
    double rho2 = 1.0;
    double kappa = 1.0;   ///< shear stiffness
    double alpha = 1.0;   ///< effective bending stiffness
    double xi1 = 0.0;
    double xi2 = 0.0;
    double c_cap = 1.0;
    double d_cap = 0.0;
    double r_cap = 1.0;
    double k_theta = 1.0; ///< thermal conductivity
    double h_diff = 1.0;  ///< mass diffusivity
    double mu = 0.0;      ///< frictional damping
    DampingVariant variant = DampingVariant::Undamped;
    double length = 1.0;

    bool operator==(const ModelParams&) const = default;

    /// Coefficients of the two numerical tests (kappa = 365, d = 0.002, ...), mu = 1.
    static ModelParams preset(DampingVariant variant);
};

struct ValidationReport {
    struct Check {
        std::string name;
        bool passed = false;
        std::string detail;
    };
    std::vector<Check> checks;

    bool ok() const noexcept;
    /// One line per failed check.
    std::string failures() const;
};

ValidationReport validate(const ModelParams& params);

/// Throws ValidationError naming every violated condition.
void require_valid(const ModelParams& params);

/// Quadratic form c theta^2 + r p^2 + 2 d theta p of the capacity matrix.
inline double capacity_form(const ModelParams& params, double theta, double p) noexcept {
    return params.c_cap * theta * theta + params.r_cap * p * p + 2.0 * params.d_cap * theta * p;
}

using ScalarFunction = std::function<double(double)>;

/// Initial displacement, velocity and acceleration, rotation and its rate,
/// temperature and chemical potential.
struct InitialData {
    ScalarFunction phi0, phi1, phi2, psi0, psi1, theta0, p0;

    static InitialData uniform(const ScalarFunction& f);
    static InitialData zero();
    /// x^2 (1 - x) for every field; vanishes at both ends of the unit interval.
    static InitialData cubic();

    InitialData scaled(double factor) const;
};

/// Names of the fields whose value at x = 0 or x = length exceeds tol in magnitude.
std::vector<std::string> boundary_violations(const InitialData& data, double length, double tol = 1e-12);

} // namespace thermobeam
