/**
 * @file energy.hpp
 * @brief Discrete energy, dissipation, Lyapunov functionals and decay-rate fits.
 *
 * The discrete energy at level n is
 *
 *   E^n = 1/2 ( rho1 |Phi|^2 + rho1 rho2 / kappa |dPhi|^2 + rho2 |Phi_x|^2
 *             + kappa |phi_x + psi|^2 + r |P|^2 + c |theta|^2 + alpha |psi_x|^2
 *             + 2 d (P, theta) ),
 *
 * with dPhi = (Phi^n - Phi^{n-1}) / dt the backward-difference acceleration.
 */
#pragma once

#include "thermobeam/fem.hpp"
#include "thermobeam/model.hpp"
#include "thermobeam/state.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace thermobeam {

struct LyapunovConfig {
    double N = 1e3;  ///< weight of the energy
    double N1 = 1.0; ///< weight of F1

    bool operator==(const LyapunovConfig&) const = default;
};

struct EnergyRecord {
    double t = 0.0;
    double energy = 0.0;
    double diss_theta = 0.0; ///< k_theta |theta_x|^2
    double diss_p = 0.0;     ///< h_diff |P_x|^2
    double diss_damp = 0.0;  ///< mu |damped velocity|^2
    std::optional<double> lyapunov;
};

struct EnergySeries {
    double dt = 0.0;
    std::vector<EnergyRecord> records;

    std::vector<double> times() const;
    std::vector<double> energies() const;
};

/// Throws MissingPrev if the state carries no backward-difference seed.
double discrete_energy(const BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt);

/// Same quantity grouped as in the continuous energy:
/// (c - d^2/r)|theta|^2 + |r^{1/2} P + d r^{-1/2} theta|^2 for the capacity part.
double continuous_energy(const BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt);

/// F1..F4 combination weighted by cfg (RotationDamped), or N E + N1 F1 + F2 with
/// the displacement-damping functionals (DisplacementDamped).
/// Throws UnsupportedVariant for Undamped.
double lyapunov(const BeamState& state, const ModelParams& params, const FemMatrices& fem, const LyapunovConfig& cfg,
                double dt);

/// Equivalence constant between the Lyapunov functional and the energy for the
/// rotation-damped system.
double beta0(const ModelParams& params, const LyapunovConfig& cfg);

EnergyRecord make_energy_record(const BeamState& state, const ModelParams& params, const FemMatrices& fem, double dt,
                                const std::optional<LyapunovConfig>& lyapunov_cfg = std::nullopt);

struct MonotoneReport {
    double max_rate = 0.0;   ///< max_n (E^n - E^{n-1}) / dt
    std::size_t worst_step = 0;
    double tolerance = 0.0;  ///< 1e-10 max(E^0, 1)
    bool passed = false;
};

MonotoneReport check_monotone(std::span<const double> values, double dt);
MonotoneReport check_monotone(const EnergySeries& series);

struct DecayFit {
    double lambda1 = 0.0;      ///< least-squares slope of -ln E against t on the tail window
    double r_squared = 0.0;
    double tail_average = 0.0; ///< mean of -ln(E^n / E^0) / t_n on the tail window
    /// Slope and final value of -ln E / t over the final quarter of the series.
    double plateau_slope = 0.0;
    double plateau_value = 0.0;
    std::size_t window_begin = 0;
};

/// Fits the final half of the series (at least 20 samples).
/// Throws DegenerateSeries for short series or non-positive energies in the window.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> energies);
DecayFit fit_decay_rate(const EnergySeries& series);

} // namespace thermobeam
