#include "thermobeam/energy.hpp"

#include "thermobeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace thermobeam {

std::vector<double> EnergySeries::times() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.t);
    return out;
}

std::vector<double> EnergySeries::energies() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.energy);
    return out;
}

namespace {

Vector backward_difference(const BeamState& s, double dt) {
    if (!s.has_prev()) {
        throw Error(ErrorCode::MissingPrev, "state has no previous velocity for the backward difference");
    }
    return (s.Phi - s.Phi_prev) / dt;
}

/// Every term except the capacity (theta, P) part, times two.
double mechanical_part_x2(const BeamState& s, const ModelParams& p, const FemMatrices& fem, double dt) {
    const Vector accel = backward_difference(s, dt);
    return p.rho1 * l2_norm_sq(s.Phi, fem) + p.rho1 * p.rho2 / p.kappa * l2_norm_sq(accel, fem) +
           p.rho2 * h1_seminorm_sq(s.Phi, fem) + p.kappa * shear_norm_sq(s.phi, s.psi, fem) +
           p.alpha * h1_seminorm_sq(s.psi, fem);
}

} // namespace

double discrete_energy(const BeamState& s, const ModelParams& p, const FemMatrices& fem, double dt) {
    check_dims(s, fem.dim());
    const double capacity = p.r_cap * l2_norm_sq(s.p, fem) + p.c_cap * l2_norm_sq(s.theta, fem) +
                            2.0 * p.d_cap * pairing(s.p, s.theta, fem.mass);
    return 0.5 * (mechanical_part_x2(s, p, fem, dt) + capacity);
}

double continuous_energy(const BeamState& s, const ModelParams& p, const FemMatrices& fem, double dt) {
    check_dims(s, fem.dim());
    const Vector combined = std::sqrt(p.r_cap) * s.p + (p.d_cap / std::sqrt(p.r_cap)) * s.theta;
    const double capacity =
        (p.c_cap - p.d_cap * p.d_cap / p.r_cap) * l2_norm_sq(s.theta, fem) + l2_norm_sq(combined, fem);
    return 0.5 * (mechanical_part_x2(s, p, fem, dt) + capacity);
}

double lyapunov(const BeamState& s, const ModelParams& p, const FemMatrices& fem, const LyapunovConfig& cfg,
                double dt) {
    check_dims(s, fem.dim());
    const SparseMatrix& M = fem.mass;
    const SparseMatrix& K = fem.stiffness;
    const SparseMatrix& G = fem.gradient;
    const double energy = discrete_energy(s, p, fem, dt);

    // (phi_t, phi), (phi_tx, phi_x), (phi_tx, psi)
    const double vel_disp = pairing(s.Phi, s.phi, M);
    const double vel_disp_x = pairing(s.Phi, s.phi, K);
    const double vel_x_psi = pairing(s.psi, s.Phi, G);

    switch (p.variant) {
    case DampingVariant::RotationDamped: {
        const double psi_sq = l2_norm_sq(s.psi, fem);
        const double f1 = -p.rho1 * vel_disp;
        const double f2 = p.rho1 * vel_disp + 0.5 * p.mu * psi_sq;
        const double f3 = -p.rho2 * vel_disp_x + 0.5 * p.mu * psi_sq;
        const double f4 = -p.rho2 * (vel_disp_x + vel_x_psi) - p.alpha * p.rho1 / p.kappa * vel_x_psi;
        return cfg.N * energy + cfg.N1 * f1 + f2 + f3 + f4;
    }
    case DampingVariant::DisplacementDamped: {
        const double vel_sq = l2_norm_sq(s.Phi, fem);
        const double f1 = -0.5 * p.mu * vel_sq - p.kappa * vel_disp_x;
        const double f2 = p.rho1 * vel_disp + 0.5 * p.mu * l2_norm_sq(s.phi, fem) +
                          0.5 * p.mu * p.rho2 / p.kappa * vel_sq + p.rho2 * vel_disp_x;
        return cfg.N * energy + cfg.N1 * f1 + f2;
    }
    case DampingVariant::Undamped:
        break;
    }
    throw Error(ErrorCode::UnsupportedVariant, "Lyapunov functional requires a damped variant");
}

double beta0(const ModelParams& p, const LyapunovConfig& cfg) {
    return std::max({cfg.N1 * p.rho1, p.rho1 + p.rho2 / 2.0 + p.mu / 2.0, 3.0 * p.rho2 / 2.0 + p.mu / 2.0,
                     p.rho2 + p.alpha * p.rho1 / p.kappa});
}

EnergyRecord make_energy_record(const BeamState& s, const ModelParams& p, const FemMatrices& fem, double dt,
                                const std::optional<LyapunovConfig>& lyapunov_cfg) {
    EnergyRecord r;
    r.t = s.time;
    r.energy = discrete_energy(s, p, fem, dt);
    r.diss_theta = p.k_theta * h1_seminorm_sq(s.theta, fem);
    r.diss_p = p.h_diff * h1_seminorm_sq(s.p, fem);
    switch (p.variant) {
    case DampingVariant::RotationDamped: r.diss_damp = p.mu * l2_norm_sq(s.Psi, fem); break;
    case DampingVariant::DisplacementDamped: r.diss_damp = p.mu * l2_norm_sq(s.Phi, fem); break;
    case DampingVariant::Undamped: r.diss_damp = 0.0; break;
    }
    if (lyapunov_cfg && p.variant != DampingVariant::Undamped) {
        r.lyapunov = lyapunov(s, p, fem, *lyapunov_cfg, dt);
    }
    return r;
}

MonotoneReport check_monotone(std::span<const double> values, double dt) {
    if (values.size() < 2) {
        throw Error(ErrorCode::DegenerateSeries, "monotonicity check needs at least two values");
    }
    MonotoneReport report;
    report.tolerance = 1e-10 * std::max(values.front(), 1.0);
    report.max_rate = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < values.size(); ++n) {
        const double rate = (values[n] - values[n - 1]) / dt;
        if (rate > report.max_rate) {
            report.max_rate = rate;
            report.worst_step = n;
        }
    }
    report.passed = report.max_rate <= report.tolerance;
    return report;
}

MonotoneReport check_monotone(const EnergySeries& series) {
    const auto values = series.energies();
    return check_monotone(values, series.dt);
}

namespace {

struct LineFit {
    double slope = 0.0;
    double r_squared = 1.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double ss_res = std::max(0.0, syy - fit.slope * sxy);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

} // namespace

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> energies) {
    constexpr std::size_t min_window = 20;
    if (times.size() != energies.size()) {
        throw Error(ErrorCode::DimensionMismatch, "times and energies differ in length");
    }
    const std::size_t n = energies.size();
    const std::size_t begin = n / 2;
    if (n - begin < min_window) {
        throw Error(ErrorCode::DegenerateSeries, "fit window holds " + std::to_string(n - begin) +
                                                     " samples, need at least " + std::to_string(min_window));
    }
    if (!(energies.front() > 0.0)) {
        throw Error(ErrorCode::DegenerateSeries, "initial energy must be positive");
    }
    std::vector<double> t, neg_log;
    for (std::size_t i = begin; i < n; ++i) {
        if (!(energies[i] > 0.0)) {
            throw Error(ErrorCode::DegenerateSeries, "non-positive energy at sample " + std::to_string(i));
        }
        t.push_back(times[i]);
        neg_log.push_back(-std::log(energies[i]));
    }

    DecayFit fit;
    fit.window_begin = begin;
    const LineFit line = least_squares(t, neg_log);
    fit.lambda1 = line.slope;
    fit.r_squared = line.r_squared;

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = begin; i < n; ++i) {
        if (times[i] > 0.0) {
            sum += -std::log(energies[i] / energies.front()) / times[i];
            ++count;
        }
    }
    fit.tail_average = count > 0 ? sum / static_cast<double>(count) : 0.0;

    std::vector<double> tq, rate;
    for (std::size_t i = n - n / 4; i < n; ++i) {
        if (times[i] > 0.0) {
            tq.push_back(times[i]);
            rate.push_back(-std::log(energies[i]) / times[i]);
        }
    }
    if (tq.size() >= 2) {
        fit.plateau_slope = least_squares(tq, rate).slope;
        fit.plateau_value = rate.back();
    }
    return fit;
}

DecayFit fit_decay_rate(const EnergySeries& series) {
    const auto t = series.times();
    const auto e = series.energies();
    return fit_decay_rate(t, e);
}

} // namespace thermobeam
