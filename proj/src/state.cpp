#include "thermobeam/state.hpp"

#include "thermobeam/error.hpp"

#include <string>

namespace thermobeam {

BeamState BeamState::zero(int m) {
    BeamState s;
    s.phi = s.psi = s.Phi = s.Psi = s.theta = s.p = s.Phi_prev = Vector::Zero(m);
    return s;
}

void check_dims(const BeamState& state, int m) {
    const auto expect = [m](const Vector& v, const char* name) {
        if (v.size() != m) {
            throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has length " + std::to_string(v.size()) +
                                                          ", expected " + std::to_string(m));
        }
    };
    expect(state.phi, "phi");
    expect(state.psi, "psi");
    expect(state.Phi, "Phi");
    expect(state.Psi, "Psi");
    expect(state.theta, "theta");
    expect(state.p, "p");
    if (state.Phi_prev.size() != 0) expect(state.Phi_prev, "Phi_prev");
}

BeamState initial_state(const InitialData& initial, const Mesh1D& mesh, double dt) {
    BeamState s;
    s.time = 0.0;
    s.phi = interpolate(initial.phi0, mesh);
    s.Phi = interpolate(initial.phi1, mesh);
    s.psi = interpolate(initial.psi0, mesh);
    s.Psi = interpolate(initial.psi1, mesh);
    s.theta = interpolate(initial.theta0, mesh);
    s.p = interpolate(initial.p0, mesh);
    s.Phi_prev = s.Phi - dt * interpolate(initial.phi2, mesh);
    return s;
}

} // namespace thermobeam
