#include "support/oracles.hpp"
#include "thermobeam/energy.hpp"
#include "thermobeam/error.hpp"
#include "thermobeam/stepper.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace thermobeam;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

ModelParams with_variant(ModelParams p, DampingVariant v, double mu) {
    p.variant = v;
    p.mu = v == DampingVariant::Undamped ? 0.0 : mu;
    return p;
}

// Four valid coefficient sets; damping is filled in per variant.
std::vector<ModelParams> parameter_sets() {
    std::vector<ModelParams> sets;
    sets.push_back(ModelParams::preset(DampingVariant::Undamped));

    ModelParams unit = sets.front();
    unit.rho1 = unit.rho2 = unit.kappa = unit.alpha = 1.0;
    unit.xi1 = unit.xi2 = 1.0;
    unit.c_cap = unit.r_cap = 1.0;
    unit.d_cap = 0.5;
    unit.k_theta = unit.h_diff = 1.0;
    sets.push_back(unit);

    ModelParams mixed = unit;
    mixed.rho1 = 2.5;
    mixed.rho2 = 0.3;
    mixed.kappa = 40.0;
    mixed.alpha = 7.0;
    mixed.xi1 = -1.3;
    mixed.xi2 = 2.2;
    mixed.c_cap = 3.0;
    mixed.d_cap = -0.9;
    mixed.r_cap = 0.4;
    mixed.k_theta = 0.01;
    mixed.h_diff = 5.0;
    sets.push_back(mixed);

    ModelParams stiff = unit;
    stiff.kappa = 1e4;
    stiff.alpha = 1e-2;
    stiff.xi1 = 10.0;
    stiff.xi2 = 10.0;
    stiff.c_cap = 1e-3;
    stiff.r_cap = 1e-3;
    stiff.d_cap = 9e-4;
    stiff.k_theta = 1e-4;
    stiff.h_diff = 1e-4;
    sets.push_back(stiff);
    return sets;
}

constexpr DampingVariant all_variants[] = {DampingVariant::Undamped, DampingVariant::RotationDamped,
                                           DampingVariant::DisplacementDamped};

BeamState difference(const BeamState& a, const BeamState& b) {
    BeamState d;
    d.time = a.time;
    d.phi = a.phi - b.phi;
    d.psi = a.psi - b.psi;
    d.Phi = a.Phi - b.Phi;
    d.Psi = a.Psi - b.Psi;
    d.theta = a.theta - b.theta;
    d.p = a.p - b.p;
    d.Phi_prev = a.Phi_prev - b.Phi_prev;
    return d;
}

} // namespace

TEST_CASE("assembled block matrix") {
    SUBCASE("single interior node, undamped test coefficients") {
        const auto params = ModelParams::preset(DampingVariant::Undamped);
        const auto fem = assemble_matrices(build_mesh(1.0, 2));
        const StepSystem sys(params, fem, 0.03125);
        const auto a = dense(sys.matrix());
        REQUIRE(a.rows() == 4);
        CHECK(a(0, 0) == doctest::Approx(32.0 / 3.0 + 45.625).epsilon(1e-14));
    }
    SUBCASE("zero couplings decouple the elastic and capacity blocks") {
        auto params = ModelParams::preset(DampingVariant::RotationDamped);
        params.xi1 = params.xi2 = params.d_cap = 0.0;
        const auto fem = assemble_matrices(build_mesh(1.0, 6));
        const auto a = dense(StepSystem(params, fem, 0.01).matrix());
        const int m = fem.dim();
        CHECK(a.block(0, 2 * m, 2 * m, 2 * m).isZero(0.0));
        CHECK(a.block(2 * m, 0, 2 * m, 2 * m).isZero(0.0));
        CHECK(a.block(2 * m, 3 * m, m, m).isZero(0.0));
        CHECK(a.block(3 * m, 2 * m, m, m).isZero(0.0));
    }
    SUBCASE("matches the weak-form oracle") {
        for (const auto& base : parameter_sets()) {
            for (auto v : all_variants) {
                for (int s : {2, 4, 7}) {
                    const auto params = with_variant(base, v, 0.7);
                    const auto mesh = build_mesh(1.3, s);
                    const auto fem = assemble_matrices(mesh);
                    const double dt = 0.02;
                    const StepSystem sys(params, fem, dt);
                    const Eigen::MatrixXd oracle_a = oracle::weak_matrix(params, mesh, dt);
                    const int n = 4 * fem.dim();
                    for (unsigned seed = 0; seed < 3; ++seed) {
                        std::mt19937 gen(seed);
                        std::uniform_real_distribution<double> dist(-1.0, 1.0);
                        Vector x(n);
                        for (int i = 0; i < n; ++i) x[i] = dist(gen);
                        const Vector lhs = sys.matrix() * x;
                        const Vector ref = oracle_a * x;
                        CHECK(max_abs(lhs - ref) <= 1e-10 * std::max(1.0, max_abs(ref)));
                    }
                }
            }
        }
    }
    SUBCASE("does not depend on the step index") {
        const auto params = ModelParams::preset(DampingVariant::RotationDamped);
        const auto fem = assemble_matrices(build_mesh(1.0, 8));
        const StepSystem first(params, fem, 0.0625);
        const StepSystem later(params, fem, 0.0625);
        CHECK((dense(first.matrix()) - dense(later.matrix())).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("rejects non-positive steps") {
        const auto params = ModelParams::preset(DampingVariant::RotationDamped);
        const auto fem = assemble_matrices(build_mesh(1.0, 4));
        CHECK_THROWS_AS(StepSystem(params, fem, 0.0), Error);
        CHECK_THROWS_AS(StepSystem(params, fem, -1.0), Error);
    }
}

TEST_CASE("right-hand side") {
    const auto params = ModelParams::preset(DampingVariant::RotationDamped);
    SUBCASE("zero state") {
        const auto fem = assemble_matrices(build_mesh(1.0, 5));
        CHECK(assemble_rhs(BeamState::zero(fem.dim()), params, fem, 0.1).isZero(0.0));
    }
    SUBCASE("temperature only with zero couplings") {
        auto p = params;
        p.xi1 = p.xi2 = p.d_cap = 0.0;
        const auto fem = assemble_matrices(build_mesh(1.0, 5));
        const int m = fem.dim();
        auto s = BeamState::zero(m);
        s.theta = Vector::Ones(m);
        const Vector rhs = assemble_rhs(s, p, fem, 0.1);
        CHECK(rhs.head(2 * m).isZero(0.0));
        CHECK_FALSE(rhs.segment(2 * m, m).isZero(0.0));
        CHECK(rhs.tail(m).isZero(0.0));
    }
    SUBCASE("matches the weak-form oracle") {
        for (auto v : all_variants) {
            const auto pv = with_variant(params, v, 1.0);
            const auto mesh = build_mesh(1.0, 4);
            const auto fem = assemble_matrices(mesh);
            for (unsigned seed = 1; seed <= 5; ++seed) {
                const auto s = oracle::random_state(fem.dim(), seed);
                const Vector rhs = assemble_rhs(s, pv, fem, 0.05);
                const Vector ref = oracle::weak_rhs(s, pv, mesh, 0.05);
                CHECK(max_abs(rhs - ref) <= 1e-10 * std::max(1.0, max_abs(ref)));
            }
        }
    }
}

TEST_CASE("single step") {
    const auto params = ModelParams::preset(DampingVariant::RotationDamped);
    SUBCASE("zero state stays zero") {
        const auto fem = assemble_matrices(build_mesh(1.0, 8));
        const StepSystem sys(params, fem, 0.0625);
        const auto next = step(BeamState::zero(fem.dim()), sys, params, fem);
        for (const Vector* v : {&next.phi, &next.psi, &next.Phi, &next.Psi, &next.theta, &next.p})
            CHECK(v->isZero(0.0));
    }
    SUBCASE("one interior node against a hand-assembled 4x4 solve") {
        const double dt = 0.25;
        const auto mesh = build_mesh(1.0, 2);
        const auto fem = assemble_matrices(mesh);
        const auto s0 = initial_state(InitialData::cubic(), mesh, dt);
        for (auto v : all_variants) {
            const auto p = with_variant(params, v, 1.0);
            const double M = 1.0 / 3.0, K = 4.0;
            const double mu_phi = v == DampingVariant::DisplacementDamped ? p.mu : 0.0;
            const double mu_psi = v == DampingVariant::RotationDamped ? p.mu : 0.0;
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
            a(0, 0) = p.rho1 / dt * M + p.kappa * dt * K + mu_phi * M;
            a(1, 1) = p.alpha * dt * K + p.kappa * dt * M + mu_psi * M;
            a(2, 2) = p.c_cap / dt * M + p.k_theta * K;
            a(2, 3) = a(3, 2) = p.d_cap / dt * M;
            a(3, 3) = p.r_cap / dt * M + p.h_diff * K;
            Vector b(4);
            b[0] = p.rho1 / dt * M * s0.Phi[0] - p.kappa * K * s0.phi[0];
            b[1] = -p.alpha * K * s0.psi[0] - p.kappa * M * s0.psi[0];
            b[2] = p.c_cap / dt * M * s0.theta[0] + p.d_cap / dt * M * s0.p[0];
            b[3] = p.d_cap / dt * M * s0.theta[0] + p.r_cap / dt * M * s0.p[0];
            const Vector x = oracle::dense_solve(a, b);

            const auto next = step(s0, StepSystem(p, fem, dt), p, fem);
            CHECK(next.Phi[0] == doctest::Approx(x[0]).epsilon(1e-12));
            CHECK(next.Psi[0] == doctest::Approx(x[1]).epsilon(1e-12));
            CHECK(next.theta[0] == doctest::Approx(x[2]).epsilon(1e-12));
            CHECK(next.p[0] == doctest::Approx(x[3]).epsilon(1e-12));
            CHECK(next.phi[0] == doctest::Approx(s0.phi[0] + dt * x[0]).epsilon(1e-12));
            CHECK(next.psi[0] == doctest::Approx(s0.psi[0] + dt * x[1]).epsilon(1e-12));
        }
    }
    SUBCASE("three interior nodes against the weak-form dense solve") {
        const double dt = 0.125;
        const auto mesh = build_mesh(1.0, 4);
        const auto fem = assemble_matrices(mesh);
        for (auto v : all_variants) {
            const auto p = with_variant(params, v, 1.0);
            for (unsigned seed = 10; seed < 13; ++seed) {
                const auto s0 = oracle::random_state(3, seed);
                const Vector x = oracle::dense_solve(oracle::weak_matrix(p, mesh, dt), oracle::weak_rhs(s0, p, mesh, dt));
                const auto next = step(s0, StepSystem(p, fem, dt), p, fem);
                Vector got(12);
                got << next.Phi, next.Psi, next.theta, next.p;
                CHECK(max_abs(got - x) <= 1e-12 * std::max(1.0, max_abs(x)));
                CHECK(max_abs(next.Phi_prev - s0.Phi) == 0.0);
            }
        }
    }
    SUBCASE("mismatched system is rejected") {
        const auto fem4 = assemble_matrices(build_mesh(1.0, 4));
        const auto fem8 = assemble_matrices(build_mesh(1.0, 8));
        const StepSystem sys(params, fem4, 0.1);
        CHECK_THROWS_AS(step(BeamState::zero(7), sys, params, fem8), Error);
        auto other = params;
        other.mu = 2.0;
        CHECK_THROWS_AS(step(BeamState::zero(3), sys, other, fem4), Error);
    }
}

TEST_CASE("step_count") {
    CHECK(step_count(0.03125, 4.0) == 128);
    CHECK(step_count(0.1, 1.0) == 10);
    CHECK_THROWS_AS(step_count(0.3, 1.0), Error);
    CHECK_THROWS_AS(step_count(0.0, 1.0), Error);
    CHECK_THROWS_AS(step_count(0.1, 0.0), Error);
}

TEST_CASE("run") {
    const auto params = ModelParams::preset(DampingVariant::RotationDamped);
    const auto mesh = build_mesh(1.0, 8);
    const double dt = mesh.h / 2;

    SUBCASE("zero data gives a zero trajectory") {
        const auto result = run(params, mesh, dt, 1.0, InitialData::zero());
        CHECK(result.trajectory.size() == 17);
        for (const auto& s : result.trajectory) {
            CHECK(s.phi.isZero(0.0));
            CHECK(s.Psi.isZero(0.0));
            CHECK(s.p.isZero(0.0));
        }
        for (double e : result.energy.energies()) CHECK(e == 0.0);
    }
    SUBCASE("bit-identical repeats") {
        const auto a = run(params, mesh, dt, 1.0, InitialData::cubic());
        const auto b = run(params, mesh, dt, 1.0, InitialData::cubic());
        REQUIRE(a.trajectory.size() == b.trajectory.size());
        for (std::size_t n = 0; n < a.trajectory.size(); ++n) {
            CHECK((a.trajectory[n].phi.array() == b.trajectory[n].phi.array()).all());
            CHECK((a.trajectory[n].theta.array() == b.trajectory[n].theta.array()).all());
        }
        CHECK(a.energy.energies() == b.energy.energies());
    }
    SUBCASE("linear in the initial data") {
        const auto base = run(params, mesh, dt, 1.0, InitialData::cubic());
        for (double lambda : {-3.0, 0.5, 17.0}) {
            const auto scaled = run(params, mesh, dt, 1.0, InitialData::cubic().scaled(lambda));
            for (std::size_t n = 0; n < base.trajectory.size(); ++n) {
                const auto& u = base.trajectory[n];
                const auto& w = scaled.trajectory[n];
                for (auto [x, y] : {std::pair{&u.phi, &w.phi}, {&u.psi, &w.psi}, {&u.Phi, &w.Phi},
                                    {&u.Psi, &w.Psi}, {&u.theta, &w.theta}, {&u.p, &w.p}}) {
                    CHECK(max_abs(*y - lambda * *x) <= 1e-10 * std::abs(lambda) * std::max(max_abs(*x), 1e-300));
                }
            }
        }
    }
    SUBCASE("trajectory stride keeps the final state") {
        RunOptions opts;
        opts.trajectory_stride = 5;
        const auto result = run(params, mesh, dt, 1.0, InitialData::cubic(), opts);
        CHECK(result.trajectory.size() == 5);
        CHECK(result.trajectory.back().time == doctest::Approx(1.0));
        CHECK(result.energy.records.size() == 17);
    }
    SUBCASE("invalid parameters never reach assembly") {
        auto bad = params;
        bad.d_cap = 1.0;
        CHECK_THROWS_AS(run(bad, mesh, dt, 1.0, InitialData::cubic()), Error);
    }
}

double worst_increase(const std::vector<double>& e, std::size_t from) {
    double worst = -INFINITY;
    for (std::size_t n = std::max<std::size_t>(from, 1); n < e.size(); ++n) worst = std::max(worst, e[n] - e[n - 1]);
    return worst;
}

TEST_CASE("discrete energy never increases with the discrete seed") {
    RunOptions opts;
    opts.seed = AccelerationSeed::Discrete;
    for (const auto& base : parameter_sets()) {
        for (auto v : all_variants) {
            for (int s : {4, 8, 16}) {
                const auto params = with_variant(base, v, 1.0);
                const auto mesh = build_mesh(1.0, s);
                const auto e = run(params, mesh, mesh.h / 2, 2.0, InitialData::cubic(), opts).energy.energies();
                CAPTURE(s);
                CAPTURE(to_string(v));
                CHECK(worst_increase(e, 1) <= 1e-12 * std::max(e.front(), 1.0));
            }
        }
    }
}

TEST_CASE("with the phi2 seed energy never increases after the first step") {
    for (const auto& base : parameter_sets()) {
        for (auto v : all_variants) {
            for (int s : {4, 8, 16}) {
                const auto params = with_variant(base, v, 1.0);
                const auto mesh = build_mesh(1.0, s);
                const auto e = run(params, mesh, mesh.h / 2, 2.0, InitialData::cubic()).energy.energies();
                CAPTURE(s);
                CAPTURE(to_string(v));
                CHECK(worst_increase(e, 2) <= 1e-12 * std::max(e.front(), 1.0));
            }
        }
    }
    for (auto v : all_variants) {
        const auto params = ModelParams::preset(v);
        const auto mesh = build_mesh(1.0, 16);
        const auto e = run(params, mesh, mesh.h / 2, 4.0, InitialData::cubic()).energy.energies();
        CHECK(worst_increase(e, 1) <= 1e-12 * std::max(e.front(), 1.0));
    }
}

TEST_CASE("discrete seed satisfies the displacement equation at the start") {
    const auto params = ModelParams::preset(DampingVariant::RotationDamped);
    const auto mesh = build_mesh(1.0, 9);
    const auto fem = assemble_matrices(mesh);
    const double dt = 0.01;
    auto s = initial_state(InitialData::cubic(), mesh, dt);
    apply_discrete_seed(s, params, fem, dt);
    const Vector residual = params.rho1 / dt * (fem.mass * (s.Phi - s.Phi_prev)) +
                            params.kappa * (fem.stiffness * s.phi + SparseMatrix(fem.gradient.transpose()) * s.psi);
    CHECK(max_abs(residual) <= 1e-9);
    CHECK(parse_acceleration_seed("discrete") == AccelerationSeed::Discrete);
    CHECK(parse_acceleration_seed("phi2") == AccelerationSeed::InitialData);
    CHECK_THROWS_AS(parse_acceleration_seed("other"), Error);
}

TEST_CASE("difference of two runs has non-increasing energy") {
    const auto params = ModelParams::preset(DampingVariant::RotationDamped);
    const auto mesh = build_mesh(1.0, 16);
    const double dt = mesh.h / 2;
    auto perturbed = InitialData::cubic();
    const double delta = 1e-6;
    perturbed.phi0 = [delta](double x) { return x * x * (1.0 - x) + delta * x * (1.0 - x); };
    const auto a = run(params, mesh, dt, 2.0, InitialData::cubic());
    const auto b = run(params, mesh, dt, 2.0, perturbed);
    const auto fem = assemble_matrices(mesh);
    const double e0 = discrete_energy(difference(b.trajectory.front(), a.trajectory.front()), params, fem, dt);
    CHECK(e0 > 0.0);
    for (std::size_t n = 1; n < a.trajectory.size(); ++n) {
        const double en = discrete_energy(difference(b.trajectory[n], a.trajectory[n]), params, fem, dt);
        CHECK(en <= e0 * (1.0 + 1e-8));
    }
}
