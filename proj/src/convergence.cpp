#include "thermobeam/convergence.hpp"

#include "thermobeam/error.hpp"
#include "thermobeam/stepper.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace thermobeam {

double composite_error(const BeamState& a, const BeamState& b, const FemMatrices& fem) {
    const int m = fem.dim();
    check_dims(a, m);
    check_dims(b, m);
    const Vector e_phi = a.phi - b.phi;
    const Vector e_psi = a.psi - b.psi;
    return l2_norm_sq(a.Phi - b.Phi, fem) + shear_norm_sq(e_phi, e_psi, fem) + l2_norm_sq(a.Psi - b.Psi, fem) +
           h1_seminorm_sq(e_psi, fem) + l2_norm_sq(a.theta - b.theta, fem) + l2_norm_sq(a.p - b.p, fem);
}

BeamState restrict_to(const BeamState& fine, const Mesh1D& fine_mesh, const Mesh1D& coarse_mesh) {
    const bool same_length = std::abs(fine_mesh.length - coarse_mesh.length) <= 1e-12 * fine_mesh.length;
    if (!same_length || fine_mesh.num_elements % coarse_mesh.num_elements != 0) {
        throw Error(ErrorCode::GridMismatch, "coarse mesh with " + std::to_string(coarse_mesh.num_elements) +
                                                 " elements is not nested in a mesh with " +
                                                 std::to_string(fine_mesh.num_elements));
    }
    check_dims(fine, fine_mesh.interior_dim());
    const int ratio = fine_mesh.num_elements / coarse_mesh.num_elements;
    const int m = coarse_mesh.interior_dim();
    const auto sample = [&](const Vector& v) {
        Vector out(m);
        // coarse interior node i sits at fine node (i + 1) * ratio, i.e. interior index (i + 1) * ratio - 1
        for (int i = 0; i < m; ++i) out[i] = v[(i + 1) * ratio - 1];
        return out;
    };
    BeamState out;
    out.time = fine.time;
    out.phi = sample(fine.phi);
    out.psi = sample(fine.psi);
    out.Phi = sample(fine.Phi);
    out.Psi = sample(fine.Psi);
    out.theta = sample(fine.theta);
    out.p = sample(fine.p);
    if (fine.has_prev()) out.Phi_prev = sample(fine.Phi_prev);
    return out;
}

double composite_error(const BeamState& coarse, const Mesh1D& coarse_mesh, const BeamState& reference,
                       const Mesh1D& reference_mesh) {
    const FemMatrices fem = assemble_matrices(coarse_mesh);
    return composite_error(coarse, restrict_to(reference, reference_mesh, coarse_mesh), fem);
}

std::vector<RefinementLevel> coupled_levels(int coarsest, int count, double dt_ratio, double length) {
    std::vector<RefinementLevel> levels;
    int s = coarsest;
    for (int k = 0; k < count; ++k, s *= 2) {
        levels.push_back({s, dt_ratio * length / s});
    }
    return levels;
}

std::string RefinementStudy::table(char delimiter) const {
    std::ostringstream os;
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "level" << delimiter << 's' << delimiter << "dt" << delimiter << "error" << delimiter << "order\n";
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto& l = levels[k];
        os << k << delimiter << l.level.num_elements << delimiter << num(l.level.dt) << delimiter << num(l.error)
           << delimiter << (l.order ? num(*l.order) : std::string()) << '\n';
    }
    return os.str();
}

namespace {

int integer_ratio(double coarse_dt, double fine_dt) {
    const double ratio = coarse_dt / fine_dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw Error(ErrorCode::GridMismatch, "time step " + std::to_string(coarse_dt) +
                                                 " is not a multiple of the reference step");
    }
    return static_cast<int>(rounded);
}

void check_levels(const std::vector<RefinementLevel>& levels) {
    if (levels.size() < 2) {
        throw Error(ErrorCode::ValidationError, "a refinement study needs at least two levels");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const auto& a = levels[k - 1];
        const auto& b = levels[k];
        const bool no_coarsening = b.num_elements >= a.num_elements && b.dt <= a.dt;
        const bool refines = b.num_elements > a.num_elements || b.dt < a.dt;
        if (!no_coarsening || !refines) {
            throw Error(ErrorCode::ValidationError, "refinement levels must strictly refine");
        }
    }
}

} // namespace

RefinementStudy run_study(const ModelParams& params, const InitialData& initial, double t_final,
                          const std::vector<RefinementLevel>& levels, const StudyOptions& options) {
    check_levels(levels);
    if (options.reference_factor < 2) {
        throw Error(ErrorCode::ValidationError, "reference factor must be at least 2");
    }
    const auto& finest = levels.back();
    RefinementStudy study;
    study.reference = {finest.num_elements * options.reference_factor, finest.dt / options.reference_factor};

    const Mesh1D ref_mesh = build_mesh(params.length, study.reference.num_elements);
    RunOptions run_options;
    run_options.seed = options.seed;
    const RunResult reference = run(params, ref_mesh, study.reference.dt, t_final, initial, run_options);

    study.levels.resize(levels.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t k = next++; k < levels.size(); k = next++) {
            try {
                const auto& level = levels[k];
                const Mesh1D mesh = build_mesh(params.length, level.num_elements);
                const int dt_ratio = integer_ratio(level.dt, study.reference.dt);
                const RunResult coarse = run(params, mesh, level.dt, t_final, initial, run_options);
                const FemMatrices fem = assemble_matrices(mesh);
                double error = 0.0;
                if (options.max_over_time) {
                    for (std::size_t n = 0; n < coarse.trajectory.size(); ++n) {
                        const auto& ref_state = reference.trajectory.at(n * static_cast<std::size_t>(dt_ratio));
                        error = std::max(error, composite_error(coarse.trajectory[n],
                                                                restrict_to(ref_state, ref_mesh, mesh), fem));
                    }
                } else {
                    error = composite_error(coarse.trajectory.back(),
                                            restrict_to(reference.trajectory.back(), ref_mesh, mesh), fem);
                }
                study.levels[k] = {level, error, std::nullopt};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    unsigned threads = options.max_threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                                : options.max_threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(levels.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    double order_sum = 0.0;
    int order_count = 0;
    study.exact = true;
    study.monotone = true;
    for (std::size_t k = 0; k < study.levels.size(); ++k) {
        auto& cur = study.levels[k];
        if (cur.error != 0.0) study.exact = false;
        if (k == 0) continue;
        const double prev = study.levels[k - 1].error;
        if (cur.error > prev) study.monotone = false;
        if (prev > 0.0 && cur.error > 0.0) {
            cur.order = std::log2(prev / cur.error);
            order_sum += *cur.order;
            ++order_count;
        }
    }
    if (order_count > 0) study.mean_order = order_sum / order_count;
    return study;
}

} // namespace thermobeam
