// Command-line driver: simulate, convergence, compare-variants, validate.

#include "thermobeam/convergence.hpp"
#include "thermobeam/error.hpp"
#include "thermobeam/io.hpp"
#include "thermobeam/stepper.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace thermobeam;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,
    kParse = 3,
    kSolve = 4,
    kIo = 5,
};

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::IoError: return kIo;
    case ErrorCode::SingularSystem:
    case ErrorCode::SolveFailure: return kSolve;
    case ErrorCode::NonPositiveAlpha:
    case ErrorCode::DivisionDomain:
    case ErrorCode::ValidationError:
    case ErrorCode::BadMesh: return kValidation;
    default: return kFailure;
    }
}

unsigned thread_cap() {
    if (const char* env = std::getenv("THERMOBEAM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring THERMOBEAM_THREADS='" << env << "'\n";
    }
    return 0;
}

struct DecaySummary {
    MonotoneReport monotone;
    std::optional<DecayFit> fit;
};

DecaySummary summarize(const EnergySeries& energy) {
    DecaySummary s{check_monotone(energy), std::nullopt};
    try {
        s.fit = fit_decay_rate(energy);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateSeries) throw;
    }
    return s;
}

int cmd_validate(const std::string& source) {
    const RunConfig config = load_config(source);
    const auto report = validate(config.params);
    for (const auto& c : report.checks) {
        std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << '\n';
    }
    const auto& p = config.params;
    std::cout << "c*r - d^2 = " << format_double(p.c_cap * p.r_cap - p.d_cap * p.d_cap) << '\n';
    std::cout << "variant = " << to_string(p.variant) << ", s = " << config.num_elements
              << ", dt = " << format_double(config.time_step()) << ", T_final = " << format_double(config.t_final)
              << '\n';
    return report.ok() ? kOk : kValidation;
}

int cmd_simulate(const std::string& source, const std::string& output_override) {
    RunConfig config = load_config(source);
    if (!output_override.empty()) config.output_dir = output_override;
    require_valid(config.params);

    const fs::path dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");

    const Mesh1D mesh = build_mesh(config.params.length, config.num_elements);
    RunOptions options;
    if (config.params.variant != DampingVariant::Undamped) options.lyapunov = config.lyapunov;
    options.trajectory_stride = config.snapshot_stride;
    options.seed = config.seed;
    const RunResult result =
        run(config.params, mesh, config.time_step(), config.t_final, config.initial_data(), options);

    write_energy_csv(result.energy, dir / "energy.csv");
    if (config.emit_fields) {
        write_fields_dat(result.trajectory, mesh, dir / "fields.dat");
        for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
            char name[48];
            std::snprintf(name, sizeof name, "snapshot_%06zu.csv", k);
            write_snapshot_csv(result.trajectory[k], mesh, dir / "snapshots" / name);
        }
    }
    emit_plot_scripts(dir);
    {
        std::ofstream out(dir / "config.txt", std::ios::binary);
        out << serialize_config(config);
    }

    const auto summary = summarize(result.energy);
    const auto& rec = result.energy.records;
    std::cout << "steps          " << rec.size() - 1 << '\n'
              << "E(0)           " << format_double(rec.front().energy) << '\n'
              << "E(T)           " << format_double(rec.back().energy) << '\n'
              << "max dE/dt      " << format_double(summary.monotone.max_rate) << " ("
              << (summary.monotone.passed ? "non-increasing" : "INCREASING") << ")\n";
    if (summary.fit) {
        std::cout << "lambda1        " << format_double(summary.fit->lambda1) << '\n'
                  << "R^2            " << format_double(summary.fit->r_squared) << '\n';
    }
    std::cout << "output         " << dir.string() << '\n';
    return summary.monotone.passed ? kOk : kFailure;
}

int cmd_convergence(const std::string& source, int levels, int ref_factor, int coarsest, double t_final,
                    bool max_over_time, const std::string& csv_path) {
    const RunConfig config = load_config(source);
    require_valid(config.params);
    if (levels < 2) throw Error(ErrorCode::ValidationError, "--levels must be at least 2");
    StudyOptions options;
    options.reference_factor = ref_factor;
    options.max_over_time = max_over_time;
    options.max_threads = thread_cap();
    options.seed = config.seed;
    const double ratio = config.dt ? *config.dt / config.mesh_size() : config.dt_ratio;
    const auto study = run_study(config.params, config.initial_data(), t_final > 0.0 ? t_final : config.t_final,
                                 coupled_levels(coarsest, levels, ratio, config.params.length), options);
    const std::string table = study.table();
    std::cout << table;
    std::cout << "reference s = " << study.reference.num_elements << ", dt = " << format_double(study.reference.dt)
              << '\n';
    if (study.exact) {
        std::cout << "mean order: exact (all errors zero)\n";
    } else if (study.mean_order) {
        std::cout << "mean order: " << format_double(*study.mean_order) << '\n';
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write '" + csv_path + "'");
        out << table;
    }
    return kOk;
}

int cmd_compare(const std::string& source) {
    const RunConfig config = load_config(source);
    std::cout << "variant,mu,lambda1,r_squared,tail_average,monotone,E_final\n";
    for (const auto variant : {DampingVariant::RotationDamped, DampingVariant::DisplacementDamped}) {
        ModelParams params = config.params;
        params.variant = variant;
        if (params.mu == 0.0) params.mu = 1.0;
        require_valid(params);
        const Mesh1D mesh = build_mesh(params.length, config.num_elements);
        RunOptions options;
        options.trajectory_stride = std::numeric_limits<int>::max();
        options.seed = config.seed;
        const auto result = run(params, mesh, config.time_step(), config.t_final, config.initial_data(), options);
        const auto summary = summarize(result.energy);
        std::cout << to_string(variant) << ',' << format_double(params.mu) << ','
                  << (summary.fit ? format_double(summary.fit->lambda1) : "") << ','
                  << (summary.fit ? format_double(summary.fit->r_squared) : "") << ','
                  << (summary.fit ? format_double(summary.fit->tail_average) : "") << ','
                  << (summary.monotone.passed ? "yes" : "no") << ','
                  << format_double(result.energy.records.back().energy) << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implicit Euler / P1 simulator for the thermodiffusive Bresse-Timoshenko beam.\n"
                 "CONFIG is a key = value file or one of the presets test1, test2.\n"
                 "THERMOBEAM_THREADS caps the number of concurrent runs in a convergence study."};
    app.require_subcommand(1);

    std::string config;
    std::string output_dir;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write CSV output and plot scripts");
    simulate->add_option("config", config, "Configuration file or preset")->required();
    simulate->add_option("-o,--output-dir", output_dir, "Override output_dir from the configuration");

    int levels = 3;
    int ref_factor = 4;
    int coarsest = 8;
    double t_final = 0.5;
    bool max_over_time = false;
    std::string csv_path;
    auto* convergence = app.add_subcommand("convergence", "Self-convergence study under joint space-time refinement");
    convergence->add_option("config", config, "Configuration file or preset")->required();
    convergence->add_option("--levels", levels, "Number of refinement levels")->capture_default_str();
    convergence->add_option("--ref-factor", ref_factor, "Reference refinement over the finest level")
        ->capture_default_str();
    convergence->add_option("--coarsest", coarsest, "Elements on the coarsest level")->capture_default_str();
    convergence->add_option("--T", t_final, "Final time of the study")->capture_default_str();
    convergence->add_flag("--max-over-time", max_over_time, "Maximum error over shared time levels");
    convergence->add_option("--csv", csv_path, "Also write the table to this file");

    auto* compare = app.add_subcommand("compare-variants", "Fit decay rates under both damping variants");
    compare->add_option("config", config, "Configuration file or preset")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration without running it");
    validate_cmd->add_option("config", config, "Configuration file or preset")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config, output_dir);
        if (convergence->parsed()) {
            return cmd_convergence(config, levels, ref_factor, coarsest, t_final, max_over_time, csv_path);
        }
        if (compare->parsed()) return cmd_compare(config);
        if (validate_cmd->parsed()) return cmd_validate(config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
