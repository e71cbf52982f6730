#include "thermobeam/io.hpp"

#include "thermobeam/error.hpp"
#include "thermobeam/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace thermobeam {

namespace fs = std::filesystem;

const std::vector<std::string>& initial_field_names() {
    static const std::vector<std::string> names{"phi0", "phi1", "phi2", "psi0", "psi1", "theta0", "p0"};
    return names;
}

InitialData RunConfig::initial_data() const {
    if (initial == "cubic") return InitialData::cubic();
    if (initial == "zero") return InitialData::zero();
    if (initial != "expr") {
        throw Error(ErrorCode::ValidationError, "unknown initial-data selector '" + initial + "'");
    }
    const auto field = [this](const std::string& name) -> ScalarFunction {
        const auto it = initial_exprs.find(name);
        return compile_expression(it == initial_exprs.end() ? "0" : it->second);
    };
    return {field("phi0"), field("phi1"), field("phi2"), field("psi0"),
            field("psi1"), field("theta0"), field("p0")};
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct LineError {
    int line;
    std::string key;
};

[[noreturn]] void parse_fail(const LineError& at, const std::string& msg) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(at.line) + ", key '" + at.key + "': " + msg);
}

double parse_double(std::string_view text, const LineError& at) {
    double value = 0.0;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        parse_fail(at, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text, const LineError& at) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        parse_fail(at, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, const LineError& at) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    parse_fail(at, "expected true or false, got '" + std::string(text) + "'");
}

const std::vector<std::string>& required_model_keys() {
    static const std::vector<std::string> keys{"rho1", "rho2", "kappa", "alpha", "xi1", "xi2", "c_cap",
                                               "d_cap", "r_cap", "k_theta", "h_diff", "variant"};
    return keys;
}

const std::vector<std::string>& raw_keys() {
    static const std::vector<std::string> keys{"b", "beta", "gamma", "varrho", "varpi", "rho3"};
    return keys;
}

} // namespace

RunConfig preset_config(std::string_view name) {
    RunConfig c;
    if (name == "test1") {
        c.params = ModelParams::preset(DampingVariant::RotationDamped);
    } else if (name == "test2") {
        c.params = ModelParams::preset(DampingVariant::DisplacementDamped);
    } else {
        throw Error(ErrorCode::ParseError, "unknown preset '" + std::string(name) + "'");
    }
    c.num_elements = 16;
    c.dt_ratio = 0.5;
    c.t_final = 4.0;
    c.initial = "cubic";
    c.output_dir = "out/" + std::string(name);
    return c;
}

RunConfig parse_config(std::string_view text) {
    struct Entry {
        std::string value;
        LineError at;
    };
    std::map<std::string, Entry> entries;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        const LineError at{line_no, key};
        if (key.empty()) parse_fail(at, "empty key");
        if (value.empty()) parse_fail(at, "empty value");
        if (!entries.emplace(key, Entry{value, at}).second) parse_fail(at, "duplicate key");
        if (end == text.size()) break;
    }

    RunConfig c;
    std::set<std::string> model_keys_seen;
    if (const auto it = entries.find("preset"); it != entries.end()) {
        try {
            c = preset_config(it->second.value);
        } catch (const Error& e) {
            parse_fail(it->second.at, e.what());
        }
        model_keys_seen.insert(required_model_keys().begin(), required_model_keys().end());
        model_keys_seen.insert("mu");
        entries.erase(it);
    }

    RawConstants raw;
    std::set<std::string> raw_seen;
    const std::map<std::string, double*> model_doubles{
        {"rho1", &c.params.rho1},   {"rho2", &c.params.rho2},       {"kappa", &c.params.kappa},
        {"alpha", &c.params.alpha}, {"xi1", &c.params.xi1},         {"xi2", &c.params.xi2},
        {"c_cap", &c.params.c_cap}, {"d_cap", &c.params.d_cap},     {"r_cap", &c.params.r_cap},
        {"k_theta", &c.params.k_theta}, {"h_diff", &c.params.h_diff}, {"mu", &c.params.mu},
        {"length", &c.params.length},
    };
    const std::map<std::string, double*> raw_doubles{
        {"b", &raw.b},           {"beta", &raw.beta},   {"gamma", &raw.gamma},
        {"varrho", &raw.varrho}, {"varpi", &raw.varpi}, {"rho3", &raw.rho3},
    };

    for (const auto& [key, entry] : entries) {
        const auto& v = entry.value;
        const auto& at = entry.at;
        if (auto it = model_doubles.find(key); it != model_doubles.end()) {
            *it->second = parse_double(v, at);
            model_keys_seen.insert(key);
        } else if (auto rit = raw_doubles.find(key); rit != raw_doubles.end()) {
            *rit->second = parse_double(v, at);
            raw_seen.insert(key);
        } else if (key == "variant") {
            try {
                c.params.variant = parse_variant(v);
            } catch (const Error& e) {
                parse_fail(at, e.what());
            }
            model_keys_seen.insert(key);
        } else if (key == "s") {
            c.num_elements = parse_int(v, at);
        } else if (key == "dt") {
            c.dt = parse_double(v, at);
        } else if (key == "dt_ratio") {
            c.dt_ratio = parse_double(v, at);
        } else if (key == "T_final") {
            c.t_final = parse_double(v, at);
        } else if (key == "initial") {
            if (v != "cubic" && v != "zero" && v != "expr") parse_fail(at, "expected cubic, zero or expr");
            c.initial = v;
        } else if (key.rfind("init_", 0) == 0 &&
                   std::ranges::count(initial_field_names(), key.substr(5)) == 1) {
            try {
                (void)compile_expression(v);
            } catch (const Error& e) {
                parse_fail(at, e.what());
            }
            c.initial_exprs[key.substr(5)] = v;
        } else if (key == "output_dir") {
            c.output_dir = v;
        } else if (key == "emit_fields") {
            c.emit_fields = parse_bool(v, at);
        } else if (key == "snapshot_stride") {
            c.snapshot_stride = parse_int(v, at);
        } else if (key == "acceleration_seed") {
            try {
                c.seed = parse_acceleration_seed(v);
            } catch (const Error& e) {
                parse_fail(at, e.what());
            }
        } else if (key == "lyapunov_N") {
            c.lyapunov.N = parse_double(v, at);
        } else if (key == "lyapunov_N1") {
            c.lyapunov.N1 = parse_double(v, at);
        } else {
            parse_fail(at, "unknown key");
        }
    }

    if (!raw_seen.empty()) {
        std::vector<std::string> missing;
        for (const auto& k : raw_keys()) {
            if (!raw_seen.count(k)) missing.push_back(k);
        }
        if (!missing.empty()) {
            std::string list;
            for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
            throw Error(ErrorCode::ValidationError, "raw constants incomplete, missing: " + list);
        }
        for (const char* derived : {"alpha", "xi1", "xi2", "c_cap", "r_cap"}) {
            if (entries.count(derived)) {
                throw Error(ErrorCode::ParseError, std::string("key '") + derived +
                                                       "' conflicts with the raw constants that determine it");
            }
        }
        const auto eff = derive_effective_params(raw);
        c.params.alpha = eff.alpha;
        c.params.xi1 = eff.xi1;
        c.params.xi2 = eff.xi2;
        c.params.c_cap = eff.c_cap;
        c.params.r_cap = eff.r_cap;
        model_keys_seen.insert({"alpha", "xi1", "xi2", "c_cap", "r_cap"});
    }

    std::vector<std::string> problems;
    for (const auto& k : required_model_keys()) {
        if (!model_keys_seen.count(k)) problems.push_back("missing required key '" + k + "'");
    }
    if (model_keys_seen.count("variant") && c.params.variant != DampingVariant::Undamped &&
        !model_keys_seen.count("mu")) {
        problems.push_back("missing required key 'mu' for a damped variant");
    }
    if (const auto report = validate(c.params); !report.ok() && problems.empty()) {
        problems.push_back(report.failures());
    }
    if (c.num_elements < 2) problems.push_back("s must be at least 2");
    if (!(c.time_step() > 0.0)) problems.push_back("time step must be positive");
    if (!(c.t_final > 0.0)) problems.push_back("T_final must be positive");
    if (c.snapshot_stride < 1) problems.push_back("snapshot_stride must be at least 1");
    if (!(c.lyapunov.N > 0.0) || !(c.lyapunov.N1 > 0.0)) problems.push_back("lyapunov_N and lyapunov_N1 must be > 0");
    if (problems.empty()) {
        for (const auto& f : boundary_violations(c.initial_data(), c.params.length, 1e-12)) {
            problems.push_back("initial field " + f + " does not vanish at both ends");
        }
    }
    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
        throw Error(ErrorCode::ValidationError, msg);
    }
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    const auto& p = c.params;
    const auto kv = [&os](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    os << "variant = " << to_string(p.variant) << '\n';
    kv("rho1", p.rho1);
    kv("rho2", p.rho2);
    kv("kappa", p.kappa);
    kv("alpha", p.alpha);
    kv("xi1", p.xi1);
    kv("xi2", p.xi2);
    kv("c_cap", p.c_cap);
    kv("d_cap", p.d_cap);
    kv("r_cap", p.r_cap);
    kv("k_theta", p.k_theta);
    kv("h_diff", p.h_diff);
    kv("mu", p.mu);
    kv("length", p.length);
    os << "s = " << c.num_elements << '\n';
    if (c.dt) kv("dt", *c.dt);
    kv("dt_ratio", c.dt_ratio);
    kv("T_final", c.t_final);
    os << "initial = " << c.initial << '\n';
    for (const auto& [field, expr] : c.initial_exprs) os << "init_" << field << " = " << expr << '\n';
    os << "output_dir = " << c.output_dir << '\n';
    os << "emit_fields = " << (c.emit_fields ? "true" : "false") << '\n';
    os << "snapshot_stride = " << c.snapshot_stride << '\n';
    os << "acceleration_seed = " << to_string(c.seed) << '\n';
    kv("lyapunov_N", c.lyapunov.N);
    kv("lyapunov_N1", c.lyapunov.N1);
    return os.str();
}

RunConfig load_config(const std::string& path_or_preset) {
    std::error_code ec;
    if (!fs::exists(path_or_preset, ec) && (path_or_preset == "test1" || path_or_preset == "test2")) {
        return preset_config(path_or_preset);
    }
    std::ifstream in(path_or_preset, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path_or_preset + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

/// Boundary values included as zeros.
std::vector<double> with_boundary(const Vector& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()) + 2, 0.0);
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i) + 1] = v[i];
    return out;
}

} // namespace

void write_energy_csv(const EnergySeries& series, const fs::path& path) {
    auto out = open_output(path);
    out << "t,E,neg_log_E,neg_log_E_over_t,diss_theta,diss_p,diss_damp,lyapunov\n";
    for (const auto& r : series.records) {
        std::string neg_log, neg_log_t;
        if (r.energy > 0.0) {
            const double nl = -std::log(r.energy);
            neg_log = format_double(nl);
            if (r.t > 0.0) neg_log_t = format_double(nl / r.t);
        }
        out << format_double(r.t) << ',' << format_double(r.energy) << ',' << neg_log << ',' << neg_log_t << ','
            << format_double(r.diss_theta) << ',' << format_double(r.diss_p) << ',' << format_double(r.diss_damp)
            << ',' << (r.lyapunov ? format_double(*r.lyapunov) : std::string()) << '\n';
    }
    finish(out, path);
}

void write_snapshot_csv(const BeamState& state, const Mesh1D& mesh, const fs::path& path) {
    check_dims(state, mesh.interior_dim());
    auto out = open_output(path);
    const auto phi = with_boundary(state.phi);
    const auto psi = with_boundary(state.psi);
    const auto theta = with_boundary(state.theta);
    const auto p = with_boundary(state.p);
    out << "x,phi,psi,theta,p\n";
    for (std::size_t j = 0; j < mesh.nodes.size(); ++j) {
        out << format_double(mesh.nodes[j]) << ',' << format_double(phi[j]) << ',' << format_double(psi[j]) << ','
            << format_double(theta[j]) << ',' << format_double(p[j]) << '\n';
    }
    finish(out, path);
}

void write_fields_dat(const std::vector<BeamState>& states, const Mesh1D& mesh, const fs::path& path) {
    auto out = open_output(path);
    out << "# t x phi psi theta p\n";
    for (const auto& s : states) {
        check_dims(s, mesh.interior_dim());
        const auto phi = with_boundary(s.phi);
        const auto psi = with_boundary(s.psi);
        const auto theta = with_boundary(s.theta);
        const auto p = with_boundary(s.p);
        for (std::size_t j = 0; j < mesh.nodes.size(); ++j) {
            out << format_double(s.time) << ' ' << format_double(mesh.nodes[j]) << ' ' << format_double(phi[j])
                << ' ' << format_double(psi[j]) << ' ' << format_double(theta[j]) << ' ' << format_double(p[j])
                << '\n';
        }
        out << '\n';
    }
    finish(out, path);
}

void emit_plot_scripts(const fs::path& run_dir) {
    const fs::path path = run_dir / "plots.gp";
    auto out = open_output(path);
    out << R"(# gnuplot -c plots.gp   (run inside the output directory)
set terminal pngcairo size 900,600
set grid

set xlabel 'x'
set ylabel 't'
set hidden3d
set view 60,30
)";
    const std::pair<const char*, int> surfaces[] = {{"phi", 3}, {"psi", 4}, {"theta", 5}, {"p", 6}};
    for (const auto& [name, col] : surfaces) {
        out << "set output '" << name << ".png'\n"
            << "set title '" << name << " as function of x and t'\n"
            << "splot 'fields.dat' using 2:1:" << col << " with lines notitle\n";
    }
    out << R"(
unset hidden3d
set datafile separator ','
set xlabel 't'
set ylabel ''
set output 'energy.png'
set title 'Energy as function of time'
plot 'energy.csv' using 1:2 with lines title 'E'
set output 'neg_log_energy.png'
set title '-log(E) as function of time'
plot 'energy.csv' using 1:3 with lines title '-log E'
set output 'neg_log_energy_over_t.png'
set title '-log(E)/t as function of time'
plot 'energy.csv' using 1:4 with lines title '-log E / t'
)";
    finish(out, path);
}

} // namespace thermobeam
