#include "thermobeam/model.hpp"

#include "thermobeam/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace thermobeam {

std::string_view to_string(DampingVariant variant) noexcept {
    switch (variant) {
    case DampingVariant::Undamped: return "Undamped";
    case DampingVariant::RotationDamped: return "RotationDamped";
    case DampingVariant::DisplacementDamped: return "DisplacementDamped";
    }
    return "Undamped";
}

DampingVariant parse_variant(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lowered == "undamped") return DampingVariant::Undamped;
    if (lowered == "rotationdamped") return DampingVariant::RotationDamped;
    if (lowered == "displacementdamped") return DampingVariant::DisplacementDamped;
    throw Error(ErrorCode::ParseError, "unknown damping variant '" + std::string(name) + "'");
}

EffectiveCoefficients derive_effective_params(const RawConstants& raw) {
    if (!(raw.varrho > 0.0)) {
        throw Error(ErrorCode::DivisionDomain, "varrho must be positive");
    }
    EffectiveCoefficients out;
    out.alpha = raw.b - raw.beta * raw.beta / raw.varrho;
    if (!(out.alpha > 0.0)) {
        throw Error(ErrorCode::NonPositiveAlpha, "b - beta^2/varrho = " + std::to_string(out.alpha));
    }
    out.xi1 = raw.gamma + raw.beta * raw.varpi / raw.varrho;
    out.xi2 = raw.beta / raw.varrho;
    out.c_cap = raw.rho3 + raw.varpi / raw.varrho;
    out.r_cap = 1.0 / raw.varrho;
    return out;
}

ModelParams ModelParams::preset(DampingVariant variant) {
    ModelParams p;
    p.rho1 = 1.0;
    p.rho2 = 1.0;
    p.kappa = 365.0;
    p.alpha = 1.0;
    p.xi1 = 1.0;
    p.xi2 = 4e-4;
    p.c_cap = 1.0;
    p.d_cap = 0.002;
    p.r_cap = 4e-4;
    p.k_theta = 1.0;
    p.h_diff = 0.03;
    p.variant = variant;
    p.mu = variant == DampingVariant::Undamped ? 0.0 : 1.0;
    p.length = 1.0;
    return p;
}

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string ValidationReport::failures() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : checks) {
        if (c.passed) continue;
        if (!first) os << '\n';
        os << c.name << ": " << c.detail;
        first = false;
    }
    return os.str();
}

namespace {

void check_positive(ValidationReport& report, const char* name, double value) {
    std::ostringstream os;
    os << name << " = " << value << " must be > 0";
    report.checks.push_back({std::string(name) + " > 0", std::isfinite(value) && value > 0.0, os.str()});
}

void check_finite(ValidationReport& report, const char* name, double value) {
    report.checks.push_back({std::string(name) + " finite", std::isfinite(value),
                             std::string(name) + " must be finite"});
}

} // namespace

ValidationReport validate(const ModelParams& p) {
    ValidationReport report;
    check_positive(report, "rho1", p.rho1);
    check_positive(report, "rho2", p.rho2);
    check_positive(report, "kappa", p.kappa);
    check_positive(report, "alpha", p.alpha);
    check_positive(report, "k_theta", p.k_theta);
    check_positive(report, "h_diff", p.h_diff);
    check_positive(report, "length", p.length);
    check_positive(report, "c_cap", p.c_cap);
    check_positive(report, "r_cap", p.r_cap);
    check_finite(report, "xi1", p.xi1);
    check_finite(report, "xi2", p.xi2);
    check_finite(report, "d_cap", p.d_cap);

    {
        std::ostringstream os;
        os << "mu = " << p.mu << " must be >= 0";
        report.checks.push_back({"mu >= 0", std::isfinite(p.mu) && p.mu >= 0.0, os.str()});
    }
    {
        const double det = p.c_cap * p.r_cap - p.d_cap * p.d_cap;
        std::ostringstream os;
        os << "capacity matrix Lambda = [[c, d], [d, r]] is not positive definite: c*r - d^2 = " << det;
        report.checks.push_back({"Lambda positive definite (c*r - d^2 > 0)",
                                 std::isfinite(det) && det > 0.0 && p.c_cap > 0.0, os.str()});
    }
    {
        const bool consistent = p.variant != DampingVariant::Undamped || p.mu == 0.0;
        std::ostringstream os;
        os << "variant Undamped requires mu = 0, got mu = " << p.mu;
        report.checks.push_back({"damping matches variant", consistent, os.str()});
    }
    return report;
}

void require_valid(const ModelParams& params) {
    const auto report = validate(params);
    if (!report.ok()) {
        throw Error(ErrorCode::ValidationError, report.failures());
    }
}

InitialData InitialData::uniform(const ScalarFunction& f) {
    return {f, f, f, f, f, f, f};
}

InitialData InitialData::zero() {
    return uniform([](double) { return 0.0; });
}

InitialData InitialData::cubic() {
    return uniform([](double x) { return x * x * (1.0 - x); });
}

InitialData InitialData::scaled(double factor) const {
    auto scale = [factor](const ScalarFunction& f) -> ScalarFunction {
        return [f, factor](double x) { return factor * f(x); };
    };
    return {scale(phi0), scale(phi1), scale(phi2), scale(psi0), scale(psi1), scale(theta0), scale(p0)};
}

std::vector<std::string> boundary_violations(const InitialData& data, double length, double tol) {
    const std::pair<const char*, const ScalarFunction*> fields[] = {
        {"phi0", &data.phi0}, {"phi1", &data.phi1},     {"phi2", &data.phi2}, {"psi0", &data.psi0},
        {"psi1", &data.psi1}, {"theta0", &data.theta0}, {"p0", &data.p0},
    };
    std::vector<std::string> bad;
    for (const auto& [name, f] : fields) {
        if (!*f || std::abs((*f)(0.0)) > tol || std::abs((*f)(length)) > tol) {
            bad.emplace_back(name);
        }
    }
    return bad;
}

} // namespace thermobeam
