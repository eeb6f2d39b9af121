#include "roadfield/model.hpp"

#include <cmath>

namespace roadfield {

namespace {
constexpr int kGridPoints = 1000;
constexpr double kEqTol = 1e-12;
}  // namespace

void Reaction::check() const {
    if (!f) throw invalid_parameter_error("Reaction: missing f");
    if (!(fprime0 > 0))
        throw invalid_parameter_error("Reaction: fprime0 must be positive");
    if (std::abs(f(0.0)) > kEqTol || std::abs(f(1.0)) > kEqTol)
        throw invalid_parameter_error("Reaction: f(0)=0 and f(1)=0 required");
    for (int i = 1; i < kGridPoints; ++i) {
        const double s = static_cast<double>(i) / kGridPoints;  // (0,1)
        const double fs = f(s);
        if (!(fs > 0.0) || !(fs < fprime0 * s))
            throw invalid_parameter_error(
                "Reaction: 0 < f(s) < f'(0)*s violated on (0,1)");
        const double t = 1.0 + s;  // (1,2]
        if (!(f(t) < 0.0))
            throw invalid_parameter_error("Reaction: f < 0 violated on (1,2]");
    }
    if (kpp_monotone) {
        double prev = fprime0;  // limit of f(s)/s at 0
        for (int i = 1; i <= kGridPoints; ++i) {
            const double s = static_cast<double>(i) / kGridPoints;
            const double q = f(s) / s;
            if (q > prev + kEqTol)
                throw invalid_parameter_error(
                    "Reaction: f(s)/s not nonincreasing");
            prev = q;
        }
    }
}

Reaction logistic_reaction() {
    return Reaction{[](double s) { return s * (1.0 - s); }, 1.0, "logistic",
                    true};
}

Reaction remark33_reaction() {
    return Reaction{
        [](double s) { return s * (((-6.0 * s + 9.0) * s - 4.0) * s + 1.0); },
        1.0, "remark33", false};
}

Reaction reaction_by_name(const std::string& name) {
    if (name == "logistic") return logistic_reaction();
    if (name == "remark33") return remark33_reaction();
    throw invalid_parameter_error("unknown reaction: " + name);
}

double c_kpp(const Reaction& r, double d) {
    if (!(d > 0) || !(r.fprime0 > 0))
        throw invalid_parameter_error("c_kpp: d and f'(0) must be positive");
    return 2.0 * std::sqrt(d * r.fprime0);
}

double persistence_margin(const Params& p, const Reaction& r) {
    p.validate();
    if (!(r.fprime0 > 0))
        throw invalid_parameter_error("persistence_margin: f'(0) must be positive");
    const double k = M_PI / (2.0 * p.L);
    return r.fprime0 / p.d - k * k;
}

}  // namespace roadfield
