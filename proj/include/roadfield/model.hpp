#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace roadfield {

struct invalid_parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested computation is undefined in the current persistence/extinction
/// regime (e.g. a spreading speed when the species dies out).
struct regime_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The five positive constants of the road-strip system: road diffusivity D,
/// field diffusivity d, road-to-field jump rate mu, field-to-road jump rate
/// nu, strip width L.
struct Params {
    double D;
    double d;
    double mu;
    double nu;
    double L;

    Params(double D_, double d_, double mu_, double nu_, double L_)
        : D(D_), d(d_), mu(mu_), nu(nu_), L(L_) {
        validate();
    }

    void validate() const {
        if (!(D > 0 && d > 0 && mu > 0 && nu > 0 && L > 0))
            throw invalid_parameter_error(
                "Params: D, d, mu, nu, L must all be strictly positive");
    }
};

/// Reaction term f with its derivative at 0 supplied exactly (never estimated
/// by differencing; every downstream formula uses fprime0 as given).
struct Reaction {
    std::function<double(double)> f;
    double fprime0;
    std::string name;
    bool kpp_monotone;  // s -> f(s)/s nonincreasing on (0,1]

    /// Checks f(0)=0=f(1), 0<f(s)<fprime0*s on (0,1), f<0 on (1,2], and the
    /// monotone-quotient property when flagged, on a fixed 1000-point grid.
    void check() const;
};

Reaction logistic_reaction();
/// The quartic f(s) = s(-6s^3+9s^2-4s+1): satisfies the KPP bounds but the
/// quotient f(s)/s is not monotone, so the steady problem can have several
/// solutions.
Reaction remark33_reaction();
Reaction reaction_by_name(const std::string& name);

/// Classical invasion speed 2*sqrt(d*f'(0)) of the free-space KPP equation.
double c_kpp(const Reaction& r, double d);

/// f'(0)/d - (pi/(2L))^2: positive in the persistence regime, nonpositive in
/// the extinction regime.
double persistence_margin(const Params& p, const Reaction& r);

}  // namespace roadfield
