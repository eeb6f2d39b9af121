#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "roadfield/dispersion.hpp"
#include "roadfield/model.hpp"

namespace roadfield {

/// Outcome of the region-overlap test at one speed c; when intersects is true,
/// (beta, alpha) is an interior point of the overlap and score its width.
struct IntersectionWitness {
    bool intersects = false;
    CurveFamily family = CurveFamily::trig;
    double beta = 0.0;
    double alpha = 0.0;
    double score = 0.0;
};

/// Spreading speed with its first-contact (tangency) point. family is one of
/// "trig", "hyperbolic", "degenerate" (contact at beta ~ 0); regime is a
/// diagnostic label that never affects the value.
struct SpeedResult {
    double c_star;
    double beta_star;
    double alpha_star;
    std::string family;
    std::string regime;
    double bracket_width;
};

/// Complex root of the branch-matching equation g(c, beta) = 0 for c below
/// the spreading speed.
struct ComplexRoot {
    double c;
    double beta_re;
    double beta_im;
    double alpha_re;
    double alpha_im;
    double residual;
};

/// Coefficients of the truncated-exponential subsolution built on a complex
/// root: gamma = mu / theta with theta = d*beta*cos(beta L) + nu*sin(beta L).
struct SubsolutionCoeffs {
    double gamma1, gamma2;  // Re, Im of mu/theta
    double theta1, theta2;  // Re, Im of theta
    std::complex<double> alpha;
    std::complex<double> beta;
    std::complex<double> gamma;

    /// (U(x), V(x,y)) = (max(Re e^{alpha x}, 0),
    ///                   max(Re[e^{alpha x} gamma sin(beta y)], 0)).
    std::pair<double, double> eval(double x, double y) const;
};

/// True iff the road and field admissible alpha-intervals overlap on an
/// interior point for some beta > 0; checks the trig family always and the
/// hyperbolic family when c > c_KPP. Monotone in c.
IntersectionWitness regions_intersect(const Params& p, const Reaction& r,
                                      double c);

/// Smallest c at which the regions intersect, by bisection (60 steps) with
/// c_hi found by doubling from c_KPP. Throws regime_error in the extinction
/// regime (nonpositive persistence margin).
SpeedResult compute_c_star(const Params& p, const Reaction& r);

/// Road diffusivity at which, for c = c_KPP, the trig road curve is tangent
/// to the descending degenerate field line -beta + c_KPP/(2d). Always > 2d.
double compute_d_kpp(const Params& p, const Reaction& r);

/// Limit speed of c*(D) as D -> 0: smallest c at which the ascending field
/// branch touches the D->0 road limit curve on (pi/(2L), beta_bar).
double compute_ell0(const Params& p, const Reaction& r);

/// Limit of c*(D)/sqrt(D) as D -> infinity: smallest rescaled speed at which
/// the D=1 road curve touches either rescaled field parabola; the smaller of
/// the trig and hyperbolic subsystem tangencies.
double compute_ell_infinity(const Params& p, const Reaction& r);

/// Spreading speed of the half-plane problem (no strip width): c_KPP exactly
/// for D <= 2d, otherwise the tangency speed between the L-free road curve
/// and the lower field circle branch.
double compute_c_star_halfplane(const Params& p, const Reaction& r);

/// 2*sqrt(d*(f'(0) - d*beta_bar^2)) when f'(0)/d > beta_bar^2 (the no-road
/// strip spreads); nullopt otherwise.
std::optional<double> c_kpp_dr(const Params& p, const Reaction& r);

/// Complex Newton continuation of the tangency: for c at or below the
/// spreading speed, finds the (upper half-plane) complex beta where the two
/// touching curve branches agree. Requires a trig-family tangency with
/// beta_star > 0.
ComplexRoot find_complex_root(const Params& p, const Reaction& r, double c);

SubsolutionCoeffs subsolution_coefficients(const Params& p,
                                           const ComplexRoot& root);

}  // namespace roadfield
