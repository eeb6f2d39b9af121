#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "roadfield/model.hpp"

namespace roadfield {

/// The characteristic-curve families in the (beta, alpha) plane. trig curves
/// come from sin(beta y) transverse profiles, hyperbolic ones from
/// sinh(beta y); the remaining families are the limit objects used for the
/// small-D, large-D and half-plane speeds.
enum class CurveFamily {
    trig,
    hyperbolic,
    degenerate_line,    // field curves at c = c_KPP: alpha = +-beta + c/(2d)
    road_limit_D0,      // alpha_0^- of the D->0 problem
    road_limit_Dinf,    // road curve of the half-plane problem (no L)
    rescaled_road,      // D->infinity rescaling: the D=1 road curve
    rescaled_field_minus,  // parabola (f'(0) - d beta^2)/c
    rescaled_field_plus    // parabola (f'(0) + d beta^2)/c
};

enum class Branch { plus, minus };

enum class Side { road, field };

std::string to_string(CurveFamily f);

struct CurveQuery {
    CurveFamily family;
    Branch branch;
    double c;
    double beta;
};

/// Admissible alpha range for one side at fixed (c, beta); lo >= 0.
struct AlphaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;
};

/// First positive root of d*beta*cos(beta L) + nu*sin(beta L) = 0, always in
/// (pi/(2L), pi/L): the transverse-mode cutoff for positive road profiles.
double beta_bar(const Params& p);

/// chi(beta) = 4 mu d D beta cos(beta L) / (d beta cos(beta L) + nu sin(beta L)).
/// Even, decreasing on (0, beta_bar), -> -inf at beta_bar. Domain error for
/// beta >= beta_bar.
double chi(const Params& p, double beta);

/// chi_tilde(beta) = 4 mu D / (1 + nu tanh(beta L)/(d beta)); positive for all
/// beta, beta=0 by continuous extension.
double chi_tilde(const Params& p, double beta);

/// Unique solution of c^2 = -chi(beta) in (pi/(2L), beta_bar).
double beta_tilde(const Params& p, double c);

/// eta(beta) = c_KPP^2 - 4 d^2 beta^2.
double eta(const Reaction& r, double d, double beta);

/// Root of c^2 = eta(beta) for c < c_KPP; zero for c >= c_KPP.
double beta_hat(double c, const Reaction& r, double d);

/// Road-side curve value; nullopt when (family, branch, c, beta) leaves the
/// analytic domain.
std::optional<double> alpha_road(const CurveQuery& q, const Params& p);

/// Field-side curve value; nullopt outside the analytic domain.
std::optional<double> alpha_field(const CurveQuery& q, const Params& p,
                                  const Reaction& r);

/// Explicit speed at which all four dispersion curves first meet at beta=0.
/// Requires D > d.
double c_int(const Params& p, const Reaction& r);

/// Road diffusivity 2d + 4 mu d^3 / ((d + nu L) c_KPP^2) at which the trig
/// road curve and the degenerate field line meet at beta=0 for c = c_KPP.
double d_tilde(const Params& p, const Reaction& r);

/// Admissible alpha interval of one side's region at fixed (c, beta).
AlphaInterval region_interval(Side side, CurveFamily family, double c,
                              double beta, const Params& p, const Reaction& r);

/// Second beta-derivative of (alpha_tilde_D^+ - alpha_tilde_d^-) at beta=0,
/// by Richardson-extrapolated central differences; its sign decides whether
/// the hyperbolic curves cross near beta=0. Requires c > c_KPP.
double curvature_gap_at_zero(const Params& p, const Reaction& r, double c);

// ---- complex-mode evaluation (real-domain guards bypassed) ----------------

/// chi continued to complex beta.
std::complex<double> chi_complex(const Params& p, std::complex<double> beta);
/// d chi / d beta at complex beta.
std::complex<double> chi_prime_complex(const Params& p,
                                       std::complex<double> beta);

std::complex<double> alpha_road_complex(Branch b, double c,
                                        std::complex<double> beta,
                                        const Params& p);
std::complex<double> alpha_field_complex(Branch b, double c,
                                         std::complex<double> beta, double d,
                                         double fprime0);
/// d alpha / d beta of the two complex branches above.
std::complex<double> alpha_road_complex_dbeta(Branch b, double c,
                                              std::complex<double> beta,
                                              const Params& p);
std::complex<double> alpha_field_complex_dbeta(Branch b, double c,
                                               std::complex<double> beta,
                                               double d, double fprime0);

}  // namespace roadfield
