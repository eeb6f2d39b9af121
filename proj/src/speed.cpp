#include "roadfield/speed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Width of the overlap of the road and field admissible intervals at (c,beta),
// negative when they are disjoint, -inf when either region is empty.
double overlap_score(CurveFamily family, double c, double beta,
                     const Params& p, const Reaction& r, double* mid) {
    const AlphaInterval road = region_interval(Side::road, family, c, beta, p, r);
    const AlphaInterval field =
        region_interval(Side::field, family, c, beta, p, r);
    if (road.empty || field.empty) return kNegInf;
    const double lo = std::max(road.lo, field.lo);
    const double hi = std::min(road.hi, field.hi);
    if (mid) *mid = 0.5 * (lo + hi);
    return hi - lo;
}

// Grid scan with local refinement: maximizes the overlap score over
// beta in [blo, bhi].
IntersectionWitness scan_family(CurveFamily family, double c, double blo,
                                double bhi, const Params& p,
                                const Reaction& r) {
    IntersectionWitness w;
    w.family = family;
    w.score = kNegInf;
    if (!(blo < bhi)) return w;
    auto scan = [&](double a, double b, int n) {
        for (int i = 0; i <= n; ++i) {
            const double beta = a + (b - a) * i / n;
            double mid = 0.0;
            const double s = overlap_score(family, c, beta, p, r, &mid);
            if (s > w.score) {
                w.score = s;
                w.beta = beta;
                w.alpha = mid;
            }
        }
    };
    scan(blo, bhi, 512);
    double window = (bhi - blo) / 512.0;
    // refine only around a real candidate; with no admissible point at all
    // w.beta is meaningless and the window arithmetic would run wild
    for (int round = 0; round < 3 && std::isfinite(w.score); ++round) {
        const double a = std::max(blo, w.beta - 2.0 * window);
        const double b = std::min(bhi, w.beta + 2.0 * window);
        if (!(a < b)) break;
        scan(a, b, 64);
        window = (b - a) / 64.0;
    }
    w.intersects = w.score > 0.0;
    return w;
}

double double_until(const std::function<bool(double)>& pred, double start,
                    const char* what) {
    double x = start;
    for (int i = 0; i < 60; ++i) {
        if (pred(x)) return x;
        x *= 2.0;
    }
    throw num::numerical_error(std::string("bracketing failed: ") + what);
}

}  // namespace

IntersectionWitness regions_intersect(const Params& p, const Reaction& r,
                                      double c) {
    if (!(c > 0))
        throw invalid_parameter_error("regions_intersect: c must be positive");
    const double bt = beta_tilde(p, c);
    const double blo = std::max(beta_hat(c, r, p.d) * (1.0 + 1e-12), bt * 1e-9);
    IntersectionWitness best = scan_family(CurveFamily::trig, c, blo, bt, p, r);

    const double ck = c_kpp(r, p.d);
    if (c > ck) {
        const double radius = std::sqrt(c * c - ck * ck) / (2.0 * p.d);
        IntersectionWitness hyp = scan_family(CurveFamily::hyperbolic, c,
                                              radius * 1e-9, radius, p, r);
        if (hyp.score > best.score) best = hyp;
    }
    return best;
}

SpeedResult compute_c_star(const Params& p, const Reaction& r) {
    if (!(persistence_margin(p, r) > 0.0))
        throw regime_error(
            "extinction regime: no propagation speed (persistence margin <= 0)");
    const double ck = c_kpp(r, p.d);

    double c_lo = 1e-6;
    IntersectionWitness w_hi;
    const double c_hi0 = double_until(
        [&](double c) {
            w_hi = regions_intersect(p, r, c);
            return w_hi.intersects;
        },
        ck, "no region intersection at any speed");
    double c_hi = c_hi0;
    if (regions_intersect(p, r, c_lo).intersects)
        throw num::numerical_error(
            "compute_c_star: regions already intersect at c ~ 0");

    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (c_lo + c_hi);
        const IntersectionWitness w = regions_intersect(p, r, m);
        if (w.intersects) {
            c_hi = m;
            w_hi = w;
        } else {
            c_lo = m;
        }
    }

    SpeedResult out;
    out.c_star = 0.5 * (c_lo + c_hi);
    out.bracket_width = c_hi - c_lo;
    out.beta_star = w_hi.beta;
    out.alpha_star = w_hi.alpha;

    const bool degenerate = w_hi.family == CurveFamily::hyperbolic &&
                            w_hi.beta < 1e-2 * M_PI / (2.0 * p.L);
    out.family = degenerate ? "degenerate" : to_string(w_hi.family);

    if (std::abs(p.D - p.d) <= 1e-12 * p.d) {
        out.regime = "Fig4A: D=d";
    } else if (p.D < p.d) {
        out.regime = "Fig4B: D<d";
    } else if (degenerate) {
        out.regime = "Fig5C: c_Int";
    } else {
        const double dk = compute_d_kpp(p, r);
        out.regime = p.D < dk ? "Fig4D: d<D<D_KPP" : "Fig5A/B";
    }
    return out;
}

double compute_d_kpp(const Params& p, const Reaction& r) {
    p.validate();
    const double ck = c_kpp(r, p.d);
    // D_KPP is where the regions stop intersecting at c = c_KPP: for
    // D < D_KPP the road curve still pokes above the degenerate field line
    // (c* < c_KPP there), for larger D the road curve has dropped below it.
    auto pred = [&](double D) {
        Params q = p;
        q.D = D;
        return !regions_intersect(q, r, ck).intersects;
    };
    const double lo = 2.0 * p.d * (1.0 + 1e-9);
    const double hi = double_until(pred, 4.0 * p.d, "D_KPP upper bound");
    return num::bisect_predicate(pred, lo, hi);
}

double compute_ell0(const Params& p, const Reaction& r) {
    if (!(persistence_margin(p, r) > 0.0))
        throw regime_error("extinction regime: no small-D limit speed");
    const double bb = beta_bar(p);
    // Crossing predicate: the ascending field branch pokes above the D->0
    // road limit curve somewhere on (pi/(2L), beta_bar).
    auto pred = [&](double c) {
        const double blo = std::max(beta_hat(c, r, p.d) * (1.0 + 1e-12),
                                    M_PI / (2.0 * p.L) * (1.0 + 1e-9));
        const double bhi = bb * (1.0 - 1e-9);
        if (!(blo < bhi)) return false;
        const int n = 2048;
        for (int i = 0; i <= n; ++i) {
            const double beta = blo + (bhi - blo) * i / n;
            const auto road =
                alpha_road({CurveFamily::road_limit_D0, Branch::minus, c, beta},
                           p);
            const auto field =
                alpha_field({CurveFamily::trig, Branch::plus, c, beta}, p, r);
            if (road && field && *field > *road) return true;
        }
        return false;
    };
    const double hi = double_until(pred, c_kpp(r, p.d), "ell_0 upper bound");
    return num::bisect_predicate(pred, 1e-6, hi);
}

double compute_ell_infinity(const Params& p, const Reaction& r) {
    p.validate();
    Params p1 = p;
    p1.D = 1.0;  // the rescaled road curves are the D=1 curves

    // Trig subsystem: the parabola (f'(0) - d beta^2)/c must enter the D=1
    // trig road region.
    auto pred_trig = [&](double c) {
        const double bmax = std::min(beta_tilde(p1, c),
                                     std::sqrt(r.fprime0 / p.d) * (1.0 - 1e-12));
        const int n = 2048;
        for (int i = 1; i <= n; ++i) {
            const double beta = bmax * i / n;
            const double par = (r.fprime0 - p.d * beta * beta) / c;
            const AlphaInterval iv =
                region_interval(Side::road, CurveFamily::trig, c, beta, p1, r);
            if (!iv.empty && iv.lo < par && par < iv.hi) return true;
        }
        return false;
    };
    // Hyperbolic subsystem: the parabola (f'(0) + d beta^2)/c vs the D=1
    // hyperbolic road region; the scan range is where the parabola can still
    // be below the bounded road curve.
    auto pred_hyp = [&](double c) {
        const double cap = c * (c + std::sqrt(c * c + 4.0 * p.mu)) / 2.0;
        const double bmax2 = (cap - r.fprime0) / p.d;
        if (!(bmax2 > 0.0)) return false;
        const double bmax = std::sqrt(bmax2);
        const int n = 2048;
        for (int i = 1; i <= n; ++i) {
            const double beta = bmax * i / n;
            const double par = (r.fprime0 + p.d * beta * beta) / c;
            const AlphaInterval iv = region_interval(
                Side::road, CurveFamily::hyperbolic, c, beta, p1, r);
            if (!iv.empty && iv.lo < par && par < iv.hi) return true;
        }
        return false;
    };

    const double start = c_kpp(r, p.d);
    const double hi_t = double_until(pred_trig, start, "ell_inf trig bound");
    const double c_trig = num::bisect_predicate(pred_trig, 1e-6, hi_t);
    const double hi_h = double_until(pred_hyp, start, "ell_inf hyp bound");
    const double c_hyp = num::bisect_predicate(pred_hyp, 1e-6, hi_h);
    return std::min(c_trig, c_hyp);
}

double compute_c_star_halfplane(const Params& p, const Reaction& r) {
    p.validate();
    const double ck = c_kpp(r, p.d);
    if (p.D <= 2.0 * p.d) return ck;
    auto pred = [&](double c) {
        const double radius = std::sqrt(c * c - ck * ck) / (2.0 * p.d);
        const int n = 2048;
        for (int i = 1; i <= n; ++i) {
            const double beta = radius * i / n;
            const auto rhi = alpha_road(
                {CurveFamily::road_limit_Dinf, Branch::plus, c, beta}, p);
            const auto rlo = alpha_road(
                {CurveFamily::road_limit_Dinf, Branch::minus, c, beta}, p);
            const auto fhi =
                alpha_field({CurveFamily::hyperbolic, Branch::plus, c, beta},
                            p, r);
            const auto flo =
                alpha_field({CurveFamily::hyperbolic, Branch::minus, c, beta},
                            p, r);
            if (!rhi || !fhi) continue;
            const double lo = std::max({0.0, rlo.value_or(0.0), flo.value_or(0.0)});
            const double hi = std::min(*rhi, *fhi);
            if (hi - lo > 0.0) return true;
        }
        return false;
    };
    const double hi = double_until(pred, 2.0 * ck, "half-plane upper bound");
    return num::bisect_predicate(pred, ck * (1.0 + 1e-12), hi);
}

std::optional<double> c_kpp_dr(const Params& p, const Reaction& r) {
    const double bb = beta_bar(p);
    const double arg = r.fprime0 - p.d * bb * bb;
    if (!(arg > 0.0)) return std::nullopt;  // no-road strip cannot spread
    return 2.0 * std::sqrt(p.d * arg);
}

namespace {

using C = std::complex<double>;

struct BranchPair {
    Branch field;
    Branch road;
};

// The two branches that actually touch at the tangency point.
BranchPair touching_branches(const Params& p, const Reaction& r, double c_star,
                             double beta_star) {
    BranchPair best{Branch::plus, Branch::plus};
    double best_gap = std::numeric_limits<double>::infinity();
    for (Branch fb : {Branch::plus, Branch::minus}) {
        for (Branch rb : {Branch::plus, Branch::minus}) {
            const auto f = alpha_field({CurveFamily::trig, fb, c_star,
                                        beta_star}, p, r);
            const auto a = alpha_road({CurveFamily::trig, rb, c_star,
                                       beta_star}, p);
            if (!f || !a) continue;
            const double gap = std::abs(*f - *a);
            if (gap < best_gap) {
                best_gap = gap;
                best = {fb, rb};
            }
        }
    }
    return best;
}

}  // namespace

ComplexRoot find_complex_root(const Params& p, const Reaction& r, double c) {
    if (!(c > 0))
        throw invalid_parameter_error("find_complex_root: c must be positive");
    const SpeedResult sr = compute_c_star(p, r);
    if (sr.family != "trig" || !(sr.beta_star > 0))
        throw num::numerical_error(
            "find_complex_root: continuation requires a trig-family tangency "
            "with beta_star > 0");
    const BranchPair pair = touching_branches(p, r, sr.c_star, sr.beta_star);

    auto g = [&](C beta) {
        return alpha_field_complex(pair.field, c, beta, p.d, r.fprime0) -
               alpha_road_complex(pair.road, c, beta, p);
    };
    auto gprime = [&](C beta) {
        return alpha_field_complex_dbeta(pair.field, c, beta, p.d, r.fprime0) -
               alpha_road_complex_dbeta(pair.road, c, beta, p);
    };

    C beta(sr.beta_star, 0.01 * sr.beta_star);
    C gv = g(beta);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(gv) < 1e-12) {
            converged = true;
            break;
        }
        const C gp = gprime(beta);
        if (std::abs(gp) == 0.0)
            throw num::numerical_error("find_complex_root: vanishing derivative");
        C step = gv / gp;
        C next = beta - step;
        C gn = g(next);
        for (int k = 0; k < 30 && std::abs(gn) > std::abs(gv); ++k) {
            step *= 0.5;
            next = beta - step;
            gn = g(next);
        }
        beta = next;
        gv = gn;
    }
    if (!converged && std::abs(gv) >= 1e-10)
        throw num::numerical_error("find_complex_root: Newton did not converge");

    if (beta.imag() < 0.0) beta = std::conj(beta);  // pick the upper root
    const C alpha = alpha_field_complex(pair.field, c, beta, p.d, r.fprime0);
    ComplexRoot out;
    out.c = c;
    out.beta_re = beta.real();
    out.beta_im = beta.imag();
    out.alpha_re = alpha.real();
    out.alpha_im = alpha.imag();
    out.residual = std::abs(g(beta));
    return out;
}

std::pair<double, double> SubsolutionCoeffs::eval(double x, double y) const {
    const C e = std::exp(alpha * x);
    const double U = std::max(0.0, e.real());
    const double V = std::max(0.0, (e * gamma * std::sin(beta * y)).real());
    return {U, V};
}

SubsolutionCoeffs subsolution_coefficients(const Params& p,
                                           const ComplexRoot& root) {
    const C beta(root.beta_re, root.beta_im);
    const C bl = beta * p.L;
    const C theta = p.d * beta * std::cos(bl) + p.nu * std::sin(bl);
    const double mod2 = std::norm(theta);
    if (!(mod2 > 0.0))
        throw num::numerical_error("subsolution_coefficients: theta = 0");
    SubsolutionCoeffs out;
    out.beta = beta;
    out.alpha = C(root.alpha_re, root.alpha_im);
    out.gamma = p.mu / theta;
    out.theta1 = theta.real();
    out.theta2 = theta.imag();
    out.gamma1 = out.gamma.real();
    out.gamma2 = out.gamma.imag();
    return out;
}

}  // namespace roadfield
