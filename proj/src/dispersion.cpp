#include "roadfield/dispersion.hpp"

#include <cmath>

#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

// Denominator of chi / the gamma coefficient.
double road_denominator(const Params& p, double beta) {
    return p.d * beta * std::cos(beta * p.L) + p.nu * std::sin(beta * p.L);
}

// Stable minus-branch of a quadratic D a^2 - c a - q/4 = 0:
// (c - sqrt(c^2 + q)) / (2D) without cancellation for small q.
double minus_branch(double c, double q, double D) {
    const double s = std::sqrt(c * c + q);
    return -q / (2.0 * D * (c + s));
}

}  // namespace

std::string to_string(CurveFamily f) {
    switch (f) {
        case CurveFamily::trig: return "trig";
        case CurveFamily::hyperbolic: return "hyperbolic";
        case CurveFamily::degenerate_line: return "degenerate-line";
        case CurveFamily::road_limit_D0: return "road-limit-D0";
        case CurveFamily::road_limit_Dinf: return "road-limit-Dinf";
        case CurveFamily::rescaled_road: return "rescaled-road";
        case CurveFamily::rescaled_field_minus: return "rescaled-field-minus";
        case CurveFamily::rescaled_field_plus: return "rescaled-field-plus";
    }
    return "?";
}

double beta_bar(const Params& p) {
    p.validate();
    // Memoized per thread: chi() consults beta_bar on every call.
    thread_local double cd = -1, cnu = -1, cL = -1, cval = 0;
    if (p.d == cd && p.nu == cnu && p.L == cL) return cval;
    const double lo = M_PI / (2.0 * p.L), hi = M_PI / p.L;
    // value is nu > 0 at lo and -d*pi/L < 0 at hi
    const double root = num::bisect_root(
        [&](double b) { return road_denominator(p, b); }, lo, hi, 1e-14);
    cd = p.d;
    cnu = p.nu;
    cL = p.L;
    cval = root;
    return root;
}

double chi(const Params& p, double beta) {
    if (beta < 0.0) beta = -beta;  // chi is even
    if (beta == 0.0) return 4.0 * p.mu * p.D * p.d / (p.d + p.nu * p.L);
    if (beta >= beta_bar(p))
        throw std::domain_error("chi: beta must lie below beta_bar");
    return 4.0 * p.mu * p.d * p.D * beta * std::cos(beta * p.L) /
           road_denominator(p, beta);
}

double chi_tilde(const Params& p, double beta) {
    if (beta < 0.0) beta = -beta;
    if (beta == 0.0) return 4.0 * p.mu * p.D * p.d / (p.d + p.nu * p.L);
    return 4.0 * p.mu * p.D /
           (1.0 + p.nu * std::tanh(beta * p.L) / (p.d * beta));
}

double beta_tilde(const Params& p, double c) {
    if (!(c > 0)) throw invalid_parameter_error("beta_tilde: c must be positive");
    const double bb = beta_bar(p);
    const double lo = M_PI / (2.0 * p.L);
    const double hi = bb * (1.0 - 1e-9);  // chi pole guard
    auto g = [&](double b) { return c * c + chi(p, b); };
    if (g(hi) > 0.0) return hi;  // c so large the root is within the pole guard
    return num::bisect_root(g, lo, hi, 1e-14);
}

double eta(const Reaction& r, double d, double beta) {
    const double ck = c_kpp(r, d);
    return ck * ck - 4.0 * d * d * beta * beta;
}

double beta_hat(double c, const Reaction& r, double d) {
    if (!(c > 0)) throw invalid_parameter_error("beta_hat: c must be positive");
    const double ck = c_kpp(r, d);
    if (c >= ck) return 0.0;
    return std::sqrt(ck * ck - c * c) / (2.0 * d);
}

std::optional<double> alpha_road(const CurveQuery& q, const Params& p) {
    const double c = q.c, beta = std::abs(q.beta);
    switch (q.family) {
        case CurveFamily::trig: {
            if (beta >= beta_bar(p)) return std::nullopt;
            const double x = chi(p, beta);
            if (c * c + x < 0.0) return std::nullopt;  // beta > beta_tilde(c)
            return q.branch == Branch::plus
                       ? (c + std::sqrt(c * c + x)) / (2.0 * p.D)
                       : minus_branch(c, x, p.D);
        }
        case CurveFamily::hyperbolic: {
            const double x = chi_tilde(p, beta);
            return q.branch == Branch::plus
                       ? (c + std::sqrt(c * c + x)) / (2.0 * p.D)
                       : minus_branch(c, x, p.D);
        }
        case CurveFamily::road_limit_D0: {
            if (q.branch != Branch::minus) return std::nullopt;
            if (beta < M_PI / (2.0 * p.L) || beta >= beta_bar(p))
                return std::nullopt;
            return -p.mu * p.d * beta * std::cos(beta * p.L) /
                   (c * road_denominator(p, beta));
        }
        case CurveFamily::road_limit_Dinf: {
            const double x =
                beta == 0.0 ? 0.0
                            : 4.0 * p.mu * p.D / (1.0 + p.nu / (p.d * beta));
            return q.branch == Branch::plus
                       ? (c + std::sqrt(c * c + x)) / (2.0 * p.D)
                       : minus_branch(c, x, p.D);
        }
        case CurveFamily::rescaled_road: {
            // the D=1 trig curve in the (beta, alpha_hat) plane
            Params p1 = p;
            p1.D = 1.0;
            CurveQuery q1 = q;
            q1.family = CurveFamily::trig;
            return alpha_road(q1, p1);
        }
        default:
            return std::nullopt;
    }
}

std::optional<double> alpha_field(const CurveQuery& q, const Params& p,
                                  const Reaction& r) {
    const double c = q.c, beta = std::abs(q.beta), d = p.d;
    switch (q.family) {
        case CurveFamily::trig:
        case CurveFamily::degenerate_line: {
            const double disc = c * c - eta(r, d, beta);
            if (disc < 0.0) return std::nullopt;  // beta < beta_hat(c)
            return q.branch == Branch::plus
                       ? (c + std::sqrt(disc)) / (2.0 * d)
                       : minus_branch(c, -eta(r, d, beta), d);
        }
        case CurveFamily::hyperbolic: {
            const double ck = c_kpp(r, d);
            const double disc =
                c * c - ck * ck - 4.0 * d * d * beta * beta;
            if (c < ck || disc < 0.0) return std::nullopt;
            return q.branch == Branch::plus
                       ? (c + std::sqrt(disc)) / (2.0 * d)
                       : minus_branch(c, -(ck * ck) - 4.0 * d * d * beta * beta,
                                     d);
        }
        case CurveFamily::rescaled_field_minus:
            return (r.fprime0 - d * beta * beta) / c;
        case CurveFamily::rescaled_field_plus:
            return (r.fprime0 + d * beta * beta) / c;
        default:
            return std::nullopt;
    }
}

double c_int(const Params& p, const Reaction& r) {
    if (!(p.D > p.d)) throw std::domain_error("c_int: requires D > d");
    const double ck2 = 4.0 * p.d * r.fprime0;
    const double a = p.d + p.nu * p.L;
    const double numer = a * p.D * ck2 + 4.0 * p.mu * std::pow(p.d, 3);
    const double denom = 4.0 * p.d * (p.D - p.d) * a *
                         (a * ck2 + 4.0 * p.mu * p.d * p.d);
    return numer / std::sqrt(denom);
}

double d_tilde(const Params& p, const Reaction& r) {
    p.validate();
    const double ck2 = 4.0 * p.d * r.fprime0;
    return 2.0 * p.d +
           4.0 * p.mu * std::pow(p.d, 3) / ((p.d + p.nu * p.L) * ck2);
}

AlphaInterval region_interval(Side side, CurveFamily family, double c,
                              double beta, const Params& p,
                              const Reaction& r) {
    if (family != CurveFamily::trig && family != CurveFamily::hyperbolic)
        throw invalid_parameter_error(
            "region_interval: only trig and hyperbolic families have regions");
    if (beta < 0.0)
        throw invalid_parameter_error("region_interval: beta must be >= 0");
    AlphaInterval out;
    if (side == Side::road) {
        const auto hi =
            alpha_road({family, Branch::plus, c, beta}, p);
        if (!hi) return out;
        const auto lo = alpha_road({family, Branch::minus, c, beta}, p);
        out.lo = std::max(0.0, lo.value_or(0.0));
        out.hi = *hi;
        out.empty = false;
    } else {
        const auto hi = alpha_field({family, Branch::plus, c, beta}, p, r);
        if (!hi) return out;
        const auto lo = alpha_field({family, Branch::minus, c, beta}, p, r);
        out.lo = std::max(0.0, lo.value_or(0.0));
        out.hi = *hi;
        out.empty = false;
    }
    return out;
}

double curvature_gap_at_zero(const Params& p, const Reaction& r, double c) {
    const double ck = c_kpp(r, p.d);
    if (!(c > ck))
        throw std::domain_error("curvature_gap_at_zero: requires c > c_KPP");
    const double radius = std::sqrt(c * c - ck * ck) / (2.0 * p.d);
    auto gap = [&](double beta) {
        const double road =
            *alpha_road({CurveFamily::hyperbolic, Branch::plus, c, beta}, p);
        const double field = *alpha_field(
            {CurveFamily::hyperbolic, Branch::minus, c, beta}, p, r);
        return road - field;
    };
    double h = 1e-4 * std::max(1.0, M_PI / (2.0 * p.L));
    h = std::min(h, 0.25 * radius);  // stay inside the half-disk
    const double g0 = gap(0.0);
    // both curves are even in beta
    auto second_diff = [&](double step) {
        return 2.0 * (gap(step) - g0) / (step * step);
    };
    const double d2h = second_diff(h), d2h2 = second_diff(0.5 * h);
    return (4.0 * d2h2 - d2h) / 3.0;
}

// ---- complex-mode evaluation ----------------------------------------------

std::complex<double> chi_complex(const Params& p, std::complex<double> beta) {
    const auto bl = beta * p.L;
    const auto w = p.d * beta * std::cos(bl) + p.nu * std::sin(bl);
    return 4.0 * p.mu * p.d * p.D * beta * std::cos(bl) / w;
}

std::complex<double> chi_prime_complex(const Params& p,
                                       std::complex<double> beta) {
    const auto bl = beta * p.L;
    const auto cb = std::cos(bl), sb = std::sin(bl);
    const auto N = 4.0 * p.mu * p.d * p.D * beta * cb;
    const auto Np = 4.0 * p.mu * p.d * p.D * (cb - beta * p.L * sb);
    const auto w = p.d * beta * cb + p.nu * sb;
    const auto wp = p.d * cb - p.d * beta * p.L * sb + p.nu * p.L * cb;
    return (Np * w - N * wp) / (w * w);
}

std::complex<double> alpha_road_complex(Branch b, double c,
                                        std::complex<double> beta,
                                        const Params& p) {
    const auto root = std::sqrt(c * c + chi_complex(p, beta));
    return (b == Branch::plus ? c + root : c - root) / (2.0 * p.D);
}

std::complex<double> alpha_field_complex(Branch b, double c,
                                         std::complex<double> beta, double d,
                                         double fprime0) {
    const auto disc = c * c - 4.0 * d * fprime0 + 4.0 * d * d * beta * beta;
    const auto root = std::sqrt(disc);
    return (b == Branch::plus ? c + root : c - root) / (2.0 * d);
}

std::complex<double> alpha_road_complex_dbeta(Branch b, double c,
                                              std::complex<double> beta,
                                              const Params& p) {
    const auto root = std::sqrt(c * c + chi_complex(p, beta));
    const auto sgn = (b == Branch::plus) ? 1.0 : -1.0;
    return sgn * chi_prime_complex(p, beta) / (4.0 * p.D * root);
}

std::complex<double> alpha_field_complex_dbeta(Branch b, double c,
                                               std::complex<double> beta,
                                               double d, double fprime0) {
    const auto disc = c * c - 4.0 * d * fprime0 + 4.0 * d * d * beta * beta;
    const auto root = std::sqrt(disc);
    const auto sgn = (b == Branch::plus) ? 1.0 : -1.0;
    return sgn * 2.0 * d * beta / root;
}

}  // namespace roadfield
