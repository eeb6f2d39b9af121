#include "roadfield/steady.hpp"

#include <algorithm>
#include <cmath>

#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

// Inner integral of the time map over [1-s^2, 1], divided by s^2:
// J(s) = (1/rho) int_0^1 f(rho*(1 - s^2 w)) dw.  Writing it this way avoids
// forming 1-s^2 (catastrophic near s=0) and keeps J bounded away from 0.
double inner_mean(double s, double rho, const Reaction& r) {
    const double s2 = s * s;
    return num::gauss_legendre_16(
        [&](double w) { return r.f(rho * (1.0 - s2 * w)) / rho; }, 0.0, 1.0);
}

// 1 - (1-u)^k expanded in u, exact near u=0 where the direct form cancels.
double one_minus_pow(double u, int k) {
    switch (k) {
        case 2: return u * (2.0 - u);
        case 3: return u * (3.0 + u * (-3.0 + u));
        case 4: return u * (4.0 + u * (-6.0 + u * (4.0 - u)));
        case 5: return u * (5.0 + u * (-10.0 + u * (10.0 + u * (-5.0 + u))));
        default: return 1.0 - std::pow(1.0 - u, k);
    }
}

double time_map_derivative_remark33(double rho, double d) {
    // Closed-form integrand for f(s)=s(-6s^3+9s^2-4s+1), with the
    // substitution xi = 1 - s^2 taming the endpoint.
    auto integrand = [&](double s) {
        const double u = s * s;
        const double p5 = one_minus_pow(u, 5), p4 = one_minus_pow(u, 4),
                     p3 = one_minus_pow(u, 3), p2 = one_minus_pow(u, 2);
        const double numer =
            216.0 * rho * rho * p5 - 270.0 * rho * p4 + 80.0 * p3;
        const double base = -72.0 * rho * rho * rho * p5 +
                            135.0 * rho * rho * p4 - 80.0 * rho * p3 +
                            30.0 * p2;
        if (!(base > 0.0))
            throw num::numerical_error("time_map_derivative: singular integrand");
        return 2.0 * s * numer / (base * std::sqrt(base));
    };
    return std::sqrt(7.5 * d) * num::integrate(integrand, 0.0, 1.0, 1e-11);
}

}  // namespace

double time_map(double rho, const Reaction& r, double d) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("time_map: rho must lie in (0,1)");
    if (!(d > 0.0)) throw invalid_parameter_error("time_map: d must be positive");
    // xi = 1 - s^2 substitution; the Jacobian 2s cancels against the
    // sqrt(inner) ~ s vanishing, leaving the regular integrand 2/sqrt(2J/d).
    auto integrand = [&](double s) {
        const double J = inner_mean(s, rho, r);
        if (!(J > 0.0))
            throw num::numerical_error("time_map: nonpositive inner integral");
        return 2.0 / std::sqrt(2.0 / d * J);
    };
    return num::integrate(integrand, 0.0, 1.0, 1e-11);
}

double time_map_derivative(double rho, const Reaction& r, double d) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("time_map_derivative: rho must lie in (0,1)");
    if (r.name == "remark33") return time_map_derivative_remark33(rho, d);
    const double h = 1e-5 * std::min(rho, 1.0 - rho);
    return (time_map(rho + h, r, d) - time_map(rho - h, r, d)) / (2.0 * h);
}

std::vector<double> solve_steady_states(const Params& p, const Reaction& r) {
    p.validate();
    // 2048-point scan: uniform on [1e-4, 0.9], then geometric clustering of
    // 1-rho down to 1e-6 where M blows up and roots can accumulate.
    std::vector<double> grid;
    grid.reserve(2048);
    constexpr int n_lo = 1024, n_hi = 1024;
    for (int i = 0; i < n_lo; ++i)
        grid.push_back(1e-4 + (0.9 - 1e-4) * i / (n_lo - 1));
    for (int i = 1; i <= n_hi; ++i) {
        const double t = static_cast<double>(i) / n_hi;
        grid.push_back(1.0 - 0.1 * std::pow(1e-5, t));
    }

    std::vector<double> roots;
    auto F = [&](double rho) { return time_map(rho, r, p.d) - p.L; };
    double prev_rho = grid[0], prev_val = F(prev_rho);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double rho = grid[i], val = F(rho);
        if (prev_val == 0.0) {
            roots.push_back(prev_rho);
        } else if ((prev_val < 0.0) != (val < 0.0)) {
            roots.push_back(num::bisect_root(F, prev_rho, rho, 1e-14));
        }
        prev_rho = rho;
        prev_val = val;
    }
    // Collapse near-duplicates from adjacent brackets.
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return b - a < 1e-9; }),
                roots.end());
    return roots;
}

SteadyProfile reconstruct_profile(double rho, const Params& p,
                                  const Reaction& r, int n_nodes) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("reconstruct_profile: rho must lie in (0,1)");
    if (n_nodes < 3)
        throw invalid_parameter_error("reconstruct_profile: need >= 3 nodes");
    if (std::abs(time_map(rho, r, p.d) - p.L) > 1e-6)
        throw invalid_parameter_error(
            "reconstruct_profile: rho is not a root of M(rho)=L");

    // First-integral form d/2 V'^2 = int_V^rho f, written in phi=sqrt(rho-V)
    // where it becomes the regular ODE phi' = -sqrt(I(phi)/(2d)) with
    // I(phi) = int_0^1 f(rho - phi^2 u) du. RK4 then keeps its full order;
    // the raw V-equation is not Lipschitz at the maximum.
    auto slope = [&](double phi) {
        const double phi2 = phi * phi;
        const double I = num::gauss_legendre_16(
            [&](double u) { return r.f(rho - phi2 * u); }, 0.0, 1.0);
        return -std::sqrt(std::max(0.0, I) / (2.0 * p.d));
    };

    SteadyProfile out;
    out.rho = rho;
    out.y.resize(n_nodes);
    out.V.resize(n_nodes);
    const double h = p.L / (n_nodes - 1);
    double phi = std::sqrt(rho);
    for (int i = 0; i < n_nodes; ++i) {
        out.y[i] = i * h;
        out.V[i] = rho - phi * phi;
        const double k1 = slope(phi);
        const double k2 = slope(std::max(0.0, phi + 0.5 * h * k1));
        const double k3 = slope(std::max(0.0, phi + 0.5 * h * k2));
        const double k4 = slope(std::max(0.0, phi + h * k3));
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (phi < 0.0) phi = 0.0;
    }
    out.V[0] = 0.0;

    out.residual = 0.0;
    for (int i = 1; i + 1 < n_nodes; ++i) {
        const double d2 = (out.V[i + 1] - 2.0 * out.V[i] + out.V[i - 1]) / (h * h);
        out.residual = std::max(out.residual,
                                std::abs(p.d * d2 + r.f(out.V[i])));
    }
    return out;
}

}  // namespace roadfield
