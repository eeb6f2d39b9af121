#include "roadfield/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadfield/numerics.hpp"
#include "roadfield/steady.hpp"

namespace roadfield {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
void advance(const SimConfig& cfg, bool has_road, const std::vector<double>& u,
             const std::vector<double>& v, std::vector<double>& un,
             std::vector<double>& vn, const F& f) {
    const int nx = cfg.nx, ny = cfg.ny;
    const double dx2 = cfg.dx() * cfg.dx(), dy2 = cfg.dy() * cfg.dy();
    const double D = cfg.p.D, d = cfg.p.d, mu = cfg.p.mu, nu = cfg.p.nu;
    const double dt = cfg.dt, two_dy_over_d = 2.0 * cfg.dy() / d;

    const double* vL = v.data() + static_cast<std::size_t>(ny - 1) * nx;
    if (has_road) {
        for (int ix = 0; ix < nx; ++ix) {
            const double ul = u[ix > 0 ? ix - 1 : 1];
            const double ur = u[ix < nx - 1 ? ix + 1 : nx - 2];
            const double uxx = (ul - 2.0 * u[ix] + ur) / dx2;
            un[ix] = u[ix] + dt * (D * uxx + nu * vL[ix] - mu * u[ix]);
        }
    }

    for (int ix = 0; ix < nx; ++ix) vn[ix] = 0.0;  // Dirichlet floor y=0

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int iy = 1; iy < ny - 1; ++iy) {
        const double* row = v.data() + static_cast<std::size_t>(iy) * nx;
        const double* below = row - nx;
        const double* above = row + nx;
        double* out = vn.data() + static_cast<std::size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double vl = row[ix > 0 ? ix - 1 : 1];
            const double vr = row[ix < nx - 1 ? ix + 1 : nx - 2];
            const double lap = (vl - 2.0 * row[ix] + vr) / dx2 +
                               (below[ix] - 2.0 * row[ix] + above[ix]) / dy2;
            out[ix] = row[ix] + dt * (d * lap + f(row[ix]));
        }
    }

    // Top row y=L: exchange (or Robin) flux imposed through a ghost row.
    {
        const double* row = vL;
        const double* below = row - nx;
        double* out = vn.data() + static_cast<std::size_t>(ny - 1) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double vl = row[ix > 0 ? ix - 1 : 1];
            const double vr = row[ix < nx - 1 ? ix + 1 : nx - 2];
            const double flux =
                has_road ? mu * u[ix] - nu * row[ix] : -nu * row[ix];
            const double ghost = below[ix] + two_dy_over_d * flux;
            const double lap = (vl - 2.0 * row[ix] + vr) / dx2 +
                               (below[ix] - 2.0 * row[ix] + ghost) / dy2;
            out[ix] = row[ix] + dt * (d * lap + f(row[ix]));
        }
    }
}

void advance_dispatch(const SimConfig& cfg, bool has_road,
                      const std::vector<double>& u,
                      const std::vector<double>& v, std::vector<double>& un,
                      std::vector<double>& vn) {
    // Keep the hot loop free of std::function indirection for the built-ins.
    if (cfg.r.name == "logistic") {
        advance(cfg, has_road, u, v, un, vn,
                [](double s) { return s * (1.0 - s); });
    } else if (cfg.r.name == "remark33") {
        advance(cfg, has_road, u, v, un, vn, [](double s) {
            return s * (((-6.0 * s + 9.0) * s - 4.0) * s + 1.0);
        });
    } else {
        advance(cfg, has_road, u, v, un, vn,
                [&](double s) { return cfg.r.f(s); });
    }
}

// Rightmost x where the trace reaches thr, linearly interpolated; NaN if none.
double front_position_right(const std::vector<double>& trace,
                            const std::vector<double>& x, double thr) {
    const int nx = static_cast<int>(trace.size());
    for (int ix = nx - 1; ix >= 0; --ix) {
        if (trace[ix] >= thr) {
            if (ix == nx - 1) return x[ix];
            const double den = trace[ix] - trace[ix + 1];
            const double frac = den > 0.0 ? (trace[ix] - thr) / den : 0.0;
            return x[ix] + frac * (x[ix + 1] - x[ix]);
        }
    }
    return kNaN;
}

double front_position_left(const std::vector<double>& trace,
                           const std::vector<double>& x, double thr) {
    const int nx = static_cast<int>(trace.size());
    for (int ix = 0; ix < nx; ++ix) {
        if (trace[ix] >= thr) {
            if (ix == 0) return x[ix];
            const double den = trace[ix] - trace[ix - 1];
            const double frac = den > 0.0 ? (trace[ix] - thr) / den : 0.0;
            return x[ix] - frac * (x[ix] - x[ix - 1]);
        }
    }
    return kNaN;
}

SimResult run_impl(const SimConfig& cfg, bool has_road) {
    cfg.validate();
    const int nx = cfg.nx, ny = cfg.ny;
    const double dx = cfg.dx(), dy = cfg.dy();

    SimResult res;
    res.x.resize(nx);
    for (int ix = 0; ix < nx; ++ix) res.x[ix] = -cfg.x_halfwidth + ix * dx;
    res.y.resize(ny);
    for (int iy = 0; iy < ny; ++iy) res.y[iy] = iy * dy;

    const InitialDatum datum =
        make_initial_datum(cfg.datum_kind, cfg.p, cfg.r, cfg.amplitude,
                           cfg.support_halfwidth, dx);
    SimState s;
    s.u.assign(nx, 0.0);
    s.v.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    if (has_road)
        for (int ix = 0; ix < nx; ++ix) s.u[ix] = datum.u0(res.x[ix]);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            s.v[static_cast<std::size_t>(iy) * nx + ix] =
                datum.v0(res.x[ix], res.y[iy]);

    const double sup_v0 = *std::max_element(s.v.begin(), s.v.end());
    std::vector<double> un(s.u.size()), vn(s.v.size());

    const long n_steps = std::lround(cfg.T / cfg.dt);
    const long rec_every =
        std::max<long>(1, std::lround(cfg.record_dt / cfg.dt));

    std::vector<std::vector<double>> road_traces;
    auto record = [&](double t) {
        double sup = 0.0, inf = 0.0;
        for (double w : s.v) {
            sup = std::max(sup, w);
            inf = std::min(inf, w);
        }
        double inf_u = 0.0;
        for (double w : s.u) inf_u = std::min(inf_u, w);
        if (!std::isfinite(sup) || inf < -1e-12 || inf_u < -1e-12)
            throw num::numerical_error(
                "simulation instability: NaN or negativity detected");
        res.times.push_back(t);
        res.sup_v.push_back(sup);
        const double* vL = s.v.data() + static_cast<std::size_t>(ny - 1) * nx;
        road_traces.emplace_back(vL, vL + nx);
    };

    record(0.0);
    for (long k = 1; k <= n_steps; ++k) {
        advance_dispatch(cfg, has_road, s.u, s.v, un, vn);
        s.u.swap(un);
        s.v.swap(vn);
        s.t = k * cfg.dt;
        if (k % rec_every == 0 || k == n_steps) record(s.t);
    }

    // Steady state (if any) supplies the front level for the road-coupled
    // system; the no-road run measures its own plateau instead.
    std::vector<double> roots;
    if (has_road) roots = solve_steady_states(cfg.p, cfg.r);
    const double rho = roots.empty() ? kNaN : roots.back();
    double thr;
    if (has_road && std::isfinite(rho)) {
        thr = cfg.front_level * rho;
    } else {
        double plateau = 0.0;
        const int ix0 = (nx - 1) / 2;
        for (std::size_t i = 0; i < res.times.size(); ++i)
            if (res.times[i] >= 0.5 * cfg.T)
                plateau = std::max(plateau, road_traces[i][ix0]);
        thr = cfg.front_level * std::max(plateau, 1e-3 * sup_v0);
    }

    res.front_right.resize(res.times.size());
    res.front_left.resize(res.times.size());
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        res.front_right[i] = front_position_right(road_traces[i], res.x, thr);
        res.front_left[i] = front_position_left(road_traces[i], res.x, thr);
    }

    const double sup_T = res.sup_v.back();
    const bool extinct = sup_T < 1e-4 * sup_v0;

    // Reflected-wave guard: a propagating front must stay clear of the
    // Neumann walls or the fitted speed is contaminated. A decaying solution
    // has no front, so the guard does not apply.
    const double diff_len =
        std::sqrt(std::max(cfg.p.D, cfg.p.d) / cfg.r.fprime0);
    if (!extinct)
        for (double xr : res.front_right)
            if (std::isfinite(xr) && xr > cfg.x_halfwidth - 10.0 * diff_len)
                throw num::numerical_error(
                    "x-domain too small: front within 10 diffusion lengths of "
                    "the wall");

    // Least-squares slope of the right front over the last half of [0, T].
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        if (res.times[i] < 0.5 * cfg.T || !std::isfinite(res.front_right[i]))
            continue;
        sw += 1.0;
        sx += res.times[i];
        sy += res.front_right[i];
        sxx += res.times[i] * res.times[i];
        sxy += res.times[i] * res.front_right[i];
    }
    res.fitted_speed =
        sw >= 2.0 ? (sw * sxy - sx * sy) / (sw * sxx - sx * sx) : kNaN;

    res.outcome = "undecided";
    if (extinct) {
        res.outcome = "extinction";
    } else if (has_road && std::isfinite(rho)) {
        const SteadyProfile prof = reconstruct_profile(rho, cfg.p, cfg.r, ny);
        const int ix0 = (nx - 1) / 2;
        double verr = 0.0;
        for (int iy = 0; iy < ny; ++iy)
            verr = std::max(
                verr, std::abs(s.v[static_cast<std::size_t>(iy) * nx + ix0] -
                               prof.V[iy]));
        const double u_eq = cfg.p.nu / cfg.p.mu * rho;
        if (verr <= 0.02 * rho && std::abs(s.u[ix0] - u_eq) <= 0.02 * u_eq)
            res.outcome = "persistence";
    } else if (!has_road) {
        const std::size_t half = res.sup_v.size() / 2;
        if (sup_T > 1e-2 &&
            std::abs(sup_T - res.sup_v[half]) < 0.05 * sup_T)
            res.outcome = "persistence";
    }

    res.u_final = s.u;
    res.v_final = s.v;
    return res;
}

}  // namespace

void SimConfig::validate() const {
    p.validate();
    r.check();
    if (nx < 3 || ny < 3)
        throw invalid_parameter_error("SimConfig: nx, ny must be >= 3");
    if (!(x_halfwidth > 0) || !(dt > 0) || !(T > 0) || !(record_dt > 0))
        throw invalid_parameter_error(
            "SimConfig: x_halfwidth, dt, T, record_dt must be positive");
    if (!(front_level > 0 && front_level < 1))
        throw invalid_parameter_error("SimConfig: front_level must be in (0,1)");
    const double hmin2 = std::min(dx() * dx(), dy() * dy());
    const double cfl = 0.4 * hmin2 / (4.0 * std::max(p.D, p.d));
    if (dt > cfl)
        throw invalid_parameter_error("SimConfig: dt violates the CFL bound");
    if (c_guess > 0) {
        const double need =
            c_guess * T + 10.0 * std::sqrt(std::max(p.D, p.d) / r.fprime0);
        if (x_halfwidth < need)
            throw invalid_parameter_error(
                "SimConfig: x_halfwidth too small for c_guess*T plus margin");
    }
}

InitialDatum make_initial_datum(DatumKind kind, const Params& p,
                                const Reaction& r, double amplitude,
                                double support_halfwidth, double smooth) {
    if (!(amplitude > 0) || !(support_halfwidth > 0))
        throw invalid_parameter_error(
            "make_initial_datum: amplitude and support must be positive");
    InitialDatum d;
    d.kind = kind;
    d.amplitude = amplitude;

    if (kind == DatumKind::box) {
        const double h = support_halfwidth, L = p.L;
        const double sm = std::max(smooth, 1e-12);
        auto window = [h, sm](double x) {
            return std::clamp((h - std::abs(x)) / sm, 0.0, 1.0);
        };
        d.support_halfwidth = h;
        d.u0 = [amplitude, window](double x) { return amplitude * window(x); };
        d.v0 = [amplitude, window, L](double x, double y) {
            return amplitude * (y / L) * window(x);
        };
        return d;
    }

    // persistence_bump: pick beta just above pi/(2L) keeping d*beta^2 below
    // f'(0), then the largest omega compatible with the subsolution bounds.
    const double margin = persistence_margin(p, r);
    if (!(margin > 0))
        throw regime_error("persistence_bump requires persistence regime");
    const double bb = [&] {
        const double lo = M_PI / (2.0 * p.L), hi = M_PI / p.L;
        return num::bisect_root(
            [&](double b) {
                return p.d * b * std::cos(b * p.L) + p.nu * std::sin(b * p.L);
            },
            lo, hi, 1e-14);
    }();
    const double k0 = M_PI / (2.0 * p.L);
    const double beta2 =
        k0 * k0 + 0.1 * std::min(r.fprime0 / p.d - k0 * k0, bb * bb - k0 * k0);
    const double beta = std::sqrt(beta2);
    const double delta = 0.5 * (r.fprime0 - p.d * beta2);
    const double theta =
        p.d * beta * std::cos(beta * p.L) + p.nu * std::sin(beta * p.L);
    const double m =
        std::min((r.fprime0 - delta) / p.d - beta2,
                 -p.mu * p.d * beta * std::cos(beta * p.L) / (p.D * theta));
    const double omega = std::min(M_PI / (2.0 * support_halfwidth),
                                  std::sqrt(m));
    const double half = M_PI / (2.0 * omega);
    const double coef = p.mu / theta;
    d.support_halfwidth = half;
    d.u0 = [amplitude, omega, half](double x) {
        return std::abs(x) < half ? amplitude * std::cos(omega * x) : 0.0;
    };
    d.v0 = [amplitude, omega, half, coef, beta](double x, double y) {
        return std::abs(x) < half
                   ? amplitude * std::cos(omega * x) * coef *
                         std::sin(beta * y)
                   : 0.0;
    };
    return d;
}

void step(SimState& s, const SimConfig& cfg) {
    std::vector<double> un(s.u.size()), vn(s.v.size());
    advance_dispatch(cfg, true, s.u, s.v, un, vn);
    s.u.swap(un);
    s.v.swap(vn);
    s.t += cfg.dt;
}

void step_no_road(SimState& s, const SimConfig& cfg) {
    std::vector<double> un(s.u.size()), vn(s.v.size());
    advance_dispatch(cfg, false, s.u, s.v, un, vn);
    s.v.swap(vn);
    s.t += cfg.dt;
}

SimResult run(const SimConfig& cfg) { return run_impl(cfg, true); }

SimResult run_no_road(const SimConfig& cfg) { return run_impl(cfg, false); }

}  // namespace roadfield
