#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "roadfield/simulate.hpp"
#include "roadfield/speed.hpp"
#include "roadfield/steady.hpp"

using namespace roadfield;

namespace {
const Reaction lg = logistic_reaction();

SimConfig small_config(const Params& p) {
    SimConfig cfg{p, lg, 30.0, 301, 21, 9.5e-4, 16.0};
    cfg.record_dt = 0.5;
    return cfg;
}
}  // namespace

TEST_CASE("config validation") {
    Params p(1, 1, 1, 1, 2);
    SimConfig cfg = small_config(p);
    CHECK_NOTHROW(cfg.validate());
    SimConfig bad = cfg;
    bad.dt = 0.1;  // violates CFL
    CHECK_THROWS_AS(bad.validate(), invalid_parameter_error);
    SimConfig guard = cfg;
    guard.c_guess = 5.0;  // needs 5*16 + margin > 30
    CHECK_THROWS_AS(guard.validate(), invalid_parameter_error);
    guard.c_guess = 1.0;
    guard.x_halfwidth = 40.0;
    CHECK_NOTHROW(guard.validate());
}

TEST_CASE("initial data") {
    Params p(1, 1, 1, 1, 2);
    const InitialDatum box =
        make_initial_datum(DatumKind::box, p, lg, 0.5, 2.0, 0.1);
    CHECK(box.u0(0.0) == 0.5);
    CHECK(box.u0(3.0) == 0.0);
    CHECK(box.v0(0.0, 2.0) == 0.5);
    CHECK(box.v0(0.0, 1.0) == 0.25);
    CHECK(box.v0(5.0, 1.0) == 0.0);
    CHECK(box.v0(0.0, 0.0) == 0.0);

    const InitialDatum bump =
        make_initial_datum(DatumKind::persistence_bump, p, lg, 0.05, 2.0);
    for (double x : {-1.0, 0.0, 1.5}) CHECK(bump.v0(x, 0.0) == 0.0);
    for (double x : {bump.support_halfwidth + 1e-9, 100.0}) {
        CHECK(bump.u0(x) == 0.0);
        CHECK(bump.v0(x, 1.0) == 0.0);
        CHECK(bump.u0(-x) == 0.0);
    }
    CHECK(bump.u0(0.0) == 0.05);
    CHECK(bump.v0(0.0, 1.0) > 0.0);
    // small amplitude stays under the steady state
    const double rho = solve_steady_states(p, lg).at(0);
    double maxv = 0.0;
    for (double y = 0.0; y <= 2.0; y += 0.01)
        maxv = std::max(maxv, bump.v0(0.0, y));
    CHECK(maxv < rho);
    CHECK_THROWS_AS(
        make_initial_datum(DatumKind::persistence_bump, Params(1, 1, 1, 1, 1.4),
                           lg, 0.05, 2.0),
        regime_error);
}

TEST_CASE("step: zero state and translation invariance") {
    Params p(1, 1, 1, 1, 2);
    SimConfig cfg = small_config(p);
    SimState s;
    s.u.assign(cfg.nx, 0.0);
    s.v.assign(static_cast<std::size_t>(cfg.nx) * cfg.ny, 0.0);
    step(s, cfg);
    for (double w : s.u) CHECK(w == 0.0);
    for (double w : s.v) CHECK(w == 0.0);

    // x-independent data stay x-independent
    for (int ix = 0; ix < cfg.nx; ++ix) s.u[ix] = 0.3;
    for (int iy = 0; iy < cfg.ny; ++iy)
        for (int ix = 0; ix < cfg.nx; ++ix)
            s.v[static_cast<std::size_t>(iy) * cfg.nx + ix] =
                0.2 * iy / (cfg.ny - 1);
    for (int k = 0; k < 50; ++k) step(s, cfg);
    for (int iy = 0; iy < cfg.ny; ++iy) {
        const double ref = s.v[static_cast<std::size_t>(iy) * cfg.nx];
        for (int ix = 0; ix < cfg.nx; ++ix)
            CHECK(std::abs(s.v[static_cast<std::size_t>(iy) * cfg.nx + ix] -
                           ref) < 1e-13);
    }
}

TEST_CASE("discrete exchange condition holds at the flat equilibrium") {
    Params p(3, 1, 2, 0.5, 2);
    const Reaction zero{[](double) { return 0.0; }, 1.0, "zero", false};
    SimConfig cfg{p, zero, 10.0, 101, 11, 1e-4, 1.0};
    const double k = 0.7;
    SimState s;
    s.u.assign(cfg.nx, p.nu / p.mu * k);
    s.v.assign(static_cast<std::size_t>(cfg.nx) * cfg.ny, k);
    step(s, cfg);
    // the top row feels no flux: mu*u - nu*v_L = 0 and v is flat in y there
    const std::size_t top = static_cast<std::size_t>(cfg.ny - 1) * cfg.nx;
    for (int ix = 0; ix < cfg.nx; ++ix)
        CHECK(std::abs(s.v[top + ix] - k) < 1e-14);
    for (int ix = 0; ix < cfg.nx; ++ix)
        CHECK(std::abs(s.u[ix] - p.nu / p.mu * k) < 1e-14);
}

TEST_CASE("extinction below the width threshold") {
    Params p(1, 1, 1, 1, 1.4);
    SimConfig cfg{p, lg, 20.0, 201, 15, 9.5e-4, 100.0};
    const SimResult res = run(cfg);
    CHECK(res.outcome == "extinction");
    CHECK(res.sup_v.back() < 1e-4 * res.sup_v.front());
}

TEST_CASE("persistence run: outcome, symmetry, comparison") {
    Params p(1, 1, 1, 1, 2);
    // Convergence to the steady profile behind the front is slow
    // (roughly e^{-0.1 t}), so this run needs a long horizon and a domain
    // wide enough that the front never nears the walls.
    SimConfig cfg{p, lg, 56.0, 561, 21, 9.5e-4, 48.0};
    cfg.record_dt = 0.5;
    const SimResult res = run(cfg);
    CHECK(res.outcome == "persistence");
    // even data keep an even front
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        if (!std::isfinite(res.front_right[i])) continue;
        CHECK(std::abs(res.front_right[i] + res.front_left[i]) <=
              cfg.dx() + 1e-9);
    }
    CHECK(res.fitted_speed > 0.5);
    CHECK(res.fitted_speed < 1.2);
    // a smaller datum stays below pointwise
    SimConfig lo = cfg;
    lo.amplitude = 0.25;
    const SimResult rlo = run(lo);
    for (std::size_t i = 0; i < res.v_final.size(); ++i)
        CHECK(rlo.v_final[i] <= res.v_final[i] + 1e-10);
    // positivity at the end
    for (double w : res.v_final) CHECK(w >= -1e-12);
    for (double w : res.u_final) CHECK(w >= -1e-12);
    // sup bound by the constant supersolution
    const double cap = std::max({1.0, res.sup_v.front(), 0.5 * p.mu / p.nu});
    for (double w : res.sup_v) CHECK(w <= cap + 1e-9);
}

TEST_CASE("fitted speed is grid-converged within 1%") {
    Params p(1, 1, 1, 1, 2);
    SimConfig coarse = small_config(p);
    const double v1 = run(coarse).fitted_speed;
    SimConfig fine = coarse;
    fine.nx = 601;
    fine.ny = 41;
    fine.dt = coarse.dt / 4.0;
    const double v2 = run(fine).fitted_speed;
    CHECK(std::abs(v1 - v2) / v2 < 0.01);
}

TEST_CASE("no-road run: extinction below the critical strip width") {
    // L=2 with Dirichlet-Robin walls cannot sustain the population
    Params p(1, 1, 1, 1, 2);
    SimConfig cfg{p, lg, 20.0, 201, 21, 9.5e-4, 30.0};
    const SimResult res = run_no_road(cfg);
    CHECK(res.outcome == "extinction");
}

TEST_CASE("no-road run: spreads near the Dirichlet-Robin speed for L=4") {
    Params p(1, 1, 1, 1, 4);
    SimConfig cfg{p, lg, 50.0, 501, 41, 9.5e-4, 24.0};
    const SimResult res = run_no_road(cfg);
    CHECK(res.outcome != "extinction");
    const double target = *c_kpp_dr(p, lg);
    // generous band at this short horizon; the acceptance suite runs the
    // long-horizon version
    CHECK(res.fitted_speed > 0.75 * target);
    CHECK(res.fitted_speed < 1.1 * target);
}
