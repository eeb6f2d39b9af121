#pragma once

#include <functional>
#include <string>
#include <vector>

#include "roadfield/model.hpp"

namespace roadfield {

enum class DatumKind { box, persistence_bump };

/// Compactly supported nonnegative initial pair (u0(x), v0(x,y)) with
/// v0(x,0) = 0.
struct InitialDatum {
    DatumKind kind;
    double amplitude;
    double support_halfwidth;  // actual support half-extent in x
    std::function<double(double)> u0;
    std::function<double(double, double)> v0;
};

/// box: u0 = A on |x|<=h, v0 = A*(y/L) there, edges mollified over smooth.
/// persistence_bump: the compact cosine bump eps*cos(w x)*(1, mu sin(beta y)
/// / (d beta cos(beta L) + nu sin(beta L))) with beta just above pi/(2L) and
/// w small enough that the pair is a subsolution; requires a positive
/// persistence margin.
InitialDatum make_initial_datum(DatumKind kind, const Params& p,
                                const Reaction& r, double amplitude,
                                double support_halfwidth, double smooth = 0.0);

struct SimConfig {
    Params p;
    Reaction r;
    double x_halfwidth;  // domain is [-x_halfwidth, x_halfwidth] x [0, L]
    int nx;
    int ny;
    double dt;
    double T;
    DatumKind datum_kind = DatumKind::box;
    double amplitude = 0.5;
    double support_halfwidth = 2.0;
    double front_level = 0.5;  // front threshold as a fraction of the plateau
    double c_guess = 0.0;      // enables the domain-size guard when > 0
    double record_dt = 0.5;

    double dx() const { return 2.0 * x_halfwidth / (nx - 1); }
    double dy() const { return p.L / (ny - 1); }
    /// Enforces the CFL bound dt <= 0.4*min(dx^2,dy^2)/(4*max(D,d)) and,
    /// when c_guess > 0, x_halfwidth >= c_guess*T + 10 diffusion lengths.
    void validate() const;
};

/// Field v is row-major with index iy*nx + ix; iy = ny-1 is the road side
/// y = L. u lives on the same x grid.
struct SimState {
    std::vector<double> u;
    std::vector<double> v;
    double t = 0.0;
};

struct SimResult {
    std::vector<double> times;
    std::vector<double> front_right;  // NaN when no point reaches the level
    std::vector<double> front_left;
    std::vector<double> sup_v;
    double fitted_speed;  // least-squares slope of front_right on [T/2, T]
    std::string outcome;  // "extinction" | "persistence" | "undecided"
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> u_final;
    std::vector<double> v_final;  // row-major iy*nx + ix
};

/// One explicit Euler step of the coupled system (centered differences,
/// second-order ghost row for the exchange condition at y = L, Dirichlet at
/// y = 0, Neumann x walls).
void step(SimState& s, const SimConfig& cfg);

/// Same scheme with the road removed: Robin condition d v_y = -nu v at y = L.
void step_no_road(SimState& s, const SimConfig& cfg);

/// Integrates to T, tracks the front on the trace v(., L, .), fits the speed
/// over the last half of [0, T], and classifies the long-time outcome.
SimResult run(const SimConfig& cfg);
SimResult run_no_road(const SimConfig& cfg);

}  // namespace roadfield
