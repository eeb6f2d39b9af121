#pragma once

#include <vector>

#include "roadfield/model.hpp"

namespace roadfield {

/// x-independent steady state of the strip: V solves -d V'' = f(V) on (0,L)
/// with V(0)=0, V'(L)=0 and rho = V(L) is its maximum.
struct SteadyProfile {
    double rho;
    std::vector<double> y;
    std::vector<double> V;
    double residual;  // max |d V'' + f(V)| over interior nodes (central diffs)
};

/// Time map M(rho): the interval length over which the steady ODE solution
/// rises from 0 to its maximum rho. Diverges as rho -> 1.
double time_map(double rho, const Reaction& r, double d);

/// dM/drho. Uses the closed-form integrand for the remark33 reaction and
/// central differences otherwise.
double time_map_derivative(double rho, const Reaction& r, double d);

/// All roots of M(rho) = L found by a sign-change scan (2048 points,
/// geometric clustering near rho=1) refined by bisection. Empty in the
/// extinction regime.
std::vector<double> solve_steady_states(const Params& p, const Reaction& r);

/// Rebuilds V(y) for a root rho of M(rho)=L by integrating the first-integral
/// form of the ODE with a fixed-step RK4 scheme. Throws if |M(rho)-L| > 1e-6.
SteadyProfile reconstruct_profile(double rho, const Params& p,
                                  const Reaction& r, int n_nodes = 1001);

}  // namespace roadfield
