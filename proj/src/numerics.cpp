#include "roadfield/numerics.hpp"

#include <cmath>

namespace roadfield::num {

namespace {

// Kronrod-15 abscissae (positive half) and weights; the even-indexed nodes
// carry the embedded Gauss-7 rule.
constexpr double kx[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kw[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double gw[4] = {0.129484966168870, 0.279705391489277,
                          0.381830050505119, 0.417959183673469};

double gk15(const std::function<double(double)>& f, double a, double b,
            double& err) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        double v;
        if (i == 7) {
            v = f(mid);
        } else {
            v = f(mid + half * kx[i]) + f(mid - half * kx[i]);
        }
        resk += kw[i] * v;
        if (i % 2 == 1) resg += gw[i / 2] * v;
    }
    resk *= half;
    resg *= half;
    err = std::abs(resk - resg);
    return resk;
}

// tol is halved per level (error budget proportional to width); floor is a
// machine-precision bound on what the err estimate can resolve at all — once
// err is rounding noise it scales with the width exactly like tol does, and
// without the floor the recursion would never terminate.
double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, double floor, int depth) {
    double err;
    const double whole = gk15(f, a, b, err);
    if (err <= std::max(tol, floor) || depth >= 30) return whole;
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, floor, depth + 1) +
           integrate_rec(f, m, b, 0.5 * tol, floor, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
    double err;
    const double rough = gk15(f, a, b, err);
    const double tol = std::max(abs_tol, rel_tol * std::abs(rough));
    if (err <= tol) return rough;
    const double floor = 1e-15 * (std::abs(rough) + 1.0);
    return integrate_rec(f, a, b, tol, floor, 0);
}

}  // namespace roadfield::num
