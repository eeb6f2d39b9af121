#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace roadfield::num {

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature on [a,b] built on a 15-point Gauss-Kronrod rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-11, double abs_tol = 1e-15);

/// Fixed 16-point Gauss-Legendre rule; exact for polynomials of degree <= 31.
template <class F>
double gauss_legendre_16(F&& f, double a, double b) {
    static constexpr double xs[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static constexpr double ws[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i]));
    return half * sum;
}

/// Root of a continuous sign-changing function by bisection.
/// Requires f(a) and f(b) of opposite (non-strict) sign.
template <class F>
double bisect_root(F&& f, double a, double b, double rel_tol = 1e-13,
                   int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw numerical_error("bisect_root: no sign change on bracket");
    for (int i = 0; i < max_iter; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (b - a <= rel_tol * (std::abs(a) + std::abs(b))) break;
    }
    return 0.5 * (a + b);
}

/// Threshold of a monotone boolean predicate: largest x with pred(x)==false.
/// Requires pred(a)==false, pred(b)==true.
template <class P>
double bisect_predicate(P&& pred, double a, double b, int steps = 60) {
    for (int i = 0; i < steps; ++i) {
        const double m = 0.5 * (a + b);
        if (pred(m))
            b = m;
        else
            a = m;
    }
    return 0.5 * (a + b);
}

}  // namespace roadfield::num
