#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "roadfield/steady.hpp"

using namespace roadfield;

TEST_CASE("time map small-amplitude limit and growth") {
    const Reaction lg = logistic_reaction();
    CHECK(time_map(1e-6, lg, 1.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-4));
    // sqrt(d/f'(0)) * pi/2 scaling of the limit
    CHECK(time_map(1e-6, lg, 4.0) == doctest::Approx(M_PI).epsilon(1e-4));
    const double m5 = time_map(0.5, lg, 1.0);
    const double m9 = time_map(0.9, lg, 1.0);
    const double m999 = time_map(0.999, lg, 1.0);
    CHECK(m5 > M_PI / 2.0);
    CHECK(m9 > m5);
    CHECK(m999 > m9);
    CHECK(m999 > 5.0);
    CHECK_THROWS_AS(time_map(0.0, lg, 1.0), std::domain_error);
    CHECK_THROWS_AS(time_map(1.0, lg, 1.0), std::domain_error);
}

TEST_CASE("time map agrees with the Simpson oracle") {
    const Reaction lg = logistic_reaction();
    for (double rho : {0.1, 0.3, 0.5, 0.8, 0.95})
        CHECK(time_map(rho, lg, 1.0) ==
              doctest::Approx(oracle::time_map(rho, lg, 1.0)).epsilon(1e-9));
    const Reaction r33 = remark33_reaction();
    for (double rho : {0.2, 0.5, 0.9})
        CHECK(time_map(rho, r33, 1.0) ==
              doctest::Approx(oracle::time_map(rho, r33, 1.0)).epsilon(1e-9));
}

TEST_CASE("time map monotone for the KPP-monotone reaction") {
    const Reaction lg = logistic_reaction();
    double prev = 0.0;
    for (double rho = 0.02; rho < 1.0; rho += 0.02) {
        const double m = time_map(rho, lg, 1.0);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("time map derivative signs and closed form") {
    const Reaction r33 = remark33_reaction();
    const Reaction lg = logistic_reaction();
    CHECK(time_map_derivative(1e-4, r33, 1.0) > 0.0);
    CHECK(time_map_derivative(0.5, r33, 1.0) < 0.0);
    CHECK(time_map_derivative(0.5, lg, 1.0) > 0.0);
    // closed form vs central differencing of the time map itself
    for (double rho : {0.1, 0.35, 0.5, 0.75, 0.9}) {
        const double h = 1e-5 * std::min(rho, 1.0 - rho);
        const double fd =
            (time_map(rho + h, r33, 1.0) - time_map(rho - h, r33, 1.0)) /
            (2.0 * h);
        CHECK(time_map_derivative(rho, r33, 1.0) ==
              doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("steady-state roots: existence, uniqueness, extinction") {
    const Reaction lg = logistic_reaction();
    const auto roots = solve_steady_states(Params(1, 1, 1, 1, 2), lg);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] > 0.0);
    CHECK(roots[0] < 1.0);
    CHECK(time_map(roots[0], lg, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(solve_steady_states(Params(1, 1, 1, 1, 1.4), lg).empty());
}

TEST_CASE("remark33 time map admits a width with at least 3 steady states") {
    const Reaction r33 = remark33_reaction();
    // M rises, dips, then blows up; any L strictly between the local max and
    // the local min values is crossed at least three times.
    double m_max = 0.0, m_min = 1e300;
    double best_lo = 0.0;
    for (double rho = 0.01; rho < 0.6; rho += 0.005)
        m_max = std::max(m_max, time_map(rho, r33, 1.0));
    for (double rho = 0.3; rho < 0.995; rho += 0.005)
        m_min = std::min(m_min, time_map(rho, r33, 1.0));
    (void)best_lo;
    REQUIRE(m_min < m_max);
    const double L = 0.5 * (m_min + m_max);
    const auto roots = solve_steady_states(Params(1, 1, 1, 1, L), r33);
    CHECK(roots.size() >= 3);
    for (double rho : roots)
        CHECK(time_map(rho, r33, 1.0) == doctest::Approx(L).epsilon(1e-10));
}

TEST_CASE("profile reconstruction matches the collocation oracle") {
    const Params p(1, 1, 1, 1, 2);
    const Reaction lg = logistic_reaction();
    const double rho = solve_steady_states(p, lg).at(0);
    const SteadyProfile prof = reconstruct_profile(rho, p, lg, 1001);
    CHECK(prof.residual < 1e-6);
    CHECK(prof.V.front() == 0.0);
    CHECK(prof.V.back() == doctest::Approx(rho).epsilon(1e-8));
    for (std::size_t i = 1; i < prof.V.size(); ++i) {
        CHECK(prof.V[i] > prof.V[i - 1]);  // strictly increasing
        CHECK(prof.V[i] < 1.0);
    }
    // discrete V'(L) ~ 0
    const double h = prof.y[1] - prof.y[0];
    CHECK(std::abs(prof.V[1000] - prof.V[999]) / h < 5e-3);

    const auto Voracle = oracle::bvp_profile(rho, p, lg, 1000);
    double err = 0.0;
    for (int i = 0; i <= 1000; ++i)
        err = std::max(err, std::abs(prof.V[i] - Voracle[i]));
    CHECK(err < 1e-5);  // oracle is second order: O(h^2) = 4e-6 at h=2e-3
}

TEST_CASE("profile reconstruction converges under grid halving") {
    const Params p(1, 1, 1, 1, 2);
    const Reaction lg = logistic_reaction();
    const double rho = solve_steady_states(p, lg).at(0);
    const SteadyProfile a = reconstruct_profile(rho, p, lg, 501);
    const SteadyProfile b = reconstruct_profile(rho, p, lg, 1001);
    double diff = 0.0;
    for (int i = 0; i <= 500; ++i)
        diff = std::max(diff, std::abs(a.V[i] - b.V[2 * i]));
    CHECK(diff < 1e-9);  // fourth-order marching at h = 4e-3
    // V'(L) defect shrinks at order >= 2 under refinement
    const double h1 = a.y[1] - a.y[0], h2 = b.y[1] - b.y[0];
    const double d1 = std::abs(a.V[500] - a.V[499]) / h1;
    const double d2 = std::abs(b.V[1000] - b.V[999]) / h2;
    CHECK(d2 < 0.6 * d1);
}

TEST_CASE("profile reconstruction rejects inconsistent amplitude") {
    const Params p(1, 1, 1, 1, 2);
    const Reaction lg = logistic_reaction();
    CHECK_THROWS_AS(reconstruct_profile(0.123, p, lg, 101),
                    invalid_parameter_error);
}

TEST_CASE("every returned root reconstructs with a small residual") {
    const Reaction r33 = remark33_reaction();
    double m_max = 0.0, m_min = 1e300;
    for (double rho = 0.01; rho < 0.6; rho += 0.01)
        m_max = std::max(m_max, time_map(rho, r33, 1.0));
    for (double rho = 0.3; rho < 0.99; rho += 0.01)
        m_min = std::min(m_min, time_map(rho, r33, 1.0));
    const double L = 0.5 * (m_min + m_max);
    const Params p(1, 1, 1, 1, L);
    for (double rho : solve_steady_states(p, r33)) {
        const SteadyProfile prof = reconstruct_profile(rho, p, r33, 2001);
        CHECK(prof.residual < 1e-6);
    }
}
