#include <doctest.h>

#include "hyperwave/forward.hpp"
#include "hyperwave/kernels.hpp"
#include "hyperwave/serial_reference.hpp"
#include "hyperwave/verify.hpp"
#include "test_helpers.hpp"

using namespace hyperwave;
using namespace hwtest;

namespace {

constexpr double kPi = 3.141592653589793;

// max over steps of the spatial L2 error against u(t,x) = sin(pi x) cos(pi t)
double standing_wave_error(int n, int m) {
    ProblemSetup s = setup_1d(n, m, 1.25, 2.0);  // rho = 2 gives wave speed 1
    set_sine_initial(s);
    ForwardResult fr = solve_forward(s);
    double worst = 0.0;
    for (int k = 0; k <= s.grid.m; ++k) {
        double t = k * s.grid.dt();
        double sq = 0.0;
        for (std::size_t p = 0; p < s.grid.num_points(); ++p) {
            double want = std::sin(kPi * s.grid.coord(p)[0]) * std::cos(kPi * t);
            double diff = fr.u.at(k, p, 0) - want;
            sq += diff * diff;
        }
        worst = std::max(worst, std::sqrt(sq * s.grid.cell_volume()));
    }
    return worst;
}

double energy_drift(int n, int m) {
    ProblemSetup s = setup_1d(n, m, 1.25, 2.0);
    set_sine_initial(s);
    ForwardResult fr = solve_forward(s);
    double emin = fr.report.total[1], emax = emin;
    for (int k = 1; k < s.grid.m; ++k) {
        emin = std::min(emin, fr.report.total[k]);
        emax = std::max(emax, fr.report.total[k]);
    }
    return (emax - emin) / emax;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
    ProblemSetup s = setup_1d(12, 32, 1.0);
    ForwardResult fr = solve_forward(s);
    CHECK(kernels::max_abs(fr.u.data.data(), fr.u.data.size()) == 0.0);
    for (double e : fr.report.total) CHECK(e == 0.0);
}

TEST_CASE("standing wave is reproduced at second order") {
    double e1 = standing_wave_error(8, 32);
    double e2 = standing_wave_error(16, 64);
    double e3 = standing_wave_error(32, 128);
    CHECK(e3 < e2);
    CHECK(e2 < e1);
    std::vector<double> hs{1.0 / 9.0, 1.0 / 17.0, 1.0 / 33.0};
    CHECK(loglog_slope(hs, {e1, e2, e3}) >= 1.9);
}

TEST_CASE("manufactured solution with discrete-consistent forcing") {
    ProblemSetup s = setup_1d(16, 64, 1.0, 1.5);
    const Grid& g = s.grid;
    auto exact = [&](int k, std::size_t p) {
        double t = k * g.dt();
        double x = g.coord(p)[0];
        return t * t * x * (1.0 - x);
    };

    // force defined through the discrete stencil applied to the exact field
    SpaceTimeField ustar = SpaceTimeField::zeros(g);
    for (int k = 0; k <= g.m; ++k)
        for (std::size_t p = 0; p < g.num_points(); ++p)
            ustar.at(k, p, 0) = exact(k, p);
    CombinedEnergy en = s.combined();
    std::vector<double> jac(g.num_points()), P(g.num_points()),
        divP(g.num_points());
    for (int k = 0; k <= g.m; ++k) {
        kernels::jacobian_dirichlet(g, ustar.step(k), jac.data());
        kernels::stress_field(g, en, jac.data(), P.data());
        kernels::divergence(g, P.data(), divP.data());
        for (std::size_t p = 0; p < g.num_points(); ++p) {
            double tprev =
                k == 0 ? exact(1, p)  // t^2 is even: u*(-dt) = u*(+dt)
                       : exact(k - 1, p);
            double tnext = k == g.m ? 0.0 : exact(k + 1, p);
            double second =
                k == g.m
                    ? 0.0  // final-step force is never read by the solver
                    : (tnext - 2.0 * exact(k, p) + tprev) / (g.dt() * g.dt());
            s.force.at(k, p, 0) =
                s.material.rho[p] * second - divP[p];
        }
    }
    // initial velocity chosen so the startup step lands on u*(dt) exactly
    kernels::jacobian_dirichlet(g, ustar.step(0), jac.data());
    kernels::stress_field(g, en, jac.data(), P.data());
    kernels::divergence(g, P.data(), divP.data());
    for (std::size_t p = 0; p < g.num_points(); ++p)
        s.u1[p] = (exact(1, p) - exact(0, p)) / g.dt() -
                  0.5 * g.dt() / s.material.rho[p] *
                      (divP[p] + s.force.at(0, p, 0));

    ForwardResult fr = solve_forward(s);
    double scale = kernels::max_abs(ustar.data.data(), ustar.data.size());
    double err = 0.0;
    for (std::size_t q = 0; q < fr.u.data.size(); ++q)
        err = std::max(err, std::abs(fr.u.data[q] - ustar.data[q]));
    CHECK(err <= 1e-10 * scale);
}

TEST_CASE("residual: solver fixed point, zero field, second implementation") {
    ProblemSetup s = setup_bumps_1d(12, 40, 0.6, {1.0, 1.4, 0.7});
    ForwardResult fr = solve_forward(s);
    SpaceTimeField r = residual(fr.u, s);
    double scale = kernels::max_abs(fr.u.data.data(), fr.u.data.size()) /
                   (s.grid.dt() * s.grid.dt());
    CHECK(kernels::max_abs(r.data.data(), r.data.size()) <= 1e-10 * scale);

    // residual of the zero field is -f at interior steps
    ProblemSetup sf = s;
    Rng rng(401);
    for (double& v : sf.force.data) v = rng.uniform(-1.0, 1.0);
    SpaceTimeField zero = SpaceTimeField::zeros(s.grid);
    SpaceTimeField rz = residual(zero, sf);
    for (int k = 1; k < s.grid.m; ++k)
        for (std::size_t q = 0; q < rz.step_size(); ++q)
            CHECK(rz.step(k)[q] == -sf.force.step(k)[q]);

    // random trajectory: staged kernels against the fused serial stencil
    SpaceTimeField urand = SpaceTimeField::zeros(s.grid);
    for (double& v : urand.data) v = rng.uniform(-0.5, 0.5);
    SpaceTimeField r1 = residual(urand, sf);
    SpaceTimeField r2 = serial::residual_stencil(
        s.grid, sf.material, sf.combined(), sf.force, urand);
    double rscale = kernels::max_abs(r2.data.data(), r2.data.size());
    for (std::size_t q = 0; q < r1.data.size(); ++q)
        CHECK(std::abs(r1.data[q] - r2.data[q]) <= 1e-11 * rscale);
}

TEST_CASE("energy budget: zero field, bounded drift, quadratic decay") {
    ProblemSetup s = setup_1d(16, 64, 1.25, 2.0);
    SpaceTimeField zero = SpaceTimeField::zeros(s.grid);
    for (double e : energy_budget(zero, s)) CHECK(e == 0.0);

    double d1 = energy_drift(16, 64);
    CHECK(d1 <= 1e-2);
    double d2 = energy_drift(32, 128);
    CHECK(loglog_slope({1.0 / 17.0, 1.0 / 33.0}, {d1, d2}) >= 1.9);
}

TEST_CASE("CFL guard and blow-up detection") {
    ProblemSetup coarse = setup_1d(16, 10, 1.25, 2.0);  // dt far above the bound
    CHECK_THROWS_WITH_AS(solve_forward(coarse).u.data.size(),
                         doctest::Contains("CFL"), SolverError);

    // disabling the guard on an unstable step size must trip the finite-state
    // check with a step index
    ProblemSetup unstable = setup_1d(16, 400, 40.0, 2.0);
    unstable.cfl_safety = 50.0;
    set_sine_initial(unstable);
    CHECK_THROWS_WITH_AS(solve_forward(unstable).u.data.size(),
                         doctest::Contains("non-finite at step"), SolverError);
}

TEST_CASE("solution stability under coefficient perturbations stays bounded") {
    ProblemSetup s = setup_bumps_1d(12, 48, 0.6, {1.0, 1.2, 0.9}, 0.95);
    REQUIRE(gap_condition_holds(s.dict, s.alpha));
    std::vector<Coeffs> dirs{s.alpha};
    auto rows = lipschitz_alpha_test(s, dirs, {1e-1, 1e-2, 1e-3});
    double rmin = rows[0].ratio, rmax = rows[0].ratio;
    for (const auto& r : rows) {
        rmin = std::min(rmin, r.ratio);
        rmax = std::max(rmax, r.ratio);
    }
    CHECK(rmin > 0.0);
    CHECK(rmax / rmin <= 2.0);
}
