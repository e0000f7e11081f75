#include <doctest.h>

#include "hyperwave/kernels.hpp"
#include "hyperwave/serial_reference.hpp"
#include "hyperwave/verify.hpp"
#include "test_helpers.hpp"

using namespace hyperwave;
using namespace hwtest;

namespace {

constexpr double kPi = 3.141592653589793;

std::vector<double> fill_scalar_1d(const Grid& g, double (*f)(double)) {
    std::vector<double> u(g.num_points());
    for (std::size_t p = 0; p < g.num_points(); ++p)
        u[p] = f(g.coord(p)[0]);
    return u;
}

}  // namespace

TEST_CASE("jacobian: zero field, analytic 1d derivative, affine exactness") {
    Grid g{1, 32, 2, 1.0};
    std::vector<double> zero(g.num_points(), 0.0), jac(g.num_points());
    kernels::jacobian_dirichlet(g, zero.data(), jac.data());
    CHECK(kernels::max_abs(jac.data(), jac.size()) == 0.0);

    // u = x (1 - x): derivative 1 - 2x; boundary ghosts are exact because u
    // vanishes there, and the central difference of a parabola is exact
    for (int n : {16, 32, 64}) {
        Grid gn{1, n, 2, 1.0};
        auto u = fill_scalar_1d(gn, [](double x) { return x * (1.0 - x); });
        std::vector<double> j(gn.num_points());
        kernels::jacobian_dirichlet(gn, u.data(), j.data());
        double err = 0.0;
        for (std::size_t p = 0; p < gn.num_points(); ++p)
            err = std::max(err,
                           std::abs(j[p] - (1.0 - 2.0 * gn.coord(p)[0])));
        CHECK(err <= 1e-12);
    }

    // sin profile: measure the convergence order
    std::vector<double> hs, errs;
    for (int n : {16, 32, 64}) {
        Grid gn{1, n, 2, 1.0};
        auto u = fill_scalar_1d(gn, [](double x) { return std::sin(kPi * x); });
        std::vector<double> j(gn.num_points());
        kernels::jacobian_dirichlet(gn, u.data(), j.data());
        double err = 0.0;
        for (std::size_t p = 0; p < gn.num_points(); ++p)
            err = std::max(
                err, std::abs(j[p] - kPi * std::cos(kPi * gn.coord(p)[0])));
        hs.push_back(gn.dx());
        errs.push_back(err);
    }
    CHECK(loglog_slope(hs, errs) >= 1.9);

    // interior stencil reproduces a constant gradient exactly even if the
    // field only approximately satisfies the boundary condition
    Grid gl{1, 16, 2, 1.0};
    auto lin = fill_scalar_1d(gl, [](double x) { return 0.75 * x; });
    std::vector<double> j(gl.num_points());
    kernels::jacobian_dirichlet(gl, lin.data(), j.data());
    for (std::size_t p = 1; p + 1 < gl.num_points(); ++p)
        CHECK(j[p] == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("divergence: constants, analytic 1d case, convergence") {
    Grid g{1, 24, 2, 1.0};
    std::vector<double> P(g.num_points(), 3.25), div(g.num_points());
    kernels::divergence(g, P.data(), div.data());
    for (std::size_t p = 1; p + 1 < g.num_points(); ++p)
        CHECK(div[p] == 0.0);  // strictly interior stencil on a constant

    std::vector<double> hs, errs;
    for (int n : {16, 32, 64}) {
        Grid gn{1, n, 2, 1.0};
        auto Pn = fill_scalar_1d(gn, [](double x) { return std::sin(kPi * x); });
        std::vector<double> dn(gn.num_points());
        kernels::divergence(gn, Pn.data(), dn.data());
        double err = 0.0;
        for (std::size_t p = 0; p < gn.num_points(); ++p)
            err = std::max(
                err, std::abs(dn[p] - kPi * std::cos(kPi * gn.coord(p)[0])));
        hs.push_back(gn.dx());
        errs.push_back(err);
    }
    CHECK(loglog_slope(hs, errs) >= 1.9);
}

TEST_CASE("summation by parts: jacobian and -divergence are exact adjoints") {
    Rng rng(201);
    for (int d : {1, 2}) {
        for (int n : {4, 8, 16}) {
            Grid g{d, n, 2, 1.0};
            std::size_t npts = g.num_points();
            std::vector<double> P(npts * d * d), w(npts * d);
            for (double& v : P) v = 2.0 * rng.uniform() - 1.0;
            for (double& v : w) v = 2.0 * rng.uniform() - 1.0;
            std::vector<double> jw(npts * d * d), divP(npts * d);
            kernels::jacobian_dirichlet(g, w.data(), jw.data());
            kernels::divergence(g, P.data(), divP.data());
            double lhs = kernels::dot(P.data(), jw.data(), P.size());
            double rhs = -kernels::dot(divP.data(), w.data(), w.size());
            double scale =
                std::sqrt(kernels::dot(P.data(), P.data(), P.size())) *
                std::sqrt(kernels::dot(w.data(), w.data(), w.size()));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("inner products: symmetry, positivity, closed-form constant case") {
    Grid g{1, 16, 8, 0.7};
    SpaceTimeField a = SpaceTimeField::zeros(g);
    SpaceTimeField b = SpaceTimeField::zeros(g);
    Rng rng(202);
    for (double& v : b.data) v = rng.uniform();
    CHECK(kernels::inner_product_spacetime(g, a, b) == 0.0);

    for (double& v : a.data) v = 2.0 * rng.uniform() - 1.0;
    CHECK(kernels::inner_product_spacetime(g, a, a) > 0.0);
    CHECK(kernels::inner_product_spacetime(g, a, b) ==
          doctest::Approx(kernels::inner_product_spacetime(g, b, a)));

    // constant fields: integral over (0,1) x (0,T) of a*b = a*b*T, up to the
    // midpoint quadrature's domain coverage n/(n+1)
    double ca = 1.7, cb = -0.4;
    std::fill(a.data.begin(), a.data.end(), ca);
    std::fill(b.data.begin(), b.data.end(), cb);
    double want = ca * cb * g.T * g.n / (g.n + 1.0);
    CHECK(rel_diff(kernels::inner_product_spacetime(g, a, b), want) <= 1e-12);
}

TEST_CASE("time derivative slices and regularity surrogates") {
    Grid g{1, 8, 10, 1.0};
    SpaceTimeField u = SpaceTimeField::zeros(g);
    // u(t, x) = t * s(x): du/dt = s(x) exactly for the centered stencil
    for (int k = 0; k <= g.m; ++k)
        for (std::size_t p = 0; p < g.num_points(); ++p)
            u.at(k, p, 0) = (k * g.dt()) * std::sin(kPi * g.coord(p)[0]);
    std::vector<double> vel(u.step_size());
    time_derivative_slice(g, u, 5, vel.data());
    for (std::size_t p = 0; p < g.num_points(); ++p)
        CHECK(vel[p] ==
              doctest::Approx(std::sin(kPi * g.coord(p)[0])).epsilon(1e-12));

    RegularitySurrogates r = measure_regularity(g, u);
    CHECK(r.m0 > 0.0);
    CHECK(r.m1 > 0.0);
    CHECK(r.m3 > 0.0);
    CHECK(std::isfinite(r.m2));

    SpaceTimeField zero = SpaceTimeField::zeros(g);
    RegularitySurrogates rz = measure_regularity(g, zero);
    CHECK(rz.m0 == 0.0);
    CHECK(rz.m3 == 0.0);
}

TEST_CASE("shape validation") {
    Grid g{1, 8, 4, 1.0};
    SpaceTimeField f = SpaceTimeField::zeros(g);
    Grid other{1, 9, 4, 1.0};
    CHECK_THROWS_AS(f.require_conforms(other), ShapeError);
    CHECK_THROWS_AS((Grid{4, 8, 4, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((Grid{1, 1, 4, 1.0}.validate()), ConfigError);

    MaterialField m = MaterialField::constant(g, 0.0);
    CHECK_THROWS_AS(m.validate(g), ConfigError);
}
