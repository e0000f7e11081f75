#include "hyperwave/forward.hpp"

#include <chrono>
#include <cstdio>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

void ProblemSetup::validate() const {
    grid.validate();
    material.validate(grid);
    validate_positive(alpha);
    if (static_cast<int>(alpha.size()) != dict.size())
        throw ShapeError("setup: alpha size does not match dictionary");
    force.require_conforms(grid);
    if (u0.size() != grid.num_points() * grid.d ||
        u1.size() != grid.num_points() * grid.d)
        throw ShapeError("setup: initial slices do not conform to grid");
    if (!kernels::all_finite(force.data.data(), force.data.size()) ||
        !kernels::all_finite(u0.data(), u0.size()) ||
        !kernels::all_finite(u1.data(), u1.size()))
        throw ConfigError("setup: non-finite data");
    if (!(cfl_safety > 0.0)) throw ConfigError("setup: cfl_safety must be > 0");
}

double cfl_number(const ProblemSetup& setup) {
    HessianBounds hb = hessian_bounds(setup.dict, setup.alpha);
    return setup.grid.dt() * std::sqrt(hb.mu / setup.material.rho_min()) /
           setup.grid.dx();
}

namespace {

void require_cfl(const ProblemSetup& setup) {
    double cfl = cfl_number(setup);
    if (cfl > setup.cfl_safety) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "CFL violation: dt=%.6g gives ratio %.4g > safety %.4g "
                      "(reduce dt below %.6g)",
                      setup.grid.dt(), cfl, setup.cfl_safety,
                      setup.grid.dt() * setup.cfl_safety / cfl);
        throw SolverError(buf);
    }
}

void require_finite_step(const double* slice, std::size_t n, int k) {
    if (!kernels::all_finite(slice, n))
        throw SolverError("solution became non-finite at step " +
                          std::to_string(k));
}

}  // namespace

ForwardResult solve_forward(const ProblemSetup& setup) {
    setup.validate();
    require_cfl(setup);
    auto t_start = std::chrono::steady_clock::now();

    const Grid& g = setup.grid;
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    CombinedEnergy en = setup.combined();

    std::vector<double> jac(npts * d2), P(npts * d2), divP(npts * g.d);
    ForwardResult res;
    res.u = SpaceTimeField::zeros(g);
    std::copy(setup.u0.begin(), setup.u0.end(), res.u.step(0));

    kernels::jacobian_dirichlet(g, res.u.step(0), jac.data());
    kernels::stress_field(g, en, jac.data(), P.data());
    kernels::divergence(g, P.data(), divP.data());
    kernels::leapfrog_start(g, setup.material, g.dt(), res.u.step(0),
                            setup.u1.data(), divP.data(), setup.force.step(0),
                            res.u.step(1));
    require_finite_step(res.u.step(1), res.u.step_size(), 1);

    const double dt2 = g.dt() * g.dt();
    for (int k = 1; k < g.m; ++k) {
        kernels::jacobian_dirichlet(g, res.u.step(k), jac.data());
        kernels::stress_field(g, en, jac.data(), P.data());
        kernels::divergence(g, P.data(), divP.data());
        kernels::leapfrog_update(g, setup.material, dt2, res.u.step(k),
                                 res.u.step(k - 1), divP.data(),
                                 setup.force.step(k), res.u.step(k + 1));
        require_finite_step(res.u.step(k + 1), res.u.step_size(), k + 1);
    }

    res.report.cfl = cfl_number(setup);
    res.report.total = energy_budget(res.u, setup);
    res.report.kinetic.resize(g.m + 1);
    res.report.strain.resize(g.m + 1);
    {
        std::vector<double> vel(res.u.step_size());
        for (int k = 0; k <= g.m; ++k) {
            time_derivative_slice(g, res.u, k, vel.data());
            double kin = 0.0;
            for (std::size_t p = 0; p < npts; ++p) {
                double v2 = 0.0;
                for (int c = 0; c < g.d; ++c) {
                    double v = vel[p * g.d + c];
                    v2 += v * v;
                }
                kin += 0.5 * setup.material.rho[p] * v2;
            }
            res.report.kinetic[k] = kin * g.cell_volume();
            res.report.strain[k] = res.report.total[k] - res.report.kinetic[k];
        }
    }
    res.report.regularity = measure_regularity(g, res.u);
    res.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    return res;
}

SpaceTimeField residual(const SpaceTimeField& u, const ProblemSetup& setup) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    CombinedEnergy en = setup.combined();
    const double inv_dt2 = 1.0 / (g.dt() * g.dt());

    std::vector<double> jac(npts * d2), P(npts * d2), divP(npts * g.d);
    SpaceTimeField r = SpaceTimeField::zeros(g);
    for (int k = 1; k < g.m; ++k) {
        kernels::jacobian_dirichlet(g, u.step(k), jac.data());
        kernels::stress_field(g, en, jac.data(), P.data());
        kernels::divergence(g, P.data(), divP.data());
        const double* fk = setup.force.step(k);
        double* rk = r.step(k);
        for (std::size_t p = 0; p < npts; ++p)
            for (int c = 0; c < g.d; ++c) {
                std::size_t q = p * g.d + c;
                rk[q] = setup.material.rho[p] *
                            (u.at(k + 1, p, c) - 2.0 * u.at(k, p, c) +
                             u.at(k - 1, p, c)) *
                            inv_dt2 -
                        divP[q] - fk[q];
            }
    }
    return r;
}

std::vector<double> energy_budget(const SpaceTimeField& u,
                                  const ProblemSetup& setup) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    CombinedEnergy en = setup.combined();
    const double vol = g.cell_volume();

    std::vector<double> jac(npts * d2), vel(u.step_size());
    std::vector<double> energy(g.m + 1, 0.0);
    for (int k = 0; k <= g.m; ++k) {
        time_derivative_slice(g, u, k, vel.data());
        kernels::jacobian_dirichlet(g, u.step(k), jac.data());
        double kin = 0.0, pot = 0.0;
        for (std::size_t p = 0; p < npts; ++p) {
            double v2 = 0.0;
            for (int c = 0; c < g.d; ++c) {
                double v = vel[p * g.d + c];
                v2 += v * v;
            }
            kin += 0.5 * setup.material.rho[p] * v2;
            Mat y;
            for (int i = 0; i < g.d; ++i)
                for (int j = 0; j < g.d; ++j)
                    y(i, j) = jac[(p * g.d + i) * g.d + j];
            pot += en.energy(g.coord(p), y, g.d);
        }
        energy[k] = (kin + pot) * vol;
    }
    return energy;
}

}  // namespace hyperwave
