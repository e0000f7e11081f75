#include "hyperwave/sensitivity.hpp"

#include <cstdio>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

void require_cfl(const ProblemSetup& setup) {
    double cfl = cfl_number(setup);
    if (cfl > setup.cfl_safety) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "CFL violation: dt=%.6g gives ratio %.4g > safety %.4g",
                      setup.grid.dt(), cfl, setup.cfl_safety);
        throw SolverError(buf);
    }
}

LinearizedCoefficients build_linearization(const ProblemSetup& setup,
                                           const SpaceTimeField& u) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    CombinedEnergy en = setup.combined();
    LinearizedCoefficients A;
    A.grid = g;
    A.data.resize((g.m + 1) * A.step_stride());
    std::vector<double> jac(g.num_points() * g.d * g.d);
    for (int k = 0; k <= g.m; ++k) {
        kernels::jacobian_dirichlet(g, u.step(k), jac.data());
        kernels::hessian_field(g, en, jac.data(), A.step(k));
    }
    return A;
}

SpaceTimeField build_rhs(const ProblemSetup& setup, const Coeffs& h,
                         const SpaceTimeField& u) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    if (h.size() != setup.alpha.size())
        throw ShapeError("build_rhs: direction size mismatch");
    CombinedEnergy hc = combine(setup.dict, h);
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    std::vector<double> jac(g.num_points() * d2), P(g.num_points() * d2);
    SpaceTimeField rhs = SpaceTimeField::zeros(g);
    for (int k = 0; k <= g.m; ++k) {
        kernels::jacobian_dirichlet(g, u.step(k), jac.data());
        kernels::stress_field(g, hc, jac.data(), P.data());
        kernels::divergence(g, P.data(), rhs.step(k));
    }
    return rhs;
}

SpaceTimeField integrate_frozen(const Grid& g, const MaterialField& mat,
                                const LinearizedCoefficients& A,
                                const SpaceTimeField& rhs,
                                BoundaryClosure closure, bool time_reversed) {
    rhs.require_conforms(g);
    if (!(A.grid == g)) throw ShapeError("integrate_frozen: coefficient grid mismatch");
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    auto jac_op = closure == BoundaryClosure::DirichletGhost
                      ? kernels::jacobian_dirichlet
                      : kernels::jacobian_onesided;
    auto base_index = [&](int k) { return time_reversed ? g.m - k : k; };

    std::vector<double> jac(npts * d2), P(npts * d2), divP(npts * g.d);
    std::vector<double> zeros(npts * g.d, 0.0);
    SpaceTimeField z = SpaceTimeField::zeros(g);

    // startup: z^1 = dt^2/(2 rho) * rhs^0 (J z^0 = 0, so no stress term)
    kernels::leapfrog_start(g, mat, g.dt(), z.step(0), zeros.data(),
                            zeros.data(), rhs.step(base_index(0)), z.step(1));
    const double dt2 = g.dt() * g.dt();
    for (int k = 1; k < g.m; ++k) {
        jac_op(g, z.step(k), jac.data());
        kernels::apply_hessian_field(g, A.step(base_index(k)), jac.data(),
                                     P.data());
        kernels::divergence(g, P.data(), divP.data());
        kernels::leapfrog_update(g, mat, dt2, z.step(k), z.step(k - 1),
                                 divP.data(), rhs.step(base_index(k)),
                                 z.step(k + 1));
        if (!kernels::all_finite(z.step(k + 1), z.step_size()))
            throw SolverError("linear solve became non-finite at step " +
                              std::to_string(k + 1));
    }
    return z;
}

SpaceTimeField solve_frechet(const ProblemSetup& setup, const Coeffs& h,
                             const SpaceTimeField& u,
                             const LinearizedCoefficients& A) {
    require_cfl(setup);
    SpaceTimeField rhs = build_rhs(setup, h, u);
    return integrate_frozen(setup.grid, setup.material, A, rhs,
                            BoundaryClosure::DirichletGhost);
}

SpaceTimeField solve_frechet(const ProblemSetup& setup, const Coeffs& h,
                             const SpaceTimeField& u) {
    LinearizedCoefficients A = build_linearization(setup, u);
    return solve_frechet(setup, h, u, A);
}

double continuity_bound_check(const ProblemSetup& setup,
                              const SpaceTimeField& u,
                              const LinearizedCoefficients& A, int trials,
                              Rng& rng) {
    const int n = setup.dict.size();
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Coeffs h(n);
        double hmax = 0.0;
        for (int k = 0; k < n; ++k) {
            h[k] = 2.0 * rng.uniform() - 1.0;
            hmax = std::max(hmax, std::abs(h[k]));
        }
        if (hmax == 0.0) continue;
        SpaceTimeField v = solve_frechet(setup, h, u, A);
        worst = std::max(worst,
                         std::sqrt(kernels::v_norm_sq(setup.grid, v)) / hmax);
    }
    return worst;
}

CoercivitySample sample_coercivity(const LinearizedCoefficients& A, Rng& rng,
                                   int trials) {
    const Grid& g = A.grid;
    const int d = g.d;
    const std::size_t d2 = static_cast<std::size_t>(d) * d;
    CoercivitySample cs;
    for (int t = 0; t < trials; ++t) {
        int k = static_cast<int>(rng.next_u64() % (g.m + 1));
        std::size_t p = rng.next_u64() % g.num_points();
        Mat h = rng.random_mat(d);
        double hn = h.frob_sq();
        if (hn <= 0.0) continue;
        const double* ap = A.step(k) + p * d2 * d2;
        double num = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int kk = 0; kk < d; ++kk)
                    for (int l = 0; l < d; ++l)
                        num += h(i, j) * ap[(i * d + j) * d2 + kk * d + l] *
                               h(kk, l);
        double ratio = num / hn;
        if (t == 0) {
            cs.min_ratio = cs.max_ratio = ratio;
        } else {
            cs.min_ratio = std::min(cs.min_ratio, ratio);
            cs.max_ratio = std::max(cs.max_ratio, ratio);
        }
    }
    return cs;
}

}  // namespace hyperwave
