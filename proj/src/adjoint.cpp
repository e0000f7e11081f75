#include "hyperwave/adjoint.hpp"

#include "hyperwave/kernels.hpp"

namespace hyperwave {

SpaceTimeField solve_backward(const ProblemSetup& setup,
                              const LinearizedCoefficients& A,
                              const SpaceTimeField& w) {
    require_cfl(setup);
    SpaceTimeField q =
        integrate_frozen(setup.grid, setup.material, A, w,
                         BoundaryClosure::ZeroFluxOneSided, true);
    SpaceTimeField p = SpaceTimeField::zeros(setup.grid);
    for (int k = 0; k <= setup.grid.m; ++k) {
        const double* src = q.step(setup.grid.m - k);
        std::copy(src, src + q.step_size(), p.step(k));
    }
    return p;
}

namespace {

// Divergence of the K-th entry stress along the base trajectory at step k.
void entry_stress_divergence(const Grid& g, const EnergyEntry& entry,
                             const double* jac_u, double* scratch_P,
                             double* out) {
    kernels::entry_stress_field(g, entry, jac_u, scratch_P);
    kernels::divergence(g, scratch_P, out);
}

}  // namespace

Coeffs apply_adjoint_discrete(const ProblemSetup& setup,
                              const SpaceTimeField& u,
                              const LinearizedCoefficients& A,
                              const SpaceTimeField& w) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    w.require_conforms(g);
    require_cfl(setup);
    const int n_entries = setup.dict.size();
    const std::size_t npts = g.num_points();
    const std::size_t sz = u.step_size();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    const double dt = g.dt();
    const double dt2 = dt * dt;
    const double cell = g.cell_volume();

    // The reverse sweep of the leapfrog recurrence. lam_next holds the
    // adjoint state of step k+1, lam_next2 of step k+2; both carry the
    // quadrature weights of the space-time pairing.
    std::vector<double> lam_next(sz), lam_next2(sz, 0.0), lam_cur(sz);
    std::vector<double> scaled(sz), jac(npts * d2), P(npts * d2),
        divP(npts * g.d), jac_u(npts * d2), divS(npts * g.d);
    Coeffs grad(n_entries, 0.0);

    auto step_weight = [&](int k) {
        return (k == 0 || k == g.m) ? 0.5 * dt * cell : dt * cell;
    };
    for (std::size_t q = 0; q < sz; ++q)
        lam_next[q] = step_weight(g.m) * w.step(g.m)[q];

    for (int k = g.m - 1; k >= 1; --k) {
        // forcing transpose: rbar^k = dt^2 / rho * lam^{k+1}, paired with the
        // divergence of each entry stress at step k
        kernels::jacobian_dirichlet(g, u.step(k), jac_u.data());
        for (std::size_t p = 0; p < npts; ++p) {
            double s = dt2 / setup.material.rho[p];
            for (int c = 0; c < g.d; ++c)
                scaled[p * g.d + c] = s * lam_next[p * g.d + c];
        }
        for (int e = 0; e < n_entries; ++e) {
            entry_stress_divergence(g, setup.dict.entries[e], jac_u.data(),
                                    P.data(), divS.data());
            grad[e] += kernels::dot(scaled.data(), divS.data(), sz);
        }

        // state transpose: lam^k = c_k w^k + 2 lam^{k+1} - lam^{k+2}
        //                          + dt^2 div(A^k : J (lam^{k+1}/rho))
        for (std::size_t p = 0; p < npts; ++p) {
            double inv_rho = 1.0 / setup.material.rho[p];
            for (int c = 0; c < g.d; ++c)
                scaled[p * g.d + c] = inv_rho * lam_next[p * g.d + c];
        }
        kernels::jacobian_dirichlet(g, scaled.data(), jac.data());
        kernels::apply_hessian_field(g, A.step(k), jac.data(), P.data());
        kernels::divergence(g, P.data(), divP.data());
        double ck = step_weight(k);
        const double* wk = w.step(k);
        for (std::size_t q = 0; q < sz; ++q)
            lam_cur[q] = ck * wk[q] + 2.0 * lam_next[q] - lam_next2[q] +
                         dt2 * divP[q];
        std::swap(lam_next2, lam_next);
        std::swap(lam_next, lam_cur);
    }

    // startup transpose: rbar^0 = dt^2 / (2 rho) * lam^1
    kernels::jacobian_dirichlet(g, u.step(0), jac_u.data());
    for (std::size_t p = 0; p < npts; ++p) {
        double s = 0.5 * dt2 / setup.material.rho[p];
        for (int c = 0; c < g.d; ++c)
            scaled[p * g.d + c] = s * lam_next[p * g.d + c];
    }
    for (int e = 0; e < n_entries; ++e) {
        entry_stress_divergence(g, setup.dict.entries[e], jac_u.data(),
                                P.data(), divS.data());
        grad[e] += kernels::dot(scaled.data(), divS.data(), sz);
    }
    return grad;
}

Coeffs apply_adjoint_continuous(const ProblemSetup& setup,
                                const SpaceTimeField& u,
                                const LinearizedCoefficients& A,
                                const SpaceTimeField& w) {
    const Grid& g = setup.grid;
    u.require_conforms(g);
    w.require_conforms(g);
    SpaceTimeField p = solve_backward(setup, A, w);

    const int n_entries = setup.dict.size();
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    std::vector<double> jac_u(npts * d2), jac_p(npts * d2), S(npts * d2);
    Coeffs grad(n_entries, 0.0);
    for (int k = 0; k <= g.m; ++k) {
        double wq = (k == 0 || k == g.m) ? 0.5 : 1.0;
        kernels::jacobian_dirichlet(g, u.step(k), jac_u.data());
        kernels::jacobian_onesided(g, p.step(k), jac_p.data());
        for (int e = 0; e < n_entries; ++e) {
            kernels::entry_stress_field(g, setup.dict.entries[e], jac_u.data(),
                                        S.data());
            grad[e] -= wq * g.dt() *
                       kernels::inner_product_space(g, S.data(), jac_p.data(),
                                                    S.size());
        }
    }
    return grad;
}

Coeffs apply_adjoint(AdjointMethod method, const ProblemSetup& setup,
                     const SpaceTimeField& u, const LinearizedCoefficients& A,
                     const SpaceTimeField& w) {
    return method == AdjointMethod::Discrete
               ? apply_adjoint_discrete(setup, u, A, w)
               : apply_adjoint_continuous(setup, u, A, w);
}

}  // namespace hyperwave
