#include "hyperwave/inversion.hpp"

#include <cmath>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

namespace {

SpaceTimeField field_difference(const SpaceTimeField& a,
                                const SpaceTimeField& b) {
    SpaceTimeField e = a;
    for (std::size_t q = 0; q < e.data.size(); ++q) e.data[q] -= b.data[q];
    return e;
}

double l2(const Coeffs& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double misfit(const Coeffs& alpha, const SpaceTimeField& u_meas,
              const ProblemSetup& setup) {
    ProblemSetup s = setup.with_alpha(alpha);
    ForwardResult fr = solve_forward(s);
    SpaceTimeField e = field_difference(fr.u, u_meas);
    return 0.5 * kernels::v_norm_sq(setup.grid, e);
}

SpaceTimeField v_dual_weight(const Grid& g, const SpaceTimeField& e) {
    e.require_conforms(g);
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    std::vector<double> jac(npts * d2), div(npts * g.d);
    SpaceTimeField w = e;
    for (int k = 0; k <= g.m; ++k) {
        kernels::jacobian_dirichlet(g, e.step(k), jac.data());
        kernels::divergence(g, jac.data(), div.data());
        double* wk = w.step(k);
        for (std::size_t q = 0; q < e.step_size(); ++q) wk[q] -= div[q];
    }
    return w;
}

ProjectionResult project_admissible(const EnergyDictionary& dict, Coeffs alpha,
                                    const AdmissibilityThresholds& thr,
                                    double floor) {
    if (static_cast<int>(alpha.size()) != dict.size())
        throw ShapeError("project_admissible: size mismatch");
    ProjectionResult pr;
    for (double& a : alpha)
        if (a < floor) a = floor;

    const double rel_tol = 1e-12;
    double scale = 1.0;
    for (int a = 0; a < 2; ++a) {
        double s = 0.0;
        for (int k = 0; k < dict.size(); ++k)
            s += alpha[k] * dict.entries[k].bounds.kappa[a];
        if (s < thr.kappa[a] * (1.0 - rel_tol)) {
            if (s <= 0.0) {
                pr.mu_feasible = false;
                pr.notes.push_back("kappa(" + std::to_string(a + 1) +
                                   ") bound unsatisfiable by scaling");
                continue;
            }
            scale = std::max(scale, thr.kappa[a] / s);
        }
    }
    if (scale > 1.0)
        for (double& a : alpha) a *= scale;
    pr.scale = scale;

    for (int b = 0; b < 7; ++b) {
        double s = 0.0;
        for (int k = 0; k < dict.size(); ++k)
            s += alpha[k] * dict.entries[k].bounds.mu[b + 1];
        if (s > thr.mu[b] * (1.0 + rel_tol)) {
            pr.mu_feasible = false;
            pr.notes.push_back("mu(" + std::to_string(b + 1) +
                               ") exceeded after projection");
        }
    }
    pr.alpha = std::move(alpha);
    return pr;
}

namespace {

Coeffs residual_gradient(const ProblemSetup& at_alpha, const SpaceTimeField& u,
                         const LinearizedCoefficients& A,
                         const SpaceTimeField& u_meas, AdjointMethod method) {
    SpaceTimeField e = field_difference(u_meas, u);
    SpaceTimeField w = v_dual_weight(at_alpha.grid, e);
    return apply_adjoint(method, at_alpha, u, A, w);
}

}  // namespace

Coeffs landweber_step(const Coeffs& alpha, const SpaceTimeField& u_meas,
                      const ProblemSetup& setup, const InversionConfig& cfg,
                      double omega) {
    ProblemSetup at_alpha = setup.with_alpha(alpha);
    ForwardResult fr = solve_forward(at_alpha);
    LinearizedCoefficients A = build_linearization(at_alpha, fr.u);
    Coeffs g = residual_gradient(at_alpha, fr.u, A, u_meas,
                                 cfg.adjoint_method);
    Coeffs next(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k)
        next[k] = alpha[k] + omega * g[k];
    return project_admissible(setup.dict, next, cfg.thresholds,
                              cfg.alpha_floor)
        .alpha;
}

double operator_norm_sq_estimate(const ProblemSetup& setup,
                                 const SpaceTimeField& u,
                                 const LinearizedCoefficients& A, Rng& rng,
                                 int iterations) {
    const int n = setup.dict.size();
    Coeffs h(n);
    for (double& x : h) x = rng.uniform(0.1, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        double nh = l2(h);
        if (nh == 0.0) break;
        for (double& x : h) x /= nh;
        SpaceTimeField v = solve_frechet(setup, h, u, A);
        SpaceTimeField w = v_dual_weight(setup.grid, v);
        Coeffs gh = apply_adjoint_discrete(setup, u, A, w);
        lambda = l2(gh);
        h = gh;
    }
    return lambda;
}

InversionResult invert(const SpaceTimeField& u_meas, const Coeffs& alpha0,
                       const ProblemSetup& setup, const InversionConfig& cfg) {
    cfg.validate();
    u_meas.require_conforms(setup.grid);
    InversionResult out;
    IterateTrace& trace = out.trace;
    Coeffs alpha = alpha0;
    double omega = cfg.omega;
    int stall_count = 0;
    double prev_misfit = 0.0;

    for (int it = 0; it <= cfg.max_iterations; ++it) {
        ProblemSetup at_alpha = setup.with_alpha(alpha);
        ForwardResult fr;
        try {
            fr = solve_forward(at_alpha);
        } catch (const SolverError& err) {
            trace.stopping_reason = std::string("solver_failure: ") + err.what();
            break;
        }
        SpaceTimeField e = field_difference(fr.u, u_meas);
        double res_v = std::sqrt(kernels::v_norm_sq(setup.grid, e));
        double mis = 0.5 * res_v * res_v;

        LinearizedCoefficients A = build_linearization(at_alpha, fr.u);
        Coeffs g = residual_gradient(at_alpha, fr.u, A, u_meas,
                                     cfg.adjoint_method);

        IterateRecord rec;
        rec.iteration = it;
        rec.alpha = alpha;
        rec.residual_v = res_v;
        rec.misfit = mis;
        rec.grad_norm = l2(g);
        rec.admissible =
            check_admissible(setup.dict, alpha, cfg.thresholds).ok;
        rec.gap_ok = gap_condition_holds(setup.dict, alpha);
        trace.records.push_back(rec);

        if (trace.records.size() == 1 || mis < trace.best_misfit) {
            trace.best_misfit = mis;
            trace.best_alpha = alpha;
            trace.best_iteration = it;
        }

        if (res_v <= cfg.discrepancy_factor * cfg.noise_level) {
            trace.stopping_reason = "discrepancy";
            break;
        }
        if (it > 0 && mis >= prev_misfit) {
            if (++stall_count >= cfg.stall_limit) {
                trace.stopping_reason = "stalled";
                break;
            }
        } else {
            stall_count = 0;
        }
        prev_misfit = mis;
        if (it == cfg.max_iterations) {
            trace.stopping_reason = "max_iterations";
            break;
        }

        if (omega <= 0.0) {
            Rng rng(0x9b1c5feull);
            double lam = operator_norm_sq_estimate(at_alpha, fr.u, A, rng);
            omega = lam > 0.0 ? 0.9 / lam : 1.0;
        }
        Coeffs next(alpha.size());
        for (std::size_t k = 0; k < alpha.size(); ++k)
            next[k] = alpha[k] + omega * g[k];
        alpha = project_admissible(setup.dict, next, cfg.thresholds,
                                   cfg.alpha_floor)
                    .alpha;
    }
    if (trace.stopping_reason.empty()) trace.stopping_reason = "max_iterations";
    out.alpha = trace.best_alpha;
    return out;
}

}  // namespace hyperwave
