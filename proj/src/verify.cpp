#include "hyperwave/verify.hpp"

#include <cmath>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ShapeError("loglog_slope: need at least two matching samples");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]);
        double ly = std::log(std::max(y[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TaylorResult taylor_order_test(const ProblemSetup& setup, const Coeffs& h,
                               const std::vector<double>& s_list) {
    TaylorResult res;
    ForwardResult base = solve_forward(setup);
    res.base_norm = std::sqrt(kernels::v_norm_sq(setup.grid, base.u));
    LinearizedCoefficients A = build_linearization(setup, base.u);
    SpaceTimeField v = solve_frechet(setup, h, base.u, A);

    std::vector<double> xs, ys;
    for (double s : s_list) {
        TaylorRow row;
        row.s = s;
        try {
            Coeffs pert = setup.alpha;
            for (std::size_t k = 0; k < pert.size(); ++k) pert[k] += s * h[k];
            validate_positive(pert);
            ForwardResult shifted = solve_forward(setup.with_alpha(pert));
            SpaceTimeField rem = shifted.u;
            for (std::size_t q = 0; q < rem.data.size(); ++q)
                rem.data[q] -= base.u.data[q] + s * v.data[q];
            row.remainder = std::sqrt(kernels::v_norm_sq(setup.grid, rem));
            row.ok = true;
            xs.push_back(s);
            ys.push_back(row.remainder);
        } catch (const Error& err) {
            row.failure = err.what();
            res.complete = false;
        }
        res.table.push_back(row);
    }
    if (xs.size() >= 2) res.slope = loglog_slope(xs, ys);
    return res;
}

double adjoint_certificate(const ProblemSetup& setup, AdjointMethod method,
                           int trials, Rng& rng) {
    ForwardResult base = solve_forward(setup);
    LinearizedCoefficients A = build_linearization(setup, base.u);
    const Grid& g = setup.grid;
    const int n = setup.dict.size();

    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Coeffs h(n);
        for (double& x : h) x = 2.0 * rng.uniform() - 1.0;
        SpaceTimeField w = SpaceTimeField::zeros(g);
        for (double& x : w.data) x = 2.0 * rng.uniform() - 1.0;

        SpaceTimeField v = solve_frechet(setup, h, base.u, A);
        Coeffs grad = apply_adjoint(method, setup, base.u, A, w);

        double lhs = kernels::inner_product_spacetime(g, v, w);
        double rhs = 0.0, hn = 0.0, gn = 0.0;
        for (int k = 0; k < n; ++k) {
            rhs += h[k] * grad[k];
            hn += h[k] * h[k];
            gn += grad[k] * grad[k];
        }
        double vn = std::sqrt(kernels::inner_product_spacetime(g, v, v));
        double wn = std::sqrt(kernels::inner_product_spacetime(g, w, w));
        double denom = vn * wn + std::sqrt(hn) * std::sqrt(gn);
        if (denom == 0.0) continue;
        worst = std::max(worst, std::abs(lhs - rhs) / denom);
    }
    return worst;
}

std::vector<LipschitzRow> lipschitz_alpha_test(
    const ProblemSetup& setup, const std::vector<Coeffs>& directions,
    const std::vector<double>& eps_list) {
    if (!gap_condition_holds(setup.dict, setup.alpha))
        throw Error("lipschitz_alpha_test: base alpha fails the gap condition");
    ForwardResult base = solve_forward(setup);
    std::vector<LipschitzRow> rows;
    for (std::size_t di = 0; di < directions.size(); ++di) {
        const Coeffs& dir = directions[di];
        double dmax = 0.0;
        for (double x : dir) dmax = std::max(dmax, std::abs(x));
        if (dmax == 0.0) throw Error("lipschitz_alpha_test: zero direction");
        for (double eps : eps_list) {
            Coeffs pert = setup.alpha;
            for (std::size_t k = 0; k < pert.size(); ++k)
                pert[k] += eps * dir[k];
            validate_positive(pert);
            if (!gap_condition_holds(setup.dict, pert))
                throw Error(
                    "lipschitz_alpha_test: perturbed alpha fails the gap "
                    "condition");
            ForwardResult other = solve_forward(setup.with_alpha(pert));
            SpaceTimeField diff = other.u;
            for (std::size_t q = 0; q < diff.data.size(); ++q)
                diff.data[q] -= base.u.data[q];
            std::vector<double> series = energy_norm(diff, setup);
            double sup = 0.0;
            for (double e : series) sup = std::max(sup, e);
            LipschitzRow row;
            row.direction = static_cast<int>(di);
            row.eps = eps;
            row.ratio = std::sqrt(sup) / (eps * dmax);
            rows.push_back(row);
        }
    }
    return rows;
}

double gronwall_envelope(double a, double b, double k, double tau) {
    if (a < 0.0 || b < 0.0 || k < 0.0 || tau < 0.0)
        throw Error("gronwall_envelope: arguments must be non-negative");
    if (b == 0.0) {
        double root = std::sqrt(a) + 0.5 * k * tau;
        return root * root;
    }
    double growth = std::exp(0.5 * b * tau);
    double root = growth * std::sqrt(a) + k * std::expm1(0.5 * b * tau) / b;
    return root * root;
}

std::vector<double> gronwall_envelope(double a, double b, double k,
                                      const std::vector<double>& tau_grid) {
    std::vector<double> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid) out.push_back(gronwall_envelope(a, b, k, tau));
    return out;
}

std::vector<double> energy_norm(const SpaceTimeField& u_like,
                                const ProblemSetup& setup) {
    const Grid& g = setup.grid;
    u_like.require_conforms(g);
    const double kappa = hessian_bounds(setup.dict, setup.alpha).kappa;
    const std::size_t npts = g.num_points();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    std::vector<double> vel(u_like.step_size()), jac(npts * d2);
    std::vector<double> series(g.m + 1, 0.0);
    for (int k = 0; k <= g.m; ++k) {
        time_derivative_slice(g, u_like, k, vel.data());
        kernels::jacobian_dirichlet(g, u_like.step(k), jac.data());
        double kin = 0.0;
        for (std::size_t p = 0; p < npts; ++p) {
            double v2 = 0.0;
            for (int c = 0; c < g.d; ++c) {
                double v = vel[p * g.d + c];
                v2 += v * v;
            }
            kin += setup.material.rho[p] * v2;
        }
        double strain = kernels::dot(jac.data(), jac.data(), jac.size());
        series[k] = (kin + kappa * strain) * g.cell_volume();
    }
    return series;
}

}  // namespace hyperwave
