#include "hyperwave/grid.hpp"

#include <cmath>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

void time_derivative_slice(const Grid& g, const SpaceTimeField& u, int k,
                           double* out) {
    u.require_conforms(g);
    const std::size_t sz = u.step_size();
    const double dt = g.dt();
    if (k > 0 && k < g.m) {
        const double* a = u.step(k + 1);
        const double* b = u.step(k - 1);
        for (std::size_t q = 0; q < sz; ++q) out[q] = (a[q] - b[q]) / (2.0 * dt);
    } else if (k == 0) {
        const double* a = u.step(1);
        const double* b = u.step(0);
        for (std::size_t q = 0; q < sz; ++q) out[q] = (a[q] - b[q]) / dt;
    } else {
        const double* a = u.step(g.m);
        const double* b = u.step(g.m - 1);
        for (std::size_t q = 0; q < sz; ++q) out[q] = (a[q] - b[q]) / dt;
    }
}

namespace {

double ghost0(const Grid& g, const double* slice, std::size_t p, int axis,
              int dir, int c) {
    std::size_t q = kernels::shifted(g, p, axis, dir);
    return q == kernels::npos ? 0.0 : slice[q * g.d + c];
}

// All second differences D_j D_l of every component at one point; returns
// the squared sum and tracks the max absolute entry.
double second_diffs_at(const Grid& g, const double* slice, std::size_t p,
                       double& max_entry) {
    const double dx2 = g.dx() * g.dx();
    double sq = 0.0;
    for (int c = 0; c < g.d; ++c) {
        double u0 = slice[p * g.d + c];
        for (int j = 0; j < g.d; ++j) {
            for (int l = 0; l < g.d; ++l) {
                double v;
                if (j == l) {
                    v = (ghost0(g, slice, p, j, +1, c) - 2.0 * u0 +
                         ghost0(g, slice, p, j, -1, c)) /
                        dx2;
                } else {
                    std::size_t pp = kernels::shifted(g, p, j, +1);
                    std::size_t pm = kernels::shifted(g, p, j, -1);
                    double a = pp == kernels::npos
                                   ? 0.0
                                   : ghost0(g, slice, pp, l, +1, c) -
                                         ghost0(g, slice, pp, l, -1, c);
                    double b = pm == kernels::npos
                                   ? 0.0
                                   : ghost0(g, slice, pm, l, +1, c) -
                                         ghost0(g, slice, pm, l, -1, c);
                    v = (a - b) / (4.0 * dx2);
                }
                sq += v * v;
                max_entry = std::max(max_entry, std::abs(v));
            }
        }
    }
    return sq;
}

}  // namespace

RegularitySurrogates measure_regularity(const Grid& g,
                                        const SpaceTimeField& u) {
    u.require_conforms(g);
    RegularitySurrogates r;
    const std::size_t npts = g.num_points();
    std::vector<double> vel(u.step_size());
    std::vector<double> jac(npts * g.d * g.d);
    for (int k = 0; k <= g.m; ++k) {
        double step_sq = 0.0;
        for (std::size_t p = 0; p < npts; ++p)
            step_sq += second_diffs_at(g, u.step(k), p, r.m3);
        r.m0 = std::max(r.m0, std::sqrt(step_sq * g.cell_volume()));

        time_derivative_slice(g, u, k, vel.data());
        kernels::jacobian_dirichlet(g, vel.data(), jac.data());
        r.m1 = std::max(r.m1, kernels::max_abs(jac.data(), jac.size()));
        for (std::size_t p = 0; p < npts; ++p)
            second_diffs_at(g, vel.data(), p, r.m2);
    }
    return r;
}

}  // namespace hyperwave
