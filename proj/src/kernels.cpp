#include "hyperwave/kernels.hpp"

#include <cmath>

namespace hyperwave::kernels {

namespace {
std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }
}

void jacobian_dirichlet(const Grid& g, const double* u, double* jac) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const double dx = g.dx();
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        for (int j = 0; j < d; ++j) {
            std::size_t pp = shifted(g, p, j, +1);
            std::size_t pm = shifted(g, p, j, -1);
            for (int i = 0; i < d; ++i) {
                double up = pp == npos ? 0.0 : u[pp * d + i];
                double um = pm == npos ? 0.0 : u[pm * d + i];
                jac[(p * d + i) * d + j] = (up - um) / (2.0 * dx);
            }
        }
    }
}

void jacobian_onesided(const Grid& g, const double* u, double* jac) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const double dx = g.dx();
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        for (int j = 0; j < d; ++j) {
            std::size_t pp = shifted(g, p, j, +1);
            std::size_t pm = shifted(g, p, j, -1);
            for (int i = 0; i < d; ++i) {
                double v;
                if (pp != npos && pm != npos)
                    v = (u[pp * d + i] - u[pm * d + i]) / (2.0 * dx);
                else if (pp != npos)
                    v = (u[pp * d + i] - u[p * d + i]) / dx;
                else if (pm != npos)
                    v = (u[p * d + i] - u[pm * d + i]) / dx;
                else
                    v = 0.0;
                jac[(p * d + i) * d + j] = v;
            }
        }
    }
}

void divergence(const Grid& g, const double* P, double* div) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const double dx = g.dx();
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                std::size_t pp = shifted(g, p, j, +1);
                std::size_t pm = shifted(g, p, j, -1);
                double vp = pp == npos ? 0.0 : P[(pp * d + i) * d + j];
                double vm = pm == npos ? 0.0 : P[(pm * d + i) * d + j];
                s += (vp - vm) / (2.0 * dx);
            }
            div[p * d + i] = s;
        }
    }
}

namespace {
Mat load_mat(const double* jac, std::size_t p, int d) {
    Mat y;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) y(i, j) = jac[(p * d + i) * d + j];
    return y;
}
void store_mat(double* P, std::size_t p, int d, const Mat& s) {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) P[(p * d + i) * d + j] = s(i, j);
}
}  // namespace

void stress_field(const Grid& g, const CombinedEnergy& en, const double* jac,
                  double* P) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        Mat y = load_mat(jac, p, d);
        store_mat(P, p, d, en.stress(g.coord(p), y, d));
    }
}

void entry_stress_field(const Grid& g, const EnergyEntry& e, const double* jac,
                        double* P) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        Mat y = load_mat(jac, p, d);
        store_mat(P, p, d, e.stress(g.coord(p), y, d));
    }
}

void hessian_field(const Grid& g, const CombinedEnergy& en, const double* jac,
                   double* A) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const std::size_t d4 = static_cast<std::size_t>(d) * d * d * d;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        Mat y = load_mat(jac, p, d);
        Tensor4 t = en.hessian(g.coord(p), y, d);
        double* ap = A + p * d4;
        std::size_t q = 0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) ap[q++] = t(i, j, k, l);
    }
}

void apply_hessian_field(const Grid& g, const double* A, const double* jac_v,
                         double* P) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const std::size_t d2 = static_cast<std::size_t>(d) * d;
    const std::size_t d4 = d2 * d2;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        const double* ap = A + p * d4;
        const double* jv = jac_v + p * d2;
        double* pp = P + p * d2;
        for (std::size_t ij = 0; ij < d2; ++ij) {
            double s = 0.0;
            for (std::size_t kl = 0; kl < d2; ++kl)
                s += ap[ij * d2 + kl] * jv[kl];
            pp[ij] = s;
        }
    }
}

void leapfrog_update(const Grid& g, const MaterialField& mat, double dt2,
                     const double* u, const double* uprev, const double* divP,
                     const double* f, double* out) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        double scale = dt2 / mat.rho[p];
        for (int c = 0; c < d; ++c) {
            std::size_t q = p * d + c;
            double force = divP[q] + (f ? f[q] : 0.0);
            out[q] = 2.0 * u[q] - uprev[q] + scale * force;
        }
    }
}

void leapfrog_start(const Grid& g, const MaterialField& mat, double dt,
                    const double* u0, const double* u1, const double* divP,
                    const double* f, double* out) {
    const std::int64_t npts = i64(g.num_points());
    const int d = g.d;
    const double half_dt2 = 0.5 * dt * dt;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < npts; ++p) {
        double scale = half_dt2 / mat.rho[p];
        for (int c = 0; c < d; ++c) {
            std::size_t q = p * d + c;
            double force = divP[q] + (f ? f[q] : 0.0);
            out[q] = u0[q] + dt * u1[q] + scale * force;
        }
    }
}

double dot(const double* a, const double* b, std::size_t count) {
    return deterministic_sum(i64(count),
                             [&](std::int64_t i) { return a[i] * b[i]; });
}

double max_abs(const double* a, std::size_t count) {
    double v = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : v)
#endif
    for (std::int64_t i = 0; i < i64(count); ++i)
        v = std::max(v, std::abs(a[i]));
    return v;
}

bool all_finite(const double* a, std::size_t count) {
    bool ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(&& : ok)
#endif
    for (std::int64_t i = 0; i < i64(count); ++i)
        ok = ok && std::isfinite(a[i]);
    return ok;
}

double inner_product_space(const Grid& g, const double* a, const double* b,
                           std::size_t count) {
    return g.cell_volume() * dot(a, b, count);
}

double inner_product_spacetime(const Grid& g, const SpaceTimeField& a,
                               const SpaceTimeField& b) {
    a.require_conforms(g);
    b.require_conforms(g);
    double s = 0.0;
    for (int k = 0; k <= g.m; ++k) {
        double w = (k == 0 || k == g.m) ? 0.5 : 1.0;
        s += w * inner_product_space(g, a.step(k), b.step(k), a.step_size());
    }
    return s * g.dt();
}

double v_inner_product(const Grid& g, const SpaceTimeField& a,
                       const SpaceTimeField& b) {
    a.require_conforms(g);
    b.require_conforms(g);
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    std::vector<double> ja(g.num_points() * d2), jb(g.num_points() * d2);
    double s = 0.0;
    for (int k = 0; k <= g.m; ++k) {
        double w = (k == 0 || k == g.m) ? 0.5 : 1.0;
        jacobian_dirichlet(g, a.step(k), ja.data());
        jacobian_dirichlet(g, b.step(k), jb.data());
        s += w * (inner_product_space(g, a.step(k), b.step(k), a.step_size()) +
                  inner_product_space(g, ja.data(), jb.data(), ja.size()));
    }
    return s * g.dt();
}

double v_norm_sq(const Grid& g, const SpaceTimeField& u) {
    return v_inner_product(g, u, u);
}

}  // namespace hyperwave::kernels
