#pragma once

#include <cstdint>
#include <vector>

#include "hyperwave/energy.hpp"
#include "hyperwave/grid.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hyperwave::kernels {

// OpenMP-parallel grid operators. Elementwise kernels produce bit-identical
// results for any thread count; reductions accumulate per-thread partials in
// thread order, so they are deterministic for a fixed thread count and agree
// with the serial reference to ~1e-13 relative otherwise.
// A plain-loop second implementation lives in hyperwave::serial for tests
// and the benchmark baseline.

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Index of the neighbor one cell along `axis` (dir is +1 or -1), or npos if
/// that neighbor is a boundary/exterior point.
inline std::size_t shifted(const Grid& g, std::size_t p, int axis, int dir) {
    int ni = g.axis_index(p, axis) + dir;
    if (ni < 0 || ni >= g.n) return npos;
    std::size_t s = g.axis_stride(axis);
    return dir > 0 ? p + s : p - s;
}

/// Displacement gradient (J u)_ij = d_j u_i by central differences; values
/// beyond the interior use the homogeneous Dirichlet ghost 0.
/// u: npts*d, jac: npts*d*d (i row, j column).
void jacobian_dirichlet(const Grid& g, const double* u, double* jac);

/// Same stencil but one-sided at points adjacent to the boundary (no ghost);
/// used for fields without a Dirichlet condition.
void jacobian_onesided(const Grid& g, const double* u, double* jac);

/// Row-wise divergence (div P)_i = sum_j d_j P_ij by central differences with
/// zero extension of P outside the interior; the exact negative transpose of
/// jacobian_dirichlet under the plain grid inner product.
void divergence(const Grid& g, const double* P, double* div);

/// P(p) = stress of the combined energy at (x_p, Jac(p)).
void stress_field(const Grid& g, const CombinedEnergy& en, const double* jac,
                  double* P);

/// P(p) = stress of a single dictionary entry at (x_p, Jac(p)).
void entry_stress_field(const Grid& g, const EnergyEntry& e, const double* jac,
                        double* P);

/// A(p) = Hessian tensor of the combined energy at (x_p, Jac(p)); A is
/// npts * d^4, (i,j,k,l) row-major with stride d.
void hessian_field(const Grid& g, const CombinedEnergy& en, const double* jac,
                   double* A);

/// P(p)_ij = sum_kl A(p)_ijkl * Jv(p)_kl.
void apply_hessian_field(const Grid& g, const double* A, const double* jac_v,
                         double* P);

/// out = 2u - uprev + dt^2 / rho * (divP + f);  f may be null.
void leapfrog_update(const Grid& g, const MaterialField& mat, double dt2,
                     const double* u, const double* uprev, const double* divP,
                     const double* f, double* out);

/// out = u0 + dt*u1 + dt^2/(2 rho) * (divP + f);  startup step, f may be null.
void leapfrog_start(const Grid& g, const MaterialField& mat, double dt,
                    const double* u0, const double* u1, const double* divP,
                    const double* f, double* out);

// --- reductions --------------------------------------------------------------

#ifdef _OPENMP
template <class F>
double deterministic_sum(std::int64_t count, F&& term) {
    int nt = omp_get_max_threads();
    std::vector<double> partial(nt, 0.0);
#pragma omp parallel num_threads(nt)
    {
        double local = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) local += term(i);
        partial[omp_get_thread_num()] = local;
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}
#else
template <class F>
double deterministic_sum(std::int64_t count, F&& term) {
    double s = 0.0;
    for (std::int64_t i = 0; i < count; ++i) s += term(i);
    return s;
}
#endif

double dot(const double* a, const double* b, std::size_t count);
double max_abs(const double* a, std::size_t count);
bool all_finite(const double* a, std::size_t count);

/// Midpoint-in-space quadrature: dx^d * sum over sample values. `count` is the
/// number of scalar samples (npts * components).
double inner_product_space(const Grid& g, const double* a, const double* b,
                           std::size_t count);

/// Trapezoidal-in-time, midpoint-in-space pairing of two conforming fields.
double inner_product_spacetime(const Grid& g, const SpaceTimeField& a,
                               const SpaceTimeField& b);

/// Squared L2(0,T;V) norm: spacetime L2 plus the Dirichlet-jacobian
/// seminorm, unit weights.
double v_norm_sq(const Grid& g, const SpaceTimeField& u);

/// Spacetime L2 inner product in V: <a,b> + <<Ja, Jb>> (Dirichlet jacobian).
double v_inner_product(const Grid& g, const SpaceTimeField& a,
                       const SpaceTimeField& b);

}  // namespace hyperwave::kernels
