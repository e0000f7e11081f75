#pragma once

#include <cmath>
#include <vector>

#include "hyperwave/config.hpp"
#include "hyperwave/forward.hpp"

namespace hwtest {

using namespace hyperwave;

inline EnergyEntry quadratic_entry(double a, double b, double c,
                                   SpatialWeight w = SpatialWeight::uniform(),
                                   int d = 3, std::uint64_t seed = 11) {
    EnergyEntry e;
    e.family = EnergyFamily::Quadratic;
    e.a = a;
    e.b = b;
    e.c = c;
    e.weight = w;
    Rng rng(seed);
    certify_bounds(e, d, rng);
    return e;
}

inline EnergyEntry nonlinear_entry(double a, double nl,
                                   SpatialWeight w = SpatialWeight::uniform(),
                                   int d = 3, std::uint64_t seed = 12,
                                   double b = 0.0, double c = 0.0) {
    EnergyEntry e;
    e.family = EnergyFamily::BoundedNonlinear;
    e.a = a;
    e.b = b;
    e.c = c;
    e.nl = nl;
    e.weight = w;
    Rng rng(seed);
    certify_bounds(e, d, rng);
    return e;
}

/// Replaces the sampled Hessian bounds by the exact closed forms
///   kappa[1] = 2 a floor,  mu[1] = 2 (a + b d + c) + nl (2 + 32/27),
/// which keep the 7/8..9/8 band testable (sampling safety factors would
/// spuriously shrink the margin).
inline EnergyEntry with_exact_hessian_bounds(EnergyEntry e, int d) {
    double quad_low = d == 1 ? e.a + e.b + e.c : e.a;
    e.bounds.kappa[1] = 2.0 * e.weight.floor * quad_low;
    e.bounds.mu[1] = 2.0 * (e.a + e.b * d + e.c) + e.nl * (2.0 + 32.0 / 27.0);
    return e;
}

inline SpatialWeight bump(double floor, Coord center, Coord halfwidth) {
    SpatialWeight w;
    w.floor = floor;
    w.center = center;
    w.halfwidth = halfwidth;
    return w;
}

/// Composite-Simpson quadrature, independent of any library code.
template <class F>
double simpson(F&& f, double lo, double hi, int intervals) {
    if (intervals % 2) ++intervals;
    double h = (hi - lo) / intervals;
    double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i)
        s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double rel_diff(double got, double want) {
    double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

inline double frob_rel_diff(const Mat& got, const Mat& want) {
    double num = (got - want).frob_sq();
    double den = std::max(want.frob_sq(), 1e-300);
    return std::sqrt(num / den);
}

/// A tiny ready-made 1D problem: single uniform quadratic entry, unit alpha.
inline ProblemSetup setup_1d(int n, int m, double T, double rho = 2.0,
                             double a = 1.0) {
    ProblemSetup s;
    s.grid = Grid{1, n, m, T};
    s.material = MaterialField::constant(s.grid, rho);
    s.dict.entries.push_back(quadratic_entry(a, 0.0, 0.0,
                                             SpatialWeight::uniform(), 1));
    s.alpha = {1.0};
    s.force = SpaceTimeField::zeros(s.grid);
    s.u0.assign(s.grid.num_points(), 0.0);
    s.u1.assign(s.grid.num_points(), 0.0);
    return s;
}

/// Standing-wave initial data u0 = sin(pi x) on the 1D setup.
inline void set_sine_initial(ProblemSetup& s, double amplitude = 1.0) {
    for (std::size_t p = 0; p < s.grid.num_points(); ++p)
        s.u0[p] = amplitude * std::sin(3.141592653589793 *
                                       s.grid.coord(p)[0]);
}

/// Multi-entry 1D setup with disjoint bump weights (twin-experiment shape).
inline ProblemSetup setup_bumps_1d(int n, int m, double T, Coeffs alpha,
                                   double floor = 0.05, double rho = 1.0) {
    ProblemSetup s;
    s.grid = Grid{1, n, m, T};
    s.material = MaterialField::constant(s.grid, rho);
    const double centers[3] = {0.2, 0.5, 0.8};
    for (std::size_t k = 0; k < alpha.size(); ++k)
        s.dict.entries.push_back(quadratic_entry(
            1.0, 0.0, 0.0,
            bump(floor, {centers[k % 3], 0, 0}, {0.12, 1, 1}), 1,
            77 + k));
    s.alpha = std::move(alpha);
    s.force = SpaceTimeField::zeros(s.grid);
    s.u0.assign(s.grid.num_points(), 0.0);
    s.u1.assign(s.grid.num_points(), 0.0);
    set_sine_initial(s);
    return s;
}

}  // namespace hwtest
