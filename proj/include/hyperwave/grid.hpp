#pragma once

#include <cstddef>
#include <vector>

#include "hyperwave/core.hpp"

namespace hyperwave {

/// Regular grid on the unit box (0,1)^d with n interior points per axis
/// (homogeneous Dirichlet boundary is implicit) and m time steps on [0, T].
struct Grid {
    int d = 1;
    int n = 2;
    int m = 2;
    double T = 1.0;

    double dx() const { return 1.0 / (n + 1); }
    double dt() const { return T / m; }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= dx();
        return v;
    }

    std::size_t num_points() const {
        std::size_t p = 1;
        for (int a = 0; a < d; ++a) p *= static_cast<std::size_t>(n);
        return p;
    }
    std::size_t axis_stride(int axis) const {
        std::size_t s = 1;
        for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(n);
        return s;
    }
    int axis_index(std::size_t p, int axis) const {
        return static_cast<int>(p / axis_stride(axis)) % n;
    }
    Coord coord(std::size_t p) const {
        Coord x{};
        for (int a = 0; a < d; ++a) x[a] = (axis_index(p, a) + 1) * dx();
        return x;
    }

    void validate() const {
        if (d < 1 || d > kMaxDim) throw ConfigError("grid: d must be 1, 2 or 3");
        if (n < 2) throw ConfigError("grid: n must be >= 2");
        if (m < 2) throw ConfigError("grid: m must be >= 2");
        if (!(T > 0.0)) throw ConfigError("grid: T must be positive");
    }

    bool operator==(const Grid&) const = default;
};

/// Vector-valued field on (m+1) time slices of the interior grid, stored
/// step-major with axis 0 fastest and the component innermost.
struct SpaceTimeField {
    int d = 1;
    int n = 0;
    int m = 0;
    double T = 1.0;
    std::vector<double> data;

    static SpaceTimeField zeros(const Grid& g) {
        SpaceTimeField f;
        f.d = g.d;
        f.n = g.n;
        f.m = g.m;
        f.T = g.T;
        f.data.assign((g.m + 1) * g.num_points() * g.d, 0.0);
        return f;
    }

    std::size_t num_points() const {
        std::size_t p = 1;
        for (int a = 0; a < d; ++a) p *= static_cast<std::size_t>(n);
        return p;
    }
    std::size_t step_size() const { return num_points() * d; }
    double* step(int k) { return data.data() + k * step_size(); }
    const double* step(int k) const { return data.data() + k * step_size(); }
    double& at(int k, std::size_t p, int c) {
        return data[(k * num_points() + p) * d + c];
    }
    double at(int k, std::size_t p, int c) const {
        return data[(k * num_points() + p) * d + c];
    }

    bool conforms(const Grid& g) const {
        return d == g.d && n == g.n && m == g.m &&
               data.size() == (g.m + 1) * g.num_points() * g.d;
    }
    void require_conforms(const Grid& g) const {
        if (!conforms(g)) throw ShapeError("field does not conform to grid");
    }
};

/// Discrete time derivative at step k: centered for 0 < k < m, one-sided at
/// the ends. out must hold step_size() values.
void time_derivative_slice(const Grid& g, const SpaceTimeField& u, int k,
                           double* out);

/// Sup/L2 surrogates for the solution-regularity quantities tracked in solve
/// reports: m0 = max_k L2 norm of all second differences, m1 = sup |J du/dt|,
/// m2 = sup of second differences of du/dt, m3 = sup of second differences
/// of u. Measured only, never enforced.
struct RegularitySurrogates {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};
RegularitySurrogates measure_regularity(const Grid& g, const SpaceTimeField& u);

/// Mass density sampled at the interior grid points.
struct MaterialField {
    std::vector<double> rho;

    static MaterialField constant(const Grid& g, double value) {
        MaterialField m;
        m.rho.assign(g.num_points(), value);
        return m;
    }

    double rho_min() const {
        double v = rho.empty() ? 0.0 : rho[0];
        for (double r : rho) v = std::min(v, r);
        return v;
    }
    double rho_max() const {
        double v = rho.empty() ? 0.0 : rho[0];
        for (double r : rho) v = std::max(v, r);
        return v;
    }
    void validate(const Grid& g) const {
        if (rho.size() != g.num_points())
            throw ShapeError("material field does not conform to grid");
        if (!(rho_min() > 0.0))
            throw ConfigError("material: density must be strictly positive");
    }
};

}  // namespace hyperwave
