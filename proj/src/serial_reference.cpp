#include "hyperwave/serial_reference.hpp"

#include <array>

namespace hyperwave::serial {

namespace {

struct MultiIndex {
    std::array<int, 3> i{};

    static MultiIndex decode(const Grid& g, std::size_t p) {
        MultiIndex mi;
        for (int a = 0; a < g.d; ++a) {
            mi.i[a] = static_cast<int>(p % g.n);
            p /= g.n;
        }
        return mi;
    }
    bool inside(const Grid& g) const {
        for (int a = 0; a < g.d; ++a)
            if (i[a] < 0 || i[a] >= g.n) return false;
        return true;
    }
    std::size_t encode(const Grid& g) const {
        std::size_t p = 0;
        for (int a = g.d - 1; a >= 0; --a)
            p = p * g.n + static_cast<std::size_t>(i[a]);
        return p;
    }
    MultiIndex offset(int axis, int dir) const {
        MultiIndex mi = *this;
        mi.i[axis] += dir;
        return mi;
    }
};

double sample(const Grid& g, const double* field, const MultiIndex& mi,
              std::size_t comp, std::size_t ncomp) {
    if (!mi.inside(g)) return 0.0;
    return field[mi.encode(g) * ncomp + comp];
}

}  // namespace

void jacobian_dirichlet(const Grid& g, const double* u, double* jac) {
    const double h = g.dx();
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        MultiIndex mi = MultiIndex::decode(g, p);
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j) {
                double up = sample(g, u, mi.offset(j, +1), i, g.d);
                double um = sample(g, u, mi.offset(j, -1), i, g.d);
                jac[(p * g.d + i) * g.d + j] = (up - um) / (2.0 * h);
            }
    }
}

void divergence(const Grid& g, const double* P, double* div) {
    const double h = g.dx();
    const std::size_t d2 = static_cast<std::size_t>(g.d) * g.d;
    for (std::size_t p = 0; p < g.num_points(); ++p) {
        MultiIndex mi = MultiIndex::decode(g, p);
        for (int i = 0; i < g.d; ++i) {
            double s = 0.0;
            for (int j = 0; j < g.d; ++j) {
                double vp = sample(g, P, mi.offset(j, +1),
                                   static_cast<std::size_t>(i) * g.d + j, d2);
                double vm = sample(g, P, mi.offset(j, -1),
                                   static_cast<std::size_t>(i) * g.d + j, d2);
                s += (vp - vm) / (2.0 * h);
            }
            div[p * g.d + i] = s;
        }
    }
}

double inner_product_space(const Grid& g, const double* a, const double* b,
                           std::size_t count) {
    double s = 0.0;
    for (std::size_t q = 0; q < count; ++q) s += a[q] * b[q];
    return s * g.cell_volume();
}

SpaceTimeField residual_stencil(const Grid& g, const MaterialField& mat,
                                const CombinedEnergy& en,
                                const SpaceTimeField& f,
                                const SpaceTimeField& u) {
    u.require_conforms(g);
    f.require_conforms(g);
    const double dt2 = g.dt() * g.dt();
    const double h = g.dx();
    SpaceTimeField r = SpaceTimeField::zeros(g);

    // stress of the current slice, evaluated on demand at a multi-index
    auto stress_at = [&](int k, const MultiIndex& mi) -> Mat {
        if (!mi.inside(g)) return Mat{};
        std::size_t p = mi.encode(g);
        Mat y;
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j) {
                double up = sample(g, u.step(k), mi.offset(j, +1), i, g.d);
                double um = sample(g, u.step(k), mi.offset(j, -1), i, g.d);
                y(i, j) = (up - um) / (2.0 * h);
            }
        return en.stress(g.coord(p), y, g.d);
    };

    for (int k = 1; k < g.m; ++k) {
        for (std::size_t p = 0; p < g.num_points(); ++p) {
            MultiIndex mi = MultiIndex::decode(g, p);
            for (int i = 0; i < g.d; ++i) {
                double acc = mat.rho[p] *
                             (u.at(k + 1, p, i) - 2.0 * u.at(k, p, i) +
                              u.at(k - 1, p, i)) /
                             dt2;
                double divP = 0.0;
                for (int j = 0; j < g.d; ++j) {
                    Mat sp = stress_at(k, mi.offset(j, +1));
                    Mat sm = stress_at(k, mi.offset(j, -1));
                    divP += (sp(i, j) - sm(i, j)) / (2.0 * h);
                }
                r.at(k, p, i) = acc - divP - f.at(k, p, i);
            }
        }
    }
    return r;
}

}  // namespace hyperwave::serial
