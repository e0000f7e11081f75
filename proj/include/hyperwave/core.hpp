#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyperwave {

inline constexpr int kMaxDim = 3;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input shape or mismatched dimensions.
struct ShapeError : Error {
    using Error::Error;
};

/// Time-stepping refused (CFL) or aborted (non-finite state).
struct SolverError : Error {
    using Error::Error;
};

/// Invalid or inconsistent experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Dense d x d matrix with d <= 3; unused slots stay zero, so Frobenius
/// sums over the full 3x3 block are safe regardless of the active dimension.
struct Mat {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    static Mat identity(int d) {
        Mat out;
        for (int i = 0; i < d; ++i) out(i, i) = 1.0;
        return out;
    }

    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
    Mat& operator*=(double s) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] *= s;
        return *this;
    }
    friend Mat operator*(double s, Mat a) { return a *= s; }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a.m[i][j] -= b.m[i][j];
        return a;
    }

    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }

    double frob_sq() const {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += m[i][j] * m[i][j];
        return s;
    }

    bool finite() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!std::isfinite(m[i][j])) return false;
        return true;
    }
};

/// tr(A^T B), the inner product inducing the Frobenius norm.
inline double ddot(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a.m[i][j] * b.m[i][j];
    return s;
}

inline Mat sym_part(const Mat& y) {
    Mat s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = 0.5 * (y(i, j) + y(j, i));
    return s;
}

/// Rank-4 tensor on d x d matrices (d <= 3), indexed (i,j,k,l).
struct Tensor4 {
    std::array<double, 81> t{};

    double& operator()(int i, int j, int k, int l) {
        return t[((i * 3 + j) * 3 + k) * 3 + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return t[((i * 3 + j) * 3 + k) * 3 + l];
    }

    Tensor4& operator+=(const Tensor4& o) {
        for (std::size_t q = 0; q < t.size(); ++q) t[q] += o.t[q];
        return *this;
    }
    Tensor4& operator*=(double s) {
        for (double& v : t) v *= s;
        return *this;
    }

    /// Contraction over the trailing index pair: out_ij = sum_kl T_ijkl H_kl.
    Mat contract(const Mat& h, int d) const {
        Mat out;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) s += (*this)(i, j, k, l) * h(k, l);
                out(i, j) = s;
            }
        return out;
    }
};

/// Spatial coordinate; entries beyond the active dimension are zero.
using Coord = std::array<double, 3>;

// --- deterministic random sampling ------------------------------------------
// splitmix64-based generator; chosen over <random> distributions so that
// sampled values are identical across standard libraries and platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (deterministic across platforms).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Mat random_mat(int d, double scale = 1.0) {
        Mat y;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) y(i, j) = scale * (2.0 * uniform() - 1.0);
        return y;
    }
};

}  // namespace hyperwave
