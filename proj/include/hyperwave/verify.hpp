#pragma once

#include "hyperwave/adjoint.hpp"

namespace hyperwave {

struct TaylorRow {
    double s = 0.0;
    double remainder = 0.0;  // ||T(a+s h) - T(a) - s T'(a)h|| in L2(0,T;V)
    bool ok = false;
    std::string failure;
};

struct TaylorResult {
    std::vector<TaylorRow> table;
    double slope = 0.0;       // least-squares slope of log r vs log s
    double base_norm = 0.0;   // ||T(alpha)|| for relative comparisons
    bool complete = true;
};

/// Sweep of the Taylor remainder of the forward map along direction h.
TaylorResult taylor_order_test(
    const ProblemSetup& setup, const Coeffs& h,
    const std::vector<double>& s_list = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});

/// Max over seeded random (h, w) pairs of the normalized duality mismatch
///   |<T'(a)h, w> - <h, T'(a)^* w>| / (|v||w| + |h||g|).
double adjoint_certificate(const ProblemSetup& setup, AdjointMethod method,
                           int trials, Rng& rng);

struct LipschitzRow {
    int direction = 0;
    double eps = 0.0;
    double ratio = 0.0;  // sup_t energy_norm(u - u_bar)^(1/2) / ||da||_inf
};

/// Solution-stability ratios under coefficient perturbations
/// alpha -> alpha + eps * dir; both coefficient vectors must satisfy the
/// bound-gap condition.
std::vector<LipschitzRow> lipschitz_alpha_test(
    const ProblemSetup& setup, const std::vector<Coeffs>& directions,
    const std::vector<double>& eps_list = {1e-1, 1e-2, 1e-3, 1e-4});

/// Gronwall-type envelope
///   (exp(b tau / 2) sqrt(a) + k/b (exp(b tau / 2) - 1))^2,
/// with the b -> 0 limit (sqrt(a) + k tau / 2)^2 used when b == 0.
double gronwall_envelope(double a, double b, double k, double tau);
std::vector<double> gronwall_envelope(double a, double b, double k,
                                      const std::vector<double>& tau_grid);

/// Per-step squared energy: integral rho |du/dt|^2 + kappa(alpha) |Ju|_F^2
/// with kappa(alpha) the combined Hessian lower bound.
std::vector<double> energy_norm(const SpaceTimeField& u_like,
                                const ProblemSetup& setup);

/// Least-squares slope of log(y) against log(x); rows with y <= 0 are
/// floored at 1e-300.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hyperwave
