#pragma once

#include <string>

#include "hyperwave/adjoint.hpp"

namespace hyperwave {

struct InversionConfig {
    double omega = 0.0;  // step size; 0 selects the power-iteration default
    int max_iterations = 500;
    double noise_level = 0.0;        // delta
    double discrepancy_factor = 1.5; // tau, must be > 1
    double alpha_floor = 1e-6;
    int stall_limit = 10;
    AdjointMethod adjoint_method = AdjointMethod::Discrete;
    AdmissibilityThresholds thresholds{};

    void validate() const {
        if (omega < 0.0) throw ConfigError("inversion: omega must be >= 0");
        if (max_iterations < 0)
            throw ConfigError("inversion: max_iterations must be >= 0");
        if (noise_level < 0.0)
            throw ConfigError("inversion: noise_level must be >= 0");
        if (!(discrepancy_factor > 1.0))
            throw ConfigError("inversion: discrepancy_factor must be > 1");
        if (!(alpha_floor > 0.0))
            throw ConfigError("inversion: alpha_floor must be > 0");
    }
};

struct IterateRecord {
    int iteration = 0;
    Coeffs alpha;
    double residual_v = 0.0;  // ||T(alpha) - u_meas|| in L2(0,T;V)
    double misfit = 0.0;
    double grad_norm = 0.0;
    bool admissible = true;
    bool gap_ok = true;
};

struct IterateTrace {
    std::vector<IterateRecord> records;
    std::string stopping_reason;
    Coeffs best_alpha;
    double best_misfit = 0.0;
    int best_iteration = 0;
};

struct InversionResult {
    Coeffs alpha;
    IterateTrace trace;
};

/// 0.5 * ||T(alpha) - u_meas||^2 in the discrete L2(0,T;V) norm
/// (L2 plus Dirichlet-gradient seminorm, unit weights).
double misfit(const Coeffs& alpha, const SpaceTimeField& u_meas,
              const ProblemSetup& setup);

/// Lift of a residual field into the weight the L2-pairing adjoint expects
/// for V-norm data misfits: w = e - div(J e) per slice.
SpaceTimeField v_dual_weight(const Grid& g, const SpaceTimeField& e);

struct ProjectionResult {
    Coeffs alpha;
    double scale = 1.0;      // applied to restore the kappa lower bounds
    bool mu_feasible = true; // false if scaling broke a mu upper bound
    std::vector<std::string> notes;
};

/// Componentwise clip to [floor, inf), then scale by the smallest factor
/// restoring any violated kappa lower bound. Idempotent.
ProjectionResult project_admissible(const EnergyDictionary& dict, Coeffs alpha,
                                    const AdmissibilityThresholds& thr,
                                    double floor);

/// One projected Landweber update
///   alpha' = project(alpha + omega * T'(alpha)^* (u_meas - T(alpha))).
Coeffs landweber_step(const Coeffs& alpha, const SpaceTimeField& u_meas,
                      const ProblemSetup& setup, const InversionConfig& cfg,
                      double omega);

/// Power-iteration estimate of ||T'(alpha)||^2 (largest eigenvalue of the
/// normal operator under the V pairing); the default step size is
/// 0.9 / estimate.
double operator_norm_sq_estimate(const ProblemSetup& setup,
                                 const SpaceTimeField& u,
                                 const LinearizedCoefficients& A, Rng& rng,
                                 int iterations = 12);

/// Projected Landweber iteration with Morozov discrepancy stopping; returns
/// the best iterate by misfit and the full trace.
InversionResult invert(const SpaceTimeField& u_meas, const Coeffs& alpha0,
                       const ProblemSetup& setup, const InversionConfig& cfg);

}  // namespace hyperwave
