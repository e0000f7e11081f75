#pragma once

#include "hyperwave/energy.hpp"
#include "hyperwave/grid.hpp"

namespace hyperwave {

/// Everything defining one initial boundary value problem instance.
struct ProblemSetup {
    Grid grid;
    MaterialField material;
    EnergyDictionary dict;
    Coeffs alpha;
    SpaceTimeField force;        // body force, conforming field
    std::vector<double> u0;      // initial displacement slice (npts * d)
    std::vector<double> u1;      // initial velocity slice
    double cfl_safety = 0.5;

    void validate() const;
    CombinedEnergy combined() const { return combine(dict, alpha); }
    ProblemSetup with_alpha(Coeffs a) const {
        ProblemSetup s = *this;
        s.alpha = std::move(a);
        return s;
    }
};

/// dt * sqrt(mu / rho_min) / dx with mu the combined Hessian upper bound.
double cfl_number(const ProblemSetup& setup);

struct SolveReport {
    std::vector<double> kinetic;  // per step
    std::vector<double> strain;   // per step
    std::vector<double> total;    // per step
    double cfl = 0.0;
    RegularitySurrogates regularity;
    double wall_time_s = 0.0;
};

struct ForwardResult {
    SpaceTimeField u;
    SolveReport report;
};

/// Explicit central-difference integration of the nonlinear wave system
///   rho u_tt - div stress_alpha(x, Ju) = f
/// with homogeneous Dirichlet boundary and data (u0, u1). Refuses to run if
/// the CFL bound is violated; aborts with the step index if the state blows
/// up.
ForwardResult solve_forward(const ProblemSetup& setup);

/// Defect of the stencil at interior steps (slices 0 and m are zero).
SpaceTimeField residual(const SpaceTimeField& u, const ProblemSetup& setup);

/// Per-step total energy: 0.5 * integral rho |du/dt|^2 + integral C_alpha(Ju).
/// Time derivatives are centered inside, one-sided at the end steps.
std::vector<double> energy_budget(const SpaceTimeField& u,
                                  const ProblemSetup& setup);

}  // namespace hyperwave
