#pragma once

#include "hyperwave/sensitivity.hpp"

namespace hyperwave {

enum class AdjointMethod { Discrete, Continuous };

/// Backward-in-time solve of
///   rho p_tt - div(A : J p) = w,  p(T) = p_t(T) = 0,
/// with zero co-normal flux (A : Jp) . nu = 0 imposed by one-sided gradients
/// and zero flux extension. Integrated forward in reversed time s = T - t by
/// the shared leapfrog machinery; the returned field is indexed in base time.
SpaceTimeField solve_backward(const ProblemSetup& setup,
                              const LinearizedCoefficients& A,
                              const SpaceTimeField& w);

/// Exact transpose of the discrete map h -> solve_frechet(h) under the
/// trapezoidal space-time inner product: for every h and w,
///   <solve_frechet(h), w>_spacetime == <h, g>  to rounding.
Coeffs apply_adjoint_discrete(const ProblemSetup& setup,
                              const SpaceTimeField& u,
                              const LinearizedCoefficients& A,
                              const SpaceTimeField& w);

/// Gradient components via the backward solve:
///   g_K = - integral << stress_K(x, Ju), J p >>  over space-time.
Coeffs apply_adjoint_continuous(const ProblemSetup& setup,
                                const SpaceTimeField& u,
                                const LinearizedCoefficients& A,
                                const SpaceTimeField& w);

Coeffs apply_adjoint(AdjointMethod method, const ProblemSetup& setup,
                     const SpaceTimeField& u, const LinearizedCoefficients& A,
                     const SpaceTimeField& w);

}  // namespace hyperwave
