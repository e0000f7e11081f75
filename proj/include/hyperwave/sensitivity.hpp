#pragma once

#include "hyperwave/forward.hpp"

namespace hyperwave {

/// Frozen linearization coefficients along a base trajectory u: per step and
/// grid point the Hessian tensor of the combined energy at (x, Ju(t,x)),
/// stored so the derivative and adjoint passes reuse identical values.
struct LinearizedCoefficients {
    Grid grid;
    std::vector<double> data;  // (m+1) * npts * d^4

    std::size_t step_stride() const {
        std::size_t d2 = static_cast<std::size_t>(grid.d) * grid.d;
        return grid.num_points() * d2 * d2;
    }
    double* step(int k) { return data.data() + k * step_stride(); }
    const double* step(int k) const { return data.data() + k * step_stride(); }
};

LinearizedCoefficients build_linearization(const ProblemSetup& setup,
                                           const SpaceTimeField& u);

/// Right-hand side of the derivative system: per step the divergence of the
/// direction-weighted stress sum_K h_K stress_K(x, Ju).
SpaceTimeField build_rhs(const ProblemSetup& setup, const Coeffs& h,
                         const SpaceTimeField& u);

/// Jacobian/flux closure used by the frozen-coefficient integrator.
enum class BoundaryClosure {
    DirichletGhost,    // field vanishes on the boundary
    ZeroFluxOneSided,  // one-sided gradients, zero co-normal flux
};

/// Integrates rho z_tt - div(A : J z) = rhs with zero initial data by the
/// same leapfrog stencil as the forward solver. With time_reversed, slice k
/// of A and rhs is read at base index m - k (the caller flips the result).
SpaceTimeField integrate_frozen(const Grid& g, const MaterialField& mat,
                                const LinearizedCoefficients& A,
                                const SpaceTimeField& rhs,
                                BoundaryClosure closure,
                                bool time_reversed = false);

/// Directional derivative of the forward map at alpha in direction h:
/// solves the linearized system with zero initial and boundary data.
SpaceTimeField solve_frechet(const ProblemSetup& setup, const Coeffs& h,
                             const SpaceTimeField& u,
                             const LinearizedCoefficients& A);
SpaceTimeField solve_frechet(const ProblemSetup& setup, const Coeffs& h,
                             const SpaceTimeField& u);

/// Measured continuity constant: max over sampled directions h of
/// ||v||_{L2(0,T;V)} / ||h||_inf.
double continuity_bound_check(const ProblemSetup& setup,
                              const SpaceTimeField& u,
                              const LinearizedCoefficients& A, int trials,
                              Rng& rng);

/// Sampled Rayleigh-quotient range of the stored coefficient tensors.
struct CoercivitySample {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};
CoercivitySample sample_coercivity(const LinearizedCoefficients& A, Rng& rng,
                                   int trials);

/// CFL guard shared by every solver operating under the combined energy.
void require_cfl(const ProblemSetup& setup);

}  // namespace hyperwave
