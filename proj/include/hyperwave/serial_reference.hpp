#pragma once

#include "hyperwave/energy.hpp"
#include "hyperwave/grid.hpp"

namespace hyperwave::serial {

// Plain-loop reference implementations, coded independently of the OpenMP
// kernels (multi-index traversal instead of flat indices). Tests use them as
// a second-implementation oracle; the benchmark uses them as baseline.

void jacobian_dirichlet(const Grid& g, const double* u, double* jac);
void divergence(const Grid& g, const double* P, double* div);
double inner_product_space(const Grid& g, const double* a, const double* b,
                           std::size_t count);

/// Fused defect of the explicit second-order stencil at interior steps
/// k = 1..m-1:  rho (u^{k+1} - 2u^k + u^{k-1})/dt^2 - div stress(Ju^k) - f^k.
/// Slices 0 and m of the result are zero.
SpaceTimeField residual_stencil(const Grid& g, const MaterialField& mat,
                                const CombinedEnergy& en,
                                const SpaceTimeField& f,
                                const SpaceTimeField& u);

}  // namespace hyperwave::serial
