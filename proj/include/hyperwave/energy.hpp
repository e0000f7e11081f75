#pragma once

#include <string>
#include <vector>

#include "hyperwave/core.hpp"

namespace hyperwave {

using Coeffs = std::vector<double>;

/// Piecewise-multilinear bump on the unit box: floor plus a product of
/// per-axis tent functions, values in [floor, 1]. floor == 1 gives a
/// uniform weight.
struct SpatialWeight {
    Coord center{0.5, 0.5, 0.5};
    Coord halfwidth{0.5, 0.5, 0.5};
    double floor = 1.0;

    double operator()(const Coord& x, int d) const {
        double bump = 1.0;
        for (int a = 0; a < d; ++a) {
            double s = std::abs(x[a] - center[a]) / halfwidth[a];
            bump *= s < 1.0 ? 1.0 - s : 0.0;
        }
        return floor + (1.0 - floor) * bump;
    }

    static SpatialWeight uniform() { return SpatialWeight{}; }
};

enum class EnergyFamily { Quadratic, BoundedNonlinear };

/// Certified constants: energy and Hessian bounds (kappa = lower,
/// mu[0], mu[1] = upper) plus sup-norms of higher and mixed derivatives
/// (mu[2..7]). Used by admissibility checks and diagnostics only.
struct EntryBounds {
    std::array<double, 2> kappa{};
    std::array<double, 8> mu{};
};

/// One dictionary element: a spatial weight times a matrix-argument energy
/// density. Quadratic family:
///     q(Y) = a |Y|_F^2 + b tr(Y)^2 + c |Y + Y^T|_F^2 / 4,   a > 0, b, c >= 0.
/// BoundedNonlinear adds nl * psi(|Y|_F^2) with the saturating profile
/// psi(r) = r^2 / (1 + r), which vanishes to second order at Y = 0 and has
/// bounded derivatives of every order.
struct EnergyEntry {
    EnergyFamily family = EnergyFamily::Quadratic;
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double nl = 0.0;
    SpatialWeight weight;
    EntryBounds bounds;

    double energy(const Coord& x, const Mat& y, int d) const;
    Mat stress(const Coord& x, const Mat& y, int d) const;
    Tensor4 hessian(const Coord& x, const Mat& y, int d) const;
    /// Third Y-derivative contracted with (h1, h2); bilinear, zero for the
    /// quadratic family.
    Mat third_derivative(const Coord& x, const Mat& y, const Mat& h1,
                         const Mat& h2, int d) const;
};

struct EnergyDictionary {
    std::vector<EnergyEntry> entries;
    int size() const { return static_cast<int>(entries.size()); }
};

/// Conic combination sum_K alpha_K * entry_K. Immutable view; evaluation is
/// linear in alpha.
class CombinedEnergy {
  public:
    CombinedEnergy(const EnergyDictionary& dict, Coeffs alpha);

    double energy(const Coord& x, const Mat& y, int d) const;
    Mat stress(const Coord& x, const Mat& y, int d) const;
    Tensor4 hessian(const Coord& x, const Mat& y, int d) const;
    Mat third_derivative(const Coord& x, const Mat& y, const Mat& h1,
                         const Mat& h2, int d) const;

    const Coeffs& alpha() const { return alpha_; }
    const EnergyDictionary& dictionary() const { return *dict_; }

  private:
    const EnergyDictionary* dict_;
    Coeffs alpha_;
};

inline CombinedEnergy combine(const EnergyDictionary& dict, Coeffs alpha) {
    return CombinedEnergy(dict, std::move(alpha));
}

/// Combined Hessian bounds kappa = sum alpha_K kappa_K[1],
/// mu = sum alpha_K mu_K[1].
struct HessianBounds {
    double kappa = 0.0;
    double mu = 0.0;
};
HessianBounds hessian_bounds(const EnergyDictionary& dict, const Coeffs& alpha);

/// True iff the combined Hessian bounds are nearly tight:
/// 7/8 * mu < kappa < 9/8 * mu. Invariant under positive rescaling of alpha.
bool gap_condition_holds(const EnergyDictionary& dict, const Coeffs& alpha);

struct AdmissibilityThresholds {
    std::array<double, 2> kappa{};  // lower targets, paired with entry kappa[0..1]
    std::array<double, 7> mu{};     // upper targets, paired with entry mu[1..7]
};

struct AdmissibilityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks alpha > 0 componentwise, the two kappa lower bounds and the seven
/// mu upper bounds; every failed inequality is named in the report.
AdmissibilityReport check_admissible(const EnergyDictionary& dict,
                                     const Coeffs& alpha,
                                     const AdmissibilityThresholds& thr);

/// Constants entering the stability estimate for solutions under coefficient
/// perturbations. c_hat depends on an embedding constant and the gap margin
/// eps, neither computable from first principles; defaults are for reporting.
struct StabilityConstants {
    double c_bar = 0.0;
    double c_hat = 0.0;
    double zeta = 0.0;
    double eta = 0.0;
};
StabilityConstants stability_constants(const EnergyDictionary& dict,
                                       const Coeffs& alpha,
                                       double embedding_const = 1.0,
                                       double gap_eps = 0.5);

/// Populates entry.bounds. Quadratic entries get exact energy/Hessian
/// constants; the nonlinear family is certified by dense structured+random
/// sampling with a 1.05 safety factor. Mixed-derivative sups (mu[2..7]) are
/// sampled for both families over x in the unit box and |Y|_F <= ~30.
void certify_bounds(EnergyEntry& entry, int d, Rng& rng, int n_samples = 4000);

void validate_positive(const Coeffs& alpha);

}  // namespace hyperwave
