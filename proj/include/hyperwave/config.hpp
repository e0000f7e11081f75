#pragma once

#include <string>

#include <json.hpp>

#include "hyperwave/forward.hpp"
#include "hyperwave/inversion.hpp"

namespace hyperwave {

/// Analytic preset or file reference for initial data slices.
struct InitialSpec {
    enum class Kind { Zero, Sine, Bump, File };
    Kind kind = Kind::Zero;
    std::array<double, 3> amplitude{};
    Coord center{0.5, 0.5, 0.5};
    Coord width{0.1, 0.1, 0.1};
    std::string file;
};

/// Body-force description: zero, a separable Gaussian pulse, or a field file.
struct ForceSpec {
    enum class Kind { Zero, Pulse, File };
    Kind kind = Kind::Zero;
    std::array<double, 3> amplitude{};
    Coord center{0.5, 0.5, 0.5};
    Coord width{0.1, 0.1, 0.1};
    double t0 = 0.0;
    double sigma_t = 0.1;
    std::string file;
};

struct EntrySpec {
    EnergyFamily family = EnergyFamily::Quadratic;
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double nl = 0.0;
    SpatialWeight weight;
    bool has_bounds = false;
    EntryBounds bounds;
};

/// One experiment = one config file; CLI flags only select the command and
/// override paths.
struct ExperimentConfig {
    Grid grid;
    double rho_base = 1.0;
    Coord rho_ramp{};  // rho(x) = rho_base + ramp . x
    std::vector<EntrySpec> dictionary;
    Coeffs alpha;
    Coeffs alpha0;
    AdmissibilityThresholds thresholds{};
    InitialSpec u0;
    InitialSpec u1;
    ForceSpec force;
    double cfl_safety = 0.5;
    InversionConfig inversion;
    std::uint64_t seed = 0;
};

/// Parses and validates; on any violation throws ConfigError whose message
/// lists every problem with a path-like locator, not just the first.
ExperimentConfig parse_config(const nlohmann::json& j,
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& c);
void save_config(const std::string& path, const ExperimentConfig& c);

/// Materializes grid, density, dictionary (certifying bounds where none are
/// given), initial data and force field. CFL is deliberately not checked
/// here; solvers refuse on their own.
ProblemSetup make_setup(const ExperimentConfig& c);

}  // namespace hyperwave
