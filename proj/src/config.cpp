#include "hyperwave/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hyperwave/field_io.hpp"

namespace hyperwave {

using nlohmann::json;

namespace {

struct Validator {
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }
    bool require(bool cond, const std::string& path, const std::string& msg) {
        if (!cond) fail(path, msg);
        return cond;
    }

    double number(const json& j, const std::string& path, double fallback,
                  bool required = false) {
        if (!j.contains(last_key(path))) {
            if (required) fail(path, "missing");
            return fallback;
        }
        const json& v = j.at(last_key(path));
        if (!v.is_number()) {
            fail(path, "must be a number");
            return fallback;
        }
        return v.get<double>();
    }

    static std::string last_key(const std::string& path) {
        auto pos = path.find_last_of('.');
        return pos == std::string::npos ? path : path.substr(pos + 1);
    }
};

Coord parse_coord(Validator& v, const json& j, const std::string& path, int d,
                  Coord fallback) {
    if (!j.is_array()) {
        v.fail(path, "must be an array");
        return fallback;
    }
    if (static_cast<int>(j.size()) != d) {
        v.fail(path, "must have length d = " + std::to_string(d));
        return fallback;
    }
    Coord out = fallback;
    for (int a = 0; a < d; ++a) {
        if (!j[a].is_number()) {
            v.fail(path, "entries must be numbers");
            return fallback;
        }
        out[a] = j[a].get<double>();
    }
    return out;
}

std::vector<double> parse_vector(Validator& v, const json& j,
                                 const std::string& path) {
    std::vector<double> out;
    if (!j.is_array()) {
        v.fail(path, "must be an array");
        return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            v.fail(path + "[" + std::to_string(i) + "]", "must be a number");
            return {};
        }
        out.push_back(j[i].get<double>());
    }
    return out;
}

void parse_initial(Validator& v, const json& parent, const std::string& key,
                   const std::string& path, int d, InitialSpec& spec,
                   const std::string& base_dir) {
    if (!parent.contains(key)) return;
    const json& j = parent.at(key);
    if (!j.is_object()) {
        v.fail(path, "must be an object");
        return;
    }
    if (j.contains("file")) {
        spec.kind = InitialSpec::Kind::File;
        spec.file = j.at("file").get<std::string>();
        std::filesystem::path p(spec.file);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        spec.file = p.string();
        v.require(std::filesystem::exists(p), path + ".file",
                  "referenced file does not exist: " + spec.file);
        return;
    }
    std::string preset = j.value("preset", "zero");
    if (preset == "zero") {
        spec.kind = InitialSpec::Kind::Zero;
    } else if (preset == "sine") {
        spec.kind = InitialSpec::Kind::Sine;
    } else if (preset == "bump") {
        spec.kind = InitialSpec::Kind::Bump;
    } else {
        v.fail(path + ".preset", "unknown preset '" + preset + "'");
        return;
    }
    if (j.contains("amplitude")) {
        auto amp = parse_vector(v, j.at("amplitude"), path + ".amplitude");
        if (static_cast<int>(amp.size()) != d)
            v.fail(path + ".amplitude", "must have length d");
        else
            for (int c = 0; c < d; ++c) spec.amplitude[c] = amp[c];
    }
    if (j.contains("center"))
        spec.center = parse_coord(v, j.at("center"), path + ".center", d,
                                  spec.center);
    if (j.contains("width")) {
        spec.width =
            parse_coord(v, j.at("width"), path + ".width", d, spec.width);
        for (int a = 0; a < d; ++a)
            v.require(spec.width[a] > 0.0, path + ".width", "must be positive");
    }
}

void parse_force(Validator& v, const json& root, int d, ForceSpec& spec,
                 const std::string& base_dir) {
    if (!root.contains("force")) return;
    const json& j = root.at("force");
    if (!j.is_object()) {
        v.fail("force", "must be an object");
        return;
    }
    if (j.contains("file")) {
        spec.kind = ForceSpec::Kind::File;
        spec.file = j.at("file").get<std::string>();
        std::filesystem::path p(spec.file);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        spec.file = p.string();
        v.require(std::filesystem::exists(p), "force.file",
                  "referenced file does not exist: " + spec.file);
        return;
    }
    std::string preset = j.value("preset", "zero");
    if (preset == "zero") {
        spec.kind = ForceSpec::Kind::Zero;
        return;
    }
    if (preset != "pulse") {
        v.fail("force.preset", "unknown preset '" + preset + "'");
        return;
    }
    spec.kind = ForceSpec::Kind::Pulse;
    if (j.contains("amplitude")) {
        auto amp = parse_vector(v, j.at("amplitude"), "force.amplitude");
        if (static_cast<int>(amp.size()) != d)
            v.fail("force.amplitude", "must have length d");
        else
            for (int c = 0; c < d; ++c) spec.amplitude[c] = amp[c];
    }
    if (j.contains("center"))
        spec.center =
            parse_coord(v, j.at("center"), "force.center", d, spec.center);
    if (j.contains("width")) {
        spec.width =
            parse_coord(v, j.at("width"), "force.width", d, spec.width);
        for (int a = 0; a < d; ++a)
            v.require(spec.width[a] > 0.0, "force.width", "must be positive");
    }
    spec.t0 = v.number(j, "force.t0", spec.t0);
    spec.sigma_t = v.number(j, "force.sigma_t", spec.sigma_t);
    v.require(spec.sigma_t > 0.0, "force.sigma_t", "must be positive");
}

}  // namespace

ExperimentConfig parse_config(const json& root, const std::string& base_dir) {
    Validator v;
    ExperimentConfig c;
    if (!root.is_object()) throw ConfigError("config root must be an object");

    // grid
    if (v.require(root.contains("grid"), "grid", "missing")) {
        const json& g = root.at("grid");
        c.grid.d = static_cast<int>(v.number(g, "grid.d", 1, true));
        c.grid.n = static_cast<int>(v.number(g, "grid.n", 2, true));
        c.grid.m = static_cast<int>(v.number(g, "grid.m", 2, true));
        c.grid.T = v.number(g, "grid.T", 1.0, true);
        v.require(c.grid.d >= 1 && c.grid.d <= kMaxDim, "grid.d",
                  "must be 1, 2 or 3");
        v.require(c.grid.n >= 2, "grid.n", "must be >= 2");
        v.require(c.grid.m >= 2, "grid.m", "must be >= 2");
        v.require(c.grid.T > 0.0, "grid.T", "must be positive");
    }
    int d = std::clamp(c.grid.d, 1, kMaxDim);

    // material
    if (root.contains("material")) {
        const json& m = root.at("material");
        if (m.contains("rho") && m.at("rho").is_object()) {
            const json& r = m.at("rho");
            c.rho_base = v.number(r, "material.rho.base", 1.0, true);
            if (r.contains("ramp"))
                c.rho_ramp = parse_coord(v, r.at("ramp"), "material.rho.ramp",
                                         d, c.rho_ramp);
        } else {
            c.rho_base = v.number(m, "material.rho", 1.0, true);
        }
        double corner = c.rho_base;
        for (int a = 0; a < d; ++a) corner += std::min(0.0, c.rho_ramp[a]);
        v.require(corner > 0.0, "material.rho",
                  "density must stay positive over the unit box");
    }

    // dictionary
    if (v.require(root.contains("dictionary") &&
                      root.at("dictionary").is_array() &&
                      !root.at("dictionary").empty(),
                  "dictionary", "must be a non-empty array")) {
        const json& dict = root.at("dictionary");
        for (std::size_t k = 0; k < dict.size(); ++k) {
            std::string path = "dictionary[" + std::to_string(k) + "]";
            const json& e = dict[k];
            EntrySpec spec;
            std::string family = e.value("family", "quadratic");
            if (family == "quadratic") {
                spec.family = EnergyFamily::Quadratic;
            } else if (family == "bounded_nonlinear") {
                spec.family = EnergyFamily::BoundedNonlinear;
            } else {
                v.fail(path + ".family", "unknown family '" + family + "'");
            }
            spec.a = v.number(e, path + ".a", 1.0);
            spec.b = v.number(e, path + ".b", 0.0);
            spec.c = v.number(e, path + ".c", 0.0);
            spec.nl = v.number(e, path + ".nl", 0.0);
            v.require(spec.a > 0.0, path + ".a", "must be positive");
            v.require(spec.b >= 0.0, path + ".b", "must be >= 0");
            v.require(spec.c >= 0.0, path + ".c", "must be >= 0");
            v.require(spec.nl >= 0.0, path + ".nl", "must be >= 0");
            if (spec.family == EnergyFamily::Quadratic)
                v.require(spec.nl == 0.0, path + ".nl",
                          "quadratic entries must have nl = 0");
            if (e.contains("weight")) {
                const json& w = e.at("weight");
                spec.weight.floor = v.number(w, path + ".weight.floor", 1.0);
                v.require(spec.weight.floor > 0.0 && spec.weight.floor <= 1.0,
                          path + ".weight.floor", "must lie in (0, 1]");
                if (w.contains("center"))
                    spec.weight.center =
                        parse_coord(v, w.at("center"), path + ".weight.center",
                                    d, spec.weight.center);
                if (w.contains("halfwidth")) {
                    spec.weight.halfwidth = parse_coord(
                        v, w.at("halfwidth"), path + ".weight.halfwidth", d,
                        spec.weight.halfwidth);
                    for (int a = 0; a < d; ++a)
                        v.require(spec.weight.halfwidth[a] > 0.0,
                                  path + ".weight.halfwidth",
                                  "must be positive");
                }
            }
            if (e.contains("bounds")) {
                const json& b = e.at("bounds");
                auto kap = parse_vector(v, b.at("kappa"), path + ".bounds.kappa");
                auto mu = parse_vector(v, b.at("mu"), path + ".bounds.mu");
                if (kap.size() != 2)
                    v.fail(path + ".bounds.kappa", "must have length 2");
                if (mu.size() != 8)
                    v.fail(path + ".bounds.mu", "must have length 8");
                if (kap.size() == 2 && mu.size() == 8) {
                    spec.has_bounds = true;
                    for (int i = 0; i < 2; ++i) {
                        spec.bounds.kappa[i] = kap[i];
                        v.require(kap[i] >= 0.0, path + ".bounds.kappa",
                                  "must be >= 0");
                    }
                    for (int i = 0; i < 8; ++i) {
                        spec.bounds.mu[i] = mu[i];
                        v.require(mu[i] >= 0.0, path + ".bounds.mu",
                                  "must be >= 0");
                    }
                }
            }
            c.dictionary.push_back(spec);
        }
    }

    // coefficients
    if (v.require(root.contains("alpha"), "alpha", "missing")) {
        c.alpha = parse_vector(v, root.at("alpha"), "alpha");
        if (c.alpha.size() != c.dictionary.size())
            v.fail("alpha", "length must match dictionary size");
        for (std::size_t k = 0; k < c.alpha.size(); ++k)
            v.require(c.alpha[k] > 0.0, "alpha[" + std::to_string(k) + "]",
                      "must be positive");
    }
    if (root.contains("alpha0")) {
        c.alpha0 = parse_vector(v, root.at("alpha0"), "alpha0");
        if (c.alpha0.size() != c.dictionary.size())
            v.fail("alpha0", "length must match dictionary size");
        for (std::size_t k = 0; k < c.alpha0.size(); ++k)
            v.require(c.alpha0[k] > 0.0, "alpha0[" + std::to_string(k) + "]",
                      "must be positive");
    } else {
        c.alpha0 = c.alpha;
    }

    // thresholds (vacuous defaults)
    c.thresholds.kappa = {0.0, 0.0};
    c.thresholds.mu.fill(1e12);
    if (root.contains("thresholds")) {
        const json& t = root.at("thresholds");
        if (t.contains("kappa")) {
            auto kap = parse_vector(v, t.at("kappa"), "thresholds.kappa");
            if (kap.size() != 2)
                v.fail("thresholds.kappa", "must have length 2");
            else
                for (int i = 0; i < 2; ++i) c.thresholds.kappa[i] = kap[i];
        }
        if (t.contains("mu")) {
            auto mu = parse_vector(v, t.at("mu"), "thresholds.mu");
            if (mu.size() != 7)
                v.fail("thresholds.mu", "must have length 7");
            else
                for (int i = 0; i < 7; ++i) c.thresholds.mu[i] = mu[i];
        }
    }

    if (root.contains("initial")) {
        parse_initial(v, root.at("initial"), "u0", "initial.u0", d, c.u0,
                      base_dir);
        parse_initial(v, root.at("initial"), "u1", "initial.u1", d, c.u1,
                      base_dir);
    }
    parse_force(v, root, d, c.force, base_dir);

    if (root.contains("solver")) {
        c.cfl_safety =
            v.number(root.at("solver"), "solver.cfl_safety", c.cfl_safety);
        v.require(c.cfl_safety > 0.0, "solver.cfl_safety", "must be positive");
    }

    if (root.contains("inversion")) {
        const json& i = root.at("inversion");
        c.inversion.omega = v.number(i, "inversion.omega", 0.0);
        c.inversion.max_iterations = static_cast<int>(
            v.number(i, "inversion.max_iterations", 500));
        c.inversion.noise_level = v.number(i, "inversion.noise_level", 0.0);
        c.inversion.discrepancy_factor =
            v.number(i, "inversion.discrepancy_factor", 1.5);
        c.inversion.alpha_floor = v.number(i, "inversion.alpha_floor", 1e-6);
        c.inversion.stall_limit =
            static_cast<int>(v.number(i, "inversion.stall_limit", 10));
        std::string adj = i.value("adjoint", "discrete");
        if (adj == "discrete")
            c.inversion.adjoint_method = AdjointMethod::Discrete;
        else if (adj == "continuous")
            c.inversion.adjoint_method = AdjointMethod::Continuous;
        else
            v.fail("inversion.adjoint", "must be 'discrete' or 'continuous'");
        v.require(c.inversion.omega >= 0.0, "inversion.omega", "must be >= 0");
        v.require(c.inversion.max_iterations >= 0, "inversion.max_iterations",
                  "must be >= 0");
        v.require(c.inversion.noise_level >= 0.0, "inversion.noise_level",
                  "must be >= 0");
        v.require(c.inversion.discrepancy_factor > 1.0,
                  "inversion.discrepancy_factor", "must be > 1");
        v.require(c.inversion.alpha_floor > 0.0, "inversion.alpha_floor",
                  "must be positive");
        v.require(c.inversion.stall_limit >= 1, "inversion.stall_limit",
                  "must be >= 1");
    }
    c.inversion.thresholds = c.thresholds;

    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned())
            v.fail("seed", "must be a non-negative integer");
        else
            c.seed = root.at("seed").get<std::uint64_t>();
    }

    if (!v.errors.empty()) {
        std::string msg = "configuration invalid:";
        for (const std::string& e : v.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return parse_config(j,
                        std::filesystem::path(path).parent_path().string());
}

namespace {

json coord_json(const Coord& c, int d) {
    json a = json::array();
    for (int i = 0; i < d; ++i) a.push_back(c[i]);
    return a;
}

json initial_json(const InitialSpec& s, int d) {
    json j;
    switch (s.kind) {
        case InitialSpec::Kind::Zero:
            j["preset"] = "zero";
            break;
        case InitialSpec::Kind::Sine: {
            j["preset"] = "sine";
            json amp = json::array();
            for (int c = 0; c < d; ++c) amp.push_back(s.amplitude[c]);
            j["amplitude"] = amp;
            break;
        }
        case InitialSpec::Kind::Bump: {
            j["preset"] = "bump";
            json amp = json::array();
            for (int c = 0; c < d; ++c) amp.push_back(s.amplitude[c]);
            j["amplitude"] = amp;
            j["center"] = coord_json(s.center, d);
            j["width"] = coord_json(s.width, d);
            break;
        }
        case InitialSpec::Kind::File:
            j["file"] = s.file;
            break;
    }
    return j;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
    json j;
    j["grid"] = {{"d", c.grid.d}, {"n", c.grid.n}, {"m", c.grid.m},
                 {"T", c.grid.T}};
    bool ramped = false;
    for (int a = 0; a < c.grid.d; ++a) ramped |= c.rho_ramp[a] != 0.0;
    if (ramped)
        j["material"] = {{"rho", {{"base", c.rho_base},
                                  {"ramp", coord_json(c.rho_ramp, c.grid.d)}}}};
    else
        j["material"] = {{"rho", c.rho_base}};

    json dict = json::array();
    for (const EntrySpec& e : c.dictionary) {
        json je;
        je["family"] = e.family == EnergyFamily::Quadratic
                           ? "quadratic"
                           : "bounded_nonlinear";
        je["a"] = e.a;
        je["b"] = e.b;
        je["c"] = e.c;
        if (e.family == EnergyFamily::BoundedNonlinear) je["nl"] = e.nl;
        je["weight"] = {{"floor", e.weight.floor},
                        {"center", coord_json(e.weight.center, c.grid.d)},
                        {"halfwidth", coord_json(e.weight.halfwidth, c.grid.d)}};
        if (e.has_bounds) {
            je["bounds"] = {
                {"kappa", {e.bounds.kappa[0], e.bounds.kappa[1]}},
                {"mu", json::array()}};
            for (double m : e.bounds.mu) je["bounds"]["mu"].push_back(m);
        }
        dict.push_back(je);
    }
    j["dictionary"] = dict;
    j["alpha"] = c.alpha;
    j["alpha0"] = c.alpha0;
    j["thresholds"] = {{"kappa", {c.thresholds.kappa[0], c.thresholds.kappa[1]}},
                       {"mu", json::array()}};
    for (double m : c.thresholds.mu) j["thresholds"]["mu"].push_back(m);
    j["initial"] = {{"u0", initial_json(c.u0, c.grid.d)},
                    {"u1", initial_json(c.u1, c.grid.d)}};
    switch (c.force.kind) {
        case ForceSpec::Kind::Zero:
            j["force"] = {{"preset", "zero"}};
            break;
        case ForceSpec::Kind::Pulse: {
            json amp = json::array();
            for (int cc = 0; cc < c.grid.d; ++cc)
                amp.push_back(c.force.amplitude[cc]);
            j["force"] = {{"preset", "pulse"},
                          {"amplitude", amp},
                          {"center", coord_json(c.force.center, c.grid.d)},
                          {"width", coord_json(c.force.width, c.grid.d)},
                          {"t0", c.force.t0},
                          {"sigma_t", c.force.sigma_t}};
            break;
        }
        case ForceSpec::Kind::File:
            j["force"] = {{"file", c.force.file}};
            break;
    }
    j["solver"] = {{"cfl_safety", c.cfl_safety}};
    j["inversion"] = {
        {"omega", c.inversion.omega},
        {"max_iterations", c.inversion.max_iterations},
        {"noise_level", c.inversion.noise_level},
        {"discrepancy_factor", c.inversion.discrepancy_factor},
        {"alpha_floor", c.inversion.alpha_floor},
        {"stall_limit", c.inversion.stall_limit},
        {"adjoint", c.inversion.adjoint_method == AdjointMethod::Discrete
                        ? "discrete"
                        : "continuous"}};
    j["seed"] = c.seed;
    return j;
}

void save_config(const std::string& path, const ExperimentConfig& c) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << to_json(c).dump(2) << '\n';
}

namespace {

std::vector<double> build_initial_slice(const Grid& g, const InitialSpec& s) {
    std::vector<double> slice(g.num_points() * g.d, 0.0);
    switch (s.kind) {
        case InitialSpec::Kind::Zero:
            break;
        case InitialSpec::Kind::Sine:
            for (std::size_t p = 0; p < g.num_points(); ++p) {
                Coord x = g.coord(p);
                double shape = 1.0;
                for (int a = 0; a < g.d; ++a)
                    shape *= std::sin(3.141592653589793 * x[a]);
                for (int c = 0; c < g.d; ++c)
                    slice[p * g.d + c] = s.amplitude[c] * shape;
            }
            break;
        case InitialSpec::Kind::Bump:
            for (std::size_t p = 0; p < g.num_points(); ++p) {
                Coord x = g.coord(p);
                double shape = 1.0;
                for (int a = 0; a < g.d; ++a) {
                    double z = (x[a] - s.center[a]) / s.width[a];
                    shape *= std::exp(-0.5 * z * z);
                }
                for (int c = 0; c < g.d; ++c)
                    slice[p * g.d + c] = s.amplitude[c] * shape;
            }
            break;
        case InitialSpec::Kind::File: {
            SpaceTimeField f = load_field(s.file);
            if (f.d != g.d || f.n != g.n)
                throw ConfigError("initial-data file '" + s.file +
                                  "' does not match the grid");
            std::copy(f.step(0), f.step(0) + f.step_size(), slice.begin());
            break;
        }
    }
    return slice;
}

SpaceTimeField build_force(const Grid& g, const ForceSpec& s) {
    if (s.kind == ForceSpec::Kind::File) return load_field(s.file, g);
    SpaceTimeField f = SpaceTimeField::zeros(g);
    if (s.kind == ForceSpec::Kind::Zero) return f;
    for (int k = 0; k <= g.m; ++k) {
        double t = k * g.dt();
        double zt = (t - s.t0) / s.sigma_t;
        double envelope = std::exp(-0.5 * zt * zt);
        for (std::size_t p = 0; p < g.num_points(); ++p) {
            Coord x = g.coord(p);
            double shape = envelope;
            for (int a = 0; a < g.d; ++a) {
                double z = (x[a] - s.center[a]) / s.width[a];
                shape *= std::exp(-0.5 * z * z);
            }
            for (int c = 0; c < g.d; ++c)
                f.at(k, p, c) = s.amplitude[c] * shape;
        }
    }
    return f;
}

}  // namespace

ProblemSetup make_setup(const ExperimentConfig& c) {
    ProblemSetup s;
    s.grid = c.grid;
    s.grid.validate();
    s.material.rho.resize(s.grid.num_points());
    for (std::size_t p = 0; p < s.grid.num_points(); ++p) {
        Coord x = s.grid.coord(p);
        double r = c.rho_base;
        for (int a = 0; a < s.grid.d; ++a) r += c.rho_ramp[a] * x[a];
        s.material.rho[p] = r;
    }
    for (std::size_t k = 0; k < c.dictionary.size(); ++k) {
        const EntrySpec& spec = c.dictionary[k];
        EnergyEntry e;
        e.family = spec.family;
        e.a = spec.a;
        e.b = spec.b;
        e.c = spec.c;
        e.nl = spec.nl;
        e.weight = spec.weight;
        if (spec.has_bounds) {
            e.bounds = spec.bounds;
        } else {
            Rng rng(c.seed ^ (0x517cc1b727220a95ull + k));
            certify_bounds(e, s.grid.d, rng);
        }
        s.dict.entries.push_back(e);
    }
    s.alpha = c.alpha;
    s.force = build_force(s.grid, c.force);
    s.u0 = build_initial_slice(s.grid, c.u0);
    s.u1 = build_initial_slice(s.grid, c.u1);
    s.cfl_safety = c.cfl_safety;
    s.validate();
    return s;
}

}  // namespace hyperwave
