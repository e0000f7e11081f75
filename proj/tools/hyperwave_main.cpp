// hyperwave: forward solves, derivative/adjoint evaluation, coefficient
// inversion and verification suites for the dictionary-expanded hyperelastic
// wave model. One experiment = one config file; flags select the command and
// override paths.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hyperwave/config.hpp"
#include "hyperwave/field_io.hpp"
#include "hyperwave/kernels.hpp"
#include "hyperwave/report.hpp"
#include "hyperwave/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hw = hyperwave;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitGate = 4;

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("HYPERWAVE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) omp_set_num_threads(std::min(n, omp_get_max_threads()));
    }
#endif
}

json forward_report_json(const hw::SolveReport& rep) {
    double emin = rep.total.empty() ? 0.0 : rep.total[0];
    double emax = emin;
    for (double e : rep.total) {
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    return json{{"cfl", rep.cfl},
                {"steps", rep.total.empty() ? 0 : rep.total.size() - 1},
                {"energy_initial", rep.total.empty() ? 0.0 : rep.total.front()},
                {"energy_final", rep.total.empty() ? 0.0 : rep.total.back()},
                {"energy_drift",
                 emax > 0.0 ? (emax - emin) / emax : 0.0},
                {"regularity",
                 {{"m0", rep.regularity.m0},
                  {"m1", rep.regularity.m1},
                  {"m2", rep.regularity.m2},
                  {"m3", rep.regularity.m3}}},
                {"wall_time_s", rep.wall_time_s}};
}

hw::Coeffs parse_direction(const std::string& text, std::size_t expected) {
    hw::Coeffs h;
    std::string token;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!token.empty()) h.push_back(std::stod(token));
            token.clear();
        } else {
            token += ch;
        }
    }
    if (h.size() != expected)
        throw hw::ConfigError("--h needs " + std::to_string(expected) +
                              " comma-separated components");
    return h;
}

int run_verify(const hw::ExperimentConfig& cfg, const std::string& suite,
               const std::string& report_dir, bool plots) {
    std::filesystem::create_directories(report_dir);
    hw::ProblemSetup setup = hw::make_setup(cfg);
    bool nonlinear = false;
    for (const auto& e : setup.dict.entries)
        nonlinear |= e.family == hw::EnergyFamily::BoundedNonlinear;
    bool all = suite == "all";
    bool gate_failed = false;

    if (all || suite == "adjoint") {
        hw::Rng rng(cfg.seed + 1);
        double disc = hw::adjoint_certificate(setup, hw::AdjointMethod::Discrete,
                                              20, rng);
        hw::Rng rng2(cfg.seed + 2);
        double cont = hw::adjoint_certificate(
            setup, hw::AdjointMethod::Continuous, 5, rng2);
        hw::CsvTable t{{"trial_set", "max_mismatch"}, {{0, disc}, {1, cont}}};
        hw::write_csv(report_dir + "/adjoint.csv", t);
        bool ok = disc <= 1e-10;
        gate_failed |= !ok;
        std::cout << (ok ? "[PASS]" : "[FAIL]")
                  << " adjoint: discrete duality mismatch " << disc
                  << " (gate 1e-10); continuous " << cont << " (reported)\n";
    }

    if (all || suite == "taylor") {
        hw::Coeffs h(setup.alpha.size());
        hw::Rng rng(cfg.seed + 3);
        for (double& x : h) x = rng.uniform(0.5, 1.0);
        hw::TaylorResult tr = hw::taylor_order_test(setup, h);
        hw::CsvTable t{{"s", "remainder"}, {}};
        std::vector<double> xs, ys;
        for (const auto& row : tr.table)
            if (row.ok) {
                t.rows.push_back({row.s, row.remainder});
                xs.push_back(row.s);
                ys.push_back(row.remainder);
            }
        hw::write_csv(report_dir + "/taylor.csv", t);
        if (plots && xs.size() >= 2)
            hw::write_svg_plot(report_dir + "/taylor.svg", xs, ys, true,
                               "Taylor remainder");
        if (nonlinear) {
            bool ok = tr.slope >= 1.4;
            gate_failed |= !ok;
            std::cout << (ok ? "[PASS]" : "[FAIL]")
                      << " taylor: remainder slope " << tr.slope
                      << " (gate >= 1.4)\n";
        } else {
            std::cout << "[INFO] taylor: quadratic dictionary, slope "
                      << tr.slope << ", max relative remainder "
                      << (tr.base_norm > 0 && !ys.empty()
                              ? *std::max_element(ys.begin(), ys.end()) /
                                    tr.base_norm
                              : 0.0)
                      << " (reported)\n";
        }
    }

    if (all || suite == "lipschitz") {
        std::vector<hw::Coeffs> dirs;
        hw::Coeffs prop = setup.alpha;  // proportional move keeps the gap
        dirs.push_back(prop);
        auto rows = hw::lipschitz_alpha_test(setup, dirs);
        hw::CsvTable t{{"direction", "eps", "ratio"}, {}};
        double rmin = 0.0, rmax = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            t.rows.push_back(
                {double(rows[i].direction), rows[i].eps, rows[i].ratio});
            if (i == 0) rmin = rmax = rows[i].ratio;
            rmin = std::min(rmin, rows[i].ratio);
            rmax = std::max(rmax, rows[i].ratio);
        }
        hw::write_csv(report_dir + "/lipschitz.csv", t);
        double spread = rmin > 0.0 ? rmax / rmin : 0.0;
        double gate = nonlinear ? 5.0 : 2.0;
        bool ok = spread <= gate && rmin > 0.0;
        gate_failed |= !ok;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " lipschitz: ratio spread "
                  << spread << " (gate <= " << gate << ")\n";
    }

    if (all || suite == "gronwall") {
        double a = 0.7, b = 1.3, k = 0.4;
        bool ok = std::abs(hw::gronwall_envelope(a, b, k, 0.0) - a) <= 1e-12;
        ok = ok && std::abs(hw::gronwall_envelope(a, b, 0.0, 2.0) -
                            a * std::exp(b * 2.0)) <=
                       1e-12 * a * std::exp(b * 2.0);
        // monotonicity sampling in tau and each parameter
        double prev = -1.0;
        for (double tau = 0.0; tau <= 2.0; tau += 0.25) {
            double e = hw::gronwall_envelope(a, b, k, tau);
            ok = ok && e >= prev;
            prev = e;
        }
        gate_failed |= !ok;
        std::cout << (ok ? "[PASS]" : "[FAIL]")
                  << " gronwall: special cases and monotonicity (1e-12)\n";

        // consistency of a measured sensitivity energy against the envelope;
        // reported, never gated
        hw::ForwardResult fr = hw::solve_forward(setup);
        hw::LinearizedCoefficients A = hw::build_linearization(setup, fr.u);
        hw::Coeffs h(setup.alpha.size(), 1.0);
        hw::SpaceTimeField v = hw::solve_frechet(setup, h, fr.u, A);
        std::vector<double> psi = hw::energy_norm(v, setup);
        hw::HessianBounds hb = hw::hessian_bounds(setup.dict, setup.alpha);
        double eta_min_k1 = setup.dict.entries[0].bounds.kappa[1];
        double eta_max_mu2 = setup.dict.entries[0].bounds.mu[2];
        double s1 = 0.0;
        for (const auto& e : setup.dict.entries) {
            eta_min_k1 = std::min(eta_min_k1, e.bounds.kappa[1]);
            eta_max_mu2 = std::max(eta_max_mu2, e.bounds.mu[2]);
            s1 += std::sqrt(3.0) * e.bounds.mu[4] + 9.0 * fr.report.regularity.m0 * e.bounds.mu[1];
        }
        s1 /= std::sqrt(setup.material.rho_min());
        double eta = eta_min_k1 > 0.0 ? eta_max_mu2 / eta_min_k1 : 0.0;
        double b_meas =
            729.0 / 8.0 * (hb.mu / hb.kappa) * eta * fr.report.regularity.m1;
        double k_meas = 6.0 * s1;  // ||h||_inf = 1
        hw::CsvTable t{{"tau", "psi", "envelope"}, {}};
        int satisfied = 0;
        for (int k2 = 0; k2 <= setup.grid.m; ++k2) {
            double tau = k2 * setup.grid.dt();
            double env = hw::gronwall_envelope(0.0, b_meas, k_meas, tau);
            t.rows.push_back({tau, psi[k2], env});
            if (psi[k2] <= env) ++satisfied;
        }
        hw::write_csv(report_dir + "/gronwall.csv", t);
        std::cout << "[INFO] gronwall: measured sensitivity energy within the "
                     "envelope at "
                  << satisfied << "/" << setup.grid.m + 1
                  << " steps (reported)\n";
    }

    return gate_failed ? kExitGate : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"hyperelastic wave: forward, derivative, adjoint, inversion "
                 "and verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, w_path, data_path, resume_path;
    std::string h_text, method = "discrete", suite = "all",
                report_dir = "report";
    bool plots = false;

    CLI::App* cmd_forward = app.add_subcommand("forward", "solve the IBVP");
    cmd_forward->add_option("--config", config_path)->required();
    cmd_forward->add_option("--out", out_path)->required();

    CLI::App* cmd_deriv =
        app.add_subcommand("derivative", "directional derivative solve");
    cmd_deriv->add_option("--config", config_path)->required();
    cmd_deriv->add_option("--h", h_text, "comma-separated direction")
        ->required();
    cmd_deriv->add_option("--out", out_path)->required();

    CLI::App* cmd_adj = app.add_subcommand("adjoint", "apply the adjoint");
    cmd_adj->add_option("--config", config_path)->required();
    cmd_adj->add_option("--w", w_path, "weight field")->required();
    cmd_adj->add_option("--method", method)
        ->check(CLI::IsMember({"discrete", "continuous"}));
    cmd_adj->add_option("--out", out_path)->required();

    CLI::App* cmd_inv =
        app.add_subcommand("invert", "projected Landweber inversion");
    cmd_inv->add_option("--config", config_path)->required();
    cmd_inv->add_option("--data", data_path, "measured field")->required();
    cmd_inv->add_option("--out", out_path)->required();
    cmd_inv->add_option("--resume", resume_path, "trace to continue from");
    cmd_inv->add_flag("--plots", plots, "emit SVG plots next to --out");

    CLI::App* cmd_verify = app.add_subcommand("verify", "verification suites");
    cmd_verify->add_option("--config", config_path)->required();
    cmd_verify->add_option("--suite", suite)
        ->check(CLI::IsMember(
            {"taylor", "adjoint", "lipschitz", "gronwall", "all"}));
    cmd_verify->add_option("--report", report_dir);
    cmd_verify->add_flag("--plots", plots);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        hw::ExperimentConfig cfg = hw::load_config(config_path);
        if (cmd_forward->parsed()) {
            hw::ProblemSetup setup = hw::make_setup(cfg);
            hw::ForwardResult fr = hw::solve_forward(setup);
            hw::save_field(out_path, fr.u);
            std::ofstream side(out_path + ".json");
            side << forward_report_json(fr.report).dump(2) << '\n';
            std::cout << "wrote " << out_path << " (cfl " << fr.report.cfl
                      << ", wall " << fr.report.wall_time_s << " s)\n";
        } else if (cmd_deriv->parsed()) {
            hw::ProblemSetup setup = hw::make_setup(cfg);
            hw::Coeffs h = parse_direction(h_text, setup.alpha.size());
            hw::ForwardResult fr = hw::solve_forward(setup);
            hw::SpaceTimeField v = hw::solve_frechet(setup, h, fr.u);
            hw::save_field(out_path, v);
            std::cout << "wrote " << out_path << '\n';
        } else if (cmd_adj->parsed()) {
            hw::ProblemSetup setup = hw::make_setup(cfg);
            hw::SpaceTimeField w = hw::load_field(w_path, setup.grid);
            hw::ForwardResult fr = hw::solve_forward(setup);
            hw::LinearizedCoefficients A = hw::build_linearization(setup, fr.u);
            hw::Coeffs g = hw::apply_adjoint(
                method == "discrete" ? hw::AdjointMethod::Discrete
                                     : hw::AdjointMethod::Continuous,
                setup, fr.u, A, w);
            std::ofstream out(out_path);
            out << json{{"gradient", g}, {"method", method}}.dump(2) << '\n';
            std::cout << "wrote " << out_path << '\n';
        } else if (cmd_inv->parsed()) {
            hw::ProblemSetup setup = hw::make_setup(cfg);
            hw::SpaceTimeField meas = hw::load_field(data_path, setup.grid);
            hw::Coeffs start = cfg.alpha0;
            hw::InversionConfig icfg = cfg.inversion;
            int done = 0;
            if (!resume_path.empty()) {
                hw::ResumeState rs = hw::load_resume(resume_path);
                start = rs.alpha;
                done = rs.iterations_done;
                icfg.max_iterations =
                    std::max(0, icfg.max_iterations - done);
            }
            hw::InversionResult res = hw::invert(meas, start, setup, icfg);
            hw::write_inversion_report(
                out_path, res,
                json{{"config", config_path},
                     {"resumed_after", done},
                     {"seed", cfg.seed}});
            hw::CsvTable t{{"iteration", "residual_v", "misfit", "grad_norm"},
                           {}};
            std::vector<double> xs, ys;
            for (const auto& r : res.trace.records) {
                t.rows.push_back({double(r.iteration + done), r.residual_v,
                                  r.misfit, r.grad_norm});
                xs.push_back(r.iteration + done + 1.0);
                ys.push_back(r.misfit);
            }
            hw::write_csv(out_path + ".csv", t);
            if (plots && xs.size() >= 2)
                hw::write_svg_plot(out_path + ".svg", xs, ys, true,
                                   "misfit per iteration");
            std::cout << "stopped: " << res.trace.stopping_reason
                      << ", best misfit " << res.trace.best_misfit
                      << " at iteration " << res.trace.best_iteration << '\n';
        } else if (cmd_verify->parsed()) {
            return run_verify(cfg, suite, report_dir, plots);
        }
    } catch (const hw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hw::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const hw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
