// qle — command line frontend: response spectra, dispersion checks,
// stability classification, and Langevin trajectory ensembles for a point
// scatterer or point charge coupled to a quantum field.
//
// Units: hbar = k_B = c = 1 throughout.
// Exit codes: 0 success, 1 usage/config error, 2 stability refusal,
//             3 numerical divergence (or failed residual checks).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qle/dispersion.hpp"
#include "qle/dynamics.hpp"
#include "qle/errors.hpp"
#include "qle/io.hpp"
#include "qle/radiation_pressure.hpp"
#include "qle/stability.hpp"
#include "qle/system.hpp"
#include "qle/version.hpp"

using json = nlohmann::json;
using namespace qle;

namespace {

struct GridSpec {
    double delta{0.01};
    int half_count{1000};
};

GridSpec parse_grid(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        throw CLI::ValidationError("--grid", "expected <delta>:<half_count>");
    GridSpec g;
    g.delta = std::stod(s.substr(0, pos));
    g.half_count = std::stoi(s.substr(pos + 1));
    return g;
}

SMatrixModel parse_model(const std::string& spec, const std::string& r_file,
                         const std::string& s_file) {
    if (spec == "perfect") return PerfectReflector{};
    if (spec.rfind("resonance:", 0) == 0)
        return ResonanceCutoff{std::stod(spec.substr(10))};
    if (spec == "tabulated") {
        if (r_file.empty() || s_file.empty())
            throw CLI::ValidationError("--model", "tabulated model needs --r-file and --s-file");
        TabulatedSMatrix t;
        t.reflection = read_spectrum_csv(r_file);
        t.transmission = read_spectrum_csv(s_file);
        return t;
    }
    throw CLI::ValidationError("--model", "expected perfect | resonance:<cutoff> | tabulated");
}

double kv_lookup(const std::vector<std::string>& kvs, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
    for (const auto& kv : kvs) {
        const auto pos = kv.find('=');
        if (pos != std::string::npos && kv.substr(0, pos) == key)
            return std::stod(kv.substr(pos + 1));
    }
    if (fallback) return *fallback;
    throw CLI::ValidationError("key=value", "missing required key " + key);
}

std::vector<std::string> metadata_lines(const std::string& model, double T,
                                        const std::string& seed) {
    return {
        "model=" + model,
        "temperature=" + format_g17(T),
        "units: hbar=kB=c=1",
        "seed=" + seed,
        std::string("qle version ") + kVersion,
    };
}

// Flat JSON config: keys are long option names without the leading dashes.
// Command-line flags override config values.
std::vector<std::string> augment_with_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
    json j;
    in >> j;
    for (const auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag + "=" + value.get<std::string>());
        } else {
            args.push_back(flag + "=" + value.dump());
        }
    }
    return args;
}

struct CommonModelFlags {
    std::string model{"resonance:1.0"};
    std::string r_file, s_file;
    double temp{0.0};
    std::string grid{"0.01:1000"};
    std::string out_dir{"."};
    std::string config; // consumed by augment_with_config
};

void add_common(CLI::App* cmd, CommonModelFlags& f) {
    cmd->add_option("--model", f.model, "perfect | resonance:<cutoff> | tabulated");
    cmd->add_option("--r-file", f.r_file, "reflection CSV for tabulated models");
    cmd->add_option("--s-file", f.s_file, "transmission CSV for tabulated models");
    cmd->add_option("--temp", f.temp, "field temperature (hbar=kB=1)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--grid", f.grid, "frequency grid <delta>:<half_count>");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--config", f.config, "JSON config file (flags override)");
}

// ---------------------------------------------------------------- response

int cmd_response(const CommonModelFlags& f, bool also_json) {
    const SMatrixModel model = parse_model(f.model, f.r_file, f.s_file);
    const ThermalState state{f.temp};
    const GridSpec gs = parse_grid(f.grid);
    const FrequencyGrid grid = make_grid(gs.delta, gs.half_count);
    std::filesystem::create_directories(f.out_dir);

    const auto meta = metadata_lines(f.model, f.temp, "none");
    const auto chi = sample_spectrum(
        grid, [&](double w) { return thermal_susceptibility(model, state, w, 1e-9); }, true);
    const auto xi = sample_odd_spectrum(
        grid, [&](double w) { return force_commutator(model, state, w, 1e-9); });
    const auto cff = sample_spectrum(grid, [&](double w) {
        return cplx(force_spectrum(model, state, w, 1e-9), 0.0);
    });

    const auto dir = std::filesystem::path(f.out_dir);
    write_spectrum_csv((dir / "chi_T.csv").string(), chi, meta);
    write_spectrum_csv((dir / "xi_T.csv").string(), xi, meta);
    write_spectrum_csv((dir / "c_ff.csv").string(), cff, meta);
    if (also_json) {
        const std::pair<std::string, const ComplexSpectrum*> named[] = {
            {"chi_T", &chi}, {"xi_T", &xi}, {"c_ff", &cff}};
        for (const auto& [name, sp] : named) {
            std::ofstream out(dir / (name + ".json"));
            out << spectrum_to_json(*sp).dump(2) << "\n";
        }
    }

    json summary;
    summary["model"] = f.model;
    summary["temperature"] = f.temp;
    summary["units"] = "hbar=kB=c=1";
    summary["version"] = kVersion;
    summary["grid"] = {{"delta", gs.delta}, {"half_count", gs.half_count}};
    const Quasistatic qs = is_tabulated(model)
                               ? Quasistatic{0.0, 0.0}
                               : quasistatic_coefficients(model, state);
    summary["friction"] = qs.friction;
    summary["half_curvature"] = qs.half_curvature;
    summary["momentum_diffusion"] = state.temperature * qs.friction;
    std::ofstream out(dir / "summary.json");
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------- kk

int cmd_kk(const CommonModelFlags& f, const std::string& xi_file,
           const std::string& chi_file, double band_lo, double band_hi,
           double tol_kk, double tol_fdt, double tol_balance) {
    json report;
    report["version"] = kVersion;
    bool all_ok = true;

    if (!xi_file.empty() && !chi_file.empty()) {
        // consistency check of externally supplied spectra
        const ComplexSpectrum xi = read_spectrum_csv(xi_file);
        const ComplexSpectrum chi = read_spectrum_csv(chi_file);
        const double res = fdt_residual(chi, xi);
        report["fdt_residual"] = res;
        report["fdt_pass"] = res <= tol_fdt;
        std::cout << report.dump(2) << "\n";
        return res <= tol_fdt ? 0 : 3;
    }

    const SMatrixModel model = parse_model(f.model, f.r_file, f.s_file);
    const ThermalState state{f.temp};
    const GridSpec gs = parse_grid(f.grid);
    const FrequencyGrid grid = make_grid(gs.delta, gs.half_count);
    report["model"] = f.model;
    report["temperature"] = f.temp;

    const auto xi = sample_odd_spectrum(
        grid, [&](double w) { return force_commutator(model, state, w, 1e-9); });

    // rebuild chi from xi with the 3-subtraction dispersion relation
    const Quasistatic qs = is_tabulated(model)
                               ? Quasistatic{0.0, 0.0}
                               : quasistatic_coefficients(model, state);
    const ComplexSpectrum chi_kk =
        kk_transform(xi, 3, {cplx(0.0, qs.friction), cplx(qs.half_curvature, 0.0)});

    double worst = 0.0, scale = 0.0;
    for (double w = band_lo; w <= band_hi;
         w += std::max(gs.delta, (band_hi - band_lo) / 64.0)) {
        const int i = grid.zero_index() + static_cast<int>(std::round(w / gs.delta));
        if (i <= 0 || i >= grid.size() - 1) continue;
        const cplx direct = thermal_susceptibility(model, state, grid.omega(i), 1e-9);
        worst = std::max(worst, std::abs(chi_kk.values[i] - direct));
        scale = std::max(scale, std::abs(direct));
    }
    const double kk_res = worst / std::max(scale, 1e-300);
    report["kk_residual"] = kk_res;
    report["kk_pass"] = kk_res <= tol_kk;
    all_ok = all_ok && kk_res <= tol_kk;

    const double fdt = fdt_residual(chi_kk, xi);
    report["fdt_residual"] = fdt;
    report["fdt_pass"] = fdt <= tol_fdt;
    all_ok = all_ok && fdt <= tol_fdt;

    const auto cff = sample_spectrum(grid, [&](double w) {
        return cplx(force_spectrum(model, state, w, 1e-9), 0.0);
    });
    const double balance = detailed_balance_residual(cff, xi, f.temp);
    report["detailed_balance_residual"] = balance;
    report["detailed_balance_pass"] = balance <= tol_balance;
    all_ok = all_ok && balance <= tol_balance;

    // induced masses: divergence (perfect reflector) surfaces as exit 3
    const auto xi0 = sample_odd_spectrum(grid, [&](double w) {
        return force_commutator(model, ThermalState{0.0}, w, 1e-9);
    });
    const InducedMass mu0 = induced_mass_vacuum(xi0);
    report["mu_0"] = mu0.value;
    if (f.temp > 0.0) {
        const ThermalMass tm = induced_mass_thermal(xi, xi0, qs.friction);
        report["mu_T"] = tm.mu_T;
        report["half_curvature"] = tm.half_curvature;
    }

    std::cout << report.dump(2) << "\n";
    return all_ok ? 0 : 3;
}

// --------------------------------------------------------------- stability

int cmd_stability(const CommonModelFlags& f, const std::vector<std::string>& al,
                  const std::vector<std::string>& brownian, double mass, double spring,
                  const std::string& out_file) {
    MechanicalSystem sys;
    if (!al.empty()) {
        sys = abraham_lorentz_system(kv_lookup(al, "M"), kv_lookup(al, "e2"),
                                     kv_lookup(al, "K", 0.0));
    } else if (!brownian.empty()) {
        sys = make_brownian_system(kv_lookup(brownian, "m"), kv_lookup(brownian, "K", 0.0),
                                   kv_lookup(brownian, "D"), kv_lookup(brownian, "T"));
    } else {
        const SMatrixModel model = parse_model(f.model, f.r_file, f.s_file);
        sys = make_scatterer_system(mass, spring, model, ThermalState{f.temp});
    }
    const ImpedanceModel imp = impedance_model_from(sys);
    const ClassificationReport rep = classify_motion(imp);
    const std::string text = classification_to_json(rep, imp);
    std::cout << text << "\n";
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        out << text << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonModelFlags& f, const std::vector<std::string>& al,
                 double mass, double spring, int n_traj, double duration, double dt,
                 std::uint64_t seed, int threads, bool dump_traj, double fit_lo,
                 double fit_hi) {
    MechanicalSystem sys;
    ComplexSpectrum c_sym;
    std::string label;
    const GridSpec gs = parse_grid(f.grid);
    const FrequencyGrid grid = make_grid(gs.delta, gs.half_count);

    if (!al.empty()) {
        sys = abraham_lorentz_system(kv_lookup(al, "M"), kv_lookup(al, "e2"),
                                     kv_lookup(al, "K", 0.0));
        label = "abraham-lorentz";
        // a runaway kernel is refused before any noise is drawn; the shape
        // of the spectrum never matters
        c_sym = sample_spectrum(grid, [](double) { return cplx(0.0, 0.0); });
    } else if (f.model.rfind("brownian:", 0) == 0) {
        const double D = std::stod(f.model.substr(9));
        if (!(f.temp > 0.0))
            throw CLI::ValidationError("--temp", "brownian kernel needs T > 0");
        sys = make_brownian_system(mass, spring, D, f.temp);
        c_sym = sample_spectrum(grid, [&](double) { return cplx(2.0 * D, 0.0); }, true);
        label = f.model;
    } else {
        const SMatrixModel model = parse_model(f.model, f.r_file, f.s_file);
        const ThermalState state{f.temp};
        sys = make_scatterer_system(mass, spring, model, state);
        const auto cff = sample_spectrum(grid, [&](double w) {
            return cplx(force_spectrum(model, state, w, 1e-9), 0.0);
        });
        c_sym = symmetrize_spectrum(cff);
        label = f.model;
    }
    if (dt <= 0.0) dt = 3.141592653589793 / grid.max_omega(); // Nyquist = band

    const TrajectoryEnsemble ens =
        run_ensemble(sys, c_sym, n_traj, duration, dt, seed, threads);

    json summary;
    summary["model"] = label;
    summary["temperature"] = f.temp;
    summary["units"] = "hbar=kB=c=1";
    summary["version"] = kVersion;
    summary["seed"] = seed;
    summary["n_traj"] = n_traj;
    summary["duration"] = duration;
    summary["dt"] = dt;
    summary["mass"] = mass;
    summary["spring"] = spring;

    if (spring == 0.0) {
        const double lo = fit_lo > 0.0 ? fit_lo : 0.1 * duration;
        const double hi = fit_hi > 0.0 ? fit_hi : 0.8 * duration;
        const Estimate d = estimate_diffusion(ens, lo, hi);
        summary["diffusion"] = {{"value", d.value},
                                {"std_error", d.std_error},
                                {"fit_window", {lo, hi}}};
    } else {
        const double discard = 0.25 * duration;
        const Estimate v = estimate_equilibrium_variance(ens, discard);
        summary["equilibrium_variance"] = {{"value", v.value},
                                           {"std_error", v.std_error},
                                           {"discard_time", discard}};
        if (f.temp > 0.0) summary["classical_T_over_K"] = f.temp / spring;
    }

    std::filesystem::create_directories(f.out_dir);
    const auto dir = std::filesystem::path(f.out_dir);
    if (dump_traj) {
        for (int s = 0; s < n_traj; ++s) {
            std::ofstream out(dir / ("traj_" + std::to_string(s) + ".csv"));
            for (const auto& line : metadata_lines(label, f.temp, std::to_string(seed)))
                out << "# " << line << "\n";
            out << "t,q,v\n";
            const auto& tr = ens.trajectories[s];
            for (int i = 0; i < tr.position.size(); ++i)
                out << format_g17(i * dt) << ',' << format_g17(tr.position[i]) << ','
                    << format_g17(tr.velocity[i]) << "\n";
        }
    }
    std::ofstream out(dir / "ensemble_summary.json");
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum Langevin response, stability, and simulation toolkit"};
    app.require_subcommand(1);

    CommonModelFlags rf, kf, sf, mf;

    auto* response = app.add_subcommand("response", "susceptibility and noise spectra");
    add_common(response, rf);
    bool also_json = false;
    response->add_flag("--json", also_json, "also write JSON spectra");

    auto* kk = app.add_subcommand("kk", "dispersion-relation and FDT checks");
    add_common(kk, kf);
    std::string xi_file, chi_file;
    double band_lo = 0.1, band_hi = 5.0;
    double tol_kk = 1e-4, tol_fdt = 1e-6, tol_balance = 1e-6;
    kk->add_option("--xi-file", xi_file, "check an external xi spectrum (with --chi-file)");
    kk->add_option("--chi-file", chi_file, "check an external chi spectrum");
    kk->add_option("--band-lo", band_lo, "reconstruction check band, lower edge");
    kk->add_option("--band-hi", band_hi, "reconstruction check band, upper edge");
    kk->add_option("--tol-kk", tol_kk, "tolerance for the rebuilt susceptibility");
    kk->add_option("--tol-fdt", tol_fdt, "tolerance for Im chi = xi");
    kk->add_option("--tol-balance", tol_balance, "tolerance for detailed balance");

    auto* stab = app.add_subcommand("stability", "passivity and runaway classification");
    add_common(stab, sf);
    std::vector<std::string> al_kv, brownian_kv;
    double mass = 1.0, spring = 0.0;
    std::string stab_out;
    stab->add_option("--abraham-lorentz", al_kv, "renormalized charge: M=<> e2=<> [K=<>]")
        ->expected(-1);
    stab->add_option("--brownian", brownian_kv, "white-noise kernel: m=<> D=<> T=<> [K=<>]")
        ->expected(-1);
    stab->add_option("--mass", mass, "scatterer quasistatic mass M_0");
    stab->add_option("--spring", spring, "spring constant K");
    stab->add_option("--out", stab_out, "also write the JSON report to a file");

    auto* sim = app.add_subcommand("simulate", "stochastic trajectory ensembles");
    add_common(sim, mf);
    std::vector<std::string> sim_al_kv;
    double sim_mass = 1.0, sim_spring = 0.0, duration = 100.0, dt = 0.0;
    double fit_lo = 0.0, fit_hi = 0.0;
    int n_traj = 100, threads = 1;
    std::uint64_t seed = 1;
    bool dump_traj = false;
    sim->add_option("--abraham-lorentz", sim_al_kv, "renormalized charge (refused as runaway)")
        ->expected(-1);
    sim->add_option("--mass", sim_mass, "mass (M_0 for scatterers)");
    sim->add_option("--spring", sim_spring, "spring constant K");
    sim->add_option("--n-traj", n_traj, "ensemble size")->check(CLI::PositiveNumber);
    sim->add_option("--duration", duration, "trajectory length in time units");
    sim->add_option("--dt", dt, "time step (default: Nyquist-matched to the grid)");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--threads", threads, "worker threads (result is thread-count invariant)");
    sim->add_flag("--dump-traj", dump_traj, "write traj_<stream>.csv files");
    sim->add_option("--fit-lo", fit_lo, "diffusion fit window start");
    sim->add_option("--fit-hi", fit_hi, "diffusion fit window end");

    std::vector<std::string> args;
    try {
        args = augment_with_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    std::reverse(args.begin(), args.end()); // CLI11 parses reversed vectors

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for details\n";
        return 1;
    }

    try {
        if (app.got_subcommand(response)) return cmd_response(rf, also_json);
        if (app.got_subcommand(kk))
            return cmd_kk(kf, xi_file, chi_file, band_lo, band_hi, tol_kk, tol_fdt,
                          tol_balance);
        if (app.got_subcommand(stab))
            return cmd_stability(sf, al_kv, brownian_kv, mass, spring, stab_out);
        if (app.got_subcommand(sim))
            return cmd_simulate(mf, sim_al_kv, sim_mass, sim_spring, n_traj, duration,
                                dt, seed, threads, dump_traj, fit_lo, fit_hi);
    } catch (const stability_error& e) {
        std::cerr << "stability refusal: " << e.what() << "\n";
        return 2;
    } catch (const divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
