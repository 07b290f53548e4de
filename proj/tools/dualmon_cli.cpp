// Command-line front end: reproduces the library's grid sweeps, traces and
// rate tables as deterministic CSV/JSON files plus gnuplot scripts.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
// failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "dualmon/dualmon.hpp"

namespace fs = std::filesystem;
using namespace dualmon;

namespace {

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string command;
    CircuitParams params{1.0, 1.0, 200.0, 10.0};
    int nk = 0;
    int nphi = 0;
    int truncation = 40;
    unsigned threads = 1;
    NoiseSpec noise{1.0, 1.0};
    WaveguideParams waveguide;
    fs::path out_dir = "out";
    OutputFormat format = OutputFormat::csv;
};

void validate_config(const RunConfig& cfg) {
    if (cfg.nk < 8 || cfg.nphi < 8)
        throw config_error("grid resolution must be at least 8 in each direction");
    if (cfg.truncation < 8) throw config_error("truncation must be at least 8");
    if (cfg.threads < 1) throw config_error("threads must be at least 1");
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw config_error("cannot create output directory: " + cfg.out_dir.string());
}

void emit_table(const RunConfig& cfg, const std::string& stem, const std::vector<Column>& columns) {
    if (cfg.format == OutputFormat::csv)
        write_csv(cfg.out_dir / (stem + ".csv"), columns);
    else
        write_json_table(cfg.out_dir / (stem + ".json"), columns);
}

std::string map_plot(const std::string& csv, const std::string& title, int xcol, int ycol,
                     int zcol) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set pm3d map\n";
    s += "set xlabel 'k'\nset ylabel 'phi'\n";
    s += "set title '" + title + "'\n";
    s += "splot '" + csv + "' using " + std::to_string(xcol) + ":" + std::to_string(ycol) + ":" +
         std::to_string(zcol) + " with pm3d notitle\n";
    s += "pause -1\n";
    return s;
}

// ---------------------------------------------------------------------------
// elementary: energy, gradient and dephasing maps of the ideal circuit
// ---------------------------------------------------------------------------
int cmd_elementary(const RunConfig& cfg) {
    validate_elementary(cfg.params);
    const auto ks = closed_grid(-0.5, 0.5, cfg.nk);
    const auto phis = closed_grid(-pi, pi, cfg.nphi);
    std::vector<Column> cols(6);
    cols[0].name = "k";
    cols[1].name = "phi";
    cols[2].name = "E";
    cols[3].name = "dE_dk";
    cols[4].name = "dE_dphi";
    cols[5].name = "Gamma_vs_ground";
    for (double k : ks)
        for (double phi : phis) {
            const ZakPoint p{k, phi};
            const auto g = gradient(cfg.params, p);
            cols[0].values.push_back(k);
            cols[1].values.push_back(phi);
            cols[2].values.push_back(energy(cfg.params, p));
            cols[3].values.push_back(g[0]);
            cols[4].values.push_back(g[1]);
            cols[5].values.push_back(dephasing_rate(cfg.params, cfg.noise, {0.0, 0.0}, p));
        }
    emit_table(cfg, "elementary", cols);
    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"noise", {{"eps_n", cfg.noise.eps_n}, {"eps_phi", cfg.noise.eps_phi}}},
                           {"grid", {cfg.nk, cfg.nphi}},
                           {"rate_units", "E_ref^2 * eps^2 with hbar = 1"}};
    write_json(cfg.out_dir / "elementary_meta.json", meta);
    if (cfg.format == OutputFormat::csv) {
        write_text(cfg.out_dir / "elementary.gnuplot",
                   map_plot("elementary.csv", "E(k, phi)", 1, 2, 3) +
                       map_plot("elementary.csv", "Gamma vs ground", 1, 2, 6));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bands: lowest two band surfaces with the first-order comparison column
// ---------------------------------------------------------------------------
int cmd_bands(const RunConfig& cfg) {
    validate_realistic(cfg.params);
    const double gap = oscillator_gap(cfg.params);
    std::vector<Column> cols(5);
    cols[0].name = "m";
    cols[1].name = "k";
    cols[2].name = "phi";
    cols[3].name = "E";
    cols[4].name = "E_first_order";
    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"truncation", cfg.truncation},
                           {"grid", {cfg.nk, cfg.nphi}},
                           {"bands", nlohmann::json::array()}};
    bool all_converged = true;
    std::size_t failures = 0;
    for (int m = 0; m <= 1; ++m) {
        const auto grid = band_grid(cfg.params, m, cfg.nk, cfg.nphi, cfg.truncation, cfg.threads);
        const auto ren = renormalized_energies(cfg.params, m);
        double max_dev = 0.0;
        for (std::size_t i = 0; i < grid.k_samples.size(); ++i)
            for (std::size_t j = 0; j < grid.phi_samples.size(); ++j) {
                const double k = grid.k_samples[i], phi = grid.phi_samples[j];
                const double first_order = (m + 0.5) * gap -
                                           ren.E_Q_ren * std::cos(2 * pi * k) -
                                           ren.E_J_ren * std::cos(phi);
                const double value = grid.values(static_cast<int>(i), static_cast<int>(j));
                cols[0].values.push_back(m);
                cols[1].values.push_back(k);
                cols[2].values.push_back(phi);
                cols[3].values.push_back(value);
                cols[4].values.push_back(first_order);
                if (std::isfinite(value)) max_dev = std::max(max_dev, std::abs(value - first_order));
            }
        meta["bands"].push_back({{"m", m},
                                 {"max_abs_deviation_from_first_order", max_dev},
                                 {"convergence_drift", grid.convergence_drift},
                                 {"converged", grid.converged},
                                 {"failed_cells", grid.failed_cells.size()}});
        all_converged = all_converged && grid.converged;
        failures += grid.failed_cells.size();
    }
    emit_table(cfg, "bands", cols);
    write_json(cfg.out_dir / "bands_meta.json", meta);
    if (cfg.format == OutputFormat::csv)
        write_text(cfg.out_dir / "bands.gnuplot",
                   map_plot("bands.csv", "band energies", 2, 3, 4));
    if (!all_converged || failures > 0) {
        std::cerr << "bands: truncation not converged or cells failed (see bands_meta.json)\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// transmission: traces for the two operating points
// ---------------------------------------------------------------------------
int cmd_transmission(const RunConfig& cfg, double dmin, double dmax, int points) {
    validate_realistic(cfg.params);
    if (points < 8) throw config_error("transmission: need at least 8 detuning points");
    if (!(dmax > dmin)) throw config_error("transmission: empty detuning range");
    std::vector<double> detunings(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        detunings[static_cast<std::size_t>(i)] = dmin + (dmax - dmin) * i / (points - 1);

    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"gamma", cfg.waveguide.gamma},
                           {"alpha_sq", cfg.waveguide.alpha * cfg.waveguide.alpha},
                           {"reference_transition", reference_transition(cfg.params)},
                           {"traces", nlohmann::json::array()}};
    const std::vector<std::pair<std::string, ZakPoint>> states = {
        {"transmission_k0_phi0", {0.0, 0.0}}, {"transmission_k0_phipi", {0.0, pi}}};
    for (const auto& [stem, state] : states) {
        const auto trace = transmission_trace(cfg.params, cfg.waveguide, state, detunings);
        std::vector<Column> cols(2);
        cols[0].name = "detuning";
        cols[0].values = trace.detunings;
        cols[1].name = "T";
        cols[1].values = trace.transmission;
        emit_table(cfg, stem, cols);
        meta["traces"].push_back({{"file", stem},
                                  {"k", state.k},
                                  {"phi", state.phi},
                                  {"weak_drive", trace.weak_drive},
                                  {"max_steady_state_residual", trace.max_residual}});
    }
    write_json(cfg.out_dir / "transmission_meta.json", meta);
    if (cfg.format == OutputFormat::csv) {
        std::string plot = "set datafile separator ','\n";
        plot += "set xlabel 'detuning'\nset ylabel 'T'\n";
        plot += "plot 'transmission_k0_phi0.csv' using 1:2 with lines title '(0,0)', \\\n";
        plot += "     'transmission_k0_phipi.csv' using 1:2 with lines title '(0,pi)'\n";
        plot += "pause -1\n";
        write_text(cfg.out_dir / "transmission.gnuplot", plot);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// transition-map: interband frequency surface plus level-set metadata
// ---------------------------------------------------------------------------
int cmd_transition_map(const RunConfig& cfg) {
    validate_realistic(cfg.params);
    const auto map = transition_map(cfg.params, cfg.nk, cfg.nphi);
    std::vector<Column> cols(3);
    cols[0].name = "k";
    cols[1].name = "phi";
    cols[2].name = "omega10";
    for (std::size_t i = 0; i < map.k_samples.size(); ++i)
        for (std::size_t j = 0; j < map.phi_samples.size(); ++j) {
            cols[0].values.push_back(map.k_samples[i]);
            cols[1].values.push_back(map.phi_samples[j]);
            cols[2].values.push_back(map.omega(static_cast<int>(i), static_cast<int>(j)));
        }
    emit_table(cfg, "transition_map", cols);

    const double range = map.omega.maxCoeff() - map.omega.minCoeff();
    nlohmann::json levels = nlohmann::json::array();
    for (const ZakPoint target : {ZakPoint{0, 0}, ZakPoint{0, pi}, ZakPoint{0.5, 0}, ZakPoint{0.5, pi}}) {
        const double omega = transition_frequency(cfg.params, target);
        const auto region = localize_state(map, omega, range / 200);
        levels.push_back({{"k", target.k},
                          {"phi", target.phi},
                          {"omega", omega},
                          {"cells_within_window", region.cells.size()},
                          {"disconnected_components", region.component_count}});
    }
    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"grid", {cfg.nk, cfg.nphi}},
                           {"window", range / 200},
                           {"level_sets", levels}};
    write_json(cfg.out_dir / "transition_map_meta.json", meta);
    if (cfg.format == OutputFormat::csv)
        write_text(cfg.out_dir / "transition_map.gnuplot",
                   map_plot("transition_map.csv", "Omega10(k, phi)", 1, 2, 3));
    return 0;
}

// ---------------------------------------------------------------------------
// zak-wavefunction: oscillator ground state magnitude across impedances
// ---------------------------------------------------------------------------
int cmd_zak_wavefunction(const RunConfig& cfg, const std::vector<double>& zs) {
    const auto ks = closed_grid(-0.5, 0.5, cfg.nk);
    const auto phis = closed_grid(-pi, pi, cfg.nphi);
    std::vector<Column> cols(6);
    cols[0].name = "z";
    cols[1].name = "k";
    cols[2].name = "phi";
    cols[3].name = "abs_psi";
    cols[4].name = "re_psi";
    cols[5].name = "im_psi";
    for (double z : zs) {
        if (!(z > 0)) throw config_error("zak-wavefunction: z values must be positive");
        for (double k : ks)
            for (double phi : phis) {
                const Complex psi = ho_zak_wavefunction(z, {k, phi});
                cols[0].values.push_back(z);
                cols[1].values.push_back(k);
                cols[2].values.push_back(phi);
                cols[3].values.push_back(std::abs(psi));
                cols[4].values.push_back(psi.real());
                cols[5].values.push_back(psi.imag());
            }
    }
    emit_table(cfg, "zak_wavefunction", cols);
    nlohmann::json meta = {{"z_values", zs}, {"grid", {cfg.nk, cfg.nphi}}};
    write_json(cfg.out_dir / "zak_wavefunction_meta.json", meta);
    if (cfg.format == OutputFormat::csv)
        write_text(cfg.out_dir / "zak_wavefunction.gnuplot",
                   map_plot("zak_wavefunction.csv", "|psi0(k, phi)|", 2, 3, 4));
    return 0;
}

// ---------------------------------------------------------------------------
// bias-scan: shift equivalence checks and the scanned band
// ---------------------------------------------------------------------------
int cmd_bias_scan(const RunConfig& cfg) {
    validate_realistic(cfg.params);
    const double gap = oscillator_gap(cfg.params);
    const double tol = 1e-8 * gap;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uk(-0.5, 0.5), up(-pi, pi);
    std::vector<Column> checks(6);
    checks[0].name = "k";
    checks[1].name = "phi";
    checks[2].name = "n_x";
    checks[3].name = "phi_x";
    checks[4].name = "max_deviation";
    checks[5].name = "pass";
    bool all_ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        const ZakPoint p{uk(rng), up(rng)};
        const BiasPoint b{uk(rng), up(rng)};
        const auto res = bias_shift_check(cfg.params, p, b, tol, cfg.truncation);
        checks[0].values.push_back(p.k);
        checks[1].values.push_back(p.phi);
        checks[2].values.push_back(b.n_x);
        checks[3].values.push_back(b.phi_x);
        checks[4].values.push_back(res.max_deviation);
        checks[5].values.push_back(res.ok ? 1.0 : 0.0);
        all_ok = all_ok && res.ok;
    }
    emit_table(cfg, "bias_scan_checks", checks);

    // scanning the biases from the origin reproduces the unbiased band
    const auto ops = build_operators(impedance(cfg.params), cfg.truncation);
    const int scan = std::min(cfg.nk, 9);
    std::vector<Column> scan_cols(5);
    scan_cols[0].name = "n_x";
    scan_cols[1].name = "phi_x";
    scan_cols[2].name = "E0_biased";
    scan_cols[3].name = "E0_band";
    scan_cols[4].name = "abs_diff";
    for (int i = 0; i < scan; ++i)
        for (int j = 0; j < scan; ++j) {
            const BiasPoint b{-0.5 + (i + 1.0) / scan, -pi + 2 * pi * (j + 1.0) / scan};
            const double biased =
                eigensolve(build_hamiltonian(ops, cfg.params, {0, 0}, b), 1).values(0);
            const double band =
                eigensolve(build_hamiltonian(ops, cfg.params, wrap(b.n_x, b.phi_x)), 1).values(0);
            scan_cols[0].values.push_back(b.n_x);
            scan_cols[1].values.push_back(b.phi_x);
            scan_cols[2].values.push_back(biased);
            scan_cols[3].values.push_back(band);
            scan_cols[4].values.push_back(std::abs(biased - band));
        }
    emit_table(cfg, "bias_scan_band", scan_cols);
    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"tolerance", tol},
                           {"truncation", cfg.truncation},
                           {"all_checks_passed", all_ok}};
    write_json(cfg.out_dir / "bias_scan_meta.json", meta);
    if (!all_ok) {
        std::cerr << "bias-scan: shift equivalence violated beyond tolerance\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// thermal-rates: eigenoperator transition table
// ---------------------------------------------------------------------------
int cmd_thermal_rates(const RunConfig& cfg, double nu, double kbt, int bands, double k,
                      double phi) {
    validate_realistic(cfg.params);
    const ThermalEnvironment env{nu, kbt};
    const auto rates = eigenoperator_rates(cfg.params, env, {k, phi}, bands, cfg.truncation);
    std::vector<Column> cols(6);
    cols[0].name = "transition_m";
    cols[1].name = "transition_n";
    cols[2].name = "frequency";
    cols[3].name = "up_rate";
    cols[4].name = "down_rate";
    cols[5].name = "matrix_element_sq";
    for (const auto& tr : rates) {
        cols[0].values.push_back(tr.m);
        cols[1].values.push_back(tr.n);
        cols[2].values.push_back(tr.frequency);
        cols[3].values.push_back(tr.up_rate);
        cols[4].values.push_back(tr.down_rate);
        cols[5].values.push_back(tr.melem_sq);
    }
    emit_table(cfg, "thermal_rates", cols);

    // coherence-decay summary for the two encodings
    const double g10_up = rates.front().up_rate * rates.front().melem_sq;
    const double g10_down = rates.front().down_rate * rates.front().melem_sq;
    nlohmann::json meta = {{"params", params_json(cfg.params)},
                           {"nu", nu},
                           {"k_B_T", kbt},
                           {"state", {k, phi}},
                           {"two_level_dephasing_from_lowest_transition",
                            two_level_dephasing(g10_down, g10_up)},
                           {"ground_manifold_dephasing_example",
                            ground_manifold_dephasing(g10_up, g10_up)}};
    write_json(cfg.out_dir / "thermal_rates_meta.json", meta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dualmon circuit simulation toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    std::string format = "csv";
    std::vector<int> grid;
    app.add_option("--config", config_file, "circuit parameter file (keys E_Q, E_J, E_C, E_L)");
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--grid", grid, "grid resolution NK,NPHI")->delimiter(',')->expected(1, 2);
    app.add_option("--truncation", cfg.truncation, "oscillator basis size")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads for sweeps")->capture_default_str();

    auto* elementary = app.add_subcommand("elementary", "ideal-circuit energy and dephasing maps");
    elementary->fallthrough();
    elementary->add_option("--eps-n", cfg.noise.eps_n, "charge noise amplitude")
        ->capture_default_str();
    elementary->add_option("--eps-phi", cfg.noise.eps_phi, "flux noise amplitude")
        ->capture_default_str();

    auto* bands = app.add_subcommand("bands", "numeric band surfaces for the realistic circuit");
    bands->fallthrough();

    auto* transmission = app.add_subcommand("transmission", "driven transmission traces");
    transmission->fallthrough();
    double dmin = -3.0, dmax = 4.0;
    int dpoints = 701;
    double gamma_override = 0.0, alpha_sq = 0.0;
    transmission->add_option("--dmin", dmin, "lowest detuning")->capture_default_str();
    transmission->add_option("--dmax", dmax, "highest detuning")->capture_default_str();
    transmission->add_option("--points", dpoints, "number of detuning samples")
        ->capture_default_str();
    transmission->add_option("--gamma", gamma_override,
                             "linewidth rate (default 0.01 x reference transition)");
    transmission->add_option("--alpha-sq", alpha_sq, "drive power (default 0.1 E_J)");

    auto* tmap = app.add_subcommand("transition-map", "interband transition frequency surface");
    tmap->fallthrough();

    auto* zak = app.add_subcommand("zak-wavefunction", "oscillator ground state in the Zak basis");
    zak->fallthrough();
    std::vector<double> zs = {pi, 2 * pi, 4 * pi};
    zak->add_option("--z", zs, "impedance values")->delimiter(',');

    auto* bias = app.add_subcommand("bias-scan", "bias-shift equivalence checks and scanned band");
    bias->fallthrough();

    auto* thermal = app.add_subcommand("thermal-rates", "thermal transition-rate table");
    thermal->fallthrough();
    double nu = 1e-3, kbt = 0.0, state_k = 0.0, state_phi = 0.0;
    int bands_count = 3;
    thermal->add_option("--nu", nu, "spectral density slope")->capture_default_str();
    thermal->add_option("--kbt", kbt, "temperature (default oscillator gap / 10)");
    thermal->add_option("--bands", bands_count, "number of manifolds")->capture_default_str();
    thermal->add_option("--k", state_k, "quasi-charge of the state")->capture_default_str();
    thermal->add_option("--phi", state_phi, "quasi-flux of the state")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.format = (format == "json") ? OutputFormat::json : OutputFormat::csv;
        if (!config_file.empty()) cfg.params = load_params(config_file, cfg.params);

        const bool is_map = tmap->parsed() || zak->parsed() || elementary->parsed();
        cfg.nk = is_map ? 101 : 41;
        cfg.nphi = is_map ? 101 : 41;
        if (!grid.empty()) {
            cfg.nk = grid[0];
            cfg.nphi = grid.size() > 1 ? grid[1] : grid[0];
        }
        validate_config(cfg);

        if (elementary->parsed()) return cmd_elementary(cfg);
        if (bands->parsed()) return cmd_bands(cfg);
        if (transmission->parsed()) {
            validate_realistic(cfg.params);
            cfg.waveguide.omega_drive = reference_transition(cfg.params);
            cfg.waveguide.gamma =
                gamma_override > 0 ? gamma_override : 0.01 * cfg.waveguide.omega_drive;
            cfg.waveguide.alpha =
                std::sqrt(alpha_sq > 0 ? alpha_sq : 0.1 * cfg.params.E_J);
            return cmd_transmission(cfg, dmin, dmax, dpoints);
        }
        if (tmap->parsed()) return cmd_transition_map(cfg);
        if (zak->parsed()) return cmd_zak_wavefunction(cfg, zs);
        if (bias->parsed()) return cmd_bias_scan(cfg);
        if (thermal->parsed()) {
            if (kbt <= 0) kbt = oscillator_gap(cfg.params) / 10.0;
            return cmd_thermal_rates(cfg, nu, kbt, bands_count, state_k, state_phi);
        }
        throw config_error("no command selected");
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const convergence_error& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
