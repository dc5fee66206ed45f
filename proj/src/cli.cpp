#include "moebius/cli.hpp"

#include "moebius/classical.hpp"
#include "moebius/geometry.hpp"
#include "moebius/io.hpp"
#include "moebius/quantum.hpp"
#include "moebius/validate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace moebius::cli {

namespace {

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv("MOEBIUS_OUT_DIR");
    return env && *env ? env : ".";
}

std::string even_grid_check(const std::string& input) {
    try {
        const int value = std::stoi(input);
        if (value == 0) return {};
        if (value < 16 || value % 2 != 0) return "must be 0 or an even integer >= 16";
    } catch (...) {
        return "must be an integer";
    }
    return {};
}

/// Typed storage filled by CLI11; rendered into the RunConfig map after
/// a successful parse.
struct ParsedValues {
    std::string out = default_out_dir();
    std::string config_path;
    std::string format = "csv";

    double radius = 1.0;
    double half_width = 1.0 / 3.0;
    int nu = 100;
    int nv = 10;

    double mass = 1.0;
    double rho = 1.0;
    double spin = 0.5;
    double orbit_radius = 1.0;
    double theta0 = 0.0;
    double p_theta = 1.1;
    double dtau = 1e-3;
    int steps = 10000;
    double cos_amp = 0.0;

    double m_eff = 1.0;
    double hbar = 1.0;
    int max_n = 5;
    int grid = 0;
    int levels = 10;
    bool eigenvectors = false;

    double flux = 0.0;
    double flux_min = 0.0;
    double flux_max = 0.5;
    int flux_count = 0;
    int flux_grid = 2048;

    int coulomb_k = 0;
    double charge_e2 = 1.0;
    double r_max = 200.0;
    int coulomb_grid = 4000;
    int coulomb_levels = 3;
    int paper_n_max = 10;
    double light_speed = 137.035999084;
};

struct AppState {
    CLI::App app{"Spinning particle on the meridian of a Moebius strip: "
                 "geometry dumps, constrained dynamics, 4*pi-periodic ring spectra",
                 "moebius"};
    ParsedValues values;
    std::map<Command, CLI::App*> subcommands;
};

void add_common(CLI::App* cmd, ParsedValues& v) {
    cmd->add_option("--out", v.out, "Output directory")->capture_default_str();
    cmd->add_option("--config", v.config_path, "key=value config file; flags override");
}

std::unique_ptr<AppState> build_app() {
    auto state = std::make_unique<AppState>();
    auto& v = state->values;
    CLI::App& app = state->app;
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CLI::App* geometry = app.add_subcommand("geometry", "Emit the strip mesh with normals");
    geometry->add_option("--radius", v.radius, "Centerline radius R")
        ->check(CLI::PositiveNumber)->capture_default_str();
    geometry->add_option("--half-width", v.half_width, "Transverse half width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    geometry->add_option("--nu", v.nu, "Grid points along u")
        ->check(CLI::Range(3, 1 << 20))->capture_default_str();
    geometry->add_option("--nv", v.nv, "Grid points along v")
        ->check(CLI::Range(2, 1 << 20))->capture_default_str();
    geometry->add_option("--format", v.format, "Mesh format")
        ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_common(geometry, v);
    state->subcommands[Command::geometry] = geometry;

    CLI::App* classical = app.add_subcommand("classical", "Integrate meridian motion with frame transport");
    classical->add_option("--mass", v.mass, "Rest mass m0")->check(CLI::PositiveNumber)->capture_default_str();
    classical->add_option("--rho", v.rho, "Body size rho")->check(CLI::PositiveNumber)->capture_default_str();
    classical->add_option("--spin", v.spin, "Spin parameter s")->check(CLI::NonNegativeNumber)->capture_default_str();
    classical->add_option("--orbit-radius", v.orbit_radius, "Meridian radius r")
        ->check(CLI::PositiveNumber)->capture_default_str();
    classical->add_option("--theta0", v.theta0, "Initial meridian angle")->capture_default_str();
    classical->add_option("--p-theta", v.p_theta, "Initial angular momentum")->capture_default_str();
    classical->add_option("--dtau", v.dtau, "Integrator step")->check(CLI::PositiveNumber)->capture_default_str();
    classical->add_option("--steps", v.steps, "Number of steps")
        ->check(CLI::Range(1, 100000000))->capture_default_str();
    classical->add_option("--potential-cos-amp", v.cos_amp, "Amplitude of a cos(theta) potential")
        ->capture_default_str();
    add_common(classical, v);
    state->subcommands[Command::classical] = classical;

    CLI::App* free_cmd = app.add_subcommand("spectrum-free", "Free 4*pi-periodic ring spectrum");
    free_cmd->add_option("--m-eff", v.m_eff, "Effective mass")->check(CLI::PositiveNumber)->capture_default_str();
    free_cmd->add_option("--hbar", v.hbar, "hbar")->check(CLI::PositiveNumber)->capture_default_str();
    free_cmd->add_option("--max-n", v.max_n, "Highest mode index")
        ->check(CLI::Range(0, 100000))->capture_default_str();
    free_cmd->add_option("--grid", v.grid, "Grid for the numerical cross-check (0 = analytic only)")
        ->check(CLI::Validator(even_grid_check, "EVENGRID"))->capture_default_str();
    free_cmd->add_flag("--eigenvectors", v.eigenvectors, "Also dump grid eigenvectors (needs --grid)");
    add_common(free_cmd, v);
    state->subcommands[Command::spectrum_free] = free_cmd;

    CLI::App* flux_cmd = app.add_subcommand("spectrum-flux", "Flux-threaded ring spectrum / sweep");
    flux_cmd->add_option("--m-eff", v.m_eff, "Effective mass")->check(CLI::PositiveNumber)->capture_default_str();
    flux_cmd->add_option("--hbar", v.hbar, "hbar")->check(CLI::PositiveNumber)->capture_default_str();
    flux_cmd->add_option("--flux", v.flux, "Single flux value A")->capture_default_str();
    flux_cmd->add_option("--flux-min", v.flux_min, "Sweep start")->capture_default_str();
    flux_cmd->add_option("--flux-max", v.flux_max, "Sweep end")->capture_default_str();
    flux_cmd->add_option("--flux-count", v.flux_count, "Sweep points (0 = use --flux)")
        ->check(CLI::Range(0, 100000))->capture_default_str();
    flux_cmd->add_option("--grid", v.flux_grid, "Discretization grid")
        ->check(CLI::Validator(even_grid_check, "EVENGRID"))->capture_default_str();
    flux_cmd->add_option("--levels", v.levels, "Levels per flux value")
        ->check(CLI::Range(1, 100000))->capture_default_str();
    add_common(flux_cmd, v);
    state->subcommands[Command::spectrum_flux] = flux_cmd;

    CLI::App* coulomb = app.add_subcommand("spectrum-coulomb", "Coulomb bound states on the 4*pi ring");
    coulomb->add_option("--k", v.coulomb_k, "Angular integer k")->capture_default_str();
    coulomb->add_option("--m-eff", v.m_eff, "Effective mass")->check(CLI::PositiveNumber)->capture_default_str();
    coulomb->add_option("--hbar", v.hbar, "hbar")->check(CLI::PositiveNumber)->capture_default_str();
    coulomb->add_option("--e2", v.charge_e2, "Coulomb coupling e^2")
        ->check(CLI::PositiveNumber)->capture_default_str();
    coulomb->add_option("--rmax", v.r_max, "Radial box size")->check(CLI::PositiveNumber)->capture_default_str();
    coulomb->add_option("--grid", v.coulomb_grid, "Radial grid points")
        ->check(CLI::Range(200, 10000000))->capture_default_str();
    coulomb->add_option("--levels", v.coulomb_levels, "Bound levels to compute")
        ->check(CLI::Range(1, 1000))->capture_default_str();
    coulomb->add_option("--n-max", v.paper_n_max, "Highest published level to tag")
        ->check(CLI::Range(1, 10000))->capture_default_str();
    coulomb->add_option("--c", v.light_speed, "Speed of light (sets alpha = e^2/(hbar c))")
        ->check(CLI::PositiveNumber)->capture_default_str();
    add_common(coulomb, v);
    state->subcommands[Command::spectrum_coulomb] = coulomb;

    CLI::App* validate = app.add_subcommand("validate", "Run the full acceptance suite");
    add_common(validate, v);
    state->subcommands[Command::validate] = validate;

    return state;
}

std::vector<std::string> read_config_tokens(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw UsageError("--config: cannot open '" + path + "'");
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(file, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--config: malformed line '" + line + "' (expected key=value)");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(0, 1);
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

struct ParseOutcome {
    Command command = Command::validate;
    ParsedValues values;
    std::string config_path;
};

ParseOutcome parse_tokens(const std::vector<std::string>& args) {
    auto state = build_app();
    std::vector<const char*> argv;
    argv.push_back("moebius");
    for (const auto& arg : args) argv.push_back(arg.c_str());

    try {
        state->app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& help) {
        std::cout << state->app.help();
        throw HelpRequested{};
    } catch (const CLI::CallForAllHelp& help) {
        std::cout << state->app.help("", CLI::AppFormatMode::All);
        throw HelpRequested{};
    } catch (const CLI::ParseError& err) {
        throw UsageError(err.what());
    }

    ParseOutcome outcome;
    outcome.values = state->values;
    outcome.config_path = state->values.config_path;
    for (const auto& [command, sub] : state->subcommands) {
        if (sub->parsed()) {
            outcome.command = command;
            return outcome;
        }
    }
    throw UsageError("a subcommand is required");
}

std::string command_name(Command command) {
    switch (command) {
        case Command::geometry: return "geometry";
        case Command::classical: return "classical";
        case Command::spectrum_free: return "spectrum-free";
        case Command::spectrum_flux: return "spectrum-flux";
        case Command::spectrum_coulomb: return "spectrum-coulomb";
        case Command::validate: return "validate";
    }
    return "?";
}

std::string num(double value) { return io::format_double(value); }

RunConfig to_config(const ParseOutcome& outcome) {
    const ParsedValues& v = outcome.values;
    RunConfig config;
    config.command = outcome.command;
    auto& p = config.params;
    p["out"] = v.out;

    switch (outcome.command) {
        case Command::geometry:
            p["radius"] = num(v.radius);
            p["half-width"] = num(v.half_width);
            p["nu"] = std::to_string(v.nu);
            p["nv"] = std::to_string(v.nv);
            p["format"] = v.format;
            if (!(v.half_width < v.radius)) {
                throw UsageError("--half-width: must be smaller than --radius");
            }
            break;
        case Command::classical:
            p["mass"] = num(v.mass);
            p["rho"] = num(v.rho);
            p["spin"] = num(v.spin);
            p["orbit-radius"] = num(v.orbit_radius);
            p["theta0"] = num(v.theta0);
            p["p-theta"] = num(v.p_theta);
            p["dtau"] = num(v.dtau);
            p["steps"] = std::to_string(v.steps);
            p["potential-cos-amp"] = num(v.cos_amp);
            break;
        case Command::spectrum_free:
            p["m-eff"] = num(v.m_eff);
            p["hbar"] = num(v.hbar);
            p["max-n"] = std::to_string(v.max_n);
            p["grid"] = std::to_string(v.grid);
            p["eigenvectors"] = v.eigenvectors ? "1" : "0";
            if (v.eigenvectors && v.grid == 0) {
                throw UsageError("--eigenvectors: requires a nonzero --grid");
            }
            break;
        case Command::spectrum_flux:
            p["m-eff"] = num(v.m_eff);
            p["hbar"] = num(v.hbar);
            p["flux"] = num(v.flux);
            p["flux-min"] = num(v.flux_min);
            p["flux-max"] = num(v.flux_max);
            p["flux-count"] = std::to_string(v.flux_count);
            p["grid"] = std::to_string(v.flux_grid);
            p["levels"] = std::to_string(v.levels);
            if (v.flux_grid == 0) {
                throw UsageError("--grid: spectrum-flux needs a nonzero grid");
            }
            if (v.levels > v.flux_grid / 2) {
                throw UsageError("--levels: must not exceed --grid / 2");
            }
            break;
        case Command::spectrum_coulomb:
            p["k"] = std::to_string(v.coulomb_k);
            p["m-eff"] = num(v.m_eff);
            p["hbar"] = num(v.hbar);
            p["e2"] = num(v.charge_e2);
            p["rmax"] = num(v.r_max);
            p["grid"] = std::to_string(v.coulomb_grid);
            p["levels"] = std::to_string(v.coulomb_levels);
            p["n-max"] = std::to_string(v.paper_n_max);
            p["c"] = num(v.light_speed);
            if (v.coulomb_levels > v.coulomb_grid - 2) {
                throw UsageError("--levels: must be below --grid - 2");
            }
            break;
        case Command::validate:
            break;
    }
    return config;
}

fs::path prepare_out_dir(const RunConfig& config) {
    const fs::path dir = config.get_string("out");
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    writer(file);
    std::cout << "wrote " << path.string() << "\n";
}

int run_geometry(const RunConfig& config) {
    const geometry::MoebiusShape shape{config.get_double("radius"), config.get_double("half-width")};
    const auto mesh = geometry::emit_mesh(shape, config.get_int("nu"), config.get_int("nv"));
    const fs::path dir = prepare_out_dir(config);
    if (config.get_string("format") == "json") {
        write_file(dir / "mesh.json", [&](std::ostream& out) { io::mesh_to_json(mesh, out); });
    } else {
        write_file(dir / "mesh.csv", [&](std::ostream& out) { io::mesh_to_csv(mesh, out); });
    }
    return 0;
}

int run_classical(const RunConfig& config) {
    classical::SpinningBody body;
    body.mass_m0 = config.get_double("mass");
    body.size_rho = config.get_double("rho");
    body.spin_s = config.get_double("spin");
    body.orbit_radius = config.get_double("orbit-radius");

    const double amp = config.get_double("potential-cos-amp");
    const auto V = classical::CirclePotential::from_function(
        [amp](double theta) { return amp * std::cos(theta); },
        [amp](double theta) { return -amp * std::sin(theta); });

    const auto init = classical::make_circular_state(body, config.get_double("theta0"),
                                                     config.get_double("p-theta"), V);
    const auto trajectory =
        classical::evolve(init, body, V, config.get_double("dtau"), config.get_int("steps"));

    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "trajectory.csv",
               [&](std::ostream& out) { io::trajectory_to_csv(trajectory, out); });
    write_file(dir / "residuals.json",
               [&](std::ostream& out) { io::residuals_to_json(trajectory, out); });
    return 0;
}

int run_spectrum_free(const RunConfig& config) {
    const double m_eff = config.get_double("m-eff");
    const double hbar = config.get_double("hbar");
    const int max_n = config.get_int("max-n");
    const int grid = config.get_int("grid");

    std::map<std::string, std::string> params{
        {"m_eff", num(m_eff)}, {"hbar", num(hbar)}, {"max_n", std::to_string(max_n)}};

    quantum::Spectrum spectrum;
    if (grid == 0) {
        spectrum = quantum::free_spectrum_analytic(m_eff, hbar, max_n);
    } else {
        const int levels = std::min(2 * max_n + 1, grid / 2);
        const auto H = quantum::make_ring_hamiltonian(m_eff, hbar, 0.0,
                                                      [](double) { return 0.0; }, grid);
        spectrum = quantum::ring_eigensolve(H, levels, config.get_bool("eigenvectors"));
    }

    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "spectrum_free.json",
               [&](std::ostream& out) { io::spectrum_to_json(params, spectrum, out); });
    if (config.get_bool("eigenvectors") && !spectrum.eigenvectors.empty()) {
        write_file(dir / "eigenvectors.csv",
                   [&](std::ostream& out) { io::eigenvectors_to_csv(spectrum, out); });
    }
    return 0;
}

int run_spectrum_flux(const RunConfig& config) {
    const double m_eff = config.get_double("m-eff");
    const double hbar = config.get_double("hbar");
    const int grid = config.get_int("grid");
    const int levels = config.get_int("levels");
    const int count = config.get_int("flux-count");

    std::vector<double> flux_values;
    if (count == 0) {
        flux_values.push_back(config.get_double("flux"));
    } else if (count == 1) {
        flux_values.push_back(config.get_double("flux-min"));
    } else {
        const double lo = config.get_double("flux-min");
        const double hi = config.get_double("flux-max");
        for (int i = 0; i < count; ++i) {
            flux_values.push_back(lo + (hi - lo) * i / (count - 1));
        }
    }

    std::vector<io::FluxSweepRow> rows;
    std::vector<quantum::FluxSpectrumPair> analytic;
    for (double A : flux_values) {
        const auto H = quantum::make_ring_hamiltonian(m_eff, hbar, A,
                                                      [](double) { return 0.0; }, grid);
        const auto spectrum = quantum::ring_eigensolve(H, levels);
        rows.push_back({A, spectrum.eigenvalues});
        analytic.push_back(quantum::flux_spectrum_analytic(m_eff, hbar, A, levels));
        std::cerr << "flux A=" << A << " done (" << levels << " levels)\n";
    }

    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "flux_sweep.csv",
               [&](std::ostream& out) { io::flux_sweep_to_csv(rows, out); });
    write_file(dir / "flux_report.json",
               [&](std::ostream& out) { io::flux_report_to_json(analytic, rows, out); });
    return 0;
}

int run_spectrum_coulomb(const RunConfig& config) {
    const int k = config.get_int("k");
    const double m_eff = config.get_double("m-eff");
    const double hbar = config.get_double("hbar");
    const double e2 = config.get_double("e2");
    const double c = config.get_double("c");
    const int levels = config.get_int("levels");

    const auto solved = quantum::coulomb_radial_solve(k, m_eff, hbar, e2,
                                                      config.get_double("rmax"),
                                                      config.get_int("grid"), levels);

    // Closed-form reference with the non-integer effective angular momentum.
    const double l_eff = 0.5 * (-1.0 + std::sqrt(1.0 + static_cast<double>(k) * k));
    std::vector<double> reference;
    for (int nr = 0; nr < levels; ++nr) {
        const double nu_eff = nr + l_eff + 1.0;
        reference.push_back(-0.5 * m_eff * e2 * e2 / (hbar * hbar * nu_eff * nu_eff));
    }

    const double alpha = e2 / (hbar * c);
    const auto paper = quantum::coulomb_levels_paper(m_eff, alpha, c, config.get_int("n-max"), k);

    std::map<std::string, std::string> params{
        {"k", std::to_string(k)},  {"m_eff", num(m_eff)},
        {"hbar", num(hbar)},       {"e2", num(e2)},
        {"rmax", config.params.at("rmax")}, {"grid", config.params.at("grid")},
        {"alpha", num(alpha)}};

    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "coulomb.json", [&](std::ostream& out) {
        io::coulomb_to_json(params, solved.energies, reference, paper, out);
    });
    if (!solved.warning.empty()) {
        std::cerr << "warning: " << solved.warning << "\n";
    }
    return 0;
}

int run_validate(const RunConfig& config) {
    const auto report = validate::run_all();
    std::cout << validate::render_with_timing(report);
    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "validate_report.txt",
               [&](std::ostream& out) { out << validate::render(report); });
    return report.all_passed ? 0 : 1;
}

}  // namespace

double RunConfig::get_double(const std::string& key) const { return std::stod(params.at(key)); }
int RunConfig::get_int(const std::string& key) const { return std::stoi(params.at(key)); }
bool RunConfig::get_bool(const std::string& key) const { return params.at(key) == "1"; }
const std::string& RunConfig::get_string(const std::string& key) const { return params.at(key); }

RunConfig parse_args(const std::vector<std::string>& args) {
    ParseOutcome outcome = parse_tokens(args);
    if (!outcome.config_path.empty()) {
        // Splice the config tokens in right after the subcommand so that
        // explicit flags, parsed later, take precedence.
        if (args.empty()) throw UsageError("a subcommand is required");
        std::vector<std::string> spliced;
        spliced.push_back(args.front());
        const auto tokens = read_config_tokens(outcome.config_path);
        spliced.insert(spliced.end(), tokens.begin(), tokens.end());
        spliced.insert(spliced.end(), args.begin() + 1, args.end());
        outcome = parse_tokens(spliced);
    }
    return to_config(outcome);
}

int run(const RunConfig& config) {
    switch (config.command) {
        case Command::geometry: return run_geometry(config);
        case Command::classical: return run_classical(config);
        case Command::spectrum_free: return run_spectrum_free(config);
        case Command::spectrum_flux: return run_spectrum_flux(config);
        case Command::spectrum_coulomb: return run_spectrum_coulomb(config);
        case Command::validate: return run_validate(config);
    }
    return 1;
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        const RunConfig config = parse_args(args);
        try {
            return run(config);
        } catch (const std::exception& err) {
            std::cerr << "error: " << err.what() << "\n";
            return 1;
        }
    } catch (const HelpRequested&) {
        return 0;
    } catch (const UsageError& err) {
        std::cerr << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << err.what() << "\n";
        return 2;
    }
}

}  // namespace moebius::cli
