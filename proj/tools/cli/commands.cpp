#include "commands.hpp"

#include "ucp/avalanche.hpp"
#include "ucp/constants.hpp"
#include "ucp/extraction.hpp"
#include "ucp/io.hpp"
#include "ucp/king_poisson.hpp"
#include "ucp/space_charge.hpp"
#include "ucp/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace ucp::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    unsigned jobs = 1;
    std::string units = "si";
    std::string out_dir = ".";
};

// Console formatting only; files are always SI.
class Display {
public:
    explicit Display(bool lab) : lab_(lab) {}

    std::string field(double v) const { return show(v, Unit::VoltPerMetre, Unit::VoltPerCentimetre); }
    std::string length(double v) const { return show(v, Unit::Metre, Unit::Micrometre); }
    std::string density(double v) const { return show(v, Unit::PerCubicMetre, Unit::PerCubicCentimetre); }
    std::string energy(double v) const { return show(v, Unit::Joule, Unit::MilliElectronVolt); }
    std::string time(double v) const { return show(v, Unit::Second, Unit::Nanosecond); }

private:
    std::string show(double v, Unit si, Unit lab) const {
        const Unit u = lab_ ? lab : si;
        std::ostringstream s;
        s << std::setprecision(5) << convert_units(v, si, u) << ' ' << unit_info(u).tag;
        return s.str();
    }

    bool lab_;
};

// Runs f(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
    }
}

std::string eta_tag(double eta) {
    std::string s = format_number(eta);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

void check_etas(const std::vector<double>& etas) {
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (!(etas[i] > 0.0) || etas[i] > 30.0) throw ConfigError("eta values must lie in (0, 30]");
        if (i > 0 && !(etas[i] > etas[i - 1])) throw ConfigError("eta values must be strictly ascending");
    }
}

fs::path output_dir(const GlobalOptions& g) {
    fs::path dir(g.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw ConfigError("output directory " + dir.string() + " is not writable");
    return dir;
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
    double ni = 0.0;
    double vth = 0.0;
    double eth = 0.0;
    double sigma_um = 0.0;
    double gap_mm = 1.57;
    double rmax_sigma = 10.0;
    std::size_t points = 401;
    CLI::Option* ni_opt = nullptr;
    CLI::Option* vth_opt = nullptr;
    CLI::Option* eth_opt = nullptr;
};

void add_threshold(CLI::App& app, ThresholdArgs& a) {
    a.ni_opt = app.add_option("--ni", a.ni, "Ion number N_i")->check(CLI::PositiveNumber);
    a.vth_opt = app.add_option("--vth", a.vth, "Measured threshold voltage (V); inverts for N_i")
                    ->check(CLI::PositiveNumber);
    a.eth_opt = app.add_option("--eth", a.eth, "Measured threshold field (V/m); inverts for N_i")
                    ->check(CLI::PositiveNumber);
    a.ni_opt->excludes(a.vth_opt)->excludes(a.eth_opt);
    a.vth_opt->excludes(a.eth_opt);
    app.add_option("--sigma-um", a.sigma_um, "RMS cloud radius (um)")->required()->check(CLI::PositiveNumber);
    app.add_option("--gap-mm", a.gap_mm, "Extraction grid gap (mm)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--rmax-sigma", a.rmax_sigma, "Field profile extent (sigma)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--points", a.points, "Field profile points")->capture_default_str()->check(CLI::Range(2, 1000000));
}

int cmd_threshold(const ThresholdArgs& a, const GlobalOptions& g, std::ostream& out) {
    const Display show(g.units == "lab");
    const double sigma = a.sigma_um * 1e-6;
    const double gap = a.gap_mm * 1e-3;
    std::optional<GaussianIonCloud> cloud;
    if (a.ni_opt->count()) {
        cloud.emplace(a.ni, sigma);
    } else if (a.vth_opt->count() || a.eth_opt->count()) {
        const double field = a.eth_opt->count() ? a.eth : a.vth / gap;
        cloud = invert_threshold(field, sigma);
        out << "inverted ion number: " << std::setprecision(8) << cloud->ion_count() << '\n';
    } else {
        throw ConfigError("threshold needs --ni, --vth or --eth");
    }
    const auto& peak = field_maximum();
    const double eth = threshold_field(*cloud);
    out << std::setprecision(6);
    out << "ion number:        " << cloud->ion_count() << '\n'
        << "sigma:             " << show.length(sigma) << '\n'
        << "peak ion density:  " << show.density(cloud->peak_density()) << '\n'
        << "field coefficient: " << peak.coefficient << " at r* = " << peak.location << " sigma\n"
        << "threshold field:   " << show.field(eth) << '\n'
        << "threshold voltage: " << eth * gap << " V across " << show.length(gap) << '\n';

    const auto profile = field_profile(*cloud, a.rmax_sigma * sigma, a.points);
    CsvTable table{{"r_m", "field_v_per_m"}, {}};
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        table.rows.push_back({profile.radii[i], profile.field_magnitude[i]});
    }
    const auto path = output_dir(g) / "field_profile.csv";
    write_csv_file(path, table);
    out << "wrote " << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- solve

struct CloudArgs {
    double ni = 4e5;
    double ne = 3.8e5;
    double sigma_um = 250.0;
    std::size_t grid_points = 2000;
};

void add_cloud(CLI::App& app, CloudArgs& a) {
    app.add_option("--ni", a.ni, "Ion number N_i")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--ne", a.ne, "Trapped electron number N_e")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--sigma-um", a.sigma_um, "RMS cloud radius (um)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--grid-points", a.grid_points, "Radial grid points of the Poisson solve")->capture_default_str()
        ->check(CLI::Range(16, 10000000));
}

KingSolverOptions solver_options(const CloudArgs& a) {
    KingSolverOptions o;
    o.grid_points = a.grid_points;
    return o;
}

struct SolveArgs {
    CloudArgs cloud;
    std::vector<double> etas{4, 6, 8, 10, 12};
    bool profiles = false;
};

void add_solve(CLI::App& app, SolveArgs& a) {
    add_cloud(app, a.cloud);
    app.add_option("--eta", a.etas, "Central King parameters")->capture_default_str()->delimiter(',');
    app.add_flag("--profiles", a.profiles, "Also write the radial profile of each solve");
}

int cmd_solve(const SolveArgs& a, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    check_etas(a.etas);
    const Display show(g.units == "lab");
    const GaussianIonCloud cloud(a.cloud.ni, a.cloud.sigma_um * 1e-6);
    const auto options = solver_options(a.cloud);
    std::vector<std::optional<KingSolution>> solutions(a.etas.size());
    std::vector<std::string> errors(a.etas.size());
    std::vector<std::exception_ptr> fatal(a.etas.size());
    parallel_for(a.etas.size(), g.jobs, [&](std::size_t i) {
        try {
            solutions[i] = solve_selfconsistent(cloud, a.cloud.ne, a.etas[i], options);
        } catch (const ConvergenceError& e) {
            errors[i] = e.what();  // reported per point, the scan goes on
        } catch (...) {
            fatal[i] = std::current_exception();
        }
    });
    for (const auto& e : fatal) {
        if (e) std::rethrow_exception(e);
    }

    const double depth = trap_depth_estimate(cloud.ion_count(), a.cloud.ne, cloud.sigma());
    const fs::path dir = output_dir(g);
    CsvTable table{{"eta", "Te_kelvin", "ne0_per_m3", "delta_N"}, {}};
    out << std::setprecision(6) << "delta N = " << cloud.ion_count() - a.cloud.ne
        << ", trap depth estimate = " << show.energy(depth) << '\n';
    int failures = 0;
    for (std::size_t i = 0; i < a.etas.size(); ++i) {
        if (!solutions[i]) {
            err << "eta = " << a.etas[i] << ": " << errors[i] << '\n';
            ++failures;
            continue;
        }
        const auto& s = *solutions[i];
        table.rows.push_back({s.eta, s.temperature, s.central_electron_density, cloud.ion_count() - a.cloud.ne});
        out << "eta = " << s.eta << ": T_e = " << s.temperature << " K, n_e0 = "
            << show.density(s.central_electron_density) << ", E_t = " << show.energy(s.escape_energy)
            << ", eta kT / depth = " << s.escape_energy / depth << ", residual = " << s.poisson_residual
            << ", tau_ee = " << show.time(thermalization_time(s.central_electron_density, s.temperature)) << '\n';
        if (a.profiles) {
            CsvTable profile{{"r_m", "eta_t", "ne_per_m3"}, {}};
            for (std::size_t k = 0; k < s.radii.size(); ++k) {
                profile.rows.push_back({s.radii[k], s.eta_profile[k], s.electron_density[k]});
            }
            write_csv_file(dir / ("profile_eta_" + eta_tag(s.eta) + ".csv"), profile);
        }
    }
    write_csv_file(dir / "solve.csv", table);
    out << "wrote " << (dir / "solve.csv").string() << '\n';
    if (failures) throw ConvergenceError(std::to_string(failures) + " solve(s) failed");
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    CloudArgs cloud;
    double eta = 10.0;
    double gap_mm = 1.57;
    double v_max = -1.0;  // negative: 1.5 V_th
    std::size_t points = 61;
    CLI::Option* vmax_opt = nullptr;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
    add_cloud(app, a.cloud);
    app.add_option("--eta", a.eta, "Central King parameter")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--gap-mm", a.gap_mm, "Extraction grid gap (mm)")->capture_default_str()->check(CLI::PositiveNumber);
    a.vmax_opt = app.add_option("--v-max", a.v_max, "Largest V1 (V); default 1.5 V_th; 0 gives a single zero row")
                     ->check(CLI::NonNegativeNumber);
    app.add_option("--points", a.points, "Voltage points")->capture_default_str()->check(CLI::Range(1, 1000000));
}

int cmd_sweep(const SweepArgs& a, const GlobalOptions& g, std::ostream& out) {
    if (!(a.eta <= 30.0)) throw ConfigError("eta must lie in (0, 30]");
    const GaussianIonCloud cloud(a.cloud.ni, a.cloud.sigma_um * 1e-6);
    const double gap = a.gap_mm * 1e-3;
    const double vth = threshold_field(cloud) * gap;
    const double v_max = a.vmax_opt->count() ? a.v_max : 1.5 * vth;
    const std::size_t points = v_max > 0.0 ? std::max<std::size_t>(a.points, 2) : 1;

    const auto solution = solve_selfconsistent(cloud, a.cloud.ne, a.eta, solver_options(a.cloud));
    std::vector<double> volts(points);
    std::vector<double> fields(points);
    for (std::size_t i = 0; i < points; ++i) {
        volts[i] = points > 1 ? v_max * static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
        fields[i] = volts[i] / gap;
    }
    const auto curve = simulate_sweep(solution, fields);

    // gi1 = ejected, gi2 = still trapped; infer restores the count with --mean-ne N_e
    CsvTable table{{"v1_volts", "gi1", "gi2"}, {}};
    for (std::size_t i = 0; i < points; ++i) {
        const double ejected = curve.ejected_count[i];
        table.rows.push_back({volts[i], ejected, std::max(0.0, solution.electron_count - ejected)});
    }
    const fs::path dir = output_dir(g);
    write_csv_file(dir / "sweep.csv", table);

    SvgPlot plot;
    plot.title = "Simulated extraction sweep (eta = " + format_number(a.eta) + ")";
    plot.x_label = "V1 (V)";
    plot.y_label = "ejected electrons";
    plot.x = volts;
    plot.y = curve.ejected_count;
    plot.marker_x = vth;
    plot.marker_label = "V1th";
    write_text_file(dir / "sweep.svg", render_svg(plot));

    out << std::setprecision(6) << "T_e = " << solution.temperature << " K, N_e = " << solution.electron_count
        << ", V1_th = " << vth << " V\n";
    if (points >= 5) {
        try {
            const auto fit = fit_threshold(curve);
            out << "fitted knee: " << fit.threshold_field * gap << " V, plateau " << fit.plateau << '\n';
        } catch (const DataError& e) {
            out << "no knee fit: " << e.what() << '\n';
        }
    }
    out << "wrote " << (dir / "sweep.csv").string() << " and sweep.svg (re-ingest with --mean-ne "
        << format_number(solution.electron_count) << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    std::string input;
    double sigma_um = 0.0;
    double gap_mm = 1.57;
    double mean_ne = 0.0;
    std::vector<double> etas{4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::size_t grid_points = 2000;
};

void add_infer(CLI::App& app, InferArgs& a) {
    app.add_option("--input", a.input, "Sweep CSV with columns v1_volts,gi1,gi2[,gi3]")->required();
    app.add_option("--sigma-um", a.sigma_um, "RMS cloud radius (um)")->required()->check(CLI::PositiveNumber);
    app.add_option("--gap-mm", a.gap_mm, "Extraction grid gap (mm)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--mean-ne", a.mean_ne, "Shot-averaged electron number used to calibrate counts")
        ->required()
        ->check(CLI::PositiveNumber);
    app.add_option("--eta", a.etas, "Central King parameters")->capture_default_str()->delimiter(',');
    app.add_option("--grid-points", a.grid_points, "Radial grid points of the Poisson solve")->capture_default_str()
        ->check(CLI::Range(16, 10000000));
}

int cmd_infer(const InferArgs& a, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    check_etas(a.etas);
    const Display show(g.units == "lab");
    std::vector<CsvWarning> warnings;
    const CsvTable table = read_csv_file(a.input, &warnings);
    for (const auto& w : warnings) err << "warning: " << a.input << ':' << w.line << ": " << w.message << " (row skipped)\n";
    const auto v_col = table.column("v1_volts");
    const auto g1_col = table.column("gi1");
    const auto g2_col = table.column("gi2");
    const auto g3_col = table.column("gi3");
    if (!v_col || !g1_col || !g2_col) throw DataError("sweep CSV needs columns v1_volts, gi1, gi2");
    if (table.rows.empty()) throw DataError("sweep CSV has no data rows");

    std::vector<PlasmaObservation> shots;
    for (const auto& row : table.rows) {
        PlasmaObservation shot;
        shot.pulse1_voltage = row[*v_col];
        shot.gi1_counts = row[*g1_col];
        shot.gi2_counts = row[*g2_col];
        if (g3_col) shot.gi3_counts = row[*g3_col];
        shot.grid_gap = a.gap_mm * 1e-3;
        shot.mean_electron_number = a.mean_ne;
        try {
            shot.validate();
        } catch (const DomainError& e) {
            throw DataError(e.what());
        }
        shots.push_back(shot);
    }
    std::size_t dropped = 0;
    const auto curve = sweep_from_observations(shots, &dropped);
    if (dropped) err << "warning: dropped " << dropped << " shot(s) with gi1 + gi2 = 0\n";

    KingSolverOptions solver;
    solver.grid_points = a.grid_points;
    const auto result = infer_plasma_state(curve, a.sigma_um * 1e-6, a.etas, solver, g.jobs);

    CsvTable csv{{"eta", "Te_kelvin", "ne0_per_m3", "delta_N"}, {}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : result.te_vs_eta) {
        if (p.error) {
            err << "eta = " << p.eta << ": " << *p.error << '\n';
            rows.push_back({{"eta", p.eta}, {"error", *p.error}});
            continue;
        }
        csv.rows.push_back({p.eta, p.temperature, p.central_electron_density, result.delta_n});
        rows.push_back({{"eta", p.eta}, {"Te_kelvin", p.temperature}, {"ne0_per_m3", p.central_electron_density}});
    }
    const fs::path dir = output_dir(g);
    write_csv_file(dir / "inference.csv", csv);

    const double gap = a.gap_mm * 1e-3;
    nlohmann::json summary{
        {"input", a.input},
        {"threshold_field_v_per_m", result.threshold_field},
        {"threshold_voltage_v", result.threshold_field * gap},
        {"sigma_m", result.cloud.sigma()},
        {"ion_count", result.cloud.ion_count()},
        {"peak_ion_density_per_m3", result.cloud.peak_density()},
        {"electron_count", result.electron_count},
        {"delta_N", result.delta_n},
        {"fit",
         {{"plateau", result.fit.plateau},
          {"plateau_points", result.fit.plateau_points},
          {"edge_points", result.fit.edge_points},
          {"low_confidence", result.fit.low_confidence}}},
        {"sweep_points", curve.size()},
        {"skipped_rows", warnings.size()},
        {"dropped_shots", dropped},
        {"te_vs_eta", rows},
    };
    write_text_file(dir / "inference.json", summary.dump(2) + "\n");

    out << std::setprecision(6) << "threshold: " << show.field(result.threshold_field) << " ("
        << result.threshold_field * gap << " V)" << (result.fit.low_confidence ? " [low confidence]" : "") << '\n'
        << "N_i = " << result.cloud.ion_count() << ", N_e = " << result.electron_count
        << ", delta N = " << result.delta_n << '\n';
    for (const auto& p : result.te_vs_eta) {
        if (!p.error && (p.eta == 4.0 || p.eta == 8.0 || p.eta == 12.0)) {
            out << "T_e(eta = " << p.eta << ") = " << p.temperature << " K\n";
        }
    }
    out << "wrote " << (dir / "inference.csv").string() << " and inference.json\n";
    return kExitOk;
}

// ---------------------------------------------------------------- avalanche

struct AvalancheArgs {
    int n = 30;
    double defect = RydbergSample::kCesiumDDefect;
    double atoms = 1e4;
    double energy_uj = 10.0;
    std::vector<double> energies{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double t_end_us = 1.0;
    std::size_t steps = 200;
    double te = 50.0;
    double fe = 0.95;
    double rate = 1e-9;
    double sigma_um = 250.0;
    double ions_per_uj = 4e4;
    double boundary = 3.0;
};

void add_avalanche(CLI::App& app, AvalancheArgs& a) {
    app.add_option("--n", a.n, "Principal quantum number")->capture_default_str();
    app.add_option("--defect", a.defect, "Quantum defect")->capture_default_str();
    app.add_option("--atoms", a.atoms, "Rydberg atom number")->capture_default_str();
    app.add_option("--energy-uj", a.energy_uj, "Plasma laser energy for the trajectory (uJ)")->capture_default_str();
    app.add_option("--energies", a.energies, "Plasma laser energies for the efficiency table (uJ)")->capture_default_str()
        ->delimiter(',');
    app.add_option("--t-end-us", a.t_end_us, "Interaction time (us)")->capture_default_str();
    app.add_option("--steps", a.steps, "Trajectory time steps")->capture_default_str();
    app.add_option("--te", a.te, "Electron temperature (K)")->capture_default_str();
    app.add_option("--fe", a.fe, "Central electron fraction n_e / n_i")->capture_default_str();
    app.add_option("--rate", a.rate, "Ionization rate coefficient (m^3/s)")->capture_default_str();
    app.add_option("--sigma-um", a.sigma_um, "Initial RMS radius (um)")->capture_default_str();
    app.add_option("--ions-per-uj", a.ions_per_uj, "Ions per uJ of plasma laser energy")->capture_default_str();
    app.add_option("--boundary", a.boundary, "Regime boundary factor c in E_b = c k T_e")->capture_default_str();
}

int cmd_avalanche(const AvalancheArgs& a, const GlobalOptions& g, std::ostream& out) {
    const Display show(g.units == "lab");
    const RydbergSample sample(a.n, a.atoms, a.defect);
    AvalancheParameters params;
    params.ion_count = a.ions_per_uj * a.energy_uj;
    params.sigma0 = a.sigma_um * 1e-6;
    params.electron_temperature = a.te;
    params.electron_fraction = a.fe;
    params.rate_coefficient = a.rate;
    params.ions_per_microjoule = a.ions_per_uj;
    const double t_end = a.t_end_us * 1e-6;

    const auto traj = run_avalanche(sample, params, t_end, a.steps);
    CsvTable trajectory{{"t_s", "sigma_m", "ni0_per_m3", "rydberg_fraction"}, {}};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        trajectory.rows.push_back({traj.times[i], traj.sigma[i], traj.peak_ion_density[i], traj.surviving_fraction[i]});
    }
    const auto efficiency = efficiency_vs_density(sample, a.energies, t_end, params);
    CsvTable eff{{"laser_energy_uj", "efficiency_percent"}, {}};
    SvgPlot plot;
    plot.title = "Rydberg ionization efficiency, n = " + std::to_string(a.n) + ", t = " + format_number(a.t_end_us) +
                 " us";
    plot.x_label = "plasma laser energy (uJ)";
    plot.y_label = "ionized Rydberg atoms (%)";
    for (const auto& p : efficiency) {
        eff.rows.push_back({p.laser_energy_uj, p.efficiency_percent});
        plot.x.push_back(p.laser_energy_uj);
        plot.y.push_back(p.efficiency_percent);
    }
    const fs::path dir = output_dir(g);
    write_csv_file(dir / "avalanche_trajectory.csv", trajectory);
    write_csv_file(dir / "efficiency.csv", eff);
    if (!plot.x.empty()) write_text_file(dir / "efficiency.svg", render_svg(plot));

    const auto regime = classify_regime(sample, a.te, a.boundary);
    out << std::setprecision(6) << "regime: n = " << a.n << ", T_e = " << a.te
        << " K, E_b = " << show.energy(sample.binding_energy()) << ", E_b / (" << a.boundary
        << " k T_e) = " << regime.ratio << " -> " << to_string(regime.regime) << '\n'
        << "surviving fraction at " << show.time(t_end) << " (" << a.energy_uj
        << " uJ): " << traj.surviving_fraction.back() << '\n'
        << "wrote " << (dir / "avalanche_trajectory.csv").string() << ", efficiency.csv and efficiency.svg\n";
    return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return kExitConfig;
        case ErrorKind::Data: return kExitData;
        case ErrorKind::Domain:
        case ErrorKind::Solver: return kExitSolver;
    }
    return kExitSolver;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trapped-electron models for ultracold neutral plasmas", "ucp"};
    app.set_config("--config", "", "TOML key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--jobs", global.jobs, "Worker threads for parameter scans")->capture_default_str()->check(CLI::Range(1u, 1024u));
    app.add_option("--units", global.units, "Console units: si or lab (V/cm, um, cm^-3, meV, ns)")->capture_default_str()
        ->check(CLI::IsMember({"si", "lab"}));
    app.add_option("--out", global.out_dir, "Output directory")->capture_default_str();

    ThresholdArgs threshold;
    SolveArgs solve;
    SweepArgs sweep;
    InferArgs infer;
    AvalancheArgs avalanche;
    auto* c_threshold = app.add_subcommand("threshold", "Threshold field of a Gaussian ion cloud, or its inversion");
    auto* c_solve = app.add_subcommand("solve", "Self-consistent King solves: T_e and n_e0 versus eta");
    auto* c_sweep = app.add_subcommand("sweep", "Simulated extraction sweep written as CSV and SVG");
    auto* c_infer = app.add_subcommand("infer", "Infer N_i, delta N and T_e(eta) from a sweep CSV");
    auto* c_avalanche = app.add_subcommand("avalanche", "Rydberg avalanche trajectory and efficiency table");
    add_threshold(*c_threshold, threshold);
    add_solve(*c_solve, solve);
    add_sweep(*c_sweep, sweep);
    add_infer(*c_infer, infer);
    add_avalanche(*c_avalanche, avalanche);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun 'ucp --help' for usage\n";
        return kExitConfig;
    }

    try {
        if (c_threshold->parsed()) return cmd_threshold(threshold, global, out);
        if (c_solve->parsed()) return cmd_solve(solve, global, out, err);
        if (c_sweep->parsed()) return cmd_sweep(sweep, global, out);
        if (c_infer->parsed()) return cmd_infer(infer, global, out, err);
        if (c_avalanche->parsed()) return cmd_avalanche(avalanche, global, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitConfig;
}

}  // namespace ucp::cli
