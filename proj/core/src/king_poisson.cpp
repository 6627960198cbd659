#include "ucp/king_poisson.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"
#include "ucp/king_distribution.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace ucp {
namespace {

constexpr double kSqrtHalfPi = 1.2533141373155003;

// Dimensionless problem in s = r / sigma with u(s) = eta_t:
//   (1/s^2) d/ds (s^2 du/ds) = -a exp(-s^2/2) + b rho(u)
// a = Lambda = e^2 n_i^0 sigma^2 / (eps0 k T), b rho(u) = Lambda n_e / n_i^0.
// Finite volumes on a geometric node grid; cell 0 reaches the origin (zero flux),
// the last node sits on the outer radius where the Coulomb condition
// u + s u' = 0 closes the problem (eta_t -> 0 at infinity, no charge outside).
// Profiles are stored as u_0 plus offsets u_i - u_0 so that the tiny flux
// differences near the origin stay free of cancellation.
struct Profile {
    double center = 0.0;
    std::vector<double> offset;  // offset[0] == 0

    double value(std::size_t i) const { return center + offset[i]; }
    std::vector<double> values() const {
        std::vector<double> u(offset.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = value(i);
        return u;
    }
};

class KingProblem {
public:
    explicit KingProblem(const KingSolverOptions& opt) { build_grid(opt); }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& faces() const { return faces_; }
    const std::vector<double>& volumes() const { return volume_; }

    // Newton with an Armijo line search on the convex energy whose gradient is
    // minus the residual. Converges from any starting profile for fixed (a, b).
    std::optional<Profile> solve(double a, double b, const Profile* start) const {
        Profile p = start ? *start : initial_guess(a, b);
        const std::size_t n = size();
        std::vector<double> res(n), diag(n), du(n);
        for (int it = 0; it < 400; ++it) {
            const double scaled = residual(a, b, p, res, &diag);
            if (scaled < 1e-13) return p;
            solve_tridiagonal(diag, res, du);
            double max_step = 0.0;
            double slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                max_step = std::max(max_step, std::abs(du[i]));
                slope -= res[i] * du[i];
            }
            if (max_step < 1e-13 * std::max(1.0, std::abs(p.center))) return p;
            if (max_step < 0.05) {
                // quadratic regime: energy differences are below roundoff here
                p = step(p, du, 1.0);
                continue;
            }
            const double e0 = energy(a, b, p);
            double t = 1.0;
            bool accepted = false;
            Profile trial;
            for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
                trial = step(p, du, t);
                const double e1 = energy(a, b, trial);
                if (std::isfinite(e1) && e1 <= e0 + 1e-4 * t * slope + 1e-14 * std::abs(e0)) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) return std::nullopt;
            p = std::move(trial);
        }
        return std::nullopt;
    }

    // Largest |R_i| relative to the magnitude of the terms that make it up.
    double residual(double a, double b, const Profile& p, std::vector<double>& res,
                    std::vector<double>* hess_diag) const {
        const std::size_t n = size();
        const auto& w = p.offset;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = p.value(i);
            const double flux_in = i == 0 ? 0.0 : coef_[i] * (w[i] - w[i - 1]);
            const double flux_out = i + 1 < n ? coef_[i + 1] * (w[i + 1] - w[i]) : -faces_[n] * u;
            const double electrons = b * volume_[i] * reduced_density_or_zero(u);
            const double ions = a * ion_[i];
            res[i] = flux_out - flux_in + ions - electrons;
            const double scale = std::abs(flux_out) + std::abs(flux_in) + ions + electrons + 1e-300;
            worst = std::max(worst, std::abs(res[i]) / scale);
            if (hess_diag) {
                double d = b * volume_[i] * reduced_density_derivative(u);
                if (i > 0) d += coef_[i];
                d += i + 1 < n ? coef_[i + 1] : faces_[n];
                (*hess_diag)[i] = d;
            }
        }
        return worst;
    }

    // Residual of the continuous equation at the interior nodes, max |lap u - source| / a,
    // from a three-point stencil on the offsets.
    double pointwise_residual(double a, double b, const Profile& p) const {
        const auto& w = p.offset;
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < size(); ++i) {
            const double h0 = nodes_[i] - nodes_[i - 1];
            const double h1 = nodes_[i + 1] - nodes_[i];
            const double g0 = (w[i] - w[i - 1]) / h0;
            const double g1 = (w[i + 1] - w[i]) / h1;
            const double d1 = (g1 * h0 + g0 * h1) / (h0 + h1);
            const double d2 = 2.0 * (g1 - g0) / (h0 + h1);
            const double s = nodes_[i];
            const double source = -a * std::exp(-0.5 * s * s) + b * reduced_density_or_zero(p.value(i));
            worst = std::max(worst, std::abs(d2 + 2.0 * d1 / s - source) / a);
        }
        return worst;
    }

    double electron_fraction(double a, double b, const Profile& p) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < size(); ++i) sum += volume_[i] * reduced_density_or_zero(p.value(i));
        return 4.0 * std::numbers::pi * (b / a) * sum / kTwoPiPow32;
    }

    // Value at s = 0 from the regular expansion u = u0 + k s^2.
    double central_value(const Profile& p) const {
        const double s0 = nodes_[0] * nodes_[0];
        const double s1 = nodes_[1] * nodes_[1];
        return p.center - p.offset[1] * s0 / (s1 - s0);
    }

private:
    static Profile step(const Profile& p, const std::vector<double>& du, double t) {
        Profile q;
        q.center = p.center + t * du[0];
        q.offset.resize(p.offset.size());
        q.offset[0] = 0.0;
        for (std::size_t i = 1; i < du.size(); ++i) q.offset[i] = p.offset[i] + t * (du[i] - du[0]);
        return q;
    }

    void build_grid(const KingSolverOptions& opt) {
        const std::size_t n = opt.grid_points;
        nodes_.resize(n);
        const double ratio = std::log(opt.outer_radius / opt.inner_radius) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) nodes_[i] = opt.inner_radius * std::exp(ratio * static_cast<double>(i));
        nodes_.back() = opt.outer_radius;
        faces_.assign(n + 1, 0.0);
        for (std::size_t i = 1; i < n; ++i) faces_[i] = 0.5 * (nodes_[i - 1] + nodes_[i]);
        faces_[n] = opt.outer_radius;
        coef_.assign(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) coef_[i] = faces_[i] * faces_[i] / (nodes_[i] - nodes_[i - 1]);
        volume_.resize(n);
        ion_.resize(n);
        auto ion_integral = [](double s) { return kSqrtHalfPi * gaussian_enclosed_fraction(s); };
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = faces_[i];
            const double hi = faces_[i + 1];
            volume_[i] = (hi * hi * hi - lo * lo * lo) / 3.0;
            ion_[i] = ion_integral(hi) - ion_integral(lo);
        }
    }

    Profile initial_guess(double a, double b) const {
        Profile p;
        p.offset.resize(size());
        for (std::size_t i = 0; i < size(); ++i) {
            const double s = nodes_[i];
            const double bare = a * kSqrtHalfPi * std::erf(s / std::numbers::sqrt2) / s;
            const double neutral = inverse_reduced_density(a * std::exp(-0.5 * s * s) / b);
            const double u = std::min(bare, neutral);
            if (i == 0) p.center = u;
            p.offset[i] = u - p.center;
        }
        return p;
    }

    double energy(double a, double b, const Profile& p) const {
        const std::size_t n = size();
        const auto& w = p.offset;
        const double edge = p.value(n - 1);
        double e = 0.5 * faces_[n] * edge * edge;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                const double d = w[i] - w[i - 1];
                e += 0.5 * coef_[i] * d * d;
            }
            const double u = p.value(i);
            e += b * volume_[i] * reduced_density_integral(u) - a * ion_[i] * u;
        }
        return e;
    }

    // H du = r with H = -dR/du (symmetric, diagonally dominant).
    void solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& rhs,
                           std::vector<double>& x) const {
        const std::size_t n = size();
        std::vector<double> c(n), d(n);
        // off-diagonals are -coef_[i] between i-1 and i
        double denom = diag[0];
        c[0] = n > 1 ? -coef_[1] / denom : 0.0;
        d[0] = rhs[0] / denom;
        for (std::size_t i = 1; i < n; ++i) {
            const double lower = -coef_[i];
            denom = diag[i] - lower * c[i - 1];
            c[i] = i + 1 < n ? -coef_[i + 1] / denom : 0.0;
            d[i] = (rhs[i] - lower * d[i - 1]) / denom;
        }
        x[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    }

    std::vector<double> nodes_;
    std::vector<double> faces_;
    std::vector<double> coef_;    // face i: f_i^2 / (s_i - s_{i-1})
    std::vector<double> volume_;  // int s^2 ds over the cell
    std::vector<double> ion_;     // int s^2 exp(-s^2/2) ds over the cell
};

struct RootResult {
    double x;
    double fx;
};

// Bracket a root of an increasing function by geometric stepping from x0, then TOMS 748.
RootResult find_increasing_root(const std::function<double(double)>& f, double x0, double step,
                                const char* what) {
    double lo = x0;
    double flo = f(lo);
    double hi = lo;
    double fhi = flo;
    int expansions = 0;
    if (flo < 0.0) {
        while (fhi < 0.0) {
            lo = hi;
            flo = fhi;
            hi += step;
            fhi = f(hi);
            if (++expansions > 60) throw ConvergenceError(std::string("cannot bracket ") + what);
        }
    } else {
        while (flo > 0.0) {
            hi = lo;
            fhi = flo;
            lo -= step;
            flo = f(lo);
            if (++expansions > 60) throw ConvergenceError(std::string("cannot bracket ") + what);
        }
    }
    if (flo == 0.0) return {lo, 0.0};
    if (fhi == 0.0) return {hi, 0.0};
    std::uintmax_t max_iter = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

struct DimensionlessSolution {
    double a = 0.0;
    double b = 0.0;
    Profile u;
    double fraction = 0.0;
    double center = 0.0;
};

DimensionlessSolution solve_dimensionless(const KingProblem& problem, double fraction, double eta) {
    Profile warm;
    bool have_warm = false;
    DimensionlessSolution last;

    auto profile = [&](double a, double b) -> const Profile& {
        auto p = problem.solve(a, b, have_warm ? &warm : nullptr);
        if (!p && have_warm) p = problem.solve(a, b, nullptr);
        if (!p) {
            std::ostringstream msg;
            msg << "Poisson relaxation did not converge (Lambda=" << a << ", b=" << b << ", eta=" << eta
                << ", N_e/N_i=" << fraction << ")";
            throw ConvergenceError(msg.str());
        }
        warm = std::move(*p);
        have_warm = true;
        return warm;
    };

    // inner: electron count as a function of log b at fixed a (increasing)
    auto solve_for_fraction = [&](double a, double b_guess) {
        auto g = [&](double log_b) {
            const auto& u = profile(a, std::exp(log_b));
            return problem.electron_fraction(a, std::exp(log_b), u) / fraction - 1.0;
        };
        const auto root = find_increasing_root(g, std::log(b_guess), 1.0, "electron count");
        last.a = a;
        last.b = std::exp(root.x);
        last.u = warm;
        last.fraction = problem.electron_fraction(last.a, last.b, last.u);
        last.center = problem.central_value(last.u);
        return last.center;
    };

    // outer: central depth as a function of log a (increasing: colder is deeper in units of kT)
    double b_guess = 0.0;
    auto h = [&](double log_a) {
        const double a = std::exp(log_a);
        if (b_guess <= 0.0) b_guess = a * 0.9 / reduced_density_or_zero(eta);
        const double center = solve_for_fraction(a, b_guess);
        b_guess = last.b;
        return center / eta - 1.0;
    };
    const double a_guess = eta / std::max(1.0 - fraction, 1e-6);
    const auto root = find_increasing_root(h, std::log(a_guess), 0.5, "central depth");
    if (std::exp(root.x) != last.a) h(root.x);
    return last;
}

void check_inputs(const GaussianIonCloud& cloud, double target_electrons, double eta) {
    if (!(target_electrons > 0.0) || !std::isfinite(target_electrons)) {
        throw DomainError("target electron count must be positive");
    }
    if (target_electrons >= cloud.ion_count()) {
        std::ostringstream msg;
        msg << "no trap: N_e = " << target_electrons << " >= N_i = " << cloud.ion_count();
        throw NoTrapError(msg.str());
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be positive");
    if (eta > 200.0) throw DomainError("eta above 200 overflows the King density");
}

}  // namespace

double KingSolution::eta_at(double r) const {
    if (radii.empty()) throw DomainError("empty King solution");
    if (r <= radii.front()) {
        const double t = r / radii.front();
        return eta + (eta_profile.front() - eta) * t * t;
    }
    if (r >= radii.back()) return eta_profile.back() * radii.back() / r;
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii.begin());
    const double t = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
    return eta_profile[i - 1] + t * (eta_profile[i] - eta_profile[i - 1]);
}

double KingSolution::electrons_within(double r) const {
    if (cell_faces.empty()) throw DomainError("empty King solution");
    if (r <= 0.0) return 0.0;
    if (r >= cell_faces.back()) return enclosed_electrons.back();
    const auto it = std::upper_bound(cell_faces.begin(), cell_faces.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - cell_faces.begin());
    const double lo = cell_faces[i - 1];
    const double hi = cell_faces[i];
    const double t = (r * r * r - lo * lo * lo) / (hi * hi * hi - lo * lo * lo);
    return enclosed_electrons[i - 1] + t * (enclosed_electrons[i] - enclosed_electrons[i - 1]);
}

KingSolution solve_selfconsistent(const GaussianIonCloud& cloud, double target_electrons, double eta,
                                  const KingSolverOptions& options) {
    check_inputs(cloud, target_electrons, eta);
    if (options.grid_points < 16) throw DomainError("King grid needs at least 16 points");
    if (!(options.inner_radius > 0.0) || !(options.outer_radius > options.inner_radius)) {
        throw DomainError("King grid radii must satisfy 0 < inner < outer");
    }

    const double fraction = target_electrons / cloud.ion_count();
    KingSolverOptions opt = options;
    for (int refinement = 0;; ++refinement) {
        const KingProblem problem(opt);
        const auto dim = solve_dimensionless(problem, fraction, eta);
        const double residual = problem.pointwise_residual(dim.a, dim.b, dim.u);

        if (std::abs(dim.fraction / fraction - 1.0) > options.electron_tolerance ||
            std::abs(dim.center / eta - 1.0) > options.eta_tolerance) {
            std::ostringstream msg;
            msg << "King solve missed its targets: N_e/N_i=" << dim.fraction << " (want " << fraction
                << "), eta(0)=" << dim.center << " (want " << eta << ")";
            throw ConvergenceError(msg.str());
        }
        if (residual > options.residual_tolerance) {
            if (refinement < options.max_refinements) {
                opt.grid_points = 2 * opt.grid_points;
                continue;
            }
            std::ostringstream msg;
            msg << "Poisson residual " << residual << " above tolerance after " << refinement
                << " refinements";
            throw ConvergenceError(msg.str());
        }

        const auto& c = constants();
        const double sigma = cloud.sigma();
        const double n0 = cloud.peak_density();
        KingSolution sol;
        sol.cloud = cloud;
        sol.eta = eta;
        sol.lambda = dim.a;
        sol.temperature = c.elementary_charge * c.elementary_charge * n0 * sigma * sigma /
                          (c.vacuum_permittivity * c.boltzmann * dim.a);
        sol.density_ratio = dim.b / dim.a * reduced_density_or_zero(eta);
        sol.central_electron_density = n0 * sol.density_ratio;
        sol.escape_energy = eta * c.boltzmann * sol.temperature;
        sol.poisson_residual = residual;
        sol.grid_refinements = refinement;

        const std::size_t n = problem.size();
        const auto& s = problem.nodes();
        const auto& f = problem.faces();
        const auto& vol = problem.volumes();
        sol.tail_coefficient = s.back() * dim.u.value(n - 1);
        sol.radii.resize(n);
        sol.eta_profile = dim.u.values();
        sol.electron_density.resize(n);
        sol.cell_faces.resize(n + 1);
        sol.enclosed_electrons.assign(n + 1, 0.0);
        const double count_scale = 4.0 * std::numbers::pi * n0 * sigma * sigma * sigma * dim.b / dim.a;
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = reduced_density_or_zero(dim.u.value(i));
            sol.radii[i] = s[i] * sigma;
            sol.electron_density[i] = n0 * dim.b / dim.a * rho;
            sol.enclosed_electrons[i + 1] = sol.enclosed_electrons[i] + count_scale * vol[i] * rho;
        }
        for (std::size_t i = 0; i <= n; ++i) sol.cell_faces[i] = f[i] * sigma;
        sol.electron_count = sol.enclosed_electrons.back();
        return sol;
    }
}

std::vector<TemperatureScanPoint> temperature_scan(const GaussianIonCloud& cloud, double target_electrons,
                                                   std::span<const double> eta_values,
                                                   const KingSolverOptions& options, unsigned jobs) {
    for (std::size_t i = 0; i < eta_values.size(); ++i) {
        const double e = eta_values[i];
        if (!(e > 0.0) || e > 30.0) throw DomainError("eta values must lie in (0, 30]");
        if (i > 0 && !(e > eta_values[i - 1])) throw DomainError("eta values must be sorted ascending");
    }
    std::vector<TemperatureScanPoint> out(eta_values.size());
    auto run_one = [&](std::size_t i) {
        TemperatureScanPoint& p = out[i];
        p.eta = eta_values[i];
        try {
            const auto sol = solve_selfconsistent(cloud, target_electrons, p.eta, options);
            p.temperature = sol.temperature;
            p.central_electron_density = sol.central_electron_density;
        } catch (const Error& e) {
            p.error = e.what();
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(out.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < out.size(); ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < out.size(); i = next++) run_one(i);
        });
    }
    pool.clear();  // joins
    return out;
}

double trap_depth_estimate(double ion_count, double electron_count, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(electron_count >= 0.0)) throw DomainError("electron count must be non-negative");
    if (!(ion_count > electron_count)) {
        if (ion_count == electron_count) return 0.0;  // neutral: no well
        throw DomainError("trap depth needs N_i >= N_e");
    }
    return std::sqrt(2.0 / std::numbers::pi) * constants().coulomb_constant_times_e2 *
           (ion_count - electron_count) / sigma;
}

ElectronVelocityMoments velocity_moments(const KingSolution& solution, double r) {
    if (!(r >= 0.0) || r > solution.outer_radius()) {
        throw DomainError("radius outside the solution grid");
    }
    const double depth = std::max(0.0, solution.eta_at(r));
    const auto m = reduced_velocity_moments(depth);
    const double kt = constants().boltzmann * solution.temperature;
    return {solution.central_electron_density * m.density / reduced_density(solution.eta),
            m.mean_kinetic_energy * kt};
}

double coulomb_logarithm(double electron_density, double temperature) {
    const auto& c = constants();
    const double debye = std::sqrt(c.vacuum_permittivity * c.boltzmann * temperature /
                                   (electron_density * c.elementary_charge * c.elementary_charge));
    const double plasma_parameter = 12.0 * std::numbers::pi * electron_density * debye * debye * debye;
    return std::max(2.0, std::log(plasma_parameter));
}

double thermalization_time(double electron_density, double temperature, std::optional<double> coulomb_log) {
    if (!(electron_density > 0.0) || !(temperature > 0.0)) {
        throw DomainError("thermalization time needs positive density and temperature");
    }
    const double log_lambda = coulomb_log ? *coulomb_log : coulomb_logarithm(electron_density, temperature);
    if (!(log_lambda > 0.0)) throw DomainError("Coulomb logarithm must be positive");
    const auto& c = constants();
    const double kt = c.boltzmann * temperature;
    const double e2 = c.elementary_charge * c.elementary_charge;
    return 6.0 * std::numbers::sqrt2 * std::pow(std::numbers::pi, 1.5) * c.vacuum_permittivity *
           c.vacuum_permittivity * std::sqrt(c.electron_mass) * std::pow(kt, 1.5) /
           (log_lambda * e2 * e2 * electron_density);
}

}  // namespace ucp
