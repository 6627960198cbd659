#pragma once

#include "ucp/ion_cloud.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucp {

/// Grid and tolerance settings for solve_selfconsistent. Radii are in units of sigma.
struct KingSolverOptions {
    std::size_t grid_points = 2000;
    double inner_radius = 1e-3;
    double outer_radius = 50.0;
    double electron_tolerance = 1e-9;   // relative mismatch on N_e
    double eta_tolerance = 1e-10;       // relative mismatch on the central depth
    double residual_tolerance = 1e-6;   // max dimensionless Poisson residual at the nodes
    int max_refinements = 2;            // grid doublings when the residual is too large
};

/// Self-consistent trapped-electron cloud in a Gaussian ion background.
///
/// The depth eta_t(r) = (E_t - U(r)) / k T_e is measured from the escape energy,
/// which coincides with the potential energy at infinity, so eta_t -> 0 at large r
/// and falls off as the Coulomb tail A sigma / r outside the cloud.
struct KingSolution {
    GaussianIonCloud cloud{1.0, 1.0};
    double eta = 0.0;                        // eta_t at r = 0
    double temperature = 0.0;                // K
    double central_electron_density = 0.0;   // n_e^0, m^-3
    double escape_energy = 0.0;              // E_t - U(0) = eta k T_e, J
    double electron_count = 0.0;             // electrons inside the outer radius
    double lambda = 0.0;                     // e^2 n_i^0 sigma^2 / (eps0 k T_e)
    double density_ratio = 0.0;              // n_e^0 / n_i^0
    double tail_coefficient = 0.0;           // A: eta_t(r) -> A sigma / r
    double poisson_residual = 0.0;           // max |lap eta_t - source| / lambda at the nodes
    int grid_refinements = 0;

    std::vector<double> radii;               // node radii, m
    std::vector<double> eta_profile;         // eta_t at the nodes
    std::vector<double> electron_density;    // n_e at the nodes, m^-3
    std::vector<double> cell_faces;          // m, cell boundaries (size nodes + 1, first is 0)
    std::vector<double> enclosed_electrons;  // electrons inside each cell face

    /// eta_t at radius r (linear interpolation; the central value below the first node).
    double eta_at(double r) const;
    /// Electrons within radius r, interpolated in r^3 inside each cell.
    double electrons_within(double r) const;
    double outer_radius() const { return cell_faces.back(); }
};

/// Solves the spherical Poisson equation with the King electron density
///   n_e(r) = n_e^0 rho(eta_t(r)) / rho(eta)
/// for (T_e, n_e^0) such that eta_t(0) = eta and the electron count equals target_electrons.
///
/// Throws NoTrapError if target_electrons >= N_i, DomainError for non-positive
/// input and ConvergenceError when the root finder cannot bracket a solution.
KingSolution solve_selfconsistent(const GaussianIonCloud& cloud, double target_electrons, double eta,
                                  const KingSolverOptions& options = {});

struct TemperatureScanPoint {
    double eta = 0.0;
    double temperature = 0.0;               // K
    double central_electron_density = 0.0;  // m^-3
    std::optional<std::string> error;       // set when the solve failed at this eta
};

/// One solve per eta. Failed points carry the error message and the scan continues.
/// jobs > 1 runs points on a small thread pool; output order follows eta_values.
std::vector<TemperatureScanPoint> temperature_scan(const GaussianIonCloud& cloud, double target_electrons,
                                                   std::span<const double> eta_values,
                                                   const KingSolverOptions& options = {},
                                                   unsigned jobs = 1);

/// Depth of the net space-charge well when ions and electrons share the same
/// Gaussian shape: sqrt(2/pi) e^2 (N_i - N_e) / (4 pi eps0 sigma), in J.
double trap_depth_estimate(double ion_count, double electron_count, double sigma);

struct ElectronVelocityMoments {
    double local_density = 0.0;              // m^-3
    double local_mean_kinetic_energy = 0.0;  // J
};

/// Local density and mean kinetic energy of the truncated distribution at radius r.
ElectronVelocityMoments velocity_moments(const KingSolution& solution, double r);

/// Coulomb logarithm ln(12 pi n lambda_D^3), clamped below at 2.
double coulomb_logarithm(double electron_density, double temperature);

/// Spitzer electron self-collision time
///   tau_ee = 6 sqrt(2) pi^{3/2} eps0^2 sqrt(m_e) (k T)^{3/2} / (ln Lambda e^4 n_e).
/// ln Lambda comes from coulomb_logarithm unless given.
double thermalization_time(double electron_density, double temperature,
                           std::optional<double> coulomb_log = std::nullopt);

}  // namespace ucp
