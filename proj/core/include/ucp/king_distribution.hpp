#pragma once

namespace ucp {

// Velocity-space integrals of the truncated Maxwellian
//   f ∝ exp(-E / k T) - exp(-E_t / k T),  E <= E_t
// at a point where the local depth below the escape energy is eta_t (units of k T).
// With x = m v^2 / 2kT the density integral is
//   int_0^{eta_t} (e^{eta_t - x} - 1) sqrt(x) dx = (sqrt(pi)/2) rho(eta_t).

/// rho(eta_t) = e^{eta_t} erf(sqrt eta_t) - (2/sqrt pi)(eta_t^{1/2} + (2/3) eta_t^{3/2}).
/// Zero at eta_t = 0, strictly increasing. Throws DomainError for eta_t < 0.
double reduced_density(double eta_t);

/// Same as reduced_density but returns 0 for eta_t <= 0 (no trapped phase space).
double reduced_density_or_zero(double eta_t) noexcept;

/// d rho / d eta_t = e^{eta_t} erf(sqrt eta_t) - (2/sqrt pi) sqrt eta_t, zero for eta_t <= 0.
double reduced_density_derivative(double eta_t) noexcept;

/// Antiderivative of rho vanishing at 0 (and for eta_t <= 0).
double reduced_density_integral(double eta_t) noexcept;

/// Solves rho(eta_t) = y for y >= 0.
double inverse_reduced_density(double y);

struct ReducedMoments {
    double density;              // equals rho(eta_t)
    double mean_kinetic_energy;  // <m v^2 / 2> / k T, below 3/2
};

/// Zeroth and second velocity moments by adaptive Gauss-Kronrod quadrature.
ReducedMoments reduced_velocity_moments(double eta_t);

}  // namespace ucp
