#pragma once

#include <optional>

namespace ucp {

/// n_i^0 = N_i / ((2 pi)^{3/2} sigma^3). Throws DomainError for non-positive input.
double derive_peak_density(double ion_count, double sigma);

/// Spherical Gaussian ion distribution n_i(r) = n_i^0 exp(-r^2 / 2 sigma^2).
/// The peak density is derived from (N_i, sigma) and cannot be set on its own.
class GaussianIonCloud {
public:
    GaussianIonCloud(double ion_count, double sigma);

    double ion_count() const noexcept { return ion_count_; }
    double sigma() const noexcept { return sigma_; }
    double peak_density() const noexcept { return peak_density_; }

    double density(double r) const noexcept;
    /// Ions inside radius r.
    double enclosed_ions(double r) const noexcept;

    GaussianIonCloud with_ion_count(double n) const { return {n, sigma_}; }
    GaussianIonCloud with_sigma(double s) const { return {ion_count_, s}; }

private:
    double ion_count_;
    double sigma_;
    double peak_density_;
};

/// One raw experimental shot.
struct PlasmaObservation {
    double gi1_counts = 0.0;
    double gi2_counts = 0.0;
    std::optional<double> gi3_counts;
    double pulse1_voltage = 0.0;  // V
    double grid_gap = 0.0;        // m
    std::optional<double> delay_t1;  // s
    std::optional<double> delay_t2;  // s
    double mean_electron_number = 0.0;

    /// Throws DomainError when counts are negative, the gap is not positive or t2 <= t1.
    void validate() const;
};

}  // namespace ucp

namespace ucp {

/// Fraction of a unit spherical Gaussian inside radius x (in units of sigma):
/// erf(x/sqrt2) - sqrt(2/pi) x exp(-x^2/2). Uses the power series below x = 1.5
/// where the closed form cancels.
double gaussian_enclosed_fraction(double x) noexcept;

}  // namespace ucp
