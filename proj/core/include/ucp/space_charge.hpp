#pragma once

#include "ucp/ion_cloud.hpp"

#include <vector>

namespace ucp {

/// Radial electric field (V/m) of a bare Gaussian ion cloud at radius r >= 0.
double gaussian_field(const GaussianIonCloud& cloud, double r);

/// Dimensionless field profile g(x) = F(x) / x^2 where F is the enclosed
/// fraction; the field is g(r/sigma) e N_i / (4 pi eps0 sigma^2).
double reduced_gaussian_field(double x) noexcept;

struct FieldMaximum {
    double coefficient;  // max field / ((e / 4 pi eps0) n_i^0 sqrt(2) sigma)
    double location;     // r* / sigma
    double reduced_peak; // max of reduced_gaussian_field
};

/// Maximum of the Gaussian-cloud field found by golden-section search,
/// computed once per process. The coefficient is ~2.383.
const FieldMaximum& field_maximum();

/// Field needed to strip every trapped electron: the peak of gaussian_field.
double threshold_field(const GaussianIonCloud& cloud);

/// Cloud of width sigma whose threshold_field equals threshold.
GaussianIonCloud invert_threshold(double threshold, double sigma);

struct FieldProfile {
    std::vector<double> radii;            // m, strictly increasing
    std::vector<double> field_magnitude;  // V/m
    double location_of_max = 0.0;         // m
    double max_field = 0.0;               // V/m
};

/// Field sampled on `points` evenly spaced radii in [0, r_max]; the maximum is
/// the analytic one, not the grid maximum.
FieldProfile field_profile(const GaussianIonCloud& cloud, double r_max, std::size_t points);

}  // namespace ucp
