#include "ucp/space_charge.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"

#include <cmath>
#include <numbers>

namespace ucp {
namespace {


FieldMaximum maximize_field() {
    // g(x) is unimodal on [0.5, 3]
    constexpr double kInvPhi = 0.6180339887498949;
    double a = 0.5;
    double b = 3.0;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = reduced_gaussian_field(c);
    double gd = reduced_gaussian_field(d);
    while (b - a > 1e-12) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = reduced_gaussian_field(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = reduced_gaussian_field(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double peak = reduced_gaussian_field(x);
    // E = peak e N_i/(4 pi eps0 sigma^2) and n_i^0 sqrt2 sigma = N_i sqrt2 / ((2pi)^{3/2} sigma^2)
    return {peak * kTwoPiPow32 / std::numbers::sqrt2, x, peak};
}

}  // namespace

double reduced_gaussian_field(double x) noexcept {
    if (x <= 0.0) return 0.0;
    if (x < 1e-4) return std::sqrt(2.0 / std::numbers::pi) * x / 3.0;
    return gaussian_enclosed_fraction(x) / (x * x);
}

double gaussian_field(const GaussianIonCloud& cloud, double r) {
    if (!(r >= 0.0)) throw DomainError("radius must be non-negative");
    const double s = cloud.sigma();
    return coulomb_field_constant() * cloud.ion_count() / (s * s) * reduced_gaussian_field(r / s);
}

const FieldMaximum& field_maximum() {
    static const FieldMaximum kMax = maximize_field();
    return kMax;
}

double threshold_field(const GaussianIonCloud& cloud) {
    return field_maximum().coefficient * coulomb_field_constant() * cloud.peak_density() *
           std::numbers::sqrt2 * cloud.sigma();
}

GaussianIonCloud invert_threshold(double threshold, double sigma) {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw DomainError("threshold field must be positive");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    const double n0 = threshold / (field_maximum().coefficient * coulomb_field_constant() *
                                   std::numbers::sqrt2 * sigma);
    return {n0 * kTwoPiPow32 * sigma * sigma * sigma, sigma};
}

FieldProfile field_profile(const GaussianIonCloud& cloud, double r_max, std::size_t points) {
    if (!(r_max > 0.0)) throw DomainError("profile radius must be positive");
    if (points < 2) throw DomainError("profile needs at least two points");
    FieldProfile p;
    p.radii.resize(points);
    p.field_magnitude.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(points - 1);
        p.radii[i] = r;
        p.field_magnitude[i] = gaussian_field(cloud, r);
    }
    p.location_of_max = field_maximum().location * cloud.sigma();
    p.max_field = threshold_field(cloud);
    return p;
}

}  // namespace ucp
