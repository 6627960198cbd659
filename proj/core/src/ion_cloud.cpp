#include "ucp/ion_cloud.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ucp {
namespace {


void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
    }
}

}  // namespace

double derive_peak_density(double ion_count, double sigma) {
    require_positive(ion_count, "ion count");
    require_positive(sigma, "sigma");
    return ion_count / (kTwoPiPow32 * sigma * sigma * sigma);
}

double gaussian_enclosed_fraction(double x) noexcept {
    if (x <= 0.0) return 0.0;
    if (x < 1.5) {
        // Lower regularized gamma P(3/2, z), z = x^2/2:
        // z^{3/2} e^{-z} / Gamma(5/2) * sum_k z^k / ((5/2)(7/2)...(3/2+k))
        const double z = 0.5 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= z / (1.5 + k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        constexpr double kGamma52 = 1.3293403881791355;  // 3 sqrt(pi) / 4
        return std::pow(z, 1.5) * std::exp(-z) / kGamma52 * sum;
    }
    return std::erf(x / std::numbers::sqrt2) -
           std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-0.5 * x * x);
}

GaussianIonCloud::GaussianIonCloud(double ion_count, double sigma)
    : ion_count_(ion_count), sigma_(sigma), peak_density_(derive_peak_density(ion_count, sigma)) {}

double GaussianIonCloud::density(double r) const noexcept {
    const double x = r / sigma_;
    return peak_density_ * std::exp(-0.5 * x * x);
}

double GaussianIonCloud::enclosed_ions(double r) const noexcept {
    return ion_count_ * gaussian_enclosed_fraction(r / sigma_);
}

void PlasmaObservation::validate() const {
    if (gi1_counts < 0.0 || gi2_counts < 0.0 || (gi3_counts && *gi3_counts < 0.0)) {
        throw DomainError("gated-integrator counts must be non-negative");
    }
    if (!(grid_gap > 0.0)) throw DomainError("grid gap must be positive");
    if (mean_electron_number < 0.0) throw DomainError("mean electron number must be non-negative");
    if (delay_t1 && delay_t2 && !(*delay_t2 > *delay_t1)) {
        throw DomainError("second pulse delay must exceed the first");
    }
}

}  // namespace ucp
