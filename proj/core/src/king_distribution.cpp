#include "ucp/king_distribution.hpp"

#include "ucp/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace ucp {
namespace {

constexpr double kTwoOverSqrtPi = std::numbers::inv_sqrtpi * 2.0;
constexpr double kSeriesLimit = 2.0;
constexpr double kOverflowArg = 700.0;

// (2/sqrt pi) sum_{k >= k0} 2^k x^{k+1/2} / (2k+1)!!, the tail of the series of
// e^x erf(sqrt x). All terms are positive so there is no cancellation.
double erf_exp_series_tail(double x, int k0) {
    double term = kTwoOverSqrtPi * std::sqrt(x);  // k = 0
    for (int k = 1; k <= k0; ++k) term *= 2.0 * x / (2.0 * k + 1.0);
    double sum = 0.0;
    for (int k = k0; k < k0 + 200; ++k) {
        sum += term;
        if (term < 1e-17 * sum) break;
        term *= 2.0 * x / (2.0 * k + 3.0);
    }
    return sum;
}

double exp_erf(double x) { return std::exp(x) * std::erf(std::sqrt(x)); }

}  // namespace

double reduced_density(double eta_t) {
    if (eta_t < 0.0 || std::isnan(eta_t)) throw DomainError("reduced density needs eta_t >= 0");
    return reduced_density_or_zero(eta_t);
}

double reduced_density_or_zero(double eta_t) noexcept {
    if (!(eta_t > 0.0)) return 0.0;
    if (eta_t > kOverflowArg) return std::numeric_limits<double>::infinity();
    if (eta_t < kSeriesLimit) return erf_exp_series_tail(eta_t, 2);
    const double r = std::sqrt(eta_t);
    return exp_erf(eta_t) - kTwoOverSqrtPi * (r + (2.0 / 3.0) * eta_t * r);
}

double reduced_density_derivative(double eta_t) noexcept {
    if (!(eta_t > 0.0)) return 0.0;
    if (eta_t > kOverflowArg) return std::numeric_limits<double>::infinity();
    if (eta_t < kSeriesLimit) {
        // d/dx of the k >= 2 tail is the k >= 1 tail of the same series
        return erf_exp_series_tail(eta_t, 1);
    }
    return exp_erf(eta_t) - kTwoOverSqrtPi * std::sqrt(eta_t);
}

double reduced_density_integral(double eta_t) noexcept {
    if (!(eta_t > 0.0)) return 0.0;
    if (eta_t > kOverflowArg) return std::numeric_limits<double>::infinity();
    if (eta_t < 3.0) return erf_exp_series_tail(eta_t, 3);
    const double r = std::sqrt(eta_t);
    return exp_erf(eta_t) -
           kTwoOverSqrtPi * (r + (2.0 / 3.0) * eta_t * r + (4.0 / 15.0) * eta_t * eta_t * r);
}

double inverse_reduced_density(double y) {
    if (y < 0.0 || std::isnan(y)) throw DomainError("inverse reduced density needs y >= 0");
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return kOverflowArg;
    // Start from the asymptote that fits: small y ~ c x^{5/2}, large y ~ e^x.
    constexpr double kSmallCoef = 8.0 / 15.0 * std::numbers::inv_sqrtpi;
    double x = y < 1.0 ? std::pow(y / kSmallCoef, 0.4) : std::log(y) + 1.0;
    // Newton on log rho (convex enough to converge from either side).
    for (int it = 0; it < 100; ++it) {
        const double r = reduced_density_or_zero(x);
        const double d = reduced_density_derivative(x);
        const double step = (std::log(r) - std::log(y)) * r / d;
        double next = x - step;
        if (next <= 0.0) next = 0.5 * x;
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) return next;
        x = next;
    }
    return x;
}

ReducedMoments reduced_velocity_moments(double eta_t) {
    if (eta_t < 0.0 || std::isnan(eta_t)) throw DomainError("velocity moments need eta_t >= 0");
    if (eta_t == 0.0) return {0.0, 0.0};
    using boost::math::quadrature::gauss_kronrod;
    // x = t^2: sqrt(x) dx = 2 t^2 dt
    const double upper = std::sqrt(eta_t);
    auto weight = [eta_t](double t) { return std::expm1(eta_t - t * t); };
    const double n0 = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return 2.0 * t * t * weight(t); }, 0.0, upper, 15, 1e-14);
    const double n2 = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return 2.0 * t * t * t * t * weight(t); }, 0.0, upper, 15, 1e-14);
    return {kTwoOverSqrtPi * n0, n2 / n0};
}

}  // namespace ucp
