#pragma once

// Reference computations used by the tests. They deliberately avoid the
// library's closed forms: charges come from quadrature of the density,
// King densities from velocity-space integrals, sweep fractions from sampling.

#include "ucp/constants.hpp"
#include "ucp/extraction.hpp"
#include "ucp/ion_cloud.hpp"
#include "ucp/king_poisson.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double quad(auto f, double a, double b) {
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, 1e-14);
}

/// Ions inside r: int_0^r 4 pi s^2 n_i(s) ds.
inline double enclosed_ions(const ucp::GaussianIonCloud& c, double r) {
    if (r <= 0.0) return 0.0;
    const double n0 = c.ion_count() / std::pow(2.0 * std::numbers::pi, 1.5) / std::pow(c.sigma(), 3);
    const double s = c.sigma();
    return quad([&](double x) { return 4.0 * std::numbers::pi * x * x * n0 * std::exp(-x * x / (2 * s * s)); }, 0.0, r);
}

/// Gauss's law field from the quadrature charge.
inline double field(const ucp::GaussianIonCloud& c, double r) {
    const auto& k = ucp::constants();
    return k.elementary_charge * enclosed_ions(c, r) / (4.0 * std::numbers::pi * k.vacuum_permittivity * r * r);
}

struct Peak {
    double location;  // r / sigma
    double value;     // V/m
};

/// Golden-section maximum of the quadrature field on [0.3, 4] sigma.
inline Peak field_peak(const ucp::GaussianIonCloud& c) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.3 * c.sigma();
    double b = 4.0 * c.sigma();
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = field(c, x1);
    double f2 = field(c, x2);
    while (b - a > 1e-10 * c.sigma()) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = field(c, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = field(c, x2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x / c.sigma(), field(c, x)};
}

/// rho(eta) from the velocity integral of the truncated Maxwellian:
///   (sqrt(pi)/2) rho = int_0^{sqrt eta} 2 w^2 (e^{eta - w^2} - 1) dw.
inline double king_density(double eta) {
    if (eta <= 0.0) return 0.0;
    const double v = quad([&](double w) { return 2.0 * w * w * std::expm1(eta - w * w); }, 0.0, std::sqrt(eta));
    return v * 2.0 / std::sqrt(std::numbers::pi);
}

/// Mean kinetic energy / kT of the truncated Maxwellian at depth eta.
inline double king_mean_energy(double eta) {
    const double num = quad([&](double w) { return 2.0 * w * w * w * w * std::expm1(eta - w * w); }, 0.0, std::sqrt(eta));
    const double den = quad([&](double w) { return 2.0 * w * w * std::expm1(eta - w * w); }, 0.0, std::sqrt(eta));
    return num / den;
}

/// Max |lap eta_t - source| / Lambda from a five-point Lagrange stencil on the
/// node values, for nodes with r >= r_min.
inline double poisson_residual(const ucp::KingSolution& sol, double r_min) {
    const std::size_t n = sol.radii.size();
    const double sigma = sol.cloud.sigma();
    const double a = sol.lambda;
    const double b = sol.lambda * sol.density_ratio / king_density(sol.eta);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        if (sol.radii[i] < r_min) continue;
        double x[5];
        double y[5];
        for (int k = 0; k < 5; ++k) {
            x[k] = sol.radii[i - 2 + k] / sigma;
            y[k] = sol.eta_profile[i - 2 + k];
        }
        double d1 = 0.0;
        double d2 = 0.0;
        for (int j = 0; j < 5; ++j) {
            double denom = 1.0;
            for (int m = 0; m < 5; ++m) {
                if (m != j) denom *= x[j] - x[m];
            }
            double p1 = 0.0;
            double p2 = 0.0;
            for (int m = 0; m < 5; ++m) {
                if (m == j) continue;
                double prod = 1.0;
                for (int q = 0; q < 5; ++q) {
                    if (q != j && q != m) prod *= x[2] - x[q];
                }
                p1 += prod;
                for (int q = 0; q < 5; ++q) {
                    if (q == j || q == m) continue;
                    double prod2 = 1.0;
                    for (int w = 0; w < 5; ++w) {
                        if (w != j && w != m && w != q) prod2 *= x[2] - x[w];
                    }
                    p2 += prod2;
                }
            }
            d1 += y[j] * p1 / denom;
            d2 += y[j] * p2 / denom;
        }
        const double s = x[2];
        const double source = -a * std::exp(-0.5 * s * s) + b * king_density(std::max(0.0, y[2]));
        worst = std::max(worst, std::abs(d2 + 2.0 * d1 / s - source) / a);
    }
    return worst;
}

/// Trapezoid integral of 4 pi r^2 n_e(r) over the node grid.
inline double electron_count(const ucp::KingSolution& sol) {
    double sum = 0.0;
    for (std::size_t i = 1; i < sol.radii.size(); ++i) {
        const double r0 = sol.radii[i - 1];
        const double r1 = sol.radii[i];
        sum += 0.5 * (r1 - r0) * 4.0 * std::numbers::pi *
               (r0 * r0 * sol.electron_density[i - 1] + r1 * r1 * sol.electron_density[i]);
    }
    return sum;
}

/// Radii (units of sigma) of electrons drawn from the phase-space King
/// distribution f ∝ exp(eta_t(r) - x) - 1, x = m v^2 / 2kT < eta_t(r), by rejection.
///
/// Proposal: s from a mixture of a uniform core on [0, 4] and an s^{-1/2} tail on
/// [0, s_max]; x from a Gamma(3/2) truncated to [0, eta_t(s)]. The accepted
/// (s, x) pairs follow s^2 sqrt(x) (e^{eta_t - x} - 1) exactly.
inline std::vector<double> sample_king_radii(const ucp::KingSolution& sol, std::size_t count, std::uint64_t seed) {
    const double sigma = sol.cloud.sigma();
    const double s_max = sol.outer_radius() / sigma;
    const double core = 4.0;
    const double w_core = 0.8;
    auto proposal_density = [&](double s) {
        const double tail = (1.0 - w_core) / (2.0 * std::sqrt(s_max) * std::sqrt(std::max(s, 1e-300)));
        return (s <= core ? w_core / core : 0.0) + tail;
    };
    auto depth = [&](double s) { return std::max(0.0, sol.eta_at(s * sigma)); };
    // gamma_lower(3/2, eta) normalizes the truncated Gamma proposal
    auto bound = [&](double s) {
        const double e = depth(s);
        return s * s * std::expm1(e) * boost::math::tgamma_lower(1.5, e) / proposal_density(s);
    };
    double envelope = 0.0;
    for (int i = 1; i <= 20000; ++i) envelope = std::max(envelope, bound(s_max * i / 20000.0));
    envelope *= 1.05;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::gamma_distribution<double> gamma(1.5, 1.0);
    std::vector<double> out;
    out.reserve(count);
    while (out.size() < count) {
        const double s = u(rng) < w_core ? core * u(rng) : s_max * std::pow(u(rng), 2.0);
        const double e = depth(s);
        if (e <= 0.0) continue;
        double x = 0.0;
        if (e >= 1.0) {
            do x = gamma(rng);
            while (x >= e);
        } else {
            // density ∝ sqrt(x) e^{-x} on [0, e]: sqrt(x) proposal, accept with e^{-x}
            do x = e * std::pow(u(rng), 2.0 / 3.0);
            while (u(rng) >= std::exp(-x));
        }
        const double weight =
            s * s * (std::exp(e) - std::exp(x)) * boost::math::tgamma_lower(1.5, e) / proposal_density(s);
        if (u(rng) * envelope < weight) out.push_back(s);
    }
    return out;
}

}  // namespace oracle
