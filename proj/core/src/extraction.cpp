#include "ucp/extraction.hpp"

#include "ucp/constants.hpp"
#include "ucp/errors.hpp"
#include "ucp/space_charge.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ucp {
namespace {

// Peak over x >= x0 of (N_i F(x) - inner) / x^2, in units of e / (4 pi eps0 sigma^2).
double confining_peak(double ion_count, double inner, double x0) {
    auto f = [&](double x) { return (ion_count * gaussian_enclosed_fraction(x) - inner) / (x * x); };
    const double lo = std::max(x0, 1e-3);
    const double hi = std::max(60.0, 10.0 * lo);
    constexpr int kScan = 240;
    const double ratio = std::pow(hi / lo, 1.0 / kScan);
    int best = 0;
    double best_value = f(lo);
    double x = lo;
    for (int i = 1; i <= kScan; ++i) {
        x *= ratio;
        const double v = f(x);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == 0 && x0 > 0.0) return best_value;  // decreasing from the edge
    double a = lo * std::pow(ratio, std::max(best - 1, 0));
    double b = lo * std::pow(ratio, std::min(best + 1, kScan));
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-10 * b) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return std::max({best_value, fc, fd});
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double calibrate_counts(double gi1, double gi2, double mean_electrons) {
    if (gi1 < 0.0 || gi2 < 0.0) throw DomainError("gated-integrator counts must be non-negative");
    if (!(mean_electrons > 0.0)) throw DomainError("mean electron number must be positive");
    const double total = gi1 + gi2;
    if (!(total > 0.0)) throw DegenerateShotError("shot with gi1 + gi2 = 0");
    // Both shares come from one remainder: large is at least half the mean, so
    // mean - large is exact and swapped calls sum to the mean exactly.
    const double small = std::min(0.5 * mean_electrons, mean_electrons * std::min(gi1, gi2) / total);
    const double large = mean_electrons - small;
    return gi1 < gi2 ? mean_electrons - large : large;
}

void SweepCurve::validate() const {
    if (applied_field.size() != ejected_count.size()) throw DataError("sweep columns differ in length");
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(applied_field[i]) || applied_field[i] < 0.0) {
            throw DataError("sweep fields must be finite and non-negative");
        }
        if (!std::isfinite(ejected_count[i]) || ejected_count[i] < 0.0) {
            throw DataError("ejected counts must be finite and non-negative");
        }
        if (i > 0 && !(applied_field[i] > applied_field[i - 1])) {
            throw DataError("sweep fields must be strictly increasing");
        }
    }
}

SweepCurve sweep_from_observations(std::span<const PlasmaObservation> shots, std::size_t* dropped) {
    std::map<double, std::pair<double, int>> by_field;
    std::size_t skipped = 0;
    for (const auto& shot : shots) {
        shot.validate();
        double count = 0.0;
        try {
            count = calibrate_counts(shot.gi1_counts, shot.gi2_counts, shot.mean_electron_number);
        } catch (const DegenerateShotError&) {
            ++skipped;
            continue;
        }
        auto& slot = by_field[shot.pulse1_voltage / shot.grid_gap];
        slot.first += count;
        ++slot.second;
    }
    if (dropped) *dropped = skipped;
    SweepCurve curve;
    curve.source = SweepSource::Measured;
    for (const auto& [field, acc] : by_field) {
        curve.applied_field.push_back(field);
        curve.ejected_count.push_back(acc.first / acc.second);
    }
    curve.validate();
    return curve;
}

double escape_radius(const KingSolution& solution, double applied_field) {
    if (!(applied_field >= 0.0)) throw DomainError("applied field must be non-negative");
    const double outer = solution.outer_radius();
    if (applied_field == 0.0) return outer;
    if (applied_field >= threshold_field(solution.cloud)) return 0.0;

    const double sigma = solution.cloud.sigma();
    const double ions = solution.cloud.ion_count();
    const double unit = coulomb_field_constant() / (sigma * sigma);
    auto peak = [&](double r) { return unit * confining_peak(ions, solution.electrons_within(r), r / sigma); };
    if (peak(outer) >= applied_field) return outer;

    // peak(R) does not increase with R
    double lo = 0.0;
    double hi = outer;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * outer; ++i) {
        const double mid = 0.5 * (lo + hi);
        (peak(mid) >= applied_field ? lo : hi) = mid;
    }
    return lo;
}

SweepCurve simulate_sweep(const KingSolution& solution, std::span<const double> fields) {
    SweepCurve curve;
    curve.source = SweepSource::Simulated;
    curve.applied_field.assign(fields.begin(), fields.end());
    curve.ejected_count.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!(fields[i] >= 0.0)) throw DomainError("sweep fields must be non-negative");
        if (i > 0 && fields[i] < fields[i - 1]) throw DomainError("sweep fields must be ascending");
    }
    const double total = solution.electron_count;
    double previous = 0.0;
    for (const double field : fields) {
        const double kept = solution.electrons_within(escape_radius(solution, field));
        previous = std::max(previous, std::clamp(total - kept, 0.0, total));
        curve.ejected_count.push_back(previous);
    }
    return curve;
}

ThresholdFit fit_threshold(const SweepCurve& curve, const ThresholdFitOptions& options) {
    curve.validate();
    const std::size_t n = curve.size();
    if (n < 5) throw DataError("threshold fit needs at least 5 sweep points");
    const auto& x = curve.applied_field;
    const auto& y = curve.ejected_count;

    const double last = y[n - 1];
    if (!(last > 0.0)) throw UnsaturatedSweepError("sweep has no electrons (plateau at zero)");
    if (last > (1.0 + options.rising_limit) * y[n - 2]) {
        std::ostringstream msg;
        msg << "sweep still rising at its end (" << y[n - 2] << " -> " << last << ")";
        throw UnsaturatedSweepError(msg.str());
    }

    const double floor = (1.0 - options.plateau_band) * last;
    std::size_t first_plateau = n - 1;
    while (first_plateau > 0 && y[first_plateau - 1] >= floor) --first_plateau;

    // Second pass: only points within the plateau's own scatter count as saturated,
    // so late edge points inside the coarse band still feed the line fit.
    std::vector<double> run(y.begin() + static_cast<std::ptrdiff_t>(first_plateau), y.end());
    const double coarse = median(run);
    for (auto& v : run) v = std::abs(v - coarse);
    const double scatter = std::max(3.0 * 1.4826 * median(run), 1e-9 * coarse);
    while (first_plateau < n - 1 && std::abs(y[first_plateau] - coarse) > scatter) ++first_plateau;

    ThresholdFit fit;
    fit.plateau = median(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(first_plateau), y.end()));
    fit.plateau_points = n - first_plateau;
    if (first_plateau == 0) {
        fit.threshold_field = x[0];
        fit.low_confidence = true;
        return fit;
    }

    // rising edge: the last few points before the plateau
    const std::size_t end = first_plateau;
    const std::size_t begin = end > options.edge_window ? end - options.edge_window : 0;
    fit.edge_points = end - begin;
    double slope = 0.0;
    double intercept = 0.0;
    if (fit.edge_points == 1) {
        slope = (y[end] - y[begin]) / (x[end] - x[begin]);
        intercept = y[begin] - slope * x[begin];
    } else {
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= static_cast<double>(fit.edge_points);
        my /= static_cast<double>(fit.edge_points);
        double sxx = 0.0;
        double sxy = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        slope = sxy / sxx;
        intercept = my - slope * mx;
    }
    if (!(slope > 0.0)) {
        fit.threshold_field = x[first_plateau];
        fit.low_confidence = true;
        return fit;
    }
    fit.threshold_field = std::clamp((fit.plateau - intercept) / slope, x[end - 1], x[end]);
    return fit;
}

InferenceResult infer_plasma_state(const SweepCurve& curve, double sigma, std::span<const double> eta_values,
                                   const KingSolverOptions& solver, unsigned jobs,
                                   const ThresholdFitOptions& fit_options) {
    InferenceResult result;
    result.fit = fit_threshold(curve, fit_options);
    result.threshold_field = result.fit.threshold_field;
    if (!(result.threshold_field > 0.0)) throw DataError("fitted threshold field is zero");
    result.cloud = invert_threshold(result.threshold_field, sigma);
    result.electron_count = result.fit.plateau;
    result.delta_n = result.cloud.ion_count() - result.electron_count;
    if (!(result.delta_n > 0.0)) {
        std::ostringstream msg;
        msg << "inferred ion number " << result.cloud.ion_count() << " does not exceed the electron plateau "
            << result.electron_count;
        throw DataError(msg.str());
    }
    result.te_vs_eta = temperature_scan(result.cloud, result.electron_count, eta_values, solver, jobs);
    return result;
}

}  // namespace ucp
