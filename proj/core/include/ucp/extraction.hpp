#pragma once

#include "ucp/ion_cloud.hpp"
#include "ucp/king_poisson.hpp"

#include <span>
#include <vector>

namespace ucp {

/// N_e * gi1 / (gi1 + gi2). Throws DegenerateShotError when gi1 + gi2 == 0 and
/// DomainError for negative counts or a non-positive mean.
double calibrate_counts(double gi1, double gi2, double mean_electrons);

enum class SweepSource { Measured, Simulated };

/// Ejected electrons versus applied extraction field.
struct SweepCurve {
    std::vector<double> applied_field;  // V/m, strictly increasing
    std::vector<double> ejected_count;
    SweepSource source = SweepSource::Measured;

    std::size_t size() const noexcept { return applied_field.size(); }
    /// Throws DataError for mismatched lengths, unsorted fields or negative counts.
    void validate() const;
};

/// Builds a measured curve from raw shots. Each shot is calibrated with its own
/// mean electron number; shots at the same voltage are averaged. Degenerate shots
/// (gi1 + gi2 == 0) are dropped and counted in `dropped` when given.
SweepCurve sweep_from_observations(std::span<const PlasmaObservation> shots, std::size_t* dropped = nullptr);

/// Radius inside which the trapped cloud survives an applied field E (m).
///
/// Electrons are peeled from the outside: once every electron beyond R is gone,
/// the remaining net charge confines the rest only if its outward field
///   E(r) = e (N_i F(r/sigma) - N_e(<R)) / (4 pi eps0 r^2),  r >= R
/// somewhere exceeds E. The returned radius is the largest R for which it does;
/// 0 at or above the bare-cloud threshold, the outer grid radius for E = 0.
double escape_radius(const KingSolution& solution, double applied_field);

/// Electrons ejected at each field: N_e minus those inside escape_radius.
/// Fields must be non-negative and ascending. The result is monotone and equals
/// N_e from threshold_field(solution.cloud) on.
SweepCurve simulate_sweep(const KingSolution& solution, std::span<const double> fields);

struct ThresholdFit {
    double threshold_field = 0.0;  // V/m, where the rising edge meets the plateau
    double plateau = 0.0;          // saturated count, estimate of N_e
    std::size_t plateau_points = 0;
    std::size_t edge_points = 0;   // rising-edge points used in the line fit
    bool low_confidence = false;   // no rising edge was sampled
};

struct ThresholdFitOptions {
    double plateau_band = 0.02;    // points within this fraction of the plateau count as saturated
    double rising_limit = 0.05;    // last step above this fraction means the sweep is unsaturated
    std::size_t edge_window = 3;   // rising-edge points in the line fit
};

/// Locates the saturation knee of a sweep.
///
/// The plateau is the median of the trailing run of points within plateau_band of
/// the last point, trimmed to points within three robust deviations of it. A
/// least-squares line through the last edge_window points before the plateau is
/// extrapolated to the plateau height; the crossing is the threshold.
/// Throws DataError for fewer than 5 points and UnsaturatedSweepError when the
/// curve is flat at zero or still rising at its end.
ThresholdFit fit_threshold(const SweepCurve& curve, const ThresholdFitOptions& options = {});

struct InferenceResult {
    double threshold_field = 0.0;  // V/m
    GaussianIonCloud cloud{1.0, 1.0};
    double electron_count = 0.0;
    double delta_n = 0.0;          // N_i - N_e
    ThresholdFit fit;
    std::vector<TemperatureScanPoint> te_vs_eta;
};

/// fit_threshold -> invert_threshold -> temperature_scan.
/// Throws DataError when the fitted cloud holds no more ions than electrons.
InferenceResult infer_plasma_state(const SweepCurve& curve, double sigma, std::span<const double> eta_values,
                                   const KingSolverOptions& solver = {}, unsigned jobs = 1,
                                   const ThresholdFitOptions& fit_options = {});

}  // namespace ucp
