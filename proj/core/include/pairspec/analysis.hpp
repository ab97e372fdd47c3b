#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pairspec/experiment.hpp"

namespace pairspec {

/// Batched quantum-advantage estimate: how much below the shot-noise
/// variance the heralded estimator's variance sits, in percent.
struct AdvantageReport {
    std::vector<double> per_batch_advantage;  // fractional, one per batch
    double mean_advantage_percent = 0.0;
    double stderr_percent = 0.0;
    bool stderr_defined = false;  // needs at least two batches
    double theoretical_max_percent = 0.0;
    std::uint64_t batch_size = 0;
    std::uint64_t batch_count = 0;
};

/// Splits the ensemble's estimates into consecutive batches of batch_size
/// (a partial tail batch is dropped). Per batch, the advantage is
/// 1 - (batch variance) / ((1 - batch mean alpha) / mean herald counts),
/// i.e. measured variance against the analytic shot-noise variance at the
/// batch's own alpha and the matched intensity. theoretical_max_percent is
/// the ideal advantage at baseline_alpha, normally the measured mean alpha.
AdvantageReport quantum_advantage(const EnsembleStats& fock, double baseline_alpha,
                                  std::uint64_t batch_size);

struct AbsorbancePoint {
    double lambda_nm = 0.0;
    double absorbance = 0.0;
};

/// Absorbance spectrum with saturation accounting: alpha2 above the
/// 1 - 1e-9 ceiling is clamped there and counted, keeping saturated bins
/// finite and auditable.
struct AbsorbanceSpectrum {
    std::vector<AbsorbancePoint> points;
    std::size_t clamped_count = 0;
};

inline constexpr double kAbsorbanceCeiling = 1.0 - 1e-9;

/// Pointwise A = -ln(1 - alpha2), order preserved. Set decadic to divide
/// by ln 10 (the conventional base-10 absorbance).
AbsorbanceSpectrum absorbance_spectrum(
    const std::vector<std::pair<double, double>>& alpha2_by_lambda,
    bool decadic = false);

/// Single-parameter fit of delta_alpha = c / sqrt(n): the slope is fixed
/// at -1/2 in log space and only the intercept is estimated.
struct PrecisionFit {
    double coefficient = 0.0;
    double residual_rms = 0.0;  // RMS of log-space residuals
};

struct ScalingPoint {
    double n_total = 0.0;
    double delta_alpha = 0.0;
};

PrecisionFit fit_precision_scaling(const std::vector<ScalingPoint>& points);

/// One increment of a resolution sweep for one sample: photons per
/// estimate, the mean estimate, and its standard deviation.
struct ResolutionSeriesPoint {
    double n_total = 0.0;
    double mean = 0.0;
    double delta_alpha = 0.0;
};

/// How the two samples' fitted error curves combine into the separation
/// criterion. max_fit is the conservative default; the others are exposed
/// for sensitivity checks.
enum class ErrorCombination { max_fit, sum_fit, pooled_fit };

/// Resolution requirements for one probe mode: fitted coefficients, mean
/// separation, and the smallest photon number per estimate at which the
/// separation reaches k times the combined error, for each k.
struct ModeResolution {
    double c_a = 0.0;
    double c_b = 0.0;
    double separation = 0.0;
    std::map<int, std::uint64_t> photons_required;
};

/// Fits both samples' precision scaling and inverts the separation
/// criterion |mean_a - mean_b| >= k * c / sqrt(n), giving
/// n = ceil((k c / separation)^2). Throws DomainError at zero separation.
ModeResolution resolution_analysis(const std::vector<ResolutionSeriesPoint>& a,
                                   const std::vector<ResolutionSeriesPoint>& b,
                                   const std::vector<int>& ks,
                                   ErrorCombination rule = ErrorCombination::max_fit);

struct ResolutionRequirement {
    std::uint64_t fock = 0;
    std::uint64_t coherent = 0;
    std::int64_t saved = 0;
};

/// Fock and ideal-laser requirements side by side; saved = coherent - fock.
struct ResolutionReport {
    ModeResolution fock;
    ModeResolution coherent;
    std::map<int, ResolutionRequirement> photons_required;
};

ResolutionReport make_resolution_report(ModeResolution fock,
                                        ModeResolution coherent);

}  // namespace pairspec
