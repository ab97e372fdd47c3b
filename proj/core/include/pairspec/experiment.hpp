#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "pairspec/sample.hpp"
#include "pairspec/source.hpp"

namespace pairspec {

enum class Arm { a, b };

const char* arm_name(Arm arm);

/// Accidental coincidences: spurious pairings of unrelated detections
/// inside the coincidence window.
struct AccidentalsConfig {
    double coincidence_window_s = 0.0;
};

/// One counting experiment: a pair source, a sample in one arm, and
/// repeated integration windows. The probe wavelength is set either by a
/// crystal temperature resolved through the calibration table, or by a
/// direct lambda_a override.
struct ExperimentConfig {
    SourceConfig source;
    SpectralProfile sample = SpectralProfile::flat(0.0);
    Arm sample_arm = Arm::b;
    double integration_time_s = 1.0;
    std::uint64_t trials = 1500;
    std::uint64_t master_seed = 0;
    std::optional<AccidentalsConfig> accidentals;
    std::optional<double> temperature_c;
    std::optional<double> lambda_a_nm;  // overrides temperature_c when set
};

/// Counts of one integration window. Without accidentals,
/// n_ab <= min(n_a, n_b) in every trial.
struct TrialRecord {
    std::uint64_t n_a = 0;
    std::uint64_t n_b = 0;
    std::uint64_t n_ab = 0;
};

/// Aggregated per-trial estimates of one ensemble.
///
/// mean_herald_counts is the average herald-arm singles count over the
/// trials that produced an estimate; for the ideal-laser comparator it
/// holds the calibrated input intensity instead. total_detected_photons
/// sums n_a + n_b over all trials (one-beam detections for the comparator).
/// Trials with zero herald counts are excluded and counted, never imputed.
struct EnsembleStats {
    std::vector<double> estimates;
    double mean = 0.0;
    double variance = 0.0;         // sample variance; 0 when fewer than 2 estimates
    double stderr_of_mean = 0.0;
    double mean_herald_counts = 0.0;
    std::uint64_t total_detected_photons = 0;
    std::uint64_t zero_herald_trials = 0;
    std::vector<TrialRecord> records;  // empty for the ideal-laser comparator
};

/// The sample-free arm: its detections condition the measurement.
Arm herald_arm_for(const ExperimentConfig& cfg);

/// Resolves the (lambda_a, lambda_b) pair from the override or temperature.
WavelengthPair resolve_wavelengths(const ExperimentConfig& cfg);

/// Checks every experiment invariant (including the source's); reports all
/// violations.
ValidationReport validate_experiment(const ExperimentConfig& cfg);

/// Simulates one integration window: draws a Poisson pair count, then for
/// each pair a herald detection, a probe wavelength from the sample-arm
/// lineshape, and a probe survival + detection; accidentals are added last
/// when configured.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index);

/// Heralded estimator: 1 - n_ab / n_herald. Estimates the total loss
/// downstream of the herald (sample absorption composed with the probe-arm
/// efficiency). Throws InsufficientDataError at zero herald counts.
double estimate_alpha(const TrialRecord& rec, Arm herald_arm);

/// Runs cfg.trials independent windows and aggregates the estimates.
/// Per-trial seeds depend only on (master_seed, trial_index), so results
/// are identical for any worker count.
EnsembleStats run_ensemble(const ExperimentConfig& cfg, unsigned workers = 1);

/// Ideal-laser comparator at the same average intensity: the calibrated
/// input is matched to the pair ensemble's mean herald count
/// (pair_rate * time * eta_herald), each trial draws an input photon
/// number n ~ Poisson(input) and a transmitted n' ~ Binomial(n, 1 - alpha)
/// through the same probe-arm loss, and estimates 1 - n' / input.
EnsembleStats run_coherent_ensemble(const ExperimentConfig& cfg,
                                    unsigned workers = 1);

/// One wavelength of a scanned spectrum: the with-sample ensemble, the
/// sample-free calibration ensemble, and the sample loss extracted by
/// dividing out the system absorption.
struct SpectrumPoint {
    double lambda_nm = 0.0;  // probe wavelength
    EnsembleStats stats;
    EnsembleStats calibration;
    double alpha2 = 0.0;
    double alpha2_stderr = 0.0;
};

/// Runs a temperature scan: per temperature, a with-sample ensemble and a
/// sample-free calibration ensemble on independent seed streams; returns
/// points ordered by probe wavelength.
std::vector<SpectrumPoint> scan_spectrum(const ExperimentConfig& cfg,
                                         const std::vector<double>& temperatures_c,
                                         unsigned workers = 1);

/// Audit export, one row per trial: "trial,n_a,n_b,n_ab".
void export_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

}  // namespace pairspec
