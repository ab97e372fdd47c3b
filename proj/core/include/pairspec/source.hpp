#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pairspec/random.hpp"

namespace pairspec {

/// One row of the crystal-temperature calibration: oven temperature against
/// the signal-arm center wavelength measured for it.
struct CalibrationPoint {
    double temperature_c = 0.0;
    double lambda_a_nm = 0.0;
};

/// Gaussian spectral density of a single photon.
struct Lineshape {
    double center_nm = 0.0;
    double fwhm_nm = 0.0;
};

/// Temperature-tuned photon-pair source. Wavelength control is a measured
/// calibration table (temperature -> lambda_a); the partner wavelength
/// follows from energy conservation against the fixed pump.
///
/// epsilon_gain documents the low-gain regime of the pair state
/// |00> + eps |11>; it does not enter simulation arithmetic (pair_rate_hz
/// is the operational brightness parameter).
struct SourceConfig {
    double pump_wavelength_nm = 403.9;
    double pump_linewidth_fwhm_nm = 0.057;
    double pair_rate_hz = 1.0e5;
    double epsilon_gain = 0.1;
    double eta_a = 0.35;  // heralding-arm efficiency
    double eta_b = 0.29;  // probe-arm efficiency
    double lineshape_a_fwhm_nm = 0.5;
    double lineshape_b_fwhm_nm = 0.7;
    std::vector<CalibrationPoint> calibration;
};

struct WavelengthPair {
    double lambda_a_nm = 0.0;
    double lambda_b_nm = 0.0;
};

/// Accessible wavelength windows of the setup, arm a and arm b.
inline constexpr double kLambdaAMinNm = 773.0;
inline constexpr double kLambdaAMaxNm = 809.0;
inline constexpr double kLambdaBMinNm = 806.0;
inline constexpr double kLambdaBMaxNm = 845.0;

/// FWHM of a Gaussian divided by its standard deviation: 2 sqrt(2 ln 2).
double gaussian_fwhm_factor();

double lineshape_sigma_nm(const Lineshape& shape);

/// Energy conservation: 1/lambda_out = 1/pump - 1/lambda_in.
double conjugate_wavelength(double pump_nm, double lambda_nm);

/// Default configuration with an illustrative 8-point calibration table.
/// The table spans lambda_a in [774, 809]; the 773 nm end of the accessible
/// window is excluded because its energy-conserving partner falls above the
/// 845 nm arm-b bound.
SourceConfig default_source_config();

/// Piecewise-linear interpolation of the calibration table, then energy
/// conservation for the partner arm. Throws RangeError outside the table
/// and ConfigError when a derived wavelength leaves its accessible window.
WavelengthPair wavelengths_at_temperature(const SourceConfig& cfg,
                                          double temperature_c);

/// One wavelength draw from a Gaussian lineshape.
double sample_photon_wavelength(const Lineshape& shape, RandomStream& rng);

struct ValidationIssue {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Checks every SourceConfig invariant and reports all violations.
ValidationReport validate_source(const SourceConfig& cfg);

/// Loads a calibration table from a two-column text file
/// (temperature_c lambda_a_nm, '#' comments).
std::vector<CalibrationPoint> load_calibration(const std::filesystem::path& path);

}  // namespace pairspec
