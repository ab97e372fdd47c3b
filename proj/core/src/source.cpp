#include "pairspec/source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairspec/errors.hpp"
#include "pairspec/table_io.hpp"

namespace pairspec {

double gaussian_fwhm_factor() { return 2.0 * std::sqrt(2.0 * std::log(2.0)); }

double lineshape_sigma_nm(const Lineshape& shape) {
    return shape.fwhm_nm / gaussian_fwhm_factor();
}

double conjugate_wavelength(double pump_nm, double lambda_nm) {
    if (!(pump_nm > 0.0) || !(lambda_nm > pump_nm)) {
        throw DomainError("conjugate_wavelength needs lambda > pump > 0");
    }
    return 1.0 / (1.0 / pump_nm - 1.0 / lambda_nm);
}

SourceConfig default_source_config() {
    SourceConfig cfg;
    const double lo = 774.0;
    const double hi = 809.0;
    const int points = 8;
    for (int i = 0; i < points; ++i) {
        const double frac = static_cast<double>(i) / (points - 1);
        cfg.calibration.push_back(
            {25.0 + 175.0 * frac, lo + (hi - lo) * frac});
    }
    return cfg;
}

WavelengthPair wavelengths_at_temperature(const SourceConfig& cfg,
                                          double temperature_c) {
    const auto& table = cfg.calibration;
    if (table.size() < 2) {
        throw ConfigError("calibration table needs at least two points");
    }
    if (temperature_c < table.front().temperature_c ||
        temperature_c > table.back().temperature_c) {
        std::ostringstream msg;
        msg << "temperature " << temperature_c << " C outside calibration range ["
            << table.front().temperature_c << ", " << table.back().temperature_c
            << "]";
        throw RangeError(msg.str());
    }
    auto upper = std::upper_bound(
        table.begin(), table.end(), temperature_c,
        [](double t, const CalibrationPoint& p) { return t < p.temperature_c; });
    if (upper == table.begin()) {
        ++upper;
    }
    if (upper == table.end()) {
        --upper;
    }
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double frac =
        (temperature_c - lo.temperature_c) / (hi.temperature_c - lo.temperature_c);
    const double lambda_a = lo.lambda_a_nm + frac * (hi.lambda_a_nm - lo.lambda_a_nm);

    if (lambda_a < kLambdaAMinNm || lambda_a > kLambdaAMaxNm) {
        std::ostringstream msg;
        msg << "interpolated lambda_a " << lambda_a << " nm outside ["
            << kLambdaAMinNm << ", " << kLambdaAMaxNm << "]";
        throw ConfigError(msg.str());
    }
    const double lambda_b = conjugate_wavelength(cfg.pump_wavelength_nm, lambda_a);
    if (lambda_b < kLambdaBMinNm || lambda_b > kLambdaBMaxNm) {
        std::ostringstream msg;
        msg << "derived lambda_b " << lambda_b << " nm outside ["
            << kLambdaBMinNm << ", " << kLambdaBMaxNm
            << "]; calibration inconsistent with the pump";
        throw ConfigError(msg.str());
    }
    return {lambda_a, lambda_b};
}

double sample_photon_wavelength(const Lineshape& shape, RandomStream& rng) {
    if (!(shape.fwhm_nm > 0.0)) {
        return shape.center_nm;  // degenerate lineshape
    }
    std::normal_distribution<double> dist(shape.center_nm,
                                          lineshape_sigma_nm(shape));
    return dist(rng);
}

std::string ValidationReport::to_string() const {
    if (issues.empty()) {
        return "ok";
    }
    std::ostringstream out;
    for (const auto& issue : issues) {
        out << issue.field << ": " << issue.message << '\n';
    }
    return out.str();
}

namespace {

void check_positive(ValidationReport& report, double value, const char* field) {
    if (!(value > 0.0)) {
        report.issues.push_back(
            {field, "must be positive, got " + std::to_string(value)});
    }
}

void check_efficiency(ValidationReport& report, double value, const char* field) {
    if (!(value > 0.0 && value <= 1.0)) {
        report.issues.push_back(
            {field, "must lie in (0, 1], got " + std::to_string(value)});
    }
}

}  // namespace

ValidationReport validate_source(const SourceConfig& cfg) {
    ValidationReport report;
    check_positive(report, cfg.pump_wavelength_nm, "pump_wavelength_nm");
    if (cfg.pump_linewidth_fwhm_nm < 0.0) {
        report.issues.push_back({"pump_linewidth_fwhm_nm", "must be non-negative"});
    }
    check_positive(report, cfg.pair_rate_hz, "pair_rate_hz");
    if (!(cfg.epsilon_gain > 0.0 && cfg.epsilon_gain <= 0.2)) {
        report.issues.push_back(
            {"epsilon_gain", "must lie in (0, 0.2] for the low-gain pair model, got " +
                                 std::to_string(cfg.epsilon_gain)});
    }
    check_efficiency(report, cfg.eta_a, "eta_a");
    check_efficiency(report, cfg.eta_b, "eta_b");
    check_positive(report, cfg.lineshape_a_fwhm_nm, "lineshape_a_fwhm_nm");
    check_positive(report, cfg.lineshape_b_fwhm_nm, "lineshape_b_fwhm_nm");

    const auto& table = cfg.calibration;
    if (table.size() < 2) {
        report.issues.push_back(
            {"calibration", "needs at least two points for interpolation"});
        return report;
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].temperature_c > table[i - 1].temperature_c)) {
            report.issues.push_back(
                {"calibration", "temperatures must be strictly increasing at row " +
                                    std::to_string(i + 1)});
            break;
        }
    }
    const bool increasing = table.back().lambda_a_nm > table.front().lambda_a_nm;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const double prev = table[i - 1].lambda_a_nm;
        const double cur = table[i].lambda_a_nm;
        if (increasing ? !(cur > prev) : !(cur < prev)) {
            report.issues.push_back(
                {"calibration", "lambda_a must be strictly monotone at row " +
                                    std::to_string(i + 1)});
            break;
        }
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double lambda_a = table[i].lambda_a_nm;
        if (lambda_a < kLambdaAMinNm || lambda_a > kLambdaAMaxNm) {
            std::ostringstream msg;
            msg << "lambda_a " << lambda_a << " nm at row " << i + 1
                << " outside accessible range [" << kLambdaAMinNm << ", "
                << kLambdaAMaxNm << "]";
            report.issues.push_back({"calibration", msg.str()});
            continue;
        }
        if (cfg.pump_wavelength_nm > 0.0 && lambda_a > cfg.pump_wavelength_nm) {
            const double lambda_b =
                conjugate_wavelength(cfg.pump_wavelength_nm, lambda_a);
            if (lambda_b < kLambdaBMinNm || lambda_b > kLambdaBMaxNm) {
                std::ostringstream msg;
                msg << "derived lambda_b " << lambda_b << " nm at row " << i + 1
                    << " outside accessible range [" << kLambdaBMinNm << ", "
                    << kLambdaBMaxNm << "]";
                report.issues.push_back({"calibration", msg.str()});
            }
        }
    }
    return report;
}

std::vector<CalibrationPoint> load_calibration(const std::filesystem::path& path) {
    std::vector<CalibrationPoint> table;
    for (const auto& row : read_two_column_table(path)) {
        table.push_back({row.x, row.y});
    }
    return table;
}

}  // namespace pairspec
