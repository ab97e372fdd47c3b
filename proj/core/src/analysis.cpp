#include "pairspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pairspec/errors.hpp"
#include "pairspec/statistics.hpp"

namespace pairspec {

namespace {

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
};

MeanVar mean_and_sample_variance(const double* begin, std::size_t count) {
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double delta = begin[i] - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (begin[i] - mean);
    }
    return {mean, count > 1 ? m2 / static_cast<double>(count - 1) : 0.0};
}

double series_mean(const std::vector<ResolutionSeriesPoint>& series) {
    double sum = 0.0;
    for (const auto& point : series) {
        sum += point.mean;
    }
    return sum / static_cast<double>(series.size());
}

}  // namespace

AdvantageReport quantum_advantage(const EnsembleStats& fock, double baseline_alpha,
                                  std::uint64_t batch_size) {
    if (batch_size < 2) {
        throw DomainError("batch_size must be at least 2");
    }
    if (fock.estimates.size() < batch_size) {
        throw DomainError("ensemble smaller than one batch");
    }
    if (!(fock.mean_herald_counts > 0.0)) {
        throw DomainError("ensemble has no herald counts to match against");
    }

    AdvantageReport report;
    report.batch_size = batch_size;
    report.batch_count = fock.estimates.size() / batch_size;
    report.per_batch_advantage.reserve(report.batch_count);
    for (std::uint64_t b = 0; b < report.batch_count; ++b) {
        const auto [batch_mean, batch_var] = mean_and_sample_variance(
            fock.estimates.data() + b * batch_size, batch_size);
        const double snl_variance =
            (1.0 - batch_mean) / fock.mean_herald_counts;
        // batch_mean = 1 forces batch_var = 0 as well: no advantage at
        // total absorption.
        const double advantage =
            snl_variance > 0.0 ? 1.0 - batch_var / snl_variance : 0.0;
        report.per_batch_advantage.push_back(advantage);
    }

    const auto [adv_mean, adv_var] = mean_and_sample_variance(
        report.per_batch_advantage.data(), report.per_batch_advantage.size());
    report.mean_advantage_percent = adv_mean * 100.0;
    report.stderr_defined = report.batch_count >= 2;
    report.stderr_percent =
        report.stderr_defined
            ? std::sqrt(adv_var / static_cast<double>(report.batch_count)) * 100.0
            : 0.0;
    report.theoretical_max_percent = ideal_advantage(baseline_alpha).advantage_percent;
    return report;
}

AbsorbanceSpectrum absorbance_spectrum(
    const std::vector<std::pair<double, double>>& alpha2_by_lambda, bool decadic) {
    AbsorbanceSpectrum spectrum;
    spectrum.points.reserve(alpha2_by_lambda.size());
    for (const auto& [lambda, alpha2] : alpha2_by_lambda) {
        double a = alpha2;
        if (a > kAbsorbanceCeiling) {
            a = kAbsorbanceCeiling;
            ++spectrum.clamped_count;
        }
        double absorbance = -std::log1p(-a);
        if (decadic) {
            absorbance /= std::numbers::ln10;
        }
        spectrum.points.push_back({lambda, absorbance});
    }
    return spectrum;
}

PrecisionFit fit_precision_scaling(const std::vector<ScalingPoint>& points) {
    if (points.size() < 3) {
        throw DomainError("precision fit needs at least 3 points");
    }
    for (const auto& point : points) {
        if (!(point.n_total > 0.0) || !(point.delta_alpha > 0.0)) {
            throw DomainError("precision fit points must be positive");
        }
    }
    const double n_ref = points.front().n_total;
    const bool all_equal =
        std::all_of(points.begin(), points.end(), [n_ref](const ScalingPoint& p) {
            return p.n_total == n_ref;
        });
    if (all_equal) {
        throw DomainError("precision fit is degenerate: all points share one n");
    }

    // ln(delta) = ln(c) - (1/2) ln(n) with the slope fixed, so the
    // least-squares intercept is the mean of ln(delta) + (1/2) ln(n).
    double log_c = 0.0;
    for (const auto& point : points) {
        log_c += std::log(point.delta_alpha) + 0.5 * std::log(point.n_total);
    }
    log_c /= static_cast<double>(points.size());

    double ss = 0.0;
    for (const auto& point : points) {
        const double residual =
            std::log(point.delta_alpha) - (log_c - 0.5 * std::log(point.n_total));
        ss += residual * residual;
    }
    return {std::exp(log_c),
            std::sqrt(ss / static_cast<double>(points.size()))};
}

ModeResolution resolution_analysis(const std::vector<ResolutionSeriesPoint>& a,
                                   const std::vector<ResolutionSeriesPoint>& b,
                                   const std::vector<int>& ks,
                                   ErrorCombination rule) {
    if (a.empty() || b.empty()) {
        throw DomainError("resolution analysis needs both sample series");
    }
    auto to_scaling = [](const std::vector<ResolutionSeriesPoint>& series) {
        std::vector<ScalingPoint> points;
        points.reserve(series.size());
        for (const auto& p : series) {
            points.push_back({p.n_total, p.delta_alpha});
        }
        return points;
    };

    ModeResolution result;
    result.c_a = fit_precision_scaling(to_scaling(a)).coefficient;
    result.c_b = fit_precision_scaling(to_scaling(b)).coefficient;
    result.separation = std::abs(series_mean(a) - series_mean(b));
    if (!(result.separation > 0.0)) {
        throw DomainError("resolution undefined: zero separation between samples");
    }

    double combined = 0.0;
    switch (rule) {
        case ErrorCombination::max_fit:
            combined = std::max(result.c_a, result.c_b);
            break;
        case ErrorCombination::sum_fit:
            combined = result.c_a + result.c_b;
            break;
        case ErrorCombination::pooled_fit:
            combined = std::hypot(result.c_a, result.c_b);
            break;
    }

    for (const int k : ks) {
        if (k < 1) {
            throw DomainError("separation multiplier k must be at least 1");
        }
        const double ratio = static_cast<double>(k) * combined / result.separation;
        // Back off one part in 1e12 so analytically exact integers do not
        // get bumped up by floating-point noise in the division.
        result.photons_required[k] = static_cast<std::uint64_t>(
            std::ceil(ratio * ratio * (1.0 - 1e-12)));
    }
    return result;
}

ResolutionReport make_resolution_report(ModeResolution fock,
                                        ModeResolution coherent) {
    ResolutionReport report;
    for (const auto& [k, n_fock] : fock.photons_required) {
        const auto it = coherent.photons_required.find(k);
        if (it == coherent.photons_required.end()) {
            throw DomainError("fock and coherent resolutions use different k sets");
        }
        ResolutionRequirement req;
        req.fock = n_fock;
        req.coherent = it->second;
        req.saved = static_cast<std::int64_t>(it->second) -
                    static_cast<std::int64_t>(n_fock);
        report.photons_required[k] = req;
    }
    report.fock = std::move(fock);
    report.coherent = std::move(coherent);
    return report;
}

}  // namespace pairspec
