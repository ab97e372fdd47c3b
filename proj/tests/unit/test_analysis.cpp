#include "pairspec/analysis.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "pairspec/errors.hpp"

using namespace pairspec;

namespace {

// Synthetic heralded ensemble: per-trial estimates 1 - Bin(n, 1-alpha)/n.
EnsembleStats synthetic_binomial_ensemble(double alpha, std::uint64_t heralds,
                                          std::size_t trials,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::binomial_distribution<long long> coincidences(
        static_cast<long long>(heralds), 1.0 - alpha);
    EnsembleStats stats;
    stats.mean_herald_counts = static_cast<double>(heralds);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double estimate =
            1.0 - static_cast<double>(coincidences(rng)) /
                      static_cast<double>(heralds);
        stats.estimates.push_back(estimate);
        const double delta = estimate - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (estimate - mean);
    }
    stats.mean = mean;
    stats.variance = m2 / static_cast<double>(trials - 1);
    stats.stderr_of_mean = std::sqrt(stats.variance / static_cast<double>(trials));
    return stats;
}

}  // namespace

TEST_CASE("advantage of a binomial ensemble approaches 1 - alpha") {
    // Batch-variance Monte Carlo oracle at the total loss implied by the
    // peak advantage: alpha = 0.778 gives 22.2%.
    const auto stats = synthetic_binomial_ensemble(0.778, 1000, 1500, 424243);
    const AdvantageReport report = quantum_advantage(stats, stats.mean, 100);
    CHECK(report.batch_count == 15);
    CHECK(report.per_batch_advantage.size() == 15);
    CHECK(report.mean_advantage_percent == doctest::Approx(22.2).epsilon(2.0 / 22.2));
    CHECK(report.stderr_defined);
    CHECK(report.mean_advantage_percent <=
          report.theoretical_max_percent + 3.0 * report.stderr_percent);
}

TEST_CASE("advantage of an exactly shot-noise-limited ensemble is zero") {
    // Two-point batches with sample variance pinned to (1 - mean) / heralds.
    EnsembleStats stats;
    stats.mean_herald_counts = 1000.0;
    const double mean = 0.5;
    const double d = std::sqrt((1.0 - mean) / 1000.0 / 2.0);
    for (int i = 0; i < 40; ++i) {
        stats.estimates.push_back(mean - d);
        stats.estimates.push_back(mean + d);
    }
    stats.mean = mean;
    const AdvantageReport report = quantum_advantage(stats, mean, 2);
    CHECK(report.mean_advantage_percent == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.stderr_percent == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("shot-noise-distributed ensembles show no false advantage") {
    std::mt19937_64 rng(99);
    const double alpha = 0.6;
    const double heralds = 2000.0;
    std::normal_distribution<double> estimates(alpha,
                                               std::sqrt((1.0 - alpha) / heralds));
    EnsembleStats stats;
    stats.mean_herald_counts = heralds;
    for (int i = 0; i < 1500; ++i) {
        stats.estimates.push_back(estimates(rng));
    }
    stats.mean = alpha;
    const AdvantageReport report = quantum_advantage(stats, alpha, 100);
    CHECK(std::abs(report.mean_advantage_percent) <=
          3.0 * report.stderr_percent);
}

TEST_CASE("advantage batching and errors") {
    const auto stats = synthetic_binomial_ensemble(0.5, 500, 1530, 7);
    const AdvantageReport report = quantum_advantage(stats, 0.5, 100);
    CHECK(report.batch_count == 15);  // partial tail batch dropped
    CHECK(report.theoretical_max_percent == doctest::Approx(50.0));

    CHECK_THROWS_AS(quantum_advantage(stats, 0.5, 1), DomainError);
    CHECK_THROWS_AS(quantum_advantage(stats, 0.5, 2000), DomainError);

    SUBCASE("single batch leaves the stderr flagged undefined") {
        const auto small = synthetic_binomial_ensemble(0.5, 500, 150, 8);
        const AdvantageReport one = quantum_advantage(small, 0.5, 100);
        CHECK(one.batch_count == 1);
        CHECK_FALSE(one.stderr_defined);
    }
}

TEST_CASE("absorbance spectrum") {
    SUBCASE("zero absorption maps to zero absorbance") {
        const auto spectrum = absorbance_spectrum({{800.0, 0.0}, {810.0, 0.0}});
        CHECK(spectrum.clamped_count == 0);
        for (const auto& point : spectrum.points) {
            CHECK(point.absorbance == 0.0);
        }
    }
    SUBCASE("direct value and ordering") {
        const auto spectrum =
            absorbance_spectrum({{810.0, 0.25}, {820.0, 0.2}, {830.0, 0.25}});
        CHECK(spectrum.points[0].absorbance ==
              doctest::Approx(0.28768207245178085).epsilon(1e-12));
        CHECK(spectrum.points[0].lambda_nm == 810.0);
        CHECK(spectrum.points[1].lambda_nm == 820.0);
        // More absorbing sample sits above pointwise.
        CHECK(spectrum.points[0].absorbance > spectrum.points[1].absorbance);
    }
    SUBCASE("saturated bins are clamped and counted") {
        const auto spectrum =
            absorbance_spectrum({{810.0, 1.0}, {820.0, 0.5}, {830.0, 1.0 - 1e-12}});
        CHECK(spectrum.clamped_count == 2);
        CHECK(std::isfinite(spectrum.points[0].absorbance));
        CHECK(spectrum.points[0].absorbance ==
              doctest::Approx(-std::log(1e-9)).epsilon(1e-6));
    }
    SUBCASE("negative noise passes through") {
        const auto spectrum = absorbance_spectrum({{810.0, -0.05}}, false);
        CHECK(spectrum.points[0].absorbance < 0.0);
        CHECK(spectrum.clamped_count == 0);
    }
    SUBCASE("decadic conversion") {
        const auto spectrum = absorbance_spectrum({{810.0, 0.9}}, true);
        CHECK(spectrum.points[0].absorbance == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("precision fit recovers exact scaling") {
    const std::vector<ScalingPoint> points{
        {100.0, 0.05}, {1000.0, 0.5 / std::sqrt(1000.0)}, {10000.0, 0.005}};
    const PrecisionFit fit = fit_precision_scaling(points);
    CHECK(fit.coefficient == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.residual_rms == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("precision fit against binomial Monte Carlo data") {
    // Standard deviation of a binomial proportion at alpha = 0.2 scales as
    // sqrt(alpha (1 - alpha)) / sqrt(n) = 0.4 / sqrt(n).
    std::mt19937_64 rng(31);
    std::vector<ScalingPoint> points;
    for (const long long n : {200, 500, 1000, 2000, 5000}) {
        std::binomial_distribution<long long> dist(n, 0.8);
        double mean = 0.0;
        double m2 = 0.0;
        const int reps = 4000;
        for (int i = 0; i < reps; ++i) {
            const double estimate =
                1.0 - static_cast<double>(dist(rng)) / static_cast<double>(n);
            const double delta = estimate - mean;
            mean += delta / (i + 1);
            m2 += delta * (estimate - mean);
        }
        points.push_back({static_cast<double>(n), std::sqrt(m2 / (reps - 1))});
    }
    const PrecisionFit fit = fit_precision_scaling(points);
    CHECK(fit.coefficient == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("precision fit rejects degenerate input") {
    CHECK_THROWS_AS(fit_precision_scaling({{100.0, 0.1}, {200.0, 0.1}}),
                    DomainError);
    CHECK_THROWS_AS(
        fit_precision_scaling({{100.0, 0.1}, {100.0, 0.1}, {100.0, 0.1}}),
        DomainError);
    CHECK_THROWS_AS(
        fit_precision_scaling({{100.0, 0.1}, {200.0, 0.0}, {300.0, 0.1}}),
        DomainError);
}

namespace {

std::vector<ResolutionSeriesPoint> exact_series(double mean, double c) {
    std::vector<ResolutionSeriesPoint> series;
    for (const double n : {100.0, 400.0, 1600.0, 6400.0}) {
        series.push_back({n, mean, c / std::sqrt(n)});
    }
    return series;
}

}  // namespace

TEST_CASE("resolution analysis inverts the separation criterion") {
    const auto a = exact_series(0.20, 0.4);
    const auto b = exact_series(0.25, 0.4);
    const ModeResolution res = resolution_analysis(a, b, {2, 3, 4});
    CHECK(res.separation == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(res.photons_required.at(2) == 256);  // ceil((2*0.4/0.05)^2)
    CHECK(res.photons_required.at(3) == 576);
    CHECK(res.photons_required.at(4) == 1024);

    SUBCASE("requirements scale as k squared") {
        CHECK(res.photons_required.at(4) == 4 * res.photons_required.at(2));
    }
    SUBCASE("requirements grow with k") {
        CHECK(res.photons_required.at(2) < res.photons_required.at(3));
        CHECK(res.photons_required.at(3) < res.photons_required.at(4));
    }
}

TEST_CASE("resolution analysis takes the larger fitted curve") {
    const auto a = exact_series(0.20, 0.3);
    const auto b = exact_series(0.25, 0.4);
    const ModeResolution res = resolution_analysis(a, b, {2});
    CHECK(res.c_a == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(res.c_b == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(res.photons_required.at(2) == 256);  // driven by max(c_a, c_b)

    SUBCASE("sum and pooled rules are more demanding") {
        const auto sum = resolution_analysis(a, b, {2}, ErrorCombination::sum_fit);
        const auto pooled =
            resolution_analysis(a, b, {2}, ErrorCombination::pooled_fit);
        CHECK(sum.photons_required.at(2) > pooled.photons_required.at(2));
        CHECK(pooled.photons_required.at(2) > res.photons_required.at(2));
    }
}

TEST_CASE("resolution analysis errors") {
    const auto a = exact_series(0.20, 0.4);
    CHECK_THROWS_AS(resolution_analysis(a, a, {2}), DomainError);
    CHECK_THROWS_AS(resolution_analysis(a, {}, {2}), DomainError);
    CHECK_THROWS_AS(resolution_analysis(a, exact_series(0.25, 0.4), {0}),
                    DomainError);
}

TEST_CASE("resolution report pairs the modes") {
    // Fock coefficient sqrt(alpha) times the coherent one at equal scale.
    const double alpha = 0.72;
    const auto fock_a = exact_series(0.20, 0.4 * std::sqrt(alpha));
    const auto fock_b = exact_series(0.25, 0.4 * std::sqrt(alpha));
    const auto coh_a = exact_series(0.20, 0.4);
    const auto coh_b = exact_series(0.25, 0.4);
    const auto report = make_resolution_report(
        resolution_analysis(fock_a, fock_b, {2, 3, 4}),
        resolution_analysis(coh_a, coh_b, {2, 3, 4}));
    for (const auto& [k, req] : report.photons_required) {
        CHECK(req.saved > 0);
        CHECK(req.fock + static_cast<std::uint64_t>(req.saved) == req.coherent);
        const double ratio = static_cast<double>(req.fock) /
                             static_cast<double>(req.coherent);
        CHECK(ratio == doctest::Approx(alpha).epsilon(0.02));
    }
}
