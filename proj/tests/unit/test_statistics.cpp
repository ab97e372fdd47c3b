#include "pairspec/statistics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "pairspec/errors.hpp"

using namespace pairspec;

TEST_CASE("compose_losses multiplies survival factors") {
    CHECK(compose_losses({0.0, 0.0, 0.0}) == 0.0);
    CHECK(compose_losses({1.0, 0.0, 0.0}) == 1.0);
    CHECK(compose_losses({0.5, 0.3, 0.2}) == doctest::Approx(0.72).epsilon(1e-12));
    CHECK_THROWS_AS(compose_losses({-0.1, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(compose_losses({0.0, 1.2, 0.0}), DomainError);
}

TEST_CASE("compose_losses is symmetric and stays in [0, 1]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = uniform(rng);
        const double b = uniform(rng);
        const double c = uniform(rng);
        const double composed = compose_losses({a, b, c});
        CHECK(composed >= 0.0);
        CHECK(composed <= 1.0);
        CHECK(compose_losses({b, c, a}) == doctest::Approx(composed).epsilon(1e-14));
        CHECK(compose_losses({c, a, b}) == doctest::Approx(composed).epsilon(1e-14));
    }
}

TEST_CASE("extract_sample_loss inverts composition") {
    CHECK(extract_sample_loss(0.72, 0.6) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(extract_sample_loss(0.6, 0.6) == 0.0);
    // Negative values pass through for noisy estimates below the system floor.
    CHECK(extract_sample_loss(0.5, 0.6) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK_THROWS_AS(extract_sample_loss(0.5, 1.0), DomainError);
}

TEST_CASE("compose then extract is the identity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uniform(0.0, 0.999);
    for (int i = 0; i < 2000; ++i) {
        const double a1 = uniform(rng);
        const double a2 = uniform(rng);
        const double a3 = uniform(rng);
        const double total = compose_losses({a1, a2, a3});
        const double system = compose_losses({a1, 0.0, a3});
        CHECK(extract_sample_loss(total, system) ==
              doctest::Approx(a2).epsilon(1e-12));
    }
}

TEST_CASE("snl_precision matches the shot-noise formula") {
    CHECK(snl_precision(1.0, 10, 5.0).delta_alpha == 0.0);
    CHECK(snl_precision(0.5, 1, 1000.0).delta_alpha ==
          doctest::Approx(0.022360679774997897).epsilon(1e-12));
    CHECK(snl_precision(0.0, 100, 10.0).delta_alpha ==
          doctest::Approx(0.03162277660168379).epsilon(1e-12));
    CHECK_THROWS_AS(snl_precision(0.5, 0, 10.0), DomainError);
    CHECK_THROWS_AS(snl_precision(0.5, 10, 0.0), DomainError);
}

TEST_CASE("fock_precision matches the binomial formula") {
    CHECK(fock_precision(0.0, 10, 5.0).delta_alpha == 0.0);
    CHECK(fock_precision(1.0, 10, 5.0).delta_alpha == 0.0);
    CHECK(fock_precision(0.5, 1, 1000.0).delta_alpha ==
          doctest::Approx(0.015811388300841896).epsilon(1e-12));
}

TEST_CASE("fock over snl variance ratio equals alpha") {
    for (double alpha = 0.01; alpha <= 1.0; alpha += 0.01) {
        const double df = fock_precision(alpha, 3, 42.0).delta_alpha;
        const double dc = snl_precision(alpha, 3, 42.0).delta_alpha;
        if (dc == 0.0) {
            CHECK(df == 0.0);  // alpha = 1: both variances vanish
            continue;
        }
        CHECK((df * df) / (dc * dc) == doctest::Approx(alpha).epsilon(1e-12));
    }
}

TEST_CASE("fisher metric is nu over delta squared") {
    const auto point = snl_precision(0.5, 7, 100.0);
    CHECK(point.fisher_per_photon ==
          doctest::Approx(7.0 / (point.delta_alpha * point.delta_alpha))
              .epsilon(1e-12));
    CHECK(snl_precision(1.0, 7, 100.0).fisher_per_photon ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("ideal_advantage") {
    const auto at_one = ideal_advantage(1.0);
    CHECK(at_one.variance_ratio == 1.0);
    CHECK(at_one.advantage_percent == 0.0);

    CHECK(ideal_advantage(0.778).advantage_percent ==
          doctest::Approx(22.2).epsilon(1e-12));

    const auto at_half = ideal_advantage(0.5);
    CHECK(at_half.variance_ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(at_half.advantage_percent == doctest::Approx(50.0).epsilon(1e-12));

    // Both variances vanish at alpha = 0; ratio 1 by convention.
    CHECK(ideal_advantage(0.0).variance_ratio == 1.0);
    CHECK(ideal_advantage(0.0).advantage_percent == 0.0);
}

TEST_CASE("binomial output PMF") {
    CHECK(binomial_output_pmf(1, 1, 0.3) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(binomial_output_pmf(2, 1, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(binomial_output_pmf(3, 4, 0.5), DomainError);

    SUBCASE("normalizes over the full support") {
        double sum = 0.0;
        for (std::uint64_t k = 0; k <= 10; ++k) {
            sum += binomial_output_pmf(10, k, 0.3);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("mean and variance match the loss channel") {
        const std::uint64_t n_in = 40;
        const double alpha = 0.3;
        double mean = 0.0;
        double second = 0.0;
        for (std::uint64_t k = 0; k <= n_in; ++k) {
            const double p = binomial_output_pmf(n_in, k, alpha);
            mean += static_cast<double>(k) * p;
            second += static_cast<double>(k) * static_cast<double>(k) * p;
        }
        const double variance = second - mean * mean;
        CHECK(mean == doctest::Approx(40.0 * 0.7).epsilon(1e-10));
        CHECK(variance == doctest::Approx(40.0 * 0.3 * 0.7).epsilon(1e-8));
        // Same spread fock_precision predicts at nu = 1, nbar = n_in.
        const double delta = fock_precision(alpha, 1, 40.0).delta_alpha;
        CHECK(std::sqrt(variance) / 40.0 ==
              doctest::Approx(delta).epsilon(1e-8));
    }

    SUBCASE("degenerate alphas") {
        CHECK(binomial_output_pmf(5, 5, 0.0) == 1.0);
        CHECK(binomial_output_pmf(5, 3, 0.0) == 0.0);
        CHECK(binomial_output_pmf(5, 0, 1.0) == 1.0);
        CHECK(binomial_output_pmf(5, 1, 1.0) == 0.0);
    }

    SUBCASE("log-space evaluation survives large photon numbers") {
        const std::uint64_t n_in = 200000;
        const double alpha = 0.4;
        const double mean = static_cast<double>(n_in) * (1.0 - alpha);
        const double spread = 10.0 * std::sqrt(mean);
        double sum = 0.0;
        const auto lo = static_cast<std::uint64_t>(mean - spread);
        const auto hi = static_cast<std::uint64_t>(mean + spread);
        for (std::uint64_t k = lo; k <= hi; ++k) {
            sum += binomial_output_pmf(n_in, k, alpha);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("poisson output PMF") {
    CHECK(poisson_output_pmf(3.0, 0, 1.0) == 1.0);
    CHECK(poisson_output_pmf(3.0, 2, 1.0) == 0.0);
    CHECK(poisson_output_pmf(1.0, 0, 0.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(poisson_output_pmf(-1.0, 0, 0.0), DomainError);

    SUBCASE("mean equals nbar (1 - alpha)") {
        double mean = 0.0;
        for (std::uint64_t k = 0; k <= 60; ++k) {
            mean += static_cast<double>(k) * poisson_output_pmf(2.0, k, 0.5);
        }
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("normalizes within the mean + 10 sqrt(mean) window") {
        const double nbar = 50000.0;
        const double alpha = 0.2;
        const double mean = nbar * (1.0 - alpha);
        const double spread = 10.0 * std::sqrt(mean);
        double sum = 0.0;
        for (auto k = static_cast<std::uint64_t>(mean - spread);
             k <= static_cast<std::uint64_t>(mean + spread); ++k) {
            sum += poisson_output_pmf(nbar, k, alpha);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("variance equals the mean") {
        const double nbar = 30.0;
        const double alpha = 0.25;
        double mean = 0.0;
        double second = 0.0;
        for (std::uint64_t k = 0; k <= 200; ++k) {
            const double p = poisson_output_pmf(nbar, k, alpha);
            mean += static_cast<double>(k) * p;
            second += static_cast<double>(k) * static_cast<double>(k) * p;
        }
        CHECK(mean == doctest::Approx(nbar * (1.0 - alpha)).epsilon(1e-10));
        CHECK(second - mean * mean ==
              doctest::Approx(nbar * (1.0 - alpha)).epsilon(1e-8));
    }
}

TEST_CASE("absorbance conversion") {
    CHECK(absorbance_from_alpha(0.0) == 0.0);
    CHECK(absorbance_from_alpha(1.0 - std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(absorbance_from_alpha(0.5) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(absorbance_from_alpha(1.0), SaturationError);
    CHECK_THROWS_AS(absorbance_from_alpha(-0.01), DomainError);

    SUBCASE("round-trips with its inverse") {
        for (const double alpha : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8,
                                   0.9, 0.99}) {
            const double a = absorbance_from_alpha(alpha);
            CHECK(1.0 - std::exp(-a) == doctest::Approx(alpha).epsilon(1e-12));
        }
    }

    SUBCASE("monotone increasing") {
        double prev = -1.0;
        for (double alpha = 0.0; alpha < 1.0; alpha += 0.05) {
            const double a = absorbance_from_alpha(alpha);
            CHECK(a > prev);
            prev = a;
        }
    }

    SUBCASE("decadic variant divides by ln 10") {
        CHECK(decadic_absorbance_from_alpha(0.9) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("beer_lambert_absorbance is the epsilon c l product") {
    CHECK(beer_lambert_absorbance({100.0, 0.001, 1.0}) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(beer_lambert_absorbance({-1.0, 0.1, 1.0}), DomainError);
}

TEST_CASE("photons_required") {
    CHECK(photons_required(0.2, 0.01, ProbeKind::coherent) ==
          doctest::Approx(8000.0).epsilon(1e-12));
    CHECK(photons_required(0.2, 0.01, ProbeKind::fock) ==
          doctest::Approx(1600.0).epsilon(1e-12));
    CHECK(photons_required(0.5, 0.003, ProbeKind::fock) /
              photons_required(0.5, 0.003, ProbeKind::coherent) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(photons_required(0.5, 0.0, ProbeKind::fock), DomainError);
    CHECK_THROWS_AS(photons_required(0.0, 0.01, ProbeKind::fock), DomainError);
}
