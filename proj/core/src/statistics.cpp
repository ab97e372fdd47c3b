#include "pairspec/statistics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pairspec/errors.hpp"

namespace pairspec {

namespace {

void require_fraction(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " +
                          std::to_string(value));
    }
}

PrecisionPoint make_point(double alpha, std::uint64_t nu, double nbar,
                          double delta_alpha) {
    PrecisionPoint p;
    p.alpha = alpha;
    p.nu = nu;
    p.nbar = nbar;
    p.delta_alpha = delta_alpha;
    p.fisher_per_photon =
        delta_alpha > 0.0
            ? static_cast<double>(nu) / (delta_alpha * delta_alpha)
            : std::numeric_limits<double>::infinity();
    return p;
}

void require_trial_params(std::uint64_t nu, double nbar) {
    if (nu < 1) {
        throw DomainError("trial count nu must be >= 1");
    }
    if (!(nbar > 0.0)) {
        throw DomainError("mean photon number nbar must be positive");
    }
}

}  // namespace

double compose_losses(const LossBudget& budget) {
    require_fraction(budget.alpha1, "alpha1");
    require_fraction(budget.alpha2, "alpha2");
    require_fraction(budget.alpha3, "alpha3");
    return 1.0 - (1.0 - budget.alpha1) * (1.0 - budget.alpha2) *
                     (1.0 - budget.alpha3);
}

double extract_sample_loss(double alpha_total, double alpha_system) {
    // alpha_total is a noisy estimate and may fall below the system floor
    // (or below zero with accidentals enabled); it passes through unclamped.
    if (!std::isfinite(alpha_total) || alpha_total > 1.0) {
        throw DomainError("alpha_total must be finite and at most 1, got " +
                          std::to_string(alpha_total));
    }
    require_fraction(alpha_system, "alpha_system");
    if (alpha_system == 1.0) {
        throw DomainError("alpha_system = 1 leaves no transmission to divide out");
    }
    return 1.0 - (1.0 - alpha_total) / (1.0 - alpha_system);
}

PrecisionPoint snl_precision(double alpha, std::uint64_t nu, double nbar) {
    require_fraction(alpha, "alpha");
    require_trial_params(nu, nbar);
    const double delta =
        std::sqrt((1.0 - alpha) / (static_cast<double>(nu) * nbar));
    return make_point(alpha, nu, nbar, delta);
}

PrecisionPoint fock_precision(double alpha, std::uint64_t nu, double nbar) {
    require_fraction(alpha, "alpha");
    require_trial_params(nu, nbar);
    const double delta =
        std::sqrt(alpha * (1.0 - alpha) / (static_cast<double>(nu) * nbar));
    return make_point(alpha, nu, nbar, delta);
}

AdvantageRatio ideal_advantage(double alpha) {
    require_fraction(alpha, "alpha");
    if (alpha == 0.0) {
        // Both variances vanish; ratio 1 by convention.
        return {1.0, 0.0};
    }
    return {alpha, (1.0 - alpha) * 100.0};
}

double binomial_output_pmf(std::uint64_t n_in, std::uint64_t n_out, double alpha) {
    require_fraction(alpha, "alpha");
    if (n_out > n_in) {
        throw DomainError("n_out exceeds n_in in binomial output PMF");
    }
    if (alpha == 0.0) {
        return n_out == n_in ? 1.0 : 0.0;
    }
    if (alpha == 1.0) {
        return n_out == 0 ? 1.0 : 0.0;
    }
    // Log-space accumulation keeps the factorials finite for large n_in.
    const double n = static_cast<double>(n_in);
    const double k = static_cast<double>(n_out);
    const double log_p = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(n - k + 1.0) + k * std::log1p(-alpha) +
                         (n - k) * std::log(alpha);
    return std::exp(log_p);
}

double poisson_output_pmf(double nbar, std::uint64_t n_out, double alpha) {
    require_fraction(alpha, "alpha");
    if (nbar < 0.0) {
        throw DomainError("mean photon number nbar must be non-negative");
    }
    const double mean = nbar * (1.0 - alpha);
    if (mean == 0.0) {
        return n_out == 0 ? 1.0 : 0.0;
    }
    const double k = static_cast<double>(n_out);
    const double log_p = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
    return std::exp(log_p);
}

double absorbance_from_alpha(double alpha2) {
    require_fraction(alpha2, "alpha2");
    if (alpha2 == 1.0) {
        throw SaturationError(
            "absorbance diverges at alpha2 = 1; clamp before converting");
    }
    return -std::log1p(-alpha2);
}

double decadic_absorbance_from_alpha(double alpha2) {
    return absorbance_from_alpha(alpha2) / std::numbers::ln10;
}

double beer_lambert_absorbance(const BeerLambertParams& params) {
    if (params.epsilon < 0.0 || params.concentration < 0.0 ||
        params.path_length < 0.0) {
        throw DomainError("Beer-Lambert parameters must be non-negative");
    }
    return params.epsilon * params.concentration * params.path_length;
}

double photons_required(double alpha, double target_delta, ProbeKind probe) {
    if (!(target_delta > 0.0)) {
        throw DomainError("target_delta must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("photons_required needs alpha in (0, 1)");
    }
    const double variance = target_delta * target_delta;
    switch (probe) {
        case ProbeKind::coherent:
            return (1.0 - alpha) / variance;
        case ProbeKind::fock:
            return alpha * (1.0 - alpha) / variance;
    }
    throw DomainError("unknown probe kind");
}

}  // namespace pairspec
