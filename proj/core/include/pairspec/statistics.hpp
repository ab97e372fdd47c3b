#pragma once

#include <cstdint>

namespace pairspec {

/// The three loss stages a probe photon can fail at: before the sample
/// (alpha1), in the sample (alpha2), and during detection (alpha3).
/// Each is a fraction in [0, 1].
struct LossBudget {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;
};

/// One point of the precision theory: the loss alpha, the trial count nu,
/// the mean photon number per trial nbar, the root-mean-square error
/// delta_alpha, and the information metric nu / delta_alpha^2.
///
/// fisher_per_photon is +infinity when delta_alpha == 0 (estimates with
/// vanishing variance at the alpha = 0, 1 endpoints).
struct PrecisionPoint {
    double alpha = 0.0;
    std::uint64_t nu = 0;
    double nbar = 0.0;
    double delta_alpha = 0.0;
    double fisher_per_photon = 0.0;
};

/// Beer-Lambert parameters: molar absorption coefficient (L mol^-1 cm^-1),
/// molar concentration (mol L^-1) and path length (cm).
struct BeerLambertParams {
    double epsilon = 0.0;
    double concentration = 0.0;
    double path_length = 0.0;
};

enum class ProbeKind { fock, coherent };

/// Variance ratio of the single-photon probe to the shot-noise-limited
/// probe, and the corresponding percentage advantage.
struct AdvantageRatio {
    double variance_ratio = 1.0;
    double advantage_percent = 0.0;
};

/// Total loss of the three stages in series:
/// 1 - (1 - alpha1)(1 - alpha2)(1 - alpha3). Symmetric in its factors.
double compose_losses(const LossBudget& budget);

/// Inverts the composition against a separately calibrated system loss:
/// 1 - (1 - alpha_total) / (1 - alpha_system). The result may be negative
/// when a noisy alpha_total estimate falls below the system floor; callers
/// decide whether to clamp.
double extract_sample_loss(double alpha_total, double alpha_system);

/// Shot-noise limit for a Poisson-distributed probe:
/// delta_alpha = sqrt((1 - alpha) / (nu * nbar)).
PrecisionPoint snl_precision(double alpha, std::uint64_t nu, double nbar);

/// Fock-state probe under loss (binomial output statistics):
/// delta_alpha = sqrt(alpha (1 - alpha) / (nu * nbar)).
PrecisionPoint fock_precision(double alpha, std::uint64_t nu, double nbar);

/// Ideal variance ratio Fock/SNL, which equals alpha, and the advantage
/// (1 - alpha) * 100 in percent. At alpha = 0 both variances vanish; the
/// ratio is 1 by convention and the advantage 0.
AdvantageRatio ideal_advantage(double alpha);

/// Binomial output distribution of a Fock probe |n_in> after loss alpha:
/// C(n_in, n_out) (1 - alpha)^n_out alpha^(n_in - n_out).
double binomial_output_pmf(std::uint64_t n_in, std::uint64_t n_out, double alpha);

/// Poisson output distribution of a coherent probe with mean nbar after
/// loss alpha: mean and variance both nbar * (1 - alpha).
double poisson_output_pmf(double nbar, std::uint64_t n_out, double alpha);

/// Napierian absorbance A = -ln(1 - alpha2), non-negative and monotone.
/// Inverse: alpha2 = 1 - exp(-A). Throws SaturationError at alpha2 = 1.
double absorbance_from_alpha(double alpha2);

/// Decadic absorbance A10 = -log10(1 - alpha2) = absorbance / ln 10.
double decadic_absorbance_from_alpha(double alpha2);

/// A = epsilon * c * l.
double beer_lambert_absorbance(const BeerLambertParams& params);

/// Total photon budget nu * nbar required to reach precision target_delta
/// at loss alpha with the given probe. The Fock/coherent ratio equals alpha.
double photons_required(double alpha, double target_delta, ProbeKind probe);

}  // namespace pairspec
