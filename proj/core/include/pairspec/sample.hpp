#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "pairspec/source.hpp"

namespace pairspec {

/// Absorptive filter specified by its transmission, the way physical
/// bandpass filters are: alpha(lambda) = 1 - T exp(-4 ln2 (l-c)^2 / w^2).
struct GaussianBandpassProfile {
    double center_nm = 0.0;
    double fwhm_nm = 0.0;
    double peak_transmission = 1.0;
};

/// Wavelength-independent absorber, with an optional linear tilt around a
/// reference wavelength. Evaluation saturates into [0, 1], so a tilted
/// profile is flat after it hits either bound.
struct FlatProfile {
    double alpha = 0.0;
    double slope_per_nm = 0.0;
    double ref_lambda_nm = 0.0;
};

struct ProfileRow {
    double lambda_nm = 0.0;
    double alpha = 0.0;
};

/// Measured spectrum, linearly interpolated between rows. Evaluation is
/// only defined on [first row, last row].
struct TabulatedProfile {
    std::vector<ProfileRow> rows;
};

/// A sample's absorption as a function of wavelength.
class SpectralProfile {
public:
    static SpectralProfile gaussian_bandpass(double center_nm, double fwhm_nm,
                                             double peak_transmission = 1.0);
    static SpectralProfile flat(double alpha, double slope_per_nm = 0.0,
                                double ref_lambda_nm = 0.0);
    static SpectralProfile tabulated(std::vector<ProfileRow> rows);

    /// Absorption fraction at one wavelength; RangeError outside a
    /// tabulated profile's domain.
    double alpha_at(double lambda_nm) const;

    /// True when alpha_at is defined over [lo, hi].
    bool covers(double lo_nm, double hi_nm) const;

    bool is_tabulated() const;
    const char* kind_name() const;

    template <class Visitor>
    decltype(auto) visit(Visitor&& visitor) const {
        return std::visit(std::forward<Visitor>(visitor), profile_);
    }

private:
    using Variant =
        std::variant<GaussianBandpassProfile, FlatProfile, TabulatedProfile>;
    explicit SpectralProfile(Variant profile) : profile_(std::move(profile)) {}

    Variant profile_;
};

/// Expected per-photon absorption over the photon bandwidth:
/// integral of alpha(lambda) g(lambda) dlambda for the normalized Gaussian
/// lineshape density g, taken over center +- 5 fwhm with 64-node
/// Gauss-Legendre quadrature.
double effective_alpha(const SpectralProfile& profile, const Lineshape& shape);

/// Loads a tabulated profile from a two-column text file
/// (lambda_nm alpha, '#' comments). Rows must be strictly increasing in
/// lambda with alpha in [0, 1]; violations name the offending line.
SpectralProfile load_tabulated(const std::filesystem::path& path);

}  // namespace pairspec
