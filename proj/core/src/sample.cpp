#include "pairspec/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "pairspec/errors.hpp"
#include "pairspec/table_io.hpp"

namespace pairspec {

namespace {

constexpr double kFourLn2 = 2.772588722239781;  // 4 ln 2

void validate_rows(const std::vector<ProfileRow>& rows) {
    if (rows.empty()) {
        throw ParseError("tabulated profile has no rows");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].alpha >= 0.0 && rows[i].alpha <= 1.0)) {
            throw ParseError("alpha outside [0, 1]", i + 1);
        }
        if (i > 0 && !(rows[i].lambda_nm > rows[i - 1].lambda_nm)) {
            throw ParseError("lambda must be strictly increasing", i + 1);
        }
    }
}

struct AlphaAt {
    double lambda_nm;

    double operator()(const GaussianBandpassProfile& p) const {
        const double d = lambda_nm - p.center_nm;
        const double transmission =
            p.peak_transmission *
            std::exp(-kFourLn2 * d * d / (p.fwhm_nm * p.fwhm_nm));
        return 1.0 - transmission;
    }

    double operator()(const FlatProfile& p) const {
        const double a =
            p.alpha + p.slope_per_nm * (lambda_nm - p.ref_lambda_nm);
        return std::clamp(a, 0.0, 1.0);
    }

    double operator()(const TabulatedProfile& p) const {
        const auto& rows = p.rows;
        if (lambda_nm < rows.front().lambda_nm ||
            lambda_nm > rows.back().lambda_nm) {
            std::ostringstream msg;
            msg << "lambda " << lambda_nm << " nm outside tabulated domain ["
                << rows.front().lambda_nm << ", " << rows.back().lambda_nm << "]";
            throw RangeError(msg.str());
        }
        auto upper = std::upper_bound(
            rows.begin(), rows.end(), lambda_nm,
            [](double l, const ProfileRow& r) { return l < r.lambda_nm; });
        if (upper == rows.begin()) {
            ++upper;
        }
        if (upper == rows.end()) {
            --upper;
        }
        const auto& hi = *upper;
        const auto& lo = *(upper - 1);
        const double frac =
            (lambda_nm - lo.lambda_nm) / (hi.lambda_nm - lo.lambda_nm);
        return lo.alpha + frac * (hi.alpha - lo.alpha);
    }
};

}  // namespace

SpectralProfile SpectralProfile::gaussian_bandpass(double center_nm,
                                                   double fwhm_nm,
                                                   double peak_transmission) {
    if (!(fwhm_nm > 0.0)) {
        throw DomainError("gaussian bandpass fwhm must be positive");
    }
    if (!(peak_transmission > 0.0 && peak_transmission <= 1.0)) {
        throw DomainError("peak_transmission must lie in (0, 1]");
    }
    return SpectralProfile(
        GaussianBandpassProfile{center_nm, fwhm_nm, peak_transmission});
}

SpectralProfile SpectralProfile::flat(double alpha, double slope_per_nm,
                                      double ref_lambda_nm) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("flat profile alpha must lie in [0, 1]");
    }
    return SpectralProfile(FlatProfile{alpha, slope_per_nm, ref_lambda_nm});
}

SpectralProfile SpectralProfile::tabulated(std::vector<ProfileRow> rows) {
    validate_rows(rows);
    return SpectralProfile(TabulatedProfile{std::move(rows)});
}

double SpectralProfile::alpha_at(double lambda_nm) const {
    return std::visit(AlphaAt{lambda_nm}, profile_);
}

bool SpectralProfile::covers(double lo_nm, double hi_nm) const {
    if (const auto* tab = std::get_if<TabulatedProfile>(&profile_)) {
        return lo_nm >= tab->rows.front().lambda_nm &&
               hi_nm <= tab->rows.back().lambda_nm;
    }
    return true;
}

bool SpectralProfile::is_tabulated() const {
    return std::holds_alternative<TabulatedProfile>(profile_);
}

const char* SpectralProfile::kind_name() const {
    return std::visit(
        [](const auto& p) -> const char* {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianBandpassProfile>) {
                return "gaussian_bandpass";
            } else if constexpr (std::is_same_v<T, FlatProfile>) {
                return "flat";
            } else {
                return "tabulated";
            }
        },
        profile_);
}

double effective_alpha(const SpectralProfile& profile, const Lineshape& shape) {
    if (!(shape.fwhm_nm > 0.0)) {
        return profile.alpha_at(shape.center_nm);  // delta-function limit
    }
    const double half_width = 5.0 * shape.fwhm_nm;
    const double lo = shape.center_nm - half_width;
    const double hi = shape.center_nm + half_width;
    if (!profile.covers(lo, hi)) {
        std::ostringstream msg;
        msg << "lineshape support [" << lo << ", " << hi
            << "] nm exceeds the tabulated profile domain";
        throw RangeError(msg.str());
    }
    const double sigma = lineshape_sigma_nm(shape);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    const auto integrand = [&](double lambda) {
        const double z = (lambda - shape.center_nm) / sigma;
        return profile.alpha_at(lambda) * norm * std::exp(-0.5 * z * z);
    };
    return boost::math::quadrature::gauss<double, 64>::integrate(integrand, lo, hi);
}

SpectralProfile load_tabulated(const std::filesystem::path& path) {
    const auto raw = read_two_column_table(path);
    std::vector<ProfileRow> rows;
    rows.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(raw[i].y >= 0.0 && raw[i].y <= 1.0)) {
            throw ParseError(path.string() + ": alpha outside [0, 1]",
                             raw[i].line);
        }
        if (i > 0 && !(raw[i].x > raw[i - 1].x)) {
            throw ParseError(path.string() + ": lambda must be strictly increasing",
                             raw[i].line);
        }
        rows.push_back({raw[i].x, raw[i].y});
    }
    return SpectralProfile::tabulated(std::move(rows));
}

}  // namespace pairspec
