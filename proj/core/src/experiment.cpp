#include "pairspec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "pairspec/errors.hpp"
#include "pairspec/random.hpp"
#include "pairspec/statistics.hpp"

namespace pairspec {

const char* arm_name(Arm arm) { return arm == Arm::a ? "a" : "b"; }

Arm herald_arm_for(const ExperimentConfig& cfg) {
    return cfg.sample_arm == Arm::a ? Arm::b : Arm::a;
}

WavelengthPair resolve_wavelengths(const ExperimentConfig& cfg) {
    if (cfg.lambda_a_nm) {
        const double lambda_a = *cfg.lambda_a_nm;
        if (lambda_a < kLambdaAMinNm || lambda_a > kLambdaAMaxNm) {
            std::ostringstream msg;
            msg << "lambda_a override " << lambda_a << " nm outside ["
                << kLambdaAMinNm << ", " << kLambdaAMaxNm << "]";
            throw ConfigError(msg.str());
        }
        const double lambda_b =
            conjugate_wavelength(cfg.source.pump_wavelength_nm, lambda_a);
        if (lambda_b < kLambdaBMinNm || lambda_b > kLambdaBMaxNm) {
            std::ostringstream msg;
            msg << "derived lambda_b " << lambda_b << " nm outside ["
                << kLambdaBMinNm << ", " << kLambdaBMaxNm << "]";
            throw ConfigError(msg.str());
        }
        return {lambda_a, lambda_b};
    }
    if (cfg.temperature_c) {
        return wavelengths_at_temperature(cfg.source, *cfg.temperature_c);
    }
    throw ConfigError("experiment needs either temperature_c or lambda_a_nm");
}

ValidationReport validate_experiment(const ExperimentConfig& cfg) {
    ValidationReport report = validate_source(cfg.source);
    if (!(cfg.integration_time_s > 0.0)) {
        report.issues.push_back({"integration_time_s", "must be positive"});
    }
    if (cfg.trials < 1) {
        report.issues.push_back({"trials", "must be at least 1"});
    }
    if (cfg.accidentals && !(cfg.accidentals->coincidence_window_s >= 0.0)) {
        report.issues.push_back(
            {"accidentals.coincidence_window_s", "must be non-negative"});
    }
    if (cfg.lambda_a_nm || cfg.temperature_c) {
        try {
            resolve_wavelengths(cfg);
        } catch (const Error& err) {
            report.issues.push_back({"wavelength", err.what()});
        }
    }
    return report;
}

namespace {

// Per-ensemble constants resolved once, shared by every trial.
struct TrialContext {
    double mean_pairs = 0.0;
    double eta_herald = 0.0;
    double eta_probe = 0.0;
    Lineshape probe_shape;
    const SpectralProfile* sample = nullptr;
    std::optional<double> accidental_window_ratio;  // window / integration time
    Arm sample_arm = Arm::b;
};

TrialContext make_context(const ExperimentConfig& cfg) {
    TrialContext ctx;
    const WavelengthPair pair = resolve_wavelengths(cfg);
    ctx.mean_pairs = cfg.source.pair_rate_hz * cfg.integration_time_s;
    ctx.sample_arm = cfg.sample_arm;
    if (cfg.sample_arm == Arm::b) {
        ctx.eta_herald = cfg.source.eta_a;
        ctx.eta_probe = cfg.source.eta_b;
        ctx.probe_shape = {pair.lambda_b_nm, cfg.source.lineshape_b_fwhm_nm};
    } else {
        ctx.eta_herald = cfg.source.eta_b;
        ctx.eta_probe = cfg.source.eta_a;
        ctx.probe_shape = {pair.lambda_a_nm, cfg.source.lineshape_a_fwhm_nm};
    }
    ctx.sample = &cfg.sample;
    if (cfg.accidentals) {
        ctx.accidental_window_ratio =
            cfg.accidentals->coincidence_window_s / cfg.integration_time_s;
    }
    return ctx;
}

TrialRecord run_trial_with(const TrialContext& ctx, RandomStream& rng) {
    std::poisson_distribution<long long> pair_count(ctx.mean_pairs);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> wavelength(
        ctx.probe_shape.center_nm, lineshape_sigma_nm(ctx.probe_shape));

    const long long pairs = pair_count(rng);
    std::uint64_t heralds = 0;
    std::uint64_t probes = 0;
    std::uint64_t coincidences = 0;
    for (long long i = 0; i < pairs; ++i) {
        const bool herald_detected = uniform(rng) < ctx.eta_herald;
        const double lambda = wavelength(rng);
        const double survival =
            (1.0 - ctx.sample->alpha_at(lambda)) * ctx.eta_probe;
        const bool probe_detected = uniform(rng) < survival;
        heralds += herald_detected;
        probes += probe_detected;
        coincidences += herald_detected && probe_detected;
    }

    TrialRecord rec;
    if (ctx.sample_arm == Arm::b) {
        rec.n_a = heralds;
        rec.n_b = probes;
    } else {
        rec.n_a = probes;
        rec.n_b = heralds;
    }
    rec.n_ab = coincidences;
    if (ctx.accidental_window_ratio && *ctx.accidental_window_ratio > 0.0) {
        const double rate = static_cast<double>(rec.n_a) *
                            static_cast<double>(rec.n_b) *
                            *ctx.accidental_window_ratio;
        std::poisson_distribution<long long> spurious(rate);
        rec.n_ab += static_cast<std::uint64_t>(spurious(rng));
    }
    return rec;
}

void require_valid(const ExperimentConfig& cfg) {
    const ValidationReport report = validate_experiment(cfg);
    if (!report.ok()) {
        throw ConfigError("invalid experiment configuration:\n" +
                          report.to_string());
    }
}

// Runs fn(i) for i in [0, count) across the requested workers. Results must
// land in pre-sized slots so aggregation order stays fixed.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    const std::uint64_t n_threads = std::min<std::uint64_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::uint64_t t = 0; t < n_threads; ++t) {
        const std::uint64_t begin = count * t / n_threads;
        const std::uint64_t end = count * (t + 1) / n_threads;
        pool.emplace_back([begin, end, &fn] {
            for (std::uint64_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
    for (auto& thread : pool) {
        thread.join();
    }
}

// One-pass Welford accumulation over the estimates, in index order.
EnsembleStats aggregate(std::vector<TrialRecord> records, Arm herald_arm,
                        bool keep_records) {
    EnsembleStats stats;
    stats.estimates.reserve(records.size());
    double mean = 0.0;
    double m2 = 0.0;
    double herald_sum = 0.0;
    for (const TrialRecord& rec : records) {
        stats.total_detected_photons += rec.n_a + rec.n_b;
        const std::uint64_t heralds = herald_arm == Arm::a ? rec.n_a : rec.n_b;
        if (heralds == 0) {
            ++stats.zero_herald_trials;
            continue;
        }
        const double estimate =
            1.0 - static_cast<double>(rec.n_ab) / static_cast<double>(heralds);
        stats.estimates.push_back(estimate);
        herald_sum += static_cast<double>(heralds);
        const double n = static_cast<double>(stats.estimates.size());
        const double delta = estimate - mean;
        mean += delta / n;
        m2 += delta * (estimate - mean);
    }
    if (stats.estimates.empty()) {
        throw InsufficientDataError(
            "every trial had zero herald counts; nothing to estimate");
    }
    const std::size_t n = stats.estimates.size();
    stats.mean = mean;
    stats.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    stats.stderr_of_mean = std::sqrt(stats.variance / static_cast<double>(n));
    stats.mean_herald_counts = herald_sum / static_cast<double>(n);
    if (keep_records) {
        stats.records = std::move(records);
    }
    return stats;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index) {
    const TrialContext ctx = make_context(cfg);
    RandomStream rng = make_stream(cfg.master_seed, trial_index, StreamRole::trial);
    return run_trial_with(ctx, rng);
}

double estimate_alpha(const TrialRecord& rec, Arm herald_arm) {
    const std::uint64_t heralds = herald_arm == Arm::a ? rec.n_a : rec.n_b;
    if (heralds == 0) {
        throw InsufficientDataError("zero herald counts in trial");
    }
    return 1.0 - static_cast<double>(rec.n_ab) / static_cast<double>(heralds);
}

EnsembleStats run_ensemble(const ExperimentConfig& cfg, unsigned workers) {
    require_valid(cfg);
    const TrialContext ctx = make_context(cfg);
    std::vector<TrialRecord> records(cfg.trials);
    parallel_for(cfg.trials, workers, [&](std::uint64_t i) {
        RandomStream rng = make_stream(cfg.master_seed, i, StreamRole::trial);
        records[i] = run_trial_with(ctx, rng);
    });
    return aggregate(std::move(records), herald_arm_for(cfg), true);
}

EnsembleStats run_coherent_ensemble(const ExperimentConfig& cfg, unsigned workers) {
    require_valid(cfg);
    const TrialContext ctx = make_context(cfg);
    // Probe-arm loss seen by the classical beam: the lineshape-averaged
    // sample absorption composed with the probe-arm efficiency.
    const double alpha_channel =
        1.0 - (1.0 - effective_alpha(*ctx.sample, ctx.probe_shape)) * ctx.eta_probe;
    const double matched_input = ctx.mean_pairs * ctx.eta_herald;
    if (!(matched_input > 0.0)) {
        throw ConfigError("matched input intensity is zero");
    }

    EnsembleStats stats;
    stats.estimates.resize(cfg.trials);
    std::vector<std::uint64_t> detected(cfg.trials);
    parallel_for(cfg.trials, workers, [&](std::uint64_t i) {
        RandomStream rng =
            make_stream(cfg.master_seed, i, StreamRole::coherent);
        std::poisson_distribution<long long> input(matched_input);
        const long long n_in = input(rng);
        long long n_out = 0;
        if (n_in > 0) {
            std::binomial_distribution<long long> transmitted(
                n_in, 1.0 - alpha_channel);
            n_out = transmitted(rng);
        }
        detected[i] = static_cast<std::uint64_t>(n_out);
        // The classical protocol's input intensity is calibrated, so the
        // denominator is known exactly.
        stats.estimates[i] = 1.0 - static_cast<double>(n_out) / matched_input;
    });

    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < stats.estimates.size(); ++i) {
        stats.total_detected_photons += detected[i];
        const double delta = stats.estimates[i] - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (stats.estimates[i] - mean);
    }
    const std::size_t n = stats.estimates.size();
    stats.mean = mean;
    stats.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    stats.stderr_of_mean = std::sqrt(stats.variance / static_cast<double>(n));
    stats.mean_herald_counts = matched_input;
    return stats;
}

std::vector<SpectrumPoint> scan_spectrum(const ExperimentConfig& cfg,
                                         const std::vector<double>& temperatures_c,
                                         unsigned workers) {
    require_valid(cfg);
    std::vector<SpectrumPoint> spectrum;
    spectrum.reserve(temperatures_c.size());
    const SpectralProfile no_sample = SpectralProfile::flat(0.0);
    for (std::size_t j = 0; j < temperatures_c.size(); ++j) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.lambda_a_nm.reset();
        point_cfg.temperature_c = temperatures_c[j];

        ExperimentConfig sample_cfg = point_cfg;
        sample_cfg.master_seed =
            derive_seed(cfg.master_seed, j, StreamRole::scan_sample);
        ExperimentConfig system_cfg = point_cfg;
        system_cfg.sample = no_sample;
        system_cfg.master_seed =
            derive_seed(cfg.master_seed, j, StreamRole::scan_system);

        SpectrumPoint point;
        const WavelengthPair pair = resolve_wavelengths(point_cfg);
        point.lambda_nm =
            cfg.sample_arm == Arm::b ? pair.lambda_b_nm : pair.lambda_a_nm;
        point.stats = run_ensemble(sample_cfg, workers);
        point.calibration = run_ensemble(system_cfg, workers);
        point.alpha2 =
            extract_sample_loss(point.stats.mean, point.calibration.mean);
        // First-order propagation through 1 - (1-t)/(1-s).
        const double inv_trans = 1.0 / (1.0 - point.calibration.mean);
        const double d_total = point.stats.stderr_of_mean * inv_trans;
        const double d_system = (1.0 - point.stats.mean) * inv_trans * inv_trans *
                                point.calibration.stderr_of_mean;
        point.alpha2_stderr = std::hypot(d_total, d_system);
        spectrum.push_back(std::move(point));
    }
    std::stable_sort(spectrum.begin(), spectrum.end(),
                     [](const SpectrumPoint& lhs, const SpectrumPoint& rhs) {
                         return lhs.lambda_nm < rhs.lambda_nm;
                     });
    return spectrum;
}

void export_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "trial,n_a,n_b,n_ab\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out << i << ',' << records[i].n_a << ',' << records[i].n_b << ','
            << records[i].n_ab << '\n';
    }
}

}  // namespace pairspec
