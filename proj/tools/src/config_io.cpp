#include "config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "pairspec/errors.hpp"
#include "pairspec/sample.hpp"

namespace pairspec::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in section '" + section +
                              "'");
        }
    }
}

double get_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_number()) {
        throw ConfigError(std::string("'") + key + "' must be a number");
    }
    return obj[key].get<double>();
}

std::uint64_t get_count(const json& obj, const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj[key].is_number_unsigned()) {
        throw ConfigError(std::string("'") + key +
                          "' must be a non-negative integer");
    }
    return obj[key].get<std::uint64_t>();
}

std::filesystem::path resolve_relative(const std::filesystem::path& base_dir,
                                       const std::string& ref) {
    const std::filesystem::path p(ref);
    return p.is_absolute() ? p : base_dir / p;
}

SourceConfig parse_source(const json& section,
                          const std::filesystem::path& base_dir) {
    check_keys(section,
               {"pump_wavelength_nm", "pump_linewidth_fwhm_nm", "pair_rate_hz",
                "epsilon_gain", "eta_a", "eta_b", "lineshape_a_fwhm_nm",
                "lineshape_b_fwhm_nm", "calibration", "calibration_file"},
               "source");
    SourceConfig defaults = default_source_config();
    SourceConfig cfg;
    cfg.pump_wavelength_nm =
        get_number(section, "pump_wavelength_nm", defaults.pump_wavelength_nm);
    cfg.pump_linewidth_fwhm_nm = get_number(section, "pump_linewidth_fwhm_nm",
                                            defaults.pump_linewidth_fwhm_nm);
    cfg.pair_rate_hz = get_number(section, "pair_rate_hz", defaults.pair_rate_hz);
    cfg.epsilon_gain = get_number(section, "epsilon_gain", defaults.epsilon_gain);
    cfg.eta_a = get_number(section, "eta_a", defaults.eta_a);
    cfg.eta_b = get_number(section, "eta_b", defaults.eta_b);
    cfg.lineshape_a_fwhm_nm =
        get_number(section, "lineshape_a_fwhm_nm", defaults.lineshape_a_fwhm_nm);
    cfg.lineshape_b_fwhm_nm =
        get_number(section, "lineshape_b_fwhm_nm", defaults.lineshape_b_fwhm_nm);

    if (section.contains("calibration") && section.contains("calibration_file")) {
        throw ConfigError("give either 'calibration' or 'calibration_file', not both");
    }
    if (section.contains("calibration_file")) {
        cfg.calibration = load_calibration(
            resolve_relative(base_dir, section["calibration_file"].get<std::string>()));
    } else if (section.contains("calibration")) {
        for (const auto& row : section["calibration"]) {
            if (!row.is_array() || row.size() != 2) {
                throw ConfigError("calibration rows must be [temperature_c, lambda_a_nm]");
            }
            cfg.calibration.push_back(
                {row[0].get<double>(), row[1].get<double>()});
        }
    } else {
        cfg.calibration = defaults.calibration;
    }
    return cfg;
}

SpectralProfile parse_sample(const json& section,
                             const std::filesystem::path& base_dir) {
    if (!section.contains("kind")) {
        throw ConfigError("sample section needs a 'kind'");
    }
    const std::string kind = section["kind"].get<std::string>();
    if (kind == "flat") {
        check_keys(section, {"kind", "alpha", "slope_per_nm", "ref_lambda_nm"},
                   "sample");
        return SpectralProfile::flat(get_number(section, "alpha", 0.0),
                                     get_number(section, "slope_per_nm", 0.0),
                                     get_number(section, "ref_lambda_nm", 0.0));
    }
    if (kind == "gaussian_bandpass") {
        check_keys(section, {"kind", "center_nm", "fwhm_nm", "peak_transmission"},
                   "sample");
        if (!section.contains("center_nm") || !section.contains("fwhm_nm")) {
            throw ConfigError("gaussian_bandpass sample needs center_nm and fwhm_nm");
        }
        return SpectralProfile::gaussian_bandpass(
            section["center_nm"].get<double>(), section["fwhm_nm"].get<double>(),
            get_number(section, "peak_transmission", 1.0));
    }
    if (kind == "tabulated") {
        check_keys(section, {"kind", "file", "rows"}, "sample");
        if (section.contains("file") == section.contains("rows")) {
            throw ConfigError("tabulated sample needs exactly one of 'file' or 'rows'");
        }
        if (section.contains("file")) {
            return load_tabulated(
                resolve_relative(base_dir, section["file"].get<std::string>()));
        }
        std::vector<ProfileRow> rows;
        for (const auto& row : section["rows"]) {
            if (!row.is_array() || row.size() != 2) {
                throw ConfigError("tabulated rows must be [lambda_nm, alpha]");
            }
            rows.push_back({row[0].get<double>(), row[1].get<double>()});
        }
        return SpectralProfile::tabulated(std::move(rows));
    }
    throw ConfigError("unknown sample kind '" + kind + "'");
}

void parse_experiment(const json& section, ExperimentConfig& cfg) {
    check_keys(section,
               {"sample_arm", "integration_time_s", "trials", "master_seed",
                "temperature_c", "lambda_a_nm", "coincidence_window_s"},
               "experiment");
    if (section.contains("sample_arm")) {
        const std::string arm = section["sample_arm"].get<std::string>();
        if (arm == "a") {
            cfg.sample_arm = Arm::a;
        } else if (arm == "b") {
            cfg.sample_arm = Arm::b;
        } else {
            throw ConfigError("sample_arm must be 'a' or 'b'");
        }
    }
    cfg.integration_time_s =
        get_number(section, "integration_time_s", cfg.integration_time_s);
    cfg.trials = get_count(section, "trials", cfg.trials);
    cfg.master_seed = get_count(section, "master_seed", cfg.master_seed);
    if (section.contains("temperature_c")) {
        cfg.temperature_c = section["temperature_c"].get<double>();
    }
    if (section.contains("lambda_a_nm")) {
        cfg.lambda_a_nm = section["lambda_a_nm"].get<double>();
    }
    if (section.contains("coincidence_window_s")) {
        cfg.accidentals =
            AccidentalsConfig{section["coincidence_window_s"].get<double>()};
    }
}

ScanSettings parse_scan(const json& section) {
    check_keys(section, {"temperatures_c", "batch_size"}, "scan");
    ScanSettings settings;
    if (section.contains("temperatures_c")) {
        for (const auto& t : section["temperatures_c"]) {
            settings.temperatures_c.push_back(t.get<double>());
        }
    }
    settings.batch_size = get_count(section, "batch_size", settings.batch_size);
    return settings;
}

ResolveSettings parse_resolve(const json& section) {
    check_keys(section,
               {"fine_start_ms", "fine_stop_ms", "fine_step_ms", "coarse_stop_ms",
                "coarse_step_ms", "estimates_per_increment", "ks", "combination"},
               "resolve");
    ResolveSettings settings;
    settings.fine_start_ms =
        get_number(section, "fine_start_ms", settings.fine_start_ms);
    settings.fine_stop_ms =
        get_number(section, "fine_stop_ms", settings.fine_stop_ms);
    settings.fine_step_ms =
        get_number(section, "fine_step_ms", settings.fine_step_ms);
    settings.coarse_stop_ms =
        get_number(section, "coarse_stop_ms", settings.coarse_stop_ms);
    settings.coarse_step_ms =
        get_number(section, "coarse_step_ms", settings.coarse_step_ms);
    settings.estimates_per_increment = get_count(
        section, "estimates_per_increment", settings.estimates_per_increment);
    if (section.contains("ks")) {
        settings.ks.clear();
        for (const auto& k : section["ks"]) {
            settings.ks.push_back(k.get<int>());
        }
    }
    if (section.contains("combination")) {
        const std::string rule = section["combination"].get<std::string>();
        if (rule == "max") {
            settings.combination = ErrorCombination::max_fit;
        } else if (rule == "sum") {
            settings.combination = ErrorCombination::sum_fit;
        } else if (rule == "pooled") {
            settings.combination = ErrorCombination::pooled_fit;
        } else {
            throw ConfigError("combination must be max, sum or pooled");
        }
    }
    return settings;
}

json dump_sample(const SpectralProfile& profile) {
    return profile.visit([](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianBandpassProfile>) {
            return {{"kind", "gaussian_bandpass"},
                    {"center_nm", p.center_nm},
                    {"fwhm_nm", p.fwhm_nm},
                    {"peak_transmission", p.peak_transmission}};
        } else if constexpr (std::is_same_v<T, FlatProfile>) {
            return {{"kind", "flat"},
                    {"alpha", p.alpha},
                    {"slope_per_nm", p.slope_per_nm},
                    {"ref_lambda_nm", p.ref_lambda_nm}};
        } else {
            json rows = json::array();
            for (const auto& row : p.rows) {
                rows.push_back({row.lambda_nm, row.alpha});
            }
            return {{"kind", "tabulated"}, {"rows", rows}};
        }
    });
}

json dump_resolved(const LoadedConfig& cfg) {
    json source = {
        {"pump_wavelength_nm", cfg.experiment.source.pump_wavelength_nm},
        {"pump_linewidth_fwhm_nm", cfg.experiment.source.pump_linewidth_fwhm_nm},
        {"pair_rate_hz", cfg.experiment.source.pair_rate_hz},
        {"epsilon_gain", cfg.experiment.source.epsilon_gain},
        {"eta_a", cfg.experiment.source.eta_a},
        {"eta_b", cfg.experiment.source.eta_b},
        {"lineshape_a_fwhm_nm", cfg.experiment.source.lineshape_a_fwhm_nm},
        {"lineshape_b_fwhm_nm", cfg.experiment.source.lineshape_b_fwhm_nm},
    };
    json calibration = json::array();
    for (const auto& point : cfg.experiment.source.calibration) {
        calibration.push_back({point.temperature_c, point.lambda_a_nm});
    }
    source["calibration"] = calibration;

    json experiment = {
        {"sample_arm", arm_name(cfg.experiment.sample_arm)},
        {"integration_time_s", cfg.experiment.integration_time_s},
        {"trials", cfg.experiment.trials},
        {"master_seed", cfg.experiment.master_seed},
    };
    if (cfg.experiment.temperature_c) {
        experiment["temperature_c"] = *cfg.experiment.temperature_c;
    }
    if (cfg.experiment.lambda_a_nm) {
        experiment["lambda_a_nm"] = *cfg.experiment.lambda_a_nm;
    }
    if (cfg.experiment.accidentals) {
        experiment["coincidence_window_s"] =
            cfg.experiment.accidentals->coincidence_window_s;
    }

    json scan = {{"temperatures_c", cfg.scan.temperatures_c},
                 {"batch_size", cfg.scan.batch_size}};

    const char* rule = "max";
    if (cfg.resolve.combination == ErrorCombination::sum_fit) {
        rule = "sum";
    } else if (cfg.resolve.combination == ErrorCombination::pooled_fit) {
        rule = "pooled";
    }
    json resolve = {{"fine_start_ms", cfg.resolve.fine_start_ms},
                    {"fine_stop_ms", cfg.resolve.fine_stop_ms},
                    {"fine_step_ms", cfg.resolve.fine_step_ms},
                    {"coarse_stop_ms", cfg.resolve.coarse_stop_ms},
                    {"coarse_step_ms", cfg.resolve.coarse_step_ms},
                    {"estimates_per_increment", cfg.resolve.estimates_per_increment},
                    {"ks", cfg.resolve.ks},
                    {"combination", rule}};

    return {{"source", source},
            {"sample", dump_sample(cfg.experiment.sample)},
            {"experiment", experiment},
            {"scan", scan},
            {"resolve", resolve}};
}

}  // namespace

std::vector<double> ResolveSettings::increments_ms() const {
    if (!(fine_step_ms > 0.0) || !(coarse_step_ms > 0.0) ||
        !(fine_start_ms > 0.0)) {
        throw ConfigError("resolve sweep steps must be positive");
    }
    if (fine_stop_ms < fine_start_ms || coarse_stop_ms < fine_stop_ms) {
        throw ConfigError("resolve sweep stops must be ordered");
    }
    std::vector<double> increments;
    const auto n_fine = static_cast<long>(
        std::floor((fine_stop_ms - fine_start_ms) / fine_step_ms + 1e-9));
    for (long i = 0; i <= n_fine; ++i) {
        increments.push_back(fine_start_ms + static_cast<double>(i) * fine_step_ms);
    }
    const double coarse_start = increments.back() + coarse_step_ms;
    const auto n_coarse = static_cast<long>(
        std::floor((coarse_stop_ms - coarse_start) / coarse_step_ms + 1e-9));
    for (long i = 0; i <= n_coarse; ++i) {
        increments.push_back(coarse_start + static_cast<double>(i) * coarse_step_ms);
    }
    return increments;
}

LoadedConfig load_config(const std::filesystem::path& path,
                         std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError(path.string() + ": " + err.what());
    }
    check_keys(doc, {"source", "sample", "experiment", "scan", "resolve"},
               "(top level)");

    const auto base_dir = path.has_parent_path()
                              ? path.parent_path()
                              : std::filesystem::path(".");
    LoadedConfig cfg;
    cfg.experiment.source = doc.contains("source")
                                ? parse_source(doc["source"], base_dir)
                                : default_source_config();
    if (doc.contains("sample")) {
        cfg.experiment.sample = parse_sample(doc["sample"], base_dir);
    }
    if (doc.contains("experiment")) {
        parse_experiment(doc["experiment"], cfg.experiment);
    }
    if (doc.contains("scan")) {
        cfg.scan = parse_scan(doc["scan"]);
    }
    if (doc.contains("resolve")) {
        cfg.resolve = parse_resolve(doc["resolve"]);
    }
    if (seed_override) {
        cfg.experiment.master_seed = *seed_override;
    }
    cfg.resolved = dump_resolved(cfg);
    cfg.digest = fnv1a64_hex(cfg.resolved.dump());
    return cfg;
}

std::string fnv1a64_hex(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    char buffer[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buffer[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    buffer[16] = '\0';
    return std::string(buffer, 16);
}

}  // namespace pairspec::cli
