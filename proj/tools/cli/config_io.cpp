#include "config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <variant>

#include "franson/csv.hpp"
#include "franson/errors.hpp"

namespace franson::cli {

namespace {

using Target = std::variant<double*, bool*, std::uint64_t*, std::optional<double>*,
                            link::WindowPolicy::Mode*>;

struct Field {
    const char* section;
    const char* key;
    Target target;
};

std::vector<Field> fields(ScenarioConfig& c) {
    return {
        {"source", "brightness_cps", &c.source.brightness_cps},
        {"source", "lambda_s_nm", &c.source.lambda_s_nm},
        {"source", "lambda_i_nm", &c.source.lambda_i_nm},
        {"source", "photon_coherence_ps", &c.source.photon_coherence_ps},
        {"source", "pump_coherence_ps", &c.source.pump_coherence_ps},

        {"signal_leg", "length_km", &c.signal_leg.length_km},
        {"signal_leg", "alpha_q_db_per_km", &c.signal_leg.alpha_q_db_per_km},
        {"signal_leg", "alpha_c_db_per_km", &c.signal_leg.alpha_c_db_per_km},
        {"signal_leg", "extra_loss_db", &c.signal_leg.extra_loss_db},
        {"signal_leg", "group_delay_ps_per_km", &c.signal_leg.group_delay_ps_per_km},
        {"signal_leg", "dispersion_jitter_ps", &c.signal_leg.dispersion_jitter_ps},

        {"idler_leg", "length_km", &c.idler_leg.length_km},
        {"idler_leg", "alpha_q_db_per_km", &c.idler_leg.alpha_q_db_per_km},
        {"idler_leg", "alpha_c_db_per_km", &c.idler_leg.alpha_c_db_per_km},
        {"idler_leg", "extra_loss_db", &c.idler_leg.extra_loss_db},
        {"idler_leg", "group_delay_ps_per_km", &c.idler_leg.group_delay_ps_per_km},
        {"idler_leg", "dispersion_jitter_ps", &c.idler_leg.dispersion_jitter_ps},

        {"signal_detector", "jitter_sigma_ps", &c.signal_detector.jitter_sigma_ps},
        {"signal_detector", "efficiency", &c.signal_detector.efficiency},
        {"signal_detector", "dark_count_cps", &c.signal_detector.dark_count_cps},
        {"signal_detector", "dead_time_ps", &c.signal_detector.dead_time_ps},

        {"idler_detector", "jitter_sigma_ps", &c.idler_detector.jitter_sigma_ps},
        {"idler_detector", "efficiency", &c.idler_detector.efficiency},
        {"idler_detector", "dark_count_cps", &c.idler_detector.dark_count_cps},
        {"idler_detector", "dead_time_ps", &c.idler_detector.dead_time_ps},

        {"sync", "sigma_sync_ps", &c.sync.sigma_sync_ps},
        {"sync", "rof_excess_jitter_ps", &c.sync.rof_excess_jitter_ps},

        {"sprs", "beta_per_km_hz", &c.sprs.beta_per_km_hz},
        {"sprs", "delta_lambda_nm", &c.sprs.delta_lambda_nm},
        {"sprs", "p_in_photons_per_s", &c.sprs.p_in_photons_per_s},
        {"sprs", "normalization", &c.sprs.normalization},

        {"franson", "path_imbalance_ps", &c.franson.path_imbalance_ps},
        {"franson", "intrinsic_visibility", &c.franson.intrinsic_visibility},

        {"window", "mode", &c.window.mode},
        {"window", "tau_fixed_ps", &c.window.tau_fixed_ps},
        {"window", "capture_fraction", &c.window.capture_fraction},

        {"environment", "duration_s", &c.environment.duration_s},
        {"environment", "sample_interval_s", &c.environment.sample_interval_s},
        {"environment", "amplitude_k", &c.environment.amplitude_k},
        {"environment", "period_s", &c.environment.period_s},
        {"environment", "phase_rad", &c.environment.phase_rad},
        {"environment", "walk_step_k", &c.environment.walk_step_k},

        {"clock", "coeff_ps_per_km_k", &c.clock.coeff_ps_per_km_k},
        {"clock", "mismatch_ps_per_km_k", &c.clock.mismatch_ps_per_km_k},
        {"clock", "target_std_ps", &c.clock.target_std_ps},
        {"clock", "measurement_jitter_ps", &c.clock.measurement_jitter_ps},
        {"clock", "classical_wavelength_nm", &c.clock.classical_wavelength_nm},

        {"scenario", "rof_enabled", &c.rof_enabled},
        {"scenario", "signal_background_cps", &c.signal_background_cps},
        {"scenario", "duration_s", &c.duration_s},
        {"scenario", "seed", &c.seed},
        {"scenario", "coincidence_window_ps", &c.coincidence_window_ps},
        {"scenario", "correlation_span_ps", &c.correlation_span_ps},
        {"scenario", "bin_width_ps", &c.bin_width_ps},
    };
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("invalid number for " + key + ": '" + text + "'");
    }
    return v;
}

struct Assign {
    const std::string& key;
    const std::string& text;

    void operator()(double* p) const { *p = parse_double(key, text); }
    void operator()(bool* p) const {
        if (text == "true" || text == "1" || text == "on") {
            *p = true;
        } else if (text == "false" || text == "0" || text == "off") {
            *p = false;
        } else {
            throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
        }
    }
    void operator()(std::uint64_t* p) const {
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, *p);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError("invalid unsigned integer for " + key + ": '" + text + "'");
        }
    }
    void operator()(std::optional<double>* p) const {
        if (text.empty() || text == "auto") {
            p->reset();
        } else {
            *p = parse_double(key, text);
        }
    }
    void operator()(link::WindowPolicy::Mode* p) const {
        if (text == "capture") {
            *p = link::WindowPolicy::Mode::CaptureConstrained;
        } else if (text == "fixed") {
            *p = link::WindowPolicy::Mode::Fixed;
        } else {
            throw ConfigError("invalid window mode for " + key + ": '" + text + "' (capture|fixed)");
        }
    }
};

struct Render {
    std::string operator()(const double* p) const { return csv::format(*p); }
    std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
    std::string operator()(const std::uint64_t* p) const { return std::to_string(*p); }
    std::string operator()(const std::optional<double>* p) const {
        return *p ? csv::format(**p) : std::string("auto");
    }
    std::string operator()(const link::WindowPolicy::Mode* p) const {
        return *p == link::WindowPolicy::Mode::Fixed ? "fixed" : "capture";
    }
};

std::string preset_name(const boost::property_tree::ptree& tree) {
    const auto scenario = tree.get_child_optional("scenario");
    if (!scenario) {
        return "desk";
    }
    return trim(scenario->get<std::string>("preset", "desk"));
}

ScenarioConfig from_tree(const boost::property_tree::ptree& tree,
                         const std::vector<std::string>& overrides) {
    ScenarioConfig config = preset(preset_name(tree));
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key outside a section: " + section);
        }
        for (const auto& [key, value] : body) {
            if (section == "scenario" && key == "preset") {
                continue;
            }
            apply_setting(config, section + "." + key, trim(value.data()));
        }
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must look like section.key=value: '" + o + "'");
        }
        apply_setting(config, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
    config.validate();
    return config;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
    if (name == "desk") {
        return ScenarioConfig::desk_defaults();
    }
    if (name == "link_50km") {
        return ScenarioConfig::link_50km(false);
    }
    if (name == "link_50km_rof") {
        return ScenarioConfig::link_50km(true);
    }
    throw ConfigError("unknown preset '" + name + "' (desk|link_50km|link_50km_rof)");
}

void apply_setting(ScenarioConfig& config, const std::string& dotted_key, const std::string& value) {
    for (auto& f : fields(config)) {
        if (dotted_key == std::string(f.section) + "." + f.key) {
            std::visit(Assign{dotted_key, value}, f.target);
            return;
        }
    }
    throw ConfigError("unknown config key: " + dotted_key);
}

ScenarioConfig load_config(std::istream& in, const std::vector<std::string>& overrides) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return from_tree(tree, overrides);
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
    if (path.empty()) {
        return from_tree({}, overrides);
    }
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open config file: " + path.string());
    }
    return load_config(in, overrides);
}

void write_config(std::ostream& out, const ScenarioConfig& config) {
    ScenarioConfig copy = config;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (section != f.section) {
            if (!section.empty()) {
                out << '\n';
            }
            section = f.section;
            out << '[' << section << "]\n";
        }
        out << f.key << " = " << std::visit(Render{}, f.target) << '\n';
    }
}

}  // namespace franson::cli
