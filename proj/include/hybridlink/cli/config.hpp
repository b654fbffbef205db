#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hybridlink/channel/thz.hpp"
#include "hybridlink/error.hpp"
#include "hybridlink/metrics/modulation.hpp"
#include "hybridlink/metrics/system.hpp"

namespace hybridlink::cli {

// Everything a run needs, in the units of the configuration file.
struct ScenarioConfig {
    struct Fso {
        double wavelength_m = 1550e-9;
        double length_m = 200.0;
        double visibility_km = 10.0;
        double cn2 = 1e-12;
        std::string detection = "heterodyne";
        double eta = 1.0;
        double noise_variance = 1.0;
        double aperture_radius_m = 0.20;
        double beamwidth_m = 0.40;
        double jitter_std_m = 0.05;
        std::string snr_scaling = "average_power";
        std::optional<double> turbulence_alpha;
        std::optional<double> turbulence_beta;
    } fso;

    struct Thz {
        double frequency_Hz = 119e9;
        double length_m = 200.0;
        double temperature_K = 298.0;
        double pressure_Pa = 101325.0;
        double relative_humidity_pct = 50.0;
        double tx_gain_dBi = 55.0;
        double rx_gain_dBi = 55.0;
        double alpha = 2.0;
        double mu = 3.0;
        int n_rx = 2;
        double omega = 1.0;
        double noise_variance = 1.0;
        std::optional<double> aperture_radius_m;  // default λ√G_t/(2π)
        double beamwidth_m = 0.50;
        double jitter_std_m = 0.06;
    } thz;

    struct Access {
        double frequency_Hz = 28e9;
        double length_m = 100.0;
        double tx_gain_dBi = 44.0;
        double rx_gain_dBi = 44.0;
        double oxygen_dB_per_km = 15.1;
        double rain_dB_per_km = 0.0;
        double m = 2.0;
        int n_tx = 2;
        double omega = 1.0;
        double noise_variance = 1.0;
    } access;

    struct Switching {
        std::string policy = "hard";
        double threshold_dB = 5.0;      // hard threshold; centre of the soft FSO band
        double epsilon_dB = 1.0;        // soft FSO band half-width
        double thz_threshold_dB = 5.0;  // soft only
        double access_threshold_dB = 5.0;
    } switching;

    struct Simulation {
        double transmit_snr_dB = 30.0;
        double source_power_offset_dB = 0.0;
        std::string modulation = "BPSK";
        std::uint64_t seed = 1;
        std::uint64_t samples = 1'000'000;
        double rho = 0.0;
        std::uint64_t slots = 100'000;
        std::uint64_t seeds = 20;
        int threads = 1;
    } simulation;

    struct Sweep {
        std::string axis = "transmit_snr_dB";
        double start = 0.0;
        double stop = 60.0;
        int steps = 13;
    } sweep;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x)) throw std::invalid_argument("expected a number, got '" + v + "'");
    return x;
}

template <class I>
inline I parse_integer(const std::string& v) {
    I x = 0;
    const char* end = v.data() + v.size();
    auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw std::invalid_argument("expected an integer, got '" + v + "'");
    return x;
}

}  // namespace detail

// One key of the configuration file.
struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

namespace detail {

template <class Part>
inline Field real(const char* sec, const char* key, Part ScenarioConfig::*part, double Part::*m) {
    return {sec, key, [=](const ScenarioConfig& c) { return format_double(c.*part.*m); },
            [=](ScenarioConfig& c, const std::string& v) { c.*part.*m = parse_double(v); }};
}

template <class Part, class I>
inline Field integer(const char* sec, const char* key, Part ScenarioConfig::*part, I Part::*m) {
    return {sec, key, [=](const ScenarioConfig& c) { return std::to_string(c.*part.*m); },
            [=](ScenarioConfig& c, const std::string& v) { c.*part.*m = parse_integer<I>(v); }};
}

template <class Part>
inline Field optional_real(const char* sec, const char* key, Part ScenarioConfig::*part, std::optional<double> Part::*m) {
    return {sec, key,
            [=](const ScenarioConfig& c) { return (c.*part.*m) ? format_double(*(c.*part.*m)) : std::string("auto"); },
            [=](ScenarioConfig& c, const std::string& v) {
                if (v == "auto")
                    (c.*part.*m).reset();
                else
                    c.*part.*m = parse_double(v);
            }};
}

template <class Part>
inline Field choice(const char* sec, const char* key, Part ScenarioConfig::*part, std::string Part::*m,
                    std::vector<std::string> allowed) {
    return {sec, key, [=](const ScenarioConfig& c) { return c.*part.*m; },
            [=](ScenarioConfig& c, const std::string& v) {
                if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                    std::string list;
                    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
                    throw std::invalid_argument("expected one of " + list + ", got '" + v + "'");
                }
                c.*part.*m = v;
            }};
}

}  // namespace detail

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> a{"transmit_snr_dB", "length_m",   "beamwidth_m",
                                            "jitter_std_m",    "epsilon_dB", "n_antennas"};
    return a;
}

inline const std::vector<Field>& fields() {
    using C = ScenarioConfig;
    using namespace detail;
    static const std::vector<Field> f{
        real("fso", "wavelength_m", &C::fso, &C::Fso::wavelength_m),
        real("fso", "length_m", &C::fso, &C::Fso::length_m),
        real("fso", "visibility_km", &C::fso, &C::Fso::visibility_km),
        real("fso", "cn2_m^-2/3", &C::fso, &C::Fso::cn2),
        choice("fso", "detection", &C::fso, &C::Fso::detection, {"heterodyne", "imdd"}),
        real("fso", "eta", &C::fso, &C::Fso::eta),
        real("fso", "noise_variance", &C::fso, &C::Fso::noise_variance),
        real("fso", "aperture_radius_m", &C::fso, &C::Fso::aperture_radius_m),
        real("fso", "beamwidth_m", &C::fso, &C::Fso::beamwidth_m),
        real("fso", "jitter_std_m", &C::fso, &C::Fso::jitter_std_m),
        choice("fso", "snr_scaling", &C::fso, &C::Fso::snr_scaling, {"average_power", "electrical"}),
        optional_real("fso", "turbulence_alpha", &C::fso, &C::Fso::turbulence_alpha),
        optional_real("fso", "turbulence_beta", &C::fso, &C::Fso::turbulence_beta),

        real("thz", "frequency_Hz", &C::thz, &C::Thz::frequency_Hz),
        real("thz", "length_m", &C::thz, &C::Thz::length_m),
        real("thz", "temperature_K", &C::thz, &C::Thz::temperature_K),
        real("thz", "pressure_Pa", &C::thz, &C::Thz::pressure_Pa),
        real("thz", "relative_humidity_pct", &C::thz, &C::Thz::relative_humidity_pct),
        real("thz", "tx_gain_dBi", &C::thz, &C::Thz::tx_gain_dBi),
        real("thz", "rx_gain_dBi", &C::thz, &C::Thz::rx_gain_dBi),
        real("thz", "alpha", &C::thz, &C::Thz::alpha),
        real("thz", "mu", &C::thz, &C::Thz::mu),
        integer("thz", "n_rx", &C::thz, &C::Thz::n_rx),
        real("thz", "omega", &C::thz, &C::Thz::omega),
        real("thz", "noise_variance", &C::thz, &C::Thz::noise_variance),
        optional_real("thz", "aperture_radius_m", &C::thz, &C::Thz::aperture_radius_m),
        real("thz", "beamwidth_m", &C::thz, &C::Thz::beamwidth_m),
        real("thz", "jitter_std_m", &C::thz, &C::Thz::jitter_std_m),

        real("access", "frequency_Hz", &C::access, &C::Access::frequency_Hz),
        real("access", "length_m", &C::access, &C::Access::length_m),
        real("access", "tx_gain_dBi", &C::access, &C::Access::tx_gain_dBi),
        real("access", "rx_gain_dBi", &C::access, &C::Access::rx_gain_dBi),
        real("access", "oxygen_dB_per_km", &C::access, &C::Access::oxygen_dB_per_km),
        real("access", "rain_dB_per_km", &C::access, &C::Access::rain_dB_per_km),
        real("access", "m", &C::access, &C::Access::m),
        integer("access", "n_tx", &C::access, &C::Access::n_tx),
        real("access", "omega", &C::access, &C::Access::omega),
        real("access", "noise_variance", &C::access, &C::Access::noise_variance),

        choice("switching", "policy", &C::switching, &C::Switching::policy, {"hard", "soft"}),
        real("switching", "threshold_dB", &C::switching, &C::Switching::threshold_dB),
        real("switching", "epsilon_dB", &C::switching, &C::Switching::epsilon_dB),
        real("switching", "thz_threshold_dB", &C::switching, &C::Switching::thz_threshold_dB),
        real("switching", "access_threshold_dB", &C::switching, &C::Switching::access_threshold_dB),

        real("simulation", "transmit_snr_dB", &C::simulation, &C::Simulation::transmit_snr_dB),
        real("simulation", "source_power_offset_dB", &C::simulation, &C::Simulation::source_power_offset_dB),
        choice("simulation", "modulation", &C::simulation, &C::Simulation::modulation, {}),
        integer("simulation", "seed", &C::simulation, &C::Simulation::seed),
        integer("simulation", "samples", &C::simulation, &C::Simulation::samples),
        real("simulation", "rho", &C::simulation, &C::Simulation::rho),
        integer("simulation", "slots", &C::simulation, &C::Simulation::slots),
        integer("simulation", "seeds", &C::simulation, &C::Simulation::seeds),
        integer("simulation", "threads", &C::simulation, &C::Simulation::threads),

        choice("sweep", "axis", &C::sweep, &C::Sweep::axis, sweep_axes()),
        real("sweep", "start", &C::sweep, &C::Sweep::start),
        real("sweep", "stop", &C::sweep, &C::Sweep::stop),
        integer("sweep", "steps", &C::sweep, &C::Sweep::steps),
    };
    return f;
}

inline const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

// Sets section.key on c; config_error names the key on failure.
inline void set_value(ScenarioConfig& c, const std::string& section, const std::string& key, const std::string& value,
                      int line = 0) {
    const Field* f = find_field(section, key);
    if (!f) throw config_error("unknown key '" + key + "' in section [" + section + "]", line, key);
    try {
        f->set(c, value);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("bad value for '") + key + "': " + e.what(), line, key);
    }
}

inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig c;
    std::string section;
    std::map<std::string, int> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw config_error("unterminated section header", line);
            section = detail::trim(s.substr(1, s.size() - 2));
            static const std::vector<std::string> known{"fso", "thz", "access", "switching", "simulation", "sweep"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                throw config_error("unknown section [" + section + "]", line, section);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw config_error("expected 'key = value'", line);
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (section.empty()) throw config_error("key '" + key + "' outside any section", line, key);
        const std::string full = section + "." + key;
        if (auto it = seen.find(full); it != seen.end())
            throw config_error("duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")", line, key);
        seen[full] = line;
        set_value(c, section, key, value, line);
    }
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

inline std::string to_ini(const ScenarioConfig& c) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        os << f.key << " = " << f.get(c) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------- building specs

inline Modulation modulation_of(const ScenarioConfig& c) {
    try {
        return Modulation::parse(c.simulation.modulation);
    } catch (const domain_error& e) {
        throw config_error(e.what(), 0, "modulation");
    }
}

inline SwitchPolicy policy_of(const ScenarioConfig& c) {
    const auto& s = c.switching;
    if (s.policy == "hard") return HardPolicy{db_to_linear(s.threshold_dB)};
    return SoftPolicy{db_to_linear(s.threshold_dB + s.epsilon_dB), db_to_linear(s.threshold_dB - s.epsilon_dB),
                      db_to_linear(s.thz_threshold_dB)};
}

inline SystemSpec build_system(const ScenarioConfig& c) {
    SystemSpec s;
    auto& f = s.fso;
    f.wavelength_m = c.fso.wavelength_m;
    f.length_m = c.fso.length_m;
    f.visibility_km = c.fso.visibility_km;
    f.cn2 = c.fso.cn2;
    f.tau = c.fso.detection == "imdd" ? 2 : 1;
    f.eta = c.fso.eta;
    f.noise_variance = c.fso.noise_variance;
    f.pointing = PointingGeometry::make(c.fso.aperture_radius_m, c.fso.beamwidth_m, c.fso.jitter_std_m);
    f.snr_scaling = c.fso.snr_scaling == "electrical" ? SnrScaling::electrical : SnrScaling::average_power;
    f.alpha_override = c.fso.turbulence_alpha;
    f.beta_override = c.fso.turbulence_beta;

    auto& t = s.thz;
    t.env.frequency_Hz = c.thz.frequency_Hz;
    t.env.distance_m = c.thz.length_m;
    t.env.temperature_K = c.thz.temperature_K;
    t.env.pressure_Pa = c.thz.pressure_Pa;
    t.env.relative_humidity_pct = c.thz.relative_humidity_pct;
    t.env.tx_gain_dBi = c.thz.tx_gain_dBi;
    t.env.rx_gain_dBi = c.thz.rx_gain_dBi;
    t.alpha = c.thz.alpha;
    t.mu = c.thz.mu;
    t.n_rx = c.thz.n_rx;
    t.omega = c.thz.omega;
    t.noise_variance = c.thz.noise_variance;
    t.pointing = PointingGeometry::make(c.thz.aperture_radius_m.value_or(thz_default_receiver_radius(t.env)),
                                        c.thz.beamwidth_m, c.thz.jitter_std_m);

    auto& a = s.access;
    a.frequency_Hz = c.access.frequency_Hz;
    a.length_m = c.access.length_m;
    a.tx_gain_dBi = c.access.tx_gain_dBi;
    a.rx_gain_dBi = c.access.rx_gain_dBi;
    a.oxygen_dB_per_km = c.access.oxygen_dB_per_km;
    a.rain_dB_per_km = c.access.rain_dB_per_km;
    a.m = c.access.m;
    a.n_tx = c.access.n_tx;
    a.omega_r = c.access.omega;
    a.noise_variance = c.access.noise_variance;

    s.policy = policy_of(c);
    s.gamma_r_th = db_to_linear(c.switching.access_threshold_dB);
    s.set_snr(c.simulation.transmit_snr_dB + c.simulation.source_power_offset_dB);
    s.transmit_snr_db = c.simulation.transmit_snr_dB;
    return s;
}

inline void apply_axis(ScenarioConfig& c, const std::string& axis, double v) {
    if (axis == "transmit_snr_dB") {
        c.simulation.transmit_snr_dB = v;
    } else if (axis == "length_m") {
        c.fso.length_m = c.thz.length_m = c.access.length_m = v;
    } else if (axis == "beamwidth_m") {
        c.fso.beamwidth_m = c.thz.beamwidth_m = v;
    } else if (axis == "jitter_std_m") {
        c.fso.jitter_std_m = c.thz.jitter_std_m = v;
    } else if (axis == "epsilon_dB") {
        c.switching.epsilon_dB = v;
    } else if (axis == "n_antennas") {
        const double r = std::round(v);
        if (r != v || r < 1.0) throw config_error("n_antennas sweep values must be positive integers", 0, "axis");
        c.thz.n_rx = c.access.n_tx = static_cast<int>(r);
    } else {
        throw config_error("unknown sweep axis '" + axis + "'", 0, "axis");
    }
}

inline std::vector<double> sweep_values(const ScenarioConfig::Sweep& s) {
    if (s.steps < 1) throw config_error("sweep steps must be >= 1", 0, "steps");
    std::vector<double> v;
    for (int i = 0; i < s.steps; ++i)
        v.push_back(s.steps == 1 ? s.start : s.start + (s.stop - s.start) * i / (s.steps - 1));
    return v;
}

}  // namespace hybridlink::cli
