#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "gascatter/analysis.hpp"
#include "gascatter/config.hpp"
#include "gascatter/csv.hpp"

namespace gascatter {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, const std::string& where)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError(where + ": '" + std::string(text) + "' is not a number");
    }
    return v;
}

enum class Unit { Plain, Pi };

struct KeySpec {
    Unit unit;
    bool physical;  // belongs to the physical block (false: phenom)
};

const std::map<std::string, KeySpec, std::less<>>& system_keys()
{
    static const std::map<std::string, KeySpec, std::less<>> keys{
        {"omega_e", {Unit::Plain, true}},     {"omega_f", {Unit::Plain, true}},
        {"omega_d", {Unit::Plain, true}},     {"Omega", {Unit::Plain, true}},
        {"J1", {Unit::Plain, true}},          {"J2", {Unit::Plain, true}},
        {"phi_1", {Unit::Pi, true}},          {"phi_2", {Unit::Pi, true}},
        {"d", {Unit::Plain, true}},           {"v", {Unit::Plain, true}},
        {"Gamma", {Unit::Plain, false}},      {"theta", {Unit::Pi, false}},
        {"phi_plus", {Unit::Pi, false}},      {"phi_minus", {Unit::Pi, false}},
        {"phi_J", {Unit::Pi, false}},         {"tau_gamma", {Unit::Plain, false}},
        {"coupling_ratio", {Unit::Plain, false}},
    };
    return keys;
}

double* physical_slot(PhysicalConfig& p, std::string_view key)
{
    if (key == "omega_e") return &p.omega_e;
    if (key == "omega_f") return &p.omega_f;
    if (key == "omega_d") return &p.omega_d;
    if (key == "Omega") return &p.rabi;
    if (key == "J1") return &p.j1_mag;
    if (key == "J2") return &p.j2_mag;
    if (key == "phi_1") return &p.j1_phase;
    if (key == "phi_2") return &p.j2_phase;
    if (key == "d") return &p.separation;
    if (key == "v") return &p.velocity;
    return nullptr;
}

double* phenom_slot(PhenomConfig& p, std::string_view key)
{
    if (key == "Gamma") return &p.gamma_total;
    if (key == "theta") return &p.theta;
    if (key == "phi_plus") return &p.phi_plus;
    if (key == "phi_minus") return &p.phi_minus;
    if (key == "phi_J") return &p.phi_j;
    if (key == "tau_gamma") return &p.tau_gamma;
    if (key == "coupling_ratio") return &p.coupling_ratio;
    return nullptr;
}

void line(std::ostringstream& os, std::string_view key, double value)
{
    os << key << " = " << format_double(value) << '\n';
}

}  // namespace

Regime regime_from_string(std::string_view s)
{
    if (s == "exact") return Regime::Exact;
    if (s == "markov" || s == "markovian") return Regime::Markovian;
    throw ConfigError("unknown regime '" + std::string(s) + "' (expected exact or markov)");
}

void SystemConfig::validate() const
{
    if (mode == ConfigMode::Physical) {
        physical.validate();
    } else {
        phenom.validate();
    }
    if (grid.points && *grid.points == 0) throw ConfigError("points must be >= 1");
    if (grid.delta_min && !std::isfinite(*grid.delta_min)) throw ConfigError("delta_min must be finite");
    if (grid.delta_max && !std::isfinite(*grid.delta_max)) throw ConfigError("delta_max must be finite");
}

std::pair<DressedFrame, RatePhaseSet> SystemConfig::resolve() const
{
    validate();
    if (mode == ConfigMode::Phenom) return phenom_to_rateset(phenom);
    DressedFrame f = build_dressed_frame(physical);
    RatePhaseSet rp = build_rate_phase_set(f, physical);
    return {f, rp};
}

std::vector<std::string> SystemConfig::warnings() const
{
    std::vector<std::string> out;
    if (mode == ConfigMode::Physical) {
        out = physical.warnings();
        if (physical.rabi == 0.0 && physical.omega_f == physical.omega_d) {
            out.emplace_back("Omega = 0 and omega_f = omega_d: theta is undefined and set to 0");
        }
    }
    return out;
}

std::vector<double> SystemConfig::detuning_grid() const
{
    const auto [frame, rp] = resolve();
    const auto defaults = default_grid(rp, regime);
    const double lo = grid.delta_min.value_or(defaults.front());
    const double hi = grid.delta_max.value_or(defaults.back());
    const std::size_t n = grid.points.value_or(defaults.size());
    if (n > 1 && !(hi > lo)) throw ConfigError("delta_max must exceed delta_min");
    return uniform_grid(lo, hi, n);
}

std::string SystemConfig::canonical() const
{
    std::ostringstream os;
    if (mode == ConfigMode::Physical) {
        os << "mode = physical\n";
        line(os, "omega_e", physical.omega_e);
        line(os, "omega_f", physical.omega_f);
        line(os, "omega_d", physical.omega_d);
        line(os, "Omega", physical.rabi);
        line(os, "J1", physical.j1_mag);
        line(os, "J2", physical.j2_mag);
        line(os, "phi_1", physical.j1_phase / kPi);
        line(os, "phi_2", physical.j2_phase / kPi);
        line(os, "d", physical.separation);
        line(os, "v", physical.velocity);
    } else {
        os << "mode = phenom\n";
        line(os, "Gamma", phenom.gamma_total);
        line(os, "theta", phenom.theta / kPi);
        line(os, "phi_plus", phenom.phi_plus / kPi);
        line(os, "phi_minus", phenom.phi_minus / kPi);
        line(os, "phi_J", phenom.phi_j / kPi);
        line(os, "tau_gamma", phenom.tau_gamma);
        line(os, "coupling_ratio", phenom.coupling_ratio);
    }
    os << "regime = " << (regime == Regime::Exact ? "exact" : "markov") << '\n';
    const auto g = detuning_grid();
    line(os, "delta_min", g.front());
    line(os, "delta_max", g.back());
    os << "points = " << g.size() << '\n';
    return os.str();
}

SystemConfig parse_config(std::istream& in, std::string_view source)
{
    SystemConfig cfg;
    // The default phenom block describes the symmetric drive used throughout.
    cfg.phenom.theta = kPi / 2.0;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::map<std::string, double, std::less<>> values;
    std::optional<ConfigMode> mode;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = std::string(source) + ":" + std::to_string(lineno);
        std::string_view text = raw;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key(trim(text.substr(0, eq)));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + ": expected 'key = value'");
        if (const auto it = seen.find(key); it != seen.end()) {
            throw ConfigError(where + ": duplicate key '" + key + "' (first on line "
                              + std::to_string(it->second) + ")");
        }
        seen.emplace(key, lineno);

        if (key == "mode") {
            if (value == "physical") {
                mode = ConfigMode::Physical;
            } else if (value == "phenom") {
                mode = ConfigMode::Phenom;
            } else {
                throw ConfigError(where + ": mode must be physical or phenom");
            }
        } else if (key == "regime") {
            try {
                cfg.regime = regime_from_string(value);
            } catch (const ConfigError& e) {
                throw ConfigError(where + ": " + e.what());
            }
        } else if (key == "delta_min") {
            cfg.grid.delta_min = parse_number(value, where);
        } else if (key == "delta_max") {
            cfg.grid.delta_max = parse_number(value, where);
        } else if (key == "points") {
            const double p = parse_number(value, where);
            if (!(p >= 1.0) || p != std::floor(p)) throw ConfigError(where + ": points must be a positive integer");
            cfg.grid.points = static_cast<std::size_t>(p);
        } else if (system_keys().contains(key)) {
            values[key] = parse_number(value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }

    cfg.mode = mode.value_or(ConfigMode::Phenom);
    const bool physical = cfg.mode == ConfigMode::Physical;
    for (const auto& [key, v] : values) {
        const KeySpec spec = system_keys().find(key)->second;
        if (spec.physical != physical) {
            throw ConfigError(std::string(source) + ":" + std::to_string(seen[key]) + ": key '" + key
                              + "' does not belong to mode " + (physical ? "physical" : "phenom"));
        }
        const double scaled = spec.unit == Unit::Pi ? v * kPi : v;
        *(physical ? physical_slot(cfg.physical, key) : phenom_slot(cfg.phenom, key)) = scaled;
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

}  // namespace gascatter
