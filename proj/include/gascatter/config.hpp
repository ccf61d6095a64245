// Run configuration: the system parameters plus regime and detuning grid.
//
// File format: `key = value` per line, `#` starts a comment. A `mode` key picks
// the block (`physical` or `phenom`, default phenom). Angles are given in units
// of pi, everything else in plain units.
//
//   physical: omega_e omega_f omega_d Omega J1 J2 phi_1 phi_2 d v
//   phenom:   Gamma theta phi_plus phi_minus phi_J tau_gamma coupling_ratio
//   either:   regime (exact | markov) delta_min delta_max points
//
// delta_min / delta_max are in units of Gamma.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gascatter/model.hpp"
#include "gascatter/scattering.hpp"

namespace gascatter {

enum class ConfigMode { Physical, Phenom };

struct GridSpec {
    std::optional<double> delta_min;
    std::optional<double> delta_max;
    std::optional<std::size_t> points;
};

struct SystemConfig {
    ConfigMode mode{ConfigMode::Phenom};
    PhysicalConfig physical;
    PhenomConfig phenom;
    Regime regime{Regime::Markovian};
    GridSpec grid;

    void validate() const;
    [[nodiscard]] std::pair<DressedFrame, RatePhaseSet> resolve() const;
    [[nodiscard]] std::vector<std::string> warnings() const;
    /// Detuning grid in units of Gamma: the explicit spec, with gaps filled from the default grid.
    [[nodiscard]] std::vector<double> detuning_grid() const;
    /// Every parameter after defaulting, as `key = value` lines in file syntax.
    [[nodiscard]] std::string canonical() const;
};

[[nodiscard]] Regime regime_from_string(std::string_view s);

/// Throws ConfigError with a line number on malformed input.
[[nodiscard]] SystemConfig parse_config(std::istream& in, std::string_view source = "<config>");
[[nodiscard]] SystemConfig load_config(const std::string& path);

// --- figure presets ----------------------------------------------------------------

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
[[nodiscard]] SystemConfig figure_preset(std::string_view name);

}  // namespace gascatter
