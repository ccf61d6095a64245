#include <cmath>

#include "gascatter/config.hpp"

namespace gascatter {

namespace {

// Phenomenological preset with theta = pi/2, equal legs and Gamma = 1.
// Angles in units of pi.
SystemConfig phenom(double phi_j, double phi_plus, double phi_minus, double tau_gamma, Regime regime)
{
    SystemConfig c;
    c.mode = ConfigMode::Phenom;
    c.regime = regime;
    c.phenom.gamma_total = 1.0;
    c.phenom.theta = kPi / 2.0;
    c.phenom.phi_j = phi_j * kPi;
    c.phenom.phi_plus = phi_plus * kPi;
    c.phenom.phi_minus = phi_minus * kPi;
    c.phenom.tau_gamma = tau_gamma;
    c.phenom.coupling_ratio = 1.0;
    return c;
}

// Resonant drive (theta = pi/2) with Gamma = 1, omega_e = 600, Omega = 1.5 and
// phi_J = pi; the leg separation sets tau Gamma.
SystemConfig retarded(double separation)
{
    SystemConfig c;
    c.mode = ConfigMode::Physical;
    c.regime = Regime::Exact;
    auto& p = c.physical;
    p.omega_e = 600.0;
    p.omega_f = 0.0;
    p.omega_d = 0.0;
    p.rabi = 1.5;
    p.j1_mag = 1.0 / std::sqrt(2.0 * kPi);
    p.j2_mag = p.j1_mag;
    p.j1_phase = kPi;
    p.j2_phase = 0.0;
    p.separation = separation;
    p.velocity = 1.0;
    return c;
}

struct Preset {
    const char* name;
    SystemConfig (*make)();
};

constexpr double kHalfPi = 0.5;
constexpr Regime M = Regime::Markovian;
constexpr Regime E = Regime::Exact;

const Preset kPresets[] = {
    {"fig1a", [] { return phenom(1.0, 0.0, 0.75, 0.0, M); }},
    {"fig1b", [] { return phenom(1.0, 0.0, 0.75, 0.0, M); }},
    {"fig1c", [] { return phenom(1.0, 0.0, 0.75, 0.0, M); }},
    {"fig1d", [] { return phenom(0.75, 0.0, 1.0, 0.0, M); }},
    {"fig1e", [] { return phenom(0.75, 0.0, 1.0, 0.0, M); }},
    {"fig1f", [] { return phenom(0.75, 0.0, 1.0, 0.0, M); }},
    {"fig1g", [] { return phenom(1.0, 1.0 / 3.0, 0.0, 0.0, M); }},
    {"fig1h", [] { return phenom(1.0, 1.0 / 3.0, 0.0, 0.0, M); }},
    {"fig1i", [] { return phenom(1.0, 1.0 / 3.0, 0.0, 0.0, M); }},
    {"fig3a", [] { return phenom(0.1, 0.9, 1.1, 0.0, M); }},
    {"fig3b", [] { return phenom(0.3, 0.7, 1.3, 0.0, M); }},
    {"fig3c", [] { return phenom(0.5, 0.0, 1.5, 0.0, M); }},
    {"fig4a", [] { return retarded(1.0025 * kPi); }},
    {"fig4b", [] { return retarded(0.9975 * kPi); }},
    {"fig4c", [] { return phenom(1.0, kHalfPi, 0.0, kPi, E); }},
    {"fig4d", [] { return phenom(1.0, 0.0, kHalfPi, kPi, E); }},
    {"fig5a", [] { return phenom(kHalfPi, 0.0, 0.0, kPi, E); }},
    {"fig5b", [] { return phenom(kHalfPi, 0.0, kHalfPi, kPi, E); }},
    {"fig5c", [] { return phenom(0.3, 1.0, 0.0, kPi, E); }},
    {"fig5d", [] { return phenom(kHalfPi, 1.5, kHalfPi, kPi, E); }},
};

}  // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

SystemConfig figure_preset(std::string_view name)
{
    for (const auto& p : kPresets) {
        if (name == p.name) return p.make();
    }
    throw ConfigError("unknown figure preset '" + std::string(name) + "'");
}

}  // namespace gascatter
