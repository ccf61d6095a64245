#include "gascatter/model.hpp"

#include <cmath>
#include <sstream>

namespace gascatter {

namespace {

bool finite_all(std::initializer_list<double> xs)
{
    for (double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Fills the rate part of a RatePhaseSet from the two per-leg rates.
void fill_rates(RatePhaseSet& rp, double leg1, double leg2, double theta, double phi_j)
{
    const double s2 = std::pow(std::sin(0.5 * theta), 2);
    const double c2 = std::pow(std::cos(0.5 * theta), 2);
    rp.leg_rate_1 = leg1;
    rp.leg_rate_2 = leg2;
    rp.Gamma = leg1 + leg2;
    rp.gamma = 2.0 * std::sqrt(leg1 * leg2) * std::cos(phi_j);
    rp.Gamma_plus = rp.Gamma * s2;
    rp.Gamma_minus = rp.Gamma * c2;
    rp.gamma_plus = rp.gamma * s2;
    rp.gamma_minus = rp.gamma * c2;
    rp.phi_j = phi_j;
}

void fill_channel_couplings(DressedFrame& f, cplx j1, cplx j2)
{
    const double s = f.sin_half();
    const double c = f.cos_half();
    f.j1s = j1 * s;
    f.j2s = j2 * s;
    f.j1c = j1 * c;
    f.j2c = j2 * c;
}

}  // namespace

void PhysicalConfig::validate() const
{
    if (!finite_all({omega_e, omega_f, omega_d, rabi, j1_mag, j1_phase, j2_mag, j2_phase,
                     separation, velocity})) {
        throw ConfigError("physical config: all parameters must be finite");
    }
    if (rabi < 0.0) throw ConfigError("physical config: Omega must be >= 0");
    if (j1_mag < 0.0 || j2_mag < 0.0) {
        throw ConfigError("physical config: coupling magnitudes must be >= 0");
    }
    if (separation < 0.0) throw ConfigError("physical config: d must be >= 0");
    if (velocity <= 0.0) throw ConfigError("physical config: v must be > 0");
}

std::vector<std::string> PhysicalConfig::warnings() const
{
    std::vector<std::string> out;
    const double gamma = kPi / velocity * (j1_mag * j1_mag + j2_mag * j2_mag);
    if (omega_e < 20.0 * gamma) {
        std::ostringstream os;
        os << "omega_e = " << omega_e << " is below 20 Gamma = " << 20.0 * gamma
           << "; the rotating-wave model may not apply";
        out.push_back(os.str());
    }
    return out;
}

void PhenomConfig::validate() const
{
    if (!finite_all({gamma_total, theta, phi_plus, phi_minus, phi_j, tau_gamma, coupling_ratio})) {
        throw ConfigError("phenom config: all parameters must be finite");
    }
    if (gamma_total <= 0.0) throw ConfigError("phenom config: Gamma must be > 0");
    if (theta < 0.0 || theta > kPi) throw ConfigError("phenom config: theta must lie in [0, pi]");
    if (tau_gamma < 0.0) throw ConfigError("phenom config: tau_gamma must be >= 0");
    if (coupling_ratio < 0.0) throw ConfigError("phenom config: coupling_ratio must be >= 0");
}

double DressedFrame::sin_half() const { return std::sin(0.5 * theta); }
double DressedFrame::cos_half() const { return std::cos(0.5 * theta); }

double RatePhaseSet::cross_rate() const { return std::sqrt(leg_rate_1 * leg_rate_2); }

DressedFrame build_dressed_frame(const PhysicalConfig& cfg)
{
    cfg.validate();
    DressedFrame f;
    const double detuning = cfg.omega_f - cfg.omega_d;
    f.degenerate_drive = cfg.rabi == 0.0 && detuning == 0.0;
    // atan2 with a nonnegative first argument lands in [0, pi]; atan2(0, 0) = 0
    // is the undriven continuation.
    f.theta = f.degenerate_drive ? 0.0 : std::atan2(2.0 * cfg.rabi, detuning);
    const double split = std::hypot(detuning, 2.0 * cfg.rabi);
    f.nu_plus = 0.5 * (detuning + split);
    f.nu_minus = 0.5 * (detuning - split);
    f.omega_e = cfg.omega_e;
    fill_channel_couplings(f, std::polar(cfg.j1_mag, cfg.j1_phase),
                           std::polar(cfg.j2_mag, cfg.j2_phase));
    return f;
}

RatePhaseSet build_rate_phase_set(const DressedFrame& frame, const PhysicalConfig& cfg)
{
    cfg.validate();
    RatePhaseSet rp;
    const double leg1 = kPi / cfg.velocity * cfg.j1_mag * cfg.j1_mag;
    const double leg2 = kPi / cfg.velocity * cfg.j2_mag * cfg.j2_mag;
    fill_rates(rp, leg1, leg2, frame.theta, cfg.j1_phase - cfg.j2_phase);
    rp.tau = cfg.separation / cfg.velocity;
    const double nu_p = frame.nu_plus.value_or(0.0);
    const double nu_m = frame.nu_minus.value_or(0.0);
    rp.phi_plus = (cfg.omega_e - nu_p) * rp.tau;
    rp.phi_minus = (cfg.omega_e - nu_m) * rp.tau;
    // phi_minus - phi_plus == 2 phi holds bit for bit.
    rp.phi = 0.5 * (rp.phi_minus - rp.phi_plus);
    return rp;
}

std::pair<DressedFrame, RatePhaseSet> phenom_to_rateset(const PhenomConfig& cfg)
{
    cfg.validate();
    const double ratio2 = cfg.coupling_ratio * cfg.coupling_ratio;
    const double leg1 = cfg.gamma_total / (1.0 + ratio2);
    const double leg2 = cfg.gamma_total * ratio2 / (1.0 + ratio2);
    if (!(leg1 > 0.0) || leg2 < 0.0) {
        throw ConfigError("phenom config: Gamma and coupling_ratio are not realizable");
    }

    DressedFrame f;
    f.theta = cfg.theta;
    // v = 1: Gamma_j = pi |J_j|^2.
    const double j1 = std::sqrt(leg1 / kPi);
    const double j2 = std::sqrt(leg2 / kPi);
    fill_channel_couplings(f, std::polar(j1, cfg.phi_j), cplx(j2, 0.0));

    RatePhaseSet rp;
    fill_rates(rp, leg1, leg2, cfg.theta, cfg.phi_j);
    rp.tau = cfg.tau_gamma / cfg.gamma_total;
    rp.phi_plus = cfg.phi_plus;
    rp.phi_minus = cfg.phi_minus;
    rp.phi = cfg.phi();
    return {f, rp};
}

PhenomConfig induced_phenom(const DressedFrame& frame, const RatePhaseSet& rp)
{
    if (!(rp.leg_rate_1 > 0.0)) {
        throw ConfigError("cannot express a configuration with |J1| = 0 as a coupling ratio");
    }
    PhenomConfig p;
    p.gamma_total = rp.Gamma;
    p.theta = frame.theta;
    p.phi_plus = rp.phi_plus;
    p.phi_minus = rp.phi_minus;
    p.phi_j = rp.phi_j;
    p.tau_gamma = rp.tau * rp.Gamma;
    p.coupling_ratio = std::sqrt(rp.leg_rate_2 / rp.leg_rate_1);
    return p;
}

double wrap_angle(double a)
{
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double angle_distance(double a, double target)
{
    return std::remainder(a - target, kTwoPi);
}

}  // namespace gascatter
