#include "gascatter/scattering.hpp"

#include <array>
#include <cmath>
#include <sstream>

// Rate-unit symbol table. The closed forms are written with (pi/v) J products;
// after the core-model boundary they are carried as rates:
//
//   (pi/v)|J_j|^2              = Gamma_j                  (leg_rate_j)
//   (pi/v)|J_1c|^2             = cos^2(theta/2) Gamma_1
//   (2pi/v) J_1c J_2c^*        = 2 cos^2(theta/2) sqrt(Gamma_1 Gamma_2) e^{i phi_J}
//   (pi/v) (J_1s + J_2s a)(J_1c^* + J_2c^* b)
//                              = sin(theta/2) cos(theta/2)
//                                (sqrt(Gamma_1) e^{i phi_J} + sqrt(Gamma_2) a)
//                                (sqrt(Gamma_1) e^{-i phi_J} + sqrt(Gamma_2) b)
//
// The overall phase of J_2 drops out of every amplitude and is fixed to zero.

namespace gascatter {

namespace {

constexpr double kSingularFraction = 1e-13;
constexpr double kNudgeFraction = 1e-8;

cplx expi(double x) { return std::polar(1.0, x); }

double retardation(const RatePhaseSet& rp, double detuning, Regime regime)
{
    return regime == Regime::Exact ? detuning * rp.tau : 0.0;
}

// Moves the evaluation point off a removable 0/0 at a bound-state corner.
double regularized_detuning(const RatePhaseSet& rp, double detuning, Regime regime, bool& flagged)
{
    const double scale = rp.Gamma > 0.0 ? rp.Gamma : 1.0;
    flagged = std::abs(resonance_denominator(rp, detuning, regime)) < kSingularFraction * scale;
    return flagged ? detuning + kNudgeFraction * scale : detuning;
}

AmplitudeSet closed_form(const RatePhaseSet& rp, const DressedFrame& frame, const Incidence& inc,
                         Regime regime)
{
    if (inc.channel != Channel::Minus) {
        throw std::invalid_argument("closed-form amplitudes exist only for |eta_-> incidence");
    }
    AmplitudeSet out;
    if (rp.Gamma == 0.0) return out;

    const double delta = regularized_detuning(rp, inc.detuning, regime, out.near_singular);
    const double ret = retardation(rp, delta, regime);
    const double xp = ret + rp.phi_plus;
    const double xm = ret + rp.phi_minus;
    const double s = frame.sin_half();
    const double c = frame.cos_half();
    const double c2 = c * c;
    const double g1 = std::sqrt(rp.leg_rate_1);
    const double g2 = std::sqrt(rp.leg_rate_2);
    const double cross = rp.cross_rate();
    const cplx eJ = expi(rp.phi_j);
    const cplx I(0.0, 1.0);

    const cplx den = resonance_denominator(rp, delta, regime);
    const cplx elastic_common = I * rp.Gamma_plus + I * rp.gamma_plus * expi(xp);

    if (inc.direction == Direction::Forward) {
        out.t = (delta - 2.0 * c2 * cross * eJ * std::sin(xm) + elastic_common) / den;
        out.r = -(I * rp.gamma_minus
                  + I * c2 * (rp.leg_rate_1 * expi(xm) + rp.leg_rate_2 * expi(-xm)))
                / den;
        const cplx absorb = g1 * std::conj(eJ) + g2 * expi(-xm);
        const cplx pref = expi(rp.phi) * I * (s * c);
        out.t_conv = pref * (g1 * eJ + g2 * expi(xp)) * absorb / den;
        out.r_conv = pref * (g1 * eJ * expi(xp) + g2) * absorb / den;
    } else {
        out.t = (delta - 2.0 * c2 * cross * std::conj(eJ) * std::sin(xm) + elastic_common) / den;
        out.r = -(I * rp.gamma_minus
                  + I * c2 * (rp.leg_rate_1 * expi(-xm) + rp.leg_rate_2 * expi(xm)))
                / den;
        // The second factor carries e^{+i(Delta tau + phi_-)}, the same retarded
        // phase as the forward case.
        const cplx absorb = g1 * std::conj(eJ) + g2 * expi(xm);
        const cplx pref = expi(-rp.phi) * I * (s * c);
        out.t_conv = pref * (g1 * eJ + g2 * expi(-xp)) * absorb / den;
        out.r_conv = pref * (g1 * eJ * expi(-xp) + g2) * absorb / den;
    }
    return out;
}

// Field vertex of leg j (0 -> x = +d/2, 1 -> x = -d/2) into channel l, rate units.
std::array<cplx, 2> vertex(const RatePhaseSet& rp, const DressedFrame& frame, Channel l)
{
    const double w = l == Channel::Plus ? frame.sin_half() : -frame.cos_half();
    return {std::polar(std::sqrt(rp.leg_rate_1) * w, rp.phi_j),
            cplx(std::sqrt(rp.leg_rate_2) * w, 0.0)};
}

constexpr std::array<double, 2> kLegPosition{0.5, -0.5};  // in units of d

double channel_phase(const RatePhaseSet& rp, double ret, Channel l)
{
    return ret + (l == Channel::Plus ? rp.phi_plus : rp.phi_minus);
}

double direction_sign(Direction d) { return d == Direction::Forward ? 1.0 : -1.0; }

cplx excitation_at(const RatePhaseSet& rp, const DressedFrame& frame, const Incidence& inc,
                   double delta, Regime regime)
{
    const double ret = retardation(rp, delta, regime);
    const double x = channel_phase(rp, ret, inc.channel);
    const double sigma = direction_sign(inc.direction);
    const auto a = vertex(rp, frame, inc.channel);
    cplx source{0.0, 0.0};
    for (std::size_t j = 0; j < 2; ++j) source += std::conj(a[j]) * expi(sigma * x * kLegPosition[j]);
    return source / resonance_denominator(rp, delta, regime);
}

void require_open(const DressedFrame& frame, double detuning, Channel c, const char* role)
{
    if (!channel_open(frame, detuning, c)) {
        std::ostringstream os;
        os << role << " channel " << to_string(c) << " is closed at detuning " << detuning;
        throw ChannelClosed(os.str());
    }
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::Exact ? "exact" : "markov"; }
const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }
const char* to_string(Channel c) { return c == Channel::Plus ? "plus" : "minus"; }

Probabilities probabilities(const AmplitudeSet& amps)
{
    return {amps.T(), amps.R(), amps.Tc()};
}

cplx resonance_denominator(const RatePhaseSet& rp, double detuning, Regime regime)
{
    const double ret = retardation(rp, detuning, regime);
    const cplx I(0.0, 1.0);
    return detuning + I * (rp.Gamma_plus + rp.gamma_plus * expi(ret + rp.phi_plus))
           + I * (rp.Gamma_minus + rp.gamma_minus * expi(ret + rp.phi_minus));
}

cplx excitation_amplitude(const RatePhaseSet& rp, const DressedFrame& frame, const Incidence& inc,
                          Regime regime)
{
    if (rp.Gamma == 0.0) return {0.0, 0.0};
    bool flagged = false;
    const double delta = regularized_detuning(rp, inc.detuning, regime, flagged);
    return excitation_at(rp, frame, inc, delta, regime);
}

AmplitudeSet amplitudes_exact(const RatePhaseSet& rp, const DressedFrame& frame,
                              const Incidence& inc)
{
    return closed_form(rp, frame, inc, Regime::Exact);
}

AmplitudeSet amplitudes_markov(const RatePhaseSet& rp, const DressedFrame& frame,
                               const Incidence& inc)
{
    return closed_form(rp, frame, inc, Regime::Markovian);
}

bool channel_open(const DressedFrame& frame, double detuning, Channel channel)
{
    if (!frame.omega_e || !frame.nu_plus || !frame.nu_minus) return true;
    const double nu = channel == Channel::Plus ? *frame.nu_plus : *frame.nu_minus;
    return *frame.omega_e + detuning - nu > 0.0;
}

cplx s_matrix_reduced(const RatePhaseSet& rp, const DressedFrame& frame, const Incidence& inc,
                      Channel out_channel, Direction out_direction, Regime regime)
{
    require_open(frame, inc.detuning, inc.channel, "incoming");
    require_open(frame, inc.detuning, out_channel, "outgoing");

    const bool elastic = out_channel == inc.channel;
    const bool transmitted = out_direction == inc.direction;
    const cplx direct = (elastic && transmitted) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    if (rp.Gamma == 0.0) return direct;

    bool flagged = false;
    const double delta = regularized_detuning(rp, inc.detuning, regime, flagged);
    const cplx u = excitation_at(rp, frame, inc, delta, regime);

    // Emission from leg j into channel l and direction out_direction, read off
    // at +-infinity against e^{+-i k_l x}.
    const double x = channel_phase(rp, retardation(rp, delta, regime), out_channel);
    const double sigma_out = direction_sign(out_direction);
    const auto b = vertex(rp, frame, out_channel);
    cplx emitted{0.0, 0.0};
    for (std::size_t j = 0; j < 2; ++j) emitted += b[j] * expi(-sigma_out * x * kLegPosition[j]);
    return direct - cplx(0.0, 1.0) * u * emitted;
}

AmplitudeSet scattering_amplitudes(const RatePhaseSet& rp, const DressedFrame& frame,
                                   const Incidence& inc, Regime regime)
{
    if (inc.channel == Channel::Minus) {
        return regime == Regime::Exact ? amplitudes_exact(rp, frame, inc)
                                       : amplitudes_markov(rp, frame, inc);
    }
    AmplitudeSet out;
    const Channel conv = other(inc.channel);
    const Direction back = reversed(inc.direction);
    out.t = s_matrix_reduced(rp, frame, inc, inc.channel, inc.direction, regime);
    out.r = s_matrix_reduced(rp, frame, inc, inc.channel, back, regime);
    out.t_conv = s_matrix_reduced(rp, frame, inc, conv, inc.direction, regime);
    out.r_conv = s_matrix_reduced(rp, frame, inc, conv, back, regime);
    if (rp.Gamma > 0.0) {
        out.near_singular = std::abs(resonance_denominator(rp, inc.detuning, regime))
                            < kSingularFraction * rp.Gamma;
    }
    return out;
}

}  // namespace gascatter
