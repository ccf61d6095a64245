// Single-photon scattering amplitudes off the two-legged driven atom.
//
// Detuning is always Delta = E - omega_e, with E the conserved total energy
// (photon plus dressed atom). For the |eta_->-incident case it coincides with
// Delta_k^- = v|k| + nu_- - omega_e.

#pragma once

#include <stdexcept>

#include "gascatter/model.hpp"

namespace gascatter {

enum class Regime { Exact, Markovian };
enum class Direction { Forward, Backward };
enum class Channel { Plus, Minus };

[[nodiscard]] const char* to_string(Regime r);
[[nodiscard]] const char* to_string(Direction d);
[[nodiscard]] const char* to_string(Channel c);

[[nodiscard]] constexpr Direction reversed(Direction d)
{
    return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}
[[nodiscard]] constexpr Channel other(Channel c)
{
    return c == Channel::Plus ? Channel::Minus : Channel::Plus;
}

struct Incidence {
    Direction direction{Direction::Forward};
    Channel channel{Channel::Minus};
    double detuning{0.0};
};

/// Thrown when an outgoing (or incoming) channel is evanescent at the requested energy.
class ChannelClosed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Amplitudes for one incidence direction: elastic transmission/reflection and
/// the two channel-changing (frequency-converting) amplitudes.
struct AmplitudeSet {
    cplx t{1.0, 0.0};
    cplx r{0.0, 0.0};
    cplx t_conv{0.0, 0.0};
    cplx r_conv{0.0, 0.0};
    // |denominator| fell below 1e-13 Gamma; values are the limit from Delta + 1e-8 Gamma.
    bool near_singular{false};

    [[nodiscard]] double T() const { return std::norm(t); }
    [[nodiscard]] double R() const { return std::norm(r); }
    [[nodiscard]] double Tc() const { return std::norm(t_conv) + std::norm(r_conv); }
};

struct Probabilities {
    double T{1.0};
    double R{0.0};
    double Tc{0.0};
};

[[nodiscard]] Probabilities probabilities(const AmplitudeSet& amps);

/// Common denominator Delta + i(Gamma_+ + gamma_+ e^{i x_+}) + i(Gamma_- + gamma_- e^{i x_-}),
/// x_n = Delta tau + phi_n (exact) or phi_n (Markovian).
[[nodiscard]] cplx resonance_denominator(const RatePhaseSet& rp, double detuning, Regime regime);

/// Atomic excitation amplitude for a unit-amplitude incident wave.
///
/// Rate units: the field couples to leg j through sqrt(Gamma_j) e^{i phi_j} with
/// leg 2 taken real (only phi_J is physical), and v = 1. Leg 1 sits at x = +d/2.
[[nodiscard]] cplx excitation_amplitude(const RatePhaseSet& rp, const DressedFrame& frame,
                                        const Incidence& inc, Regime regime = Regime::Exact);

/// Closed-form amplitudes for |eta_-> incidence with retardation kept.
/// Throws std::invalid_argument for plus-channel incidence.
[[nodiscard]] AmplitudeSet amplitudes_exact(const RatePhaseSet& rp, const DressedFrame& frame,
                                            const Incidence& inc);

/// Closed-form Markovian amplitudes: e^{i Delta tau} -> 1, phi_+- kept.
[[nodiscard]] AmplitudeSet amplitudes_markov(const RatePhaseSet& rp, const DressedFrame& frame,
                                             const Incidence& inc);

/// On-shell reduced S-matrix element from channel inc.channel travelling in
/// inc.direction to out_channel travelling in out_direction.
///
/// Throws ChannelClosed when either photon would be evanescent (physical mode only;
/// without dressed energies every channel is taken as open).
[[nodiscard]] cplx s_matrix_reduced(const RatePhaseSet& rp, const DressedFrame& frame,
                                    const Incidence& inc, Channel out_channel,
                                    Direction out_direction, Regime regime = Regime::Exact);

/// Amplitudes for either incident channel. Minus goes through the closed forms,
/// plus through s_matrix_reduced; "conv" always means the other channel.
[[nodiscard]] AmplitudeSet scattering_amplitudes(const RatePhaseSet& rp, const DressedFrame& frame,
                                                 const Incidence& inc, Regime regime);

/// True when a photon in `channel` propagates at total energy omega_e + detuning.
[[nodiscard]] bool channel_open(const DressedFrame& frame, double detuning, Channel channel);

}  // namespace gascatter
