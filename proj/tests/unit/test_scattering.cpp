#include <doctest.h>

#include <cmath>

#include "gascatter/scattering.hpp"

using namespace gascatter;

namespace {

std::pair<DressedFrame, RatePhaseSet> phenom(double theta, double phi_plus, double phi_minus, double phi_j,
                                             double tau_gamma = 0.0, double ratio = 1.0)
{
    PhenomConfig c;
    c.theta = theta;
    c.phi_plus = phi_plus;
    c.phi_minus = phi_minus;
    c.phi_j = phi_j;
    c.tau_gamma = tau_gamma;
    c.coupling_ratio = ratio;
    return phenom_to_rateset(c);
}

double sum(const AmplitudeSet& a) { return a.T() + a.R() + a.Tc(); }

}  // namespace

TEST_CASE("zero coupling scatters nothing")
{
    PhysicalConfig c;
    c.omega_e = 100.0;
    c.rabi = 1.0;
    const auto f = build_dressed_frame(c);
    const auto rp = build_rate_phase_set(f, c);
    const Incidence inc{Direction::Forward, Channel::Minus, 0.3};
    CHECK(excitation_amplitude(rp, f, inc) == cplx(0.0, 0.0));
    const auto a = amplitudes_exact(rp, f, inc);
    CHECK(a.t == cplx(1.0, 0.0));
    CHECK(a.Tc() == 0.0);
}

TEST_CASE("undriven atom cannot absorb from the plus channel")
{
    const auto [f, rp] = phenom(0.0, 0.3, 1.2, 0.4, 1.0);
    CHECK(std::abs(excitation_amplitude(rp, f, {Direction::Forward, Channel::Plus, 0.2})) < 1e-17);
}

TEST_CASE("far detuning")
{
    const auto [f, rp] = phenom(1.0, 0.3, 1.2, 0.4, 0.7);
    for (double d : {1e7, -1e7}) {
        const auto a = amplitudes_exact(rp, f, {Direction::Forward, Channel::Minus, d});
        CHECK(a.T() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(a.Tc() < 1e-12);
    }
}

TEST_CASE("conversion needs a mixed drive")
{
    for (double theta : {0.0, kPi}) {
        const auto [f, rp] = phenom(theta, 0.3, 1.2, 0.4, 0.7);
        for (double d : {-2.0, 0.0, 1.3}) {
            CHECK(amplitudes_exact(rp, f, {Direction::Forward, Channel::Minus, d}).Tc() < 1e-30);
            CHECK(amplitudes_markov(rp, f, {Direction::Backward, Channel::Minus, d}).Tc() < 1e-30);
        }
    }
}

TEST_CASE("frequency-independent total transmission")
{
    const auto [f, rp] = phenom(kPi / 2, 0.0, 0.0, kPi);
    for (double d = -10.0; d <= 10.0; d += 0.37) {
        const auto a = amplitudes_markov(rp, f, {Direction::Forward, Channel::Minus, d});
        CHECK(std::abs(a.t - 1.0) < 1e-12);
    }
}

TEST_CASE("total reflection at the shifted resonance")
{
    const auto [f, rp] = phenom(kPi / 2, 0.0, 0.75 * kPi, kPi);
    const double d = -std::sqrt(2.0) / 4.0;
    const auto a = amplitudes_markov(rp, f, {Direction::Forward, Channel::Minus, d});
    CHECK(a.R() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.T() < 1e-24);
}

TEST_CASE("retarded peaks of unit transmission")
{
    const double tg = 1.0025 * kPi;
    const double phi_minus = 603.00375 * kPi;
    const auto [f, rp] = phenom(kPi / 2, 599.99625 * kPi, phi_minus, kPi, tg);
    // Delta tau + phi_- = 2 m pi
    const double m = std::round((phi_minus) / kTwoPi);
    for (double k : {m - 1, m, m + 1}) {
        const double d = (kTwoPi * k - phi_minus) / tg;
        const auto a = amplitudes_exact(rp, f, {Direction::Forward, Channel::Minus, d});
        CHECK(a.T() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(a.R() < 1e-9);
        CHECK(a.Tc() < 1e-9);
    }
}

TEST_CASE("closed forms agree with the generic S-matrix")
{
    const auto [f, rp] = phenom(1.1, 0.4, 2.3, 0.7, 2.5, 0.6);
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        for (double d : {-1.3, 0.0, 0.45}) {
            const Incidence inc{dir, Channel::Minus, d};
            const auto a = amplitudes_exact(rp, f, inc);
            const cplx t = s_matrix_reduced(rp, f, inc, Channel::Minus, dir);
            const cplx r = s_matrix_reduced(rp, f, inc, Channel::Minus, reversed(dir));
            const cplx tc = s_matrix_reduced(rp, f, inc, Channel::Plus, dir);
            const cplx rc = s_matrix_reduced(rp, f, inc, Channel::Plus, reversed(dir));
            CHECK(std::abs(a.t - t) < 1e-12);
            CHECK(std::abs(a.r - r) < 1e-12);
            CHECK(std::abs(a.t_conv - tc) < 1e-12);
            CHECK(std::abs(a.r_conv - rc) < 1e-12);
        }
    }
}

TEST_CASE("plus incidence at theta = pi does not convert")
{
    const auto [f, rp] = phenom(kPi, 0.4, 2.3, 0.7, 2.5);
    const Incidence inc{Direction::Forward, Channel::Plus, 0.3};
    CHECK(std::abs(s_matrix_reduced(rp, f, inc, Channel::Minus, Direction::Forward)) < 1e-16);
    CHECK(std::abs(s_matrix_reduced(rp, f, inc, Channel::Minus, Direction::Backward)) < 1e-16);
}

TEST_CASE("closed channel is reported")
{
    PhysicalConfig c;
    c.omega_e = 30.0;
    c.rabi = 1.0;
    c.j1_mag = c.j2_mag = 0.3;
    c.separation = 1.0;
    const auto f = build_dressed_frame(c);
    const auto rp = build_rate_phase_set(f, c);
    // E = omega_e + Delta must exceed nu_+ = 1 for the plus channel to propagate.
    CHECK(channel_open(f, 0.0, Channel::Plus));
    CHECK_FALSE(channel_open(f, -29.5, Channel::Plus));
    CHECK(channel_open(f, -29.5, Channel::Minus));
    CHECK_THROWS_AS((void)s_matrix_reduced(rp, f, {Direction::Forward, Channel::Minus, -29.5},
                                           Channel::Plus, Direction::Forward),
                    ChannelClosed);
}

TEST_CASE("closed forms reject plus incidence")
{
    const auto [f, rp] = phenom(1.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)amplitudes_exact(rp, f, {Direction::Forward, Channel::Plus, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("global conversion phase does not reach probabilities")
{
    auto [f, rp] = phenom(1.1, 0.4, 2.3, 0.7, 2.5, 0.6);
    const auto a = amplitudes_exact(rp, f, {Direction::Forward, Channel::Minus, 0.7});
    rp.phi = 0.0;
    const auto b = amplitudes_exact(rp, f, {Direction::Forward, Channel::Minus, 0.7});
    CHECK(a.T() == b.T());
    CHECK(a.R() == b.R());
    CHECK(a.Tc() == doctest::Approx(b.Tc()).epsilon(1e-15));
}

TEST_CASE("probabilities of a unit transmission")
{
    AmplitudeSet a;
    const auto p = probabilities(a);
    CHECK(p.T == 1.0);
    CHECK(p.R == 0.0);
    CHECK(p.Tc == 0.0);
}

TEST_CASE("unitarity at a generic point, both regimes")
{
    const auto [f, rp] = phenom(0.8, 1.4, 5.2, 2.2, 3.3, 1.9);
    for (Regime reg : {Regime::Exact, Regime::Markovian}) {
        for (Direction dir : {Direction::Forward, Direction::Backward}) {
            for (Channel ch : {Channel::Minus, Channel::Plus}) {
                const auto a = scattering_amplitudes(rp, f, {dir, ch, -0.8}, reg);
                CHECK(std::abs(sum(a) - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("denominator near a pole is flagged, not divided by")
{
    // gamma = -Gamma with phi_+ = phi_- = 0 in the Markovian limit: D = Delta + i(Gamma + gamma) = Delta.
    const auto [f, rp] = phenom(kPi / 2, 0.0, 0.0, kPi);
    CHECK(std::abs(resonance_denominator(rp, 0.0, Regime::Markovian)) < 1e-15);
    const auto a = amplitudes_markov(rp, f, {Direction::Forward, Channel::Minus, 0.0});
    CHECK(a.near_singular);
    CHECK(std::isfinite(a.T()));
    CHECK(std::abs(sum(a) - 1.0) < 1e-9);
}
