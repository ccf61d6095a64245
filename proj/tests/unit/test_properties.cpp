// Randomized invariants over the phenomenological parameter space.
#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "gascatter/analysis.hpp"

using namespace gascatter;

namespace {

constexpr int kPoints = 10000;

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; }

    PhenomConfig config()
    {
        PhenomConfig c;
        c.gamma_total = uniform(0.5, 2.0);
        c.theta = uniform(0.0, kPi);
        c.phi_plus = uniform(-10.0, 10.0);
        c.phi_minus = uniform(-10.0, 10.0);
        c.phi_j = uniform(0.0, kTwoPi);
        c.tau_gamma = uniform(0.0, 4.0 * kPi);
        c.coupling_ratio = std::exp(uniform(-1.5, 1.5));
        return c;
    }
};

}  // namespace

TEST_CASE("rate invariants")
{
    Sampler s(1);
    for (int i = 0; i < kPoints; ++i) {
        const auto [f, rp] = phenom_to_rateset(s.config());
        REQUIRE(rp.Gamma > 0.0);
        CHECK(std::abs(rp.gamma) <= rp.Gamma * (1 + 1e-15));
        CHECK(std::abs(rp.Gamma_plus + rp.Gamma_minus - rp.Gamma) <= 1e-15 * rp.Gamma);
        CHECK(std::abs(rp.gamma_plus + rp.gamma_minus - rp.gamma) <= 1e-15 * rp.Gamma);
        CHECK(rp.phi_minus - rp.phi_plus == 2.0 * rp.phi);
    }
}

TEST_CASE("unitarity, both regimes, directions and incident channels")
{
    Sampler s(2);
    double worst = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const auto [f, rp] = phenom_to_rateset(s.config());
        const double d = s.uniform(-10.0, 10.0) * rp.Gamma;
        for (Regime reg : {Regime::Exact, Regime::Markovian}) {
            for (Direction dir : {Direction::Forward, Direction::Backward}) {
                for (Channel ch : {Channel::Minus, Channel::Plus}) {
                    const auto a = scattering_amplitudes(rp, f, {dir, ch, d}, reg);
                    worst = std::max(worst, std::abs(a.T() + a.R() + a.Tc() - 1.0));
                }
            }
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("reflection reciprocity and contrast identity")
{
    Sampler s(3);
    for (int i = 0; i < kPoints; ++i) {
        const auto [f, rp] = phenom_to_rateset(s.config());
        const double x = s.uniform(-10.0, 10.0);
        for (Regime reg : {Regime::Exact, Regime::Markovian}) {
            const auto row = evaluate_row(rp, f, reg, x);
            CHECK(std::abs(row.R - row.R_b) < 1e-12);
            CHECK(std::abs(row.I1 + row.I2) < 1e-12);
        }
    }
}

TEST_CASE("phi_J = n pi gives full reciprocity")
{
    Sampler s(4);
    for (int i = 0; i < kPoints; ++i) {
        auto c = s.config();
        c.phi_j = kPi * std::floor(s.uniform(-3.0, 3.0));
        const auto [f, rp] = phenom_to_rateset(c);
        const double x = s.uniform(-10.0, 10.0);
        for (Regime reg : {Regime::Exact, Regime::Markovian}) {
            const auto row = evaluate_row(rp, f, reg, x);
            CHECK(std::abs(row.T - row.T_b) < 1e-12);
            CHECK(std::abs(row.Tc - row.Tc_b) < 1e-12);
        }
    }
}

TEST_CASE("markovian transmission amplitude is reciprocal when sin(phi_-) = 0")
{
    Sampler s(5);
    for (int i = 0; i < kPoints / 10; ++i) {
        auto c = s.config();
        c.phi_minus = kPi * std::floor(s.uniform(-3.0, 3.0));
        const auto [f, rp] = phenom_to_rateset(c);
        const double d = s.uniform(-10.0, 10.0) * rp.Gamma;
        const auto a = amplitudes_markov(rp, f, {Direction::Forward, Channel::Minus, d});
        const auto b = amplitudes_markov(rp, f, {Direction::Backward, Channel::Minus, d});
        CHECK(std::abs(a.t - b.t) < 1e-12);
    }
}

TEST_CASE("suppression locks, both regimes")
{
    Sampler s(6);
    for (int i = 0; i < kPoints / 10; ++i) {
        auto c = s.config();
        c.coupling_ratio = 1.0;
        c.phi_j = kPi * (2 * std::floor(s.uniform(-2.0, 2.0)) + 1);
        const double m = 2 * kPi * std::floor(s.uniform(-2.0, 2.0));
        const auto x = s.uniform(-10.0, 10.0);

        c.phi_plus = m;
        auto [f, rp] = phenom_to_rateset(c);
        CHECK(evaluate_row(rp, f, Regime::Markovian, x).Tc < 1e-12);

        c.phi_plus = s.uniform(0.0, kTwoPi);
        c.phi_minus = m;
        std::tie(f, rp) = phenom_to_rateset(c);
        CHECK(evaluate_row(rp, f, Regime::Markovian, x).T > 1.0 - 1e-12);

        // retarded: Delta tau + phi_n = 2 m pi
        c.tau_gamma = s.uniform(0.1, 4.0 * kPi);
        std::tie(f, rp) = phenom_to_rateset(c);
        const double dm = (m - c.phi_minus + 2 * kPi) / rp.tau / rp.Gamma;
        CHECK(evaluate_row(rp, f, Regime::Exact, dm).T > 1.0 - 1e-9);
        const double dp = (m - c.phi_plus) / rp.tau / rp.Gamma;
        CHECK(evaluate_row(rp, f, Regime::Exact, dp).Tc < 1e-12);
    }
}
