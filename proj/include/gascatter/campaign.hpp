// Randomized equivalence campaign: closed-form amplitudes against the
// real-space solver over random phenomenological parameter points.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gascatter/model.hpp"
#include "gascatter/scattering.hpp"

namespace gascatter {

struct CampaignOptions {
    std::size_t points{10000};
    std::uint64_t seed{7};
    Regime regime{Regime::Exact};
    // Fixed tau Gamma for every point; unset draws it from [0, 4 pi] (exact only).
    std::optional<double> tau_gamma;
    // Unset: 1e-9 (exact) or 1e-4 (Markovian).
    std::optional<double> tolerance;
    unsigned threads{1};
    // Oracle solves with a condition number above this are excluded.
    double max_condition{1e10};
};

struct CampaignPoint {
    PhenomConfig config;
    double delta_over_gamma{0.0};
};

struct CampaignReport {
    std::uint64_t seed{0};
    Regime regime{Regime::Exact};
    std::optional<double> tau_gamma;
    double tolerance{0.0};
    double modulus_floor{0.0};
    std::size_t points{0};
    std::size_t comparisons{0};
    std::size_t excluded{0};
    // t, r, t_conv, r_conv
    std::array<double, 4> max_modulus_error{};
    std::array<double, 4> max_phase_error{};
    double max_oracle_unitarity{0.0};  // max |T + R + Tc - 1| from the oracle
    double max_residual{0.0};
    double max_condition{0.0};         // largest condition among included solves
    bool pass{true};

    [[nodiscard]] double max_error() const;
    /// Deterministic text report (no timings).
    void write(std::ostream& out) const;
};

/// The deterministic sequence of random points for a seed.
[[nodiscard]] std::vector<CampaignPoint> campaign_points(const CampaignOptions& options);

/// Throws std::invalid_argument for zero points or a negative tau Gamma.
[[nodiscard]] CampaignReport run_campaign(const CampaignOptions& options);

}  // namespace gascatter
