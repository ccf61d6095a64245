// Spectra, nonreciprocity contrasts, bound-state locks and spectral features.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gascatter/model.hpp"
#include "gascatter/scattering.hpp"

namespace gascatter {

struct SampleFlags {
    bool near_singular{false};
    bool closed_channel{false};

    [[nodiscard]] bool any() const { return near_singular || closed_channel; }
};

/// One detuning sample, both incidence directions (suffix _b: backward).
struct SpectrumRow {
    double delta_over_gamma{0.0};
    double T{1.0}, R{0.0}, Tc{0.0};
    double T_b{1.0}, R_b{0.0}, Tc_b{0.0};
    double I1{0.0};  // T - T_b
    double I2{0.0};  // Tc - Tc_b
    SampleFlags flags;
};

/// (lo*(n-1-i) + hi*i) / (n-1); a grid with lo = -hi is exactly antisymmetric.
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// 2001 points over [-10, 10] (Markovian) or [-4 pi / (tau Gamma), 4 pi / (tau Gamma)]
/// (exact, tau > 0), in units of Gamma.
[[nodiscard]] std::vector<double> default_grid(const RatePhaseSet& rp, Regime regime);

/// Evaluates both incidence directions for |eta_-> incidence on a grid of Delta / Gamma.
/// Throws std::invalid_argument unless the grid is non-empty with finite, strictly increasing entries.
/// `threads` > 1 splits the grid into contiguous blocks; row order is the grid order.
[[nodiscard]] std::vector<SpectrumRow> sweep(const RatePhaseSet& rp, const DressedFrame& frame,
                                             Regime regime, std::span<const double> grid,
                                             unsigned threads = 1);

/// Same rows as sweep; I1 and I2 are always populated.
[[nodiscard]] std::vector<SpectrumRow> contrast_sweep(const RatePhaseSet& rp,
                                                      const DressedFrame& frame, Regime regime,
                                                      std::span<const double> grid,
                                                      unsigned threads = 1);

[[nodiscard]] SpectrumRow evaluate_row(const RatePhaseSet& rp, const DressedFrame& frame,
                                       Regime regime, double delta_over_gamma);

// --- bound states in the continuum -------------------------------------------------

struct BicReport {
    Channel channel{Channel::Plus};
    std::string condition;  // e.g. "phi_J = (2n+1)pi, phi_+ = 2m pi"
    bool conversion_vanishes{true};    // Tc = 0 for every detuning
    bool total_transmission{false};    // T = 1 for every detuning
    // Markovian detuning (units of Gamma) with R = 1, when it exists.
    std::optional<double> total_reflection_at;

    [[nodiscard]] std::string describe() const;
};

/// Phase locks producing a bound state in the continuum (Markovian reading).
/// Requires equal leg rates; angles are matched to within `angle_tolerance` radians.
[[nodiscard]] std::vector<BicReport> locate_bics(const RatePhaseSet& rp,
                                                 double angle_tolerance = 1e-9);

/// With retardation, emission into `channel` is suppressed at the discrete detunings
/// Delta tau + phi_n = 2 m pi (phi_J = (2n+1) pi) or (2m+1) pi (phi_J = 2n pi).
/// Returns those detunings, in units of Gamma, inside [lo, hi]. Empty unless
/// phi_J is a multiple of pi, the leg rates are equal and tau > 0.
[[nodiscard]] std::vector<double> suppression_detunings(const RatePhaseSet& rp, Channel channel,
                                                        double lo, double hi,
                                                        double angle_tolerance = 1e-9);

// --- features ----------------------------------------------------------------------

enum class Coefficient { T, R, Tc, T_b, R_b, Tc_b, I1, I2 };

[[nodiscard]] const char* to_string(Coefficient c);
[[nodiscard]] std::optional<Coefficient> coefficient_from_string(std::string_view name);
[[nodiscard]] double coefficient_value(const SpectrumRow& row, Coefficient c);

struct Feature {
    double location{0.0};  // Delta / Gamma, parabolic sub-grid estimate
    double value{0.0};
    double prominence{0.0};
    double width{0.0};     // full width at half prominence
};

struct FeatureSet {
    std::vector<Feature> peaks;
    std::vector<Feature> dips;
};

inline constexpr double kDefaultProminence = 1e-6;

/// Local maxima and minima of a coefficient along the sweep. Requires >= 3 rows
/// (std::invalid_argument); a curve constant to 1e-12 has no features.
[[nodiscard]] FeatureSet extract_features(std::span<const SpectrumRow> rows, Coefficient coefficient,
                                          double min_prominence = kDefaultProminence);

}  // namespace gascatter
