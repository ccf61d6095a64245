// Core model: configuration, dressed-state frame, decay rates and phases.
//
// Two ways in. A PhysicalConfig describes the bare Hamiltonian parameters
// (level energies, drive, complex couplings at the two legs, leg separation,
// group velocity). A PhenomConfig describes the same system directly in the
// rate/phase coordinates the spectra depend on. Both end up as the
// (DressedFrame, RatePhaseSet) pair consumed by the scattering layer.

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gascatter {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised for configurations that violate a model invariant.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhysicalConfig {
    double omega_e{0.0};   // excited-state energy
    double omega_f{0.0};   // |f> energy
    double omega_d{0.0};   // drive frequency
    double rabi{0.0};      // Rabi frequency Omega, real and >= 0
    double j1_mag{0.0};
    double j1_phase{0.0};  // radians
    double j2_mag{0.0};
    double j2_phase{0.0};  // radians
    double separation{0.0};  // leg distance d
    double velocity{1.0};

    /// Throws ConfigError on a violated invariant.
    void validate() const;

    /// Non-fatal diagnostics (rotating-wave validity).
    [[nodiscard]] std::vector<std::string> warnings() const;
};

struct PhenomConfig {
    double gamma_total{1.0};  // Gamma
    double theta{0.0};        // mixing angle in [0, pi]
    double phi_plus{0.0};
    double phi_minus{0.0};
    double phi_j{0.0};
    double tau_gamma{0.0};      // dimensionless delay tau * Gamma
    double coupling_ratio{1.0};  // |J2| / |J1|

    void validate() const;

    /// (phi_minus - phi_plus) / 2
    [[nodiscard]] double phi() const { return 0.5 * (phi_minus - phi_plus); }
};

struct DressedFrame {
    double theta{0.0};
    // Dressed energies are only known in physical mode.
    std::optional<double> nu_plus;
    std::optional<double> nu_minus;
    // Bare excited-state energy, physical mode only; used for channel-opening checks.
    std::optional<double> omega_e;
    cplx j1s, j2s, j1c, j2c;
    // Omega = 0 and omega_f = omega_d: theta is 0/0 and was set to 0.
    bool degenerate_drive{false};

    [[nodiscard]] double sin_half() const;
    [[nodiscard]] double cos_half() const;
};

/// Every rate and phase entering the amplitude formulas, in the user's energy units.
///
/// The per-leg rates Gamma_1 = (pi/v)|J1|^2 and Gamma_2 = (pi/v)|J2|^2 are kept
/// alongside the collective ones: gamma alone cannot recover |J1 J2| when
/// cos(phi_J) = 0, and the conversion amplitudes need it.
struct RatePhaseSet {
    double Gamma{0.0};
    double gamma{0.0};
    double Gamma_plus{0.0};
    double Gamma_minus{0.0};
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    double leg_rate_1{0.0};
    double leg_rate_2{0.0};
    double tau{0.0};
    double phi_plus{0.0};
    double phi_minus{0.0};
    double phi{0.0};
    double phi_j{0.0};

    /// sqrt(Gamma_1 Gamma_2), the cross-leg rate.
    [[nodiscard]] double cross_rate() const;
    [[nodiscard]] double tau_gamma() const { return tau * Gamma; }
};

[[nodiscard]] DressedFrame build_dressed_frame(const PhysicalConfig& cfg);
[[nodiscard]] RatePhaseSet build_rate_phase_set(const DressedFrame& frame,
                                                const PhysicalConfig& cfg);

/// Phenomenological route: fixes v = 1, picks |J1| from Gamma and the coupling
/// ratio, takes the phases verbatim. The dressed energies are left unset.
[[nodiscard]] std::pair<DressedFrame, RatePhaseSet> phenom_to_rateset(const PhenomConfig& cfg);

/// The phenomenological parameters that reproduce a given rate/phase set.
[[nodiscard]] PhenomConfig induced_phenom(const DressedFrame& frame, const RatePhaseSet& rp);

/// Reduces an angle to [0, 2 pi).
[[nodiscard]] double wrap_angle(double a);

/// Signed distance from a to the nearest point of target + 2 pi n.
[[nodiscard]] double angle_distance(double a, double target);

}  // namespace gascatter
