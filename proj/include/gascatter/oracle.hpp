// Independent real-space solver for the stationary one-excitation problem.
//
// Each dressed channel is a linear-dispersion field with right- and left-moving
// components. Both channels couple to the single excited level at the two legs
// (leg 1 at x = +d/2, leg 2 at x = -d/2). Between and outside the legs the
// fields are plane waves; at a leg the chiral components jump by -+ i g u / v and
// the atom sees the half-sum of the field on either side. With the incident
// amplitude fixed to one this is a 9x9 complex linear system:
//
//   per channel: right-mover in the middle and right regions,
//                left-mover in the left and middle regions   (2 x 4 unknowns)
//   the atomic amplitude u                                   (1 unknown)
//
// against 8 jump conditions and the atomic equation of motion. Nothing here
// uses the closed-form amplitudes.

#pragma once

#include <array>

#include "gascatter/model.hpp"
#include "gascatter/scattering.hpp"

namespace gascatter {

/// Coefficients of e^{+ikx} (right) and e^{-ikx} (left) in one region.
struct ChiralField {
    cplx right{0.0, 0.0};
    cplx left{0.0, 0.0};
};

enum class Region { Left = 0, Middle = 1, Right = 2 };

struct OracleSolution {
    // fields[channel][region], channel 0 = plus, 1 = minus.
    std::array<std::array<ChiralField, 3>, 2> fields{};
    cplx atomic{0.0, 0.0};
    AmplitudeSet amplitudes;
    double residual{0.0};          // ||A x - b|| / (||A|| ||x|| + ||b||)
    double condition_number{1.0};  // 2-norm
    bool singular{false};

    [[nodiscard]] const ChiralField& field(Channel c, Region r) const;
};

/// Solves the real-space problem at (rp, frame, inc). Retardation is always
/// physical here: the wave phase between the legs is Delta tau + phi_n.
/// Throws ChannelClosed when a channel is evanescent.
[[nodiscard]] OracleSolution solve_real_space(const RatePhaseSet& rp, const DressedFrame& frame,
                                              const Incidence& inc);

struct ComparisonReport {
    // Order: t, r, t_conv, r_conv.
    std::array<double, 4> modulus_error{};
    std::array<double, 4> phase_error{};
    double max_modulus_error{0.0};
    double max_phase_error{0.0};
    cplx alignment{1.0, 0.0};  // unit factor applied to the oracle set
    double tolerance{1e-9};
    bool pass{true};
};

/// Amplitude moduli below this are compared against it instead of themselves.
inline constexpr double kModulusFloor = 1e-3;

[[nodiscard]] ComparisonReport compare(const AmplitudeSet& closed_form,
                                       const OracleSolution& oracle, double tolerance = 1e-9,
                                       double modulus_floor = kModulusFloor);

}  // namespace gascatter
