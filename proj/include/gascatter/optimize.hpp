// Phase-space search for maximal conversion or conversion contrast.
//
// A coarse grid over the free parameters seeds a handful of Nelder-Mead
// refinements. Angles (phi_+, phi_-, phi_J) are periodic: the objective is
// evaluated at any real value and results are wrapped back into the box.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gascatter/model.hpp"
#include "gascatter/scattering.hpp"

namespace gascatter {

enum class Objective { Tc, I2 };
enum class Sense { Maximize, Minimize };
enum class Param { PhiPlus = 0, PhiMinus, PhiJ, Delta, TauGamma, Theta };

inline constexpr std::size_t kParamCount = 6;
using ParamPoint = std::array<double, kParamCount>;

[[nodiscard]] const char* to_string(Param p);
[[nodiscard]] std::optional<Param> param_from_string(std::string_view name);
[[nodiscard]] bool is_angle(Param p);

/// Free parameter with its box. Angles in radians, Delta in units of Gamma.
struct Bound {
    Param param;
    double lo;
    double hi;
};

/// target = scale * source + offset, applied after the free parameters are set.
struct Tie {
    Param target;
    Param source;
    double scale{1.0};
    double offset{0.0};
};

struct OptimizeOptions {
    Objective objective{Objective::Tc};
    Sense sense{Sense::Maximize};
    Regime regime{Regime::Markovian};
    PhenomConfig base;          // supplies every parameter that is not free or tied
    double base_delta{0.0};     // Delta / Gamma when Delta is not free
    std::vector<Bound> free;
    std::vector<Tie> ties;
    std::size_t resolution{64};           // seed grid points per axis
    std::size_t max_grid_points{1u << 20};  // resolution is reduced to stay under this
    std::size_t refine_seeds{8};
    double simplex_tolerance{1e-10};
    double tie_tolerance{1e-9};
    std::size_t max_iterations{20000};
    unsigned threads{1};
};

struct Candidate {
    ParamPoint point{};
    double value{0.0};
};

struct OptimizationResult {
    Candidate best;
    std::vector<Candidate> ties;  // every refined optimum within tie_tolerance of best, sorted
    double bandwidth{0.0};        // Delta-width (units of Gamma) where |objective| >= 0.9 |best|
    std::size_t seed_resolution{0};
    std::size_t evaluations{0};
};

/// Objective at a full parameter point (Delta in units of Gamma).
[[nodiscard]] double evaluate_objective(Objective objective, Regime regime, const PhenomConfig& base,
                                        const ParamPoint& point);

/// Throws std::invalid_argument for an empty box, no free parameters or a
/// parameter that is both free and tied.
[[nodiscard]] OptimizationResult optimize_conversion(const OptimizeOptions& options);

// --- Nelder-Mead -----------------------------------------------------------------

struct NelderMeadOptions {
    double diameter_tolerance{1e-10};
    std::size_t max_iterations{20000};
};

struct NelderMeadResult {
    std::vector<double> x;
    double value{0.0};
    std::size_t iterations{0};
    std::size_t evaluations{0};
    bool converged{false};
    std::vector<double> best_history;  // best value after each iteration (non-increasing)
};

/// Minimizes f from an axis-aligned initial simplex x0 + step_i e_i.
[[nodiscard]] NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                           std::vector<double> x0, std::span<const double> step,
                                           const NelderMeadOptions& options = {});

}  // namespace gascatter
