#include <doctest.h>

#include <cmath>

#include "gascatter/optimize.hpp"

using namespace gascatter;

namespace {

OptimizeOptions base_options()
{
    OptimizeOptions o;
    o.base.theta = kPi / 2;
    o.resolution = 24;
    o.threads = 2;
    return o;
}

}  // namespace

TEST_CASE("nelder-mead minimizes a shifted quadratic")
{
    auto f = [](std::span<const double> x) {
        return (x[0] - 1.5) * (x[0] - 1.5) + 3.0 * (x[1] + 0.25) * (x[1] + 0.25);
    };
    const std::vector<double> step{0.5, 0.5};
    const auto r = nelder_mead(f, {0.0, 0.0}, step);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(r.x[1] == doctest::Approx(-0.25).epsilon(1e-8));
    for (std::size_t i = 1; i < r.best_history.size(); ++i) {
        CHECK(r.best_history[i] <= r.best_history[i - 1]);
    }
}

TEST_CASE("nelder-mead stops on the iteration cap")
{
    auto f = [](std::span<const double> x) { return std::cos(x[0]); };
    const std::vector<double> step{1.0};
    NelderMeadOptions o;
    o.max_iterations = 3;
    const auto r = nelder_mead(f, {0.1}, step, o);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
}

TEST_CASE("empty box and conflicting specs are rejected")
{
    auto o = base_options();
    CHECK_THROWS_AS((void)optimize_conversion(o), std::invalid_argument);
    o.free = {{Param::Delta, 1.0, 1.0}};
    CHECK_THROWS_AS((void)optimize_conversion(o), std::invalid_argument);
    o.free = {{Param::PhiPlus, 0.0, kTwoPi}};
    o.ties = {{Param::PhiPlus, Param::PhiMinus}};
    CHECK_THROWS_AS((void)optimize_conversion(o), std::invalid_argument);
}

TEST_CASE("reciprocal conversion stays at one half")
{
    auto o = base_options();
    o.base.phi_j = kPi;
    o.free = {{Param::PhiPlus, 0.0, kTwoPi}, {Param::PhiMinus, 0.0, kTwoPi}, {Param::Delta, -10.0, 10.0}};
    const auto r = optimize_conversion(o);
    CHECK(r.best.value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.bandwidth > 0.0);
    CHECK_FALSE(r.ties.empty());
}

TEST_CASE("ties are sorted by |Delta| then phi_+")
{
    auto o = base_options();
    o.base.phi_j = 0.0;
    o.free = {{Param::PhiPlus, 0.0, kTwoPi}, {Param::Delta, -10.0, 10.0}};
    o.refine_seeds = 12;
    const auto r = optimize_conversion(o);
    for (std::size_t i = 1; i < r.ties.size(); ++i) {
        const double a = std::abs(r.ties[i - 1].point[3]);
        const double b = std::abs(r.ties[i].point[3]);
        CHECK(a <= b + 1e-9);
    }
    CHECK(r.best.value == r.ties.front().value);
}

TEST_CASE("clamped coordinates stay inside a partial box")
{
    auto o = base_options();
    o.base.phi_j = 0.5 * kPi;
    o.free = {{Param::Delta, 2.0, 3.0}};
    const auto r = optimize_conversion(o);
    CHECK(r.best.point[3] >= 2.0);
    CHECK(r.best.point[3] <= 3.0);
}

TEST_CASE("ties propagate to their targets")
{
    auto o = base_options();
    o.regime = Regime::Exact;
    o.base.tau_gamma = kPi;
    o.base.phi_j = 0.5 * kPi;
    o.free = {{Param::PhiMinus, 0.0, kTwoPi}, {Param::Delta, -2.0, 2.0}};
    o.ties = {{Param::PhiPlus, Param::PhiMinus, 1.0, kPi}};
    const auto r = optimize_conversion(o);
    CHECK(r.best.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(angle_distance(r.best.point[0] - r.best.point[1], kPi)) < 1e-9);
}

TEST_CASE("minimizing the contrast")
{
    auto o = base_options();
    o.objective = Objective::I2;
    o.sense = Sense::Minimize;
    o.free = {{Param::PhiPlus, 0.0, kTwoPi}, {Param::PhiJ, 0.0, kTwoPi}, {Param::Delta, -5.0, 5.0}};
    o.ties = {{Param::PhiMinus, Param::PhiJ, 1.0, kPi}};
    const auto r = optimize_conversion(o);
    CHECK(r.best.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("resolution is capped by the grid budget")
{
    auto o = base_options();
    o.resolution = 64;
    o.max_grid_points = 1000;
    o.free = {{Param::PhiPlus, 0.0, kTwoPi}, {Param::PhiMinus, 0.0, kTwoPi}, {Param::Delta, -1.0, 1.0}};
    const auto r = optimize_conversion(o);
    CHECK(r.seed_resolution == 10);
}

TEST_CASE("parameter names")
{
    CHECK(param_from_string("phi-J") == Param::PhiJ);
    CHECK(param_from_string("tau-gamma") == Param::TauGamma);
    CHECK_FALSE(param_from_string("phi_J").has_value());
    CHECK(is_angle(Param::PhiMinus));
    CHECK_FALSE(is_angle(Param::Theta));
}
