#include "gascatter/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace gascatter {

namespace {

constexpr std::array<const char*, kParamCount> kParamNames{"phi-plus",  "phi-minus", "phi-J",
                                                           "delta",     "tau-gamma", "theta"};

std::size_t idx(Param p) { return static_cast<std::size_t>(p); }

bool spans_period(const Bound& b) { return is_angle(b.param) && b.hi - b.lo >= kTwoPi - 1e-12; }

// Maps an optimizer coordinate into the box: periodic angles wrap, everything
// else is clamped.
double project(const Bound& b, double v)
{
    if (spans_period(b)) return b.lo + wrap_angle(v - b.lo);
    return std::clamp(v, b.lo, b.hi);
}

double wrapped_distance(const OptimizeOptions& o, const ParamPoint& a, const ParamPoint& b)
{
    double d2 = 0.0;
    for (const auto& bd : o.free) {
        double d = a[idx(bd.param)] - b[idx(bd.param)];
        if (is_angle(bd.param)) d = angle_distance(d, 0.0);
        d2 += d * d;
    }
    return std::sqrt(d2);
}

struct Problem {
    const OptimizeOptions& o;
    ParamPoint fixed{};

    explicit Problem(const OptimizeOptions& opts) : o(opts)
    {
        fixed[idx(Param::PhiPlus)] = o.base.phi_plus;
        fixed[idx(Param::PhiMinus)] = o.base.phi_minus;
        fixed[idx(Param::PhiJ)] = o.base.phi_j;
        fixed[idx(Param::Delta)] = o.base_delta;
        fixed[idx(Param::TauGamma)] = o.base.tau_gamma;
        fixed[idx(Param::Theta)] = o.base.theta;
    }

    ParamPoint point(std::span<const double> x) const
    {
        ParamPoint p = fixed;
        for (std::size_t i = 0; i < o.free.size(); ++i) p[idx(o.free[i].param)] = project(o.free[i], x[i]);
        for (const auto& t : o.ties) p[idx(t.target)] = t.scale * p[idx(t.source)] + t.offset;
        return p;
    }

    // Smaller is better in either sense.
    double cost(std::span<const double> x) const
    {
        const double v = evaluate_objective(o.objective, o.regime, o.base, point(x));
        return o.sense == Sense::Maximize ? -v : v;
    }
};

void validate(const OptimizeOptions& o)
{
    if (o.free.empty()) throw std::invalid_argument("optimizer: no free parameters");
    for (const auto& b : o.free) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.hi > b.lo)) {
            throw std::invalid_argument(std::string("optimizer: empty box for ") + to_string(b.param));
        }
        for (const auto& t : o.ties) {
            if (t.target == b.param) {
                throw std::invalid_argument(std::string("optimizer: ") + to_string(b.param)
                                            + " is both free and tied");
            }
        }
    }
    for (std::size_t i = 0; i < o.free.size(); ++i) {
        for (std::size_t j = i + 1; j < o.free.size(); ++j) {
            if (o.free[i].param == o.free[j].param) {
                throw std::invalid_argument("optimizer: parameter listed twice");
            }
        }
    }
    if (o.resolution < 2) throw std::invalid_argument("optimizer: resolution must be >= 2");
}

std::size_t seed_resolution(const OptimizeOptions& o)
{
    const double dims = static_cast<double>(o.free.size());
    const auto cap = static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(o.max_grid_points), 1.0 / dims) + 1e-9));
    return std::max<std::size_t>(2, std::min(o.resolution, cap));
}

double axis_value(const Bound& b, std::size_t i, std::size_t res)
{
    if (spans_period(b)) return b.lo + (b.hi - b.lo) * static_cast<double>(i) / static_cast<double>(res);
    return b.lo + (b.hi - b.lo) * static_cast<double>(i) / static_cast<double>(res - 1);
}

double axis_step(const Bound& b, std::size_t res)
{
    return spans_period(b) ? (b.hi - b.lo) / static_cast<double>(res)
                           : (b.hi - b.lo) / static_cast<double>(res - 1);
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w * n / workers; i < (w + 1) * n / workers; ++i) fn(i);
        });
    }
}

// Width of the connected Delta-interval around the optimum where the objective
// keeps at least 90% of its best magnitude.
double robustness_bandwidth(const OptimizeOptions& o, const ParamPoint& best, double best_value)
{
    const double sign = o.sense == Sense::Maximize ? 1.0 : -1.0;
    if (!(sign * best_value > 0.0)) return 0.0;
    const double level = 0.9 * sign * best_value;
    auto above = [&](double delta) {
        ParamPoint p = best;
        p[idx(Param::Delta)] = delta;
        return sign * evaluate_objective(o.objective, o.regime, o.base, p) >= level;
    };
    const double centre = best[idx(Param::Delta)];
    constexpr double kStep = 1e-3;
    constexpr double kReach = 50.0;
    auto edge = [&](double dir) {
        double inside = centre;
        double probe = centre + dir * kStep;
        while (std::abs(probe - centre) < kReach && above(probe)) {
            inside = probe;
            probe += dir * kStep;
        }
        for (int k = 0; k < 60; ++k) {
            const double mid = 0.5 * (inside + probe);
            (above(mid) ? inside : probe) = mid;
        }
        return inside;
    };
    return edge(1.0) - edge(-1.0);
}

}  // namespace

const char* to_string(Param p) { return kParamNames[idx(p)]; }

std::optional<Param> param_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (name == kParamNames[i]) return static_cast<Param>(i);
    }
    return std::nullopt;
}

bool is_angle(Param p) { return p == Param::PhiPlus || p == Param::PhiMinus || p == Param::PhiJ; }

double evaluate_objective(Objective objective, Regime regime, const PhenomConfig& base,
                          const ParamPoint& point)
{
    PhenomConfig cfg = base;
    cfg.phi_plus = point[idx(Param::PhiPlus)];
    cfg.phi_minus = point[idx(Param::PhiMinus)];
    cfg.phi_j = point[idx(Param::PhiJ)];
    cfg.tau_gamma = point[idx(Param::TauGamma)];
    cfg.theta = point[idx(Param::Theta)];
    const auto [frame, rp] = phenom_to_rateset(cfg);
    const double delta = point[idx(Param::Delta)] * rp.Gamma;

    const double fwd =
        scattering_amplitudes(rp, frame, {Direction::Forward, Channel::Minus, delta}, regime).Tc();
    if (objective == Objective::Tc) return fwd;
    const double bwd =
        scattering_amplitudes(rp, frame, {Direction::Backward, Channel::Minus, delta}, regime).Tc();
    return fwd - bwd;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> step,
                             const NelderMeadOptions& options)
{
    const std::size_t n = x0.size();
    if (n == 0 || step.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");

    NelderMeadResult res;
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);
    res.evaluations = n + 1;

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    auto along = [&](std::vector<double>& out, double coef) {
        // centroid + coef * (centroid - worst)
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = centroid[k] + coef * (centroid[k] - simplex[order[n]][k]);
        }
    };

    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = simplex[order[i]][k] - simplex[order[0]][k];
                d2 += d * d;
            }
            diameter = std::max(diameter, std::sqrt(d2));
        }
        res.best_history.push_back(fv[order[0]]);
        if (diameter < options.diameter_tolerance) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[order[i]][k] / static_cast<double>(n);
        }
        const std::size_t worst = order[n];
        const double f_best = fv[order[0]];
        const double f_second = fv[order[n - 1]];

        along(trial, 1.0);
        const double f_r = eval(trial);
        if (f_r < f_best) {
            along(trial2, 2.0);
            const double f_e = eval(trial2);
            if (f_e < f_r) {
                simplex[worst] = trial2;
                fv[worst] = f_e;
            } else {
                simplex[worst] = trial;
                fv[worst] = f_r;
            }
            continue;
        }
        if (f_r < f_second) {
            simplex[worst] = trial;
            fv[worst] = f_r;
            continue;
        }
        const bool outside = f_r < fv[worst];
        along(trial2, outside ? 0.5 : -0.5);
        const double f_c = eval(trial2);
        if (f_c < (outside ? f_r : fv[worst])) {
            simplex[worst] = trial2;
            fv[worst] = f_c;
            continue;
        }
        // shrink towards the best vertex
        const auto& b = simplex[order[0]];
        for (std::size_t i = 1; i <= n; ++i) {
            auto& v = simplex[order[i]];
            for (std::size_t k = 0; k < n; ++k) v[k] = b[k] + 0.5 * (v[k] - b[k]);
            fv[order[i]] = eval(v);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = simplex[best];
    res.value = fv[best];
    return res;
}

OptimizationResult optimize_conversion(const OptimizeOptions& options)
{
    validate(options);
    const Problem problem(options);
    const std::size_t dims = options.free.size();
    const std::size_t res = seed_resolution(options);

    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) total *= res;

    std::vector<double> seed_cost(total);
    auto grid_coords = [&](std::size_t flat) {
        std::vector<double> x(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            x[d] = axis_value(options.free[d], flat % res, res);
            flat /= res;
        }
        return x;
    };
    parallel_for(total, options.threads, [&](std::size_t i) { seed_cost[i] = problem.cost(grid_coords(i)); });

    std::vector<std::size_t> ranked(total);
    std::iota(ranked.begin(), ranked.end(), 0);
    const std::size_t seeds = std::min(options.refine_seeds, total);
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(seeds), ranked.end(),
                      [&](auto a, auto b) {
                          return seed_cost[a] < seed_cost[b] || (seed_cost[a] == seed_cost[b] && a < b);
                      });

    std::vector<double> step(dims);
    for (std::size_t d = 0; d < dims; ++d) step[d] = axis_step(options.free[d], res);

    NelderMeadOptions nm;
    nm.diameter_tolerance = options.simplex_tolerance;
    nm.max_iterations = options.max_iterations;
    const auto cost = [&](std::span<const double> x) { return problem.cost(x); };

    std::vector<NelderMeadResult> refined(seeds);
    parallel_for(seeds, options.threads, [&](std::size_t s) {
        auto r = nelder_mead(cost, grid_coords(ranked[s]), step, nm);
        // One restart from the converged point guards against a collapsed simplex.
        std::vector<double> small(step);
        for (auto& v : small) v *= 1e-3;
        auto again = nelder_mead(cost, r.x, small, nm);
        again.evaluations += r.evaluations;
        refined[s] = again.value <= r.value ? std::move(again) : std::move(r);
    });

    OptimizationResult out;
    out.seed_resolution = res;
    out.evaluations = total;
    std::vector<Candidate> cands;
    for (const auto& r : refined) {
        out.evaluations += r.evaluations;
        Candidate c;
        c.point = problem.point(r.x);
        // Probabilities can overshoot their range by a few ulps.
        const double lo = options.objective == Objective::Tc ? 0.0 : -1.0;
        c.value = std::clamp(options.sense == Sense::Maximize ? -r.value : r.value, lo, 1.0);
        cands.push_back(c);
    }
    const double sign = options.sense == Sense::Maximize ? 1.0 : -1.0;
    double best_value = cands.front().value;
    for (const auto& c : cands) best_value = sign > 0 ? std::max(best_value, c.value) : std::min(best_value, c.value);

    for (const auto& c : cands) {
        if (std::abs(c.value - best_value) > options.tie_tolerance) continue;
        const bool dup = std::any_of(out.ties.begin(), out.ties.end(), [&](const Candidate& t) {
            return wrapped_distance(options, t.point, c.point) < 1e-6;
        });
        if (!dup) out.ties.push_back(c);
    }
    // Deterministic order: smallest |Delta|, then smallest phi_+ in [0, 2 pi).
    std::sort(out.ties.begin(), out.ties.end(), [](const Candidate& a, const Candidate& b) {
        const double da = std::abs(a.point[idx(Param::Delta)]);
        const double db = std::abs(b.point[idx(Param::Delta)]);
        if (std::abs(da - db) > 1e-9) return da < db;
        return wrap_angle(a.point[idx(Param::PhiPlus)]) < wrap_angle(b.point[idx(Param::PhiPlus)]);
    });
    out.best = out.ties.front();
    out.bandwidth = robustness_bandwidth(options, out.best.point, out.best.value);
    return out;
}

}  // namespace gascatter
