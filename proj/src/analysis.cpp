#include "gascatter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gascatter {

namespace {

constexpr std::size_t kDefaultPoints = 2001;
constexpr double kMarkovWindow = 10.0;

void validate_grid(std::span<const double> grid)
{
    if (grid.empty()) throw std::invalid_argument("detuning grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("detuning grid is not finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("detuning grid is not strictly increasing");
        }
    }
}

bool locked(double angle, double target, double tol)
{
    return std::abs(angle_distance(angle, target)) <= tol;
}

bool equal_legs(const RatePhaseSet& rp)
{
    return std::abs(rp.leg_rate_1 - rp.leg_rate_2) <= 1e-12 * rp.Gamma;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t points)
{
    if (points == 0) throw std::invalid_argument("grid needs at least one point");
    if (points == 1) return {lo};
    if (!(hi > lo)) throw std::invalid_argument("grid upper bound must exceed lower bound");
    std::vector<double> g(points);
    const double m = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double di = static_cast<double>(i);
        g[i] = (lo * (m - di) + hi * di) / m;
    }
    return g;
}

std::vector<double> default_grid(const RatePhaseSet& rp, Regime regime)
{
    const double tg = rp.tau_gamma();
    if (regime == Regime::Exact && tg > 0.0) {
        const double half = 4.0 * kPi / tg;
        return uniform_grid(-half, half, kDefaultPoints);
    }
    return uniform_grid(-kMarkovWindow, kMarkovWindow, kDefaultPoints);
}

SpectrumRow evaluate_row(const RatePhaseSet& rp, const DressedFrame& frame, Regime regime,
                         double delta_over_gamma)
{
    SpectrumRow row;
    row.delta_over_gamma = delta_over_gamma;
    const double delta = delta_over_gamma * rp.Gamma;
    row.flags.closed_channel = !channel_open(frame, delta, Channel::Plus)
                               || !channel_open(frame, delta, Channel::Minus);

    const Incidence fwd{Direction::Forward, Channel::Minus, delta};
    const Incidence bwd{Direction::Backward, Channel::Minus, delta};
    const AmplitudeSet a = scattering_amplitudes(rp, frame, fwd, regime);
    const AmplitudeSet b = scattering_amplitudes(rp, frame, bwd, regime);
    row.T = a.T();
    row.R = a.R();
    row.Tc = a.Tc();
    row.T_b = b.T();
    row.R_b = b.R();
    row.Tc_b = b.Tc();
    row.I1 = row.T - row.T_b;
    row.I2 = row.Tc - row.Tc_b;
    row.flags.near_singular = a.near_singular || b.near_singular;
    return row;
}

std::vector<SpectrumRow> sweep(const RatePhaseSet& rp, const DressedFrame& frame, Regime regime,
                               std::span<const double> grid, unsigned threads)
{
    validate_grid(grid);
    std::vector<SpectrumRow> rows(grid.size());
    const std::size_t n = grid.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, n);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) rows[i] = evaluate_row(rp, frame, regime, grid[i]);
    };
    if (workers == 1) {
        work(0, n);
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work, w * n / workers, (w + 1) * n / workers);
    }
    return rows;
}

std::vector<SpectrumRow> contrast_sweep(const RatePhaseSet& rp, const DressedFrame& frame,
                                        Regime regime, std::span<const double> grid,
                                        unsigned threads)
{
    return sweep(rp, frame, regime, grid, threads);
}

// --- BIC -----------------------------------------------------------------------------

std::string BicReport::describe() const
{
    std::ostringstream os;
    os << (channel == Channel::Plus ? "positive" : "negative") << "-channel BIC (" << condition
       << "):";
    bool first = true;
    auto item = [&](const std::string& s) {
        os << (first ? " " : "; ") << s;
        first = false;
    };
    if (total_transmission) item("T=1 for all detunings");
    if (conversion_vanishes) item("Tc=0 for all detunings");
    if (total_reflection_at) {
        std::ostringstream r;
        r.precision(10);
        r << "R=1 at Delta/Gamma=" << *total_reflection_at;
        item(r.str());
    }
    return os.str();
}

std::vector<BicReport> locate_bics(const RatePhaseSet& rp, double angle_tolerance)
{
    std::vector<BicReport> out;
    if (!(rp.Gamma > 0.0) || !equal_legs(rp)) return out;

    const bool odd_j = locked(rp.phi_j, kPi, angle_tolerance);
    const bool even_j = locked(rp.phi_j, 0.0, angle_tolerance);
    if (!odd_j && !even_j) return out;

    // phi_J odd: lock at phi = 2m pi; phi_J even: at phi = (2m+1) pi.
    const double target = odd_j ? 0.0 : kPi;
    const std::string j_text = odd_j ? "phi_J=(2n+1)pi" : "phi_J=2n pi";
    const std::string n_text = odd_j ? "=2m pi" : "=(2m+1)pi";
    const bool plus_lock = locked(rp.phi_plus, target, angle_tolerance);
    const bool minus_lock = locked(rp.phi_minus, target, angle_tolerance);

    if (plus_lock) {
        BicReport r;
        r.channel = Channel::Plus;
        r.condition = j_text + ", phi_+" + n_text;
        r.conversion_vanishes = true;
        r.total_transmission = minus_lock;
        // With the + channel dark, R = 1 where the real part of the denominator
        // vanishes: Delta = -+ Gamma_- sin(phi_-).
        const double sin_m = std::sin(rp.phi_minus);
        if (!minus_lock && rp.Gamma_minus > 0.0) {
            const double sign = odd_j ? -1.0 : 1.0;
            r.total_reflection_at = sign * rp.Gamma_minus * sin_m / rp.Gamma;
        }
        out.push_back(r);
    }
    if (minus_lock) {
        BicReport r;
        r.channel = Channel::Minus;
        r.condition = j_text + ", phi_-" + n_text;
        r.conversion_vanishes = true;
        r.total_transmission = true;
        out.push_back(r);
    }
    return out;
}

std::vector<double> suppression_detunings(const RatePhaseSet& rp, Channel channel, double lo,
                                          double hi, double angle_tolerance)
{
    std::vector<double> out;
    if (!(rp.tau > 0.0) || !equal_legs(rp)) return out;
    const bool odd_j = locked(rp.phi_j, kPi, angle_tolerance);
    const bool even_j = locked(rp.phi_j, 0.0, angle_tolerance);
    if (!odd_j && !even_j) return out;

    const double offset = odd_j ? 0.0 : kPi;
    const double phase = channel == Channel::Plus ? rp.phi_plus : rp.phi_minus;
    // Delta tau + phase = offset + 2 m pi
    const double tg = rp.tau_gamma();
    const double m_lo = std::ceil((lo * tg + phase - offset) / kTwoPi);
    const double m_hi = std::floor((hi * tg + phase - offset) / kTwoPi);
    for (double m = m_lo; m <= m_hi; m += 1.0) {
        out.push_back((offset + kTwoPi * m - phase) / tg);
    }
    return out;
}

}  // namespace gascatter
