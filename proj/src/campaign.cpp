#include "gascatter/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "gascatter/csv.hpp"
#include "gascatter/oracle.hpp"

namespace gascatter {

namespace {

struct PointResult {
    std::size_t comparisons{0};
    std::size_t excluded{0};
    std::array<double, 4> modulus{};
    std::array<double, 4> phase{};
    double unitarity{0.0};
    double residual{0.0};
    double condition{0.0};
};

// Uniform draw from [lo, hi) using the top 53 bits, independent of the
// standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

PointResult evaluate(const CampaignPoint& p, Regime regime, double modulus_floor, double max_condition)
{
    PointResult out;
    const auto [frame, rp] = phenom_to_rateset(p.config);
    const double delta = p.delta_over_gamma * rp.Gamma;
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        for (Channel ch : {Channel::Minus, Channel::Plus}) {
            const Incidence inc{dir, ch, delta};
            const OracleSolution sol = solve_real_space(rp, frame, inc);
            if (sol.singular || sol.condition_number > max_condition) {
                ++out.excluded;
                continue;
            }
            const AmplitudeSet closed = scattering_amplitudes(rp, frame, inc, regime);
            const ComparisonReport rep = compare(closed, sol, 1.0, modulus_floor);
            ++out.comparisons;
            for (std::size_t i = 0; i < 4; ++i) {
                out.modulus[i] = std::max(out.modulus[i], rep.modulus_error[i]);
                out.phase[i] = std::max(out.phase[i], rep.phase_error[i]);
            }
            const auto& a = sol.amplitudes;
            out.unitarity = std::max(out.unitarity, std::abs(a.T() + a.R() + a.Tc() - 1.0));
            out.residual = std::max(out.residual, sol.residual);
            out.condition = std::max(out.condition, sol.condition_number);
        }
    }
    return out;
}

}  // namespace

double CampaignReport::max_error() const
{
    return *std::max_element(max_modulus_error.begin(), max_modulus_error.end());
}

void CampaignReport::write(std::ostream& out) const
{
    static constexpr const char* names[4] = {"t", "r", "t_conv", "r_conv"};
    out << "oracle equivalence campaign\n";
    out << "seed: " << seed << '\n';
    out << "regime: " << to_string(regime) << '\n';
    out << "tau_gamma: " << (tau_gamma ? format_double(*tau_gamma) : std::string("random in [0, 4 pi]"))
        << '\n';
    out << "points: " << points << '\n';
    out << "comparisons: " << comparisons << " (2 directions x 2 incident channels per point)\n";
    out << "excluded (condition > 1e10): " << excluded << '\n';
    out << "modulus floor: " << format_double(modulus_floor) << '\n';
    for (std::size_t i = 0; i < 4; ++i) {
        out << "max modulus error " << names[i] << ": " << format_double(max_modulus_error[i]) << '\n';
    }
    for (std::size_t i = 0; i < 4; ++i) {
        out << "max phase error " << names[i] << ": " << format_double(max_phase_error[i]) << '\n';
    }
    out << "max oracle |T+R+Tc-1|: " << format_double(max_oracle_unitarity) << '\n';
    out << "max oracle residual: " << format_double(max_residual) << '\n';
    out << "max condition number: " << format_double(max_condition) << '\n';
    out << "tolerance: " << format_double(tolerance) << '\n';
    out << "result: " << (pass ? "PASS" : "FAIL") << '\n';
}

std::vector<CampaignPoint> campaign_points(const CampaignOptions& options)
{
    if (options.tau_gamma && !(*options.tau_gamma >= 0.0)) {
        throw std::invalid_argument("campaign: tau_gamma must be >= 0");
    }
    std::mt19937_64 rng(options.seed);
    std::vector<CampaignPoint> pts(options.points);
    for (auto& p : pts) {
        auto& c = p.config;
        c.gamma_total = uniform(rng, 0.5, 2.0);
        c.theta = uniform(rng, 0.0, kPi);
        c.phi_plus = uniform(rng, 0.0, kTwoPi);
        c.phi_minus = uniform(rng, 0.0, kTwoPi);
        c.phi_j = uniform(rng, 0.0, kTwoPi);
        const double tg = uniform(rng, 0.0, 4.0 * kPi);
        c.tau_gamma = options.tau_gamma.value_or(tg);
        c.coupling_ratio = std::exp(uniform(rng, std::log(0.25), std::log(4.0)));
        p.delta_over_gamma = uniform(rng, -10.0, 10.0);
    }
    return pts;
}

CampaignReport run_campaign(const CampaignOptions& options)
{
    if (options.points == 0) throw std::invalid_argument("campaign: points must be >= 1");
    const auto pts = campaign_points(options);

    CampaignReport rep;
    rep.seed = options.seed;
    rep.regime = options.regime;
    rep.tau_gamma = options.tau_gamma;
    rep.points = pts.size();
    const bool exact = options.regime == Regime::Exact;
    rep.tolerance = options.tolerance.value_or(exact ? 1e-9 : 1e-4);
    // Markovian amplitudes are an approximation; their error is measured against
    // the unit incident amplitude rather than each (possibly tiny) output.
    rep.modulus_floor = exact ? kModulusFloor : 1.0;

    std::vector<PointResult> results(pts.size());
    const std::size_t n = pts.size();
    const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = evaluate(pts[i], options.regime, rep.modulus_floor, options.max_condition);
        }
    };
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w * n / workers, (w + 1) * n / workers);
    }

    for (const auto& r : results) {
        rep.comparisons += r.comparisons;
        rep.excluded += r.excluded;
        for (std::size_t i = 0; i < 4; ++i) {
            rep.max_modulus_error[i] = std::max(rep.max_modulus_error[i], r.modulus[i]);
            rep.max_phase_error[i] = std::max(rep.max_phase_error[i], r.phase[i]);
        }
        rep.max_oracle_unitarity = std::max(rep.max_oracle_unitarity, r.unitarity);
        rep.max_residual = std::max(rep.max_residual, r.residual);
        rep.max_condition = std::max(rep.max_condition, r.condition);
    }
    rep.pass = rep.comparisons > 0 && rep.max_error() <= rep.tolerance;
    return rep;
}

}  // namespace gascatter
