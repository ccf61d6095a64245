#include "gascatter/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gascatter {

namespace {

using Matrix9 = Eigen::Matrix<cplx, 9, 9>;
using Vector9 = Eigen::Matrix<cplx, 9, 1>;

constexpr int kAtom = 8;
constexpr double kSingularCondition = 1e13;

int channel_index(Channel c) { return c == Channel::Plus ? 0 : 1; }

// Unknown slot for a chiral amplitude, or -1 if the amplitude is fixed by the
// boundary conditions (incoming from infinity).
int slot(int ch, Region region, bool right)
{
    const int base = 4 * ch;
    if (right) {
        if (region == Region::Middle) return base + 0;
        if (region == Region::Right) return base + 1;
        return -1;
    }
    if (region == Region::Left) return base + 2;
    if (region == Region::Middle) return base + 3;
    return -1;
}

// Coupling of leg j to channel ch in rate units, with the bare coupling phases
// read from the frame.
cplx leg_coupling(const RatePhaseSet& rp, const DressedFrame& frame, int leg, int ch)
{
    const double rate = leg == 0 ? rp.leg_rate_1 : rp.leg_rate_2;
    const cplx js = leg == 0 ? frame.j1s : frame.j2s;
    const cplx jc = leg == 0 ? frame.j1c : frame.j2c;
    const cplx bare = std::abs(js) >= std::abs(jc) ? js : jc;
    const double phase = std::abs(bare) > 0.0 ? std::arg(bare) : 0.0;
    const double weight = ch == 0 ? frame.sin_half() : -frame.cos_half();
    return std::polar(std::sqrt(rate) * weight, phase);
}

struct Leg {
    double position;  // units of d
    Region below;
    Region above;
};

constexpr std::array<Leg, 2> kLegs{{{0.5, Region::Middle, Region::Right},
                                    {-0.5, Region::Left, Region::Middle}}};

}  // namespace

const ChiralField& OracleSolution::field(Channel c, Region r) const
{
    return fields[static_cast<std::size_t>(channel_index(c))][static_cast<std::size_t>(r)];
}

OracleSolution solve_real_space(const RatePhaseSet& rp, const DressedFrame& frame,
                                const Incidence& inc)
{
    for (Channel c : {Channel::Plus, Channel::Minus}) {
        if (!channel_open(frame, inc.detuning, c)) {
            throw ChannelClosed(std::string("oracle: channel ") + to_string(c) + " is closed");
        }
    }

    const int incident_ch = channel_index(inc.channel);
    const bool from_left = inc.direction == Direction::Forward;
    // Phase k_l d accumulated across the legs in channel l.
    const std::array<double, 2> kd{inc.detuning * rp.tau + rp.phi_plus,
                                   inc.detuning * rp.tau + rp.phi_minus};

    // Value of a fixed (incoming) amplitude.
    auto fixed = [&](int ch, Region region, bool right) -> cplx {
        if (ch != incident_ch) return 0.0;
        if (right && region == Region::Left && from_left) return 1.0;
        if (!right && region == Region::Right && !from_left) return 1.0;
        return 0.0;
    };

    Matrix9 a = Matrix9::Zero();
    Vector9 b = Vector9::Zero();
    a(kAtom, kAtom) = inc.detuning;

    // Adds coef * amplitude(ch, region, right) to row `row`, moving fixed
    // amplitudes to the right-hand side.
    auto add = [&](int row, int ch, Region region, bool right, cplx coef) {
        const int col = slot(ch, region, right);
        if (col >= 0) {
            a(row, col) += coef;
        } else {
            b(row) -= coef * fixed(ch, region, right);
        }
    };

    int row = 0;
    for (int ch = 0; ch < 2; ++ch) {
        for (std::size_t leg = 0; leg < kLegs.size(); ++leg) {
            const Leg& L = kLegs[leg];
            const cplx g = leg_coupling(rp, frame, static_cast<int>(leg), ch);
            const cplx ep = std::polar(1.0, kd[ch] * L.position);
            const cplx em = std::conj(ep);
            const cplx I(0.0, 1.0);

            // right-mover: psi(x+) - psi(x-) = -i g u
            add(row, ch, L.above, true, ep);
            add(row, ch, L.below, true, -ep);
            a(row, kAtom) += I * g;
            ++row;
            // left-mover: psi(x+) - psi(x-) = +i g u
            add(row, ch, L.above, false, em);
            add(row, ch, L.below, false, -em);
            a(row, kAtom) -= I * g;
            ++row;
            // atom: Delta u = sum g^* <psi>(x_j), <.> the half-sum across the leg
            const cplx gc = std::conj(g);
            add(kAtom, ch, L.below, true, -0.5 * gc * ep);
            add(kAtom, ch, L.above, true, -0.5 * gc * ep);
            add(kAtom, ch, L.below, false, -0.5 * gc * em);
            add(kAtom, ch, L.above, false, -0.5 * gc * em);
        }
    }

    OracleSolution sol;
    Eigen::JacobiSVD<Matrix9> svd(a);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.maxCoeff();
    const double smin = sv.minCoeff();
    sol.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    sol.singular = !(sol.condition_number < kSingularCondition);

    const Vector9 x = a.fullPivLu().solve(b);
    const double scale = smax * x.norm() + b.norm();
    sol.residual = scale > 0.0 ? (a * x - b).norm() / scale : 0.0;

    for (int ch = 0; ch < 2; ++ch) {
        for (Region region : {Region::Left, Region::Middle, Region::Right}) {
            auto& f = sol.fields[static_cast<std::size_t>(ch)][static_cast<std::size_t>(region)];
            const int rs = slot(ch, region, true);
            const int ls = slot(ch, region, false);
            f.right = rs >= 0 ? x(rs) : fixed(ch, region, true);
            f.left = ls >= 0 ? x(ls) : fixed(ch, region, false);
        }
    }
    sol.atomic = x(kAtom);

    const Channel conv = other(inc.channel);
    if (from_left) {
        sol.amplitudes.t = sol.field(inc.channel, Region::Right).right;
        sol.amplitudes.r = sol.field(inc.channel, Region::Left).left;
        sol.amplitudes.t_conv = sol.field(conv, Region::Right).right;
        sol.amplitudes.r_conv = sol.field(conv, Region::Left).left;
    } else {
        sol.amplitudes.t = sol.field(inc.channel, Region::Left).left;
        sol.amplitudes.r = sol.field(inc.channel, Region::Right).right;
        sol.amplitudes.t_conv = sol.field(conv, Region::Left).left;
        sol.amplitudes.r_conv = sol.field(conv, Region::Right).right;
    }
    sol.amplitudes.near_singular = sol.singular;
    return sol;
}

ComparisonReport compare(const AmplitudeSet& closed_form, const OracleSolution& oracle,
                         double tolerance, double modulus_floor)
{
    const std::array<cplx, 4> lhs{closed_form.t, closed_form.r, closed_form.t_conv,
                                  closed_form.r_conv};
    const auto& o = oracle.amplitudes;
    const std::array<cplx, 4> rhs{o.t, o.r, o.t_conv, o.r_conv};

    ComparisonReport rep;
    rep.tolerance = tolerance;

    // The unit factor minimizing sum |lhs - w rhs|^2 is the phase of sum conj(rhs) lhs.
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(rhs[i]) * lhs[i];
    rep.alignment = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0, 0.0);

    for (std::size_t i = 0; i < 4; ++i) {
        const double ref = std::max(std::abs(rhs[i]), modulus_floor);
        rep.modulus_error[i] = std::abs(std::abs(lhs[i]) - std::abs(rhs[i])) / ref;
        const cplx aligned = rep.alignment * rhs[i];
        rep.phase_error[i] = (std::abs(lhs[i]) > modulus_floor && std::abs(aligned) > modulus_floor)
                                 ? std::abs(std::arg(lhs[i] / aligned))
                                 : 0.0;
        rep.max_modulus_error = std::max(rep.max_modulus_error, rep.modulus_error[i]);
        rep.max_phase_error = std::max(rep.max_phase_error, rep.phase_error[i]);
    }
    rep.pass = rep.max_modulus_error <= tolerance;
    return rep;
}

}  // namespace gascatter
