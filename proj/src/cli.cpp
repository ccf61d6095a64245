#include "gascatter/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "gascatter/analysis.hpp"
#include "gascatter/campaign.hpp"
#include "gascatter/config.hpp"
#include "gascatter/csv.hpp"
#include "gascatter/optimize.hpp"

namespace gascatter {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand that works on one system.
struct SystemFlags {
    std::string config_path;
    std::string figure;
    std::string regime;
    double phi_j{0}, phi_plus{0}, phi_minus{0}, theta{0}, tau_gamma{0}, coupling_ratio{0};
    double delta_min{0}, delta_max{0};
    long long points{0};
    CLI::Option* o_phi_j{};
    CLI::Option* o_phi_plus{};
    CLI::Option* o_phi_minus{};
    CLI::Option* o_theta{};
    CLI::Option* o_tau_gamma{};
    CLI::Option* o_ratio{};
    CLI::Option* o_dmin{};
    CLI::Option* o_dmax{};
    CLI::Option* o_points{};
    std::string output{"-"};

    void attach(CLI::App& app, bool with_output)
    {
        app.add_option("--config", config_path, "config file (key = value)");
        app.add_option("--figure", figure, "bundled figure preset (fig1a..fig5d)");
        app.add_option("--regime", regime, "exact or markov");
        o_phi_j = app.add_option("--phi-J", phi_j, "phi_J in units of pi");
        o_phi_plus = app.add_option("--phi-plus", phi_plus, "phi_+ in units of pi");
        o_phi_minus = app.add_option("--phi-minus", phi_minus, "phi_- in units of pi");
        o_theta = app.add_option("--theta", theta, "mixing angle in units of pi");
        o_tau_gamma = app.add_option("--tau-gamma", tau_gamma, "delay tau Gamma");
        o_ratio = app.add_option("--coupling-ratio", coupling_ratio, "|J2| / |J1|");
        o_dmin = app.add_option("--delta-min", delta_min, "grid start, units of Gamma");
        o_dmax = app.add_option("--delta-max", delta_max, "grid end, units of Gamma");
        o_points = app.add_option("--points", points, "grid points");
        if (with_output) app.add_option("-o,--output", output, "output path, - for stdout");
    }

    SystemConfig resolve() const
    {
        if (!config_path.empty() && !figure.empty()) {
            throw UsageError("--config and --figure are mutually exclusive");
        }
        SystemConfig cfg;
        cfg.phenom.theta = kPi / 2.0;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!figure.empty()) cfg = figure_preset(figure);
        if (!regime.empty()) cfg.regime = regime_from_string(regime);

        const std::pair<CLI::Option*, double PhenomConfig::*> overrides[] = {
            {o_phi_j, &PhenomConfig::phi_j},         {o_phi_plus, &PhenomConfig::phi_plus},
            {o_phi_minus, &PhenomConfig::phi_minus}, {o_theta, &PhenomConfig::theta},
        };
        for (const auto& [opt, member] : overrides) {
            if (opt->count() == 0) continue;
            if (cfg.mode == ConfigMode::Physical) {
                throw UsageError(opt->get_name() + " applies to phenomenological configs only");
            }
            cfg.phenom.*member = opt->as<double>() * kPi;
        }
        for (const auto& [opt, member] : {std::pair{o_tau_gamma, &PhenomConfig::tau_gamma},
                                          std::pair{o_ratio, &PhenomConfig::coupling_ratio}}) {
            if (opt->count() == 0) continue;
            if (cfg.mode == ConfigMode::Physical) {
                throw UsageError(opt->get_name() + " applies to phenomenological configs only");
            }
            cfg.phenom.*member = opt->as<double>();
        }
        if (o_dmin->count()) cfg.grid.delta_min = delta_min;
        if (o_dmax->count()) cfg.grid.delta_max = delta_max;
        if (o_points->count()) {
            if (points <= 0) throw UsageError("--points must be positive (empty grid)");
            cfg.grid.points = static_cast<std::size_t>(points);
        }
        cfg.validate();
        return cfg;
    }

    std::string source() const
    {
        if (!figure.empty()) return "figure " + figure;
        if (!config_path.empty()) return "file " + config_path;
        return "defaults";
    }
};

// Opens the output target; `-` writes to `out`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& out)
    {
        if (path == "-") {
            stream_ = &out;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw UsageError("cannot open output file '" + path + "'");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_{};
};

void require_open_channels(const SystemConfig& cfg, const DressedFrame& frame, const RatePhaseSet& rp,
                           std::span<const double> grid)
{
    for (double x : grid) {
        for (Channel ch : {Channel::Minus, Channel::Plus}) {
            if (!channel_open(frame, x * rp.Gamma, ch)) {
                throw ChannelClosed("channel " + std::string(to_string(ch)) + " is closed at Delta/Gamma = "
                                    + format_double(x) + " (omega_e = "
                                    + format_double(cfg.physical.omega_e) + ")");
            }
        }
    }
}

void emit_warnings(const SystemConfig& cfg, std::ostream& err)
{
    for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
}

RunManifest manifest_for(const std::string& command, const SystemConfig& cfg, const SystemFlags& flags)
{
    RunManifest m;
    m.command = command;
    m.config = cfg.canonical();
    m.extra.emplace_back("source", flags.source());
    return m;
}

int cmd_spectrum(const SystemFlags& flags, std::ostream& out, std::ostream& err)
{
    const SystemConfig cfg = flags.resolve();
    emit_warnings(cfg, err);
    const auto [frame, rp] = cfg.resolve();
    const auto grid = cfg.detuning_grid();
    require_open_channels(cfg, frame, rp, grid);
    const auto rows = sweep(rp, frame, cfg.regime, grid, thread_budget());
    Sink sink(flags.output, out);
    write_spectrum_csv(sink.get(), manifest_for("spectrum", cfg, flags), rows);
    return kExitOk;
}

int cmd_contrast(const SystemFlags& flags, const std::vector<double>& phi_plus_values, std::ostream& out,
                 std::ostream& err)
{
    SystemConfig cfg = flags.resolve();
    emit_warnings(cfg, err);
    const auto grid = cfg.detuning_grid();
    if (phi_plus_values.empty()) {
        const auto [frame, rp] = cfg.resolve();
        require_open_channels(cfg, frame, rp, grid);
        const auto rows = contrast_sweep(rp, frame, cfg.regime, grid, thread_budget());
        Sink sink(flags.output, out);
        write_contrast_csv(sink.get(), manifest_for("contrast", cfg, flags), rows);
        return kExitOk;
    }
    if (cfg.mode == ConfigMode::Physical) {
        throw UsageError("--phi-plus-values applies to phenomenological configs only");
    }
    std::vector<std::vector<SpectrumRow>> sweeps;
    std::string listed;
    for (double p : phi_plus_values) {
        SystemConfig c = cfg;
        c.phenom.phi_plus = p * kPi;
        const auto [frame, rp] = c.resolve();
        sweeps.push_back(contrast_sweep(rp, frame, c.regime, grid, thread_budget()));
        listed += (listed.empty() ? "" : " ") + format_double(p);
    }
    RunManifest m = manifest_for("contrast", cfg, flags);
    m.extra.emplace_back("phi_plus_values", listed);
    Sink sink(flags.output, out);
    write_contrast_scan_csv(sink.get(), m, phi_plus_values, sweeps);
    return kExitOk;
}

int cmd_bic(const SystemFlags& flags, double tolerance, std::ostream& out, std::ostream& err)
{
    const SystemConfig cfg = flags.resolve();
    emit_warnings(cfg, err);
    const auto [frame, rp] = cfg.resolve();
    Sink sink(flags.output, out);
    auto& os = sink.get();
    os << "phi_J/pi = " << format_double(rp.phi_j / kPi) << ", phi_+/pi = " << format_double(rp.phi_plus / kPi)
       << ", phi_-/pi = " << format_double(rp.phi_minus / kPi) << ", tau Gamma = "
       << format_double(rp.tau_gamma()) << '\n';
    const auto bics = locate_bics(rp, tolerance);
    if (bics.empty()) os << "no BIC lock satisfied\n";
    for (const auto& b : bics) os << b.describe() << '\n';

    if (rp.tau > 0.0) {
        const auto grid = cfg.detuning_grid();
        for (Channel ch : {Channel::Plus, Channel::Minus}) {
            const auto ds = suppression_detunings(rp, ch, grid.front(), grid.back(), tolerance);
            if (ds.empty()) continue;
            os << "retarded suppression of the " << to_string(ch) << " channel at Delta/Gamma =";
            for (double d : ds) os << ' ' << format_double(d);
            os << '\n';
        }
    }
    return kExitOk;
}

// --- optimize ----------------------------------------------------------------------

Param parse_param(std::string_view name)
{
    const auto p = param_from_string(name);
    if (!p) {
        throw UsageError("unknown parameter '" + std::string(name)
                         + "' (phi-plus, phi-minus, phi-J, delta, tau-gamma, theta)");
    }
    return *p;
}

double parse_value(std::string_view text)
{
    double v = 0.0;
    const char* first = text.data();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("'" + std::string(text) + "' is not a number");
    }
    return v;
}

// Angles and theta are given in units of pi on the command line.
double to_internal(Param p, double v) { return (is_angle(p) || p == Param::Theta) ? v * kPi : v; }
double to_display(Param p, double v) { return (is_angle(p) || p == Param::Theta) ? v / kPi : v; }

std::pair<std::string_view, std::string_view> split_once(std::string_view s, char sep, const char* what)
{
    const auto pos = s.find(sep);
    if (pos == std::string_view::npos) throw UsageError(std::string(what) + " expects '" + sep + "' in '" + std::string(s) + "'");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

// "target=[-]source[(+|-)offset]"
Tie parse_tie(std::string_view text)
{
    const auto [lhs, rhs_full] = split_once(text, '=', "--tie");
    Tie t;
    t.target = parse_param(lhs);
    std::string_view rhs = rhs_full;
    if (!rhs.empty() && rhs.front() == '-') {
        t.scale = -1.0;
        rhs.remove_prefix(1);
    }
    // parameter names contain '-', so only split at a sign followed by a digit or '.'
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = 1; i < rhs.size(); ++i) {
        if ((rhs[i] == '+' || rhs[i] == '-') && i + 1 < rhs.size()
            && (std::isdigit(static_cast<unsigned char>(rhs[i + 1])) || rhs[i + 1] == '.')) {
            cut = i;
            break;
        }
    }
    t.source = parse_param(rhs.substr(0, cut));
    if (cut != std::string_view::npos) t.offset = to_internal(t.target, parse_value(rhs.substr(cut)));
    return t;
}

struct OptimizeFlags {
    std::string objective{"Tc"};
    std::string sense{"max"};
    std::vector<std::string> locks, bounds, ties;
    std::size_t resolution{64};
    std::string csv;
};

int cmd_optimize(const SystemFlags& flags, const OptimizeFlags& of, std::ostream& out, std::ostream& err)
{
    const SystemConfig cfg = flags.resolve();
    emit_warnings(cfg, err);
    OptimizeOptions opt;
    if (of.objective == "Tc") {
        opt.objective = Objective::Tc;
    } else if (of.objective == "I2") {
        opt.objective = Objective::I2;
    } else {
        throw UsageError("--objective must be Tc or I2");
    }
    if (of.sense == "max") {
        opt.sense = Sense::Maximize;
    } else if (of.sense == "min") {
        opt.sense = Sense::Minimize;
    } else {
        throw UsageError("--sense must be max or min");
    }
    opt.regime = cfg.regime;
    const auto [frame, rp] = cfg.resolve();
    opt.base = cfg.mode == ConfigMode::Phenom ? cfg.phenom : induced_phenom(frame, rp);
    opt.resolution = of.resolution;
    opt.threads = thread_budget();

    const auto grid = cfg.detuning_grid();
    std::vector<bool> fixed(kParamCount, false);
    for (const auto& l : of.locks) {
        const auto [name, value] = split_once(l, '=', "--lock");
        const Param p = parse_param(name);
        const double v = to_internal(p, parse_value(value));
        switch (p) {
        case Param::PhiPlus: opt.base.phi_plus = v; break;
        case Param::PhiMinus: opt.base.phi_minus = v; break;
        case Param::PhiJ: opt.base.phi_j = v; break;
        case Param::Delta: opt.base_delta = v; break;
        case Param::TauGamma: opt.base.tau_gamma = v; break;
        case Param::Theta: opt.base.theta = v; break;
        }
        fixed[static_cast<std::size_t>(p)] = true;
    }
    for (const auto& t : of.ties) {
        opt.ties.push_back(parse_tie(t));
        fixed[static_cast<std::size_t>(opt.ties.back().target)] = true;
    }
    for (const auto& b : of.bounds) {
        const auto [name, range] = split_once(b, '=', "--bound");
        const auto [lo, hi] = split_once(range, ':', "--bound");
        const Param p = parse_param(name);
        if (fixed[static_cast<std::size_t>(p)]) throw UsageError(std::string(to_string(p)) + " is locked or tied");
        opt.free.push_back({p, to_internal(p, parse_value(lo)), to_internal(p, parse_value(hi))});
    }
    if (of.bounds.empty()) {
        for (Param p : {Param::PhiPlus, Param::PhiMinus, Param::PhiJ, Param::Delta}) {
            if (fixed[static_cast<std::size_t>(p)]) continue;
            if (p == Param::Delta) {
                opt.free.push_back({p, grid.front(), grid.back()});
            } else {
                opt.free.push_back({p, 0.0, kTwoPi});
            }
        }
    }

    const OptimizationResult res = optimize_conversion(opt);

    Sink sink(flags.output, out);
    auto& os = sink.get();
    os << "objective: " << of.objective << " (" << (opt.sense == Sense::Maximize ? "maximize" : "minimize")
       << "), regime: " << to_string(opt.regime) << '\n';
    for (const auto& b : opt.free) {
        os << "free: " << to_string(b.param) << " in [" << format_double(to_display(b.param, b.lo)) << ", "
           << format_double(to_display(b.param, b.hi)) << "]\n";
    }
    os << "seed grid: " << res.seed_resolution << " per axis; evaluations: " << res.evaluations << '\n';
    os << "best: " << format_double(res.best.value) << '\n';
    auto print_point = [&](const ParamPoint& pt) {
        for (std::size_t i = 0; i < kParamCount; ++i) {
            const auto p = static_cast<Param>(i);
            const double v = is_angle(p) ? wrap_angle(pt[i]) : pt[i];
            os << "  " << to_string(p) << (is_angle(p) || p == Param::Theta ? " / pi" : "") << " = "
               << format_double(to_display(p, v)) << '\n';
        }
    };
    print_point(res.best.point);
    os << "bandwidth (delta / Gamma with objective >= 0.9 best): " << format_double(res.bandwidth) << '\n';
    os << "ties within " << format_double(opt.tie_tolerance) << ": " << res.ties.size() << '\n';

    if (!of.csv.empty()) {
        std::ofstream f(of.csv, std::ios::binary);
        if (!f) throw UsageError("cannot open '" + of.csv + "'");
        RunManifest m = manifest_for("optimize", cfg, flags);
        m.extra.emplace_back("objective", of.objective);
        m.extra.emplace_back("sense", of.sense);
        m.write(f);
        f << "value,phi_plus_over_pi,phi_minus_over_pi,phi_J_over_pi,delta_over_gamma,tau_gamma,theta_over_pi\n";
        for (const auto& c : res.ties) {
            f << format_double(c.value);
            for (std::size_t i = 0; i < kParamCount; ++i) {
                const auto p = static_cast<Param>(i);
                const double v = is_angle(p) ? wrap_angle(c.point[i]) : c.point[i];
                f << ',' << format_double(to_display(p, v));
            }
            f << '\n';
        }
    }
    return kExitOk;
}

// --- verify ------------------------------------------------------------------------

struct VerifyFlags {
    long long points{10000};
    unsigned long long seed{7};
    std::string regime{"exact"};
    CLI::Option* o_tau{};
    double tau_gamma{0.0};
    CLI::Option* o_tol{};
    double tolerance{0.0};
    std::string output{"-"};
};

int cmd_verify(const VerifyFlags& vf, std::ostream& out)
{
    if (vf.points <= 0) throw UsageError("--points must be positive");
    CampaignOptions opt;
    opt.points = static_cast<std::size_t>(vf.points);
    opt.seed = vf.seed;
    opt.regime = regime_from_string(vf.regime);
    if (vf.o_tau->count()) opt.tau_gamma = vf.tau_gamma;
    if (vf.o_tol->count()) opt.tolerance = vf.tolerance;
    opt.threads = thread_budget();
    const CampaignReport rep = run_campaign(opt);
    Sink sink(vf.output, out);
    rep.write(sink.get());
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

unsigned thread_budget()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GASCATTER_THREADS")) {
        unsigned cap = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
        if (ec == std::errc{} && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
    }
    return n;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Single-photon scattering off a driven two-legged giant atom", "gascatter"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    SystemFlags spectrum_flags, contrast_flags, bic_flags, optimize_flags;
    auto* spectrum = app.add_subcommand("spectrum", "T, R, Tc for both directions over a detuning grid");
    spectrum_flags.attach(*spectrum, true);

    auto* contrast = app.add_subcommand("contrast", "conversion and transmission contrasts");
    contrast_flags.attach(*contrast, true);
    std::vector<double> phi_plus_values;
    contrast->add_option("--phi-plus-values", phi_plus_values, "phi_+ values (units of pi), one I2 column each")
        ->delimiter(',');

    auto* bic = app.add_subcommand("bic", "report satisfied bound-state phase locks");
    bic_flags.attach(*bic, true);
    double bic_tolerance = 1e-9;
    bic->add_option("--tolerance", bic_tolerance, "angular tolerance in radians");

    auto* optimize = app.add_subcommand("optimize", "search phase space for extremal Tc or I2");
    optimize_flags.attach(*optimize, true);
    OptimizeFlags of;
    optimize->add_option("--objective", of.objective, "Tc or I2");
    optimize->add_option("--sense", of.sense, "max or min");
    optimize->add_option("--lock", of.locks, "fix a parameter: name=value");
    optimize->add_option("--bound", of.bounds, "free a parameter: name=lo:hi");
    optimize->add_option("--tie", of.ties, "target=[-]source[+offset]");
    optimize->add_option("--resolution", of.resolution, "seed grid points per axis");
    optimize->add_option("--csv", of.csv, "write every tied optimum as CSV");

    auto* verify = app.add_subcommand("verify", "randomized closed-form versus real-space campaign");
    VerifyFlags vf;
    verify->add_option("--points", vf.points, "random parameter points");
    verify->add_option("--seed", vf.seed, "RNG seed");
    verify->add_option("--regime", vf.regime, "exact or markov");
    vf.o_tau = verify->add_option("--tau-gamma", vf.tau_gamma, "fixed tau Gamma for every point");
    vf.o_tol = verify->add_option("--tolerance", vf.tolerance, "max relative modulus error");
    verify->add_option("-o,--output", vf.output, "output path, - for stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*spectrum) return cmd_spectrum(spectrum_flags, out, err);
        if (*contrast) return cmd_contrast(contrast_flags, phi_plus_values, out, err);
        if (*bic) return cmd_bic(bic_flags, bic_tolerance, out, err);
        if (*optimize) return cmd_optimize(optimize_flags, of, out, err);
        if (*verify) return cmd_verify(vf, out);
    } catch (const ChannelClosed& e) {
        err << "error: " << e.what() << '\n';
        return kExitClosedChannel;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace gascatter
