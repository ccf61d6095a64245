#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

#include "gascatter/analysis.hpp"
#include "gascatter/campaign.hpp"
#include "gascatter/cli.hpp"
#include "gascatter/config.hpp"
#include "gascatter/csv.hpp"
#include "gascatter/optimize.hpp"

namespace py = pybind11;
using namespace gascatter;

namespace {

using AnyConfig = std::variant<SystemConfig, PhenomConfig, PhysicalConfig>;

struct Resolved {
    DressedFrame frame;
    RatePhaseSet rates;
    Regime regime;
    std::vector<double> grid;
};

Resolved resolve(const AnyConfig& any, std::optional<Regime> regime, std::optional<std::vector<double>> grid)
{
    SystemConfig cfg;
    if (const auto* s = std::get_if<SystemConfig>(&any)) {
        cfg = *s;
    } else if (const auto* p = std::get_if<PhenomConfig>(&any)) {
        cfg.phenom = *p;
    } else {
        cfg.mode = ConfigMode::Physical;
        cfg.physical = std::get<PhysicalConfig>(any);
    }
    if (regime) cfg.regime = *regime;
    auto [frame, rates] = cfg.resolve();
    return {frame, rates, cfg.regime, grid ? std::move(*grid) : cfg.detuning_grid()};
}

template <class F>
py::array_t<double> column(const std::vector<SpectrumRow>& rows, F f)
{
    py::array_t<double> a(static_cast<py::ssize_t>(rows.size()));
    auto m = a.mutable_unchecked<1>();
    for (std::size_t i = 0; i < rows.size(); ++i) m(static_cast<py::ssize_t>(i)) = f(rows[i]);
    return a;
}

py::dict spectrum(const AnyConfig& cfg, std::optional<Regime> regime, std::optional<std::vector<double>> grid,
                  unsigned threads)
{
    const auto r = resolve(cfg, regime, std::move(grid));
    const auto rows = sweep(r.rates, r.frame, r.regime, r.grid, threads);
    py::dict d;
    d["delta_over_gamma"] = column(rows, [](const SpectrumRow& x) { return x.delta_over_gamma; });
    for (Coefficient c : {Coefficient::T, Coefficient::R, Coefficient::Tc, Coefficient::T_b, Coefficient::R_b,
                          Coefficient::Tc_b, Coefficient::I1, Coefficient::I2}) {
        d[to_string(c)] = column(rows, [c](const SpectrumRow& x) { return coefficient_value(x, c); });
    }
    py::array_t<bool> flagged(static_cast<py::ssize_t>(rows.size()));
    auto m = flagged.mutable_unchecked<1>();
    for (std::size_t i = 0; i < rows.size(); ++i) m(static_cast<py::ssize_t>(i)) = rows[i].flags.any();
    d["flagged"] = flagged;
    return d;
}

py::dict amplitudes(const AnyConfig& cfg, double delta_over_gamma, Direction direction, Channel channel,
                    std::optional<Regime> regime)
{
    const auto r = resolve(cfg, regime, std::vector<double>{});
    const auto a = scattering_amplitudes(r.rates, r.frame, {direction, channel, delta_over_gamma * r.rates.Gamma},
                                         r.regime);
    py::dict d;
    d["t"] = a.t;
    d["r"] = a.r;
    d["t_conv"] = a.t_conv;
    d["r_conv"] = a.r_conv;
    d["T"] = a.T();
    d["R"] = a.R();
    d["Tc"] = a.Tc();
    d["near_singular"] = a.near_singular;
    return d;
}

std::vector<std::string> bics(const AnyConfig& cfg, double tolerance)
{
    const auto r = resolve(cfg, std::nullopt, std::vector<double>{});
    std::vector<std::string> out;
    for (const auto& b : locate_bics(r.rates, tolerance)) out.push_back(b.describe());
    return out;
}

py::list feature_list(const std::vector<Feature>& fs)
{
    py::list out;
    for (const auto& f : fs) {
        py::dict d;
        d["location"] = f.location;
        d["value"] = f.value;
        d["prominence"] = f.prominence;
        d["width"] = f.width;
        out.append(d);
    }
    return out;
}

py::dict features(const AnyConfig& cfg, const std::string& coefficient, std::optional<Regime> regime,
                  std::optional<std::vector<double>> grid, double min_prominence)
{
    const auto c = coefficient_from_string(coefficient);
    if (!c) throw py::value_error("unknown coefficient '" + coefficient + "'");
    const auto r = resolve(cfg, regime, std::move(grid));
    const auto fs = extract_features(sweep(r.rates, r.frame, r.regime, r.grid), *c, min_prominence);
    py::dict d;
    d["peaks"] = feature_list(fs.peaks);
    d["dips"] = feature_list(fs.dips);
    return d;
}

Param param(const std::string& name)
{
    const auto p = param_from_string(name);
    if (!p) throw py::value_error("unknown parameter '" + name + "'");
    return *p;
}

py::dict point_dict(const ParamPoint& p)
{
    py::dict d;
    for (std::size_t i = 0; i < kParamCount; ++i) d[to_string(static_cast<Param>(i))] = p[i];
    return d;
}

py::dict optimize(Objective objective, Sense sense, Regime regime, const PhenomConfig& base,
                  std::optional<std::map<std::string, std::pair<double, double>>> free,
                  const std::vector<std::tuple<std::string, std::string, double, double>>& ties, double base_delta,
                  std::size_t resolution, unsigned threads)
{
    OptimizeOptions o;
    o.objective = objective;
    o.sense = sense;
    o.regime = regime;
    o.base = base;
    o.base_delta = base_delta;
    o.resolution = resolution;
    o.threads = threads;
    for (const auto& [target, source, scale, offset] : ties) o.ties.push_back({param(target), param(source), scale, offset});
    if (free) {
        for (const auto& [name, box] : *free) o.free.push_back({param(name), box.first, box.second});
    } else {
        for (Param p : {Param::PhiPlus, Param::PhiMinus, Param::PhiJ}) {
            const bool tied = std::any_of(o.ties.begin(), o.ties.end(), [p](const Tie& t) { return t.target == p; });
            if (!tied) o.free.push_back({p, 0.0, kTwoPi});
        }
        o.free.push_back({Param::Delta, -10.0, 10.0});
    }
    const auto r = optimize_conversion(o);
    py::list all;
    for (const auto& c : r.ties) {
        py::dict d;
        d["value"] = c.value;
        d["point"] = point_dict(c.point);
        all.append(d);
    }
    py::dict d;
    d["value"] = r.best.value;
    d["point"] = point_dict(r.best.point);
    d["ties"] = all;
    d["bandwidth"] = r.bandwidth;
    d["seed_resolution"] = r.seed_resolution;
    d["evaluations"] = r.evaluations;
    return d;
}

py::dict verify(std::size_t points, std::uint64_t seed, Regime regime, std::optional<double> tau_gamma,
                std::optional<double> tolerance, unsigned threads)
{
    CampaignOptions o;
    o.points = points;
    o.seed = seed;
    o.regime = regime;
    o.tau_gamma = tau_gamma;
    o.tolerance = tolerance;
    o.threads = threads;
    CampaignReport r;
    {
        py::gil_scoped_release release;
        r = run_campaign(o);
    }
    std::ostringstream text;
    r.write(text);
    py::dict d;
    d["pass"] = r.pass;
    d["max_error"] = r.max_error();
    d["comparisons"] = r.comparisons;
    d["excluded"] = r.excluded;
    d["report"] = text.str();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Two-level giant-atom scattering engine";
    m.attr("__version__") = tool_version();

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ChannelClosed>(m, "ChannelClosed", PyExc_RuntimeError);

    py::enum_<Regime>(m, "Regime").value("Exact", Regime::Exact).value("Markovian", Regime::Markovian);
    py::enum_<Direction>(m, "Direction").value("Forward", Direction::Forward).value("Backward", Direction::Backward);
    py::enum_<Channel>(m, "Channel").value("Plus", Channel::Plus).value("Minus", Channel::Minus);
    py::enum_<Objective>(m, "Objective").value("Tc", Objective::Tc).value("I2", Objective::I2);
    py::enum_<Sense>(m, "Sense").value("Maximize", Sense::Maximize).value("Minimize", Sense::Minimize);
    py::enum_<Coefficient>(m, "Coefficient")
        .value("T", Coefficient::T)
        .value("R", Coefficient::R)
        .value("Tc", Coefficient::Tc)
        .value("T_b", Coefficient::T_b)
        .value("R_b", Coefficient::R_b)
        .value("Tc_b", Coefficient::Tc_b)
        .value("I1", Coefficient::I1)
        .value("I2", Coefficient::I2);

    py::class_<PhenomConfig>(m, "PhenomConfig")
        .def(py::init([](double gamma, double theta, double phi_plus, double phi_minus, double phi_j,
                         double tau_gamma, double coupling_ratio) {
                 return PhenomConfig{gamma, theta, phi_plus, phi_minus, phi_j, tau_gamma, coupling_ratio};
             }),
             py::kw_only(), py::arg("gamma_total") = 1.0, py::arg("theta") = kPi / 2, py::arg("phi_plus") = 0.0,
             py::arg("phi_minus") = 0.0, py::arg("phi_j") = 0.0, py::arg("tau_gamma") = 0.0,
             py::arg("coupling_ratio") = 1.0)
        .def_readwrite("gamma_total", &PhenomConfig::gamma_total)
        .def_readwrite("theta", &PhenomConfig::theta)
        .def_readwrite("phi_plus", &PhenomConfig::phi_plus)
        .def_readwrite("phi_minus", &PhenomConfig::phi_minus)
        .def_readwrite("phi_j", &PhenomConfig::phi_j)
        .def_readwrite("tau_gamma", &PhenomConfig::tau_gamma)
        .def_readwrite("coupling_ratio", &PhenomConfig::coupling_ratio)
        .def("rates", [](const PhenomConfig& c) { return phenom_to_rateset(c).second; });

    py::class_<PhysicalConfig>(m, "PhysicalConfig")
        .def(py::init<>())
        .def_readwrite("omega_e", &PhysicalConfig::omega_e)
        .def_readwrite("omega_f", &PhysicalConfig::omega_f)
        .def_readwrite("omega_d", &PhysicalConfig::omega_d)
        .def_readwrite("rabi", &PhysicalConfig::rabi)
        .def_readwrite("j1_mag", &PhysicalConfig::j1_mag)
        .def_readwrite("j1_phase", &PhysicalConfig::j1_phase)
        .def_readwrite("j2_mag", &PhysicalConfig::j2_mag)
        .def_readwrite("j2_phase", &PhysicalConfig::j2_phase)
        .def_readwrite("separation", &PhysicalConfig::separation)
        .def_readwrite("velocity", &PhysicalConfig::velocity)
        .def("warnings", &PhysicalConfig::warnings);

    py::class_<RatePhaseSet>(m, "RatePhaseSet")
        .def_readonly("Gamma", &RatePhaseSet::Gamma)
        .def_readonly("gamma", &RatePhaseSet::gamma)
        .def_readonly("Gamma_plus", &RatePhaseSet::Gamma_plus)
        .def_readonly("Gamma_minus", &RatePhaseSet::Gamma_minus)
        .def_readonly("gamma_plus", &RatePhaseSet::gamma_plus)
        .def_readonly("gamma_minus", &RatePhaseSet::gamma_minus)
        .def_readonly("tau", &RatePhaseSet::tau)
        .def_readonly("phi_plus", &RatePhaseSet::phi_plus)
        .def_readonly("phi_minus", &RatePhaseSet::phi_minus)
        .def_readonly("phi_j", &RatePhaseSet::phi_j)
        .def_property_readonly("tau_gamma", &RatePhaseSet::tau_gamma);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def_readwrite("regime", &SystemConfig::regime)
        .def_readwrite("phenom", &SystemConfig::phenom)
        .def_readwrite("physical", &SystemConfig::physical)
        .def_property_readonly("is_physical", [](const SystemConfig& c) { return c.mode == ConfigMode::Physical; })
        .def("rates", [](const SystemConfig& c) { return c.resolve().second; })
        .def("detuning_grid", &SystemConfig::detuning_grid)
        .def("warnings", &SystemConfig::warnings)
        .def("canonical", &SystemConfig::canonical);

    m.def("preset", [](const std::string& name) { return figure_preset(name); }, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("load_config", &load_config, py::arg("path"));
    m.def(
        "parse_config",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_config(in, "<string>");
        },
        py::arg("text"));

    m.def("spectrum", &spectrum, py::arg("config"), py::arg("regime") = py::none(), py::arg("grid") = py::none(),
          py::arg("threads") = 1u, "All coefficients over a detuning grid (units of Gamma).");
    m.def("amplitudes", &amplitudes, py::arg("config"), py::arg("delta_over_gamma"),
          py::arg("direction") = Direction::Forward, py::arg("channel") = Channel::Minus,
          py::arg("regime") = py::none());
    m.def("bics", &bics, py::arg("config"), py::arg("tolerance") = 1e-9);
    m.def("features", &features, py::arg("config"), py::arg("coefficient"), py::arg("regime") = py::none(),
          py::arg("grid") = py::none(), py::arg("min_prominence") = kDefaultProminence);
    m.def("optimize", &optimize, py::arg("objective") = Objective::Tc, py::arg("sense") = Sense::Maximize,
          py::arg("regime") = Regime::Markovian, py::arg("base") = PhenomConfig{1.0, kPi / 2},
          py::arg("free") = py::none(), py::arg("ties") = std::vector<std::tuple<std::string, std::string, double, double>>{},
          py::arg("base_delta") = 0.0, py::arg("resolution") = 64, py::arg("threads") = 1u,
          "Angles in radians, Delta in units of Gamma. `free` maps parameter names to (lo, hi).");
    m.def("verify", &verify, py::arg("points") = 10000, py::arg("seed") = 7, py::arg("regime") = Regime::Exact,
          py::arg("tau_gamma") = py::none(), py::arg("tolerance") = py::none(), py::arg("threads") = 1u);
    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "gascatter");
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
