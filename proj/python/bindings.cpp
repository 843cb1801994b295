#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ses/availability.hpp"
#include "ses/cli.hpp"
#include "ses/diagram.hpp"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"
#include "ses/interactions.hpp"
#include "ses/io.hpp"
#include "ses/partitioning.hpp"
#include "ses/verify.hpp"

namespace py = pybind11;
using namespace ses;

namespace {

using SpectrumPtr = std::shared_ptr<Spectrum>;

SpectrumPtr share(Spectrum s) { return std::make_shared<Spectrum>(std::move(s)); }

TruncationPolicy policy(std::optional<double> max_temperature, double tail_tolerance) {
  return {max_temperature, tail_tolerance};
}

double beta_value(const InverseTemperature& b) { return b.value; }

py::dict thermal_dict(const ThermalPoint& t) {
  py::dict d;
  d["b"] = t.b;
  d["lnQ"] = t.log_partition;
  d["E"] = t.energy;
  d["S"] = t.entropy;
  d["variance"] = t.variance;
  d["C"] = t.heat_capacity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stable-equilibrium state thermodynamics of discrete-level systems";
  py::register_exception<Error>(m, "SesError", PyExc_ValueError);

  py::class_<Spectrum, SpectrumPtr>(m, "Spectrum")
      .def_property_readonly("levels",
                             [](const Spectrum& s) {
                               std::vector<std::pair<double, double>> v;
                               for (const auto& l : s.levels()) v.emplace_back(l.energy, l.degeneracy);
                               return v;
                             })
      .def_property_readonly("label", &Spectrum::label)
      .def_property_readonly("bounded", &Spectrum::bounded)
      .def_property_readonly("ground_energy", &Spectrum::ground_energy)
      .def_property_readonly("top_energy", &Spectrum::top_energy)
      .def_property_readonly("tail_bound", &Spectrum::tail_bound)
      .def("__len__", &Spectrum::size)
      .def("to_json", [](const Spectrum& s) { return io::spectrum_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return share(io::spectrum_from_json(io::Json::parse(text))); })
      .def("__repr__", [](const Spectrum& s) {
        return "<Spectrum '" + s.label() + "' with " + std::to_string(s.size()) + " levels>";
      });

  m.def("build_finite",
        [](std::vector<std::pair<double, double>> levels, const std::string& label) {
          std::vector<Level> v;
          for (auto [e, g] : levels) v.push_back({e, g});
          return share(build_finite(std::move(v), label));
        },
        py::arg("levels"), py::arg("label") = "finite");
  m.def("build_oscillator",
        [](double hnu, std::optional<int> n_levels, std::optional<double> max_temperature, double tail_tolerance) {
          const TruncationPolicy p = policy(max_temperature, tail_tolerance);
          return share(n_levels ? build_oscillator(hnu, *n_levels, p) : build_oscillator_auto(hnu, p));
        },
        py::arg("hnu"), py::arg("n_levels") = py::none(), py::arg("max_temperature") = py::none(),
        py::arg("tail_tolerance") = kMaxTailBound);
  m.def("build_box",
        [](double mass, double volume, std::optional<int> max_q, std::optional<double> max_temperature,
           double tail_tolerance) {
          const TruncationPolicy p = policy(max_temperature, tail_tolerance);
          const BoxGeometry g = BoxGeometry::cube(mass, volume);
          const int q = max_q ? *max_q : box_direction_levels_for(mass, g.sides[0], {}, p);
          return share(build_box(g, q, {}, p));
        },
        py::arg("mass") = 1.0, py::arg("volume") = 1.0, py::arg("max_q") = py::none(),
        py::arg("max_temperature") = py::none(), py::arg("tail_tolerance") = kMaxTailBound);
  m.def("compose",
        [](const Spectrum& a, const Spectrum& b, double cutoff) { return share(compose(a, b, cutoff)); },
        py::arg("a"), py::arg("b"), py::arg("cutoff") = kInfinity);

  m.def("thermal_properties", [](const Spectrum& s, double b) { return thermal_dict(thermal_properties(s, b)); },
        py::arg("spectrum"), py::arg("b"));
  m.def("beta_of_energy", [](const Spectrum& s, double e) { return beta_value(beta_of_energy(s, e)); },
        py::arg("spectrum"), py::arg("energy"));
  m.def("ses_entropy_of_energy", [](const Spectrum& s, double e) { return ses_entropy_of_energy(s, e); },
        py::arg("spectrum"), py::arg("energy"));
  m.def("ses_energy_of_entropy",
        [](const Spectrum& s, double entropy, bool negative) {
          return ses_energy_of_entropy(s, entropy, negative ? Branch::negative : Branch::positive);
        },
        py::arg("spectrum"), py::arg("entropy"), py::arg("negative") = false);
  m.def("equilibrium_split",
        [](const Spectrum& a, const Spectrum& b, double total) {
          const EquilibriumSplit sp = equilibrium_split(a, b, total);
          return py::make_tuple(sp.energy_a, sp.energy_b, sp.b.value);
        },
        py::arg("a"), py::arg("b"), py::arg("energy"));

  py::class_<LevelDistribution>(m, "State")
      .def(py::init([](SpectrumPtr s, std::vector<double> probs) { return make_state(std::move(s), std::move(probs)); }),
           py::arg("spectrum"), py::arg("probs"))
      .def_readonly("probs", &LevelDistribution::probs)
      .def_property_readonly("energy", &state_energy)
      .def_property_readonly("entropy", &state_entropy)
      .def_property_readonly("variance", &state_variance)
      .def_property_readonly("disequilibrium",
                             [](const LevelDistribution& st) {
                               return observables(st, ses_entropy_oracle()).disequilibrium;
                             })
      .def("passive", &passive_sort)
      .def("ergotropy", &ergotropy)
      .def("adiabatic_availability", &adiabatic_availability)
      .def("available_energy",
           [](const LevelDistribution& st, double t) { return available_energy(st, Reservoir::thermal(t)); },
           py::arg("reservoir_temperature"));
  m.def("canonical_state", [](SpectrumPtr s, double b) { return canonical_state(std::move(s), b); },
        py::arg("spectrum"), py::arg("b"));

  m.def("transfer_bounds",
        [](double ta, double tb, double de, std::optional<double> ds, std::optional<double> pa,
           std::optional<double> pb, std::optional<double> mua, std::optional<double> mub, std::optional<double> dv,
           std::optional<double> dn) {
          const EndpointSES a{ta, pa, mua}, b{tb, pb, mub};
          ExchangeProposal prop{de, 0.0, dv, dn};
          prop.entropy = ds ? *ds : transfer_bounds(a, b, prop).lower;
          const TransferBounds t = transfer_bounds(a, b, prop);
          return py::make_tuple(t.lower, t.upper, t.admissible);
        },
        py::arg("ta"), py::arg("tb"), py::arg("de"), py::arg("ds") = py::none(), py::arg("pa") = py::none(),
        py::arg("pb") = py::none(), py::arg("mua") = py::none(), py::arg("mub") = py::none(),
        py::arg("dv") = py::none(), py::arg("dn") = py::none());
  m.def("heat_allowed",
        [](double ta, double tb, double de) { return clausius_direction({ta}, {tb}, de) == Direction::allowed; },
        py::arg("ta"), py::arg("tb"), py::arg("de"));
  m.def("max_work_interposed", [](double ta, double tb, double de) { return max_work_interposed({ta}, {tb}, de); },
        py::arg("ta"), py::arg("tb"), py::arg("de"));
  m.def("conduction_sigma",
        [](double q, double k, double t, double grad) {
          const ConductionSigma c = conduction_sigma(q, k, t, grad);
          return py::make_tuple(c.from_flux, c.from_gradient);
        },
        py::arg("heat_flux"), py::arg("conductivity"), py::arg("temperature"), py::arg("gradient"));

  m.def("ideal_gas_partitioning",
        [](int n, int lambda, double temperature, double volume) {
          const PartitionResult r = ideal_gas_partitioning({n, volume, temperature, lambda});
          return py::make_tuple(r.entropy_irr, r.min_work);
        },
        py::arg("n"), py::arg("lam"), py::arg("temperature"), py::arg("volume") = 1.0);

  m.def("ses_curve",
        [](const Spectrum& s, int points, bool negative) {
          std::vector<std::tuple<double, double, double>> v;
          for (const auto& p : ses_curve(s, points, negative).points) v.emplace_back(p.entropy, p.energy, p.b);
          return v;
        },
        py::arg("spectrum"), py::arg("points"), py::arg("negative") = false);

  m.def("verify",
        [](std::uint64_t seed, std::vector<std::string> suites) {
          const verify::Report r = verify::run(seed, {}, suites);
          return py::make_tuple(r.passed(), r.failed(), r.text());
        },
        py::arg("seed") = 0, py::arg("suites") = std::vector<std::string>{});
  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "ses");
          std::vector<const char*> argv;
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
