#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fplab/audits.hpp"
#include "fplab/commutators.hpp"
#include "fplab/experiments.hpp"
#include "fplab/norms.hpp"
#include "fplab/sde.hpp"

namespace py = pybind11;
using namespace fplab;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<py::ssize_t> shape(g.dim(), g.n());
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

ScalarField from_numpy(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (static_cast<std::size_t>(a.size()) != g.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "array has " + std::to_string(a.size()) + " values, grid needs " + std::to_string(g.size()));
  }
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

nlohmann::json to_json(const py::handle& obj) {
  auto dumps = py::module_::import("json").attr("dumps");
  return nlohmann::json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict verdicts(const std::vector<Verdict>& vs) {
  py::dict out;
  for (const auto& v : vs) out[py::str(v.label)] = py::make_tuple(v.pass, v.detail);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fokker-Planck verification lab";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "FplabError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init(&make_grid), py::arg("dim"), py::arg("n"), py::arg("length"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("n", &Grid::n)
      .def_property_readonly("length", &Grid::length)
      .def_property_readonly("spacing", &Grid::spacing)
      .def("__repr__", [](const Grid& g) {
        return "Grid(dim=" + std::to_string(g.dim()) + ", n=" + std::to_string(g.n()) +
               ", length=" + std::to_string(g.length()) + ")";
      });

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init(&from_numpy), py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &ScalarField::grid)
      .def("numpy", &to_numpy)
      .def("sum", &ScalarField::sum)
      .def("max_abs", &ScalarField::max_abs);

  py::class_<CoefficientSet>(m, "CoefficientSet")
      .def_property_readonly("grid", &CoefficientSet::grid)
      .def_property_readonly("slices", &CoefficientSet::slices)
      .def_property_readonly("alpha", &CoefficientSet::alpha)
      .def_property_readonly("horizon", &CoefficientSet::horizon)
      .def("b", [](const CoefficientSet& c, int k, int i) { return to_numpy(c.b(k)[i]); })
      .def("a", [](const CoefficientSet& c, int k, int i, int j) { return to_numpy(c.a(k)(i, j)); })
      .def("ellipticity", [](const CoefficientSet& c) { return ellipticity_check(c); })
      .def("divergence_budget", [](const CoefficientSet& c) { return negative_divergence_budget(c).integral; });

  m.def(
      "gen_coefficients",
      [](const std::string& cls, const Grid& g, const py::dict& params, std::uint64_t seed) {
        CoefficientParams p;
        for (auto [k, v] : params) {
          const std::string key = py::str(k);
          if (key == "alpha") p.alpha = v.cast<double>();
          else if (key == "p") p.p = v.cast<double>();
          else if (key == "horizon") p.horizon = v.cast<double>();
          else if (key == "time_slices") p.time_slices = v.cast<int>();
          else if (key == "drift") p.drift = v.cast<std::string>();
          else p.values[key] = v.cast<double>();
        }
        return gen_coefficients(coefficient_class_from_string(cls), g, p, seed);
      },
      py::arg("cls"), py::arg("grid"), py::arg("params") = py::dict(), py::arg("seed") = 1);

  m.def(
      "make_initial",
      [](const Grid& g, const std::string& kind, const py::dict& params, std::uint64_t seed) {
        InitialParams p;
        p.kind = kind;
        for (auto [k, v] : params) p.values[py::str(k)] = v.cast<double>();
        return make_initial(g, p, seed);
      },
      py::arg("grid"), py::arg("kind"), py::arg("params") = py::dict(), py::arg("seed") = 1);

  m.def(
      "mollify",
      [](const ScalarField& f, double delta, const std::string& family) {
        return mollify(f, make_mollifier(kernel_family_from_string(family), delta, f.grid()));
      },
      py::arg("field"), py::arg("delta"), py::arg("family") = "bump");

  m.def(
      "commutator_norms",
      [](const CoefficientSet& c, const ScalarField& w, double delta, const std::string& family) {
        const Mollifier mol = make_mollifier(kernel_family_from_string(family), delta, c.grid());
        py::dict out;
        for (auto k : {CommutatorKind::R, CommutatorKind::R1, CommutatorKind::R2, CommutatorKind::S,
                       CommutatorKind::S1}) {
          const auto f = commutator_series(k, c, w, mol);
          const double tau = c.slice_length();
          out[py::str(to_string(k))] = py::dict(
              py::arg("l1") = bochner_norm_piecewise(f.slices, tau, {1.0, 1.0, 0}),
              py::arg("l2") = bochner_norm_piecewise(f.slices, tau, {2.0, 2.0, 0}),
              py::arg("l2_hminus1") = bochner_norm_piecewise(f.slices, tau, {2.0, 2.0, -1}));
        }
        return out;
      },
      py::arg("coefficients"), py::arg("w"), py::arg("delta"), py::arg("family") = "bump");

  m.def("lp_norm", py::overload_cast<const ScalarField&, double>(&lp_norm));
  m.def("sobolev_norm", &sobolev_norm);
  m.def("h_minus1_norm", &h_minus1_norm);

  py::class_<Solution>(m, "Solution")
      .def_readonly("dt", &Solution::dt)
      .def_readonly("cfl", &Solution::cfl)
      .def_readonly("times", &Solution::snapshot_times)
      .def_readonly("q_list", &Solution::q_list)
      .def("final", [](const Solution& s) { return to_numpy(s.final_state()); })
      .def("snapshot", [](const Solution& s, std::size_t k) { return to_numpy(s.snapshots.at(k)); })
      .def("mass", [](const Solution& s) {
        std::vector<double> out;
        for (const auto& d : s.steps) out.push_back(d.mass);
        return out;
      })
      .def("lq", [](const Solution& s, double q) {
        const auto k = s.q_index(q);
        std::vector<double> out;
        for (const auto& d : s.steps) out.push_back(d.lq[k]);
        return out;
      });

  m.def(
      "solve",
      [](const CoefficientSet& c, const ScalarField& u0, double horizon, int steps, const std::string& form,
         const std::string& advection, std::vector<double> q_list) {
        SolverConfig cfg;
        cfg.form = equation_form_from_string(form);
        cfg.advection = advection_scheme_from_string(advection);
        cfg.q_list = std::move(q_list);
        return solve(c.with_horizon(horizon), u0, TimeGrid(horizon, steps), cfg);
      },
      py::arg("coefficients"), py::arg("u0"), py::arg("horizon"), py::arg("steps"),
      py::arg("form") = "fp_div", py::arg("advection") = "centered_flux",
      py::arg("q_list") = std::vector<double>{2.0});

  m.def("energy_audit", [](const Solution& s, const CoefficientSet& c, double q) {
    const auto a = energy_audit(s, c, q);
    return py::dict(py::arg("max_ratio") = a.max_ratio, py::arg("pass") = a.pass, py::arg("ratios") = a.ratios);
  });

  m.def(
      "sde_law_distance",
      [](const CoefficientSet& c, const ScalarField& u0, const Solution& sol, double horizon, int steps,
         std::size_t N, double dt, std::uint64_t seed, int bins) {
        SdeConfig cfg;
        cfg.N = N;
        cfg.dt = dt;
        cfg.seed = seed;
        cfg.bins = bins;
        auto ens = simulate(c.with_horizon(horizon), sample_initial(u0, N, seed), TimeGrid(horizon, steps), cfg);
        const auto cmp = law_compare(sol, ens, bins);
        return py::dict(py::arg("l1") = cmp.l1, py::arg("floor") = cmp.floor, py::arg("bins") = cmp.bins);
      },
      py::arg("coefficients"), py::arg("u0"), py::arg("solution"), py::arg("horizon"), py::arg("steps"),
      py::arg("N"), py::arg("dt"), py::arg("seed") = 1, py::arg("bins") = 0);

  m.def("validate_scenario", [](const py::object& doc) {
    return from_json(validate_scenario(parse_scenario(to_json(doc))).to_json());
  });

  m.def(
      "run_study",
      [](const std::string& kind, const py::object& scenario, const std::filesystem::path& out,
         std::vector<double> ladder, int grid, std::optional<std::uint64_t> seed) {
        StudySpec spec;
        spec.kind = study_kind_from_string(kind);
        if (py::isinstance<py::dict>(scenario)) spec.inline_scenario = parse_scenario(to_json(scenario));
        else spec.scenario = scenario.cast<std::filesystem::path>();
        spec.out = out;
        spec.ladder.values = std::move(ladder);
        spec.ladder.grid = grid;
        spec.seed = seed;
        const auto res = run_study(spec);
        return py::dict(py::arg("exit_status") = res.exit_status,
                        py::arg("directory") = res.directory,
                        py::arg("hash") = res.manifest.hash,
                        py::arg("verdicts") = verdicts(res.manifest.verdicts),
                        py::arg("manifest") = from_json(res.manifest.to_json()));
      },
      py::arg("kind"), py::arg("scenario"), py::arg("out"), py::arg("ladder") = std::vector<double>{},
      py::arg("grid") = 0, py::arg("seed") = std::nullopt);
}
