#include "fplab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "fplab/labels.hpp"
#include "fplab/spectral.hpp"
#include "fplab/studies.hpp"

namespace fplab {

using nlohmann::json;

std::vector<double> ScenarioSpec::delta_ladder(int n_override) const {
  if (!ladders.deltas.empty()) return ladders.deltas;
  const double h = length / (n_override > 0 ? n_override : n);
  std::vector<double> out;
  for (double c : ladders.delta_cells) out.push_back(c * h);
  return out;
}

ScenarioInstance instantiate(const ScenarioSpec& spec, int n) {
  ScenarioInstance inst;
  inst.grid = make_grid(spec.dim, n > 0 ? n : spec.n, spec.length);
  CoefficientParams params = spec.coeff;
  params.horizon = spec.horizon;
  inst.coeffs = gen_coefficients(spec.cls, inst.grid, params, spec.coeff_seed);
  inst.u0 = make_initial(inst.grid, spec.initial, spec.seed);
  inst.time = admissible_time_grid(inst.coeffs, spec.horizon, spec.steps, spec.cfl,
                                  {EquationForm::Fp, EquationForm::FpDiv});
  return inst;
}

SolverConfig solver_config(const ScenarioSpec& spec) {
  SolverConfig cfg;
  cfg.form = spec.form;
  cfg.advection = spec.advection;
  cfg.tol = spec.tol;
  cfg.max_iter = spec.max_iter;
  cfg.q_list = {2.0, 4.0};
  if (spec.q > 1.0 && std::isfinite(spec.q) && spec.q != 2.0 && spec.q != 4.0) {
    cfg.q_list.push_back(spec.q);
  }
  return cfg;
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  const json* object(const json& parent, const std::string& key, const std::string& path,
                     bool required) {
    if (!parent.contains(key)) {
      if (required) errors_.push_back(path + key + ": missing");
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      errors_.push_back(path + key + ": expected an object");
      return nullptr;
    }
    return &v;
  }

  template <class T>
  void number(const json* obj, const std::string& key, const std::string& path, T& out,
              bool required = false) {
    if (!obj || !obj->contains(key)) {
      if (required) errors_.push_back(path + key + ": missing");
      return;
    }
    const json& v = obj->at(key);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        errors_.push_back(path + key + ": expected an integer");
        return;
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) {
          errors_.push_back(path + key + ": must be non-negative");
          return;
        }
      }
      out = v.get<T>();
    } else {
      if (!v.is_number()) {
        errors_.push_back(path + key + ": expected a number");
        return;
      }
      out = v.get<double>();
    }
  }

  /// Numbers, "inf", or "2pi"-style multiples of pi.
  void extended(const json* obj, const std::string& key, const std::string& path, double& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (v.is_number()) {
      out = v.get<double>();
      return;
    }
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "infinity") {
        out = kInfinity;
        return;
      }
      if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        const std::string head = s.substr(0, s.size() - 2);
        try {
          out = (head.empty() ? 1.0 : std::stod(head)) * std::numbers::pi;
          return;
        } catch (const std::exception&) {
        }
      }
    }
    errors_.push_back(path + key + ": expected a number, \"inf\" or \"<k>pi\"");
  }

  void string(const json* obj, const std::string& key, const std::string& path, std::string& out,
              bool required = false) {
    if (!obj || !obj->contains(key)) {
      if (required) errors_.push_back(path + key + ": missing");
      return;
    }
    const json& v = obj->at(key);
    if (!v.is_string()) {
      errors_.push_back(path + key + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  template <class T>
  void list(const json* obj, const std::string& key, const std::string& path, std::vector<T>& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_array()) {
      errors_.push_back(path + key + ": expected an array");
      return;
    }
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number() || (std::is_integral_v<T> && !e.is_number_integer())) {
        errors_.push_back(path + key + ": entries must be numbers");
        return;
      }
      out.push_back(e.get<T>());
    }
  }

  void only(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) errors_.push_back(path + it.key() + ": unknown key");
    }
  }

  void error(const std::string& e) { errors_.push_back(e); }

 private:
  std::vector<std::string>& errors_;
};

template <class F>
void convert(Reader& rd, const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    rd.error(what + ": " + e.what());
  }
}

void check_decreasing(Reader& rd, const std::vector<double>& v, const std::string& name) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) {
      rd.error("study." + name + ": ladder must be strictly decreasing");
      return;
    }
  }
}

}  // namespace

ScenarioSpec parse_scenario(const json& doc) {
  std::vector<std::string> errors;
  Reader rd(errors);
  ScenarioSpec s;
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "scenario: top level must be an object");
  rd.only(doc, {"label", "grid", "time", "coefficients", "initial", "q", "seed", "mollifier",
                "solver", "sde", "study"},
          "");
  rd.string(&doc, "label", "", s.label);

  if (const json* g = rd.object(doc, "grid", "", true)) {
    rd.only(*g, {"d", "n", "L"}, "grid.");
    rd.number(g, "d", "grid.", s.dim, true);
    rd.number(g, "n", "grid.", s.n, true);
    rd.extended(g, "L", "grid.", s.length);
  }
  if (const json* t = rd.object(doc, "time", "", true)) {
    rd.only(*t, {"T", "nt", "cfl"}, "time.");
    rd.number(t, "T", "time.", s.horizon, true);
    rd.number(t, "nt", "time.", s.steps, true);
    rd.number(t, "cfl", "time.", s.cfl);
    if (!(s.horizon > 0.0)) rd.error("time.T: must be > 0");
    if (s.steps < 1) rd.error("time.nt: must be >= 1");
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) rd.error("time.cfl: must be in (0, 1]");
  }
  if (const json* c = rd.object(doc, "coefficients", "", true)) {
    rd.only(*c, {"class", "seed", "alpha", "p", "time_slices", "params"}, "coefficients.");
    std::string cls = "smooth";
    rd.string(c, "class", "coefficients.", cls, true);
    convert(rd, "coefficients.class", [&] { s.cls = coefficient_class_from_string(cls); });
    rd.number(c, "seed", "coefficients.", s.coeff_seed);
    rd.number(c, "alpha", "coefficients.", s.coeff.alpha);
    rd.extended(c, "p", "coefficients.", s.coeff.p);
    rd.number(c, "time_slices", "coefficients.", s.coeff.time_slices);
    if (!(s.coeff.alpha > 0.0)) rd.error("coefficients.alpha: must be > 0");
    if (!(s.coeff.p >= 1.0)) rd.error("coefficients.p: must be >= 1");
    if (s.coeff.time_slices < 1) rd.error("coefficients.time_slices: must be >= 1");
    if (const json* p = rd.object(*c, "params", "coefficients.", false)) {
      for (auto it = p->begin(); it != p->end(); ++it) {
        if (it.key() == "drift") {
          rd.string(p, "drift", "coefficients.params.", s.coeff.drift);
        } else if (it->is_number()) {
          s.coeff.values[it.key()] = it->get<double>();
        } else {
          rd.error("coefficients.params." + it.key() + ": expected a number");
        }
      }
    }
  }
  if (const json* i = rd.object(doc, "initial", "", true)) {
    rd.only(*i, {"kind", "params"}, "initial.");
    rd.string(i, "kind", "initial.", s.initial.kind, true);
    static const std::set<std::string> kinds{"sine", "gaussian", "bump", "uniform",
                                             "power_law", "random_fourier", "zero"};
    if (!kinds.count(s.initial.kind)) rd.error("initial.kind: unknown kind '" + s.initial.kind + "'");
    if (const json* p = rd.object(*i, "params", "initial.", false)) {
      for (auto it = p->begin(); it != p->end(); ++it) {
        if (it->is_number()) s.initial.values[it.key()] = it->get<double>();
        else rd.error("initial.params." + it.key() + ": expected a number");
      }
    }
  }
  rd.extended(&doc, "q", "", s.q);
  if (!(s.q >= 1.0)) rd.error("q: must be >= 1");
  rd.number(&doc, "seed", "", s.seed);
  if (const json* m = rd.object(doc, "mollifier", "", false)) {
    rd.only(*m, {"family"}, "mollifier.");
    std::string fam = "bump";
    rd.string(m, "family", "mollifier.", fam);
    convert(rd, "mollifier.family", [&] { s.mollifier = kernel_family_from_string(fam); });
  }
  if (const json* v = rd.object(doc, "solver", "", false)) {
    rd.only(*v, {"form", "advection", "tol", "max_iter"}, "solver.");
    std::string form = "fp_div", adv = "centered_flux";
    rd.string(v, "form", "solver.", form);
    rd.string(v, "advection", "solver.", adv);
    convert(rd, "solver.form", [&] { s.form = equation_form_from_string(form); });
    convert(rd, "solver.advection", [&] { s.advection = advection_scheme_from_string(adv); });
    rd.number(v, "tol", "solver.", s.tol);
    rd.number(v, "max_iter", "solver.", s.max_iter);
    if (!(s.tol > 0.0 && s.tol <= 1e-6)) rd.error("solver.tol: must be in (0, 1e-6]");
    if (s.max_iter < 1) rd.error("solver.max_iter: must be >= 1");
  }
  if (const json* e = rd.object(doc, "sde", "", false)) {
    rd.only(*e, {"N", "dt", "seed", "bins"}, "sde.");
    rd.number(e, "N", "sde.", s.sde.N);
    rd.number(e, "dt", "sde.", s.sde.dt);
    rd.number(e, "seed", "sde.", s.sde.seed);
    rd.number(e, "bins", "sde.", s.sde.bins);
    if (s.sde.N < 1) rd.error("sde.N: must be >= 1");
    if (!(s.sde.dt > 0.0)) rd.error("sde.dt: must be > 0");
    if (s.sde.bins != 0 && s.sde.bins < 16) rd.error("sde.bins: must be >= 16");
  }
  if (const json* st = rd.object(doc, "study", "", false)) {
    rd.only(*st, {"deltas", "delta_cells", "grids"}, "study.");
    rd.list(st, "deltas", "study.", s.ladders.deltas);
    rd.list(st, "delta_cells", "study.", s.ladders.delta_cells);
    rd.list(st, "grids", "study.", s.ladders.grids);
    check_decreasing(rd, s.ladders.deltas, "deltas");
    check_decreasing(rd, s.ladders.delta_cells, "delta_cells");
    for (std::size_t k = 1; k < s.ladders.grids.size(); ++k) {
      if (!(s.ladders.grids[k] > s.ladders.grids[k - 1])) {
        rd.error("study.grids: refinement ladder must strictly increase n (strictly decreasing h)");
        break;
      }
    }
  }
  if (s.dim < 1 || s.dim > 3) rd.error("grid.d: must be 1, 2 or 3");
  if (s.n < 8 || (s.n & (s.n - 1)) != 0) rd.error("grid.n: must be a power of two >= 8");
  if (!(s.length > 0.0)) rd.error("grid.L: must be > 0");
  if (s.cls == CoefficientClass::DivFree2d && s.dim != 2) rd.error("coefficients.class: divfree_2d needs d=2");

  if (!errors.empty()) {
    std::ostringstream os;
    os << "scenario has " << errors.size() << " schema violation(s):";
    for (const auto& e : errors) os << "\n  - " << e;
    throw Error(ErrorKind::Schema, os.str());
  }
  return s;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, "scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

namespace {
json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }
}  // namespace

json to_json(const ScenarioSpec& s) {
  json coeff_params = json::object();
  for (const auto& [k, v] : s.coeff.values) coeff_params[k] = v;
  coeff_params["drift"] = s.coeff.drift;
  json init_params = json::object();
  for (const auto& [k, v] : s.initial.values) init_params[k] = v;
  return json{
      {"label", s.label},
      {"grid", {{"d", s.dim}, {"n", s.n}, {"L", s.length}}},
      {"time", {{"T", s.horizon}, {"nt", s.steps}, {"cfl", s.cfl}}},
      {"coefficients",
       {{"class", to_string(s.cls)},
        {"seed", s.coeff_seed},
        {"alpha", s.coeff.alpha},
        {"p", number_or_inf(s.coeff.p)},
        {"time_slices", s.coeff.time_slices},
        {"params", coeff_params}}},
      {"initial", {{"kind", s.initial.kind}, {"params", init_params}}},
      {"q", number_or_inf(s.q)},
      {"seed", s.seed},
      {"mollifier", {{"family", to_string(s.mollifier)}}},
      {"solver",
       {{"form", to_string(s.form)},
        {"advection", to_string(s.advection)},
        {"tol", s.tol},
        {"max_iter", s.max_iter}}},
      {"sde", {{"N", s.sde.N}, {"dt", s.sde.dt}, {"seed", s.sde.seed}, {"bins", s.sde.bins}}},
      {"study",
       {{"deltas", s.ladders.deltas},
        {"delta_cells", s.ladders.delta_cells},
        {"grids", s.ladders.grids}}},
  };
}

std::vector<std::string> activated_regimes(double p, double q, bool bounded_grad_a) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double s = ip + iq;
  const double eps = 1e-12;
  std::vector<std::string> out;
  if (s <= 1.0 + eps) out.push_back("regime_existence");
  if (std::abs(s - 0.5) <= eps) out.push_back("regime_parabolic_uniqueness");
  if (s <= 0.5 + eps) out.push_back("regime_regularity");
  if (std::isinf(p) && bounded_grad_a) out.push_back("regime_distributional_uniqueness");
  if (q > 2.0 && std::abs(s - 0.5) <= eps) out.push_back("regime_locally_parabolic_uniqueness");
  return out;
}

bool ValidationReport::ok() const {
  if (!schema_errors.empty()) return false;
  for (const auto& a : assumptions) {
    if (!a.ok) return false;
  }
  return true;
}

json ValidationReport::to_json() const {
  json checks = json::array();
  for (const auto& a : assumptions) {
    checks.push_back({{"id", a.id}, {"label", a.label}, {"value", a.value}, {"ok", a.ok},
                      {"detail", a.detail}});
  }
  json regs = json::array();
  for (const auto& r : regimes) {
    const auto& l = result_label(r);
    regs.push_back({{"id", r}, {"title", l.title}, {"condition", l.checks}});
  }
  return json{{"label", label},
              {"valid", ok()},
              {"schema_errors", schema_errors},
              {"assumptions", checks},
              {"p", std::isinf(p) ? json("inf") : json(p)},
              {"q", std::isinf(q) ? json("inf") : json(q)},
              {"regimes", regs}};
}

ValidationReport validate_scenario(const ScenarioSpec& spec) {
  ValidationReport rep;
  rep.label = spec.label;
  rep.p = spec.coeff.p;
  rep.q = spec.q;
  ScenarioInstance inst;
  try {
    inst = instantiate(spec);
  } catch (const Error& e) {
    rep.schema_errors.push_back(std::string(to_string(e.kind())) + ": " + e.what());
    return rep;
  }
  const CoefficientSet& c = inst.coeffs;
  double amax = 0.0, colsup = 0.0;
  for (int k = 0; k < c.slices(); ++k) {
    amax = std::max(amax, c.a(k).max_abs());
    colsup = std::max(colsup, column_divergence_sup(c.a(k)));
  }
  rep.assumptions.push_back({"A1", "diffusion matrix bounded", amax, std::isfinite(amax),
                             "sup |a_ij| over nodes and slices"});
  rep.assumptions.push_back({"A2", "column divergence of a bounded", colsup, std::isfinite(colsup),
                             "sup |sum_j d_j a_ij|"});
  const DivergenceBudget budget = negative_divergence_budget(c);
  rep.assumptions.push_back({"A3", "negative part of div b~ integrable in time", budget.integral,
                             std::isfinite(budget.integral),
                             "int_0^T ||(div b~)^-||_inf dt (trapezoid)"});
  const double lam = ellipticity_check(c);
  std::ostringstream det;
  det << "smallest eigenvalue " << lam << " vs alpha " << c.alpha();
  rep.assumptions.push_back({"A4", "uniform ellipticity", lam, lam >= c.alpha() * (1.0 - 1e-12),
                             det.str()});
  if (spec.cls == CoefficientClass::W1pSingular) {
    const auto [lo, hi] = admissible_gamma(spec.dim, spec.coeff.p);
    const double gamma = spec.coeff.get("gamma", 0.9);
    std::ostringstream os;
    os << "gamma=" << gamma << " in (" << lo << ", " << hi << ")";
    rep.assumptions.push_back({"W1p", "singular profile has gradient in L^p", gamma,
                               gamma > lo && gamma < hi, os.str()});
  }
  const bool bounded_grad = spec.cls == CoefficientClass::Smooth ||
                            spec.cls == CoefficientClass::Lipschitz ||
                            spec.cls == CoefficientClass::Constant ||
                            spec.cls == CoefficientClass::DivFree2d;
  rep.regimes = activated_regimes(spec.coeff.p, spec.q, bounded_grad);
  if (std::abs((std::isinf(spec.coeff.p) ? 0.0 : 1.0 / spec.coeff.p) +
               (std::isinf(spec.q) ? 0.0 : 1.0 / spec.q) - 0.5) <= 1e-12 &&
      spec.q > 2.0) {
    const double qmax = spec.dim <= 2 ? kInfinity : 2.0 * spec.dim / (spec.dim - 2.0);
    if (spec.q <= qmax) rep.regimes.push_back("regime_global_h1");
  }
  return rep;
}

ValidationReport validate_scenario(const std::filesystem::path& path) {
  try {
    return validate_scenario(load_scenario(path));
  } catch (const Error& e) {
    ValidationReport rep;
    rep.label = path.stem().string();
    std::istringstream lines(e.what());
    std::string line;
    while (std::getline(lines, line)) {
      const auto pos = line.find("- ");
      if (pos != std::string::npos) rep.schema_errors.push_back(line.substr(pos + 2));
    }
    if (rep.schema_errors.empty()) rep.schema_errors.push_back(e.what());
    return rep;
  }
}

}  // namespace fplab
