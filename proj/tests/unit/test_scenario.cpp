#include <doctest.h>

#include <algorithm>
#include <string>

#include <json.hpp>

#include "fplab/scenario.hpp"

using namespace fplab;
using nlohmann::json;

namespace {
const std::filesystem::path kDir = FPLAB_SCENARIO_DIR;

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

json minimal() {
  return json::parse(R"({
    "label": "demo",
    "grid": {"d": 1, "n": 64, "L": "2pi"},
    "time": {"T": 0.5, "nt": 50},
    "coefficients": {"class": "constant", "alpha": 1.0, "p": "inf", "params": {"b0": 0.5, "a_diag": 1.0}},
    "initial": {"kind": "sine", "params": {"k": 1}},
    "q": 2
  })");
}
}  // namespace

TEST_CASE("every shipped scenario parses and round trips") {
  for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const ScenarioSpec s = load_scenario(entry.path());
    const ScenarioSpec again = parse_scenario(to_json(s));
    CHECK(to_json(again) == to_json(s));
  }
}

TEST_CASE("scenario fields") {
  const ScenarioSpec s = load_scenario(kDir / "heat_1d.json");
  CHECK(s.label == "heat_1d");
  CHECK(s.n == 256);
  CHECK(s.length == doctest::Approx(2 * 3.141592653589793));
  CHECK(s.cls == CoefficientClass::Constant);
  CHECK(std::isinf(s.coeff.p));
  CHECK(s.sde.N == 200000);
  const ScenarioInstance inst = instantiate(s, 64);
  CHECK(inst.grid.n() == 64);
  CHECK(inst.u0.grid() == inst.grid);
}

TEST_CASE("schema errors are listed exhaustively") {
  json doc = minimal();
  doc["grid"]["n"] = 100;
  doc["time"].erase("T");
  doc["coefficients"]["class"] = "wild";
  doc["colour"] = "blue";
  try {
    parse_scenario(doc);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    const std::string msg = e.what();
    CHECK(msg.find("time.T") != std::string::npos);
    CHECK(msg.find("wild") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(std::count(msg.begin(), msg.end(), '\n') >= 3);
  }
}

TEST_CASE("missing files are reported in the validation report") {
  const ValidationReport r = validate_scenario(kDir / "no_such_file.json");
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.schema_errors.empty());
}

TEST_CASE("exponent arithmetic") {
  const auto smooth = activated_regimes(kInfinity, 2.0, true);
  CHECK(has(smooth, "regime_parabolic_uniqueness"));
  CHECK(has(smooth, "regime_distributional_uniqueness"));
  CHECK(has(smooth, "regime_existence"));
  const auto four = activated_regimes(4.0, 4.0, false);
  CHECK(has(four, "regime_parabolic_uniqueness"));
  CHECK(has(four, "regime_locally_parabolic_uniqueness"));
  CHECK(has(four, "regime_regularity"));
  CHECK_FALSE(has(four, "regime_distributional_uniqueness"));
  const auto three = activated_regimes(3.0, 3.0, false);
  CHECK(has(three, "regime_existence"));
  CHECK_FALSE(has(three, "regime_regularity"));
  CHECK(activated_regimes(1.5, 1.5, false).empty());
}

TEST_CASE("validation of shipped scenarios") {
  const ValidationReport smooth = validate_scenario(kDir / "smooth_1d.json");
  CHECK(smooth.ok());
  CHECK(has(smooth.regimes, "regime_parabolic_uniqueness"));
  const ValidationReport w1p = validate_scenario(kDir / "w1p_singular_s1.json");
  CHECK(w1p.ok());
  CHECK(has(w1p.regimes, "regime_parabolic_uniqueness"));
  CHECK(has(w1p.regimes, "regime_global_h1"));
  CHECK(w1p.assumptions.size() >= 4);
}

TEST_CASE("failing ellipticity is listed as an A4 violation") {
  json doc = minimal();
  doc["coefficients"]["params"]["a_diag"] = 0.5;
  const ValidationReport r = validate_scenario(parse_scenario(doc));
  CHECK_FALSE(r.ok());
  bool a4 = false;
  for (const auto& a : r.assumptions) {
    if (a.id == "A4") a4 = !a.ok;
  }
  CHECK(a4);
  CHECK(r.to_json().dump().find("A4") != std::string::npos);
}

TEST_CASE("time grid respects the CFL fraction") {
  json doc = minimal();
  doc["coefficients"]["params"]["b0"] = 20.0;
  doc["time"]["nt"] = 1;
  const ScenarioSpec s = parse_scenario(doc);
  const ScenarioInstance inst = instantiate(s);
  const double h = inst.grid.spacing();
  CHECK(inst.time.dt() <= s.cfl * h / (2 * 20.0) * (1 + 1e-12));
}
