#include <doctest.h>

#include <fstream>
#include <string>

#include <json.hpp>

#include "fplab/experiments.hpp"

using namespace fplab;
using nlohmann::json;

namespace {
const std::filesystem::path kDir = FPLAB_SCENARIO_DIR;

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fplab_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::size_t lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string s; std::getline(in, s);) ++n;
  return n;
}
}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("null commutator study passes and is reproducible") {
  const auto out = scratch("null");
  StudySpec spec;
  spec.kind = StudyKind::Commutator;
  spec.scenario = kDir / "constant_drift_1d.json";
  spec.out = out;
  const RunOutcome a = run_study(spec);
  CHECK(a.exit_status == 0);
  CHECK(a.manifest.complete);
  CHECK(std::filesystem::exists(a.directory / "commutators.csv"));
  CHECK(std::filesystem::exists(a.directory / "manifest.json"));
  std::ifstream summary(a.directory / "summary.txt");
  const std::string text((std::istreambuf_iterator<char>(summary)), {});
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  const RunOutcome b = run_study(spec);
  CHECK(b.manifest.hash == a.manifest.hash);
  CHECK(b.directory != a.directory);
  CHECK(std::filesystem::exists(a.directory / "manifest.json"));
  CHECK(lines(out / "manifests.jsonl") == 2);
  std::filesystem::remove_all(out);
}

TEST_CASE("seed override changes the hash") {
  const auto out = scratch("seed");
  StudySpec spec;
  spec.kind = StudyKind::Commutator;
  spec.scenario = kDir / "constant_drift_1d.json";
  spec.out = out;
  const std::string h0 = run_study(spec).manifest.hash;
  spec.seed = 99;
  const RunOutcome r = run_study(spec);
  CHECK(r.manifest.hash != h0);
  CHECK(r.manifest.seeds["initial"] == 99);
  std::filesystem::remove_all(out);
}

TEST_CASE("hypothesis violations produce an error record") {
  const auto out = scratch("hyp");
  StudySpec spec;
  spec.kind = StudyKind::Regularity;
  spec.scenario = kDir / "w1p_low_integrability.json";
  spec.out = out;
  const RunOutcome r = run_study(spec);
  CHECK(r.exit_status == 2);
  CHECK_FALSE(r.manifest.complete);
  std::ifstream in(r.directory / "error.json");
  const json err = json::parse(in);
  CHECK(err["error"] == "hypothesis_violation");
  CHECK(err["message"].get<std::string>().find("1/p + 1/q") != std::string::npos);
  CHECK(lines(out / "manifests.jsonl") == 1);
  std::filesystem::remove_all(out);
}

TEST_CASE("invalid scenarios exit nonzero") {
  const auto out = scratch("invalid");
  StudySpec spec;
  spec.kind = StudyKind::Solve;
  spec.scenario = kDir / "missing.json";
  spec.out = out;
  const RunOutcome r = run_study(spec);
  CHECK(r.exit_status == 2);
  CHECK(std::filesystem::exists(r.directory / "error.json"));
  std::filesystem::remove_all(out);
}

TEST_CASE("summary lines name the check") {
  const std::string s = summary_text({{"commutator_null", true, "max 0"}});
  CHECK(s.find("[commutator_null]: PASS - max 0") != std::string::npos);
  CHECK(std::string(version()).size() > 0);
}
