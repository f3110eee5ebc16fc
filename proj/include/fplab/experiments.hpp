#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fplab/scenario.hpp"
#include "fplab/studies.hpp"

namespace fplab {

const char* version();

struct StudySpec {
  StudyKind kind = StudyKind::Solve;
  std::filesystem::path scenario;
  std::optional<ScenarioSpec> inline_scenario;  // used instead of the file when set
  LadderOverride ladder;
  std::optional<std::uint64_t> seed;  // replaces every scenario seed
  std::filesystem::path out = "runs";
};

struct RunManifest {
  std::string tool_version;
  std::string run_id;
  std::string study;
  nlohmann::json config;
  nlohmann::json seeds;
  nlohmann::json wall_times;
  std::vector<Verdict> verdicts;
  nlohmann::json metrics;
  std::vector<std::string> artifacts;
  std::string hash;
  bool complete = false;
  std::optional<nlohmann::json> error;

  nlohmann::json to_json() const;
};

struct RunOutcome {
  int exit_status = 0;
  RunManifest manifest;
  std::filesystem::path directory;
};

/// Resolves the scenario (file, inline, seed override) exactly as run_study does.
ScenarioSpec resolve_scenario(const StudySpec& spec);

/// Executes the study, writes CSV tables, JSON manifest, summary.txt and
/// appends to <out>/manifests.jsonl. Exit status 0 iff every verdict passes;
/// 2 on errors (an error.json record is written).
RunOutcome run_study(const StudySpec& spec);

/// SHA-256 over the canonical config and results; wall times excluded.
std::string content_hash(const nlohmann::json& config, const StudyResult& result);
std::string sha256_hex(std::string_view data);

/// Machine-readable error record.
nlohmann::json error_record(const Error& e, const std::string& context);

/// "Title [id]: PASS - detail" lines.
std::string summary_text(const std::vector<Verdict>& verdicts);

}  // namespace fplab
