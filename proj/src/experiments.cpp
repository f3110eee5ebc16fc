#include "fplab/experiments.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "fplab/io.hpp"
#include "fplab/labels.hpp"

namespace fplab {

using nlohmann::json;

#ifndef FPLAB_VERSION
#define FPLAB_VERSION "0.0.0"
#endif

const char* version() { return FPLAB_VERSION; }

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::Io, "SHA-256 initialisation failed");
    }
  }
  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  void update(std::string_view s) { update(s.data(), s.size()); }
  void update(std::span<const double> v) { update(v.data(), v.size_bytes()); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, void (*)(EVP_MD_CTX*)> ctx_;
};

json verdicts_json(const std::vector<Verdict>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    out.push_back({{"label", v.label}, {"title", result_label(v.label).title}, {"pass", v.pass},
                   {"detail", v.detail}});
  }
  return out;
}

json table_json(const Table& t, bool with_wall) {
  std::vector<std::size_t> keep;
  json header = json::array();
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    if (!with_wall && t.header[k] == "wall_seconds") continue;
    keep.push_back(k);
    header.push_back(t.header[k]);
  }
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (auto k : keep) row.push_back(r[k]);
    rows.push_back(row);
  }
  return {{"name", t.name}, {"header", header}, {"rows", rows}};
}

json canonical_results(const StudyResult& r) {
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(table_json(t, false));
  json reports = json::array();
  for (const auto& rep : r.reports) {
    reports.push_back({{"label", rep.label()}, {"x", rep.abscissae()}, {"y", rep.values()}});
  }
  json fields = json::array();
  for (const auto& [name, f] : r.fields) fields.push_back(name);
  return {{"study", to_string(r.kind)}, {"verdicts", verdicts_json(r.verdicts)}, {"tables", tables},
          {"reports", reports}, {"metrics", r.metrics}, {"fields", fields}};
}

std::string slug(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' && ch != '.') ch = '_';
  }
  return s;
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::filesystem::path fresh_directory(const std::filesystem::path& root, const std::string& base) {
  for (int k = 0;; ++k) {
    auto dir = root / (k == 0 ? base : base + "-" + std::to_string(k));
    if (std::filesystem::create_directories(dir)) return dir;
  }
}

void append_manifest(const std::filesystem::path& root, const json& m) {
  std::filesystem::create_directories(root);
  std::ofstream out(root / "manifests.jsonl", std::ios::app);
  if (!out) throw Error(ErrorKind::Io, "cannot append to " + (root / "manifests.jsonl").string());
  out << m.dump() << '\n';
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

std::string content_hash(const json& config, const StudyResult& result) {
  Sha256 h;
  h.update(json{{"config", config}, {"results", canonical_results(result)}}.dump());
  for (const auto& [name, f] : result.fields) {
    h.update(name);
    h.update(f.values());
  }
  if (result.ensemble) h.update(std::span<const double>(result.ensemble->positions()));
  return h.hex();
}

json error_record(const Error& e, const std::string& context) {
  return {{"error", to_string(e.kind())}, {"message", e.what()}, {"context", context}};
}

std::string summary_text(const std::vector<Verdict>& verdicts) {
  std::ostringstream os;
  for (const auto& v : verdicts) {
    os << result_label(v.label).title << " [" << v.label << "]: " << (v.pass ? "PASS" : "FAIL")
       << " - " << v.detail << '\n';
  }
  return os.str();
}

json RunManifest::to_json() const {
  json m{{"tool_version", tool_version}, {"run_id", run_id},   {"study", study},
         {"config", config},             {"seeds", seeds},     {"wall_times", wall_times},
         {"verdicts", verdicts_json(verdicts)}, {"metrics", metrics}, {"artifacts", artifacts},
         {"hash", hash},                 {"complete", complete}};
  if (error) m["error"] = *error;
  return m;
}

ScenarioSpec resolve_scenario(const StudySpec& spec) {
  ScenarioSpec s = spec.inline_scenario ? *spec.inline_scenario : load_scenario(spec.scenario);
  if (spec.seed) {
    s.seed = *spec.seed;
    s.coeff_seed = *spec.seed;
    s.sde.seed = *spec.seed;
  }
  return s;
}

RunOutcome run_study(const StudySpec& spec) {
  RunOutcome out;
  RunManifest& m = out.manifest;
  m.tool_version = version();
  m.study = to_string(spec.kind);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ScenarioSpec scenario = resolve_scenario(spec);
    m.config = {{"scenario", to_json(scenario)},
                {"study", m.study},
                {"ladder", spec.ladder.values},
                {"grid", spec.ladder.grid}};
    m.seeds = {{"initial", scenario.seed}, {"coefficients", scenario.coeff_seed}, {"sde", scenario.sde.seed}};
    const ValidationReport vr = validate_scenario(scenario);
    if (!vr.ok()) {
      std::ostringstream os;
      os << "scenario failed validation:";
      for (const auto& e : vr.schema_errors) os << "\n  - " << e;
      for (const auto& a : vr.assumptions) {
        if (!a.ok) os << "\n  - " << a.id << " " << a.label << ": " << a.detail;
      }
      throw Error(ErrorKind::Precondition, os.str());
    }
    const StudyResult result = run(spec.kind, scenario, spec.ladder);
    m.hash = content_hash(m.config, result);
    m.verdicts = result.verdicts;
    m.metrics = result.metrics;
    m.run_id = m.study + "-" + slug(scenario.label) + "-" + m.hash.substr(0, 12);
    out.directory = fresh_directory(spec.out, m.run_id);
    m.run_id = out.directory.filename().string();

    for (const auto& t : result.tables) {
      write_table_csv(out.directory / (t.name + ".csv"), t);
      m.artifacts.push_back(t.name + ".csv");
    }
    const json header{{"scenario", scenario.label}, {"manifest_hash", m.hash}};
    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      const std::string name = "report_" + slug(result.reports[k].label()) + ".csv";
      write_norm_report(out.directory / name, result.reports[k], header);
      m.artifacts.push_back(name);
      m.artifacts.push_back(std::filesystem::path(name).replace_extension(".json").string());
    }
    for (const auto& [name, f] : result.fields) {
      write_field_csv(out.directory / ("field_" + slug(name) + ".csv"), f);
      m.artifacts.push_back("field_" + slug(name) + ".csv");
    }
    if (result.ensemble) {
      write_ensemble_csv(out.directory / "ensemble.csv", *result.ensemble);
      m.artifacts.push_back("ensemble.csv");
    }
    std::ofstream(out.directory / "summary.txt") << summary_text(result.verdicts);
    m.artifacts.push_back("summary.txt");
    m.complete = true;
    out.exit_status = result.pass() ? 0 : 1;
  } catch (const Error& e) {
    m.error = error_record(e, m.study);
    m.complete = false;
    out.exit_status = 2;
    if (out.directory.empty()) out.directory = fresh_directory(spec.out, m.study + "-error");
    m.run_id = out.directory.filename().string();
    write_json(out.directory / "error.json", *m.error);
    m.artifacts.push_back("error.json");
  }
  m.wall_times = {{"total_seconds",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                  {"finished", now_utc()}};
  write_json(out.directory / "manifest.json", m.to_json());
  append_manifest(spec.out, m.to_json());
  return out;
}

}  // namespace fplab
