#include "fplab/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fplab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.precision(17);
  return out;
}

std::string cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  auto out = open_out(path);
  const Grid& g = f.grid();
  for (int a = 0; a < g.dim(); ++a) out << 'x' << a << ',';
  out << "value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto x = g.coord(k);
    for (int a = 0; a < g.dim(); ++a) out << x[a] << ',';
    out << f[k] << '\n';
  }
}

ScalarField read_field_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.rfind(',');
    values.push_back(std::stod(line.substr(pos + 1)));
  }
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::Io, path.string() + ": expected " + std::to_string(grid.size()) +
                                   " rows, found " + std::to_string(values.size()));
  }
  return ScalarField(grid, std::move(values));
}

void write_table_csv(const std::filesystem::path& path, const Table& t) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < t.header.size(); ++k) out << (k ? "," : "") << t.header[k];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell(row[k]);
    out << '\n';
  }
}

void write_norm_report(const std::filesystem::path& csv, const NormReport& r,
                       const nlohmann::json& header) {
  auto out = open_out(csv);
  out << "abscissa,value\n";
  for (std::size_t k = 0; k < r.size(); ++k) out << r.abscissae()[k] << ',' << r.values()[k] << '\n';
  nlohmann::json h = header;
  const auto& d = r.descriptor();
  h["label"] = r.label();
  h["descriptor"] = {{"name", d.name()},
                     {"space_p", std::isinf(d.space_p) ? nlohmann::json("inf") : nlohmann::json(d.space_p)},
                     {"time_r", std::isinf(d.time_r) ? nlohmann::json("inf") : nlohmann::json(d.time_r)},
                     {"sobolev", d.sobolev}};
  auto js = csv;
  write_json(js.replace_extension(".json"), h);
}

void write_ensemble_csv(const std::filesystem::path& path, const ParticleEnsemble& e) {
  auto out = open_out(path);
  out << "particle";
  for (int a = 0; a < e.dim(); ++a) out << ",x" << a;
  out << '\n';
  for (std::size_t p = 0; p < e.size(); ++p) {
    out << p;
    for (int a = 0; a < e.dim(); ++a) out << ',' << e.position(p, a);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace fplab
