#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fplab/norms.hpp"
#include "fplab/sde.hpp"
#include "fplab/studies.hpp"

namespace fplab {

/// x0[,x1,x2],value per node, full round-trip precision.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field_csv(const std::filesystem::path& path, const Grid& grid);

void write_table_csv(const std::filesystem::path& path, const Table& t);

/// abscissa,value rows plus a sibling .json header (descriptor, scenario, manifest hash).
void write_norm_report(const std::filesystem::path& csv, const NormReport& r,
                       const nlohmann::json& header);

/// particle,x0[,x1,x2]
void write_ensemble_csv(const std::filesystem::path& path, const ParticleEnsemble& e);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace fplab
