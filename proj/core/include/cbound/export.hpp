#pragma once

// Serialization of boundary objects and files. Doubles are written in the
// shortest round-trip form so equal runs give byte-identical files.

#include "cbound/cboundary.hpp"
#include "cbound/scenario.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

namespace cbound {

nlohmann::json to_json(const Endpoint& e);
nlohmann::json to_json(const LeqResult& r);
nlohmann::json to_json(const ExtChronResult& r);
nlohmann::json to_json(const IsoReport& r);

/// One TIP: label, seed, endpoint, generator family and boundary samples on `grid`.
nlohmann::json tip_json(const TIP& tip, std::span<const double> grid);

/// Atlas summary with TIPs indexed by position (uids are process-local).
nlohmann::json atlas_json(const BoundaryAtlas& atlas, std::span<const double> grid);

nlohmann::json relation_json(const BoundaryAtlas& atlas, const RelationMatrix& m);

/// CSV with header `row,col,row_label,col_label,class`.
void write_relation_csv(std::ostream& os, const BoundaryAtlas& atlas, const RelationMatrix& m);

/// First line of every CSV: `# scenario <compact json>`.
std::string scenario_comment(const nlohmann::json& scenario);

/// Writes `body` to path, creating parent directories. Throws Error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& body);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
/// CSV preceded by the scenario comment line.
void write_csv(const std::filesystem::path& path, const nlohmann::json& scenario,
               const std::function<void(std::ostream&)>& body);

} // namespace cbound
