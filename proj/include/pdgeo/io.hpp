#pragma once

// Dataset ingestion and JSON / CSV artifacts.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdgeo/ballhull.hpp"
#include "pdgeo/centerpt.hpp"

namespace pdgeo {

struct Dataset {
    std::size_t n = 0;
    std::vector<SpdPoint> points;
    std::vector<std::string> labels;  // empty, or one per point
    std::string source;
    std::vector<std::string> warnings;
};

enum class DataFormat { Json, Csv };

/// Format from an explicit name ("json"/"csv"), else from the extension.
DataFormat resolve_format(const std::string& path, const std::string& name);

/// JSON: {"n": k, "points": [[row]…], "labels": [...]?}.
/// CSV: a header line "n=k", then one point per line as the n(n+1)/2
/// upper-triangle entries in row-major order. '#' starts a comment.
Dataset load_dataset(const std::string& path, DataFormat format);
Dataset parse_dataset_json(const std::string& text, const std::string& source = "<memory>");
Dataset parse_dataset_csv(const std::string& text, const std::string& source = "<memory>");

nlohmann::json matrix_to_json(const SymMatrix& m);
nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json hull_to_json(const BallHull& hull);
nlohmann::json center_to_json(const CenterResult& result);

/// Reads back the horoballs and origin shift of hull_to_json output. Support
/// vertices and the grid are not serialized, so only membership queries work
/// on the result.
BallHull hull_from_json(const nlohmann::json& j);

/// Serialized with 17 significant digits per number (shortest exact form).
std::string dump_json(const nlohmann::json& j);

struct DiskCoordinates {
    double log_det;
    double x;
    double y;
};

/// PD(2) point → (log det, Poincaré disk coordinates of p/√det p).
DiskCoordinates disk_coordinates(const SpdPoint& p);

/// CSV rows "kind,index,log_det,disk_x,disk_y": one "point" row per input
/// and, when a hull is given, sampled "horosphere" rows on log det = 0 of
/// the shifted frame for each horoball.
void write_plot2(std::ostream& out, const Dataset& data, const BallHull* hull, std::size_t trace_samples = 64);

}  // namespace pdgeo
