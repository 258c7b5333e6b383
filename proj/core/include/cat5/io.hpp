#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cat5/config_classify.hpp"
#include "cat5/gamma_cmp.hpp"
#include "cat5/metric.hpp"
#include "cat5/minkowski_complex.hpp"
#include "cat5/verify.hpp"

namespace cat5::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

enum class InputFormat { Json, Csv };

/// Reads a whole file; ParseError(0, 0) if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// JSON {"n": int, "d": [[...]]}. Validation errors from validate_metric
/// propagate unchanged.
FiniteMetricSpace metric_from_json_text(std::string_view text);
/// n rows of n comma-separated reals; blank lines are skipped.
FiniteMetricSpace metric_from_csv_text(std::string_view text);
/// Format from the argument, else from the extension (.csv), else JSON.
FiniteMetricSpace parse_input(const std::filesystem::path& path,
                              std::optional<InputFormat> format = std::nullopt);

json to_json(const FiniteMetricSpace& space);
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::string_view field);

json to_json(const ComparisonReport& r);
json to_json(const Labeling& l);

json to_json(const SpacelikeComplex& cx);
SpacelikeComplex complex_from_json(const json& j);

/// {"points": [[x, y, z] x 5]}
Array5R3 array_from_json(const json& j);
json to_json(const Array5R3& arr);
json to_json(const OrientationProfile& p);
OrientationProfile profile_from_json(const json& j);

/// {"n", "edges", "name"}; a bare string names a built-in graph.
ComparisonGraph graph_from_json(const json& j);
json to_json(const ComparisonGraph& g);

struct GammaInstance {
  ComparisonGraph graph;
  Matrix distances;
};
/// {"graph": <graph json or name>, "d": [[...]]}
GammaInstance instance_from_json(const json& j);
json to_json(const GramWitness& w);
GramWitness witness_from_json(const json& j);

json to_json(const PreservationReport& r);

HuntConfig hunt_config_from_json(const json& j);
json to_json(const HuntConfig& c);
json to_json(const HuntReport& r);

/// Two-space indentation, trailing newline.
std::string dump(const json& j);

}  // namespace cat5::io
