#include "cat5/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cat5/error.hpp"

namespace cat5::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(line, col, std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    throw ParseError(0, 0, std::string("missing field '") + field + "'");
  return j.at(field);
}

template <class T>
T get_as(const json& j, const char* field) {
  try {
    return require(j, field).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("field '") + field + "': " + e.what());
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Matrix matrix_from_json(const json& j, std::string_view field) {
  if (!j.is_array()) throw ParseError(0, 0, std::string(field) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    if (!row.is_array())
      throw ParseError(r + 1, 0, std::string(field) + ": row " + std::to_string(r + 1) + " is not an array");
    std::vector<double> vals;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number())
        throw ParseError(r + 1, c + 1,
                         std::string(field) + ": entry (" + std::to_string(r + 1) + "," +
                             std::to_string(c + 1) + ") is not a number");
      vals.push_back(row[c].get<double>());
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) return Matrix();
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].size() != rows[0].size())
      throw ParseError(r + 1, 0, std::string(field) + ": ragged rows");
  return Matrix::from_rows(rows);
}

FiniteMetricSpace metric_from_json_text(std::string_view text) {
  const json j = parse_json(text);
  const auto& d = require(j, "d");
  const Matrix m = matrix_from_json(d, "d");
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long long>() != static_cast<long long>(m.rows()))
      throw ParseError(0, 0, "field 'n' does not match the matrix size");
  }
  return validate_metric(m);
}

FiniteMetricSpace metric_from_csv_text(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    std::vector<double> vals;
    std::size_t col = 0, pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      const auto field = trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
      ++col;
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc{} || ptr != last)
        throw ParseError(line_no, col,
                         "CSV line " + std::to_string(line_no) + ", field " + std::to_string(col) +
                             ": '" + field + "' is not a number");
      vals.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && vals.size() != rows.front().size())
      throw ParseError(line_no, 0, "CSV line " + std::to_string(line_no) + " has " +
                                       std::to_string(vals.size()) + " fields, expected " +
                                       std::to_string(rows.front().size()));
    rows.push_back(std::move(vals));
    if (end == text.size()) break;
  }
  if (rows.empty()) throw ParseError(0, 0, "empty CSV input");
  return validate_metric(rows);
}

FiniteMetricSpace parse_input(const std::filesystem::path& path, std::optional<InputFormat> format) {
  const std::string text = read_file(path);
  InputFormat f = InputFormat::Json;
  if (format) f = *format;
  else if (path.extension() == ".csv") f = InputFormat::Csv;
  return f == InputFormat::Csv ? metric_from_csv_text(text) : metric_from_json_text(text);
}

json to_json(const Matrix& m) { return m.to_rows(); }

json to_json(const FiniteMetricSpace& space) {
  return {{"n", space.size()}, {"d", to_json(space.distances())}};
}

json to_json(const Labeling& l) {
  return {{"p", l.p}, {"q", l.q}, {"x", l.x}, {"y", l.y}};
}

json to_json(const ComparisonReport& r) {
  json j{{"holds", r.holds},
         {"worst_slack", r.worst_slack},
         {"labelings_checked", r.labelings_checked},
         {"failures", r.failures},
         {"tolerance", r.tolerance}};
  j["worst_labeling"] = r.worst_labeling ? to_json(*r.worst_labeling) : json(nullptr);
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return j;
}

namespace {

json simplex_list(const std::vector<Simplex>& s) {
  json out = json::array();
  for (const auto& x : s) out.push_back(x.vertices());
  return out;
}

std::vector<Simplex> simplices_from(const json& j, const char* field) {
  std::vector<Simplex> out;
  const auto& arr = require(j, field);
  if (!arr.is_array()) throw ParseError(0, 0, std::string(field) + " must be an array");
  for (const auto& s : arr) {
    std::uint8_t mask = 0;
    for (const auto& v : s) {
      if (!v.is_number_unsigned() || v.get<unsigned>() > 4)
        throw ParseError(0, 0, std::string(field) + ": vertex index out of range");
      mask |= static_cast<std::uint8_t>(1u << v.get<unsigned>());
    }
    out.push_back(Simplex(mask));
  }
  return out;
}

}  // namespace

json to_json(const SpacelikeComplex& cx) {
  json j;
  j["format_version"] = kFormatVersion;
  j["branch"] = std::string(to_string(cx.branch));
  j["vertices"] = cx.vertices;
  j["metric_signs"] = cx.metric_signs;
  j["time_axis"] = cx.time_axis ? json(*cx.time_axis) : json(nullptr);
  j["time_sign"] = cx.time_sign;
  j["facets"] = simplex_list(cx.facets);
  j["simplices"] = simplex_list(cx.simplices);
  j["faces"] = simplex_list(cx.faces);
  json lengths = json::array();
  for (const auto& row : cx.edge_lengths) lengths.push_back(std::vector<double>(row.begin(), row.end()));
  j["edge_lengths"] = lengths;
  j["ambient_geodesics"] = cx.ambient_geodesics;
  j["diagnostics"] = cx.diagnostics;
  return j;
}

SpacelikeComplex complex_from_json(const json& j) {
  if (get_as<int>(j, "format_version") != kFormatVersion)
    throw ParseError(0, 0, "unsupported complex format_version");
  SpacelikeComplex cx;
  const auto branch = get_as<std::string>(j, "branch");
  if (branch == to_string(Branch::EuclideanFullSimplex)) cx.branch = Branch::EuclideanFullSimplex;
  else if (branch == to_string(Branch::MinkowskiLowerBoundary)) cx.branch = Branch::MinkowskiLowerBoundary;
  else throw ParseError(0, 0, "unknown branch '" + branch + "'");
  cx.vertices = matrix_from_json(require(j, "vertices"), "vertices").to_rows();
  cx.metric_signs = get_as<std::vector<int>>(j, "metric_signs");
  if (cx.vertices.size() != 5) throw ParseError(0, 0, "complex needs 5 vertices");
  for (const auto& v : cx.vertices)
    if (v.size() != cx.metric_signs.size())
      throw ParseError(0, 0, "vertex dimension does not match metric_signs");
  const auto& ta = require(j, "time_axis");
  if (!ta.is_null()) cx.time_axis = ta.get<std::size_t>();
  cx.time_sign = get_as<int>(j, "time_sign");
  cx.facets = simplices_from(j, "facets");
  cx.simplices = simplices_from(j, "simplices");
  cx.faces = simplices_from(j, "faces");
  const Matrix lengths = matrix_from_json(require(j, "edge_lengths"), "edge_lengths");
  if (lengths.rows() != 5 || lengths.cols() != 5) throw ParseError(0, 0, "edge_lengths must be 5x5");
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) cx.edge_lengths[a][b] = lengths(a, b);
  cx.ambient_geodesics = get_as<bool>(j, "ambient_geodesics");
  if (j.contains("diagnostics")) cx.diagnostics = get_as<std::vector<std::string>>(j, "diagnostics");
  return cx;
}

Array5R3 array_from_json(const json& j) {
  const Matrix m = matrix_from_json(require(j, "points"), "points");
  if (m.rows() != 5 || m.cols() != 3) throw ParseError(0, 0, "points must be 5 rows of 3 coordinates");
  std::array<Vec3, 5> pts{};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 3; ++k) pts[i][k] = m(i, k);
  return Array5R3(pts);
}

json to_json(const Array5R3& arr) {
  json pts = json::array();
  for (const auto& p : arr.points()) pts.push_back(std::vector<double>(p.begin(), p.end()));
  return {{"points", pts}};
}

json to_json(const OrientationProfile& p) {
  return {{"facet_signs", p.facet_signs}, {"n_plus", p.n_plus},   {"n_zero", p.n_zero},
          {"n_minus", p.n_minus},         {"m", p.m},             {"side", to_string(p.side)},
          {"stratum", p.stratum()}};
}

OrientationProfile profile_from_json(const json& j) {
  const auto signs = get_as<std::array<int, 5>>(j, "facet_signs");
  for (int s : signs)
    if (s < -1 || s > 1) throw ParseError(0, 0, "facet signs must be -1, 0 or 1");
  return profile_from_signs(signs);
}

ComparisonGraph graph_from_json(const json& j) {
  if (j.is_string()) return builtin_graph(j.get<std::string>());
  const auto n = get_as<std::size_t>(j, "n");
  const auto edges = get_as<std::vector<std::pair<std::size_t, std::size_t>>>(j, "edges");
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  return ComparisonGraph::from_edges(n, edges, name);
}

json to_json(const ComparisonGraph& g) {
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return {{"n", g.size()}, {"edges", edges}, {"name", g.name()}};
}

GammaInstance instance_from_json(const json& j) {
  GammaInstance inst{graph_from_json(require(j, "graph")), matrix_from_json(require(j, "d"), "d")};
  return inst;
}

json to_json(const GramWitness& w) {
  return {{"status", to_string(w.status)}, {"residual", w.residual},
          {"iterations", w.iterations},    {"min_eigenvalue", w.min_eigenvalue},
          {"scale", w.scale},              {"gram", to_json(w.gram)}};
}

GramWitness witness_from_json(const json& j) {
  GramWitness w;
  const auto status = get_as<std::string>(j, "status");
  if (status == "Feasible") w.status = GammaStatus::Feasible;
  else if (status == "Infeasible") w.status = GammaStatus::Infeasible;
  else if (status == "Undecided") w.status = GammaStatus::Undecided;
  else throw ParseError(0, 0, "unknown status '" + status + "'");
  w.residual = get_as<double>(j, "residual");
  w.iterations = get_as<int>(j, "iterations");
  w.min_eigenvalue = get_as<double>(j, "min_eigenvalue");
  w.scale = get_as<double>(j, "scale");
  w.gram = matrix_from_json(require(j, "gram"), "gram");
  return w;
}

namespace {

json pair_or_null(const std::optional<std::pair<std::size_t, std::size_t>>& p) {
  return p ? json{p->first, p->second} : json(nullptr);
}

json table(const DistanceTable& t) {
  json out = json::array();
  for (const auto& row : t) out.push_back(std::vector<double>(row.begin(), row.end()));
  return out;
}

json sample_json(const HuntSample& s) {
  return {{"index", s.index}, {"seed", s.seed}, {"margin", s.margin},
          {"detail", s.detail}, {"d", s.distances}};
}

}  // namespace

json to_json(const PreservationReport& r) {
  return {{"format_version", kFormatVersion},
          {"pass", r.pass},
          {"max_edge_residual", r.max_edge_residual},
          {"worst_edge", pair_or_null(r.worst_edge)},
          {"min_geodesic_gap", r.min_geodesic_gap},
          {"worst_geodesic_pair", pair_or_null(r.worst_geodesic_pair)},
          {"resolution", r.resolution},
          {"geodesic_bounds", table(r.bounds)},
          {"failures", r.failures}};
}

HuntConfig hunt_config_from_json(const json& j) {
  HuntConfig c;
  if (j.contains("generator")) c.generator = parse_generator(get_as<std::string>(j, "generator"));
  if (j.contains("perturbation")) c.generator.perturbation = get_as<double>(j, "perturbation");
  if (j.contains("rejection_budget"))
    c.generator.rejection_budget = get_as<std::size_t>(j, "rejection_budget");
  if (j.contains("points")) c.points = get_as<std::size_t>(j, "points");
  if (j.contains("budget")) c.budget = get_as<std::size_t>(j, "budget");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("predicate")) c.predicate = parse_predicate(get_as<std::string>(j, "predicate"));
  if (j.contains("near_misses")) c.near_misses = get_as<std::size_t>(j, "near_misses");
  if (j.contains("tol_compare")) c.tol_compare = get_as<double>(j, "tol_compare");
  if (j.contains("tol_zero")) c.tol_zero = get_as<double>(j, "tol_zero");
  if (j.contains("gamma")) {
    const auto& g = j["gamma"];
    if (g.contains("feas_tol_rel")) c.gamma.feas_tol_rel = get_as<double>(g, "feas_tol_rel");
    if (g.contains("infeas_floor_rel")) c.gamma.infeas_floor_rel = get_as<double>(g, "infeas_floor_rel");
    if (g.contains("patience")) c.gamma.patience = get_as<int>(g, "patience");
    if (g.contains("max_iterations")) c.gamma.max_iterations = get_as<int>(g, "max_iterations");
  }
  if (c.budget < 1) throw ParseError(0, 0, "hunt budget must be at least 1");
  return c;
}

json to_json(const HuntConfig& c) {
  return {{"generator", generator_name(c.generator)},
          {"perturbation", c.generator.perturbation},
          {"rejection_budget", c.generator.rejection_budget},
          {"points", c.points},
          {"budget", c.budget},
          {"seed", c.seed},
          {"predicate", to_string(c.predicate)},
          {"near_misses", c.near_misses},
          {"tol_compare", c.tol_compare},
          {"tol_zero", c.tol_zero},
          {"gamma",
           {{"feas_tol_rel", c.gamma.feas_tol_rel},
            {"infeas_floor_rel", c.gamma.infeas_floor_rel},
            {"patience", c.gamma.patience},
            {"max_iterations", c.gamma.max_iterations}}}};
}

json to_json(const HuntReport& r) {
  json hits = json::array();
  for (const auto& s : r.hits) hits.push_back(sample_json(s));
  json misses = json::array();
  for (const auto& s : r.near_misses) misses.push_back(sample_json(s));
  return {{"format_version", kFormatVersion},
          {"config", to_json(r.config)},
          {"evaluated", r.evaluated},
          {"candidates", r.candidates},
          {"undecided", r.undecided},
          {"generation_failures", r.generation_failures},
          {"hits", hits},
          {"near_misses", misses}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cat5::io
