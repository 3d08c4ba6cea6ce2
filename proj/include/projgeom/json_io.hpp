#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "projgeom/constants.hpp"
#include "projgeom/hilbert.hpp"
#include "projgeom/path.hpp"
#include "projgeom/perturbation.hpp"
#include "projgeom/subspace_pair.hpp"

namespace projgeom {

using json = nlohmann::json;

// Malformed input files and schema violations. Deliberately outside the
// Error hierarchy: a bad file is an input problem, not a mathematical one,
// and maps to a different exit code.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::vector<double>> real_grid(const Matrix& m, bool imag) {
  std::vector<std::vector<double>> g(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      g[i][j] = imag ? m(i, j).imag() : m(i, j).real();
  return g;
}

inline void fill_part(Matrix& m, const json& grid, bool imag,
                      const std::string& key) {
  if (!grid.is_array() || static_cast<int>(grid.size()) != m.rows())
    throw ParseError("matrix JSON: '" + key + "' must be an array of " +
                     std::to_string(m.rows()) + " rows");
  for (int i = 0; i < m.rows(); ++i) {
    const json& row = grid[i];
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols())
      throw ParseError("matrix JSON: row " + std::to_string(i) + " of '" +
                       key + "' must have " + std::to_string(m.cols()) +
                       " entries");
    for (int j = 0; j < m.cols(); ++j) {
      const json& cell = row[j];
      if (!cell.is_number())
        throw ParseError("matrix JSON: non-numeric entry in '" + key + "'");
      const double value = cell.get<double>();
      m(i, j) += imag ? cplx(0.0, value) : cplx(value, 0.0);
    }
  }
}

}  // namespace detail

// Shared matrix format: square matrices as {"dim": n, "re": [[...]], "im":
// [[...]]} with "im" optional, rectangular ones with "rows"/"cols" instead
// of "dim".
inline json matrix_to_json(const Matrix& m) {
  json j;
  if (m.rows() == m.cols()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  j["re"] = detail::real_grid(m, false);
  j["im"] = detail::real_grid(m, true);
  return j;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix JSON: expected an object");
  int rows = 0, cols = 0;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() <= 0)
      throw ParseError("matrix JSON: 'dim' must be a positive integer");
    rows = cols = j["dim"].get<int>();
  } else if (j.contains("rows") && j.contains("cols")) {
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
      throw ParseError("matrix JSON: 'rows'/'cols' must be integers");
    rows = j["rows"].get<int>();
    cols = j["cols"].get<int>();
    if (rows <= 0 || cols <= 0)
      throw ParseError("matrix JSON: 'rows'/'cols' must be positive");
  } else {
    throw ParseError("matrix JSON: need 'dim' or 'rows'+'cols'");
  }
  if (!j.contains("re")) throw ParseError("matrix JSON: missing 're'");
  Matrix m(rows, cols);
  detail::fill_part(m, j["re"], false, "re");
  if (j.contains("im")) detail::fill_part(m, j["im"], true, "im");
  return m;
}

// A matrix read from disk and promoted to a Projection; rejects inputs whose
// spectral snap moved any eigenvalue by more than snap_tol.
inline Projection projection_from_json(const json& j, double snap_tol = 1e-8) {
  const Matrix m = matrix_from_json(j);
  if (m.rows() != m.cols())
    throw ParseError("projection JSON: matrix must be square");
  const Projection p = Projection::round(HermMatrix(m, 1e-8));
  if (p.snap_defect() > snap_tol)
    throw PreconditionError(
        "projection input: spectrum deviates from {0,1} by " +
        std::to_string(p.snap_defect()));
  return p;
}

inline json path_to_json(const ProjectionPath& path) {
  json arr = json::array();
  for (size_t i = 0; i < path.times.size(); ++i) {
    json entry;
    entry["t"] = path.times[i];
    entry["matrix"] = matrix_to_json(path.points[i].matrix());
    arr.push_back(std::move(entry));
  }
  return arr;
}

inline ProjectionPath path_from_json(const json& j, double snap_tol = 1e-8) {
  if (!j.is_array() || j.empty())
    throw ParseError("path JSON: expected a nonempty array of {t, matrix}");
  ProjectionPath path;
  for (const json& entry : j) {
    if (!entry.is_object() || !entry.contains("t") || !entry.contains("matrix"))
      throw ParseError("path JSON: each sample needs 't' and 'matrix'");
    if (!entry["t"].is_number())
      throw ParseError("path JSON: 't' must be a number");
    path.times.push_back(entry["t"].get<double>());
    path.points.push_back(projection_from_json(entry["matrix"], snap_tol));
  }
  path.validate();
  return path;
}

inline json pair_to_json(const SubspacePair& pair) {
  json j;
  j["p"] = matrix_to_json(pair.p.matrix());
  j["q"] = matrix_to_json(pair.q.matrix());
  j["x"] = matrix_to_json(pair.x);
  j["theta_norm"] = pair.theta_norm();
  j["distance"] = pair.dist;
  return j;
}

inline json length_report_to_json(const LengthReport& rep) {
  json j;
  j["polygonal"] = rep.polygonal;
  if (rep.riemannian.has_value())
    j["riemannian"] = *rep.riemannian;
  else
    j["riemannian"] = nullptr;
  j["endpoints_arcsin"] = rep.endpoints_arcsin;
  j["arcsine_law_ok"] = rep.arcsine_law_ok;
  return j;
}

inline json bound_report_to_json(const BoundReport& rep) {
  json j;
  j["kind"] = rep.kind;
  j["bound"] = rep.bound;
  j["actual"] = rep.actual;
  j["valid"] = rep.valid;
  j["margin"] = rep.margin;
  j["quad_error"] = rep.quad_error;
  return j;
}

inline json constant_to_json(const ConstantResult& c) {
  json j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["bracket"] = json::array({c.bracket_lo, c.bracket_hi});
  j["method"] = c.method;
  return j;
}

inline json deviation_to_json(const PathDeviation& d) {
  json j;
  j["actual"] = d.actual;
  j["predicted"] = d.predicted;
  j["defect"] = d.defect;
  return j;
}

inline json hilbert_norm_to_json(double norm, double limit) {
  json j;
  j["norm"] = norm;
  j["limit"] = limit;
  j["gap"] = limit - norm;
  return j;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace projgeom
