#include "bform/io.hpp"

#include <fstream>
#include <sstream>

namespace bform::io {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

Matrix rows_to_matrix(const nlohmann::json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty())
    throw IoError(where + ": expected a non-empty array of rows");
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  if (cols == 0) throw IoError(where + ": rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols)
      throw IoError(where + ": ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!rows[i][j].is_number()) throw IoError(where + ": non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.rows()}, {"matrix", std::move(rows)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_object() ? j.at("matrix") : j;
  Matrix m = rows_to_matrix(rows, "matrix");
  if (j.is_object() && j.contains("n") &&
      j.at("n").get<Eigen::Index>() != m.rows())
    throw IoError("matrix: declared 'n' does not match the row count");
  return m;
}

Matrix matrix_from_file(const std::string& path) {
  try {
    return matrix_from_json(load_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("in " + path + ": " + e.what());
  }
}

BilinearForm form_from_file(const std::string& path, double tol) {
  return BilinearForm::from_matrix(matrix_from_file(path), tol);
}

BilinearForm form_from_spec(const std::string& spec, double tol) {
  // inline canonical form: "<kind>:<n>[:<k>]"
  const std::size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    const auto kind = structure_kind_from_string(spec.substr(0, colon));
    if (kind) {
      const std::string rest = spec.substr(colon + 1);
      const std::size_t colon2 = rest.find(':');
      try {
        const int n = std::stoi(rest.substr(0, colon2));
        std::optional<int> k;
        if (colon2 != std::string::npos) k = std::stoi(rest.substr(colon2 + 1));
        return canonical(*kind, n, k);
      } catch (const std::logic_error&) {
        throw IoError("invalid canonical form spec: " + spec);
      }
    }
  }
  return form_from_file(spec, tol);
}

std::vector<Vector> vectors_from_file(const std::string& path) {
  const nlohmann::json j = load_json(path);
  const nlohmann::json& rows = j.is_object() ? j.at("vectors") : j;
  const Matrix m = rows_to_matrix(rows, path);
  std::vector<Vector> vectors;
  vectors.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) vectors.push_back(m.row(i).transpose());
  return vectors;
}

ScalarField field_from_file(const std::string& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_object() || !j.contains("nvars") || !j.contains("expr"))
    throw IoError(path + ": expected {\"nvars\": m, \"expr\": \"...\"}");
  return ScalarField::parse(j.at("expr").get<std::string>(), j.at("nvars").get<int>());
}

ScalarField field_from_spec(const std::string& spec, int fallback_nvars) {
  if (std::ifstream(spec).good()) return field_from_file(spec);
  return ScalarField::parse(spec, fallback_nvars);
}

VectorField vector_field_from_file(const std::string& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_object() || !j.contains("nvars") || !j.contains("components"))
    throw IoError(path + ": expected {\"nvars\": m, \"components\": [\"...\", ...]}");
  const int nvars = j.at("nvars").get<int>();
  std::vector<ScalarField> components;
  for (const auto& text : j.at("components"))
    components.push_back(ScalarField::parse(text.get<std::string>(), nvars));
  return VectorField::from_components(std::move(components));
}

Vector parse_point(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw IoError("invalid coordinate '" + item + "' in point \"" + csv + "\"");
    }
  }
  if (values.empty()) throw IoError("empty point \"" + csv + "\"");
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

json report_to_json(const CheckReport& r) {
  json j{{"name", r.name},
         {"trials", r.trials},
         {"max_residual", r.max_residual},
         {"tolerance", r.tolerance},
         {"pass", r.pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json report_to_json(const IdentityReport& r) {
  json checks = json::array();
  for (const CheckReport& c : r.checks) checks.push_back(report_to_json(c));
  return json{{"checks", std::move(checks)}, {"pass", r.all_pass()}};
}

json config_to_json(const SuiteConfig& c) {
  json kinds = json::array();
  for (const StructureKind kind : c.kinds) kinds.push_back(to_string(kind));
  json tolerances{{"default", c.tol_identity}, {"fd", c.tol_fd}};
  for (const auto& [name, value] : c.tol_overrides) tolerances[name] = value;
  return json{{"seed", c.seed},
              {"trials", c.trials},
              {"n_min", c.n_min},
              {"n_max", c.n_max},
              {"kinds", std::move(kinds)},
              {"point_box", c.point_box},
              {"points", c.points},
              {"group_sample", c.group_sample},
              {"tolerances", std::move(tolerances)}};
}

json suite_report_to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const CheckReport& c : r.checks) checks.push_back(report_to_json(c));
  return json{{"config", config_to_json(r.config)},
              {"checks", std::move(checks)},
              {"pass", r.pass},
              {"wall_ms", r.wall_ms}};
}

}  // namespace bform::io
