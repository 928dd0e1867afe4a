#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bform/fields.hpp"
#include "bform/forms.hpp"
#include "bform/harness.hpp"
#include "bform/report.hpp"

namespace bform::io {

using json = nlohmann::ordered_json;

// Matrix files: {"n": <int>, "matrix": [[row], [row], ...]}; a bare array
// of rows is also accepted on input.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
Matrix matrix_from_file(const std::string& path);

BilinearForm form_from_file(const std::string& path, double tol = tol::degeneracy);
/// Accepts either a path to a matrix file or an inline canonical spec
/// "<kind>:<n>[:<k>]", e.g. "minkowski:4", "pseudo_euclidean:4:2".
BilinearForm form_from_spec(const std::string& spec, double tol = tol::degeneracy);

// Vector files: {"n": <int>, "vectors": [[...], ...]} or a bare array.
std::vector<Vector> vectors_from_file(const std::string& path);

// Field files: {"nvars": m, "expr": "<text>"}; vector fields:
// {"nvars": m, "components": ["<text>", ...]}.
ScalarField field_from_file(const std::string& path);
/// Accepts a path or inline expression text (nvars = fallback_nvars).
ScalarField field_from_spec(const std::string& spec, int fallback_nvars);
VectorField vector_field_from_file(const std::string& path);

/// "1,2,3" -> vector.
Vector parse_point(const std::string& csv);

json report_to_json(const CheckReport& r);
json report_to_json(const IdentityReport& r);
json suite_report_to_json(const SuiteReport& r);
json config_to_json(const SuiteConfig& c);

}  // namespace bform::io
