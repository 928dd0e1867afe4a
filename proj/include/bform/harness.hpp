#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bform/diffops.hpp"
#include "bform/random.hpp"
#include "bform/report.hpp"

namespace bform {

/// Configuration of the randomized verification suite.
struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 50;
  int n_min = 2;
  int n_max = 6;
  std::vector<StructureKind> kinds = {StructureKind::euclidean, StructureKind::minkowski,
                                      StructureKind::pseudo_euclidean, StructureKind::symplectic,
                                      StructureKind::general};
  double point_box = 2.0;       // sample points drawn from [-box, box]^n
  int points = 10;              // sample points per trial
  int group_sample = 5;         // group elements per trial
  double tol_identity = 1e-8;   // default residual tolerance
  double tol_fd = 1e-6;         // anything involving finite differences
  std::map<std::string, double> tol_overrides;  // identity name -> tolerance

  double tolerance_for(const std::string& identity) const;
  void validate() const;  // throws InvalidParameters
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckReport> checks;
  bool pass = false;
  double wall_ms = 0.0;
};

/// Names of every identity the suite verifies, in report order. The suite's
/// output is checked against this list (a coverage gap is a test failure).
const std::vector<std::string>& identity_manifest();

/// Runs every identity check over randomized structures, operators, fields,
/// points and group samples. Deterministic for a fixed config; failures are
/// report entries, never exceptions.
SuiteReport run_suite(const SuiteConfig& config);

// --- randomized generators shared by the suite and the acceptance tests ---

/// Random Gram matrix with entries U(-1,1), resampled until
/// sigma_min > 1e-3 * sigma_max.
BilinearForm random_form(Rng& rng, int n);
/// Canonical form for the kind (random minus count for pseudo_euclidean,
/// random form for general).
BilinearForm form_for_kind(Rng& rng, StructureKind kind, int n);
/// Random n x n operator, entries U(-1,1).
Matrix random_operator(Rng& rng, int n);
/// Product of n x r and r x n random factors (1 <= r < n), resampled until
/// the rank gap is well separated.
Matrix random_rank_deficient(Rng& rng, int n);
/// Random polynomial of total degree <= max_degree.
ScalarField random_polynomial(Rng& rng, int nvars, int max_degree = 4, int terms = 4);
/// Polynomial plus sin/cos/exp pieces.
ScalarField random_smooth(Rng& rng, int nvars);
/// Vector field with random polynomial components.
VectorField random_polynomial_field(Rng& rng, int nvars, int max_degree = 2);
std::vector<Vector> random_points(Rng& rng, int count, int dim, double box);

}  // namespace bform
