// Acceptance suite: one numbered criterion per function, each printing a
// single pass/fail line with its residuals and runtime. Run with no
// arguments for the full gate or with a criterion number for one entry.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bform/adjoints.hpp"
#include "bform/diffops.hpp"
#include "bform/harness.hpp"
#include "bform/io.hpp"
#include "bform/subspaces.hpp"
#include "bform/symmetry.hpp"

using namespace bform;

namespace {

struct Criterion {
  int number;
  std::string label;
  std::function<bool(std::string&)> run;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<GeometricPair> random_corpus(int count, int n_min, int n_max, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GeometricPair> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    corpus.push_back(geometric_pair(random_form(rng, rng.uniform_int(n_min, n_max))));
  return corpus;
}

std::vector<GeometricPair> canonical_corpus(int n_min, int n_max) {
  std::vector<GeometricPair> corpus;
  for (int n = n_min; n <= n_max; ++n) {
    corpus.push_back(geometric_pair(canonical(StructureKind::euclidean, n)));
    corpus.push_back(geometric_pair(canonical(StructureKind::minkowski, n)));
    if (n >= 3) corpus.push_back(geometric_pair(canonical(StructureKind::pseudo_euclidean, n, 2)));
    if (n % 2 == 0) corpus.push_back(geometric_pair(canonical(StructureKind::symplectic, n)));
  }
  return corpus;
}

// Structures the group/equivariance criteria iterate over: the canonical
// kinds plus one generic form.
std::vector<GeometricPair> kind_representatives(std::uint64_t seed) {
  Rng rng(seed);
  return {
      geometric_pair(canonical(StructureKind::euclidean, 3)),
      geometric_pair(canonical(StructureKind::minkowski, 3)),
      geometric_pair(canonical(StructureKind::pseudo_euclidean, 4, 2)),
      geometric_pair(canonical(StructureKind::symplectic, 4)),
      geometric_pair(random_form(rng, 3)),
  };
}

// ---------------------------------------------------------------------------
// 1. geometric-pair law
bool criterion_pair_law(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4201);
  double worst = 0.0;
  for (const GeometricPair& pair : random_corpus(200, 2, 8, 4202)) {
    const int n = pair.dim();
    const double form_scale = pair.form.gram().norm() * pair.rep.norm();
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.vector(n, 2.0);
      const Vector y = rng.vector(n, 2.0);
      const double residual = std::abs(x.dot(y) - pair.form.evaluate(x, pair.rep * y));
      worst = std::max(worst, residual / (1e-9 * (1.0 + x.norm() * y.norm() * form_scale)));
    }
  }
  const double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "worst residual %.3g of allowance, %.2fs", worst, elapsed);
  detail = buf;
  return worst <= 1.0 && elapsed < 5.0;
}

// ---------------------------------------------------------------------------
// 2. adjoint identity suite
bool criterion_adjoints(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4301);
  auto corpus = random_corpus(200, 2, 8, 4302);
  const auto canonicals = canonical_corpus(2, 8);
  corpus.insert(corpus.end(), canonicals.begin(), canonicals.end());

  double worst_universal = 0.0, worst_defining = 0.0, worst_symmetric_involution = 0.0;
  bool saw_general_failure = false;
  bool saw_symmetric = false;
  int symmetric_count = 0;

  for (const GeometricPair& pair : corpus) {
    const int n = pair.dim();
    const Matrix a1 = rng.matrix(n, n, 1.0);
    const Matrix a2 = rng.matrix(n, n, 1.0);

    const Matrix star_l = adjoint(pair, a1, Side::left);
    const Matrix star_r = adjoint(pair, a1, Side::right);
    for (int k = 0; k < 5; ++k) {
      const Vector x = rng.vector(n, 2.0);
      const Vector y = rng.vector(n, 2.0);
      const double scale = 1.0 + a1.norm() * x.norm() * y.norm() * pair.form.gram().norm();
      worst_defining = std::max(
          worst_defining,
          std::abs(pair.form.evaluate(star_l * x, y) - pair.form.evaluate(x, a1 * y)) / scale);
      worst_defining = std::max(
          worst_defining,
          std::abs(pair.form.evaluate(a1 * x, y) - pair.form.evaluate(x, star_r * y)) / scale);
    }

    const auto report = check_adjoint_identities(pair, a1, a2, 1e-8, rng.uniform_int(0, 1 << 30));
    for (const auto& check : report.universal)
      worst_universal = std::max(worst_universal, check.max_residual);

    const Matrix& rep = pair.rep;
    const double epsilon_residual =
        std::min((rep.transpose() - rep).norm(), (rep.transpose() + rep).norm());
    double involution_worst = 0.0;
    for (const auto& check : report.involution)
      involution_worst = std::max(involution_worst, check.max_residual);
    if (epsilon_residual <= 1e-10 * rep.norm()) {
      saw_symmetric = true;
      ++symmetric_count;
      worst_symmetric_involution = std::max(worst_symmetric_involution, involution_worst);
    } else if (involution_worst > 1e-4) {
      saw_general_failure = true;
    }
  }

  const double elapsed = seconds_since(start);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "defining %.3g, universal %.3g, involutions on %d symmetric structures %.3g, "
                "general failure seen %s, %.2fs",
                worst_defining, worst_universal, symmetric_count, worst_symmetric_involution,
                saw_general_failure ? "yes" : "no", elapsed);
  detail = buf;
  return worst_defining <= 1e-8 && worst_universal <= 1e-8 && saw_symmetric &&
         worst_symmetric_involution <= 1e-8 && saw_general_failure && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 3. kernel/image theorem
bool criterion_kernel_image(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4401);
  double worst = 0.0;
  bool dims_exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 6);
    GeometricPair pair = [&] {
      switch (trial % 4) {
        case 0: return geometric_pair(canonical(StructureKind::euclidean, n));
        case 1: return geometric_pair(canonical(StructureKind::minkowski, n));
        case 2:
          return geometric_pair(canonical(n % 2 == 0 ? StructureKind::symplectic
                                                     : StructureKind::minkowski, n));
        default: return geometric_pair(random_form(rng, n));
      }
    }();
    const Matrix a = random_rank_deficient(rng, n);
    for (const auto& check : check_kernel_image_theorem(pair, a, 1e-8).checks)
      worst = std::max(worst, check.max_residual);

    const Subspace im = image(a);
    for (const Side side : {Side::left, Side::right})
      dims_exact &= perp(pair.form, im, side).dim() == n - im.dim();
  }
  const double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "worst projector distance %.3g, dims exact %s, %.2fs", worst,
                dims_exact ? "yes" : "no", elapsed);
  detail = buf;
  return worst <= 1e-8 && dims_exact && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 4. group and algebra laws
bool criterion_group_laws(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst_membership = 0.0, worst_inverse = 0.0, worst_det = 0.0;
  bool dims_ok = true;

  const std::vector<GeometricPair> structures = {
      geometric_pair(canonical(StructureKind::euclidean, 2)),
      geometric_pair(canonical(StructureKind::euclidean, 5)),
      geometric_pair(canonical(StructureKind::minkowski, 4)),
      geometric_pair(canonical(StructureKind::pseudo_euclidean, 5, 2)),
      geometric_pair(canonical(StructureKind::symplectic, 2)),
      geometric_pair(canonical(StructureKind::symplectic, 6)),
  };
  for (const GeometricPair& pair : structures) {
    const int n = pair.dim();
    const AlgebraBasis basis = algebra_basis(pair);
    const auto cls = classify(pair.form);
    const int expected = cls.kind == StructureKind::symplectic ? n * (n + 1) / 2
                                                               : n * (n - 1) / 2;
    dims_ok &= basis.dim() == expected;

    const double rep_norm = pair.rep.norm();
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix g = sample_group_element(basis, Rng::split(4501, trial), 1.0);
      worst_membership = std::max(worst_membership, in_group(pair, g).residual / rep_norm);
      const Matrix g_inv = inverse(g);
      worst_inverse = std::max(
          worst_inverse, std::max((g_inv - adjoint(pair, g, Side::left)).norm(),
                                  (g_inv - adjoint(pair, g, Side::right)).norm()) /
                             (1.0 + g_inv.norm()));
      worst_det = std::max(worst_det, std::abs(std::abs(g.determinant()) - 1.0));
    }
  }

  // the shear form has a one-dimensional algebra with a pinned generator
  Matrix shear(2, 2);
  shear << 1, 1, 0, 1;
  const AlgebraBasis shear_basis = algebra_basis(geometric_pair(BilinearForm::from_matrix(shear)));
  bool shear_ok = shear_basis.dim() == 1;
  if (shear_ok) {
    Matrix generator(2, 2);
    generator << 1, 2, -2, -1;
    generator /= generator.norm();
    shear_ok = std::abs(std::abs((shear_basis.elements[0].array() * generator.array()).sum()) -
                        1.0) < 1e-10;
  }

  const double elapsed = seconds_since(start);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "membership %.3g, inverse-adjoint %.3g, |det|-1 %.3g, dims %s, shear algebra %s, "
                "%.2fs",
                worst_membership, worst_inverse, worst_det, dims_ok ? "ok" : "BAD",
                shear_ok ? "ok" : "BAD", elapsed);
  detail = buf;
  return worst_membership <= 1e-8 && worst_inverse <= 1e-8 && worst_det <= 1e-8 && dims_ok &&
         shear_ok && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 5. gradient calculus
bool criterion_gradients(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4601);
  double worst_defining = 0.0, worst_relation = 0.0, worst_fd = 0.0;

  for (const GeometricPair& pair : kind_representatives(4602)) {
    const int n = pair.dim();
    const Matrix lr = pair.rep.transpose() * pair.form.gram();
    for (int fi = 0; fi < 4; ++fi) {
      const ScalarField f = fi % 2 == 0 ? random_polynomial(rng, n) : random_smooth(rng, n);
      for (const Vector& x : random_points(rng, 5, n, 2.0)) {
        const Vector euclid_grad = grad(f, x);
        const Vector left = grad_b(pair, f, x, Side::left);
        const Vector right = grad_b(pair, f, x, Side::right);
        for (int k = 0; k < 4; ++k) {
          const Vector dir = rng.vector(n, 1.0);
          const double scale = 1.0 + euclid_grad.norm() * dir.norm() * pair.form.gram().norm();
          worst_defining =
              std::max(worst_defining,
                       std::abs(pair.form.evaluate(left, dir) - euclid_grad.dot(dir)) / scale);
          worst_defining =
              std::max(worst_defining,
                       std::abs(pair.form.evaluate(dir, right) - euclid_grad.dot(dir)) / scale);
        }
        worst_relation =
            std::max(worst_relation, (left - lr * right).norm() / (1.0 + left.norm()));
      }
    }
  }

  // 30-field corpus for the finite-difference oracle
  for (int fi = 0; fi < 30; ++fi) {
    const int n = Rng(fi).uniform_int(2, 5);
    Rng frng(Rng::split(4603, fi));
    const ScalarField f = fi % 3 == 0 ? random_smooth(frng, n) : random_polynomial(frng, n);
    for (const Vector& x : random_points(frng, 10, n, 2.0)) {
      const Vector exact = grad(f, x);
      worst_fd = std::max(worst_fd,
                          (exact - fd_grad(f, x)).norm() / std::max(1.0, exact.norm()));
    }
  }

  const double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "defining %.3g, left/right relation %.3g, fd %.3g, %.2fs",
                worst_defining, worst_relation, worst_fd, elapsed);
  detail = buf;
  return worst_defining <= 1e-9 && worst_relation <= 1e-9 && worst_fd <= 1e-5;
}

// ---------------------------------------------------------------------------
// 6. equivariance theorems
bool criterion_equivariance(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4701);
  double worst = 0.0;
  for (const GeometricPair& pair : kind_representatives(4702)) {
    const int n = pair.dim();
    const GroupSample h = GroupSample::sampled(pair, 10, Rng::split(4703, n));
    const auto points = random_points(rng, 20, n, 2.0);

    const ScalarField invariant = quadratic_form_field(pair.form);
    const auto suite = gradient_equivariance_suite(pair, invariant, h, points, 1e-8);
    for (const auto& check : suite.checks) worst = std::max(worst, check.max_residual);

    const ScalarField f = random_polynomial(rng, n);
    const auto arbitrary = gradient_equivariance_suite(pair, f, h, points, 1e-8);
    worst = std::max(worst, arbitrary.find("gradient.action_compat")->max_residual);
    worst = std::max(worst, laplacian_equivariance(pair, f, h, points, 1e-8).max_residual);
  }
  const double elapsed = seconds_since(start);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "worst residual %.3g, %.2fs", worst, elapsed);
  detail = buf;
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------------
// 7. laplacian specializations and product rules
bool criterion_laplacian(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4801);
  double worst_euclid = 0.0, worst_wave = 0.0, worst_symplectic = 0.0, worst_product = 0.0;

  const GeometricPair euclid = geometric_pair(canonical(StructureKind::euclidean, 3));
  for (int fi = 0; fi < 10; ++fi) {
    const ScalarField f = random_polynomial(rng, 3);
    ScalarField classical = ScalarField::constant(0.0, 3);
    for (int i = 1; i <= 3; ++i) classical = classical + f.differentiate(i).differentiate(i);
    for (const Vector& x : random_points(rng, 10, 3, 2.0)) {
      const double expected = classical.eval(x);
      worst_euclid = std::max(worst_euclid, std::abs(laplacian_b(euclid, f, x) - expected) /
                                                (1.0 + std::abs(expected)));
    }
  }

  const GeometricPair lorentz = geometric_pair(canonical(StructureKind::minkowski, 2));
  const ScalarField quadratic = ScalarField::parse("x1^2 + x2^2", 2);
  for (const Vector& x : random_points(rng, 20, 2, 2.0))
    worst_wave = std::max(worst_wave, std::abs(laplacian_b(lorentz, quadratic, x)));

  const GeometricPair symplectic = geometric_pair(canonical(StructureKind::symplectic, 4));
  for (int fi = 0; fi < 20; ++fi) {
    const ScalarField f = fi % 2 == 0 ? random_polynomial(rng, 4) : random_smooth(rng, 4);
    for (const Vector& x : random_points(rng, 5, 4, 2.0)) {
      const Matrix hess = hessian(f, x);
      worst_symplectic =
          std::max(worst_symplectic, std::abs((symplectic.rep.array() * hess.array()).sum()) /
                                         (1.0 + symplectic.rep.norm() * hess.norm()));
    }
  }

  for (const GeometricPair& pair : kind_representatives(4802)) {
    const int n = pair.dim();
    const auto report =
        product_rule_check(pair, random_polynomial(rng, n), random_polynomial(rng, n),
                           random_points(rng, 10, n, 2.0), 1e-8, 4803);
    for (const auto& check : report.checks) worst_product = std::max(worst_product, check.max_residual);
  }

  const double elapsed = seconds_since(start);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "euclidean %.3g, minkowski wave %.3g, symplectic %.3g, product rules %.3g, %.2fs",
                worst_euclid, worst_wave, worst_symplectic, worst_product, elapsed);
  detail = buf;
  return worst_euclid <= 1e-12 && worst_wave <= 1e-12 && worst_symplectic <= 1e-12 &&
         worst_product <= 1e-8;
}

// ---------------------------------------------------------------------------
// 8. correspondence round-trip and generator expansions
bool criterion_correspondence(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4901);
  double worst_roundtrip = 0.0;
  for (const GeometricPair& pair : kind_representatives(4902)) {
    const int n = pair.dim();
    for (int fi = 0; fi < 20; ++fi) {
      const VectorField f = random_polynomial_field(rng, n);
      for (const Side side : {Side::left, Side::right}) {
        const VectorField rec = recover_field(pair, pair_field(pair, f, side), side);
        for (const Vector& x : random_points(rng, 4, n, 2.0)) {
          const Vector expected = f.eval(x);
          worst_roundtrip = std::max(
              worst_roundtrip, (rec.eval(x) - expected).norm() / (1.0 + expected.norm()));
        }
      }
    }
  }

  // euclidean generator expansions
  const int n = 3;
  const GeometricPair euclid = geometric_pair(canonical(StructureKind::euclidean, n));
  ScalarField u1 = ScalarField::constant(0.0, 2 * n);
  ScalarField u2 = ScalarField::constant(0.0, 2 * n);
  ScalarField u3 = ScalarField::constant(0.0, 2 * n);
  for (int i = 1; i <= n; ++i) {
    u1 = u1 + pow(ScalarField::variable(i, 2 * n), 2);
    u2 = u2 + ScalarField::variable(i, 2 * n) * ScalarField::variable(n + i, 2 * n);
    u3 = u3 + pow(ScalarField::variable(n + i, 2 * n), 2);
  }
  const std::vector<ScalarField> us = {u1, u2, u3};
  const ScalarField v1 = ScalarField::variable(1, 3);
  const ScalarField v2 = ScalarField::variable(2, 3);
  const ScalarField v3 = ScalarField::variable(3, 3);
  const auto points = random_points(rng, 10, n, 2.0);

  double worst_generators = 0.0;
  for (const auto& check :
       generator_expansion_check(euclid, v2, us, VectorField::identity(n), points, 1e-10, v2)
           .checks)
    worst_generators = std::max(worst_generators, check.max_residual);
  std::vector<ScalarField> cubic;
  for (int i = 1; i <= n; ++i)
    cubic.push_back(quadratic_form_field(euclid.form) * ScalarField::variable(i, n));
  for (const auto& check :
       generator_expansion_check(euclid, v1 * v2, us, VectorField::from_components(cubic), points,
                                 1e-10, v3 * v2)
           .checks)
    worst_generators = std::max(worst_generators, check.max_residual);

  const double elapsed = seconds_since(start);
  char buf[140];
  std::snprintf(buf, sizeof(buf), "round-trip %.3g, generator expansions %.3g, %.2fs",
                worst_roundtrip, worst_generators, elapsed);
  detail = buf;
  return worst_roundtrip <= 1e-10 && worst_generators <= 1e-10;
}

// ---------------------------------------------------------------------------
// 9. end-to-end CLI verify run
bool criterion_cli_verify(std::string& detail) {
  const char* cli = std::getenv("BFORM_CLI");
  std::string output;
  double elapsed = 0.0;
  int exit_code = -1;

  if (cli) {
    const std::string command =
        std::string(cli) + " --json verify --seed 42 --trials 50 2>/dev/null";
    const auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
      detail = "could not launch the CLI";
      return false;
    }
    std::array<char, 8192> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
      output.append(buffer.data(), got);
    const int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    elapsed = seconds_since(start);
  } else {
    // no CLI path in the environment: run the suite in-process instead
    const auto start = std::chrono::steady_clock::now();
    SuiteConfig cfg;
    const SuiteReport report = run_suite(cfg);
    output = io::suite_report_to_json(report).dump();
    exit_code = report.pass ? 0 : 1;
    elapsed = seconds_since(start);
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(output);
  } catch (const nlohmann::json::exception&) {
    detail = "output is not valid JSON";
    return false;
  }

  bool schema_ok = j.contains("config") && j.contains("checks") && j.contains("pass") &&
                   j["config"].contains("seed") && j["config"]["seed"] == 42;
  std::size_t covered = 0;
  if (schema_ok) {
    for (const auto& name : identity_manifest()) {
      bool found = false;
      for (const auto& check : j["checks"])
        found |= check.contains("name") && check["name"] == name &&
                 check.contains("trials") && check.contains("max_residual") &&
                 check.contains("pass");
      covered += found ? 1 : 0;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "exit %d, %.1fs, schema %s, %zu/%zu identities covered%s",
                exit_code, elapsed, schema_ok ? "ok" : "BAD", covered,
                identity_manifest().size(), cli ? "" : " (in-process)");
  detail = buf;
  return exit_code == 0 && elapsed < 60.0 && schema_ok && covered == identity_manifest().size();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "geometric-pair law", criterion_pair_law},
      {2, "adjoint identity suite", criterion_adjoints},
      {3, "kernel/image theorem", criterion_kernel_image},
      {4, "group and algebra laws", criterion_group_laws},
      {5, "gradient calculus", criterion_gradients},
      {6, "equivariance theorems", criterion_equivariance},
      {7, "laplacian specializations", criterion_laplacian},
      {8, "correspondence and generators", criterion_correspondence},
      {9, "end-to-end verify", criterion_cli_verify},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_pass = true;
  for (const Criterion& criterion : criteria) {
    if (only != 0 && criterion.number != only) continue;
    std::string detail;
    const bool pass = criterion.run(detail);
    all_pass &= pass;
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", criterion.number,
                criterion.label.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
