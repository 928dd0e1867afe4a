#include "bform/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "bform/adjoints.hpp"
#include "bform/subspaces.hpp"

namespace bform {

namespace {

constexpr double kSharpFailure = 1e-4;  // involution residual expected on general structures

int kind_index(StructureKind kind) {
  switch (kind) {
    case StructureKind::euclidean: return 0;
    case StructureKind::minkowski: return 1;
    case StructureKind::pseudo_euclidean: return 2;
    case StructureKind::symplectic: return 3;
    case StructureKind::general: return 4;
  }
  return 5;
}

}  // namespace

double SuiteConfig::tolerance_for(const std::string& identity) const {
  const auto it = tol_overrides.find(identity);
  if (it != tol_overrides.end()) return it->second;
  if (identity == "gradient.fd_agreement") return tol_fd;
  if (identity == "laplacian.euclidean_classical" || identity == "laplacian.minkowski_wave" ||
      identity == "laplacian.symplectic_zero")
    return tol::exact;
  return tol_identity;
}

void SuiteConfig::validate() const {
  if (trials < 1) throw InvalidParameters("suite config: trials must be >= 1");
  if (n_min < 2 || n_max > 16 || n_min > n_max)
    throw InvalidParameters("suite config: dimension range must lie within [2, 16]");
  if (kinds.empty()) throw InvalidParameters("suite config: no structure kinds selected");
  if (point_box <= 0.0) throw InvalidParameters("suite config: point box must be positive");
  if (points < 1 || group_sample < 1)
    throw InvalidParameters("suite config: sample counts must be >= 1");
  if (tol_identity <= 0.0 || tol_fd <= 0.0)
    throw InvalidParameters("suite config: tolerances must be positive");
  for (const auto& [name, value] : tol_overrides)
    if (value <= 0.0) throw InvalidParameters("suite config: tolerance override for " + name +
                                              " must be positive");
  if (std::count(kinds.begin(), kinds.end(), StructureKind::symplectic) > 0) {
    bool has_even = false;
    for (int n = n_min; n <= n_max; ++n) has_even |= (n % 2 == 0);
    if (!has_even)
      throw InvalidParameters("suite config: symplectic kind needs an even dimension in range");
  }
}

const std::vector<std::string>& identity_manifest() {
  static const std::vector<std::string> manifest = {
      "pair.defining",
      "adjoint.defining_left",
      "adjoint.defining_right",
      "adjoint.linearity",
      "adjoint.double_adjoint",
      "adjoint.anti_multiplicative",
      "adjoint.inverse_compat",
      "adjoint.commutator",
      "adjoint.involution_left",
      "adjoint.involution_right",
      "adjoint.left_right_agree",
      "adjoint.involution_consistency",
      "adjoint.determinant",
      "perp.dimension",
      "perp.double_perp",
      "perp.left_right_coincide",
      "kernel_image.ker_adjL_is_imA_perpL",
      "kernel_image.ker_adjR_is_imA_perpR",
      "kernel_image.ker_cross_perp",
      "kernel_image.im_adjL_is_kerA_perpL",
      "kernel_image.im_adjR_is_kerA_perpR",
      "kernel_image.im_cross_perp",
      "kernel_image.kerA_from_imL",
      "kernel_image.kerA_from_imR",
      "kernel_image.imA_from_kerL",
      "kernel_image.imA_from_kerR",
      "group.membership",
      "group.closure",
      "group.inverse_is_adjoint",
      "group.determinant_unit",
      "algebra.membership",
      "algebra.commutator_closed",
      "algebra.dimension",
      "gradient.defining_left",
      "gradient.defining_right",
      "gradient.left_right_relation",
      "gradient.fd_agreement",
      "gradient.equivariance",
      "gradient.action_compat",
      "correspondence.roundtrip",
      "correspondence.diagonal_invariance",
      "generators.left_expansion",
      "generators.right_expansion",
      "laplacian.left_right_coincide",
      "laplacian.euclidean_classical",
      "laplacian.minkowski_wave",
      "laplacian.symplectic_zero",
      "laplacian.linearity",
      "laplacian.product_rule_left",
      "laplacian.product_rule_right",
      "laplacian.product_rule_symmetric",
      "laplacian.equivariance",
      "laplacian.harmonic_transport",
  };
  return manifest;
}

BilinearForm random_form(Rng& rng, int n) {
  for (;;) {
    const Matrix m = rng.matrix(n, n, 1.0);
    const RankFactorization rf = rank_factor(m);
    if (rf.singular_values.back() > 1e-3 * rf.singular_values.front())
      return BilinearForm::from_matrix(m);
  }
}

BilinearForm form_for_kind(Rng& rng, StructureKind kind, int n) {
  switch (kind) {
    case StructureKind::euclidean: return canonical(StructureKind::euclidean, n);
    case StructureKind::minkowski: return canonical(StructureKind::minkowski, n);
    case StructureKind::pseudo_euclidean:
      return canonical(StructureKind::pseudo_euclidean, n, rng.uniform_int(1, n - 1));
    case StructureKind::symplectic: return canonical(StructureKind::symplectic, n);
    case StructureKind::general: return random_form(rng, n);
  }
  throw InvalidParameters("form_for_kind: unknown kind");
}

Matrix random_operator(Rng& rng, int n) { return rng.matrix(n, n, 1.0); }

Matrix random_rank_deficient(Rng& rng, int n) {
  for (;;) {
    const int r = rng.uniform_int(1, n - 1);
    const Matrix a = rng.matrix(n, r, 1.0) * rng.matrix(r, n, 1.0);
    const RankFactorization rf = rank_factor(a);
    // keep the rank gap well separated so downstream rank decisions are stable
    if (rf.rank == r && rf.singular_values[static_cast<std::size_t>(r - 1)] >
                            1e-4 * rf.singular_values.front())
      return a;
  }
}

ScalarField random_polynomial(Rng& rng, int nvars, int max_degree, int terms) {
  ScalarField acc = ScalarField::constant(rng.uniform(-1.0, 1.0), nvars);
  for (int t = 0; t < terms; ++t) {
    const int degree = rng.uniform_int(1, max_degree);
    ScalarField mono = ScalarField::constant(rng.uniform(-2.0, 2.0), nvars);
    for (int d = 0; d < degree; ++d)
      mono = mono * ScalarField::variable(rng.uniform_int(1, nvars), nvars);
    acc = acc + mono;
  }
  return acc;
}

ScalarField random_smooth(Rng& rng, int nvars) {
  ScalarField acc = random_polynomial(rng, nvars, 3, 2);
  acc = acc + rng.uniform(-2.0, 2.0) * sin(ScalarField::variable(rng.uniform_int(1, nvars), nvars));
  acc = acc + rng.uniform(-2.0, 2.0) *
                  (cos(ScalarField::variable(rng.uniform_int(1, nvars), nvars)) *
                   ScalarField::variable(rng.uniform_int(1, nvars), nvars));
  acc = acc + rng.uniform(-1.0, 1.0) *
                  exp(0.3 * ScalarField::variable(rng.uniform_int(1, nvars), nvars));
  return acc;
}

VectorField random_polynomial_field(Rng& rng, int nvars, int max_degree) {
  std::vector<ScalarField> components;
  components.reserve(static_cast<std::size_t>(nvars));
  for (int i = 0; i < nvars; ++i) components.push_back(random_polynomial(rng, nvars, max_degree, 3));
  return VectorField::from_components(std::move(components));
}

std::vector<Vector> random_points(Rng& rng, int count, int dim, double box) {
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) points.push_back(rng.vector(dim, box));
  return points;
}

namespace {

// Collects per-identity maxima across trials, emitted in manifest order.
class Aggregator {
 public:
  explicit Aggregator(const SuiteConfig& config) : config_(config) {}

  void add(const std::string& name, double residual, int trials = 1) {
    auto& slot = slots_[name];
    slot.first = std::max(slot.first, residual);
    slot.second += trials;
  }

  void absorb(const CheckReport& report) { add(report.name, report.max_residual, report.trials); }
  void absorb(const IdentityReport& report) {
    for (const CheckReport& check : report.checks) absorb(check);
  }

  std::vector<CheckReport> finish() const {
    std::vector<CheckReport> checks;
    for (const std::string& name : identity_manifest()) {
      const auto it = slots_.find(name);
      if (it == slots_.end()) continue;
      checks.push_back(CheckReport::make(name, it->second.second, it->second.first,
                                         config_.tolerance_for(name)));
    }
    // anything not in the manifest would be a coverage bug; surface it at the end
    for (const auto& [name, slot] : slots_) {
      if (std::find(identity_manifest().begin(), identity_manifest().end(), name) ==
          identity_manifest().end())
        checks.push_back(CheckReport::make(name, slot.second, slot.first,
                                           config_.tolerance_for(name)));
    }
    return checks;
  }

 private:
  const SuiteConfig& config_;
  std::map<std::string, std::pair<double, int>> slots_;  // name -> (max residual, trials)
};

ScalarField classical_laplacian_field(const ScalarField& f) {
  ScalarField acc = ScalarField::constant(0.0, f.nvars());
  for (int i = 1; i <= f.nvars(); ++i) acc = acc + f.differentiate(i).differentiate(i);
  return acc;
}

void run_trial(const SuiteConfig& cfg, StructureKind kind, std::uint64_t trial_seed,
               Aggregator& agg) {
  Rng rng(trial_seed);
  int n = rng.uniform_int(cfg.n_min, cfg.n_max);
  if (kind == StructureKind::symplectic) {
    if (n % 2 != 0) n = (n + 1 <= cfg.n_max) ? n + 1 : n - 1;
    if (n < 2) n = 2;
  }

  const BilinearForm form = form_for_kind(rng, kind, n);
  const GeometricPair pair = geometric_pair(form);
  const Matrix& m = form.gram();
  const Matrix& rep = pair.rep;
  const double form_scale = m.norm() * rep.norm();
  const double tol = cfg.tol_identity;

  // --- pair law ------------------------------------------------------------
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.vector(n, cfg.point_box);
    const Vector y = rng.vector(n, cfg.point_box);
    const double residual = std::abs(x.dot(y) - form.evaluate(x, rep * y));
    agg.add("pair.defining", residual / (1.0 + x.norm() * y.norm() * form_scale));
  }

  // --- adjoints --------------------------------------------------------------
  const Matrix a1 = random_operator(rng, n);
  const Matrix a2 = random_operator(rng, n);
  const Matrix adj_l = adjoint(pair, a1, Side::left);
  const Matrix adj_r = adjoint(pair, a1, Side::right);
  for (int k = 0; k < 10; ++k) {
    const Vector x = rng.vector(n, cfg.point_box);
    const Vector y = rng.vector(n, cfg.point_box);
    const double scale = 1.0 + a1.norm() * x.norm() * y.norm() * m.norm();
    agg.add("adjoint.defining_left",
            std::abs(form.evaluate(adj_l * x, y) - form.evaluate(x, a1 * y)) / scale);
    agg.add("adjoint.defining_right",
            std::abs(form.evaluate(a1 * x, y) - form.evaluate(x, adj_r * y)) / scale);
  }

  const AdjointIdentityReport adj_report =
      check_adjoint_identities(pair, a1, a2, tol, Rng::split(trial_seed, 1));
  for (const CheckReport& check : adj_report.universal) agg.absorb(check);
  double involution_worst = 0.0;
  for (const CheckReport& check : adj_report.involution)
    involution_worst = std::max(involution_worst, check.max_residual);
  if (adj_report.epsilon_symmetric) {
    for (const CheckReport& check : adj_report.involution) agg.absorb(check);
    agg.add("adjoint.involution_consistency", involution_worst);
  } else {
    agg.add("adjoint.involution_consistency", involution_worst > kSharpFailure ? 0.0 : 1.0);
  }
  agg.add("adjoint.determinant",
          std::abs(adj_l.determinant() - a1.determinant()) / (1.0 + std::abs(a1.determinant())));

  // --- subspaces -------------------------------------------------------------
  const Matrix deficient = random_rank_deficient(rng, n);
  std::vector<Vector> spanning;
  const int span_count = rng.uniform_int(1, n - 1);
  for (int i = 0; i < span_count; ++i) spanning.push_back(rng.vector(n, 1.0));
  const Subspace v = Subspace::from_vectors(spanning, n);

  const Subspace perp_l = perp(form, v, Side::left);
  const Subspace perp_r = perp(form, v, Side::right);
  agg.add("perp.dimension", std::abs(perp_l.dim() - (n - v.dim())) +
                                std::abs(perp_r.dim() - (n - v.dim())));
  agg.add("perp.double_perp",
          subspace_equal(perp(form, perp_l, Side::right), v).distance);
  agg.add("perp.double_perp",
          subspace_equal(perp(form, perp_r, Side::left), v).distance);

  const StructureClass cls = classify(form);
  if (cls.kind != StructureKind::general)
    agg.add("perp.left_right_coincide", subspace_equal(perp_l, perp_r).distance);

  for (const CheckReport& check : check_kernel_image_theorem(pair, deficient, tol).checks) {
    if (check.name.rfind("double_perp.", 0) == 0) agg.add("perp.double_perp", check.max_residual);
    else agg.absorb(check);
  }

  // --- symmetry group and algebra --------------------------------------------
  const AlgebraBasis basis = algebra_basis(pair);
  GroupSample h = [&] {
    std::vector<Matrix> elements;
    for (int i = 0; i < cfg.group_sample; ++i)
      elements.push_back(sample_group_element(basis, Rng::split(trial_seed, 100 + i), 1.0));
    return GroupSample::user(pair, std::move(elements), tol::group_membership,
                             GroupSample::Provenance::sampled);
  }();

  const double rep_norm = rep.norm();
  for (const Matrix& g : h.elements) {
    const GroupMembership membership = in_group(pair, g);
    agg.add("group.membership", membership.residual / rep_norm);
    agg.add("group.determinant_unit", membership.det_residual);
    const Matrix g_inv = inverse(g);
    agg.add("group.inverse_is_adjoint",
            std::max((g_inv - adjoint(pair, g, Side::left)).norm(),
                     (g_inv - adjoint(pair, g, Side::right)).norm()) /
                (1.0 + g_inv.norm()));
    agg.add("group.closure", in_group(pair, g_inv).residual / rep_norm);
  }
  for (std::size_t i = 0; i + 1 < h.elements.size(); ++i)
    agg.add("group.closure",
            in_group(pair, Matrix(h.elements[i] * h.elements[i + 1])).residual / rep_norm);

  for (const Matrix& x : basis.elements)
    agg.add("algebra.membership", in_algebra(pair, x).residual / (1.0 + rep_norm));
  for (std::size_t i = 0; i < basis.elements.size(); ++i)
    for (std::size_t j = i + 1; j < basis.elements.size(); ++j) {
      const Matrix comm = basis.elements[i] * basis.elements[j] - basis.elements[j] * basis.elements[i];
      agg.add("algebra.commutator_closed", in_algebra(pair, comm).residual / (1.0 + rep_norm));
    }
  if (kind == StructureKind::euclidean || kind == StructureKind::minkowski ||
      kind == StructureKind::pseudo_euclidean)
    agg.add("algebra.dimension", std::abs(basis.dim() - n * (n - 1) / 2));
  else if (kind == StructureKind::symplectic)
    agg.add("algebra.dimension", std::abs(basis.dim() - n * (n + 1) / 2));

  // --- gradient calculus ------------------------------------------------------
  const std::vector<Vector> points = random_points(rng, cfg.points, n, cfg.point_box);
  const ScalarField fpoly = random_polynomial(rng, n);
  const ScalarField gpoly = random_polynomial(rng, n);
  const ScalarField ftrig = random_smooth(rng, n);
  const ScalarField finv = quadratic_form_field(form);

  const Matrix lr_relation = rep.transpose() * m;  // rep^T rep^{-1}
  for (const ScalarField* f : {&fpoly, &ftrig}) {
    for (std::size_t pi = 0; pi < points.size() && pi < 5; ++pi) {
      const Vector& x = points[pi];
      const Vector euclid_grad = grad(*f, x);
      const Vector left = grad_b(pair, *f, x, Side::left);
      const Vector right = grad_b(pair, *f, x, Side::right);
      for (int k = 0; k < 3; ++k) {
        const Vector dir = rng.vector(n, 1.0);
        const double scale = 1.0 + euclid_grad.norm() * dir.norm() * m.norm();
        agg.add("gradient.defining_left",
                std::abs(form.evaluate(left, dir) - euclid_grad.dot(dir)) / scale);
        agg.add("gradient.defining_right",
                std::abs(form.evaluate(dir, right) - euclid_grad.dot(dir)) / scale);
      }
      agg.add("gradient.left_right_relation",
              (left - lr_relation * right).norm() / (1.0 + left.norm()));
      agg.add("gradient.fd_agreement",
              (euclid_grad - fd_grad(*f, x)).norm() / std::max(1.0, euclid_grad.norm()));
    }
  }

  agg.absorb(gradient_equivariance_suite(pair, finv, h, points, tol));
  agg.absorb(gradient_equivariance_suite(pair, fpoly, h, points, tol));
  agg.absorb(laplacian_equivariance(pair, fpoly, h, points, tol));

  // --- laplacian --------------------------------------------------------------
  const ScalarField lap_poly = laplacian_b_field(pair, fpoly);
  const ScalarField div_left = divergence(grad_b_field(pair, fpoly, Side::left));
  const ScalarField div_right = divergence(grad_b_field(pair, fpoly, Side::right));
  for (const Vector& x : points) {
    const double lap = lap_poly.eval(x);
    agg.add("laplacian.left_right_coincide",
            std::max(std::abs(div_left.eval(x) - lap), std::abs(div_right.eval(x) - lap)) /
                (1.0 + std::abs(lap)));
  }

  if (kind == StructureKind::euclidean) {
    const ScalarField classical = classical_laplacian_field(fpoly);
    for (const Vector& x : points) {
      const double expected = classical.eval(x);
      agg.add("laplacian.euclidean_classical",
              std::abs(lap_poly.eval(x) - expected) / (1.0 + std::abs(expected)));
    }
  }
  if (kind == StructureKind::minkowski) {
    // x1^2 + xn^2 mixes one plus and the minus axis, so the wave operator kills it
    const ScalarField wave = pow(ScalarField::variable(1, n), 2) + pow(ScalarField::variable(n, n), 2);
    for (const Vector& x : points)
      agg.add("laplacian.minkowski_wave", std::abs(laplacian_b(pair, wave, x)));
  }
  if (kind == StructureKind::symplectic) {
    for (const ScalarField* f : {&fpoly, &gpoly, &ftrig}) {
      for (const Vector& x : points) {
        const Matrix hess = hessian(*f, x);
        agg.add("laplacian.symplectic_zero",
                std::abs((rep.array() * hess.array()).sum()) / (1.0 + rep_norm * hess.norm()));
      }
    }
  }

  agg.absorb(product_rule_check(pair, fpoly, gpoly, points, tol, Rng::split(trial_seed, 2)));

  // b-harmonic functions stay b-harmonic under the group action
  std::optional<ScalarField> harmonic;
  if (kind == StructureKind::euclidean)
    harmonic = pow(ScalarField::variable(1, n), 2) - pow(ScalarField::variable(2, n), 2);
  else if (kind == StructureKind::minkowski || kind == StructureKind::pseudo_euclidean)
    harmonic = pow(ScalarField::variable(1, n) - ScalarField::variable(n, n), 3);
  else if (kind == StructureKind::symplectic)
    harmonic = fpoly;
  if (harmonic) {
    for (std::size_t gi = 0; gi < h.elements.size() && gi < 3; ++gi) {
      const ScalarField acted = act_scalar(h.elements[gi], *harmonic);
      const ScalarField lap_acted = laplacian_b_field(pair, acted);
      for (const Vector& x : points) {
        const Matrix hess = hessian(acted, x);
        agg.add("laplacian.harmonic_transport",
                std::abs(lap_acted.eval(x)) / (1.0 + rep_norm * hess.norm()));
      }
    }
  }

  // --- correspondence and generators -------------------------------------------
  const VectorField fvec = random_polynomial_field(rng, n);
  const VectorField recovered_l = recover_field(pair, pair_field(pair, fvec, Side::left), Side::left);
  const VectorField recovered_r = recover_field(pair, pair_field(pair, fvec, Side::right), Side::right);
  for (const Vector& x : points) {
    const Vector expected = fvec.eval(x);
    const double scale = 1.0 + expected.norm();
    agg.add("correspondence.roundtrip", (recovered_l.eval(x) - expected).norm() / scale);
    agg.add("correspondence.roundtrip", (recovered_r.eval(x) - expected).norm() / scale);
  }

  {
    const GroupSample diag = diagonal_sample(h);
    const std::vector<Vector> points2n = random_points(rng, cfg.points, 2 * n, cfg.point_box);
    const ScalarField paired = pair_field(pair, VectorField::identity(n), Side::left);
    CheckReport diag_check = check_invariant(paired, diag, points2n, tol);
    diag_check.name = "correspondence.diagonal_invariance";
    agg.absorb(diag_check);
    const ScalarField paired_grad =
        pair_field(pair, grad_b_field(pair, finv, Side::left), Side::left);
    diag_check = check_invariant(paired_grad, diag, points2n, tol);
    diag_check.name = "correspondence.diagonal_invariance";
    agg.absorb(diag_check);
  }

  if (kind == StructureKind::euclidean) {
    // first-fundamental-theorem generators <x,x>, <x,y>, <y,y> on 2n variables
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

    agg.absorb(generator_expansion_check(pair, v2, us, VectorField::identity(n), points,
                                         tol::roundtrip, v2));

    std::vector<ScalarField> cubic;
    const ScalarField norm2 = quadratic_form_field(form);
    for (int i = 1; i <= n; ++i) cubic.push_back(norm2 * ScalarField::variable(i, n));
    agg.absorb(generator_expansion_check(pair, v1 * v2, us, VectorField::from_components(cubic),
                                         points, tol::roundtrip, v3 * v2));
  }
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Aggregator agg(config);
  for (const StructureKind kind : config.kinds) {
    for (int trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t trial_seed =
          Rng::split(config.seed, static_cast<std::uint64_t>(kind_index(kind)),
                     static_cast<std::uint64_t>(trial));
      try {
        run_trial(config, kind, trial_seed, agg);
      } catch (const Error&) {
        // failures must be report entries, not exceptions; an entry outside
        // the manifest also trips the coverage test
        agg.add("harness.exception", 1.0);
      }
    }
  }

  SuiteReport report;
  report.config = config;
  report.checks = agg.finish();
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const CheckReport& c) { return c.pass; });
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace bform
