#include "bform/diffops.hpp"

#include <cmath>

#include "bform/random.hpp"

namespace bform {

GroupSample GroupSample::sampled(const GeometricPair& pair, int count, std::uint64_t seed,
                                 double scale) {
  if (count < 1) throw InvalidParameters("group sample: count must be positive");
  const AlgebraBasis basis = algebra_basis(pair);
  std::vector<Matrix> elements;
  elements.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    elements.push_back(sample_group_element(basis, Rng::split(seed, static_cast<std::uint64_t>(i)), scale));
  return user(pair, std::move(elements), tol::group_membership, Provenance::sampled);
}

GroupSample GroupSample::user(const GeometricPair& pair, std::vector<Matrix> elements, double tol,
                              Provenance provenance) {
  for (const Matrix& a : elements) {
    const GroupMembership check = in_group(pair, a, tol);
    if (!check.member)
      throw InvalidParameters("group sample: element fails the membership residual (" +
                              std::to_string(check.residual) + ")");
  }
  GroupSample h{pair, std::move(elements), provenance};
  return h;
}

GroupSample diagonal_sample(const GroupSample& h) {
  const int n = h.pair.dim();
  const Matrix& m = h.pair.form.gram();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = m;
  block.bottomRightCorner(n, n) = m;
  const GeometricPair pair2 = geometric_pair(BilinearForm::from_matrix(block, h.pair.form.tolerance()));

  std::vector<Matrix> elements;
  elements.reserve(h.elements.size());
  for (const Matrix& a : h.elements) {
    Matrix d = Matrix::Zero(2 * n, 2 * n);
    d.topLeftCorner(n, n) = a;
    d.bottomRightCorner(n, n) = a;
    elements.push_back(std::move(d));
  }
  return GroupSample::user(pair2, std::move(elements), tol::group_membership, h.provenance);
}

Vector grad_b(const GeometricPair& pair, const ScalarField& f, const Vector& x, Side side) {
  if (f.nvars() != pair.dim())
    throw ShapeMismatch("grad_b: field variable count does not match the pair");
  const Vector g = grad(f, x);
  return side == Side::left ? Vector(pair.rep.transpose() * g) : Vector(pair.rep * g);
}

VectorField grad_b_field(const GeometricPair& pair, const ScalarField& f, Side side) {
  const int n = pair.dim();
  if (f.nvars() != n) throw ShapeMismatch("grad_b_field: field variable count mismatch");
  const std::vector<ScalarField> parts = gradient_fields(f);
  std::vector<ScalarField> components;
  components.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ScalarField acc = ScalarField::constant(0.0, n);
    for (int j = 0; j < n; ++j) {
      const double c = side == Side::left ? pair.rep(j, i) : pair.rep(i, j);
      acc = acc + c * parts[static_cast<std::size_t>(j)];
    }
    components.push_back(std::move(acc));
  }
  return VectorField::from_components(std::move(components));
}

double laplacian_b(const GeometricPair& pair, const ScalarField& f, const Vector& x) {
  if (f.nvars() != pair.dim())
    throw ShapeMismatch("laplacian_b: field variable count does not match the pair");
  const Matrix h = hessian(f, x);
  return (pair.rep.array() * h.array()).sum();
}

ScalarField laplacian_b_field(const GeometricPair& pair, const ScalarField& f) {
  const int n = pair.dim();
  if (f.nvars() != n) throw ShapeMismatch("laplacian_b_field: field variable count mismatch");
  ScalarField acc = ScalarField::constant(0.0, n);
  for (int i = 1; i <= n; ++i) {
    const ScalarField di = f.differentiate(i);
    for (int j = 1; j <= n; ++j) {
      const double c = pair.rep(i - 1, j - 1);
      if (c != 0.0) acc = acc + c * di.differentiate(j);
    }
  }
  return acc;
}

ScalarField divergence(const VectorField& f) {
  const auto& parts = f.components();
  if (f.dim() != f.nvars()) throw ShapeMismatch("divergence: field is not square");
  ScalarField acc = ScalarField::constant(0.0, f.nvars());
  for (int i = 1; i <= f.dim(); ++i)
    acc = acc + parts[static_cast<std::size_t>(i - 1)].differentiate(i);
  return acc;
}

ScalarField act_scalar(const Matrix& a, const ScalarField& f) {
  return compose_linear(f, inverse(a));
}

VectorField act_vector(const Matrix& a, const VectorField& f) {
  const int n = f.dim();
  if (a.rows() != n || a.cols() != f.nvars() || n != f.nvars())
    throw ShapeMismatch("act_vector: operator size does not match the field");
  const Matrix a_inv = inverse(a);
  if (f.symbolic()) {
    std::vector<ScalarField> composed;
    composed.reserve(static_cast<std::size_t>(n));
    for (const ScalarField& c : f.components()) composed.push_back(compose_linear(c, a_inv));
    std::vector<ScalarField> components;
    components.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      ScalarField acc = ScalarField::constant(0.0, n);
      for (int j = 0; j < n; ++j) acc = acc + a(i, j) * composed[static_cast<std::size_t>(j)];
      components.push_back(std::move(acc));
    }
    return VectorField::from_components(std::move(components));
  }
  return VectorField::numeric(n, n, [a, a_inv, f](const Vector& x) { return Vector(a * f.eval(a_inv * x)); });
}

CheckReport check_invariant(const ScalarField& f, const GroupSample& h,
                            const std::vector<Vector>& points, double tol) {
  double scale = 1.0;
  for (const Vector& x : points) scale = std::max(scale, std::abs(f.eval(x)));
  double worst = 0.0;
  int trials = 0;
  for (const Matrix& a : h.elements) {
    for (const Vector& x : points) {
      worst = std::max(worst, std::abs(f.eval(a * x) - f.eval(x)) / scale);
      ++trials;
    }
  }
  return CheckReport::make("invariant", trials, worst, tol);
}

CheckReport check_equivariant(const VectorField& f, const GroupSample& h,
                              const std::vector<Vector>& points, double tol) {
  double worst = 0.0;
  int trials = 0;
  for (const Matrix& a : h.elements) {
    const double a_norm = a.norm();
    for (const Vector& x : points) {
      const Vector fx = f.eval(x);
      const double residual = (f.eval(a * x) - a * fx).norm() / (1.0 + a_norm * fx.norm());
      worst = std::max(worst, residual);
      ++trials;
    }
  }
  return CheckReport::make("equivariant", trials, worst, tol);
}

IdentityReport gradient_equivariance_suite(const GeometricPair& pair, const ScalarField& f,
                                           const GroupSample& h, const std::vector<Vector>& points,
                                           double tol) {
  IdentityReport report;

  // (a) the equivariance conclusion is conditional on the invariance premise
  const CheckReport premise = check_invariant(f, h, points, tol);
  if (premise.pass) {
    const CheckReport left = check_equivariant(grad_b_field(pair, f, Side::left), h, points, tol);
    const CheckReport right = check_equivariant(grad_b_field(pair, f, Side::right), h, points, tol);
    report.checks.push_back(CheckReport::make("gradient.equivariance", left.trials + right.trials,
                                              std::max(left.max_residual, right.max_residual), tol));
  } else {
    report.checks.push_back(
        CheckReport::make("gradient.equivariance", 0, 0.0, tol, "vacuous-pass: f is not invariant"));
  }

  // (b) grad_b(tau(A) f) = A grad_b f (A^{-1} x), unconditional
  const VectorField gf_left = grad_b_field(pair, f, Side::left);
  const VectorField gf_right = grad_b_field(pair, f, Side::right);
  double worst = 0.0;
  int trials = 0;
  for (const Matrix& a : h.elements) {
    const Matrix a_inv = inverse(a);
    const ScalarField acted = compose_linear(f, a_inv);
    const VectorField acted_left = grad_b_field(pair, acted, Side::left);
    const VectorField acted_right = grad_b_field(pair, acted, Side::right);
    for (const Vector& x : points) {
      const Vector back = a_inv * x;
      const Vector rhs_left = a * gf_left.eval(back);
      const Vector rhs_right = a * gf_right.eval(back);
      worst = std::max(worst, (acted_left.eval(x) - rhs_left).norm() / (1.0 + rhs_left.norm()));
      worst = std::max(worst, (acted_right.eval(x) - rhs_right).norm() / (1.0 + rhs_right.norm()));
      trials += 2;
    }
  }
  report.checks.push_back(CheckReport::make("gradient.action_compat", trials, worst, tol));
  return report;
}

CheckReport laplacian_equivariance(const GeometricPair& pair, const ScalarField& f,
                                   const GroupSample& h, const std::vector<Vector>& points,
                                   double tol) {
  const ScalarField lap = laplacian_b_field(pair, f);
  double worst = 0.0;
  int trials = 0;
  for (const Matrix& a : h.elements) {
    const Matrix a_inv = inverse(a);
    const ScalarField lap_acted = laplacian_b_field(pair, compose_linear(f, a_inv));
    for (const Vector& x : points) {
      const double rhs = lap.eval(a_inv * x);
      worst = std::max(worst, std::abs(lap_acted.eval(x) - rhs) / (1.0 + std::abs(rhs)));
      ++trials;
    }
  }
  return CheckReport::make("laplacian.equivariance", trials, worst, tol);
}

IdentityReport product_rule_check(const GeometricPair& pair, const ScalarField& f,
                                  const ScalarField& g, const std::vector<Vector>& points,
                                  double tol, std::uint64_t seed) {
  IdentityReport report;
  Rng rng(Rng::split(seed, 0x5bd1e995));
  const double lambda = rng.uniform(-2.0, 2.0);
  const double mu = rng.uniform(-2.0, 2.0);

  const ScalarField lap_f = laplacian_b_field(pair, f);
  const ScalarField lap_g = laplacian_b_field(pair, g);
  const ScalarField lap_combo = laplacian_b_field(pair, lambda * f + mu * g);
  const ScalarField lap_fg = laplacian_b_field(pair, f * g);
  const VectorField gl_f = grad_b_field(pair, f, Side::left);
  const VectorField gl_g = grad_b_field(pair, g, Side::left);
  const VectorField gr_f = grad_b_field(pair, f, Side::right);
  const VectorField gr_g = grad_b_field(pair, g, Side::right);

  const BilinearForm& b = pair.form;
  const bool symmetric =
      (b.gram() - b.gram().transpose()).norm() <= tol::classify * b.gram().norm();

  double worst_lin = 0.0, worst_left = 0.0, worst_right = 0.0, worst_sym = 0.0;
  for (const Vector& x : points) {
    const double lf = lap_f.eval(x);
    const double lg = lap_g.eval(x);
    const double fx = f.eval(x);
    const double gx = g.eval(x);

    worst_lin = std::max(worst_lin, std::abs(lap_combo.eval(x) - (lambda * lf + mu * lg)) /
                                        (1.0 + std::abs(lf) + std::abs(lg)));

    const double lfg = lap_fg.eval(x);
    const double scale = 1.0 + std::abs(lfg) + std::abs(fx * lg) + std::abs(gx * lf);
    const Vector glf = gl_f.eval(x), glg = gl_g.eval(x);
    worst_left = std::max(
        worst_left,
        std::abs(lfg - fx * lg - gx * lf - b.evaluate(glf, glg) - b.evaluate(glg, glf)) / scale);
    const Vector grf = gr_f.eval(x), grg = gr_g.eval(x);
    worst_right = std::max(
        worst_right,
        std::abs(lfg - fx * lg - gx * lf - b.evaluate(grf, grg) - b.evaluate(grg, grf)) / scale);
    if (symmetric)
      worst_sym = std::max(
          worst_sym, std::abs(lfg - fx * lg - gx * lf - 2.0 * b.evaluate(glf, glg)) / scale);
  }

  const int trials = static_cast<int>(points.size());
  report.checks.push_back(CheckReport::make("laplacian.linearity", trials, worst_lin, tol));
  report.checks.push_back(CheckReport::make("laplacian.product_rule_left", trials, worst_left, tol));
  report.checks.push_back(
      CheckReport::make("laplacian.product_rule_right", trials, worst_right, tol));
  if (symmetric)
    report.checks.push_back(
        CheckReport::make("laplacian.product_rule_symmetric", trials, worst_sym, tol));
  return report;
}

ScalarField pair_field(const GeometricPair& pair, const VectorField& f, Side side) {
  const int n = pair.dim();
  if (f.nvars() != n || f.dim() != n)
    throw ShapeMismatch("pair_field: field dimensions do not match the pair");
  const Matrix& m = pair.form.gram();
  const auto& parts = f.components();

  ScalarField acc = ScalarField::constant(0.0, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) == 0.0) continue;
      if (side == Side::left) {
        // b(F(x), y) = sum_ij F_i(x) m_ij y_j
        const ScalarField fi = parts[static_cast<std::size_t>(i)].with_nvars(2 * n);
        acc = acc + m(i, j) * (fi * ScalarField::variable(n + j + 1, 2 * n));
      } else {
        // b(x, F(y)) = sum_ij x_i m_ij F_j(y)
        const ScalarField fj = parts[static_cast<std::size_t>(j)].shift(n, 2 * n);
        acc = acc + m(i, j) * (ScalarField::variable(i + 1, 2 * n) * fj);
      }
    }
  }
  return acc;
}

VectorField recover_field(const GeometricPair& pair, const ScalarField& fxy, Side side) {
  const int n = pair.dim();
  if (fxy.nvars() != 2 * n)
    throw ShapeMismatch("recover_field: expected a field on 2n variables");

  std::vector<ScalarField> partials;
  partials.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    partials.push_back(side == Side::left ? fxy.differentiate(n + j) : fxy.differentiate(j));
  const Matrix action = side == Side::left ? Matrix(pair.rep.transpose()) : pair.rep;

  return VectorField::numeric(n, n, [n, partials, action, side](const Vector& arg) {
    Vector z = Vector::Zero(2 * n);
    if (side == Side::left) z.head(n) = arg;  // evaluate at (x, 0)
    else z.tail(n) = arg;                     // evaluate at (0, y)
    Vector g(n);
    for (int j = 0; j < n; ++j) g(j) = partials[static_cast<std::size_t>(j)].eval(z);
    return Vector(action * g);
  });
}

IdentityReport generator_expansion_check(const GeometricPair& pair, const ScalarField& ftilde,
                                         const std::vector<ScalarField>& us, const VectorField& f,
                                         const std::vector<Vector>& points, double tol,
                                         const std::optional<ScalarField>& gtilde) {
  const int n = pair.dim();
  const int p = static_cast<int>(us.size());
  if (ftilde.nvars() != p)
    throw ShapeMismatch("generator_expansion_check: ftilde arity != generator count");
  if (gtilde && gtilde->nvars() != p)
    throw ShapeMismatch("generator_expansion_check: gtilde arity != generator count");
  for (const ScalarField& u : us)
    if (u.nvars() != 2 * n)
      throw ShapeMismatch("generator_expansion_check: generators must live on 2n variables");
  if (f.nvars() != n || f.dim() != n)
    throw ShapeMismatch("generator_expansion_check: field dimensions do not match the pair");

  // One expansion side: F(arg) vs sum_i d_i tilde(u(z)) * action * block-grad u_i(z).
  auto run_side = [&](const ScalarField& tilde, Side side) {
    const Matrix action = side == Side::left ? Matrix(pair.rep.transpose()) : pair.rep;
    std::vector<ScalarField> tilde_partials;
    for (int i = 1; i <= p; ++i) tilde_partials.push_back(tilde.differentiate(i));
    std::vector<std::vector<ScalarField>> block_grads(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
      for (int j = 1; j <= n; ++j)
        block_grads[static_cast<std::size_t>(i)].push_back(
            side == Side::left ? us[static_cast<std::size_t>(i)].differentiate(n + j)
                               : us[static_cast<std::size_t>(i)].differentiate(j));

    double worst = 0.0;
    for (const Vector& arg : points) {
      Vector z = Vector::Zero(2 * n);
      if (side == Side::left) z.head(n) = arg;
      else z.tail(n) = arg;

      Vector u_at(p);
      for (int i = 0; i < p; ++i) u_at(i) = us[static_cast<std::size_t>(i)].eval(z);

      Vector rhs = Vector::Zero(n);
      for (int i = 0; i < p; ++i) {
        const double coeff = tilde_partials[static_cast<std::size_t>(i)].eval(u_at);
        if (coeff == 0.0) continue;
        Vector block(n);
        for (int j = 0; j < n; ++j)
          block(j) = block_grads[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(z);
        rhs += coeff * (action * block);
      }
      const Vector expected = f.eval(arg);
      worst = std::max(worst, (expected - rhs).norm() / (1.0 + expected.norm()));
    }
    return worst;
  };

  IdentityReport report;
  report.checks.push_back(CheckReport::make("generators.left_expansion",
                                            static_cast<int>(points.size()),
                                            run_side(ftilde, Side::left), tol));
  if (gtilde)
    report.checks.push_back(CheckReport::make("generators.right_expansion",
                                              static_cast<int>(points.size()),
                                              run_side(*gtilde, Side::right), tol));
  return report;
}

ScalarField quadratic_form_field(const BilinearForm& form) {
  const int n = form.dim();
  ScalarField acc = ScalarField::constant(0.0, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double c = form.gram()(i - 1, j - 1);
      if (c != 0.0)
        acc = acc + c * (ScalarField::variable(i, n) * ScalarField::variable(j, n));
    }
  return acc;
}

}  // namespace bform
