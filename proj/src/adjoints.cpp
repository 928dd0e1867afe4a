#include "bform/adjoints.hpp"

#include <algorithm>
#include <cmath>

#include "bform/random.hpp"

namespace bform {

Matrix adjoint(const GeometricPair& pair, const Matrix& op, Side side) {
  const int n = pair.dim();
  if (op.rows() != n || op.cols() != n)
    throw ShapeMismatch("adjoint: operator dimension does not match the pair");
  const Matrix& r = pair.rep;
  const Matrix& gram = pair.form.gram();  // gram = r^{-1}
  if (side == Side::left) return r.transpose() * op.transpose() * gram.transpose();
  return r * op.transpose() * gram;
}

namespace {

double rel(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace

bool AdjointIdentityReport::universal_pass() const {
  return std::all_of(universal.begin(), universal.end(),
                     [](const CheckReport& c) { return c.pass; });
}

bool AdjointIdentityReport::consistent() const {
  const bool held = std::all_of(involution.begin(), involution.end(),
                                [](const CheckReport& c) { return c.pass; });
  return held == epsilon_symmetric;
}

AdjointIdentityReport check_adjoint_identities(const GeometricPair& pair, const Matrix& a1,
                                               const Matrix& a2, double tol, std::uint64_t seed) {
  const int n = pair.dim();
  if (a1.rows() != n || a1.cols() != n || a2.rows() != n || a2.cols() != n)
    throw ShapeMismatch("check_adjoint_identities: operator dimension mismatch");

  AdjointIdentityReport report;
  const double op_scale = a1.norm() * a2.norm();

  const Matrix l1 = adjoint(pair, a1, Side::left);
  const Matrix l2 = adjoint(pair, a2, Side::left);
  const Matrix r1 = adjoint(pair, a1, Side::right);
  const Matrix r2 = adjoint(pair, a2, Side::right);

  Rng rng(Rng::split(seed, 0x9d2c5680));
  const double c1 = rng.uniform(-2.0, 2.0);
  const double c2 = rng.uniform(-2.0, 2.0);
  const double lin = std::max(
      (adjoint(pair, Matrix(c1 * a1 + c2 * a2), Side::left) - (c1 * l1 + c2 * l2)).norm(),
      (adjoint(pair, Matrix(c1 * a1 + c2 * a2), Side::right) - (c1 * r1 + c2 * r2)).norm());
  report.universal.push_back(
      CheckReport::make("adjoint.linearity", 2, rel(lin, a1.norm() + a2.norm()), tol));

  const double cancel =
      std::max({(adjoint(pair, l1, Side::right) - a1).norm(), (adjoint(pair, r1, Side::left) - a1).norm(),
                (adjoint(pair, l2, Side::right) - a2).norm(), (adjoint(pair, r2, Side::left) - a2).norm()});
  report.universal.push_back(
      CheckReport::make("adjoint.double_adjoint", 4, rel(cancel, a1.norm() + a2.norm()), tol));

  const double mult =
      std::max((adjoint(pair, Matrix(a1 * a2), Side::left) - l2 * l1).norm(),
               (adjoint(pair, Matrix(a1 * a2), Side::right) - r2 * r1).norm());
  report.universal.push_back(
      CheckReport::make("adjoint.anti_multiplicative", 2, rel(mult, op_scale), tol));

  // Inverse compatibility only applies to invertible operators. Checked as
  // (A^{-1})* A* == Id, which avoids inverting the adjoint itself.
  bool invertible = true;
  Matrix a1_inv;
  try {
    a1_inv = inverse(a1, 1e-6);
  } catch (const SingularMatrix&) {
    invertible = false;
  }
  if (invertible) {
    const Matrix id = Matrix::Identity(n, n);
    const double inv =
        std::max((adjoint(pair, a1_inv, Side::left) * l1 - id).norm(),
                 (adjoint(pair, a1_inv, Side::right) * r1 - id).norm());
    report.universal.push_back(
        CheckReport::make("adjoint.inverse_compat", 2, rel(inv, a1_inv.norm() * a1.norm()), tol));
  } else {
    report.universal.push_back(CheckReport::make("adjoint.inverse_compat", 0, 0.0, tol,
                                                 "skipped: operator not invertible"));
  }

  const Matrix comm = a1 * a2 - a2 * a1;
  const double commutator =
      std::max((adjoint(pair, comm, Side::left) - (l2 * l1 - l1 * l2)).norm(),
               (adjoint(pair, comm, Side::right) - (r2 * r1 - r1 * r2)).norm());
  report.universal.push_back(
      CheckReport::make("adjoint.commutator", 2, rel(commutator, op_scale), tol));

  const double invol_left = std::max((adjoint(pair, l1, Side::left) - a1).norm(),
                                     (adjoint(pair, l2, Side::left) - a2).norm());
  const double invol_right = std::max((adjoint(pair, r1, Side::right) - a1).norm(),
                                      (adjoint(pair, r2, Side::right) - a2).norm());
  const double lr_agree = std::max((l1 - r1).norm(), (l2 - r2).norm());
  const double op_norms = a1.norm() + a2.norm();
  report.involution.push_back(
      CheckReport::make("adjoint.involution_left", 2, rel(invol_left, op_norms), tol));
  report.involution.push_back(
      CheckReport::make("adjoint.involution_right", 2, rel(invol_right, op_norms), tol));
  report.involution.push_back(
      CheckReport::make("adjoint.left_right_agree", 2, rel(lr_agree, op_norms), tol));

  const Matrix& r = pair.rep;
  const double sym = (r.transpose() - r).norm() / r.norm();
  const double skew = (r.transpose() + r).norm() / r.norm();
  report.epsilon_residual = std::min(sym, skew);
  report.epsilon_symmetric = report.epsilon_residual <= tol;
  report.epsilon = !report.epsilon_symmetric ? 0 : (sym <= skew ? 1 : -1);
  return report;
}

}  // namespace bform
