#include "bform/subspaces.hpp"

#include <cmath>
#include <sstream>

#include "bform/adjoints.hpp"

namespace bform {

namespace {

// Fix each basis column's sign (largest-magnitude entry positive) so bases
// are reproducible across factorization back-ends.
Matrix sign_normalized(Matrix basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index imax = 0;
    basis.col(j).cwiseAbs().maxCoeff(&imax);
    if (basis(imax, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

}  // namespace

Subspace Subspace::zero(int ambient_dim) {
  if (ambient_dim < 1) throw InvalidParameters("subspace: ambient dimension must be positive");
  return Subspace(Matrix::Zero(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  if (ambient_dim < 1) throw InvalidParameters("subspace: ambient dimension must be positive");
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_vectors(const std::vector<Vector>& vectors, int ambient_dim, double tol) {
  if (vectors.empty()) return zero(ambient_dim);
  Matrix columns(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim)
      throw ShapeMismatch("subspace: vector length does not match ambient dimension");
    columns.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return from_columns(columns, tol);
}

Subspace Subspace::from_columns(const Matrix& columns, double tol) {
  return Subspace(sign_normalized(rank_factor(columns, tol).column_space));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (basis.cols() > 0) {
    const Matrix gram = basis.transpose() * basis;
    if ((gram - Matrix::Identity(basis.cols(), basis.cols())).norm() > 1e-8)
      throw InvalidMatrix("subspace: basis columns are not orthonormal");
  }
  return Subspace(sign_normalized(std::move(basis)));
}

SubspaceComparison subspace_equal(const Subspace& v, const Subspace& w, double tol) {
  if (v.ambient_dim() != w.ambient_dim())
    throw ShapeMismatch("subspace_equal: ambient dimensions differ");
  const double distance = (v.projector() - w.projector()).norm();
  return SubspaceComparison{v.dim() == w.dim() && distance <= tol, distance};
}

Subspace perp(const BilinearForm& form, const Subspace& v, Side side, double tol) {
  const int n = form.dim();
  if (v.ambient_dim() != n) throw ShapeMismatch("perp: ambient dimensions differ");
  if (v.dim() == 0) return Subspace::full(n);

  // left: b(w, v) = 0 for all v  <=>  V^T M^T w = 0
  // right: b(v, w) = 0 for all v <=>  V^T M w = 0
  const Matrix constraints = side == Side::left
                                 ? Matrix(v.basis().transpose() * form.gram().transpose())
                                 : Matrix(v.basis().transpose() * form.gram());
  Subspace result = Subspace::from_orthonormal(sign_normalized(rank_factor(constraints, tol).null_space));
  if (result.dim() != n - v.dim()) {
    std::ostringstream msg;
    msg << "perp: dimension " << result.dim() << " != " << (n - v.dim())
        << "; the form is numerically too close to degenerate";
    throw Error(msg.str());
  }
  return result;
}

Subspace kernel(const Matrix& op, double tol) {
  if (op.rows() != op.cols()) throw ShapeMismatch("kernel: operator must be square");
  return Subspace::from_orthonormal(sign_normalized(rank_factor(op, tol).null_space));
}

Subspace image(const Matrix& op, double tol) {
  if (op.rows() != op.cols()) throw ShapeMismatch("image: operator must be square");
  return Subspace::from_orthonormal(sign_normalized(rank_factor(op, tol).column_space));
}

IdentityReport check_kernel_image_theorem(const GeometricPair& pair, const Matrix& op,
                                          double tol) {
  const int n = pair.dim();
  if (op.rows() != n || op.cols() != n)
    throw ShapeMismatch("check_kernel_image_theorem: operator dimension mismatch");

  const BilinearForm& b = pair.form;
  const Matrix adj_l = adjoint(pair, op, Side::left);
  const Matrix adj_r = adjoint(pair, op, Side::right);

  const Subspace ker = kernel(op);
  const Subspace im = image(op);
  const Subspace ker_l = kernel(adj_l);
  const Subspace ker_r = kernel(adj_r);
  const Subspace im_l = image(adj_l);
  const Subspace im_r = image(adj_r);

  IdentityReport report;
  auto push = [&](const char* name, const Subspace& lhs, const Subspace& rhs) {
    report.checks.push_back(
        CheckReport::make(name, 1, subspace_equal(lhs, rhs, tol).distance, tol));
  };

  push("kernel_image.ker_adjL_is_imA_perpL", ker_l, perp(b, im, Side::left));
  push("kernel_image.ker_adjR_is_imA_perpR", ker_r, perp(b, im, Side::right));
  push("kernel_image.ker_cross_perp", perp(b, ker_l, Side::right), perp(b, ker_r, Side::left));
  push("kernel_image.im_adjL_is_kerA_perpL", im_l, perp(b, ker, Side::left));
  push("kernel_image.im_adjR_is_kerA_perpR", im_r, perp(b, ker, Side::right));
  push("kernel_image.im_cross_perp", perp(b, im_l, Side::right), perp(b, im_r, Side::left));
  push("kernel_image.kerA_from_imL", ker, perp(b, im_l, Side::right));
  push("kernel_image.kerA_from_imR", ker, perp(b, im_r, Side::left));
  push("kernel_image.imA_from_kerL", im, perp(b, ker_l, Side::right));
  push("kernel_image.imA_from_kerR", im, perp(b, ker_r, Side::left));

  push("double_perp.imA_LR", perp(b, perp(b, im, Side::left), Side::right), im);
  push("double_perp.imA_RL", perp(b, perp(b, im, Side::right), Side::left), im);
  push("double_perp.kerA_LR", perp(b, perp(b, ker, Side::left), Side::right), ker);
  push("double_perp.kerA_RL", perp(b, perp(b, ker, Side::right), Side::left), ker);
  return report;
}

}  // namespace bform
