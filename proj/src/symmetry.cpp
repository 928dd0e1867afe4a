#include "bform/symmetry.hpp"

#include <cmath>

#include "bform/adjoints.hpp"
#include "bform/random.hpp"

namespace bform {

GroupMembership in_group(const GeometricPair& pair, const Matrix& op, double tol) {
  const int n = pair.dim();
  if (op.rows() != n || op.cols() != n)
    throw ShapeMismatch("in_group: operator dimension does not match the pair");
  const Matrix& r = pair.rep;
  GroupMembership result;
  result.residual = (op * r * op.transpose() - r).norm();
  const double det = op.determinant();
  result.det_residual = std::abs(det * det - 1.0);
  result.member = result.residual <= tol * r.norm();
  return result;
}

AlgebraMembership in_algebra(const GeometricPair& pair, const Matrix& op, double tol) {
  const int n = pair.dim();
  if (op.rows() != n || op.cols() != n)
    throw ShapeMismatch("in_algebra: operator dimension does not match the pair");
  const Matrix& r = pair.rep;
  AlgebraMembership result;
  result.residual = (op * r + r * op.transpose()).norm();
  result.adjoint_residual = (adjoint(pair, op, Side::left) + op).norm();
  result.member = result.residual <= tol * op.norm() * r.norm();
  return result;
}

AlgebraBasis algebra_basis(const GeometricPair& pair, double tol) {
  const int n = pair.dim();
  const Matrix& r = pair.rep;

  // Columns of the vectorized map X -> X R + R X^T, one per elementary matrix.
  Matrix vectorized(n * n, n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      const Matrix mapped = e * r + r * e.transpose();
      vectorized.col(j * n + i) = Eigen::Map<const Vector>(mapped.data(), n * n);
    }
  }

  const Matrix null_basis = rank_factor(vectorized, tol).null_space;
  AlgebraBasis basis{pair, {}};
  basis.elements.reserve(static_cast<std::size_t>(null_basis.cols()));
  for (Eigen::Index c = 0; c < null_basis.cols(); ++c) {
    Matrix element = Eigen::Map<const Matrix>(null_basis.col(c).data(), n, n);
    if (!in_algebra(pair, element).member)
      throw Error("algebra_basis: null-space element failed the membership residual");
    basis.elements.push_back(std::move(element));
  }
  return basis;
}

Matrix sample_group_element(const AlgebraBasis& basis, std::uint64_t seed, double scale) {
  const int n = basis.pair.dim();
  if (basis.elements.empty()) return Matrix::Identity(n, n);
  Rng rng(seed);
  Matrix generator = Matrix::Zero(n, n);
  for (const Matrix& element : basis.elements)
    generator += rng.uniform(-scale, scale) * element;
  return mat_exp(generator);
}

Matrix sample_group_element(const GeometricPair& pair, std::uint64_t seed, double scale) {
  return sample_group_element(algebra_basis(pair), seed, scale);
}

Matrix axis_reflection(int n, int axis) {
  if (axis < 0 || axis >= n) throw InvalidParameters("axis_reflection: axis out of range");
  Matrix m = Matrix::Identity(n, n);
  m(axis, axis) = -1.0;
  return m;
}

Matrix parity(int n) { return -Matrix::Identity(n, n); }

}  // namespace bform
