#pragma once

#include <cstdint>
#include <vector>

#include "bform/forms.hpp"

namespace bform {

struct GroupMembership {
  bool member = false;
  double residual = 0.0;      // |A R A^T - R|_F, against tol * |R|_F
  double det_residual = 0.0;  // |det(A)^2 - 1|
};

/// Membership in the symmetry group {A : A R A^T = R} of the pair.
GroupMembership in_group(const GeometricPair& pair, const Matrix& op,
                         double tol = tol::group_membership);

struct AlgebraMembership {
  bool member = false;
  double residual = 0.0;          // |X R + R X^T|_F against tol * |X| |R|
  double adjoint_residual = 0.0;  // cross-check |X^{*L} + X|_F
};

/// Membership in the Lie algebra {X : X R = -R X^T}, equivalently
/// {X : X^{*L} = -X}.
AlgebraMembership in_algebra(const GeometricPair& pair, const Matrix& op,
                             double tol = tol::group_membership);

/// Frobenius-orthonormal basis of the Lie algebra, found as the null space
/// of the vectorized map X -> X R + R X^T.
struct AlgebraBasis {
  GeometricPair pair;
  std::vector<Matrix> elements;

  int dim() const { return static_cast<int>(elements.size()); }
};

AlgebraBasis algebra_basis(const GeometricPair& pair, double tol = tol::rank);

/// exp(sum c_i X_i) with coefficients drawn uniformly from (-scale, scale).
/// Reaches the identity component only; deterministic for a fixed seed.
/// An empty algebra yields the identity.
Matrix sample_group_element(const AlgebraBasis& basis, std::uint64_t seed, double scale = 1.0);
Matrix sample_group_element(const GeometricPair& pair, std::uint64_t seed, double scale = 1.0);

/// diag(1,..,-1,..,1) with -1 at `axis` (0-based). A group member for every
/// diagonal Gram matrix; composes with sampled elements to reach
/// non-identity components of the orthogonal-type groups.
Matrix axis_reflection(int n, int axis);

/// -I, a group member for every form.
Matrix parity(int n);

}  // namespace bform
