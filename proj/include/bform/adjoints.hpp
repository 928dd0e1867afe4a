#pragma once

#include <cstdint>

#include "bform/forms.hpp"
#include "bform/report.hpp"

namespace bform {

/// Adjoint of an operator with respect to the pair's form:
///   left:  solves b(result * x, y) = b(x, op * y),  result = R^T op^T R^{-T}
///   right: solves b(op * x, y) = b(x, result * y),  result = R op^T R^{-1}
/// where R is the pair's representation operator (R^{-1} is the Gram matrix).
Matrix adjoint(const GeometricPair& pair, const Matrix& op, Side side);

/// Residuals for the adjoint calculus on a pair of sample operators.
/// `universal` entries hold for every form; `involution` entries hold
/// exactly when the form is symmetric or skew-symmetric (rep^T = eps*rep),
/// which `epsilon_symmetric` records.
struct AdjointIdentityReport {
  std::vector<CheckReport> universal;   // linearity, double adjoint, products, inverses, commutators
  std::vector<CheckReport> involution;  // left/right involution, left==right
  bool epsilon_symmetric = false;
  int epsilon = 0;                      // +1 symmetric, -1 skew, 0 otherwise
  double epsilon_residual = 0.0;        // min over eps of |rep^T - eps*rep| / |rep|

  bool universal_pass() const;
  /// True when the involution checks agree with the rep^T = eps*rep predicate.
  bool consistent() const;
};

AdjointIdentityReport check_adjoint_identities(const GeometricPair& pair, const Matrix& a1,
                                               const Matrix& a2, double tol = tol::identity,
                                               std::uint64_t seed = 0);

}  // namespace bform
