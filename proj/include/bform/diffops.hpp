#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bform/fields.hpp"
#include "bform/forms.hpp"
#include "bform/report.hpp"
#include "bform/symmetry.hpp"

namespace bform {

/// A finite sample of symmetry-group elements standing in for a subgroup H.
/// Every element is validated against in_group at construction.
struct GroupSample {
  enum class Provenance { sampled, user_supplied, canonical };

  GeometricPair pair;
  std::vector<Matrix> elements;
  Provenance provenance = Provenance::user_supplied;

  static GroupSample sampled(const GeometricPair& pair, int count, std::uint64_t seed,
                             double scale = 1.0);
  static GroupSample user(const GeometricPair& pair, std::vector<Matrix> elements,
                          double tol = tol::group_membership,
                          Provenance provenance = Provenance::user_supplied);
};

/// Elements diag(A, A) acting on R^n x R^n, with the block-diagonal pair;
/// the diagonal action used by the two-argument invariance checks.
GroupSample diagonal_sample(const GroupSample& h);

/// Form-adapted gradients: left = rep^T grad f, right = rep grad f. They
/// satisfy b(left, v) = <grad f, v> = b(v, right) for all v.
Vector grad_b(const GeometricPair& pair, const ScalarField& f, const Vector& x, Side side);
VectorField grad_b_field(const GeometricPair& pair, const ScalarField& f, Side side);

/// The form Laplacian sum_ij rep_ij d_i d_j f; the divergence of either
/// gradient. Specializes to the Laplace operator (euclidean), the wave
/// operator (minkowski), and the zero operator (symplectic).
double laplacian_b(const GeometricPair& pair, const ScalarField& f, const Vector& x);
ScalarField laplacian_b_field(const GeometricPair& pair, const ScalarField& f);

/// sum_i d_i F_i as an expression; requires a symbolic field.
ScalarField divergence(const VectorField& f);

/// Scalar action (tau(A) f)(x) = f(A^{-1} x).
ScalarField act_scalar(const Matrix& a, const ScalarField& f);
/// Vector-field action (A . F)(x) = A F(A^{-1} x).
VectorField act_vector(const Matrix& a, const VectorField& f);

CheckReport check_invariant(const ScalarField& f, const GroupSample& h,
                            const std::vector<Vector>& points, double tol = tol::identity);
CheckReport check_equivariant(const VectorField& f, const GroupSample& h,
                              const std::vector<Vector>& points, double tol = tol::identity);

/// (a) if f is H-invariant, both gradients must be H-equivariant
///     ("gradient.equivariance"; vacuous-pass when the premise fails);
/// (b) for arbitrary f and every A in H, grad_b(tau(A) f) must equal the
///     vector action applied to grad_b f ("gradient.action_compat").
IdentityReport gradient_equivariance_suite(const GeometricPair& pair, const ScalarField& f,
                                           const GroupSample& h, const std::vector<Vector>& points,
                                           double tol = tol::identity);

/// laplacian_b(tau(A) f)(x) vs (laplacian_b f)(A^{-1} x).
CheckReport laplacian_equivariance(const GeometricPair& pair, const ScalarField& f,
                                   const GroupSample& h, const std::vector<Vector>& points,
                                   double tol = tol::identity);

/// Linearity plus the left/right product rules
///   lap(fg) = f lap g + g lap f + b(grad_b f, grad_b g) + b(grad_b g, grad_b f)
/// and, for symmetric forms, the collapsed 2 b(grad f, grad g) variant.
IdentityReport product_rule_check(const GeometricPair& pair, const ScalarField& f,
                                  const ScalarField& g, const std::vector<Vector>& points,
                                  double tol = tol::identity, std::uint64_t seed = 0);

/// Two-argument pairing of a vector field: left -> b(F(x), y), right ->
/// b(x, F(y)), on 2n variables (x block first).
ScalarField pair_field(const GeometricPair& pair, const VectorField& f, Side side = Side::left);

/// Inverse of pair_field as a numeric evaluator: left recovers
/// x -> rep^T grad_y fxy(x, 0); right recovers y -> rep grad_x fxy(0, y).
VectorField recover_field(const GeometricPair& pair, const ScalarField& fxy, Side side);

/// Verifies a supplied generator expansion: F(x) against
///   sum_i d_i ftilde(u(x,0)) * rep^T grad_y u_i(x,0),
/// and, when `gtilde` is given, the mirrored right-gradient expansion at
/// (0,y) for the factorization of b(x, F(y)).
IdentityReport generator_expansion_check(const GeometricPair& pair, const ScalarField& ftilde,
                                         const std::vector<ScalarField>& us, const VectorField& f,
                                         const std::vector<Vector>& points,
                                         double tol = tol::roundtrip,
                                         const std::optional<ScalarField>& gtilde = std::nullopt);

/// x -> b(x, x) as an expression in n variables.
ScalarField quadratic_form_field(const BilinearForm& form);

}  // namespace bform
