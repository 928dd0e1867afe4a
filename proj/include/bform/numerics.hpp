#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bform/errors.hpp"
#include "bform/tolerances.hpp"

namespace bform {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthonormal bases for the column space and kernel of a matrix,
/// together with the singular values that drove the rank decision.
struct RankFactorization {
  int rank = 0;
  Matrix column_space;                  // orthonormal columns spanning the image
  Matrix null_space;                    // orthonormal columns spanning the kernel
  std::vector<double> singular_values;  // descending
};

/// SVD-based rank decision: rank = #{sigma_i > tol * sigma_max}.
RankFactorization rank_factor(const Matrix& a, double tol = tol::rank);

/// exp(A) by scaling-and-squaring with a fixed-length Taylor tail.
Matrix mat_exp(const Matrix& a);

/// Inverse with an explicit conditioning gate: throws SingularMatrix
/// when sigma_min <= tol * sigma_max.
Matrix inverse(const Matrix& a, double tol = tol::rank);

}  // namespace bform
