#include "bform/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace bform {

RankFactorization rank_factor(const Matrix& a, double tol) {
  if (!a.allFinite()) throw InvalidMatrix("rank_factor: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();

  RankFactorization rf;
  rf.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;  // rank 0 when sigma_max == 0
  rf.rank = rank;
  rf.column_space = svd.matrixU().leftCols(rank);
  rf.null_space = svd.matrixV().rightCols(a.cols() - rank);
  return rf;
}

Matrix mat_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("mat_exp: matrix must be square");
  if (!a.allFinite()) throw InvalidMatrix("mat_exp: matrix has non-finite entries");

  // Scale until |A|/2^s <= 0.5, run an 18-term Taylor series, square back.
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.5 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix x = a * std::ldexp(1.0, -squarings);

  const Eigen::Index n = a.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 18; ++k) {
    term = (term * x) / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

Matrix inverse(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw ShapeMismatch("inverse: matrix must be square");
  if (!a.allFinite()) throw InvalidMatrix("inverse: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin <= tol * smax) {
    std::ostringstream msg;
    msg << "inverse: singular at tolerance " << tol << " (sigma_min = " << smin
        << ", sigma_max = " << smax << ")";
    throw SingularMatrix(msg.str());
  }
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace bform
