#include "bform/forms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <sstream>

namespace bform {

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::euclidean: return "euclidean";
    case StructureKind::pseudo_euclidean: return "pseudo_euclidean";
    case StructureKind::minkowski: return "minkowski";
    case StructureKind::symplectic: return "symplectic";
    case StructureKind::general: return "general";
  }
  return "unknown";
}

std::string to_string(Side side) { return side == Side::left ? "left" : "right"; }

std::optional<StructureKind> structure_kind_from_string(std::string_view name) {
  if (name == "euclidean") return StructureKind::euclidean;
  if (name == "pseudo_euclidean" || name == "pseudo") return StructureKind::pseudo_euclidean;
  if (name == "minkowski") return StructureKind::minkowski;
  if (name == "symplectic") return StructureKind::symplectic;
  if (name == "general") return StructureKind::general;
  return std::nullopt;
}

BilinearForm BilinearForm::from_matrix(Matrix gram, double tol) {
  if (gram.rows() != gram.cols() || gram.rows() < 1)
    throw ShapeMismatch("bilinear form: Gram matrix must be square and non-empty");
  if (!gram.allFinite()) throw InvalidMatrix("bilinear form: Gram matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(gram);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin <= tol * smax) {
    std::ostringstream msg;
    msg << "degenerate form: sigma_min = " << smin << ", sigma_max = " << smax
        << " (threshold " << tol << ")";
    throw DegenerateForm(msg.str());
  }
  return BilinearForm(std::move(gram), tol);
}

double BilinearForm::evaluate(const Vector& x, const Vector& y) const {
  if (x.size() != gram_.rows() || y.size() != gram_.rows())
    throw ShapeMismatch("bilinear form: argument length does not match dimension");
  return x.dot(gram_ * y);
}

GeometricPair geometric_pair(const BilinearForm& form) {
  // <x,y> = b(x, R y) = x^T (M R) y for all x,y forces M R = I.
  return GeometricPair{form, inverse(form.gram(), form.tolerance())};
}

StructureClass classify(const BilinearForm& form, double tol) {
  const Matrix& m = form.gram();
  const double scale = m.norm();

  if ((m - m.transpose()).norm() <= tol * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.transpose()) / 2.0);
    const auto& ev = es.eigenvalues();
    const double cutoff = tol * ev.cwiseAbs().maxCoeff();
    int positive = 0, negative = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > cutoff) ++positive;
      else if (ev(i) < -cutoff) ++negative;
      // zero eigenvalues are excluded by non-degeneracy
    }
    StructureKind kind = negative == 0 ? StructureKind::euclidean
                       : negative == 1 ? StructureKind::minkowski
                                       : StructureKind::pseudo_euclidean;
    return StructureClass{kind, std::make_pair(positive, negative)};
  }
  if ((m + m.transpose()).norm() <= tol * scale)
    return StructureClass{StructureKind::symplectic, std::nullopt};
  return StructureClass{StructureKind::general, std::nullopt};
}

BilinearForm canonical(StructureKind kind, int n, std::optional<int> minus_count) {
  if (n < 1) throw InvalidParameters("canonical: dimension must be positive");
  switch (kind) {
    case StructureKind::euclidean: {
      if (minus_count && *minus_count != 0)
        throw InvalidParameters("canonical: euclidean form has no minus signs");
      return BilinearForm::from_matrix(Matrix::Identity(n, n));
    }
    case StructureKind::minkowski: {
      if (minus_count && *minus_count != 1)
        throw InvalidParameters("canonical: minkowski form has exactly one minus sign");
      if (n < 2) throw InvalidParameters("canonical: minkowski form needs n >= 2");
      Matrix m = Matrix::Identity(n, n);
      m(n - 1, n - 1) = -1.0;
      return BilinearForm::from_matrix(std::move(m));
    }
    case StructureKind::pseudo_euclidean: {
      if (!minus_count)
        throw InvalidParameters("canonical: pseudo_euclidean form needs a minus count");
      const int k = *minus_count;
      if (k < 1 || k > n - 1)
        throw InvalidParameters("canonical: minus count must satisfy 1 <= k <= n-1");
      Matrix m = Matrix::Identity(n, n);
      for (int i = n - k; i < n; ++i) m(i, i) = -1.0;
      return BilinearForm::from_matrix(std::move(m));
    }
    case StructureKind::symplectic: {
      if (minus_count) throw InvalidParameters("canonical: symplectic form takes no minus count");
      if (n % 2 != 0) throw InvalidParameters("canonical: symplectic form needs even dimension");
      const int half = n / 2;
      Matrix m = Matrix::Zero(n, n);
      m.topRightCorner(half, half) = Matrix::Identity(half, half);
      m.bottomLeftCorner(half, half) = -Matrix::Identity(half, half);
      return BilinearForm::from_matrix(std::move(m));
    }
    case StructureKind::general:
      throw InvalidParameters("canonical: no canonical representative for the general kind");
  }
  throw InvalidParameters("canonical: unknown structure kind");
}

}  // namespace bform
