#include <doctest.h>

#include <cmath>

#include "bform/adjoints.hpp"
#include "bform/symmetry.hpp"
#include "test_helpers.hpp"

using namespace bform;
using helpers::mat2;

TEST_CASE("in_group: examples") {
  const auto euclid = helpers::canonical_pair(StructureKind::euclidean, 2);
  CHECK(in_group(euclid, Matrix::Identity(2, 2)).member);

  const auto lorentz = helpers::pair_of(mat2(1, 0, 0, -1));
  const double t = 0.7;
  const Matrix boost = mat2(std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t));
  const auto boosted = in_group(lorentz, boost);
  CHECK(boosted.member);
  CHECK(boosted.det_residual < 1e-12);

  const auto stretched = in_group(euclid, mat2(2, 0, 0, 1));
  CHECK_FALSE(stretched.member);
  CHECK(std::abs(stretched.residual - 3.0) < 1e-12);
}

TEST_CASE("in_algebra: examples") {
  const auto euclid = helpers::canonical_pair(StructureKind::euclidean, 2);
  CHECK(in_algebra(euclid, Matrix::Zero(2, 2)).member);
  CHECK(in_algebra(euclid, mat2(0, -1, 1, 0)).member);
  CHECK_FALSE(in_algebra(euclid, Matrix::Identity(2, 2)).member);

  // X rep = -rep X^T by direct multiplication
  const auto shear = helpers::pair_of(mat2(1, 1, 0, 1));
  const Matrix x = mat2(1, 2, -2, -1);
  const auto membership = in_algebra(shear, x);
  CHECK(membership.member);
  CHECK(membership.adjoint_residual <= 1e-12 * x.norm());
  CHECK((x * shear.rep - mat2(1, 1, -2, 1)).norm() < 1e-12);
}

TEST_CASE("algebra_basis: dimensions for the classical cases") {
  // euclidean n=3: skew matrices, n(n-1)/2
  CHECK(algebra_basis(helpers::canonical_pair(StructureKind::euclidean, 3)).dim() == 3);
  // symplectic n=2: n(n+1)/2
  CHECK(algebra_basis(helpers::canonical_pair(StructureKind::symplectic, 2)).dim() == 3);
  CHECK(algebra_basis(helpers::canonical_pair(StructureKind::minkowski, 4)).dim() == 6);
  CHECK(algebra_basis(helpers::canonical_pair(StructureKind::pseudo_euclidean, 5, 2)).dim() == 10);
  CHECK(algebra_basis(helpers::canonical_pair(StructureKind::symplectic, 6)).dim() == 21);
}

TEST_CASE("algebra_basis: shear form has a one-dimensional algebra") {
  const auto pair = helpers::pair_of(mat2(1, 1, 0, 1));
  const auto basis = algebra_basis(pair);
  REQUIRE(basis.dim() == 1);
  // spanned by [[1,2],[-2,-1]] up to scale
  const Matrix expected = mat2(1, 2, -2, -1) / mat2(1, 2, -2, -1).norm();
  const double alignment = std::abs((basis.elements[0].array() * expected.array()).sum());
  CHECK(std::abs(alignment - 1.0) < 1e-10);
}

TEST_CASE("algebra_basis: orthonormal elements, membership and commutator closure") {
  Rng rng(601);
  std::vector<GeometricPair> pairs = {
      helpers::canonical_pair(StructureKind::euclidean, 4),
      helpers::canonical_pair(StructureKind::minkowski, 3),
      helpers::canonical_pair(StructureKind::symplectic, 4),
      geometric_pair(helpers::random_form(rng, 3)),
  };
  for (const auto& pair : pairs) {
    const auto basis = algebra_basis(pair);
    for (std::size_t i = 0; i < basis.elements.size(); ++i) {
      CHECK(in_algebra(pair, basis.elements[i]).member);
      CHECK(std::abs(basis.elements[i].norm() - 1.0) < 1e-12);
      for (std::size_t j = i + 1; j < basis.elements.size(); ++j) {
        const double overlap =
            (basis.elements[i].array() * basis.elements[j].array()).sum();
        CHECK(std::abs(overlap) < 1e-12);
        const Matrix comm = basis.elements[i] * basis.elements[j] -
                            basis.elements[j] * basis.elements[i];
        CHECK(in_algebra(pair, comm, 1e-8).residual <= 1e-8 * (1.0 + pair.rep.norm()));
      }
    }
  }
}

TEST_CASE("sample_group_element: examples") {
  const auto euclid = helpers::canonical_pair(StructureKind::euclidean, 2);
  const auto basis = algebra_basis(euclid);

  CHECK((sample_group_element(basis, 9, 0.0) - Matrix::Identity(2, 2)).norm() == 0.0);

  const Matrix rotation = sample_group_element(basis, 9, 1.0);
  CHECK((rotation.transpose() * rotation - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(std::abs(rotation.determinant() - 1.0) < 1e-12);

  // boost generator on the lorentz line: exp gives cosh/sinh blocks
  const auto lorentz = helpers::pair_of(mat2(1, 0, 0, -1));
  const Matrix x = mat2(0, 1, 1, 0);
  CHECK(in_algebra(lorentz, x).member);
  const Matrix boost = mat_exp(Matrix(0.9 * x));
  CHECK(in_group(lorentz, boost).member);
  CHECK(std::abs(boost(0, 0) - std::cosh(0.9)) < 1e-12);
  CHECK(std::abs(boost(0, 1) - std::sinh(0.9)) < 1e-12);
}

TEST_CASE("sample_group_element: membership, closure and adjoint inverse") {
  Rng rng(701);
  std::vector<GeometricPair> pairs = {
      helpers::canonical_pair(StructureKind::euclidean, 3),
      helpers::canonical_pair(StructureKind::minkowski, 3),
      helpers::canonical_pair(StructureKind::symplectic, 4),
      helpers::canonical_pair(StructureKind::pseudo_euclidean, 4, 2),
      geometric_pair(helpers::random_form(rng, 3)),
  };
  for (const auto& pair : pairs) {
    const auto basis = algebra_basis(pair);
    const double rep_norm = pair.rep.norm();
    Matrix previous = Matrix::Identity(pair.dim(), pair.dim());
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix g = sample_group_element(basis, Rng::split(55, trial), 1.0);
      CHECK(in_group(pair, g).residual <= 1e-8 * rep_norm);
      CHECK(in_group(pair, Matrix(g * previous)).residual <= 1e-8 * rep_norm);
      const Matrix g_inv = inverse(g);
      CHECK(in_group(pair, g_inv).residual <= 1e-8 * rep_norm);
      CHECK((g_inv - adjoint(pair, g, Side::left)).norm() <= 1e-8 * (1.0 + g_inv.norm()));
      CHECK((g_inv - adjoint(pair, g, Side::right)).norm() <= 1e-8 * (1.0 + g_inv.norm()));
      previous = g;
    }
  }
}

TEST_CASE("sample_group_element: scale 2 keeps the membership residual small") {
  const auto pair = helpers::canonical_pair(StructureKind::pseudo_euclidean, 4, 2);
  const auto basis = algebra_basis(pair);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix g = sample_group_element(basis, Rng::split(77, trial), 2.0);
    CHECK(in_group(pair, g).residual <= 1e-8 * pair.rep.norm());
  }
}

TEST_CASE("reflections reach the non-identity components") {
  const auto lorentz = helpers::canonical_pair(StructureKind::minkowski, 4);
  const Matrix time_flip = axis_reflection(4, 3);
  CHECK(in_group(lorentz, time_flip).member);
  CHECK(time_flip.determinant() == -1.0);
  CHECK(in_group(lorentz, parity(4)).member);

  const auto euclid = helpers::canonical_pair(StructureKind::euclidean, 3);
  CHECK(in_group(euclid, axis_reflection(3, 0)).member);
  CHECK(in_group(euclid, parity(3)).member);
  CHECK_THROWS_AS(axis_reflection(3, 3), InvalidParameters);
}

TEST_CASE("deterministic sampling") {
  const auto pair = helpers::canonical_pair(StructureKind::euclidean, 3);
  const auto basis = algebra_basis(pair);
  CHECK((sample_group_element(basis, 123, 1.0) - sample_group_element(basis, 123, 1.0)).norm() ==
        0.0);
  CHECK((sample_group_element(basis, 123, 1.0) - sample_group_element(basis, 124, 1.0)).norm() >
        1e-6);
}
