#include "doctest.h"
#include "errors.hpp"
#include "linalg.hpp"

using namespace cellia;

TEST_CASE("nullspace basis") {
  CMat e1 = CMat::Zero(2, 1);
  e1(0, 0) = 1.0;
  const CMat p2 = nullspace_basis(e1);
  REQUIRE(p2.cols() == 1);
  CHECK(std::abs(p2(0, 0)) < 1e-14);
  CHECK(std::abs(std::abs(p2(1, 0)) - 1.0) < 1e-14);

  CMat e1c3 = CMat::Zero(3, 1);
  e1c3(0, 0) = 1.0;
  const CMat p3 = nullspace_basis(e1c3);
  REQUIRE(p3.rows() == 3);
  REQUIRE(p3.cols() == 2);
  CHECK((p3.adjoint() * e1c3).norm() < 1e-14);
  CHECK((p3.adjoint() * p3 - CMat::Identity(2, 2)).norm() < 1e-12);

  SplitMix64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const CMat a = random_gaussian(4, 2, rng);
    const CMat p = nullspace_basis(a);
    CHECK(p.cols() == 2);
    CHECK((p.adjoint() * a).norm() <= 1e-10 * a.norm());
  }

  CMat rank_deficient(3, 2);
  rank_deficient.col(0) = e1c3;
  rank_deficient.col(1) = 2.0 * e1c3;
  CHECK_THROWS_AS((void)nullspace_basis(rank_deficient), degenerate_input);
  CHECK_THROWS_AS((void)nullspace_basis(CMat::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("orthonormalize preserves span") {
  SplitMix64 rng(9);
  const CMat a = random_gaussian(5, 3, rng);
  const CMat q = orthonormalize(a);
  CHECK((q.adjoint() * q - CMat::Identity(3, 3)).norm() < 1e-12);
  // Same projector, same span.
  const CMat pa = a * (a.adjoint() * a).inverse() * a.adjoint();
  const CMat pq = q * q.adjoint();
  CHECK((pa - pq).norm() < 1e-10);
}

TEST_CASE("ql decomposition") {
  SplitMix64 rng(11);
  const CMat a = random_gaussian(4, 4, rng);
  const auto [q, l] = ql_decompose(a);
  CHECK((q.adjoint() * q - CMat::Identity(4, 4)).norm() < 1e-12);
  CHECK((q * l - a).norm() < 1e-12 * a.norm());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(std::abs(l(i, j)) < 1e-13);
}

TEST_CASE("rowspan membership") {
  CHECK(rowspan_contains(CMat::Identity(4, 4), CVec::Unit(4, 0)));
  CMat rows = CMat::Zero(3, 4);
  rows(0, 1) = rows(1, 2) = rows(2, 3) = 1.0;  // e2, e3, e4
  CHECK_FALSE(rowspan_contains(rows, CVec::Unit(4, 0)));
  CHECK(rowspan_contains(rows, CVec::Unit(4, 2)));
  CHECK(rowspan_contains(rows, CVec::Zero(4)));  // vacuously

  CHECK(selector_rows_in_rowspan(CMat::Identity(4, 4), 0, 2));
  CHECK_FALSE(selector_rows_in_rowspan(rows, 0, 1));
  CHECK(selector_rows_in_rowspan(rows, 1, 3));
}

TEST_CASE("rank and minimum-norm solve") {
  SplitMix64 rng(13);
  const CMat a = random_gaussian(4, 2, rng);
  CMat widened(4, 3);
  widened << a, a.col(0) + a.col(1);
  CHECK(numerical_rank(widened) == 2);
  CHECK(numerical_rank(a) == 2);

  const CVec y = a * CVec::Ones(2);
  const CMat x = solve_min_norm(a, y);
  CHECK((a * x - y).norm() < 1e-10);
}
