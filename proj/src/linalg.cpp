#include "linalg.hpp"

#include <algorithm>

#include "errors.hpp"

namespace cellia {

int numerical_rank(const CMat& a, double tol_factor) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double tol = tol_factor * s(0) * static_cast<double>(std::max(a.rows(), a.cols()));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

double sigma_min(const CMat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double sigma_max(const CMat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

CMat orthonormalize(const CMat& a) {
  if (a.cols() == 0) return a;
  if (numerical_rank(a) != a.cols())
    throw degenerate_input("orthonormalize: rank-deficient input");
  Eigen::HouseholderQR<CMat> qr(a);
  return qr.householderQ() * CMat::Identity(a.rows(), a.cols());
}

CMat nullspace_basis(const CMat& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m <= n) throw std::invalid_argument("nullspace_basis: need more rows than columns");
  if (n == 0) return CMat::Identity(m, m);
  if (numerical_rank(a) != n)
    throw degenerate_input("nullspace_basis: rank-deficient input");
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(m - n);
}

double rowspan_residual(const CMat& h, const CVec& row) {
  // row in rowspan(h)  <=>  row^T in col(h^T)
  const CMat ht = h.transpose();
  const CMat c = solve_min_norm(ht, row);
  return (ht * c - row).norm();
}

bool rowspan_contains(const CMat& h, const CVec& row, double tol) {
  const double scale = row.norm();
  if (scale == 0.0) return true;
  return rowspan_residual(h, row) <= tol * scale;
}

bool selector_rows_in_rowspan(const CMat& h, int col_begin, int count, double tol) {
  const CMat ht = h.transpose();
  CMat selectors = CMat::Zero(h.cols(), count);
  for (int i = 0; i < count; ++i) selectors(col_begin + i, i) = 1.0;
  const CMat c = solve_min_norm(ht, selectors);
  const CMat resid = ht * c - selectors;
  for (int i = 0; i < count; ++i)
    if (resid.col(i).norm() > tol) return false;
  return true;
}

CMat solve_min_norm(const CMat& a, const CMat& y) {
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(a);
  return cod.solve(y);
}

std::pair<CMat, CMat> ql_decompose(const CMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ql_decompose: square input required");
  const Eigen::Index m = a.rows();
  const CMat rotated = a.reverse();  // J*a*J
  Eigen::HouseholderQR<CMat> qr(rotated);
  const CMat q = qr.householderQ() * CMat::Identity(m, m);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  return {q.reverse(), r.reverse()};
}

CMat random_gaussian(int rows, int cols, SplitMix64& rng) {
  CMat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rng.gaussian();
  return a;
}

CMat random_orthonormal(int rows, int cols, SplitMix64& rng) {
  return orthonormalize(random_gaussian(rows, cols, rng));
}

}  // namespace cellia
