#pragma once

#include <Eigen/Dense>
#include <utility>

#include "rng.hpp"

namespace cellia {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Singular values below kRankTolFactor * sigma_max * max(dim) count as zero.
inline constexpr double kRankTolFactor = 1e-9;

int numerical_rank(const CMat& a, double tol_factor = kRankTolFactor);
double sigma_min(const CMat& a);
double sigma_max(const CMat& a);

/// Thin orthonormal basis with the same column span (QR). Throws
/// degenerate_input when the input is column-rank deficient.
CMat orthonormalize(const CMat& a);

/// Orthonormal basis of the orthogonal complement of col(a): result p is
/// m x (m-n) with p^H a = 0. Requires m > n and full column rank.
CMat nullspace_basis(const CMat& a);

/// Residual of expressing the row vector `row` as a linear combination of
/// the rows of h (rank-revealing least squares).
double rowspan_residual(const CMat& h, const CVec& row);
bool rowspan_contains(const CMat& h, const CVec& row, double tol = 1e-8);

/// True when every unit row e_i, i in [col_begin, col_begin+count), lies in
/// the row span of h. This is the decodability test for an unknown block.
bool selector_rows_in_rowspan(const CMat& h, int col_begin, int count,
                              double tol = 1e-8);

/// Minimum-norm least-squares solve.
CMat solve_min_norm(const CMat& a, const CMat& y);

/// QL factorization of a square matrix: a = q * l with q unitary and l
/// lower triangular (QR of the 180-degree rotated matrix).
std::pair<CMat, CMat> ql_decompose(const CMat& a);

CMat random_gaussian(int rows, int cols, SplitMix64& rng);
CMat random_orthonormal(int rows, int cols, SplitMix64& rng);

}  // namespace cellia
