#pragma once

#include "nonholorec/lie_group.hpp"

namespace nonholorec {

// Singular values at or below rel_tol * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-10;

// Infinity norm that is 0 for empty vectors.
double max_abs(const Vec& v);

int numerical_rank(const Mat& a, double rel_tol = kRankTolerance);
// Orthonormal columns spanning ker(a). An a with no rows has the full space as kernel.
Mat nullspace(const Mat& a, double rel_tol = kRankTolerance);
// Orthonormal columns spanning the column space of a.
Mat range_basis(const Mat& a, double rel_tol = kRankTolerance);
// sigma_max / sigma_min; infinity when singular.
double condition_number(const Mat& a);
double smallest_singular_value(const Mat& a);

// Flips each column so that its largest-magnitude entry is positive. Keeps
// numerically computed bases from changing sign between nearby points.
Mat fix_column_signs(Mat basis);

}  // namespace nonholorec
