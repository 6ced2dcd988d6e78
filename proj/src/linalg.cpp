#include "nonholorec/linalg.hpp"

#include <limits>

namespace nonholorec {

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

namespace {

int rank_from(const Vec& sigma, double rel_tol) {
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > rel_tol * sigma[0]) ++rank;
  }
  return rank;
}

}  // namespace

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return rank_from(svd.singularValues(), rel_tol);
}

Mat nullspace(const Mat& a, double rel_tol) {
  const auto n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  int rank = rank_from(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - rank);
}

Mat range_basis(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  int rank = rank_from(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(rank);
}

double smallest_singular_value(const Mat& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  return s[s.size() - 1];
}

double condition_number(const Mat& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  double smallest = s[s.size() - 1];
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smallest;
}

Mat fix_column_signs(Mat basis) {
  for (int j = 0; j < basis.cols(); ++j) {
    Eigen::Index idx = 0;
    basis.col(j).cwiseAbs().maxCoeff(&idx);
    if (basis(idx, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

}  // namespace nonholorec
