#include "qes/matrices.hpp"

#include <stdexcept>

namespace qes {

RecurrenceCoeffs recurrence_coeffs(int s, int dim, int ell, int degree,
                                   double alpha, double beta, double energy) {
  if (s < 0 || s > degree + 1) {
    throw std::out_of_range("recurrence row index out of 0..m+1");
  }
  const int k = dim + 2 * ell;  // N + 2l
  RecurrenceCoeffs c;
  c.A = -static_cast<double>(s + 1) * (s + k - 1);
  c.B = (2.0 * s + k - 1) * alpha;
  c.C = -(2.0 * energy + alpha * alpha);
  c.D = 2.0 * beta * (s - 2 - degree);
  return c;
}

Eigen::MatrixXd build_F(int dim, int ell, int degree, double alpha, double beta, double energy) {
  const int m = degree;
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m + 2, m + 1);
  for (int s = 0; s <= m + 1; ++s) {
    const auto c = recurrence_coeffs(s, dim, ell, m, alpha, beta, energy);
    if (s - 2 >= 0) f(s, s - 2) = c.D;
    if (s - 1 >= 0 && s - 1 <= m) f(s, s - 1) = c.C;
    if (s <= m) f(s, s) = c.B;
    if (s + 1 <= m) f(s, s + 1) = c.A;
  }
  return f;
}

Eigen::MatrixXd build_P(int degree, double alpha, double beta) {
  // Rows s = 1..m+1 of the N=1 recurrence with the C b_{s-1} term moved to the
  // eigenvalue side: P v = (2E + alpha^2) v.  Entries are E-independent.
  const int m = degree;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    const auto c = recurrence_coeffs(i + 1, 1, 0, m, alpha, beta, 0.0);
    if (i - 1 >= 0) p(i, i - 1) = c.D;
    if (i + 1 <= m) p(i, i + 1) = c.B;
    if (i + 2 <= m) p(i, i + 2) = c.A;
  }
  return p;
}

Eigen::MatrixXd build_Q(int dim, int ell, int degree, double alpha, double beta, double energy) {
  if (dim + 2 * ell <= 1) {
    throw std::invalid_argument("Q requires N + 2l > 1; use the P path for N = 1");
  }
  const int m = degree;
  Eigen::MatrixXd f = build_F(dim, ell, m, alpha, beta, energy);
  Eigen::MatrixXd q = f.topRows(m + 1);
  q.row(0) /= static_cast<double>(dim + 2 * ell - 1);  // row 0 -> (alpha, -1, 0, ...)
  return q;
}

bool is_quadridiagonal(const Eigen::MatrixXd& mat, int band_row_offset) {
  for (int i = 0; i < mat.rows(); ++i) {
    for (int j = 0; j < mat.cols(); ++j) {
      const int d = j - i + band_row_offset;
      if ((d < -1 || d > 2) && mat(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace qes
