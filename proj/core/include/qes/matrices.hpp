#ifndef QES_MATRICES_HPP
#define QES_MATRICES_HPP

#include <Eigen/Dense>

namespace qes {

// Coefficients multiplying b_{s+1}, b_s, b_{s-1}, b_{s-2} in the power-series
// identity obtained by matching the coefficient of r^s in the Phi equation:
//   A(s) = -(s+1)(s+N+2l-1)
//   B(s) = (2s+N+2l-1) alpha
//   C    = -(2E + alpha^2)
//   D(s) = 2 beta (s - 2 - m)
struct RecurrenceCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

RecurrenceCoeffs recurrence_coeffs(int s, int dim, int ell, int degree,
                                   double alpha, double beta, double energy);

// Full (m+2) x (m+1) system F v = 0: row s carries (D, C, B, A) at columns
// s-2 .. s+1.  F v = 0 iff Phi = sum b_j r^j solves the Phi equation.
Eigen::MatrixXd build_F(int dim, int ell, int degree, double alpha, double beta, double energy);

// N = 1 eigenproblem matrix: P v = (2E + alpha^2) v.  (m+1) x (m+1),
// quadri-diagonal with zero diagonal; does not depend on E.
Eigen::MatrixXd build_P(int degree, double alpha, double beta);

// N > 1 square system Q v = 0: rows 0..m of F with row 0 scaled to (alpha, -1, 0, ...).
// Requires N + 2l > 1.
Eigen::MatrixXd build_Q(int dim, int ell, int degree, double alpha, double beta, double energy);

// True if all entries outside the four bands (F-row indexing) are exactly zero.
bool is_quadridiagonal(const Eigen::MatrixXd& mat, int band_row_offset = 0);

}  // namespace qes

#endif
