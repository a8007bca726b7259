#ifndef QES_SPECTRA_HPP
#define QES_SPECTRA_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qes/model.hpp"

namespace qes {

enum class SolveMethod { EigenN1, NewtonNgt1, ClosedForm };

struct RejectedCandidate {
  std::complex<double> energy;
  double beta = 0.0;
  std::string reason;
};

struct SpectralResult {
  std::vector<QesSolution> solutions;
  std::vector<RejectedCandidate> rejected;
  SolveMethod method = SolveMethod::EigenN1;
};

struct MultistartConfig {
  int grid_side = 5;        // grid_side^2 Newton starts
  double span_factor = 2.0; // c in the start-box scaling
  int max_iterations = 100;
  double tolerance = 1e-12; // on ||(g1,g2)|| relative to scale
  double cluster_tol = 1e-6;
  std::uint64_t seed = 42;
};

// N = 1 (l = 0): dense eigensolve of P; real eigenvalues mu give
// E = (mu - alpha^2)/2, complex ones land in `rejected`.
SpectralResult solve_n1(int degree, double alpha, double beta);

// Forward recurrence for b_0..b_m with b_0 = 1; valid for N + 2l > 1.
std::vector<double> coefficient_chain(int dim, int ell, int degree,
                                      double alpha, double beta, double energy);

// (g1, g2): g1 is the row-m recurrence residual, g2 = (2E+alpha^2) b_m + 2 beta b_{m-1}
// (the beta constraint in product form).  A quasi-exact level is a common zero.
std::pair<double, double> residual_pair(int dim, int ell, int degree, double alpha,
                                        double energy, double beta);

// N > 1: multistart Newton on (E, beta) with analytic Jacobian; closed forms
// for m = 1, 2 seed the start set.  beta <= 0 roots are reported as rejected.
SpectralResult solve_ngt1(int dim, int ell, int degree, double alpha,
                          const MultistartConfig& config = {});

// Closed forms: m = 1 has the single level E = alpha^2 (N+2l)/2 with
// beta = -(N+2l+1) alpha^3 / 2; m = 2 has two branches (unfiltered).
QesSolution closed_form_m1(int dim, int ell, double alpha);
std::vector<QesSolution> closed_form_m2(int dim, int ell, double alpha);

// Orthogonal projector onto the span of the retained eigenvectors.
struct Projector {
  Eigen::MatrixXd matrix;
  int rank = 0;
};

// Projector onto the span of eigenvectors of `mat` whose eigenvalues are real
// within imag_tol.  The span is orthonormalized first, so the projector is
// symmetric idempotent even though the eigenvectors of the non-symmetric
// matrix are not orthogonal.
Projector build_projector(const Eigen::MatrixXd& mat, double imag_tol = 1e-9);

// Eigenvalues mu of Lambda P Lambda; nonzero ones reproduce the physical
// subset of spec(P) when the retained span is invariant.
std::vector<std::complex<double>> projected_spectrum(const Eigen::MatrixXd& mat,
                                                     const Projector& projector);

// Physical N = 1 solve through the projector: eigenpairs of Lambda P Lambda
// restricted to range(Lambda), mapped back to energies.
SpectralResult projected_solve(const Eigen::MatrixXd& p_matrix, const Projector& projector,
                               double alpha, double beta);

// Scaled residual ||F b||_inf / max(1, ||F||_inf ||b||_inf).
double solution_residual(int dim, int ell, int degree, double alpha, double beta,
                         double energy, const std::vector<double>& coeffs);

}  // namespace qes

#endif
