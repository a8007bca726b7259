#ifndef QES_NIVEN_HPP
#define QES_NIVEN_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

using Complex = std::complex<double>;

// A candidate multiset of zeros of Phi_m.
struct NivenConfiguration {
  std::vector<Complex> zeros;      // sorted by (re, im)
  double residual_norm = 0.0;      // max_i |residual_i|
  bool real_only = false;          // all zeros real within tolerance
};

// residual_i = sum_{j != i} 2/(r_i - r_j) - 2 beta r_i^2 - 2 alpha + (N+2l-1)/r_i.
// Throws std::domain_error on coincident zeros, or on a zero at the origin
// when the 1/r term is present.
std::vector<Complex> niven_residual(std::span<const Complex> zeros,
                                    double alpha, double beta, int dim, int ell);

struct NivenOptions {
  int starts = 24;
  std::uint64_t seed = 42;
  int max_iterations = 200;
  double tolerance = 1e-10;        // on residual_norm
  double separation_tol = 1e-8;    // scaled minimum pairwise zero separation
  double dedup_tol = 1e-6;         // per-zero multiset comparison
  bool real_only = false;
  std::vector<std::vector<Complex>> warm_starts;  // e.g. roots from the matrix solver
};

// Newton iteration on the zero configuration from a ring of seeded starts
// (plus any warm starts); converged configurations are deduplicated as
// multisets.  Non-convergence yields an empty list, not an exception.
std::vector<NivenConfiguration> solve_niven(double alpha, double beta, int dim, int ell,
                                            int degree, const NivenOptions& options = {});

// Monic expansion of prod_i (r - r_i); coefficients ascending, degree m.
std::vector<Complex> polynomial_from_zeros(const NivenConfiguration& config);

// E = -alpha^2/2 + beta * sum_i r_i (real for conjugate-symmetric zero sets).
Complex energy_from_zeros(const NivenConfiguration& config, double alpha, double beta);

// Coefficients of the degree-(m+2) polynomial obtained by substituting
// Phi = sum b_j r^j into the Phi equation (with lambda1 pinned by the
// truncation condition); the configuration is globally valid iff all vanish.
std::vector<Complex> consistency_check(std::span<const Complex> coeffs,
                                       double alpha, double beta, Complex energy,
                                       int dim, int ell, int degree);

// All roots of a real polynomial (ascending coefficients) via the companion
// matrix.  Leading zero coefficients are trimmed.
std::vector<Complex> polynomial_roots(std::span<const double> coeffs);

}  // namespace qes

#endif
