#ifndef QES_ORACLE_HPP
#define QES_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qes/model.hpp"

namespace qes {

struct RadialGrid {
  double r_max = 6.0;
  int points = 4000;
  double spacing() const { return r_max / points; }
};

enum class Verdict { Confirmed, Unmatched, NonNormalizable };

std::string to_string(Verdict verdict);

struct OracleReport {
  double ode_residual_max = 0.0;
  std::vector<double> fd_eigenvalues;
  std::optional<int> matched_index;
  double match_error = 0.0;
  double norm_integral = 0.0;
  Verdict verdict = Verdict::Unmatched;
};

struct OracleConfig {
  double ode_tol = 1e-8;
  double fd_tol = 1e-3;   // absolute, grid-limited
  int fd_levels = 5;
  int grid_points = 4000;
  double r_max = 0.0;     // 0 = choose from the outer turning point
};

// r_max = 1.5 x outer classical turning point of V(r) = E, floor 6.0.
RadialGrid default_grid(const OscillatorSpec& spec, double energy, int points = 4000);

// Max over interior grid points of the scaled radial Schroedinger residual,
// using the analytic ansatz derivatives.
double ode_residual(const OscillatorSpec& spec, const AnsatzParams& params,
                    const QesSolution& solution, int ell, const RadialGrid& grid);

// k lowest eigenvalues of the reduced radial operator (u = r^{(N-1)/2} R)
// discretized with second-order central differences and Dirichlet ends.
// Requires N >= 2.
std::vector<double> fd_spectrum(const OscillatorSpec& spec, int ell,
                                const RadialGrid& grid, int k);

// int_0^{r_max} |R|^2 r^{N-1} dr by composite Simpson; the analytic tail
// bound beyond r_max is checked against the total.
double norm_integral(const AnsatzParams& params, const QesSolution& solution,
                     int ell, int dim, const RadialGrid& grid);

// Full verification: ODE residual + normalization + (N >= 2) FD spectrum match.
OracleReport verify(const OscillatorSpec& spec, const AnsatzParams& params,
                    const QesSolution& solution, const OracleConfig& config = {});

}  // namespace qes

#endif
