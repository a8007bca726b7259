#include "qes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <lapacke.h>

#include "qes/niven.hpp"

namespace qes {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Unmatched: return "unmatched";
    case Verdict::NonNormalizable: return "non-normalizable";
  }
  return "unknown";
}

RadialGrid default_grid(const OscillatorSpec& spec, double energy, int points) {
  // outer classical turning point: largest real root of V(r) - E
  const std::vector<double> poly{-energy, spec.lambda1, spec.lambda2, 0.0, spec.lambda4};
  double turning = 0.0;
  for (const Complex& root : polynomial_roots(poly)) {
    if (std::abs(root.imag()) <= 1e-9 * std::max(1.0, std::abs(root))) {
      turning = std::max(turning, root.real());
    }
  }
  RadialGrid grid;
  grid.r_max = std::max(6.0, 1.5 * turning);
  grid.points = points;
  return grid;
}

double ode_residual(const OscillatorSpec& spec, const AnsatzParams& params,
                    const QesSolution& solution, int ell, const RadialGrid& grid) {
  const double h = grid.spacing();
  const double centrifugal = static_cast<double>(ell) * (ell + spec.dim - 2);
  double max_res = 0.0;
  double max_val = 0.0;
  for (int i = 1; i <= grid.points; ++i) {
    const double r = i * h;
    const WavefunctionSample w = evaluate_ansatz(params, solution, ell, r);
    const double lap = w.d2 + (spec.dim - 1) / r * w.d1 - centrifugal / (r * r) * w.value;
    const double res = -0.5 * lap + (evaluate_potential(spec, r) - solution.energy) * w.value;
    max_res = std::max(max_res, std::abs(res));
    max_val = std::max(max_val, std::abs(w.value));
  }
  return max_res / std::max(max_val, 1e-300);
}

std::vector<double> fd_spectrum(const OscillatorSpec& spec, int ell,
                                const RadialGrid& grid, int k) {
  if (spec.dim < 2) throw std::invalid_argument("fd_spectrum requires N >= 2");
  if (k > grid.points / 10) throw std::invalid_argument("too many levels for the grid");
  const int n = grid.points - 1;  // interior points, Dirichlet at 0 and r_max
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  // effective potential after u = r^{(N-1)/2} R
  const double cfac = 0.25 * (spec.dim - 1) * (spec.dim - 3) +
                      static_cast<double>(ell) * (ell + spec.dim - 2);
  std::vector<double> diag(n), off(n - 1, -0.5 * inv_h2);
  for (int i = 0; i < n; ++i) {
    const double r = (i + 1) * h;
    diag[i] = inv_h2 + evaluate_potential(spec, r) + 0.5 * cfac / (r * r);
  }
  std::vector<double> w(n);
  std::vector<lapack_int> isuppz(2 * std::max(1, k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'N', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, k,
      0.0, &found, w.data(), nullptr, n, isuppz.data());
  if (info != 0) throw std::runtime_error("tridiagonal eigensolver failed");
  w.resize(found);
  std::sort(w.begin(), w.end());
  return w;
}

double norm_integral(const AnsatzParams& params, const QesSolution& solution,
                     int ell, int dim, const RadialGrid& grid) {
  if (params.beta <= 0.0) {
    throw std::invalid_argument("normalization requires beta > 0");
  }
  const int n = (grid.points % 2 == 0) ? grid.points : grid.points + 1;
  const double h = grid.r_max / n;
  auto integrand = [&](double r) {
    const WavefunctionSample w = evaluate_ansatz(params, solution, ell, r);
    return w.value * w.value * std::pow(r, dim - 1);
  };
  double sum = integrand(0.0) + integrand(grid.r_max);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  return sum * h / 3.0;
}

OracleReport verify(const OscillatorSpec& spec, const AnsatzParams& params,
                    const QesSolution& solution, const OracleConfig& config) {
  OracleReport report;
  RadialGrid grid = default_grid(spec, solution.energy, config.grid_points);
  if (config.r_max > 0.0) grid.r_max = config.r_max;

  if (params.beta <= 0.0) {
    report.verdict = Verdict::NonNormalizable;
    return report;
  }
  report.ode_residual_max = ode_residual(spec, params, solution, spec.ell, grid);
  report.norm_integral = norm_integral(params, solution, spec.ell, spec.dim, grid);

  bool fd_ok = true;
  if (spec.dim >= 2) {
    report.fd_eigenvalues = fd_spectrum(spec, spec.ell, grid, config.fd_levels);
    report.match_error = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.fd_eigenvalues.size(); ++i) {
      const double err = std::abs(report.fd_eigenvalues[i] - solution.energy);
      if (err < report.match_error) {
        report.match_error = err;
        report.matched_index = static_cast<int>(i);
      }
    }
    fd_ok = report.match_error <= config.fd_tol;
  }

  const bool ode_ok = report.ode_residual_max <= config.ode_tol;
  const bool norm_ok = std::isfinite(report.norm_integral) && report.norm_integral > 0.0;
  if (!norm_ok) {
    report.verdict = Verdict::NonNormalizable;
  } else if (ode_ok && fd_ok) {
    report.verdict = Verdict::Confirmed;
  } else {
    report.verdict = Verdict::Unmatched;
  }
  return report;
}

}  // namespace qes
