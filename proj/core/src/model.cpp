#include "qes/model.hpp"

#include <cmath>

namespace qes {

AnsatzParams params_from_potential(const OscillatorSpec& spec) {
  if (spec.lambda4 <= 0.0) {
    throw std::invalid_argument("lambda4 must be positive (beta = sqrt(2 lambda4))");
  }
  if (spec.lambda2 == 0.0) {
    throw DegenerateAnsatzError("lambda2 = 0 gives alpha = 0; the ansatz requires alpha != 0");
  }
  const double beta = std::sqrt(2.0 * spec.lambda4);
  return {spec.lambda2 / beta, beta};
}

OscillatorSpec potential_from_params(const AnsatzParams& params, int dim, int ell, int degree) {
  if (params.beta <= 0.0) {
    throw std::invalid_argument("beta must be positive");
  }
  OscillatorSpec spec;
  spec.dim = dim;
  spec.ell = ell;
  spec.degree = degree;
  spec.lambda4 = 0.5 * params.beta * params.beta;
  spec.lambda2 = params.alpha * params.beta;
  spec.lambda1 = -0.5 * (dim + 2 * ell + 2 * degree + 1) * params.beta;
  return spec;
}

double evaluate_potential(const OscillatorSpec& spec, double r) {
  if (r < 0.0) {
    if (spec.dim != 1) {
      throw std::domain_error("negative radius requires N = 1 (full-line parity extension)");
    }
    // even extension: the linear term flips sign on the negative half line
    return -spec.lambda1 * r + spec.lambda2 * r * r + spec.lambda4 * r * r * r * r;
  }
  const double r2 = r * r;
  return spec.lambda1 * r + spec.lambda2 * r2 + spec.lambda4 * r2 * r2;
}

WavefunctionSample evaluate_ansatz(const AnsatzParams& params, const QesSolution& solution,
                                   int ell, double r) {
  // Q(r) = r^l Phi(r); evaluate Q, Q', Q'' by Horner on the shifted coefficient
  // array (l leading zeros), then apply the product rule against exp(g) with
  // g = -alpha r - beta r^3/3.
  const int m = static_cast<int>(solution.coeffs.size()) - 1;
  const int deg = ell + m;
  double q = 0.0, q1 = 0.0, q2 = 0.0;
  for (int j = deg; j >= 0; --j) {
    const double c = (j >= ell) ? solution.coeffs[j - ell] : 0.0;
    q2 = q2 * r + 2.0 * q1;
    q1 = q1 * r + q;
    q = q * r + c;
  }
  const double g = -params.alpha * r - params.beta * r * r * r / 3.0;
  const double g1 = -params.alpha - params.beta * r * r;
  const double g2 = -2.0 * params.beta * r;
  const double e = std::exp(g);
  WavefunctionSample sample;
  sample.r = r;
  sample.value = q * e;
  sample.d1 = (q1 + q * g1) * e;
  sample.d2 = (q2 + 2.0 * q1 * g1 + q * (g2 + g1 * g1)) * e;
  return sample;
}

bool validate_physicality(const AnsatzParams& params, std::complex<double> energy,
                          double imag_tol) {
  if (params.alpha == 0.0 || params.beta <= 0.0) return false;
  return std::abs(energy.imag()) <= imag_tol * std::max(1.0, std::abs(energy));
}

}  // namespace qes
