#ifndef QES_MODEL_HPP
#define QES_MODEL_HPP

#include <complex>
#include <stdexcept>
#include <vector>

namespace qes {

// Physical problem definition: the O(N)-invariant oscillator with potential
//   V(r) = lambda1*r + lambda2*r^2 + lambda4*r^4
// reduced to the radial equation for angular momentum l, with the polynomial
// factor of the wavefunction truncated at degree m.
struct OscillatorSpec {
  int dim = 1;     // N >= 1
  int ell = 0;     // l >= 0; N = 1 forces l = 0
  int degree = 0;  // m >= 0
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda4 = 0.0;
};

// Exponent parameters of the ansatz R_l(r) = r^l * Phi(r) * exp(-alpha r - beta r^3/3).
struct AnsatzParams {
  double alpha = 0.0;  // nonzero
  double beta = 0.0;   // positive
};

// One quasi-exact level.  coeffs holds b_0..b_m with b_0 = 1 by convention.
struct QesSolution {
  double energy = 0.0;
  std::vector<double> coeffs;
  double beta = 0.0;
  bool physical = false;
  double residual = 0.0;  // scaled ||F b||_inf
};

// Radial factor and its first two analytic derivatives at one point.
struct WavefunctionSample {
  double r = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Thrown when the ansatz family excludes the requested parameters
// (alpha = 0, i.e. lambda2 = 0).
class DegenerateAnsatzError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// beta = sqrt(2 lambda4), alpha = lambda2 / sqrt(2 lambda4).
// Throws std::invalid_argument if lambda4 <= 0, DegenerateAnsatzError if lambda2 = 0.
AnsatzParams params_from_potential(const OscillatorSpec& spec);

// Inverse map at fixed (N, l, m); lambda1 is pinned by the truncation condition
// lambda1 = -(N + 2l + 2m + 1) beta / 2.
OscillatorSpec potential_from_params(const AnsatzParams& params, int dim, int ell, int degree);

// V(r) for r >= 0.  For N = 1 the potential extends to the full line as an
// even function (the |x| branch of the linear term); negative r with N > 1
// is a domain error.
double evaluate_potential(const OscillatorSpec& spec, double r);

// Radial factor r^l * Phi(r) * exp(-alpha r - beta r^3/3) with exact analytic
// first and second derivatives.
WavefunctionSample evaluate_ansatz(const AnsatzParams& params, const QesSolution& solution,
                                   int ell, double r);

// Real energy within imag_tol (relative above |E| = 1), beta > 0, alpha != 0.
bool validate_physicality(const AnsatzParams& params, std::complex<double> energy,
                          double imag_tol = 1e-9);

}  // namespace qes

#endif
