#include "qes/niven.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace qes {

namespace {

double config_scale(std::span<const Complex> zeros) {
  double s = 1.0;
  for (const Complex& z : zeros) s = std::max(s, std::abs(z));
  return s;
}

std::vector<Complex> sorted_zeros(std::vector<Complex> zeros) {
  std::sort(zeros.begin(), zeros.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return zeros;
}

// Greedy tolerance matching; sorting alone misorders conjugate pairs whose
// real parts differ only at machine precision.
bool same_multiset(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Complex& x : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(x - b[j]) <= tol * std::max(1.0, std::abs(x))) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

std::vector<Complex> niven_residual(std::span<const Complex> zeros,
                                    double alpha, double beta, int dim, int ell) {
  const int m = static_cast<int>(zeros.size());
  const double kfac = dim + 2 * ell - 1;  // coefficient of the 1/r term
  const double sep_floor = 1e-14 * config_scale(zeros);
  std::vector<Complex> res(m);
  for (int i = 0; i < m; ++i) {
    Complex r = -2.0 * beta * zeros[i] * zeros[i] - 2.0 * alpha;
    if (kfac != 0.0) {
      if (std::abs(zeros[i]) <= sep_floor) {
        throw std::domain_error("zero at the origin with nonzero 1/r term");
      }
      r += kfac / zeros[i];
    }
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const Complex d = zeros[i] - zeros[j];
      if (std::abs(d) <= sep_floor) {
        throw std::domain_error("coincident zeros in Niven configuration");
      }
      r += 2.0 / d;
    }
    res[i] = r;
  }
  return res;
}

namespace {

struct NivenNewtonResult {
  bool converged = false;
  std::vector<Complex> zeros;
  double residual_norm = 0.0;
};

NivenNewtonResult niven_newton(std::vector<Complex> z, double alpha, double beta,
                               int dim, int ell, const NivenOptions& opt) {
  const int m = static_cast<int>(z.size());
  const double kfac = dim + 2 * ell - 1;
  Eigen::MatrixXcd jac(m, m);
  Eigen::VectorXcd rhs(m);
  for (int it = 0; it < opt.max_iterations; ++it) {
    std::vector<Complex> res;
    try {
      res = niven_residual(z, alpha, beta, dim, ell);
    } catch (const std::domain_error&) {
      return {};
    }
    double rnorm = 0.0;
    for (const Complex& r : res) rnorm = std::max(rnorm, std::abs(r));
    if (rnorm <= opt.tolerance) {
      return {true, std::move(z), rnorm};
    }
    for (int i = 0; i < m; ++i) {
      Complex dii = -4.0 * beta * z[i];
      if (kfac != 0.0) dii -= kfac / (z[i] * z[i]);
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        const Complex d = z[i] - z[j];
        const Complex w = 2.0 / (d * d);
        dii -= w;
        jac(i, j) = w;
      }
      jac(i, i) = dii;
      rhs(i) = res[i];
    }
    const Eigen::VectorXcd step = jac.partialPivLu().solve(rhs);
    for (int i = 0; i < m; ++i) {
      z[i] -= step(i);
      if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) return {};
      if (opt.real_only) z[i] = Complex(z[i].real(), 0.0);
    }
  }
  return {};
}

}  // namespace

std::vector<NivenConfiguration> solve_niven(double alpha, double beta, int dim, int ell,
                                            int degree, const NivenOptions& options) {
  const int m = degree;
  if (m < 1) throw std::invalid_argument("solve_niven requires m >= 1");
  if (beta <= 0.0) throw std::invalid_argument("solve_niven requires beta > 0");

  std::vector<std::vector<Complex>> starts = options.warm_starts;

  // ring of m-th roots at the natural length scale, jittered per start
  const double radius = std::sqrt(std::max(std::abs(alpha) / beta, 0.1) *
                                  std::max(1.0, static_cast<double>(m)));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < options.starts; ++s) {
    std::vector<Complex> z(m);
    const double scale = radius * (0.4 + 0.2 * (s % 7));
    if (options.real_only || s % 3 == 0) {
      // spread real points; real-zero configurations have small Newton basins
      // when approached from generic complex starts
      for (int i = 0; i < m; ++i) {
        const double sign = (s % 6 < 3) ? 1.0 : -1.0;
        z[i] = Complex(sign * scale * (0.4 + 1.2 * (i + 0.5) / m) * (1.0 + 0.2 * unit(rng)), 0.0);
      }
    } else {
      // rotate the whole ring per start so every angular sector is sampled
      const double phase = std::numbers::pi * unit(rng);
      for (int i = 0; i < m; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / m + phase + 0.1 * unit(rng);
        z[i] = std::polar(scale * (1.0 + 0.3 * unit(rng)), angle);
      }
    }
    starts.push_back(std::move(z));
  }

  std::vector<NivenConfiguration> configs;
  for (auto& start : starts) {
    if (static_cast<int>(start.size()) != m) continue;
    NivenNewtonResult out = niven_newton(start, alpha, beta, dim, ell, options);
    if (!out.converged) continue;
    std::vector<Complex> z = sorted_zeros(std::move(out.zeros));
    // reject nearly coincident zeros
    const double sep_tol = options.separation_tol * config_scale(z);
    bool separated = true;
    for (int i = 0; i + 1 < m && separated; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (std::abs(z[i] - z[j]) <= sep_tol) { separated = false; break; }
      }
    }
    if (!separated) continue;
    const bool dup = std::any_of(configs.begin(), configs.end(), [&](const auto& c) {
      return same_multiset(c.zeros, z, options.dedup_tol);
    });
    if (dup) continue;
    NivenConfiguration cfg;
    cfg.residual_norm = out.residual_norm;
    cfg.real_only = std::all_of(z.begin(), z.end(), [](const Complex& c) {
      return std::abs(c.imag()) <= 1e-9 * std::max(1.0, std::abs(c));
    });
    cfg.zeros = std::move(z);
    configs.push_back(std::move(cfg));
  }
  return configs;
}

std::vector<Complex> polynomial_from_zeros(const NivenConfiguration& config) {
  std::vector<Complex> coeffs{1.0};
  for (const Complex& z : config.zeros) {
    coeffs.push_back(0.0);
    for (std::size_t j = coeffs.size() - 1; j >= 1; --j) {
      coeffs[j] = coeffs[j - 1] - z * coeffs[j];
    }
    coeffs[0] *= -z;
  }
  // realify coefficients of conjugate-symmetric configurations
  for (Complex& c : coeffs) {
    if (std::abs(c.imag()) <= 1e-10 * std::max(1.0, std::abs(c))) c = Complex(c.real(), 0.0);
  }
  return coeffs;
}

Complex energy_from_zeros(const NivenConfiguration& config, double alpha, double beta) {
  Complex sum = 0.0;
  for (const Complex& z : config.zeros) sum += z;
  return -0.5 * alpha * alpha + beta * sum;
}

std::vector<Complex> consistency_check(std::span<const Complex> coeffs,
                                       double alpha, double beta, Complex energy,
                                       int dim, int ell, int degree) {
  const int m = degree;
  const int k = dim + 2 * ell;
  std::vector<Complex> out(m + 3, Complex(0.0));
  auto b = [&](int j) -> Complex {
    return (j >= 0 && j <= m && j < static_cast<int>(coeffs.size())) ? coeffs[j] : Complex(0.0);
  };
  const Complex c_coef = -(2.0 * energy + alpha * alpha);
  for (int s = 0; s <= m + 2; ++s) {
    const double a_coef = -static_cast<double>(s + 1) * (s + k - 1);
    const double b_coef = (2.0 * s + k - 1) * alpha;
    const double d_coef = 2.0 * beta * (s - 2 - m);
    out[s] = a_coef * b(s + 1) + b_coef * b(s) + c_coef * b(s - 1) + d_coef * b(s - 2);
  }
  return out;
}

std::vector<Complex> polynomial_roots(std::span<const double> coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion);
  std::vector<Complex> roots(eig.eigenvalues().data(), eig.eigenvalues().data() + deg);
  return roots;
}

}  // namespace qes
