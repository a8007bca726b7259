#include "qes/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qes/matrices.hpp"

namespace qes {

namespace {

// Dedup key: relative distance in (E, beta) jointly.
bool close_pair(double e1, double b1, double e2, double b2, double tol) {
  const double scale = std::max({1.0, std::abs(e1), std::abs(e2), std::abs(b1), std::abs(b2)});
  return std::abs(e1 - e2) <= tol * scale && std::abs(b1 - b2) <= tol * scale;
}

}  // namespace

double solution_residual(int dim, int ell, int degree, double alpha, double beta,
                         double energy, const std::vector<double>& coeffs) {
  const Eigen::MatrixXd f = build_F(dim, ell, degree, alpha, beta, energy);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  const double num = (f * b).lpNorm<Eigen::Infinity>();
  const double den = std::max(1.0, f.lpNorm<Eigen::Infinity>() * b.lpNorm<Eigen::Infinity>());
  return num / den;
}

SpectralResult solve_n1(int degree, double alpha, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("solve_n1 requires beta > 0");
  if (alpha == 0.0) throw std::invalid_argument("solve_n1 requires alpha != 0");

  const int m = degree;
  SpectralResult result;
  result.method = SolveMethod::EigenN1;

  const Eigen::MatrixXd p = build_P(m, alpha, beta);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(p);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }

  const double imag_tol = 1e-9;
  const AnsatzParams params{alpha, beta};
  for (int i = 0; i <= m; ++i) {
    const std::complex<double> mu = eig.eigenvalues()(i);
    const std::complex<double> energy = 0.5 * (mu - alpha * alpha);
    if (!validate_physicality(params, energy, imag_tol)) {
      result.rejected.push_back({energy, beta, "complex eigenvalue"});
      continue;
    }
    QesSolution sol;
    sol.energy = energy.real();
    sol.beta = beta;
    Eigen::VectorXcd v = eig.eigenvectors().col(i);
    Eigen::VectorXd vr = v.real();
    if (std::abs(vr(0)) > 1e-12 * vr.lpNorm<Eigen::Infinity>()) {
      vr /= vr(0);  // b_0 = 1 convention
    }
    sol.coeffs.assign(vr.data(), vr.data() + vr.size());
    sol.residual = solution_residual(1, 0, m, alpha, beta, sol.energy, sol.coeffs);
    sol.physical = sol.residual <= 1e-10;
    result.solutions.push_back(std::move(sol));
  }

  // dedup eigensolver duplicates (defective cases)
  std::sort(result.solutions.begin(), result.solutions.end(),
            [](const QesSolution& a, const QesSolution& b) { return a.energy < b.energy; });
  auto last = std::unique(result.solutions.begin(), result.solutions.end(),
                          [](const QesSolution& a, const QesSolution& b) {
                            return close_pair(a.energy, a.beta, b.energy, b.beta, 1e-9);
                          });
  result.solutions.erase(last, result.solutions.end());
  return result;
}

std::vector<double> coefficient_chain(int dim, int ell, int degree,
                                      double alpha, double beta, double energy) {
  if (dim + 2 * ell <= 1) {
    throw std::invalid_argument("coefficient chain requires N + 2l > 1");
  }
  std::vector<double> b(degree + 1, 0.0);
  b[0] = 1.0;
  for (int s = 0; s < degree; ++s) {
    const auto c = recurrence_coeffs(s, dim, ell, degree, alpha, beta, energy);
    double rhs = c.B * b[s];
    if (s >= 1) rhs += c.C * b[s - 1];
    if (s >= 2) rhs += c.D * b[s - 2];
    b[s + 1] = -rhs / c.A;
  }
  return b;
}

std::pair<double, double> residual_pair(int dim, int ell, int degree, double alpha,
                                        double energy, double beta) {
  const int m = degree;
  if (m < 1) throw std::invalid_argument("residual_pair requires m >= 1");
  const std::vector<double> b = coefficient_chain(dim, ell, m, alpha, beta, energy);
  const auto cm = recurrence_coeffs(m, dim, ell, m, alpha, beta, energy);
  double g1 = cm.B * b[m] + cm.C * b[m - 1];
  if (m >= 2) g1 += cm.D * b[m - 2];
  const double g2 = (2.0 * energy + alpha * alpha) * b[m] + 2.0 * beta * b[m - 1];
  return {g1, g2};
}

namespace {

// Chain values plus partial derivatives wrt E and beta, propagated through the
// same recurrence.  Only C depends on E (dC/dE = -2) and only D on beta.
struct ChainJet {
  std::vector<double> b, dE, dB;
};

ChainJet chain_jet(int dim, int ell, int m, double alpha, double beta, double energy) {
  ChainJet j;
  j.b.assign(m + 1, 0.0);
  j.dE.assign(m + 1, 0.0);
  j.dB.assign(m + 1, 0.0);
  j.b[0] = 1.0;
  for (int s = 0; s < m; ++s) {
    const auto c = recurrence_coeffs(s, dim, ell, m, alpha, beta, energy);
    const double dDdB = 2.0 * (s - 2 - m);
    double rhs = c.B * j.b[s];
    double rhsE = c.B * j.dE[s];
    double rhsB = c.B * j.dB[s];
    if (s >= 1) {
      rhs += c.C * j.b[s - 1];
      rhsE += c.C * j.dE[s - 1] - 2.0 * j.b[s - 1];
      rhsB += c.C * j.dB[s - 1];
    }
    if (s >= 2) {
      rhs += c.D * j.b[s - 2];
      rhsE += c.D * j.dE[s - 2];
      rhsB += c.D * j.dB[s - 2] + dDdB * j.b[s - 2];
    }
    j.b[s + 1] = -rhs / c.A;
    j.dE[s + 1] = -rhsE / c.A;
    j.dB[s + 1] = -rhsB / c.A;
  }
  return j;
}

struct NewtonOutcome {
  bool converged = false;
  double energy = 0.0, beta = 0.0;
};

NewtonOutcome newton_eb(int dim, int ell, int m, double alpha, double e0, double b0,
                        const MultistartConfig& cfg) {
  double energy = e0, beta = b0;
  const double scale = std::max(1.0, std::abs(alpha));
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const ChainJet j = chain_jet(dim, ell, m, alpha, beta, energy);
    const auto cm = recurrence_coeffs(m, dim, ell, m, alpha, beta, energy);
    double g1 = cm.B * j.b[m] + cm.C * j.b[m - 1];
    double g1E = cm.B * j.dE[m] + cm.C * j.dE[m - 1] - 2.0 * j.b[m - 1];
    double g1B = cm.B * j.dB[m] + cm.C * j.dB[m - 1];
    if (m >= 2) {
      const double dDdB = 2.0 * (m - 2 - m);
      g1 += cm.D * j.b[m - 2];
      g1E += cm.D * j.dE[m - 2];
      g1B += cm.D * j.dB[m - 2] + dDdB * j.b[m - 2];
    }
    const double mu = 2.0 * energy + alpha * alpha;
    const double g2 = mu * j.b[m] + 2.0 * beta * j.b[m - 1];
    const double g2E = 2.0 * j.b[m] + mu * j.dE[m] + 2.0 * beta * j.dE[m - 1];
    const double g2B = mu * j.dB[m] + 2.0 * j.b[m - 1] + 2.0 * beta * j.dB[m - 1];

    const double gscale = std::max({1.0, std::abs(cm.B), std::abs(cm.C), std::abs(beta)});
    if (std::hypot(g1, g2) <= cfg.tolerance * gscale * scale) {
      return {true, energy, beta};
    }
    const double det = g1E * g2B - g1B * g2E;
    if (std::abs(det) < 1e-300) return {};
    const double de = (g1 * g2B - g2 * g1B) / det;
    const double db = (g2 * g1E - g1 * g2E) / det;
    energy -= de;
    beta -= db;
    if (!std::isfinite(energy) || !std::isfinite(beta)) return {};
  }
  return {};
}

}  // namespace

QesSolution closed_form_m1(int dim, int ell, double alpha) {
  const int k = dim + 2 * ell;
  QesSolution sol;
  sol.energy = 0.5 * alpha * alpha * k;
  sol.beta = -0.5 * (k + 1) * alpha * alpha * alpha;
  sol.coeffs = {1.0, alpha};
  sol.physical = sol.beta > 0.0;
  sol.residual = solution_residual(dim, ell, 1, alpha, sol.beta, sol.energy, sol.coeffs);
  return sol;
}

std::vector<QesSolution> closed_form_m2(int dim, int ell, double alpha) {
  const int k = dim + 2 * ell;
  const double root = std::sqrt(static_cast<double>(k + 1) * (9 * k + 25));
  const double a2 = alpha * alpha;
  const double a3 = a2 * alpha;
  std::vector<QesSolution> branches;
  for (const double sign : {+1.0, -1.0}) {
    QesSolution sol;
    sol.energy = -0.125 * (k + 5 + sign * root) * a2;
    sol.beta = (k + 1 + sign * root) * (5 * k + 5 + sign * root) * a3 / (64.0 * k);
    const double b2 = (5 * k + 5 + sign * root) / (8.0 * k) * a2;
    sol.coeffs = {1.0, alpha, b2};
    sol.physical = sol.beta > 0.0;
    sol.residual = solution_residual(dim, ell, 2, alpha, sol.beta, sol.energy, sol.coeffs);
    branches.push_back(std::move(sol));
  }
  return branches;
}

SpectralResult solve_ngt1(int dim, int ell, int degree, double alpha,
                          const MultistartConfig& config) {
  const int m = degree;
  if (dim + 2 * ell <= 1) throw std::invalid_argument("solve_ngt1 requires N + 2l > 1");
  if (m < 1) throw std::invalid_argument("solve_ngt1 requires m >= 1");
  if (alpha == 0.0) throw std::invalid_argument("solve_ngt1 requires alpha != 0");

  SpectralResult result;
  result.method = SolveMethod::NewtonNgt1;

  const int k = dim + 2 * ell;
  const double e_span = config.span_factor * alpha * alpha * (k + m);
  const double b_span = config.span_factor * std::abs(alpha * alpha * alpha) * (k + m);

  std::vector<std::pair<double, double>> starts;
  if (m == 1) {
    const QesSolution cf = closed_form_m1(dim, ell, alpha);
    starts.emplace_back(cf.energy, cf.beta);
  }
  if (m == 2) {
    for (const QesSolution& cf : closed_form_m2(dim, ell, alpha)) {
      starts.emplace_back(cf.energy, cf.beta);
    }
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  for (int i = 0; i < config.grid_side; ++i) {
    for (int j = 0; j < config.grid_side; ++j) {
      const double e0 = -e_span + 2.0 * e_span * (i + 0.5) / config.grid_side;
      const double b0 = b_span * (j + 0.5) / config.grid_side;
      starts.emplace_back(e0 * (1.0 + jitter(rng)), b0 * (1.0 + jitter(rng)));
    }
  }

  std::vector<std::pair<double, double>> found;       // accepted (beta > 0)
  std::vector<std::pair<double, double>> found_neg;   // beta <= 0 roots
  int converged = 0;
  for (const auto& [e0, b0] : starts) {
    const NewtonOutcome out = newton_eb(dim, ell, m, alpha, e0, b0, config);
    if (!out.converged) continue;
    ++converged;
    auto& bucket = (out.beta > 0.0) ? found : found_neg;
    const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](const auto& s) {
      return close_pair(s.first, s.second, out.energy, out.beta, config.cluster_tol);
    });
    if (!dup) bucket.emplace_back(out.energy, out.beta);
  }
  if (converged == 0) {
    throw std::runtime_error("no Newton start converged");
  }

  for (const auto& [energy, beta] : found) {
    QesSolution sol;
    sol.energy = energy;
    sol.beta = beta;
    sol.coeffs = coefficient_chain(dim, ell, m, alpha, beta, energy);
    sol.residual = solution_residual(dim, ell, m, alpha, beta, energy, sol.coeffs);
    sol.physical = sol.residual <= 1e-10;
    result.solutions.push_back(std::move(sol));
  }
  for (const auto& [energy, beta] : found_neg) {
    result.rejected.push_back({energy, beta, "beta <= 0 (non-normalizable)"});
  }
  std::sort(result.solutions.begin(), result.solutions.end(),
            [](const QesSolution& a, const QesSolution& b) { return a.energy < b.energy; });
  return result;
}

Projector build_projector(const Eigen::MatrixXd& mat, double imag_tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(mat);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }
  const int n = static_cast<int>(mat.rows());
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> mu = eig.eigenvalues()(i);
    if (std::abs(mu.imag()) <= imag_tol * std::max(1.0, std::abs(mu))) kept.push_back(i);
  }
  Projector proj;
  proj.matrix = Eigen::MatrixXd::Zero(n, n);
  if (kept.empty()) return proj;

  Eigen::MatrixXd basis(n, static_cast<int>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    basis.col(static_cast<int>(c)) = eig.eigenvectors().col(kept[c]).real();
  }
  // Orthonormalize the (generally non-orthogonal) eigenvector span; SVD also
  // drops near-dependent columns from repeated eigenvalues.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU);
  const double rank_tol = 1e-10 * svd.singularValues()(0);
  int rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > rank_tol) ++rank;
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  proj.matrix = u * u.transpose();
  proj.rank = rank;
  return proj;
}

std::vector<std::complex<double>> projected_spectrum(const Eigen::MatrixXd& mat,
                                                     const Projector& projector) {
  const Eigen::MatrixXd pp = projector.matrix * mat * projector.matrix;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(pp);
  std::vector<std::complex<double>> mus(eig.eigenvalues().data(),
                                        eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(mus.begin(), mus.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return mus;
}

SpectralResult projected_solve(const Eigen::MatrixXd& p_matrix, const Projector& projector,
                               double alpha, double beta) {
  SpectralResult result;
  result.method = SolveMethod::EigenN1;
  const int m = static_cast<int>(p_matrix.rows()) - 1;
  const Eigen::MatrixXd pp = projector.matrix * p_matrix * projector.matrix;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(pp);
  const AnsatzParams params{alpha, beta};
  for (int i = 0; i <= m; ++i) {
    const std::complex<double> mu = eig.eigenvalues()(i);
    if (std::abs(mu) < 1e-12 * std::max(1.0, pp.lpNorm<Eigen::Infinity>())) continue;
    const std::complex<double> energy = 0.5 * (mu - alpha * alpha);
    if (!validate_physicality(params, energy)) {
      result.rejected.push_back({energy, beta, "complex projected eigenvalue"});
      continue;
    }
    QesSolution sol;
    sol.energy = energy.real();
    sol.beta = beta;
    Eigen::VectorXd vr = eig.eigenvectors().col(i).real();
    if (std::abs(vr(0)) > 1e-12 * vr.lpNorm<Eigen::Infinity>()) vr /= vr(0);
    sol.coeffs.assign(vr.data(), vr.data() + vr.size());
    sol.residual = solution_residual(1, 0, m, alpha, beta, sol.energy, sol.coeffs);
    sol.physical = sol.residual <= 1e-10;
    result.solutions.push_back(std::move(sol));
  }
  std::sort(result.solutions.begin(), result.solutions.end(),
            [](const QesSolution& a, const QesSolution& b) { return a.energy < b.energy; });
  return result;
}

}  // namespace qes
