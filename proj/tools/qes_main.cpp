// Command-line front end: solve / niven / verify / sweep / matrix.
//
// Exit codes: 0 success (>=1 physical solution where applicable),
// 1 no physical solution / verification failure, 2 invalid parameters,
// 3 convergence failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qes/matrices.hpp"
#include "qes/model.hpp"
#include "qes/niven.hpp"
#include "qes/oracle.hpp"
#include "qes/spectra.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

struct ToleranceMap {
  double imag = 1e-9;
  double ode = 1e-8;
  double fd = 1e-3;
  double newton = 1e-12;
  double niven = 1e-10;

  void apply(const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--tol expects name=value");
      const std::string name = item.substr(0, eq);
      const double value = std::stod(item.substr(eq + 1));
      if (name == "imag") imag = value;
      else if (name == "ode") ode = value;
      else if (name == "fd") fd = value;
      else if (name == "newton") newton = value;
      else if (name == "niven") niven = value;
      else throw CLI::ValidationError("unknown tolerance name: " + name);
    }
  }
};

struct RecordSink {
  std::string format = "json";
  std::ostream* out = &std::cout;
  std::ofstream file;
  bool csv_header_written = false;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    out = &file;
  }

  void write(const json& record) {
    if (format == "json") {
      *out << record.dump() << "\n";
      return;
    }
    static const std::vector<std::string> columns = {
        "dim", "ell", "degree", "alpha", "beta", "energy", "lambda1", "lambda2",
        "lambda4", "coefficients", "physical", "residual", "oracle_verdict", "branch_id"};
    if (!csv_header_written) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        *out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
      }
      csv_header_written = true;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const json& v = record.at(columns[i]);
      if (v.is_array()) {
        std::string joined;
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (j) joined += ";";
          joined += json(v[j]).dump();
        }
        *out << joined;
      } else if (v.is_string()) {
        *out << v.get<std::string>();
      } else {
        *out << v.dump();
      }
      *out << (i + 1 < columns.size() ? "," : "\n");
    }
  }
};

json make_record(int dim, int ell, int degree, double alpha, double beta,
                 double energy, const std::vector<double>& coeffs, bool physical,
                 double residual, const std::string& verdict, int branch_id) {
  json rec;
  rec["dim"] = dim;
  rec["ell"] = ell;
  rec["degree"] = degree;
  rec["alpha"] = alpha;
  rec["beta"] = beta;
  rec["energy"] = energy;
  rec["lambda1"] = -0.5 * (dim + 2 * ell + 2 * degree + 1) * beta;
  rec["lambda2"] = alpha * beta;
  rec["lambda4"] = 0.5 * beta * beta;
  rec["coefficients"] = coeffs;
  rec["physical"] = physical;
  rec["residual"] = residual;
  rec["oracle_verdict"] = verdict;
  rec["branch_id"] = branch_id;
  return rec;
}

struct SolveArgs {
  int dim = 1, ell = 0, degree = 0;
  double alpha = 0.0;
  std::optional<double> beta;
  std::uint64_t seed = 42;
};

// Shared by `solve` and `sweep`.  Throws std::invalid_argument / runtime_error;
// callers map those to exit codes.
std::vector<json> run_solve(const SolveArgs& a, const ToleranceMap& tol) {
  if (a.dim < 1 || a.ell < 0 || a.degree < 0) throw std::invalid_argument("bad dim/ell/degree");
  if (a.alpha == 0.0) throw std::invalid_argument("alpha must be nonzero");
  std::vector<json> records;
  int branch = 0;
  if (a.dim == 1) {
    if (a.ell != 0) throw std::invalid_argument("N = 1 requires l = 0");
    if (!a.beta) throw std::invalid_argument("--beta is required for N = 1");
    if (*a.beta <= 0.0) throw std::invalid_argument("beta must be positive");
    const qes::SpectralResult res = qes::solve_n1(a.degree, a.alpha, *a.beta);
    for (const qes::QesSolution& s : res.solutions) {
      records.push_back(make_record(1, 0, a.degree, a.alpha, s.beta, s.energy, s.coeffs,
                                    s.physical, s.residual, "unverified", branch++));
    }
    for (const qes::RejectedCandidate& r : res.rejected) {
      records.push_back(make_record(1, 0, a.degree, a.alpha, r.beta, r.energy.real(), {},
                                    false, 0.0, "rejected:" + r.reason, branch++));
    }
  } else {
    if (a.beta) throw std::invalid_argument("--beta may not be supplied for N > 1; it is solved");
    if (a.degree < 1) throw std::invalid_argument("N > 1 requires degree >= 1");
    qes::MultistartConfig cfg;
    cfg.seed = a.seed;
    cfg.tolerance = tol.newton;
    const qes::SpectralResult res = qes::solve_ngt1(a.dim, a.ell, a.degree, a.alpha, cfg);
    for (const qes::QesSolution& s : res.solutions) {
      records.push_back(make_record(a.dim, a.ell, a.degree, a.alpha, s.beta, s.energy,
                                    s.coeffs, s.physical, s.residual, "unverified", branch++));
    }
    for (const qes::RejectedCandidate& r : res.rejected) {
      records.push_back(make_record(a.dim, a.ell, a.degree, a.alpha, r.beta,
                                    r.energy.real(), {}, false, 0.0,
                                    "rejected:" + r.reason, branch++));
    }
  }
  return records;
}

int count_physical(const std::vector<json>& records) {
  int n = 0;
  for (const json& r : records) n += r.at("physical").get<bool>() ? 1 : 0;
  return n;
}

json matrix_to_json(const std::string& kind, const Eigen::MatrixXd& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      row.push_back(json::parse(buf));
    }
    entries.push_back(row);
  }
  json out;
  out["kind"] = kind;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = entries;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-exact levels of the O(N) quartic anharmonic oscillator"};
  app.set_version_flag("--version", QES_VERSION);
  app.set_config("--config");
  app.require_subcommand(1);

  std::string format = "json";
  std::string output_path;
  std::vector<std::string> tol_overrides;
  app.add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output_path);
  app.add_option("--tol", tol_overrides, "tolerance override name=value, repeatable");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve the quasi-exact spectral problem");
  solve->add_option("--dim", sa.dim)->required();
  solve->add_option("--ell", sa.ell)->required();
  solve->add_option("--degree", sa.degree)->required();
  solve->add_option("--alpha", sa.alpha)->required();
  double solve_beta = 0.0;
  auto* beta_opt = solve->add_option("--beta", solve_beta);
  solve->add_option("--seed", sa.seed);

  struct {
    int dim = 1, ell = 0, degree = 1;
    double alpha = 0.0, beta = 0.0;
    int starts = 24;
    std::uint64_t seed = 42;
  } na;
  auto* niven = app.add_subcommand("niven", "locate wavefunction polynomial zeros");
  niven->add_option("--dim", na.dim)->required();
  niven->add_option("--ell", na.ell)->required();
  niven->add_option("--degree", na.degree)->required();
  niven->add_option("--alpha", na.alpha)->required();
  niven->add_option("--beta", na.beta)->required();
  niven->add_option("--starts", na.starts);
  niven->add_option("--seed", na.seed);

  struct {
    std::string input;
    int grid_points = 4000;
    double rmax = 0.0;
  } va;
  auto* verify = app.add_subcommand("verify", "verify records against numerical oracles");
  verify->add_option("--input", va.input)->required();
  verify->add_option("--grid-points", va.grid_points);
  verify->add_option("--rmax", va.rmax);

  struct {
    int dim = 1;
    std::string ell_range, degree_range;
    double alpha = 0.0;
    std::optional<double> beta;
    std::string out_dir;
    std::uint64_t seed = 42;
  } wa;
  auto* sweep = app.add_subcommand("sweep", "solve a grid of (l, m) cases");
  sweep->add_option("--dim", wa.dim)->required();
  sweep->add_option("--ell-range", wa.ell_range)->required();
  sweep->add_option("--degree-range", wa.degree_range)->required();
  sweep->add_option("--alpha", wa.alpha)->required();
  sweep->add_option("--beta", wa.beta);
  sweep->add_option("--out", wa.out_dir)->required();
  sweep->add_option("--seed", wa.seed);

  struct {
    std::string kind;
    int dim = 1, ell = 0, degree = 0;
    double alpha = 0.0, beta = 0.0;
    std::optional<double> energy;
  } ma;
  auto* matrix = app.add_subcommand("matrix", "print a recurrence matrix");
  matrix->add_option("--kind", ma.kind)->required()->check(CLI::IsMember({"F", "P", "Q"}));
  matrix->add_option("--dim", ma.dim);
  matrix->add_option("--ell", ma.ell);
  matrix->add_option("--degree", ma.degree)->required();
  matrix->add_option("--alpha", ma.alpha);
  matrix->add_option("--beta", ma.beta);
  matrix->add_option("--energy", ma.energy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  ToleranceMap tol;
  try {
    tol.apply(tol_overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  RecordSink sink;
  sink.format = format;
  try {
    sink.open(output_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (solve->parsed()) {
      if (beta_opt->count() > 0) sa.beta = solve_beta;
      std::vector<json> records;
      try {
        records = run_solve(sa, tol);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
      }
      for (const json& r : records) sink.write(r);
      return count_physical(records) > 0 ? kExitOk : kExitEmpty;
    }

    if (niven->parsed()) {
      if (na.alpha == 0.0 || na.beta <= 0.0 || na.degree < 1) {
        std::cerr << "error: niven requires alpha != 0, beta > 0, degree >= 1\n";
        return kExitInvalid;
      }
      qes::NivenOptions opt;
      opt.starts = na.starts;
      opt.seed = na.seed;
      opt.tolerance = tol.niven;
      const auto configs = qes::solve_niven(na.alpha, na.beta, na.dim, na.ell, na.degree, opt);
      int id = 0;
      for (const qes::NivenConfiguration& c : configs) {
        const auto coeffs = qes::polynomial_from_zeros(c);
        const qes::Complex energy = qes::energy_from_zeros(c, na.alpha, na.beta);
        const auto resid = qes::consistency_check(coeffs, na.alpha, na.beta, energy,
                                                  na.dim, na.ell, na.degree);
        double worst = 0.0;
        for (const qes::Complex& r : resid) worst = std::max(worst, std::abs(r));
        json rec;
        rec["dim"] = na.dim;
        rec["ell"] = na.ell;
        rec["degree"] = na.degree;
        rec["alpha"] = na.alpha;
        rec["beta"] = na.beta;
        json zre = json::array(), zim = json::array();
        for (const qes::Complex& z : c.zeros) {
          zre.push_back(z.real());
          zim.push_back(z.imag());
        }
        rec["zeros_re"] = zre;
        rec["zeros_im"] = zim;
        rec["residual_norm"] = c.residual_norm;
        rec["energy_re"] = energy.real();
        rec["energy_im"] = energy.imag();
        rec["consistency_residual"] = worst;
        rec["consistency"] = worst <= 1e-8 ? "pass" : "fail";
        rec["branch_id"] = id++;
        *sink.out << rec.dump() << "\n";
      }
      if (configs.empty()) {
        std::cerr << "warning: no Niven configuration converged\n";
        return kExitEmpty;
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      std::ifstream in(va.input);
      if (!in) {
        std::cerr << "error: cannot read " << va.input << "\n";
        return kExitInvalid;
      }
      std::string line;
      int n_records = 0;
      bool all_confirmed = true;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec;
        try {
          rec = json::parse(line);
        } catch (const json::parse_error&) {
          std::cerr << "error: invalid record in " << va.input << "\n";
          return kExitInvalid;
        }
        ++n_records;
        const int dim = rec.at("dim").get<int>();
        const int ell = rec.at("ell").get<int>();
        const int degree = rec.at("degree").get<int>();
        qes::AnsatzParams params{rec.at("alpha").get<double>(), rec.at("beta").get<double>()};
        qes::QesSolution sol;
        sol.energy = rec.at("energy").get<double>();
        sol.beta = params.beta;
        sol.coeffs = rec.at("coefficients").get<std::vector<double>>();
        sol.physical = rec.at("physical").get<bool>();
        if (!sol.physical || sol.coeffs.empty()) {
          rec["oracle_verdict"] = "skipped";
          sink.write(rec);
          continue;
        }
        const qes::OscillatorSpec spec = qes::potential_from_params(params, dim, ell, degree);
        qes::OracleConfig cfg;
        cfg.ode_tol = tol.ode;
        cfg.fd_tol = tol.fd;
        cfg.grid_points = va.grid_points;
        cfg.r_max = va.rmax;
        const qes::OracleReport rep = qes::verify(spec, params, sol, cfg);
        rec["oracle_verdict"] = qes::to_string(rep.verdict);
        rec["ode_residual_max"] = rep.ode_residual_max;
        rec["norm_integral"] = rep.norm_integral;
        rec["fd_match_error"] = rep.match_error;
        if (rep.matched_index) rec["fd_matched_index"] = *rep.matched_index;
        if (rep.verdict != qes::Verdict::Confirmed) all_confirmed = false;
        sink.write(rec);
      }
      if (n_records == 0) {
        std::cerr << "warning: no records in input\n";
        return kExitOk;
      }
      return all_confirmed ? kExitOk : kExitEmpty;
    }

    if (sweep->parsed()) {
      auto parse_range = [](const std::string& s) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("range must be a:b");
        return std::pair<int, int>{std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
      };
      std::pair<int, int> ell_r, deg_r;
      try {
        ell_r = parse_range(wa.ell_range);
        deg_r = parse_range(wa.degree_range);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
      }
      std::filesystem::create_directories(wa.out_dir);
      json manifest;
      manifest["version"] = QES_VERSION;
      manifest["seed"] = wa.seed;
      std::string cmdline;
      for (int i = 0; i < argc; ++i) cmdline += std::string(i ? " " : "") + argv[i];
      manifest["command"] = cmdline;
      manifest["cases"] = json::array();
      bool all_completed = true;
      for (int l = ell_r.first; l <= ell_r.second; ++l) {
        for (int m = deg_r.first; m <= deg_r.second; ++m) {
          SolveArgs case_args;
          case_args.dim = wa.dim;
          case_args.ell = l;
          case_args.degree = m;
          case_args.alpha = wa.alpha;
          case_args.beta = wa.beta;
          case_args.seed = wa.seed;
          json entry;
          entry["parameters"] = {{"dim", wa.dim}, {"ell", l}, {"degree", m},
                                 {"alpha", wa.alpha}};
          const std::string filename =
              "case_dim" + std::to_string(wa.dim) + "_l" + std::to_string(l) +
              "_m" + std::to_string(m) + ".json";
          entry["filename"] = filename;
          try {
            const std::vector<json> records = run_solve(case_args, tol);
            std::ofstream out(std::filesystem::path(wa.out_dir) / filename);
            for (const json& r : records) out << r.dump() << "\n";
            entry["counts"] = {{"total", records.size()},
                               {"physical", count_physical(records)}};
            entry["status"] = "completed";
          } catch (const std::exception& e) {
            entry["status"] = std::string("failed: ") + e.what();
            all_completed = false;
          }
          manifest["cases"].push_back(entry);
        }
      }
      std::ofstream mf(std::filesystem::path(wa.out_dir) / "manifest.json");
      mf << manifest.dump(2) << "\n";
      return all_completed ? kExitOk : kExitEmpty;
    }

    if (matrix->parsed()) {
      Eigen::MatrixXd mat;
      if (ma.kind == "P") {
        mat = qes::build_P(ma.degree, ma.alpha, ma.beta);
      } else {
        if (!ma.energy) {
          std::cerr << "error: --energy is required for kind " << ma.kind << "\n";
          return kExitInvalid;
        }
        if (ma.kind == "F") {
          mat = qes::build_F(ma.dim, ma.ell, ma.degree, ma.alpha, ma.beta, *ma.energy);
        } else {
          if (ma.dim + 2 * ma.ell <= 1) {
            std::cerr << "error: Q requires N + 2l > 1\n";
            return kExitInvalid;
          }
          mat = qes::build_Q(ma.dim, ma.ell, ma.degree, ma.alpha, ma.beta, *ma.energy);
        }
      }
      if (format == "json") {
        *sink.out << matrix_to_json(ma.kind, mat).dump() << "\n";
      } else {
        for (int i = 0; i < mat.rows(); ++i) {
          for (int j = 0; j < mat.cols(); ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", mat(i, j));
            *sink.out << buf << (j + 1 < mat.cols() ? "," : "\n");
          }
        }
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitInvalid;
}
