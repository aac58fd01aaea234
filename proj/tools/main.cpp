// Command-line front end for the regularized algebraic pipelines.
//
// Exit codes: 0 success, 2 input/parse error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "regalg/gcd.hpp"
#include "regalg/jcf.hpp"
#include "regalg/rankrev.hpp"
#include "regalg/roots.hpp"

using nlohmann::json;
using namespace regalg;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;

json complex_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json poly_json(const Polynomial& p) {
  json coeffs = json::array();
  for (const cplx& c : p.as_vector()) coeffs.push_back(complex_json(c));
  return json{{"degree", p.nominal_degree()}, {"coefficients", coeffs}};
}

json matrix_json(const MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json trace_json(const GnResult& gn) {
  json steps = json::array();
  for (const GnStep& s : gn.history)
    steps.push_back(json{{"iteration", s.iteration},
                         {"residual_norm", s.residual_norm},
                         {"step_norm", s.step_norm},
                         {"sigma_min", s.sigma_min},
                         {"retreated", s.retreated}});
  return steps;
}

MatrixXcd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError{"cannot open matrix file: " + path, 0};
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

struct CommonOpts {
  double tol = 0.0;
  unsigned seed = 0;
  bool as_json = false;
  bool trace = false;
  int maxiter = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tol", opts.tol, "data-error tolerance")->required();
  cmd->add_option("--seed", opts.seed, "seed for randomized normalization");
  cmd->add_flag("--json", opts.as_json, "emit a JSON report");
  cmd->add_flag("--trace", opts.trace, "include the iteration trace");
  cmd->add_option("--maxiter", opts.maxiter, "Gauss-Newton iteration cap");
}

GnConfig config_of(const CommonOpts& opts) {
  GnConfig cfg;
  if (opts.maxiter > 0) cfg.max_iterations = opts.maxiter;
  return cfg;
}

int run_pgcd(const std::string& ps, const std::string& qs, const CommonOpts& opts) {
  Polynomial p = parse(ps);
  Polynomial q = parse(qs);
  GcdResult res = pgcd(p, q, opts.tol, opts.seed, config_of(opts));
  if (opts.as_json) {
    json out{{"k", res.structure.k},
             {"u", poly_json(res.u)},
             {"v", poly_json(res.v)},
             {"w", poly_json(res.w)},
             {"backward_error", res.backward_error},
             {"condition", res.condition},
             {"iterations", res.trace.iterations},
             {"marginal_gap", res.structure.marginal}};
    if (opts.trace) out["trace"] = trace_json(res.trace);
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "gcd degree: " << res.structure.k << "\n"
              << "u = " << format(res.u) << "\n"
              << "u (largest coefficient 1) = " << format(normalize_largest_coeff(res.u))
              << "\n"
              << "v = " << format(res.v) << "\n"
              << "w = " << format(res.w) << "\n"
              << "backward error: " << res.backward_error << "\n"
              << "condition: " << res.condition << "\n";
    if (res.structure.marginal)
      std::cout << "warning: marginal singular-value gap (ratio " << res.structure.gap_ratio
                << ")\n";
  }
  return 0;
}

int run_proots(const std::string& ps, const CommonOpts& opts) {
  Polynomial p = parse(ps);
  Factorization res = proots(p, opts.tol, config_of(opts));
  if (opts.as_json) {
    json roots = json::array();
    for (std::size_t i = 0; i < res.roots.size(); ++i)
      roots.push_back(json{{"root", complex_json(res.roots[i])},
                           {"multiplicity", res.multiplicities[i]}});
    json out{{"multiplicities", res.multiplicities},
             {"roots", roots},
             {"leading", complex_json(res.leading)},
             {"backward_error", res.backward_error},
             {"condition", res.condition}};
    if (opts.trace) out["trace"] = trace_json(res.trace);
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "leading coefficient: " << format(Polynomial{{res.leading}}) << "\n";
    for (std::size_t i = 0; i < res.roots.size(); ++i)
      std::cout << "root " << format(Polynomial{{res.roots[i]}}) << "  multiplicity "
                << res.multiplicities[i] << "\n";
    std::cout << "backward error: " << res.backward_error << "\n"
              << "condition: " << res.condition << "\n";
  }
  return 0;
}

int run_pkernel(const std::string& path, const CommonOpts& opts) {
  MatrixXcd a = read_matrix_file(path);
  KernelResult res = numerical_kernel(a, opts.tol, config_of(opts));
  if (opts.as_json) {
    json out{{"rank", res.rank},
             {"codimension", res.codimension},
             {"kernel", matrix_json(res.kernel_basis)},
             {"backward_error", res.backward_error},
             {"condition", res.condition},
             {"marginal_gap", res.marginal}};
    if (opts.trace) out["trace"] = trace_json(res.trace);
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "rank: " << res.rank << "\n"
              << "kernel dimension: " << res.kernel_basis.cols() << "\n";
    if (res.kernel_basis.cols() > 0)
      std::cout << "kernel basis:\n" << format_matrix(res.kernel_basis) << "\n";
    std::cout << "backward error: " << res.backward_error << "\n"
              << "condition: " << res.condition << "\n";
    if (res.marginal)
      std::cout << "warning: marginal singular-value gap (ratio " << res.gap_ratio << ")\n";
  }
  return 0;
}

int run_pjcf(const std::string& path, const CommonOpts& opts) {
  MatrixXcd a = read_matrix_file(path);
  JcfResult res = regularized_jcf(a, opts.tol, opts.seed, config_of(opts));
  if (opts.as_json) {
    json groups = json::array();
    for (const SegreGroup& g : res.structure.groups)
      groups.push_back(json{{"eigenvalue", complex_json(g.eigenvalue)}, {"blocks", g.blocks}});
    json out{{"groups", groups},
             {"codimension", res.structure.codimension},
             {"backward_error", res.backward_error},
             {"condition", res.condition},
             {"sigma_min_X", res.sigma_min_transform}};
    if (opts.trace) out["trace"] = trace_json(res.trace);
    std::cout << out.dump() << "\n";
  } else {
    for (const SegreGroup& g : res.structure.groups) {
      std::cout << "eigenvalue " << format(Polynomial{{g.eigenvalue}}) << "  blocks";
      for (int s : g.blocks) std::cout << " " << s;
      std::cout << "\n";
    }
    std::cout << "codimension: " << res.structure.codimension << "\n"
              << "backward error: " << res.backward_error << "\n"
              << "condition: " << res.condition << "\n"
              << "sigma_min(X): " << res.sigma_min_transform << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularized solvers for singular algebraic problems"};
  app.require_subcommand(1);

  std::string poly_p, poly_q, matrix_path;
  CommonOpts opts;

  CLI::App* cmd_pgcd = app.add_subcommand("pgcd", "approximate greatest common divisor");
  cmd_pgcd->add_option("p", poly_p, "first polynomial")->required();
  cmd_pgcd->add_option("q", poly_q, "second polynomial")->required();
  add_common(cmd_pgcd, opts);

  CLI::App* cmd_proots = app.add_subcommand("proots", "roots with multiplicity structure");
  cmd_proots->add_option("p", poly_p, "polynomial")->required();
  add_common(cmd_proots, opts);

  CLI::App* cmd_pkernel = app.add_subcommand("pkernel", "numerical rank and kernel basis");
  cmd_pkernel->add_option("matrix", matrix_path, "matrix file (one row per line)")->required();
  add_common(cmd_pkernel, opts);

  CLI::App* cmd_pjcf = app.add_subcommand("pjcf", "regularized Jordan canonical form");
  cmd_pjcf->add_option("matrix", matrix_path, "matrix file (one row per line)")->required();
  add_common(cmd_pjcf, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (opts.tol <= 0.0) {
      std::cerr << "error: --tol must be positive\n";
      return kExitParse;
    }
    if (cmd_pgcd->parsed()) return run_pgcd(poly_p, poly_q, opts);
    if (cmd_proots->parsed()) return run_proots(poly_p, opts);
    if (cmd_pkernel->parsed()) return run_pkernel(matrix_path, opts);
    if (cmd_pjcf->parsed()) return run_pjcf(matrix_path, opts);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const GnError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
