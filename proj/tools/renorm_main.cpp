// renorm: fixed points of the p-tupling renormalization operators, their
// scaling constants, and the attached verification suites.
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "renorm/asymptotics.hpp"
#include "renorm/io.hpp"
#include "renorm/verifier.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace renorm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerifyFail = 4;

void write_or_print(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << payload;
}

void apply_jobs(int jobs) {
#ifdef _OPENMP
  if (const char* env = std::getenv("RENORM_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) jobs = j;
  }
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

struct SolveArgs {
  int p = 1;
  double r = 2.0;
  double nu = 1.0;
  double tol = 1e-12;
  int max_iter = 500;
  double damping = 1.0;
  int degree = 128;
  bool test_affine = false;
  int use_n_flag = -1;  // -1 auto, 0 off, 1 on
};

int run_solve_common(const SolveArgs& a, SolutionBundle* out,
                     IterationTrace* trace, std::string* err) {
  Feasibility f = feasibility(a.p, a.r, a.nu);
  bool affine_ok = a.test_affine && a.r >= 1.0 && a.nu > 1.0;
  if (!f.pass && !affine_ok) {
    std::ostringstream os;
    os << "{\n  \"error\": \"infeasible\",\n  \"margin\": "
       << io::format_double(f.margin) << "\n}\n";
    *err = os.str();
    return kExitInfeasible;
  }
  try {
    RegimeParams P = make_params(a.p, a.r, a.nu, a.test_affine);
    IterateOptions opts;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    opts.damping = a.damping;
    opts.degree = a.degree;
    if (a.use_n_flag >= 0) opts.use_N = a.use_n_flag == 1;
    *out = iterate(P, opts, trace);
    XiMaxReport xr = xi_max(*out);
    out->xi_max = xr.xi_max;
    out->xi_chain = xr.chain;
    return kExitOk;
  } catch (const FeasibilityError& e) {
    *err = std::string("{\n  \"error\": \"infeasible\",\n  \"detail\": \"") +
           e.what() + "\"\n}\n";
    return kExitInfeasible;
  } catch (const NonConvergenceError& e) {
    std::ostringstream os;
    os << "{\n  \"error\": \"non-convergence\",\n  \"detail\": \"" << e.what()
       << "\",\n  \"trace\": " << io::trace_to_json(e.trace, 0) << "}\n";
    *err = os.str();
    return kExitNoConvergence;
  } catch (const DivergenceError& e) {
    *err = std::string("{\n  \"error\": \"divergence\",\n  \"detail\": \"") +
           e.what() + "\"\n}\n";
    return kExitNoConvergence;
  } catch (const Error& e) {
    *err = std::string("{\n  \"error\": \"pipeline\",\n  \"detail\": \"") +
           e.what() + "\"\n}\n";
    return kExitNoConvergence;
  }
}

int cmd_solve(const SolveArgs& a, const std::string& output) {
  SolutionBundle B;
  IterationTrace tr;
  std::string err;
  int code = run_solve_common(a, &B, &tr, &err);
  if (code != kExitOk) {
    write_or_print(output, err);
    return code;
  }
  write_or_print(output, io::bundle_to_json(B));
  return kExitOk;
}

struct ScanArgs {
  std::vector<int> p_list{1};
  std::vector<double> nu_list{1.0};
  double r_min = 2.0, r_max = 5.0;
  int r_steps = 4;
  double tol = 1e-12;
  int max_iter = 500;
  int degree = 128;
  int jobs = 0;
};

struct ScanRow {
  int p;
  double nu, r;
  std::string status;
  SolutionBundle bundle;
  bool bounds_pass = false;
};

int cmd_scan(const ScanArgs& a, const std::string& output) {
  if (a.r_steps < 1 || !(a.r_max >= a.r_min) || a.p_list.empty() ||
      a.nu_list.empty()) {
    std::cerr << "scan: empty or degenerate grid\n";
    return kExitUsage;
  }
  apply_jobs(a.jobs);
  struct Point {
    int p;
    double nu, r;
  };
  std::vector<Point> grid;
  for (int p : a.p_list)
    for (double nu : a.nu_list)
      for (int i = 0; i < a.r_steps; ++i) {
        double r = a.r_steps == 1
                       ? a.r_min
                       : a.r_min + (a.r_max - a.r_min) * i / (a.r_steps - 1);
        grid.push_back({p, nu, r});
      }
  std::vector<ScanRow> rows(grid.size());
  std::int64_t n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& g = grid[i];
    ScanRow& row = rows[i];
    row.p = g.p;
    row.nu = g.nu;
    row.r = g.r;
    SolveArgs sa;
    sa.p = g.p;
    sa.r = g.r;
    sa.nu = g.nu;
    sa.tol = a.tol;
    sa.max_iter = a.max_iter;
    sa.degree = a.degree;
    std::string err;
    IterationTrace tr;
    int code = run_solve_common(sa, &row.bundle, &tr, &err);
    if (code == kExitOk) {
      row.status = "ok";
      row.bounds_pass = check_bounds(row.bundle).all_pass();
    } else if (code == kExitInfeasible) {
      row.status = "infeasible";
    } else {
      row.status = "error";
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ScanRow& x, const ScanRow& y) {
    if (x.p != y.p) return x.p < y.p;
    if (x.nu != y.nu) return x.nu < y.nu;
    return x.r < y.r;
  });
  std::ostringstream csv;
  csv << "p,nu,r,status,lambda,z1,tau,y0,residual,iterations,bounds_pass\n";
  int ok_rows = 0;
  for (const auto& row : rows) {
    csv << row.p << ',' << io::format_double(row.nu) << ','
        << io::format_double(row.r) << ',' << row.status << ',';
    if (row.status == "ok") {
      ++ok_rows;
      csv << io::format_double(row.bundle.lambda) << ','
          << io::format_double(row.bundle.z1) << ','
          << io::format_double(row.bundle.tau) << ','
          << io::format_double(row.bundle.y0) << ','
          << io::format_double(row.bundle.residual) << ','
          << row.bundle.iterations << ','
          << (row.bounds_pass ? "true" : "false") << '\n';
    } else {
      csv << ",,,,,,\n";
    }
  }
  write_or_print(output, csv.str());
  return ok_rows == 0 ? kExitNoConvergence : kExitOk;
}

int cmd_verify(const SolveArgs& a, const std::string& input,
               const std::string& output, bool appendix, bool with_extras) {
  if (appendix) {
    double m = appendix_sweep_min(10000);
    std::ostringstream os;
    os << "{\n  \"appendix_min_margin\": " << io::format_double(m)
       << ",\n  \"pass\": " << (m > 0 ? "true" : "false") << "\n}\n";
    write_or_print(output, os.str());
    return m > 0 ? kExitOk : kExitVerifyFail;
  }
  SolutionBundle B;
  if (!input.empty()) {
    std::ifstream is(input, std::ios::binary);
    if (!is) {
      std::cerr << "verify: cannot read " << input << "\n";
      return kExitUsage;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    try {
      B = io::bundle_from_json(ss.str());
    } catch (const std::exception& e) {
      std::cerr << "verify: corrupt bundle: " << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    IterationTrace tr;
    std::string err;
    int code = run_solve_common(a, &B, &tr, &err);
    if (code != kExitOk) {
      write_or_print(output, err);
      return code;
    }
  }
  BoundsReport rep = check_bounds(B);
  try {
    XiMaxReport xr = xi_max(B);
    for (const auto& e : xr.checks.entries) rep.entries.push_back(e);
  } catch (const Error& e) {
    BoundEntry be;
    be.name = std::string("xi-max-failed: ") + e.what();
    be.pass = false;
    rep.entries.push_back(be);
  }
  if (with_extras && B.params.nu == 2.0) {
    auto cr = lanford_commutativity(B);
    BoundEntry be;
    be.name = "commutativity";
    be.lhs = std::max(cr.pairing_defect, cr.edge_value_defect);
    be.rhs = 1e-8;
    be.margin = be.rhs - be.lhs;
    be.pass = cr.pass;
    rep.entries.push_back(be);
  }
  if (with_extras) {
    auto ur = univalence_probe(B, 400);
    BoundEntry be;
    be.name = "univalence-probe";
    be.lhs = ur.collisions;
    be.rhs = 0;
    be.margin = -ur.collisions;
    be.pass = ur.pass;
    rep.entries.push_back(be);
  }
  write_or_print(output, io::bounds_report_to_json(rep, "bound suite"));
  return rep.all_pass() ? kExitOk : kExitVerifyFail;
}

int cmd_asym(const SolveArgs& a, const std::vector<double>& r_list,
             const std::string& output) {
  if (!(a.nu > 0 && a.nu <= 1.0) || a.p < 2) {
    std::cerr << "asym: derived-function suite needs nu in (0,1] and p >= 2\n";
    return kExitInfeasible;
  }
  std::vector<double> rs = r_list.empty() ? std::vector<double>{a.r} : r_list;
  std::ostringstream os;
  os << "{\n  \"family\": [\n";
  std::vector<asymptotics::AsymptoticBundle> abs_;
  bool all_ok = true;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    SolveArgs sa = a;
    sa.r = rs[i];
    SolutionBundle B;
    IterationTrace tr;
    std::string err;
    int code = run_solve_common(sa, &B, &tr, &err);
    if (code != kExitOk) {
      std::cerr << "asym: solve failed at r=" << rs[i] << "\n";
      return code;
    }
    auto ab = asymptotics::build(B, a.degree);
    auto rep = asymptotics::check_bounds(ab);
    double lr = asymptotics::limit_residual(ab);
    all_ok = all_ok && rep.all_pass() && lr <= 10 * std::max(B.residual, 1e-12);
    os << "    {\"r\": " << io::format_double(rs[i])
       << ", \"lambda\": " << io::format_double(B.lambda)
       << ", \"alpha\": " << io::format_double(ab.alpha)
       << ", \"y0\": " << io::format_double(ab.y0)
       << ", \"tau\": " << io::format_double(ab.tau)
       << ", \"limit_residual\": " << io::format_double(lr)
       << ", \"bounds_pass\": " << (rep.all_pass() ? "true" : "false")
       << "}" << (i + 1 < rs.size() ? "," : "") << "\n";
    abs_.push_back(std::move(ab));
  }
  os << "  ]";
  if (abs_.size() >= 2) {
    os << ",\n  \"s_distances\": [";
    std::vector<double> dists;
    for (std::size_t i = 0; i + 1 < abs_.size(); ++i) {
      dists.push_back(asymptotics::s_distance(abs_[i], abs_[i + 1]));
      os << io::format_double(dists.back())
         << (i + 2 < abs_.size() ? ", " : "");
    }
    os << "]";
    bool dec = true;
    for (std::size_t i = 0; i + 1 < dists.size(); ++i)
      dec = dec && dists[i + 1] < dists[i];
    os << ",\n  \"s_distances_decreasing\": " << (dec ? "true" : "false");
    all_ok = all_ok && dec;
  }
  os << ",\n  \"all_pass\": " << (all_ok ? "true" : "false") << "\n}\n";
  write_or_print(output, os.str());
  return all_ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-tupling renormalization fixed points and scaling constants"};
  app.require_subcommand(1);

  SolveArgs sa;
  std::string output;
  std::string input;
  bool appendix = false, extras = false;
  ScanArgs sc;
  std::vector<double> r_list;

  auto add_point_opts = [&](CLI::App* cmd) {
    cmd->add_option("--p", sa.p, "number of inner iterations per step");
    cmd->add_option("--r", sa.r, "critical degree (> 1)");
    cmd->add_option("--nu", sa.nu, "interpolation parameter in (0,2]");
    cmd->add_option("--tol", sa.tol, "stagnation tolerance");
    cmd->add_option("--max-iter", sa.max_iter, "iteration cap");
    cmd->add_option("--damping", sa.damping, "convex mixing weight in (0,1]");
    cmd->add_option("--degree", sa.degree, "representation degree per piece");
    cmd->add_flag("--test-affine", sa.test_affine,
                  "admit r = 1 (affine anchor, nu > 1)");
    cmd->add_option("--output,-o", output, "output path (default: stdout)");
  };

  auto* solve = app.add_subcommand("solve", "solve one parameter point");
  add_point_opts(solve);
  solve->add_flag(
      "--use-N,!--no-use-N",
      [&](std::int64_t v) { sa.use_n_flag = v > 0 ? 1 : 0; },
      "force the truncated operator on/off");

  auto* scan = app.add_subcommand("scan", "scan a parameter grid to CSV");
  scan->add_option("--p", sc.p_list, "list of p values");
  scan->add_option("--nu", sc.nu_list, "list of nu values");
  scan->add_option("--r-min", sc.r_min, "left end of the degree range");
  scan->add_option("--r-max", sc.r_max, "right end of the degree range");
  scan->add_option("--r-steps", sc.r_steps, "number of degree samples");
  scan->add_option("--tol", sc.tol, "stagnation tolerance");
  scan->add_option("--max-iter", sc.max_iter, "iteration cap");
  scan->add_option("--degree", sc.degree, "representation degree");
  scan->add_option("--jobs", sc.jobs, "worker threads (RENORM_JOBS overrides)");
  scan->add_option("--output,-o", output, "output path (default: stdout)");

  auto* verify = app.add_subcommand("verify", "run the bound suite");
  add_point_opts(verify);
  verify->add_option("--input,-i", input, "bundle JSON to verify");
  verify->add_flag("--appendix", appendix,
                   "sweep the frame-threshold inequality instead");
  verify->add_flag("--extras", extras,
                   "include commutativity and injectivity probes");

  auto* asym = app.add_subcommand("asym", "derived-function suite");
  add_point_opts(asym);
  asym->add_option("--r-list", r_list, "family of degrees (overrides --r)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(sa, output);
    if (scan->parsed()) return cmd_scan(sc, output);
    if (verify->parsed())
      return cmd_verify(sa, input, output, appendix, extras);
    if (asym->parsed()) return cmd_asym(sa, r_list, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
