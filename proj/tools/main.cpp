// sdopart command-line driver.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdopart/convergence.hpp"
#include "sdopart/io.hpp"

using namespace sdopart;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUnresolved = 3, kSingularStart = 4 };

struct Globals {
  double tol_gap = IPMSettings{}.tol_gap;
  double tol_feas = IPMSettings{}.tol_feas;
  double newton_tol = TrackSettings{}.newton_tol;
  double sharpen_tol = TrackSettings{}.sharpen_tol;

  IPMSettings ipm() const {
    IPMSettings s;
    s.tol_gap = tol_gap;
    s.tol_feas = tol_feas;
    return s;
  }
  TrackSettings track() const {
    TrackSettings s;
    s.newton_tol = newton_tol;
    s.sharpen_tol = sharpen_tol;
    return s;
  }
};

std::string ranks_str(const RankPair& r) {
  return "(" + std::to_string(r.x) + "," + std::to_string(r.s) + ")";
}

std::string opt_ranks_str(const std::optional<RankPair>& r) { return r ? ranks_str(*r) : "-"; }

void write_csv(const std::string& path, const std::vector<Sample>& samples) {
  std::ostringstream os;
  write_samples_csv(os, samples);
  write_text(path, os.str());
}

int cmd_example(const std::string& name, const std::string& out, bool force) {
  write_problem_file(out, builtin(name), force);
  std::printf("wrote %s (%s)\n", out.c_str(), name.c_str());
  return kOk;
}

int cmd_solve(const Globals& g, const std::string& path, double eps, const std::string& out) {
  const ParametricSDO prob = read_problem_file(path);
  IPMSolution info;
  const KKTPoint v = solve_fixed(prob, eps, g.ipm(), &info);
  const KktMap map(prob);
  const RankPair r = ranks_of(v, InvariancySettings{}.rank_tol);
  const double pobj = objective_value(prob, v, eps), dobj = dual_value(prob, v);
  const double res = kkt_residual(prob, v, eps).norm();
  const double sv = min_singular_value(map.jacobian(v.stacked(), eps));
  std::printf("problem          %s\n", prob.name.c_str());
  std::printf("epsilon          %s\n", format_real(eps).c_str());
  std::printf("status           %s (%d iterations)\n", to_string(info.status).c_str(), info.iterations);
  std::printf("v(epsilon)       %.12g\n", pobj);
  std::printf("dual objective   %.12g\n", dobj);
  std::printf("gap              %.3e\n", std::abs(pobj - dobj));
  std::printf("kkt residual     %.3e\n", res);
  std::printf("min eig X, S     %.3e  %.3e\n", min_eig_upper(v.X().matrix()), min_eig_upper(v.S().matrix()));
  std::printf("jacobian min sv  %.3e\n", sv);
  std::printf("ranks (X, S)     %s\n", ranks_str(r).c_str());
  if (!out.empty()) {
    Json j;
    j["problem"] = prob.name;
    j["epsilon"] = format_real(eps);
    j["objective"] = format_real(pobj);
    j["dual_objective"] = format_real(dobj);
    j["ranks"] = Json::array({r.x, r.s});
    Json x = Json::array(), y = Json::array(), s = Json::array();
    for (Index i = 0; i < v.x.size(); ++i) x.push_back(format_real(v.x(i)));
    for (Index i = 0; i < v.y.size(); ++i) y.push_back(format_real(v.y(i)));
    for (Index i = 0; i < v.s.size(); ++i) s.push_back(format_real(v.s(i)));
    j["svec_X"] = x;
    j["y"] = y;
    j["svec_S"] = s;
    write_text(out, dump(j));
  }
  return kOk;
}

void print_report(const PartitionReport& rep) {
  std::printf("%-13s %-14s %-14s %s\n", "segment", "lo", "hi", "ranks (X,S)");
  for (const auto& s : rep.segments)
    std::printf("%-13s %-14.9f %-14.9f %s%s\n", to_string(s.kind).c_str(), s.lo, s.hi,
                ranks_str(s.ranks).c_str(), s.ranks_uniform ? "" : "  (samples disagree)");
  std::printf("transition points:");
  if (rep.transition_points.empty()) std::printf(" none");
  for (double t : rep.transition_points) std::printf(" %.9f", t);
  std::printf("\n");
  if (!rep.singular_records.empty()) {
    std::printf("%-14s %-15s %-8s %-8s %-8s %s\n", "singular eps", "class", "point", "left", "right",
                "local dim");
    for (const auto& r : rep.singular_records)
      std::printf("%-14.9f %-15s %-8s %-8s %-8s %ld of %ld\n", r.eps_hat, to_string(r.classification).c_str(),
                  ranks_str(r.point_ranks).c_str(), opt_ranks_str(r.left).c_str(),
                  opt_ranks_str(r.right).c_str(), static_cast<long>(r.effective_dim),
                  static_cast<long>(r.null_dim));
  }
  std::printf("samples %zu, concave %s, complete %s\n", rep.samples.size(), rep.concave ? "yes" : "no",
              rep.complete ? "yes" : "no");
}

struct PartitionArgs {
  std::string path;
  std::optional<double> eps_init;
  double delta = TrackSettings{}.delta_eps;
  double sing_threshold = TrackSettings{}.sing_threshold;
  double rank_tol = InvariancySettings{}.rank_tol;
  std::uint64_t seed = ClassifierSettings{}.seed;
  std::string out;
  std::string samples;
  bool allow_unresolved = false;
};

int cmd_partition(const Globals& g, const PartitionArgs& a) {
  const ParametricSDO prob = read_problem_file(a.path);
  PartitionSettings st;
  st.invariancy.ipm = g.ipm();
  st.invariancy.rank_tol = a.rank_tol;
  st.track = g.track();
  st.track.delta_eps = a.delta;
  st.track.sing_threshold = a.sing_threshold;
  st.classifier.rank_tol = a.rank_tol;
  st.classifier.seed = a.seed;
  const double eps0 = a.eps_init.value_or(0.5 * (prob.lo + prob.hi));
  PartitionReport rep;
  try {
    rep = partition(prob, eps0, st);
  } catch (const SingularStartError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSingularStart;
  }
  print_report(rep);
  if (!a.out.empty()) write_report_file(a.out, rep);
  if (!a.samples.empty()) write_csv(a.samples, rep.samples);
  if (rep.unresolved() > 0 && !a.allow_unresolved) {
    std::fprintf(stderr, "error: %d unresolved singular record(s); pass --allow-unresolved to accept\n",
                 rep.unresolved());
    return kUnresolved;
  }
  return kOk;
}

int cmd_track(const Globals& g, const std::string& path, double eps0, double bound, double delta,
              double sing_threshold, const std::string& samples) {
  const ParametricSDO prob = read_problem_file(path);
  const KktMap map(prob);
  TrackSettings st = g.track();
  st.delta_eps = bound >= eps0 ? std::abs(delta) : -std::abs(delta);
  st.sing_threshold = sing_threshold;
  const KKTPoint v0 = solve_fixed(prob, eps0, g.ipm());
  const TrackResult r = track(map, v0.stacked(), eps0, bound, st);
  std::printf("status    %s\n", to_string(r.status).c_str());
  std::printf("samples   %zu (last eps %.9f)\n", r.samples.size(), r.samples.back().eps);
  if (r.status != TrackStatus::ReachedBound) {
    std::printf("criterion %s\n", to_string(r.fired).c_str());
    std::printf("bracket   [%.9f, %.9f]\n", r.bracket_good, r.bracket_bad);
    std::printf("eps_hat   %.12f\n", r.eps_hat);
    if (r.order > 0.0) std::printf("order     %.2f\n", r.order);
  }
  if (!samples.empty()) write_csv(samples, r.samples);
  return kOk;
}

int cmd_convergence(const Globals& g, const std::string& path, const ConvergenceSettings& cs,
                    const std::string& csv) {
  const ParametricSDO prob = read_problem_file(path);
  const auto oracle = x12_oracle(prob.name);
  if (!oracle) throw Error("no analytic oracle for problem '" + prob.name + "'");
  ConvergenceSettings st = cs;
  st.track.newton_tol = g.newton_tol;
  const auto rows = convergence_study(prob, *oracle, st, g.ipm());
  std::printf("%-3s %-12s %-14s %-12s %-7s %s\n", "j", "delta", "approx sing", "err", "rho", "cpu(s)");
  for (const auto& r : rows) {
    const std::string rho = std::isnan(r.rho) ? "-" : format_real(std::round(r.rho * 1000) / 1000);
    std::printf("%-3d %-12.7g %-14.9g %-12.4e %-7s %.2f\n", r.j, r.delta, r.approx_singular, r.err,
                rho.c_str(), r.cpu_seconds);
  }
  if (!csv.empty()) {
    std::ostringstream os;
    os << "j,delta,approx_singular,err,rho,cpu_seconds\n";
    for (const auto& r : rows)
      os << r.j << ',' << format_real(r.delta) << ',' << format_real(r.approx_singular) << ','
         << format_real(r.err) << ',' << format_real(r.rho) << ',' << format_real(r.cpu_seconds) << '\n';
    write_text(csv, os.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition the perturbation domain of a parametric semidefinite program"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Globals g;
  app.add_option("--tol-gap", g.tol_gap, "Interior-point relative gap tolerance")->capture_default_str();
  app.add_option("--tol-feas", g.tol_feas, "Interior-point feasibility tolerance")->capture_default_str();
  app.add_option("--newton-tol", g.newton_tol, "Corrector residual tolerance")->capture_default_str();
  app.add_option("--sharpen-tol", g.sharpen_tol, "Sharpening bracket width")->capture_default_str();
  app.fallthrough();

  std::string name, out, path, samples;
  bool force = false;
  auto* ex = app.add_subcommand("example", "Write a built-in problem file");
  ex->add_option("name", name, "elliptope | elliptope-cut | circle-line | ellipse-circle")->required();
  ex->add_option("--out,-o", out, "Output path")->required();
  ex->add_flag("--force", force, "Overwrite an existing file");

  double eps = 0.0;
  auto* so = app.add_subcommand("solve", "Solve at a fixed epsilon");
  so->add_option("problem", path, "Problem file")->required();
  so->add_option("--epsilon", eps, "Perturbation parameter")->required();
  so->add_option("--out,-o", out, "Optional solution file");

  PartitionArgs pa;
  auto* pt = app.add_subcommand("partition", "Partition the domain into invariancy and nonlinearity intervals");
  pt->add_option("problem", pa.path, "Problem file")->required();
  pt->add_option("--epsilon-init", pa.eps_init, "Starting point (default: domain midpoint)");
  pt->add_option("--delta", pa.delta, "Mesh increment")->capture_default_str();
  pt->add_option("--sing-threshold", pa.sing_threshold, "Jacobian singular-value threshold")->capture_default_str();
  pt->add_option("--rank-tol", pa.rank_tol, "Relative rank tolerance")->capture_default_str();
  pt->add_option("--seed", pa.seed, "Classifier probe seed")->capture_default_str();
  pt->add_option("--out,-o", pa.out, "Report file");
  pt->add_option("--samples", pa.samples, "Sample CSV file");
  pt->add_flag("--allow-unresolved", pa.allow_unresolved, "Exit 0 even with unresolved singular records");

  double t_eps0 = 0.0, t_bound = 0.0, t_delta = TrackSettings{}.delta_eps;
  double t_thr = TrackSettings{}.sing_threshold;
  auto* tr = app.add_subcommand("track", "Track the optimal solution from epsilon-init toward a bound");
  tr->add_option("problem", path, "Problem file")->required();
  tr->add_option("--epsilon-init", t_eps0, "Starting point")->required();
  tr->add_option("--bound", t_bound, "Tracking target")->required();
  tr->add_option("--delta", t_delta, "Mesh increment magnitude")->capture_default_str();
  tr->add_option("--sing-threshold", t_thr, "Jacobian singular-value threshold")->capture_default_str();
  tr->add_option("--samples", samples, "Sample CSV file");

  ConvergenceSettings cs;
  std::string csv;
  auto* cv = app.add_subcommand("convergence", "Predictor order study against a closed-form solution");
  cv->add_option("problem", path, "Problem file (elliptope or circle-line)")->required();
  cv->add_option("--epsilon-init", cs.eps_init, "Starting point")->capture_default_str();
  cv->add_option("--delta-base", cs.delta_base, "Coarsest mesh increment")->capture_default_str();
  cv->add_option("--levels", cs.levels, "Finest level J")->capture_default_str();
  cv->add_option("--target", cs.target, "Singular point to approach")->capture_default_str();
  cv->add_option("--csv", csv, "Table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ex->parsed()) return cmd_example(name, out, force);
    if (so->parsed()) return cmd_solve(g, path, eps, out);
    if (pt->parsed()) return cmd_partition(g, pa);
    if (tr->parsed()) return cmd_track(g, path, t_eps0, t_bound, t_delta, t_thr, samples);
    if (cv->parsed()) return cmd_convergence(g, path, cs, csv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
