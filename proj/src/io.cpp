#include "sdopart/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sdopart {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw DataError("expected a real number, got " + j.dump());
  std::string s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf" || s == "+inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  double x = 0.0;
  const auto res = std::from_chars(first, s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError("cannot parse real number '" + s + "'");
  return x;
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json reals(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(format_real(v(i)));
  return a;
}

Vector vector_from(const Json& j) {
  if (!j.is_array()) throw DataError("expected an array of reals");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = parse_real(j[i]);
  return v;
}

Json matrix_json(const SymMatd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.dim(); ++i) rows.push_back(reals(m.matrix().row(i).transpose()));
  return rows;
}

SymMatd matrix_from(const Json& j, Index n, bool upper, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    throw DataError(what + ": expected " + std::to_string(n) + " rows");
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<size_t>(i)];
    const Index len = upper ? n - i : n;
    if (!row.is_array() || static_cast<Index>(row.size()) != len)
      throw DataError(what + ": row " + std::to_string(i) + " must have " + std::to_string(len) + " entries");
    for (Index k = 0; k < len; ++k) {
      const double x = parse_real(row[static_cast<size_t>(k)]);
      if (upper) {
        m(i, i + k) = x;
        m(i + k, i) = x;
      } else {
        m(i, k) = x;
      }
    }
  }
  try {
    return SymMatd(m, 1e-12);
  } catch (const DataError&) {
    throw DataError(what + ": matrix is not symmetric");
  }
}

Json ranks_json(const RankPair& r) { return Json::array({r.x, r.s}); }

RankPair ranks_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("rank pair must be [rank X, rank S]");
  return {j[0].get<Index>(), j[1].get<Index>()};
}

Classification classification_from(const std::string& s) {
  for (auto c : {Classification::Transition, Classification::NonTransition, Classification::Unresolved})
    if (to_string(c) == s) return c;
  throw DataError("unknown classification '" + s + "'");
}

SegmentKind kind_from(const std::string& s) {
  if (s == to_string(SegmentKind::Invariancy)) return SegmentKind::Invariancy;
  if (s == to_string(SegmentKind::Nonlinearity)) return SegmentKind::Nonlinearity;
  throw DataError("unknown segment kind '" + s + "'");
}

}  // namespace

Json problem_to_json(const ParametricSDO& prob) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = prob.name;
  j["n"] = prob.n;
  j["m"] = prob.m;
  j["upper_triangle_only"] = false;
  Json a = Json::array();
  for (const auto& ai : prob.A) a.push_back(matrix_json(ai));
  j["A"] = a;
  j["b"] = reals(prob.b);
  j["C"] = matrix_json(prob.C);
  j["Cbar"] = matrix_json(prob.Cbar);
  j["domain"] = Json::array({format_real(prob.lo), format_real(prob.hi)});
  return j;
}

ParametricSDO problem_from_json(const Json& j) {
  try {
    const int version = field(j, "schema_version").get<int>();
    if (version != kSchemaVersion)
      throw DataError("unsupported schema_version " + std::to_string(version));
    ParametricSDO p;
    p.name = j.value("name", std::string());
    p.n = field(j, "n").get<Index>();
    p.m = field(j, "m").get<Index>();
    if (p.n < 1 || p.m < 1) throw DataError("n and m must be positive");
    const bool upper = j.value("upper_triangle_only", false);
    const Json& a = field(j, "A");
    if (!a.is_array() || static_cast<Index>(a.size()) != p.m)
      throw DataError("A must list m = " + std::to_string(p.m) + " matrices");
    for (Index i = 0; i < p.m; ++i)
      p.A.push_back(matrix_from(a[static_cast<size_t>(i)], p.n, upper, "A[" + std::to_string(i) + "]"));
    p.b = vector_from(field(j, "b"));
    p.C = matrix_from(field(j, "C"), p.n, upper, "C");
    p.Cbar = matrix_from(field(j, "Cbar"), p.n, upper, "Cbar");
    const Json& d = field(j, "domain");
    if (!d.is_array() || d.size() != 2) throw DataError("domain must be [lo, hi]");
    p.lo = parse_real(d[0]);
    p.hi = parse_real(d[1]);
    validate(p);
    return p;
  } catch (const Json::exception& e) {
    throw DataError(std::string("problem file: ") + e.what());
  }
}

Json settings_to_json(const PartitionSettings& s) {
  const IPMSettings& ipm = s.invariancy.ipm;
  const TrackSettings& t = s.track;
  const ClassifierSettings& c = s.classifier;
  Json sweep = Json::array();
  for (double x : c.rank_sweep) sweep.push_back(format_real(x));
  Json j;
  j["ipm"] = {{"tol_gap", format_real(ipm.tol_gap)},
              {"tol_feas", format_real(ipm.tol_feas)},
              {"max_iters", ipm.max_iters},
              {"init_scale", format_real(ipm.init_scale)}};
  j["invariancy"] = {{"rank_tol", format_real(s.invariancy.rank_tol)},
                     {"tau_int", format_real(s.invariancy.tau_int)}};
  j["track"] = {{"delta_eps", format_real(t.delta_eps)},
                {"sing_threshold", format_real(t.sing_threshold)},
                {"newton_tol", format_real(t.newton_tol)},
                {"newton_max_iters", t.newton_max_iters},
                {"sharpen_tol", format_real(t.sharpen_tol)},
                {"psd_slack", format_real(t.psd_slack)},
                {"correct", t.correct},
                {"sharpen", t.sharpen}};
  j["classifier"] = {{"probes", c.probes},
                     {"eta_rel", format_real(c.eta_rel)},
                     {"seed", c.seed},
                     {"null_tol", format_real(c.null_tol)},
                     {"gn_max_iters", c.gn_max_iters},
                     {"gn_tol", format_real(c.gn_tol)},
                     {"psd_slack", format_real(c.psd_slack)},
                     {"rank_tol", format_real(c.rank_tol)},
                     {"rank_sweep", sweep}};
  j["merge_tol"] = format_real(s.merge_tol);
  return j;
}

PartitionSettings settings_from_json(const Json& j) {
  PartitionSettings s;
  const Json& ipm = field(j, "ipm");
  s.invariancy.ipm.tol_gap = parse_real(field(ipm, "tol_gap"));
  s.invariancy.ipm.tol_feas = parse_real(field(ipm, "tol_feas"));
  s.invariancy.ipm.max_iters = field(ipm, "max_iters").get<int>();
  s.invariancy.ipm.init_scale = parse_real(field(ipm, "init_scale"));
  const Json& inv = field(j, "invariancy");
  s.invariancy.rank_tol = parse_real(field(inv, "rank_tol"));
  s.invariancy.tau_int = parse_real(field(inv, "tau_int"));
  const Json& t = field(j, "track");
  s.track.delta_eps = parse_real(field(t, "delta_eps"));
  s.track.sing_threshold = parse_real(field(t, "sing_threshold"));
  s.track.newton_tol = parse_real(field(t, "newton_tol"));
  s.track.newton_max_iters = field(t, "newton_max_iters").get<int>();
  s.track.sharpen_tol = parse_real(field(t, "sharpen_tol"));
  s.track.psd_slack = parse_real(field(t, "psd_slack"));
  s.track.correct = field(t, "correct").get<bool>();
  s.track.sharpen = field(t, "sharpen").get<bool>();
  const Json& c = field(j, "classifier");
  s.classifier.probes = field(c, "probes").get<int>();
  s.classifier.eta_rel = parse_real(field(c, "eta_rel"));
  s.classifier.seed = field(c, "seed").get<std::uint64_t>();
  s.classifier.null_tol = parse_real(field(c, "null_tol"));
  s.classifier.gn_max_iters = field(c, "gn_max_iters").get<int>();
  s.classifier.gn_tol = parse_real(field(c, "gn_tol"));
  s.classifier.psd_slack = parse_real(field(c, "psd_slack"));
  s.classifier.rank_tol = parse_real(field(c, "rank_tol"));
  s.classifier.rank_sweep.clear();
  for (const auto& x : field(c, "rank_sweep")) s.classifier.rank_sweep.push_back(parse_real(x));
  s.merge_tol = parse_real(field(j, "merge_tol"));
  return s;
}

Json report_to_json(const PartitionReport& rep) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = kVersion;
  j["problem"] = rep.problem;
  j["domain"] = Json::array({format_real(rep.lo), format_real(rep.hi)});
  j["epsilon_init"] = format_real(rep.eps_init);
  j["seed"] = rep.settings.classifier.seed;
  j["settings"] = settings_to_json(rep.settings);

  Json segs = Json::array();
  for (const auto& s : rep.segments)
    segs.push_back({{"kind", to_string(s.kind)},
                    {"lo", format_real(s.lo)},
                    {"hi", format_real(s.hi)},
                    {"ranks", ranks_json(s.ranks)},
                    {"ranks_uniform", s.ranks_uniform}});
  j["segments"] = segs;
  Json trans = Json::array();
  for (double t : rep.transition_points) trans.push_back(format_real(t));
  j["transition_points"] = trans;

  Json recs = Json::array();
  for (const auto& r : rep.singular_records) {
    Json o;
    o["eps_hat"] = format_real(r.eps_hat);
    o["classification"] = to_string(r.classification);
    o["point_ranks"] = ranks_json(r.point_ranks);
    o["accum_ranks"] = ranks_json(r.accum_ranks);
    o["left_ranks"] = r.left ? ranks_json(*r.left) : Json(nullptr);
    o["right_ranks"] = r.right ? ranks_json(*r.right) : Json(nullptr);
    o["ranks_stable"] = r.ranks_stable;
    o["null_dim"] = r.null_dim;
    o["effective_dim"] = r.effective_dim;
    o["probes_converged"] = r.probes_converged;
    o["probes_distinct"] = r.probes_distinct;
    o["order"] = format_real(r.order);
    o["note"] = r.note;
    o["v_accum"] = reals(r.v_accum);
    recs.push_back(o);
  }
  j["singular_records"] = recs;

  const auto& d = rep.diagnostics;
  j["diagnostics"] = {{"invariancy_queries", d.invariancy_queries},
                      {"tracks", d.tracks},
                      {"retries", d.retries},
                      {"skips", d.skips},
                      {"corrector_failures", d.corrector_failures}};
  j["concavity_max"] = format_real(rep.concavity_max);
  j["concave"] = rep.concave;
  j["complete"] = rep.complete;
  j["unresolved"] = rep.unresolved();

  Json samples = Json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"eps", format_real(s.eps)},
                       {"objective", format_real(s.objective)},
                       {"min_eig_x", format_real(s.min_eig_x)},
                       {"min_eig_s", format_real(s.min_eig_s)},
                       {"jac_min_sv", format_real(s.jac_min_sv)},
                       {"v", reals(s.v)}});
  j["samples"] = samples;
  return j;
}

PartitionReport report_from_json(const Json& j) {
  try {
    if (field(j, "schema_version").get<int>() != kSchemaVersion)
      throw DataError("unsupported report schema_version");
    PartitionReport rep;
    rep.problem = field(j, "problem").get<std::string>();
    const Json& d = field(j, "domain");
    rep.lo = parse_real(d.at(0));
    rep.hi = parse_real(d.at(1));
    rep.eps_init = parse_real(field(j, "epsilon_init"));
    rep.settings = settings_from_json(field(j, "settings"));
    for (const auto& s : field(j, "segments"))
      rep.segments.push_back({parse_real(field(s, "lo")), parse_real(field(s, "hi")),
                              kind_from(field(s, "kind").get<std::string>()), ranks_from(field(s, "ranks")),
                              field(s, "ranks_uniform").get<bool>()});
    for (const auto& t : field(j, "transition_points")) rep.transition_points.push_back(parse_real(t));
    for (const auto& o : field(j, "singular_records")) {
      SingularRecord r;
      r.eps_hat = parse_real(field(o, "eps_hat"));
      r.classification = classification_from(field(o, "classification").get<std::string>());
      r.point_ranks = ranks_from(field(o, "point_ranks"));
      r.accum_ranks = ranks_from(field(o, "accum_ranks"));
      if (!field(o, "left_ranks").is_null()) r.left = ranks_from(o.at("left_ranks"));
      if (!field(o, "right_ranks").is_null()) r.right = ranks_from(o.at("right_ranks"));
      r.ranks_stable = field(o, "ranks_stable").get<bool>();
      r.null_dim = field(o, "null_dim").get<Index>();
      r.effective_dim = field(o, "effective_dim").get<Index>();
      r.probes_converged = field(o, "probes_converged").get<int>();
      r.probes_distinct = field(o, "probes_distinct").get<int>();
      r.order = parse_real(field(o, "order"));
      r.note = field(o, "note").get<std::string>();
      r.v_accum = vector_from(field(o, "v_accum"));
      rep.singular_records.push_back(std::move(r));
    }
    const Json& dg = field(j, "diagnostics");
    rep.diagnostics.invariancy_queries = field(dg, "invariancy_queries").get<int>();
    rep.diagnostics.tracks = field(dg, "tracks").get<int>();
    rep.diagnostics.retries = field(dg, "retries").get<int>();
    rep.diagnostics.skips = field(dg, "skips").get<int>();
    rep.diagnostics.corrector_failures = field(dg, "corrector_failures").get<int>();
    rep.concavity_max = parse_real(field(j, "concavity_max"));
    rep.concave = field(j, "concave").get<bool>();
    rep.complete = field(j, "complete").get<bool>();
    for (const auto& s : field(j, "samples")) {
      Sample x;
      x.eps = parse_real(field(s, "eps"));
      x.objective = parse_real(field(s, "objective"));
      x.min_eig_x = parse_real(field(s, "min_eig_x"));
      x.min_eig_s = parse_real(field(s, "min_eig_s"));
      x.jac_min_sv = parse_real(field(s, "jac_min_sv"));
      x.v = vector_from(field(s, "v"));
      rep.samples.push_back(std::move(x));
    }
    return rep;
  } catch (const Json::exception& e) {
    throw DataError(std::string("report file: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed document: ") + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, bool overwrite) {
  if (!overwrite && std::filesystem::exists(path))
    throw Error("'" + path + "' exists; pass --force to overwrite");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

ParametricSDO read_problem_file(const std::string& path) {
  return problem_from_json(parse_document(read_text(path)));
}

void write_problem_file(const std::string& path, const ParametricSDO& prob, bool overwrite) {
  write_text(path, dump(problem_to_json(prob)), overwrite);
}

PartitionReport read_report_file(const std::string& path) {
  return report_from_json(parse_document(read_text(path)));
}

void write_report_file(const std::string& path, const PartitionReport& rep) {
  write_text(path, dump(report_to_json(rep)));
}

void write_samples_csv(std::ostream& os, const std::vector<Sample>& samples) {
  os << "eps,v,min_eig_X,min_eig_S,jac_min_sv\n";
  for (const auto& s : samples)
    os << format_real(s.eps) << ',' << format_real(s.objective) << ',' << format_real(s.min_eig_x)
       << ',' << format_real(s.min_eig_s) << ',' << format_real(s.jac_min_sv) << '\n';
}

}  // namespace sdopart
