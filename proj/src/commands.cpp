#include "setdual/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

namespace setdual {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::ofstream open_report(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ProblemError("", "cannot write " + path);
  return f;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

Vec sample(const Box& box, std::mt19937_64& rng) {
  Vec v(box.size());
  for (std::size_t i = 0; i < box.size(); ++i)
    v[i] = std::uniform_real_distribution<double>(box[i].first, box[i].second)(rng);
  return v;
}

struct XZ {
  Vec x, z;
};

// The full grid for 1D models, seeded samples otherwise.
std::vector<XZ> evaluation_points(const ProblemSpec& spec) {
  std::vector<XZ> pts;
  if (spec.model->m() == 1 && spec.model->n() == 1) {
    for (double x : linspace(spec.domain_box[0].first, spec.domain_box[0].second, spec.grid))
      for (double z : linspace(spec.z_box[0].first, spec.z_box[0].second, spec.grid)) pts.push_back({{x}, {z}});
    return pts;
  }
  std::mt19937_64 rng(spec.seed);
  for (int i = 0; i < spec.samples; ++i) {
    Vec x = sample(spec.domain_box, rng);
    Vec z = sample(spec.z_box, rng);
    pts.push_back({x, z});
  }
  return pts;
}

std::string csv_vec(const Vec& v) { return fmt::format("{}", fmt::join(v, ",")); }

std::string header_names(const char* prefix, std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back(fmt::format("{}{}", prefix, i + 1));
  return fmt::format("{}", fmt::join(names, ","));
}

struct Tally {
  long agree = 0, false_negatives = 0, false_positives = 0;
  void add(bool direct, bool route) {
    if (direct == route)
      ++agree;
    else if (direct)
      ++false_negatives;
    else
      ++false_positives;
  }
  ordered_json to_json() const {
    return {{"agree", agree}, {"false_negatives", false_negatives}, {"false_positives", false_positives}};
  }
};

using Oracle = std::function<bool(const Vec&, const Vec&)>;

Oracle make_oracle(const std::string& name, const ProblemSpec& spec, const PenaltyTable& table,
                   const std::vector<Vec>& grid, const std::optional<FmTable>& fm) {
  if (name == "direct")
    return [&spec](const Vec& x, const Vec& z) { return ss_contains(fn_eval(*spec.model, x), z, spec.tol); };
  if (name == "qc")
    return [&table, &grid, &spec](const Vec& x, const Vec& z) {
      return qc_reconstruct_contains(table, grid, x, z, spec.tol);
    };
  if (name == "fm") {
    if (!fm) throw UnsupportedOperation("the fm oracle needs a convex-mode model");
    return [&fm, &spec](const Vec& x, const Vec& z) { return fm->reconstruct_contains(x, z, spec.tol); };
  }
  throw std::invalid_argument("unknown oracle: " + name + " (expected direct, qc or fm)");
}

}  // namespace

std::string format_ext(const ExtReal& v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return fmt::format("{}", v.value() + 0.0);  // no "-0"
}

void apply_globals(ProblemSpec& spec, const GlobalOptions& g) {
  if (g.tol) spec.tol = *g.tol;
  if (g.eps_schedule) spec.schedule.eps = *g.eps_schedule;
  if (g.seed) spec.seed = *g.seed;
}

std::vector<Vec> choose_dual_grid(const ProblemSpec& spec, const std::string& choice) {
  if (choice.empty() || choice == "problem") return problem_dual_grid(spec);
  if (choice == "auto") return auto_dual_grid(*spec.model, spec.auto_count);
  std::ifstream in(choice);
  if (!in) throw ProblemError("", "cannot open dual grid file " + choice);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError("", e.what());
  }
  std::vector<Vec> grid;
  if (!doc.is_array() || doc.empty()) throw ProblemError("", "dual grid file must hold a non-empty array");
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_array() || doc[i].size() != static_cast<std::size_t>(spec.model->m()))
      throw ProblemError(fmt::format("/{}", i), fmt::format("expected {} numbers", spec.model->m()));
    grid.push_back(doc[i].get<Vec>());
  }
  return grid;
}

bool grid_has_slopes(const SetValuedFn& f, const std::vector<Vec>& grid) {
  auto present = [&](const Vec& s) {
    return std::any_of(grid.begin(), grid.end(), [&](const Vec& g) { return norm(sub(g, s)) <= 1e-12; });
  };
  for (const ScalarModel& g : f.g()) {
    if (const auto* ma = std::get_if<MaxAffine>(&g)) {
      for (const AffinePiece& pc : ma->pieces())
        if (!present(pc.slope)) return false;
    } else {
      for (double s : std::get<PiecewiseLinear1D>(g).slopes())
        if (!present({s})) return false;
    }
  }
  return true;
}

int cmd_lattice_check(const LatticeCheckConfig& config, std::ostream& out) {
  LatticeReport rep = lattice_check(config);
  ordered_json j;
  j["command"] = "lattice-check";
  j["seed"] = config.seed;
  j["instances"] = config.instances;
  j["dim_x"] = config.dim_x;
  j["dim_z"] = config.dim_z;
  j["box"] = config.box;
  j["identities"] = ordered_json::array();
  for (const auto& t : rep.tallies)
    j["identities"].push_back({{"name", t.name}, {"checked", t.checked}, {"violations", t.violations}});
  if (rep.first_failure) {
    const auto& c = *rep.first_failure;
    j["counterexample"] = {{"identity", c.identity},
                           {"instance", c.instance},
                           {"instance_seed", c.instance_seed},
                           {"detail", c.detail}};
  }
  j["pass"] = rep.ok();
  out << j.dump(2) << '\n';
  return rep.ok() ? kPass : kCheckFailed;
}

int cmd_invert(const ProblemSpec& spec, const std::string& report, std::ostream& out) {
  const SetValuedFn& f = *spec.model;
  const auto m = static_cast<std::size_t>(f.m());
  if (!report.empty()) {
    std::ofstream csv = open_report(report);
    std::vector<std::string> cols = {header_names("z", static_cast<std::size_t>(f.n())), "empty"};
    for (std::size_t i = 0; i < m; ++i) {
      cols.push_back(fmt::format("sup_x{}", i + 1));
      cols.push_back(fmt::format("inf_x{}", i + 1));
    }
    csv << fmt::format("{}\n", fmt::join(cols, ","));
    std::vector<Vec> zs;
    if (f.n() == 1) {
      for (double z : linspace(spec.z_box[0].first, spec.z_box[0].second, spec.grid)) zs.push_back({z});
    } else {
      std::mt19937_64 rng(spec.seed);
      for (int i = 0; i < spec.samples; ++i) zs.push_back(sample(spec.z_box, rng));
    }
    for (const Vec& z : zs) {
      Polyhedron level = fn_level_set(f, z);
      bool empty = lp_is_empty(level);
      std::vector<std::string> cells = {csv_vec(z), empty ? "1" : "0"};
      for (std::size_t i = 0; i < m; ++i) {
        Vec e(m, 0.0);
        e[i] = 1.0;
        cells.push_back(format_ext(lp_support(level, e)));
        e[i] = -1.0;
        cells.push_back(format_ext(-lp_support(level, e)));
      }
      csv << fmt::format("{}\n", fmt::join(cells, ","));
    }
  }
  Sampler s;
  s.box = spec.domain_box;
  s.pairs = spec.samples;
  s.seed = spec.seed;
  s.tol = spec.tol;
  InverseReport r = fn_inverse_consistency(f, s, spec.z_box);
  // Level sets are −C-stable only for increasing models.
  bool increasing = fn_check(f, Property::Increasing, s).ok();
  bool pass = r.graph_violations == 0 && r.monotone_violations == 0 && (!increasing || r.cone_violations == 0);
  ordered_json j;
  j["command"] = "invert";
  j["problem"] = spec.name;
  j["graph"] = {{"checked", r.graph_checked}, {"violations", r.graph_violations}};
  j["monotone"] = {{"checked", r.monotone_checked}, {"violations", r.monotone_violations}};
  j["cone_stable"] = {{"checked", r.cone_checked}, {"violations", r.cone_violations}, {"applies", increasing}};
  if (r.witness && !pass) j["counterexample"] = *r.witness;
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? kPass : kCheckFailed;
}

int cmd_dualize(const ProblemSpec& spec, const std::string& dual_grid, const std::string& report,
                std::ostream& out) {
  const SetValuedFn& f = *spec.model;
  std::vector<Vec> grid = choose_dual_grid(spec, dual_grid);
  PenaltyTable table(spec.model, spec.schedule);
  std::optional<FmTable> fm;
  if (f.convex_mode()) fm.emplace(f, grid);
  bool matched = grid_has_slopes(f, grid);

  std::optional<std::ofstream> csv;
  if (!report.empty()) {
    csv = open_report(report);
    *csv << header_names("x", static_cast<std::size_t>(f.m())) << ','
         << header_names("z", static_cast<std::size_t>(f.n())) << ",member_direct,member_qc,member_fm";
    for (std::size_t i = 0; i < grid.size(); ++i) *csv << ",alpha_" << i + 1;
    *csv << '\n';
  }

  Tally qc, fmt_tally;
  std::vector<XZ> pts = evaluation_points(spec);
  for (const XZ& p : pts) {
    bool direct = ss_contains(fn_eval(f, p.x), p.z, spec.tol);
    bool q = qc_reconstruct_contains(table, grid, p.x, p.z, spec.tol);
    qc.add(direct, q);
    std::string fm_cell = "na";
    if (fm) {
      bool r = fm->reconstruct_contains(p.x, p.z, spec.tol);
      fmt_tally.add(direct, r);
      fm_cell = r ? "1" : "0";
    }
    if (csv) {
      *csv << csv_vec(p.x) << ',' << csv_vec(p.z) << ',' << (direct ? 1 : 0) << ',' << (q ? 1 : 0) << ',' << fm_cell;
      for (const Vec& xs : grid) *csv << ',' << format_ext(table.alpha(xs, p.z).value);
      *csv << '\n';
    }
  }

  // Frontier of each reconstruction against the direct one, along z for 1D models.
  std::optional<double> frontier;
  if (f.m() == 1 && f.n() == 1) {
    double worst = 0.0;
    for (double x : linspace(spec.domain_box[0].first, spec.domain_box[0].second, spec.grid)) {
      Vec xv{x};
      double g = f.g_at(0, xv) / (*f.grid())[0][0];
      std::vector<std::function<bool(double)>> routes = {
          [&](double z) { return qc_reconstruct_contains(table, grid, xv, Vec{z}, 0.0); }};
      if (fm) routes.push_back([&](double z) { return fm->reconstruct_contains(xv, Vec{z}, 0.0); });
      for (const auto& route : routes) {
        if (route(g - 1.0) || !route(g + 1.0)) {
          worst = kInf;
          continue;
        }
        worst = std::max(worst, std::abs(frontier_bisect(route, g - 1.0, g + 1.0, 0.0) - g));
      }
    }
    frontier = worst;
  }

  bool pass = qc.false_negatives == 0 && (!fm || fmt_tally.false_negatives == 0);
  if (matched) {
    pass = pass && qc.agree == static_cast<long>(pts.size()) && (!fm || fmt_tally.agree == static_cast<long>(pts.size()));
    if (frontier) pass = pass && *frontier <= spec.tol;
  }

  ordered_json j;
  j["command"] = "dualize";
  j["problem"] = spec.name;
  j["rows"] = pts.size();
  j["dual_grid_size"] = grid.size();
  j["slopes_included"] = matched;
  j["qc"] = qc.to_json();
  j["fm"] = fm ? fmt_tally.to_json() : ordered_json(nullptr);
  j["max_frontier_error"] = frontier ? ordered_json(std::isinf(*frontier) ? ordered_json("inf") : ordered_json(*frontier))
                                     : ordered_json(nullptr);
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? kPass : kCheckFailed;
}

int cmd_conjugate(const ProblemSpec& spec, const std::string& pairs_path, const std::string& report,
                  std::ostream& out) {
  const SetValuedFn& f = *spec.model;
  if (!f.convex_mode()) throw UnsupportedOperation("conjugate needs a convex-mode model");
  std::ifstream in(pairs_path);
  if (!in) throw ProblemError("", "cannot open " + pairs_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError("", e.what());
  }
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array() || doc["pairs"].empty())
    throw ProblemError("/pairs", "expected a non-empty array of {xstar, direction}");
  int count = doc.value("samples", 200);
  std::pair<double, double> s_range{-5.0, 5.0};
  if (doc.contains("s_range")) {
    auto r = doc["s_range"].get<std::vector<double>>();
    if (r.size() != 2 || !(r[0] < r[1])) throw ProblemError("/s_range", "expected [lo, hi] with lo < hi");
    s_range = {r[0], r[1]};
  }

  std::vector<Vec> xstars;
  std::vector<std::size_t> dirs;
  for (std::size_t i = 0; i < doc["pairs"].size(); ++i) {
    const json& p = doc["pairs"][i];
    std::string ptr = fmt::format("/pairs/{}", i);
    if (!p.is_object() || !p.contains("xstar") || !p["xstar"].is_array() ||
        p["xstar"].size() != static_cast<std::size_t>(f.m()))
      throw ProblemError(ptr + "/xstar", fmt::format("expected {} numbers", f.m()));
    std::size_t d = p.value("direction", 0);
    if (d >= f.grid()->size()) throw ProblemError(ptr + "/direction", "direction index out of range");
    xstars.push_back(p["xstar"].get<Vec>());
    dirs.push_back(d);
  }

  PenaltyTable table(spec.model, spec.schedule);
  FmTable fm(f, xstars);
  std::optional<std::ofstream> csv;
  if (!report.empty()) {
    csv = open_report(report);
    *csv << header_names("xstar", static_cast<std::size_t>(f.m())) << ",s,"
         << header_names("z", static_cast<std::size_t>(f.n())) << ",member_R,member_Rtilde\n";
  }

  ordered_json j;
  j["command"] = "conjugate";
  j["problem"] = spec.name;
  j["pairs"] = ordered_json::array();
  bool pass = true;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = 0; i < xstars.size(); ++i) {
    const Vec& xs = xstars[i];
    ExtReal c = fm.thresholds(i)[dirs[i]];
    std::vector<RiskSample> samples;
    for (int k = 0; k < count; ++k) {
      double s = std::uniform_real_distribution<double>(s_range.first, s_range.second)(rng);
      samples.push_back({xs, s, sample(spec.z_box, rng)});
    }
    RiskMembership maximal = [&](std::span<const double> x, double s, std::span<const double> z) {
      return risk_contains(table, x, s, z, spec.tol);
    };
    RiskMembership tilde = [&](std::span<const double>, double s, std::span<const double> z) {
      return fm.risk_contains(i, s, z, spec.tol);
    };
    long acc_r = 0, acc_t = 0;
    double r_min_acc = kInf, r_max_rej = -kInf, t_min_acc = kInf, t_max_rej = -kInf;
    for (const RiskSample& smp : samples) {
      bool a = maximal(smp.xstar, smp.s, smp.z), b = tilde(smp.xstar, smp.s, smp.z);
      acc_r += a;
      acc_t += b;
      if (f.n() == 1) {
        double z = smp.z[0];
        if (a) r_min_acc = std::min(r_min_acc, z); else r_max_rej = std::max(r_max_rej, z);
        if (b) t_min_acc = std::min(t_min_acc, z); else t_max_rej = std::max(t_max_rej, z);
      }
      if (csv) *csv << csv_vec(xs) << ',' << smp.s << ',' << csv_vec(smp.z) << ',' << (a ? 1 : 0) << ',' << (b ? 1 : 0) << '\n';
    }
    CompareReport cmp = maximality_compare(tilde, maximal, samples);
    pass = pass && cmp.ok();
    ordered_json row;
    row["xstar"] = xs;
    row["direction"] = dirs[i];
    row["chi_star"] = format_ext(-c);
    row["threshold"] = format_ext(c);
    row["neg_G"] = c.is_neg_inf() ? "whole space" : fmt::format("{{z : <d, z> >= {}}}", format_ext(c));
    row["samples"] = samples.size();
    row["R_accepts"] = acc_r;
    row["Rtilde_accepts"] = acc_t;
    if (f.n() == 1) {
      row["R_min_accepted_z"] = format_ext(from_double(r_min_acc));
      row["R_max_rejected_z"] = format_ext(from_double(r_max_rej));
      row["Rtilde_min_accepted_z"] = format_ext(from_double(t_min_acc));
      row["Rtilde_max_rejected_z"] = format_ext(from_double(t_max_rej));
    }
    row["maximality_violations"] = cmp.violations;
    j["pairs"].push_back(row);
  }
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? kPass : kCheckFailed;
}

int cmd_compare(const ProblemSpec& spec, const std::string& oracle, const std::string& against,
                const std::string& dual_grid, const std::string& report, std::ostream& out) {
  const SetValuedFn& f = *spec.model;
  std::vector<Vec> grid = choose_dual_grid(spec, dual_grid);
  PenaltyTable table(spec.model, spec.schedule);
  std::optional<FmTable> fm;
  if (f.convex_mode()) fm.emplace(f, grid);
  Oracle a = make_oracle(oracle, spec, table, grid, fm), b = make_oracle(against, spec, table, grid, fm);

  std::optional<std::ofstream> csv;
  if (!report.empty()) {
    csv = open_report(report);
    *csv << header_names("x", static_cast<std::size_t>(f.m())) << ',' << header_names("z", static_cast<std::size_t>(f.n()))
         << ',' << oracle << ',' << against << '\n';
  }
  std::mt19937_64 rng(spec.seed);
  long agree = 0, only_a = 0, only_b = 0;
  std::optional<XZ> first;
  for (int i = 0; i < spec.samples; ++i) {
    Vec x = sample(spec.domain_box, rng);
    Vec z = sample(spec.z_box, rng);
    bool ra = a(x, z), rb = b(x, z);
    if (ra == rb) {
      ++agree;
    } else {
      (ra ? only_a : only_b) += 1;
      if (!first) first = XZ{x, z};
    }
    if (csv) *csv << csv_vec(x) << ',' << csv_vec(z) << ',' << (ra ? 1 : 0) << ',' << (rb ? 1 : 0) << '\n';
  }
  bool pass = agree == spec.samples;
  ordered_json j;
  j["command"] = "compare";
  j["problem"] = spec.name;
  j["oracle"] = oracle;
  j["against"] = against;
  j["samples"] = spec.samples;
  j["dual_grid_size"] = grid.size();
  j["agree"] = agree;
  j["only_" + oracle] = only_a;
  j["only_" + against] = only_b;
  if (first) j["counterexample"] = {{"x", first->x}, {"z", first->z}};
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? kPass : kCheckFailed;
}

}  // namespace setdual
