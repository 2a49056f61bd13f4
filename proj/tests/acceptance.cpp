// One PASS/FAIL line per acceptance criterion; exit 1 when any fails.
// Usage: acceptance <problems dir> [criterion...]

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "setdual/commands.hpp"

using namespace setdual;
using nlohmann::json;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& summary) {
  fmt::print("{} {}: {}\n", ok ? "PASS" : "FAIL", id, summary);
  if (!ok) ++failures;
}

void detail(const std::string& line) { fmt::print("  {}\n", line); }

json run_json(const std::function<int(std::ostream&)>& cmd, int& rc) {
  std::ostringstream out;
  rc = cmd(out);
  return json::parse(out.str());
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
  return v;
}

// 1. Discrete identities, exact.
void criterion_lattice() {
  const std::pair<int, int> dims[] = {{1, 1}, {2, 1}, {2, 2}};  // (n, m)
  bool ok = true;
  long checks = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (auto [n, m] : dims) {
    LatticeCheckConfig c;
    c.seed = 0;
    c.instances = 500;
    c.dim_z = n;
    c.dim_x = m;
    c.box = 9;
    LatticeReport r = lattice_check(c);
    long v = 0;
    for (const auto& t : r.tallies) {
      checks += t.checked;
      v += t.violations;
    }
    detail(fmt::format("(n, m) = ({}, {}): {} identities, {} violations", n, m, r.tallies.size(), v));
    if (r.first_failure) detail("counterexample: " + r.first_failure->identity + " " + r.first_failure->detail);
    ok = ok && r.ok();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, ok && secs < 60.0,
         fmt::format("lattice identities, 3 x 500 instances, {} checks, {:.2f} s (limit 60 s)", checks, secs));
}

// 2. 1D reconstruction: vee on its slope grid, capped model on a 41-point sweep.
void criterion_1d(const std::string& dir) {
  int rc = 0;
  ProblemSpec vee = load_problem(dir + "/vee.json");
  vee.dual_grid = std::vector<Vec>{{-1}, {1}, {2}};
  json v = run_json([&](std::ostream& o) { return cmd_dualize(vee, "problem", "", o); }, rc);
  bool vee_ok = v["rows"] == 10201 && v["qc"]["agree"] == 10201 && v["fm"]["agree"] == 10201 &&
                v["max_frontier_error"].is_number() && v["max_frontier_error"].get<double>() <= 1e-9;
  detail(fmt::format("vee: qc {}/10201, fm {}/10201, frontier {}", v["qc"]["agree"].get<long>(),
                     v["fm"]["agree"].get<long>(), v["max_frontier_error"].dump()));

  ProblemSpec q = load_problem(dir + "/quasiconvex.json");
  std::vector<Vec> sweep;
  for (double t : linspace(-1.0, 1.0, 41)) sweep.push_back({t});
  q.dual_grid = sweep;
  json a = run_json([&](std::ostream& o) { return cmd_dualize(q, "problem", "", o); }, rc);
  std::vector<Vec> with_slopes = sweep;
  for (double s : std::get<PiecewiseLinear1D>(q.model->g()[0]).slopes()) with_slopes.push_back({s});
  q.dual_grid = with_slopes;
  json b = run_json([&](std::ostream& o) { return cmd_dualize(q, "problem", "", o); }, rc);
  double share_a = a["qc"]["agree"].get<double>() / a["rows"].get<double>();
  double share_b = b["qc"]["agree"].get<double>() / b["rows"].get<double>();
  bool q_ok = share_a >= 0.99 && share_b == 1.0;
  detail(fmt::format("quasiconvex: sweep {:.4f}, sweep + slopes {:.4f}", share_a, share_b));
  report(2, vee_ok && q_ok, "1D reconstruction on the 101 x 101 grid");
}

// 3. 2D set-valued model: exact with slopes, outer approximation on coarse grids.
void criterion_plane(const std::string& dir) {
  int rc = 0;
  ProblemSpec p = load_problem(dir + "/plane.json");
  json full = run_json([&](std::ostream& o) { return cmd_dualize(p, "problem", "", o); }, rc);
  bool ok = full["slopes_included"] == true && full["rows"] == 500 && full["qc"]["agree"] == 500 &&
            full["fm"]["agree"] == 500;
  detail(fmt::format("slope grid ({} points): qc {}/500, fm {}/500", full["dual_grid_size"].get<long>(),
                     full["qc"]["agree"].get<long>(), full["fm"]["agree"].get<long>()));
  for (int count : {2, 4, 8, 16}) {
    std::vector<Vec> g;
    for (int i = 0; i < count; ++i) {
      double t = 2.0 * std::numbers::pi * i / count + 0.1;
      g.push_back({std::cos(t), std::sin(t)});
    }
    p.dual_grid = g;
    json c = run_json([&](std::ostream& o) { return cmd_dualize(p, "problem", "", o); }, rc);
    long fn = c["qc"]["false_negatives"].get<long>() + c["fm"]["false_negatives"].get<long>();
    detail(fmt::format("coarse sweep of {}: false negatives {}, qc agree {}/500", count, fn,
                       c["qc"]["agree"].get<long>()));
    ok = ok && fn == 0;
  }
  report(3, ok, "2D qc and fm routes vs direct evaluation");
}

// 4. The relu example: R(-1, s) = R_+, the conjugate route gives all of R.
void criterion_relu(const std::string& dir) {
  ProblemSpec s = load_problem(dir + "/relu.json");
  PenaltyTable t(s.model, s.schedule);
  bool alpha_ok = true;
  std::vector<double> zs = linspace(-5.0, 5.0, 101);
  zs.insert(zs.end(), {-1e-3, 1e-3});
  for (double z : zs) {
    ExtReal a = t.alpha(Vec{-1}, Vec{z}).value;
    alpha_ok = alpha_ok && (z >= 0 ? a.is_pos_inf() : a.is_neg_inf());
  }
  FmTable fm(*s.model, {{-1}});
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> us(-100.0, 100.0), uz(-5.0, 5.0);
  std::vector<RiskSample> samples;
  bool sets_ok = fm.thresholds(0)[0].is_neg_inf();
  for (int i = 0; i < 200; ++i) {
    RiskSample r{{-1}, us(rng), {uz(rng)}};
    sets_ok = sets_ok && risk_contains(t, r.xstar, r.s, r.z) == (r.z[0] >= 0) && fm.risk_contains(0, r.s, r.z);
    samples.push_back(r);
  }
  RiskMembership maximal = [&](std::span<const double> x, double sv, std::span<const double> z) {
    return risk_contains(t, x, sv, z);
  };
  RiskMembership tilde = [&](std::span<const double>, double sv, std::span<const double> z) {
    return fm.risk_contains(0, sv, z);
  };
  CompareReport cmp = maximality_compare(tilde, maximal, samples);
  detail(fmt::format("alpha(-1, z) on {} z values: {}; R = R_+ and R~ = R on 200 samples: {}", zs.size(),
                     alpha_ok ? "+inf / -inf split at 0" : "mismatch", sets_ok ? "yes" : "no"));
  detail(fmt::format("maximality_compare: {} checked, {} violations", cmp.checked, cmp.violations));
  report(4, alpha_ok && sets_ok && cmp.ok() && cmp.checked == 200, "relu example, R~ <= R");
}

// 5. Sampled bullet: closed sets keep themselves, open quadrants close up.
void criterion_bullet() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyCone k = PolyCone::axis(2);
  BulletSampling interior;
  interior.eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  BulletSampling hat = interior;
  hat.mode = Strictness::HatK;
  long closed_checks = 0, closed_bad = 0, open_checks = 0, open_bad = 0;

  for (int s = 0; s < 20; ++s) {
    interior.seed = hat.seed = static_cast<std::uint64_t>(s);
    // Axis facets on the sample lattice plus one oblique facet.
    double t = std::numbers::pi / 2 * (0.1 + 0.8 * (u(rng) + 1) / 2);
    auto grid = std::make_shared<const DirectionGrid>(
        k, std::vector<Vec>{{1, 0}, {0, 1}, {std::cos(t), std::sin(t)}});
    std::vector<double> phi = {0.2 * std::round(5 * u(rng)), 0.2 * std::round(5 * u(rng)), u(rng) - 0.5};
    SupportedUpperSet a(grid, phi);
    auto member = [&](std::span<const double> z) { return ss_contains(a, z); };
    std::vector<Vec> pts;
    for (double x : linspace(-2.0, 2.0, 21))
      for (double y : linspace(-2.0, 2.0, 21)) pts.push_back({x, y});
    // Points on the oblique facet.
    Vec d = (*grid)[2];
    for (double r : linspace(-3.0, 3.0, 21)) {
      double c = phi[2];
      pts.push_back({c * d[0] - r * d[1], c * d[1] + r * d[0]});
    }
    for (const Vec& z : pts) {
      bool want = ss_contains(a, z, 1e-12);
      ++closed_checks;
      if (bullet_sampled(member, z, k, interior) != want) ++closed_bad;
    }
  }

  for (int s = 0; s < 20; ++s) {
    interior.seed = hat.seed = static_cast<std::uint64_t>(100 + s);
    double ax = 0.1 * std::round(10 * u(rng)), ay = 0.1 * std::round(10 * u(rng));
    auto open = [&](std::span<const double> z) { return z[0] > ax && z[1] > ay; };
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) {
        Vec z{ax + 0.1 * i, ay + 0.1 * j};
        if (i == 0) z[0] = ax;
        if (j == 0) z[1] = ay;
        open_checks += 2;
        if (bullet_sampled(open, z, k, hat) != open(z)) ++open_bad;
        if (bullet_sampled(open, z, k, interior) != (z[0] >= ax && z[1] >= ay)) ++open_bad;
      }
  }
  detail(fmt::format("closed sets: {} points, {} mismatches", closed_checks, closed_bad));
  detail(fmt::format("open quadrants (K-hat and interior): {} checks, {} mismatches", open_checks, open_bad));
  report(5, closed_bad == 0 && open_bad == 0, "sampled bullet, 20 closed + 20 open sets, eps to 1e-6");
}

// 6. LP support vs vertex enumeration; Fenchel-Young for the conjugate.
void criterion_lp() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> rows(0, 6), coef(-4, 4), rhs(-6, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  long lp_bad = 0, classes[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    Polyhedron p(2);
    int k = rows(rng);
    for (int r = 0; r < k; ++r) p.add_row({double(coef(rng)), double(coef(rng))}, double(rhs(rng)));
    Vec c{u(rng), u(rng)};
    ExtReal a = lp_support(p, c), b = vertex_enum_2d(p).support(c);
    ++classes[static_cast<int>(a.kind())];
    if (a.kind() != b.kind() || (a.is_finite() && std::abs(a.value() - b.value()) > 1e-9 * (1 + std::abs(b.value()))))
      ++lp_bad;
  }
  long fy_bad = 0, tight_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<AffinePiece> pieces;
    int k = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < k; ++j) pieces.push_back({{3 * u(rng), 3 * u(rng)}, 2 * u(rng)});
    MaxAffine g(pieces);
    Vec x{5 * u(rng), 5 * u(rng)}, xs{3 * u(rng), 3 * u(rng)};
    ExtReal c = maxaffine_conjugate(g, xs);
    if (c.is_neg_inf() || (c.is_finite() && g(x) + c.value() < dot(xs, x) - 1e-9)) ++fy_bad;
    // Equality at an active slope.
    std::size_t best = 0;
    for (std::size_t j = 1; j < pieces.size(); ++j)
      if (dot(pieces[j].slope, x) + pieces[j].intercept > dot(pieces[best].slope, x) + pieces[best].intercept) best = j;
    const Vec& a = pieces[best].slope;
    ExtReal ca = maxaffine_conjugate(g, a);
    if (!ca.is_finite() || std::abs(g(x) + ca.value() - dot(a, x)) > 1e-9 * (1 + std::abs(g(x)))) ++tight_bad;
  }
  detail(fmt::format("lp_support vs vertex_enum_2d: 1000 polyhedra (-inf {}, finite {}, +inf {}), {} mismatches",
                     classes[0], classes[1], classes[2], lp_bad));
  detail(fmt::format("Fenchel-Young: 1000 samples, {} inequality and {} equality failures", fy_bad, tight_bad));
  report(6, lp_bad == 0 && fy_bad == 0 && tight_bad == 0, "LP cross-oracle and Fenchel-Young");
}

// 7. Homogeneity, range invariance, openness and the two-route surrogate.
void criterion_conditions(const std::string& dir) {
  bool ok = true;
  for (const char* name : {"relu", "vee", "quasiconvex", "plane"}) {
    ProblemSpec s = load_problem(dir + "/" + name + ".json");
    PenaltyTable t(s.model, s.schedule);
    ConditionsConfig c;
    c.samples = 100;
    c.seed = s.seed;
    c.dual_grid = problem_dual_grid(s);
    c.z_box = s.z_box;
    c.radii = {1e-3, 1e-5};
    c.agree_tol = 1e-6;
    ConditionsReport r = maximal_conditions_check(t, c);
    auto cell = [](const ConditionTally& x) { return fmt::format("{}/{}", x.checked - x.violations, x.checked); };
    detail(fmt::format("{}: homogeneity {}, range {}, openness {}, two-route {}, quasiconcavity {}", name,
                       cell(r.homogeneity), cell(r.range), cell(r.openness), cell(r.two_route),
                       cell(r.quasiconcavity)));
    for (const ConditionTally* x : {&r.homogeneity, &r.range, &r.openness, &r.two_route, &r.quasiconcavity})
      if (!x->ok()) detail("  first failure: " + x->first_failure);
    ok = ok && r.ok();
  }
  report(7, ok, "penalty and risk structure on all shipped models");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <problems dir> [criterion...]\n";
    return 2;
  }
  const std::string dir = argv[1];
  const std::vector<std::function<void()>> criteria = {
      criterion_lattice,          [&] { criterion_1d(dir); }, [&] { criterion_plane(dir); },
      [&] { criterion_relu(dir); }, criterion_bullet,         criterion_lp,
      [&] { criterion_conditions(dir); }};
  std::vector<int> selected;
  for (int i = 2; i < argc; ++i) {
    int id = std::atoi(argv[i]);
    if (id < 1 || id > 7) {
      std::cerr << "criterion must be 1..7: " << argv[i] << "\n";
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7};
  for (int id : selected) {
    try {
      criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      report(id, false, fmt::format("uncaught {}", e.what()));
    }
  }
  fmt::print("{} of {} criteria failed\n", failures, selected.size());
  return failures == 0 ? 0 : 1;
}
