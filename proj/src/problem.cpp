#include "setdual/problem.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace setdual {
namespace {

using nlohmann::json;

class Reader {
 public:
  std::vector<SchemaError> errors;

  void error(const std::string& ptr, std::string msg) { errors.push_back({ptr, std::move(msg)}); }

  std::optional<double> number(const json& j, const std::string& ptr) {
    if (!j.is_number()) {
      error(ptr, "expected a number");
      return std::nullopt;
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
      error(ptr, "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const json& j, const std::string& ptr, int lo, int hi) {
    if (!j.is_number_integer()) {
      error(ptr, "expected an integer");
      return std::nullopt;
    }
    auto v = j.get<long long>();
    if (v < lo || v > hi) {
      error(ptr, fmt::format("expected an integer in [{}, {}]", lo, hi));
      return std::nullopt;
    }
    return static_cast<int>(v);
  }

  std::optional<Vec> vector(const json& j, const std::string& ptr, std::size_t dim) {
    if (!j.is_array()) {
      error(ptr, "expected an array of numbers");
      return std::nullopt;
    }
    if (dim != 0 && j.size() != dim) {
      error(ptr, fmt::format("expected {} entries, got {}", dim, j.size()));
      return std::nullopt;
    }
    Vec out;
    bool ok = true;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto v = number(j[i], fmt::format("{}/{}", ptr, i));
      ok = ok && v.has_value();
      out.push_back(v.value_or(0.0));
    }
    return ok ? std::optional<Vec>(out) : std::nullopt;
  }

  std::optional<Box> box(const json& j, const std::string& ptr, std::size_t dim) {
    if (!j.is_array() || j.size() != dim) {
      error(ptr, fmt::format("expected {} [lo, hi] ranges", dim));
      return std::nullopt;
    }
    Box out;
    for (std::size_t i = 0; i < dim; ++i) {
      auto r = vector(j[i], fmt::format("{}/{}", ptr, i), 2);
      if (!r) return std::nullopt;
      if (!((*r)[0] < (*r)[1])) {
        error(fmt::format("{}/{}", ptr, i), "range needs lo < hi");
        return std::nullopt;
      }
      out.emplace_back((*r)[0], (*r)[1]);
    }
    return out;
  }
};

std::optional<PolyCone> read_cone(Reader& rd, const json& doc, int n) {
  if (!doc.contains("cone")) return PolyCone::axis(n);
  const json& c = doc["cone"];
  if (!c.is_object()) {
    rd.error("/cone", "expected an object");
    return std::nullopt;
  }
  std::string type = c.value("type", "axis");
  try {
    if (type == "axis") return PolyCone::axis(n);
    if (type == "normals") {
      if (!c.contains("normals") || !c["normals"].is_array()) {
        rd.error("/cone/normals", "expected an array of normals");
        return std::nullopt;
      }
      std::vector<Vec> normals;
      for (std::size_t i = 0; i < c["normals"].size(); ++i) {
        auto v = rd.vector(c["normals"][i], fmt::format("/cone/normals/{}", i), static_cast<std::size_t>(n));
        if (!v) return std::nullopt;
        normals.push_back(*v);
      }
      return PolyCone::from_normals(n, normals);
    }
  } catch (const std::exception& e) {
    rd.error("/cone", e.what());
    return std::nullopt;
  }
  rd.error("/cone/type", "expected \"axis\" or \"normals\"");
  return std::nullopt;
}

std::optional<ScalarModel> read_scalar(Reader& rd, const json& g, const std::string& ptr, int m) {
  if (g.is_object() && g.contains("maxaffine")) {
    const json& pcs = g["maxaffine"];
    std::string p = ptr + "/maxaffine";
    if (!pcs.is_array() || pcs.empty()) {
      rd.error(p, "expected a non-empty array of [slope, intercept] pieces");
      return std::nullopt;
    }
    std::vector<AffinePiece> pieces;
    for (std::size_t j = 0; j < pcs.size(); ++j) {
      std::string pj = fmt::format("{}/{}", p, j);
      if (!pcs[j].is_array() || pcs[j].size() != 2) {
        rd.error(pj, "expected [slope, intercept]");
        return std::nullopt;
      }
      auto slope = rd.vector(pcs[j][0], pj + "/0", static_cast<std::size_t>(m));
      auto b = rd.number(pcs[j][1], pj + "/1");
      if (!slope || !b) return std::nullopt;
      pieces.push_back({*slope, *b});
    }
    return MaxAffine(pieces);
  }
  if (g.is_object() && g.contains("pwl")) {
    const json& w = g["pwl"];
    std::string p = ptr + "/pwl";
    if (m != 1) {
      rd.error(p, "piecewise-linear models need m = 1");
      return std::nullopt;
    }
    if (!w.is_object() || !w.contains("x") || !w.contains("y") || !w.contains("left_slope") ||
        !w.contains("right_slope")) {
      rd.error(p, "expected x, y, left_slope and right_slope");
      return std::nullopt;
    }
    auto xs = rd.vector(w["x"], p + "/x", 0);
    auto ys = rd.vector(w["y"], p + "/y", xs ? xs->size() : 0);
    auto l = rd.number(w["left_slope"], p + "/left_slope");
    auto r = rd.number(w["right_slope"], p + "/right_slope");
    if (!xs || !ys || !l || !r) return std::nullopt;
    try {
      return PiecewiseLinear1D(*xs, *ys, *l, *r);
    } catch (const std::invalid_argument& e) {
      rd.error(p, e.what());
      return std::nullopt;
    }
  }
  rd.error(ptr, "expected {\"maxaffine\": ...} or {\"pwl\": ...}");
  return std::nullopt;
}

}  // namespace

ProblemError::ProblemError(std::vector<SchemaError> errors)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "invalid problem:";
        for (const auto& e : errors) os << "\n  " << (e.pointer.empty() ? "(document)" : e.pointer) << ": " << e.message;
        return os.str();
      }()),
      errors_(std::move(errors)) {}

ProblemSpec parse_problem(const json& doc) {
  Reader rd;
  ProblemSpec spec;
  if (!doc.is_object()) throw ProblemError("", "expected a JSON object");

  spec.name = doc.value("name", "");
  if (!doc.contains("seed"))
    rd.error("/seed", "required");
  else if (!doc["seed"].is_number_unsigned())
    rd.error("/seed", "expected a non-negative integer");
  else
    spec.seed = doc["seed"].get<std::uint64_t>();

  if (!doc.contains("F") || !doc["F"].is_object()) throw ProblemError("/F", "required object");
  const json& f = doc["F"];
  auto m = f.contains("m") ? rd.integer(f["m"], "/F/m", 1, 3) : std::optional<int>(1);

  std::vector<Vec> dirs;
  if (!f.contains("directions") || !f["directions"].is_array() || f["directions"].empty()) {
    rd.error("/F/directions", "expected a non-empty array of directions");
  } else {
    std::size_t n = f["directions"][0].is_array() ? f["directions"][0].size() : 0;
    if (n < 1 || n > 3) rd.error("/F/directions/0", "direction dimension must be in [1, 3]");
    for (std::size_t i = 0; i < f["directions"].size() && n >= 1 && n <= 3; ++i) {
      auto v = rd.vector(f["directions"][i], fmt::format("/F/directions/{}", i), n);
      if (!v) continue;
      if (norm(*v) == 0.0) {
        rd.error(fmt::format("/F/directions/{}", i), "zero direction");
        continue;
      }
      dirs.push_back(normalized(*v));
    }
  }
  // Later sections need m and n; without them stop with what has been found.
  if (!m || dirs.empty() || dirs.size() != f["directions"].size()) throw ProblemError(rd.errors);
  const int n = static_cast<int>(dirs.front().size());

  std::optional<PolyCone> cone = read_cone(rd, doc, n);
  GridPtr grid;
  if (cone) {
    try {
      grid = std::make_shared<const DirectionGrid>(*cone, dirs);
    } catch (const std::invalid_argument& e) {
      rd.error("/F/directions", e.what());
    }
  }

  std::vector<ScalarModel> gs;
  if (!f.contains("g") || !f["g"].is_array()) {
    rd.error("/F/g", "expected an array with one model per direction");
  } else if (f["g"].size() != dirs.size()) {
    rd.error("/F/g", fmt::format("expected {} entries (one per direction), got {}", dirs.size(), f["g"].size()));
  } else {
    for (std::size_t i = 0; i < f["g"].size(); ++i)
      if (auto s = read_scalar(rd, f["g"][i], fmt::format("/F/g/{}", i), *m)) gs.push_back(std::move(*s));
  }

  if (!doc.contains("domain_box"))
    spec.domain_box.assign(static_cast<std::size_t>(*m), {-5.0, 5.0});
  else if (auto b = rd.box(doc["domain_box"], "/domain_box", static_cast<std::size_t>(*m)))
    spec.domain_box = *b;
  if (!doc.contains("z_box"))
    spec.z_box.assign(static_cast<std::size_t>(n), {-5.0, 5.0});
  else if (auto b = rd.box(doc["z_box"], "/z_box", static_cast<std::size_t>(n)))
    spec.z_box = *b;

  if (doc.contains("dual_grid")) {
    const json& dg = doc["dual_grid"];
    if (dg.is_object() && dg.contains("auto")) {
      if (auto c = rd.integer(dg["auto"], "/dual_grid/auto", 1, 100000)) spec.auto_count = *c;
    } else if (dg.is_array() && !dg.empty()) {
      std::vector<Vec> pts;
      for (std::size_t i = 0; i < dg.size(); ++i)
        if (auto v = rd.vector(dg[i], fmt::format("/dual_grid/{}", i), static_cast<std::size_t>(*m))) pts.push_back(*v);
      spec.dual_grid = pts;
    } else {
      rd.error("/dual_grid", "expected a non-empty array of m-vectors or {\"auto\": count}");
    }
  }

  if (doc.contains("samples")) {
    const json& s = doc["samples"];
    if (!s.is_object()) {
      rd.error("/samples", "expected an object");
    } else {
      if (s.contains("pairs"))
        if (auto v = rd.integer(s["pairs"], "/samples/pairs", 1, 10000000)) spec.samples = *v;
      if (s.contains("grid"))
        if (auto v = rd.integer(s["grid"], "/samples/grid", 2, 100001)) spec.grid = *v;
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (t.contains("member"))
      if (auto v = rd.number(t["member"], "/tolerances/member")) spec.tol = *v;
    if (t.contains("agree"))
      if (auto v = rd.number(t["agree"], "/tolerances/agree")) spec.agree_tol = *v;
  }
  if (doc.contains("eps_schedule")) {
    if (auto v = rd.vector(doc["eps_schedule"], "/eps_schedule", 0)) {
      spec.schedule.eps = *v;
      if ((v->size() != 2 && v->size() != 3) || !std::is_sorted(v->rbegin(), v->rend()) || v->back() <= 0)
        rd.error("/eps_schedule", "expected two or three positive decreasing values");
    }
  }

  if (!rd.errors.empty()) throw ProblemError(rd.errors);
  try {
    spec.model = std::make_shared<const SetValuedFn>(*cone, grid, *m, std::move(gs));
  } catch (const std::invalid_argument& e) {
    throw ProblemError("/F", e.what());
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError("", e.what());
  }
  return parse_problem(doc);
}

std::vector<Vec> problem_dual_grid(const ProblemSpec& spec) {
  if (spec.dual_grid) return *spec.dual_grid;
  return auto_dual_grid(*spec.model, spec.auto_count);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + item);
    }
    if (used != item.size()) throw std::invalid_argument("not a number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

}  // namespace setdual
