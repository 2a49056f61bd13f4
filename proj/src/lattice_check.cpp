#include "setdual/lattice_check.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <array>
#include <functional>
#include <random>
#include <stdexcept>

namespace setdual {
namespace {

constexpr std::array kIdentities = {
    "random_increasing",  "passage_extensive",   "passage_idempotent", "passage_monotone",
    "passage_meet",       "closed_lattice",      "lfrf_order",         "lfrf_left",
    "lfrf_right",         "c1",                  "c2",                 "inverse_closed",
    "inverse_right_continuous", "round_trip",    "minmax",
};

class Tally {
 public:
  Tally(LatticeReport& rep, int instance, std::uint64_t seed)
      : rep_(rep), instance_(instance), seed_(seed) {}

  void expect(const char* name, bool ok, const std::function<std::string()>& detail) {
    for (IdentityTally& t : rep_.tallies) {
      if (t.name != name) continue;
      ++t.checked;
      if (!ok) {
        ++t.violations;
        if (!rep_.first_failure) rep_.first_failure = LatticeCounterexample{name, instance_, seed_, detail()};
      }
      return;
    }
    throw std::logic_error(std::string("unknown identity ") + name);
  }

 private:
  LatticeReport& rep_;
  int instance_;
  std::uint64_t seed_;
};

GridMonotoneSet random_set(std::mt19937_64& rng, int dim, int side, Orientation o) {
  std::uniform_int_distribution<int> count(1, 3), coord(0, side - 1);
  std::vector<IPoint> gens(static_cast<std::size_t>(count(rng)));
  for (IPoint& g : gens) {
    g.resize(static_cast<std::size_t>(dim));
    for (int& v : g) v = coord(rng);
  }
  return GridMonotoneSet(dim, o, std::move(gens));
}

// A ⊆ B as sets, regardless of orientation.
bool subset(const GridMonotoneSet& a, const GridMonotoneSet& b) {
  auto up = GridMonotoneSet::from_stored(b.dim(), Orientation::Up, b.stored());
  return std::all_of(a.stored().begin(), a.stored().end(), [&](const IPoint& g) { return up.contains(g); });
}

GridSetFunction map_values(const GridSetFunction& f,
                           const std::function<GridMonotoneSet(const GridMonotoneSet&)>& op) {
  std::vector<GridMonotoneSet> t;
  for (const auto& v : f.table()) t.push_back(op(v));
  GridSetFunction g(f.domain(), f.value_dim(), f.value_orientation(), std::move(t));
  g.verify_increasing();
  return g;
}

// Some real point of cell x lies strictly below some real point of cell y.
bool strictly_below(const IPoint& x, const IPoint& y) {
  bool odd = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
    odd = odd || (x[i] & 1);
  }
  return x != y || odd;
}

std::string first_difference(const GridSetFunction& a, const GridSetFunction& b) {
  for (std::size_t k = 0; k < a.domain().size(); ++k)
    if (!(a.table()[k] == b.table()[k]))
      return fmt::format("x={} lhs={} rhs={}", format_point(a.domain().point(k)),
                         format_set(a.table()[k]), format_set(b.table()[k]));
  return "domains differ";
}

IPoint stepped(IPoint x, std::size_t i, int (*step)(int)) {
  x[i] = step(x[i]);
  return x;
}

void check_passage(Tally& t, std::mt19937_64& rng, int dim, int side, Orientation o) {
  for (Strictness mode : {Strictness::HatK, Strictness::Interior}) {
    GridMonotoneSet a = random_set(rng, dim, side, o), b0 = random_set(rng, dim, side, o),
                    c = random_set(rng, dim, side, o);
    GridMonotoneSet ab = grid_bullet(a, mode);
    auto show = [&] { return fmt::format("A={} A*={}", format_set(a), format_set(ab)); };
    t.expect("passage_extensive", subset(a, ab), show);
    t.expect("passage_idempotent", grid_bullet(ab, mode) == ab, show);

    GridMonotoneSet b = grid_sup({a, b0});  // a ⩽ b
    t.expect("passage_monotone", grid_order_leq(ab, grid_bullet(b, mode)),
             [&] { return fmt::format("A={} B={}", format_set(a), format_set(b)); });

    GridMonotoneSet lhs = grid_bullet(grid_intersection({a, b0, c}), mode);
    GridMonotoneSet rhs = grid_intersection({ab, grid_bullet(b0, mode), grid_bullet(c, mode)});
    t.expect("passage_meet", lhs == rhs, [&] {
      return fmt::format("A={} B={} C={} lhs={} rhs={}", format_set(a), format_set(b0), format_set(c),
                         format_set(lhs), format_set(rhs));
    });

    // Closed-set lattice: bullet of the union is the closed inf (upper sets)
    // or closed sup (lower sets), and is extremal among closed bounds.
    std::vector<GridMonotoneSet> fam = {ab, grid_bullet(b0, mode), grid_bullet(c, mode)};
    GridMonotoneSet m = o == Orientation::Up ? grid_closed_inf(fam, mode) : grid_closed_sup(fam, mode);
    bool ok = grid_bullet(m, mode) == m;
    for (const auto& f : fam) ok = ok && subset(f, m);
    std::vector<GridMonotoneSet> wider = fam;
    wider.push_back(random_set(rng, dim, side, o));
    GridMonotoneSet d = grid_bullet(grid_union(wider), mode);
    ok = ok && subset(m, d);
    t.expect("closed_lattice", ok, [&] { return fmt::format("family bound={}", format_set(m)); });
  }
}

void check_lfrf(Tally& t, const GridSetFunction& h) {
  GridSetFunction hm = grid_left_version(h), hp = grid_right_version(h);
  const GridBox& b1 = hm.domain();
  for (std::size_t i = 0; i < b1.size(); ++i) {
    IPoint x = b1.point(i);
    for (std::size_t j = 0; j < b1.size(); ++j) {
      IPoint y = b1.point(j);
      if (!strictly_below(x, y)) continue;
      t.expect("lfrf_order", grid_order_leq(hp.at(x), hm.at(y)), [&] {
        return fmt::format("x={} y={} F+(x)={} F-(y)={}", format_point(x), format_point(y),
                           format_set(hp.at(x)), format_set(hm.at(y)));
      });
    }
  }
  GridBox b2 = b1.shrunk();
  GridSetFunction hm2 = grid_restrict(hm, b2), hp2 = grid_restrict(hp, b2);
  GridSetFunction mm = grid_left_version(hm), pm = grid_left_version(hp);
  GridSetFunction pp = grid_right_version(hp), mp = grid_right_version(hm);
  t.expect("lfrf_left", mm == hm2, [&] { return "(F-)- vs F-: " + first_difference(mm, hm2); });
  t.expect("lfrf_left", pm == hm2, [&] { return "(F+)- vs F-: " + first_difference(pm, hm2); });
  t.expect("lfrf_right", pp == hp2, [&] { return "(F+)+ vs F+: " + first_difference(pp, hp2); });
  t.expect("lfrf_right", mp == hp2, [&] { return "(F-)+ vs F+: " + first_difference(mp, hp2); });
}

// Pointwise F1 ⩽ F2 over the shared box.
bool pointwise_leq(const GridSetFunction& a, const GridSetFunction& b) {
  for (std::size_t k = 0; k < a.table().size(); ++k)
    if (!grid_order_leq(a.table()[k], b.table()[k])) return false;
  return true;
}

void check_inversion(Tally& t, const GridSetFunction& f, const GridSetFunction& f3, const GridBox& zbox) {
  const GridBox& xbox = f.domain();
  GridSetFunction g = grid_inverse(f, zbox);

  for (std::size_t zi = 0; zi < zbox.size(); ++zi) {
    IPoint z = zbox.point(zi);
    GridMonotoneSet gb = grid_bullet(g.at(z));
    for (std::size_t xi = 0; xi < xbox.size(); ++xi) {
      IPoint x = xbox.point(xi);
      bool fx = f.at(x).contains(z), gz = g.at(z).contains(x);
      t.expect("c1", fx == gz, [&] { return fmt::format("x={} z={}", format_point(x), format_point(z)); });
      bool valid = true;
      for (std::size_t i = 0; i < x.size(); ++i) valid = valid && xbox.contains(stepped(x, i, cell_down));
      if (valid)
        t.expect("inverse_closed", gb.contains(x) == gz, [&] {
          return fmt::format("z={} x={} G(z)={}", format_point(z), format_point(x), format_set(g.at(z)));
        });
    }
  }

  GridSetFunction gp = grid_right_version(g);
  for (std::size_t zi = 0; zi < gp.domain().size(); ++zi) {
    IPoint z = gp.domain().point(zi);
    bool same = true;
    for (std::size_t xi = 0; xi < xbox.size() && same; ++xi) {
      IPoint x = xbox.point(xi);
      same = gp.at(z).contains(x) == g.at(z).contains(x);
    }
    t.expect("inverse_right_continuous", same, [&] {
      return fmt::format("z={} G(z)={} G+(z)={}", format_point(z), format_set(g.at(z)), format_set(gp.at(z)));
    });
  }

  GridSetFunction back = grid_inverse(g, xbox);
  t.expect("round_trip", back == f, [&] { return first_difference(back, f); });

  GridSetFunction fp = grid_right_version(f), gm = grid_left_version(g);
  for (std::size_t xi = 0; xi < fp.domain().size(); ++xi) {
    IPoint x = fp.domain().point(xi);
    for (std::size_t zi = 0; zi < gm.domain().size(); ++zi) {
      IPoint z = gm.domain().point(zi);
      bool lhs = false, rhs = false;
      for (std::size_t i = 0; i < z.size(); ++i) lhs = lhs || fp.at(x).contains(stepped(z, i, cell_down));
      for (std::size_t j = 0; j < x.size(); ++j) rhs = rhs || gm.at(z).contains(stepped(x, j, cell_up));
      t.expect("c2", lhs == rhs, [&] {
        return fmt::format("x={} z={} F+(x)<z:{} x<G-(z):{}", format_point(x), format_point(z), lhs, rhs);
      });
    }
  }

  // Order reversal: F1 ⩽ F2 pointwise iff G2 ⪕ G1 pointwise.
  std::vector<GridMonotoneSet> meet;
  for (std::size_t k = 0; k < xbox.size(); ++k) meet.push_back(grid_sup({f.table()[k], f3.table()[k]}));
  GridSetFunction f2(xbox, f.value_dim(), Orientation::Up, std::move(meet));
  GridSetFunction g2 = grid_inverse(f2, zbox), g3 = grid_inverse(f3, zbox);
  const std::pair<const GridSetFunction*, const GridSetFunction*> pairs[] = {
      {&f, &f2}, {&f2, &f}, {&f, &f3}, {&f3, &f}, {&f2, &f3}};
  const GridSetFunction* inv[] = {&g, &g2, &g3};
  auto inverse_of = [&](const GridSetFunction* p) { return p == &f ? inv[0] : p == &f2 ? inv[1] : inv[2]; };
  for (const auto& [a, b] : pairs) {
    bool lhs = pointwise_leq(*a, *b);
    bool rhs = pointwise_leq(*inverse_of(b), *inverse_of(a));
    t.expect("minmax", lhs == rhs, [&] { return fmt::format("F1<=F2:{} G2<=G1:{}", lhs, rhs); });
  }
}

}  // namespace

std::string format_point(const IPoint& p) { return fmt::format("[{}]", fmt::join(p, ",")); }

std::string format_set(const GridMonotoneSet& a) {
  std::vector<std::string> gs;
  for (const IPoint& g : a.generators()) gs.push_back(format_point(g));
  return fmt::format("{}{{{}}}", a.orientation() == Orientation::Up ? "up" : "down", fmt::join(gs, ","));
}

std::uint64_t instance_seed(std::uint64_t seed, int i) {
  // splitmix64 of the pair
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i) + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

LatticeReport lattice_check(const LatticeCheckConfig& config) {
  if (config.box < 7) throw std::invalid_argument("lattice-check box side must be at least 7");
  if (config.dim_x < 1 || config.dim_x > 3 || config.dim_z < 1 || config.dim_z > 3)
    throw std::invalid_argument("lattice-check dimensions must be in [1, 3]");
  LatticeReport rep;
  rep.config = config;
  for (const char* name : kIdentities) rep.tallies.push_back({name, 0, 0});

  const int side = config.box;
  double cells = 1;
  for (int i = 0; i < config.dim_x; ++i) cells *= side;
  const double density = config.density >= 0 ? config.density : std::min(0.5, 6.0 / cells);
  const GridBox zbox{config.dim_z, 0, side - 1};

  for (int i = 0; i < config.instances; ++i) {
    const std::uint64_t s = instance_seed(config.seed, i);
    Tally t(rep, i, s);
    std::mt19937_64 rng(s);

    GridSetFunction raw = grid_random_instance(s, config.dim_x, config.dim_z, side, density);
    t.expect("random_increasing", raw.increasing_verified(), [] { return std::string("instance not increasing"); });
    check_passage(t, rng, config.dim_z, side, Orientation::Up);
    check_passage(t, rng, config.dim_z, side, Orientation::Down);

    auto close = [](const GridMonotoneSet& a) { return grid_bullet(a); };
    GridSetFunction h = map_values(raw, close);
    check_lfrf(t, h);

    // Inverse values are lower sets cut at the top of F's box; ending the box on
    // a point code (even) keeps the cut sets closed.
    GridBox xbox = h.domain().shrunk();
    if (xbox.hi & 1) --xbox.hi;
    GridSetFunction f = grid_restrict(grid_left_version(h), xbox);
    GridSetFunction other = grid_restrict(
        grid_left_version(map_values(
            grid_random_instance(s ^ 0x5bd1e995ULL, config.dim_x, config.dim_z, side, density), close)),
        xbox);
    check_inversion(t, f, other, zbox);
    check_lfrf(t, grid_inverse(f, zbox));
  }
  return rep;
}

}  // namespace setdual
