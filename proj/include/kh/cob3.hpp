#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/smoothing.hpp"
#include "json.hpp"

namespace kh {

using Coef = int64_t;

struct CobError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Boundary curves of a generator A -> B are numbered
//   [A circles][B circles][cycles of A.match u B.match, by smallest point].
struct Component {
  std::vector<int> curves;  // sorted
  int genus = 0;
  int dots = 0;
  auto operator<=>(const Component&) const = default;
  int chi() const { return 2 - 2 * genus - (int)curves.size(); }
};

// Canonically sorted list of components; every curve appears exactly once.
using Surface = std::vector<Component>;

int curve_count(const Smoothing& top, const Smoothing& bottom);

// Normalize a coefficient for the given modulus (0 = integers).
inline Coef coef_norm(Coef c, int mod) {
  if (mod == 0) return c;
  c %= mod;
  return c < 0 ? c + mod : c;
}

struct Cobordism {
  Smoothing top, bottom;
  std::map<Surface, Coef> terms;
  int mod = 0;

  Cobordism() = default;
  Cobordism(Smoothing a, Smoothing b, int m = 0)
      : top(std::move(a)), bottom(std::move(b)), mod(m) {}

  bool is_zero() const { return terms.empty(); }
  void add(const Surface& s, Coef c);
  Cobordism& operator+=(const Cobordism& o);
  Cobordism& operator-=(const Cobordism& o);
  Cobordism operator+(const Cobordism& o) const;
  Cobordism operator-(const Cobordism& o) const;
  Cobordism operator*(Coef c) const;
  Cobordism operator-() const { return *this * -1; }
  // Equality of the stored linear combinations (compare reduced forms).
  bool operator==(const Cobordism& o) const;
  int ncurves() const { return curve_count(top, bottom); }
};

// Sort components and curve lists; checks that every curve occurs once.
Surface canonical(Surface s, int ncurves);

// deg = chi - |B|/2 - 2 dots (ungraded part).
int degree(const Surface& s, int npts);
// Graded degree of a generator: adds bottom.shift - top.shift.
int degree(const Surface& s, const Smoothing& top, const Smoothing& bottom);
// Common graded degree of all terms; throws if the terms disagree, returns
// nullopt-like INT_MIN for zero.
int degree(const Cobordism& c);

// Handles become dots (factor 2 each), two dots vanish, closed pieces are
// evaluated. Multi-curve components are kept.
Cobordism simplify(const Cobordism& c);
// Full dotted canonical form: additionally neck-cuts every multi-curve
// component. Result terms are disks with at most one dot.
Cobordism reduce(const Cobordism& c);
bool equal_reduced(const Cobordism& a, const Cobordism& b);

// Elementary cobordisms.
Cobordism identity(const Smoothing& s, int mod = 0);
Cobordism zero_cob(const Smoothing& a, const Smoothing& b, int mod = 0);
// Single generator with one component per connected piece of `pieces`
// (lists of curve ids); unlisted curves each become their own disk.
Cobordism from_parts(const Smoothing& a, const Smoothing& b,
                     const std::vector<Component>& parts, Coef c = 1,
                     int mod = 0);
Cobordism cap(int mod = 0);   // empty -> one circle
Cobordism cup(int mod = 0);   // one circle -> empty

// Vertical composition g o f (f first).
Cobordism compose(const Cobordism& g, const Cobordism& f);

// Smoothing-level gluing through a planar arc diagram, with bookkeeping.
struct GlueResult {
  Smoothing s;
  // part i circle j -> composite circle
  std::vector<std::vector<int>> part_circle;
  // composite circle -> (hole, point) on it, or hole = -2 for a part circle,
  // hole = -3 for a diagram loop (point = loop index)
  std::vector<Port> circle_rep;
  // output point -> first hole port reached from it (hole -1 if it reaches
  // another output point directly)
  std::vector<Port> out_rep;
};
GlueResult glue_smoothings(const PlanarArcDiagram& d,
                           const std::vector<Smoothing>& parts);

// Horizontal composition D(parts).
Cobordism planar_compose(const PlanarArcDiagram& d,
                         const std::vector<Cobordism>& parts);

// Relation instances on an ambient generator. Sites are component indices.
enum class Relation { S, T, FourTu, ThreeS1, ThreeS2, NeckCut };
struct RelationInstance {
  Relation kind;
  Cobordism ambient;        // single generator, coefficient 1
  std::vector<int> sites;   // 1 (S, T ignore), 3 or 4 entries; NeckCut: 2
};
// Both sides of the relation as cobordisms (before reduction).
std::pair<Cobordism, Cobordism> relation_sides(const RelationInstance& r);
bool check_relation(const RelationInstance& r);

// Surgery helpers on a single generator surface.
Surface add_tube(const Surface& s, int ci, int cj, int ncurves);
Surface add_handle(const Surface& s, int ci);
Surface add_dot(const Surface& s, int ci);

nlohmann::json to_json(const Smoothing& s);
nlohmann::json to_json(const Cobordism& c);

}  // namespace kh
