#include "kh/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace kh {

namespace {

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Role of a crossing slot: true if the edge enters the crossing there.
bool slot_is_head(const Crossing& c, int s) {
  if (s == 0) return true;
  if (s == 2) return false;
  return c.positive ? s == 3 : s == 1;
}

struct EndList {
  std::vector<End> ends;
};

std::map<int, EndList> collect_ends(const TangleDiagram& t) {
  std::map<int, EndList> m;
  for (int c = 0; c < t.size(); ++c)
    for (int s = 0; s < 4; ++s) m[t.x[c].e[s]].ends.push_back({c, s});
  for (int p = 0; p < (int)t.boundary.size(); ++p)
    m[t.boundary[p]].ends.push_back({-1, p});
  return m;
}

bool end_is_head(const TangleDiagram& t, const End& e) {
  if (e.c >= 0) return slot_is_head(t.x[e.c], e.s);
  return t.bdir[e.s] < 0;  // strand leaves the disk: the edge ends here
}

}  // namespace

int TangleDiagram::n_plus() const {
  return (int)std::count_if(x.begin(), x.end(),
                            [](const Crossing& c) { return c.positive; });
}
int TangleDiagram::n_minus() const { return size() - n_plus(); }

std::vector<int> TangleDiagram::labels() const {
  std::set<int> s(boundary.begin(), boundary.end());
  for (auto& c : x) s.insert(c.e.begin(), c.e.end());
  s.insert(loops.begin(), loops.end());
  return {s.begin(), s.end()};
}

int TangleDiagram::max_label() const {
  auto l = labels();
  return l.empty() ? 0 : l.back();
}

std::map<int, EdgeEnds> edge_ends(const TangleDiagram& t) {
  std::map<int, EdgeEnds> out;
  for (auto& [lab, el] : collect_ends(t)) {
    if (el.ends.size() != 2)
      throw DiagramError("edge " + std::to_string(lab) + " has " +
                         std::to_string(el.ends.size()) + " ends");
    bool h0 = end_is_head(t, el.ends[0]), h1 = end_is_head(t, el.ends[1]);
    if (h0 == h1)
      throw DiagramError("orientation clash on edge " + std::to_string(lab));
    out[lab] = h0 ? EdgeEnds{el.ends[1], el.ends[0]}
                  : EdgeEnds{el.ends[0], el.ends[1]};
  }
  return out;
}

// Darts: crossing c slot s -> 4c+s; boundary position p -> 4n+p.
namespace {
struct DartGraph {
  int n = 0, k = 0;
  std::vector<int> other, label;
  int nd() const { return 4 * n + k; }
  int sigma(int d) const {
    if (d < 4 * n) return 4 * (d / 4) + (d % 4 + 1) % 4;
    int p = d - 4 * n;
    return 4 * n + (p + k - 1) % k;
  }
  End end_of(int d) const {
    if (d < 4 * n) return {d / 4, d % 4};
    return {-1, d - 4 * n};
  }
};

DartGraph dart_graph(const TangleDiagram& t) {
  DartGraph g;
  g.n = t.size();
  g.k = (int)t.boundary.size();
  g.other.assign(g.nd(), -1);
  g.label.assign(g.nd(), 0);
  std::map<int, std::vector<int>> by;
  for (int c = 0; c < g.n; ++c)
    for (int s = 0; s < 4; ++s) {
      by[t.x[c].e[s]].push_back(4 * c + s);
      g.label[4 * c + s] = t.x[c].e[s];
    }
  for (int p = 0; p < g.k; ++p) {
    by[t.boundary[p]].push_back(4 * g.n + p);
    g.label[4 * g.n + p] = t.boundary[p];
  }
  for (auto& [l, v] : by) {
    if (v.size() != 2)
      throw DiagramError("edge " + std::to_string(l) + " has " +
                         std::to_string(v.size()) + " ends");
    g.other[v[0]] = v[1];
    g.other[v[1]] = v[0];
  }
  return g;
}
}  // namespace

std::vector<std::vector<Dart>> faces(const TangleDiagram& t) {
  DartGraph g = dart_graph(t);
  std::vector<char> seen(g.nd(), 0);
  std::vector<std::vector<Dart>> out;
  for (int d0 = 0; d0 < g.nd(); ++d0) {
    if (seen[d0]) continue;
    std::vector<Dart> f;
    int d = d0;
    while (!seen[d]) {
      seen[d] = 1;
      f.push_back({g.label[d], g.end_of(d)});
      d = g.sigma(g.other[d]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

bool is_planar(const TangleDiagram& t) {
  DartGraph g = dart_graph(t);
  int nv = g.n + (g.k > 0 ? 1 : 0);
  if (nv == 0) return true;
  int ne = g.nd() / 2;
  int nf = (int)faces(t).size();
  UF uf(nv);
  auto vert = [&](int d) { return d < 4 * g.n ? d / 4 : g.n; };
  for (int d = 0; d < g.nd(); ++d) uf.unite(vert(d), vert(g.other[d]));
  int comps = 0;
  for (int v = 0; v < nv; ++v) comps += uf.find(v) == v;
  return nv - ne + nf == 2 * comps;
}

void validate(const TangleDiagram& t) {
  if (t.bdir.size() != t.boundary.size())
    throw DiagramError("boundary direction list has wrong length");
  edge_ends(t);
  std::set<int> edge_labels;
  for (auto& [l, e] : collect_ends(t)) edge_labels.insert(l);
  for (int l : t.loops)
    if (edge_labels.count(l))
      throw DiagramError("loop label " + std::to_string(l) + " reused");
  if (std::set<int>(t.loops.begin(), t.loops.end()).size() != t.loops.size())
    throw DiagramError("duplicate loop labels");
  if (!is_planar(t)) throw DiagramError("incidence admits no planar embedding");
}

// ---------------------------------------------------------------- parsing

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& str) : s(str) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw DiagramError("PD syntax error at position " + std::to_string(i) +
                       ": " + what);
  }
  void ws() {
    while (i < s.size()) {
      if (std::isspace((unsigned char)s[i])) {
        ++i;
      } else if (s[i] == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++i;
      return true;
    }
    return false;
  }
  std::string word() {
    ws();
    size_t j = i;
    while (i < s.size() && std::isalpha((unsigned char)s[i])) ++i;
    return s.substr(j, i - j);
  }
  int integer() {
    ws();
    size_t j = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (j == i || (i == j + 1 && !std::isdigit((unsigned char)s[j])))
      fail("expected integer");
    return std::stoi(s.substr(j, i - j));
  }
};

// Orient strands: under passes fix directions; over-only strands fall back
// to the label-order convention (labels increase along the orientation).
void derive_signs(TangleDiagram& t) {
  auto ends = collect_ends(t);
  for (auto& [l, el] : ends)
    if (el.ends.size() != 2)
      throw DiagramError("edge " + std::to_string(l) + " has " +
                         std::to_string(el.ends.size()) + " ends");
  // head[(c,s)] : 1 head, 0 tail, -1 unknown; boundary likewise.
  int n = t.size(), k = (int)t.boundary.size();
  std::vector<int> role(4 * n + k, -1);
  auto id = [&](const End& e) { return e.c >= 0 ? 4 * e.c + e.s : 4 * n + e.s; };
  for (int c = 0; c < n; ++c) role[4 * c] = 1, role[4 * c + 2] = 0;
  std::vector<int> known(n, 0);
  auto other_end = [&](const End& e) {
    int lab = e.c >= 0 ? t.x[e.c].e[e.s] : t.boundary[e.s];
    auto& v = ends[lab].ends;
    return v[0] == e ? v[1] : v[0];
  };
  bool changed = true;
  auto settle_cross = [&](int c) {
    int rb = role[4 * c + 1], rd = role[4 * c + 3];
    if (rb >= 0 && rd < 0) role[4 * c + 3] = 1 - rb, changed = true;
    if (rd >= 0 && rb < 0) role[4 * c + 1] = 1 - rd, changed = true;
  };
  while (true) {
    changed = true;
    while (changed) {
      changed = false;
      for (int c = 0; c < n; ++c) settle_cross(c);
      for (int d = 0; d < 4 * n + k; ++d) {
        if (role[d] < 0) continue;
        End e = d < 4 * n ? End{d / 4, d % 4} : End{-1, d - 4 * n};
        int o = id(other_end(e));
        if (role[o] < 0) role[o] = 1 - role[d], changed = true;
        else if (role[o] == role[d])
          throw DiagramError("unorientable strand data near edge " +
                             std::to_string(e.c >= 0 ? t.x[e.c].e[e.s]
                                                     : t.boundary[e.s]));
      }
    }
    int pick = -1;
    for (int c = 0; c < n && pick < 0; ++c)
      if (role[4 * c + 1] < 0) pick = c;
    if (pick >= 0) {
      int b = t.x[pick].e[1], d = t.x[pick].e[3];
      bool pos = (b - d == 1) || (d - b > 1);
      role[4 * pick + 3] = pos ? 1 : 0;
      role[4 * pick + 1] = pos ? 0 : 1;
      continue;
    }
    int bp = -1;
    for (int p = 0; p < k && bp < 0; ++p)
      if (role[4 * n + p] < 0) bp = p;
    if (bp < 0) break;
    role[4 * n + bp] = 0;  // first unresolved boundary arc enters here
  }
  for (int c = 0; c < n; ++c) t.x[c].positive = role[4 * c + 3] == 1;
  t.bdir.assign(k, 0);
  for (int p = 0; p < k; ++p) t.bdir[p] = role[4 * n + p] == 0 ? +1 : -1;
}

}  // namespace

TangleDiagram parse_pd(const std::string& text) {
  Lexer lx(text);
  TangleDiagram t;
  std::string w = lx.word();
  if (w != "PD") lx.fail("expected PD[");
  lx.expect('[');
  int nloops = 0;
  bool first = true;
  while (!lx.peek(']')) {
    if (!first) lx.expect(',');
    first = false;
    std::string tag = lx.word();
    lx.expect('[');
    if (tag == "X") {
      Crossing c;
      for (int s = 0; s < 4; ++s) {
        if (s) lx.expect(',');
        c.e[s] = lx.integer();
      }
      lx.expect(']');
      t.x.push_back(c);
    } else if (tag == "O") {
      nloops += lx.integer();
      lx.expect(']');
    } else if (tag == "B") {
      int base = 0;
      bool f2 = true;
      while (!lx.peek(']')) {
        if (!f2) lx.expect(',');
        f2 = false;
        if (lx.accept('*')) base = (int)t.boundary.size();
        t.boundary.push_back(lx.integer());
      }
      lx.expect(']');
      std::rotate(t.boundary.begin(), t.boundary.begin() + base,
                  t.boundary.end());
    } else {
      lx.fail("unknown token '" + tag + "'");
    }
  }
  lx.expect(']');
  lx.ws();
  if (lx.i != text.size()) lx.fail("trailing characters");
  if (nloops < 0) throw DiagramError("negative loop count");
  derive_signs(t);
  int m = t.max_label();
  for (int i = 0; i < nloops; ++i) t.loops.push_back(m + 1 + i);
  validate(t);
  return t;
}

std::string to_pd(const TangleDiagram& t) {
  std::ostringstream os;
  os << "PD[";
  bool first = true;
  auto sep = [&] {
    if (!first) os << ",";
    first = false;
  };
  for (auto& c : t.x) {
    sep();
    os << "X[" << c.e[0] << "," << c.e[1] << "," << c.e[2] << "," << c.e[3]
       << "]";
  }
  if (!t.loops.empty()) {
    sep();
    os << "O[" << t.loops.size() << "]";
  }
  if (!t.boundary.empty()) {
    sep();
    os << "B[";
    for (size_t i = 0; i < t.boundary.size(); ++i)
      os << (i ? "," : "") << t.boundary[i];
    os << "]";
  }
  os << "]";
  return os.str();
}

// -------------------------------------------------------------- resolving

Smoothing resolve(const TangleDiagram& t, const std::vector<int>& bits) {
  if ((int)bits.size() != t.size())
    throw DiagramError("vertex length " + std::to_string(bits.size()) +
                       " does not match " + std::to_string(t.size()) +
                       " crossings");
  auto labs = t.labels();
  std::map<int, int> idx;
  for (int i = 0; i < (int)labs.size(); ++i) idx[labs[i]] = i;
  UF uf((int)labs.size());
  for (int c = 0; c < t.size(); ++c) {
    auto& e = t.x[c].e;
    if (bits[c] == 0) {
      uf.unite(idx[e[0]], idx[e[1]]);
      uf.unite(idx[e[2]], idx[e[3]]);
    } else {
      uf.unite(idx[e[0]], idx[e[3]]);
      uf.unite(idx[e[1]], idx[e[2]]);
    }
  }
  int k = (int)t.boundary.size();
  Smoothing s;
  s.match.assign(k, -1);
  s.atag.assign(k, INT_MAX);
  std::map<int, int> minlab;  // root -> smallest label
  for (int i = 0; i < (int)labs.size(); ++i) {
    int r = uf.find(i);
    auto it = minlab.find(r);
    if (it == minlab.end() || labs[i] < it->second) minlab[r] = labs[i];
  }
  std::map<int, int> first_pt;
  std::set<int> touches;
  for (int p = 0; p < k; ++p) {
    int r = uf.find(idx[t.boundary[p]]);
    touches.insert(r);
    auto it = first_pt.find(r);
    if (it == first_pt.end()) {
      first_pt[r] = p;
    } else {
      s.match[p] = it->second;
      s.match[it->second] = p;
    }
    s.atag[p] = minlab[r];
  }
  for (auto& [r, m] : minlab)
    if (!touches.count(r)) s.ctag.push_back(m);
  std::sort(s.ctag.begin(), s.ctag.end());
  s.ncirc = (int)s.ctag.size();
  return s;
}

Smoothing resolve_mask(const TangleDiagram& t, uint64_t mask) {
  std::vector<int> bits(t.size());
  for (int i = 0; i < t.size(); ++i) bits[i] = (mask >> i) & 1;
  return resolve(t, bits);
}

// --------------------------------------------------- planar arc diagrams

PlanarArcDiagram PlanarArcDiagram::radial(int n) {
  PlanarArcDiagram d;
  d.holes = {n};
  d.nout = n;
  for (int i = 0; i < n; ++i) d.arcs.push_back({{0, i}, {-1, i}});
  return d;
}

std::map<Port, std::pair<Port, int>> PlanarArcDiagram::partner() const {
  std::map<Port, std::pair<Port, int>> m;
  for (int a = 0; a < (int)arcs.size(); ++a) {
    auto [p, q] = arcs[a];
    if (m.count(p) || m.count(q) || p == q)
      throw DiagramError("arc diagram port used twice");
    m[p] = {q, a};
    m[q] = {p, a};
  }
  return m;
}

void PlanarArcDiagram::check() const {
  auto m = partner();
  size_t need = nout;
  for (int h : holes) need += h;
  for (auto& [p, q] : m) {
    if (p.hole < -1 || p.hole >= (int)holes.size())
      throw DiagramError("arc diagram references a missing hole");
    int lim = p.hole < 0 ? nout : holes[p.hole];
    if (p.pt < 0 || p.pt >= lim)
      throw DiagramError("arc diagram references a missing point");
  }
  if (m.size() != need)
    throw DiagramError("arc diagram does not exhaust all boundary points");
}

TangleDiagram compose_tangles(const PlanarArcDiagram& d,
                              const std::vector<TangleDiagram>& in) {
  if (in.size() != d.holes.size())
    throw DiagramError("arity mismatch: diagram has " +
                       std::to_string(d.holes.size()) + " holes");
  for (size_t i = 0; i < in.size(); ++i)
    if ((int)in[i].boundary.size() != d.holes[i])
      throw DiagramError("boundary mismatch at hole " + std::to_string(i));
  d.check();
  // Relabel when inputs share labels.
  std::vector<int> offset(in.size(), 0);
  {
    std::set<int> seen;
    bool clash = false;
    for (auto& t : in)
      for (int l : t.labels()) clash |= !seen.insert(l).second;
    if (clash) {
      int off = 0;
      for (size_t i = 0; i < in.size(); ++i) {
        offset[i] = off;
        off += in[i].max_label() + 1;
      }
    }
  }
  // Pieces: input edges (global ids), D through-arcs between two outputs.
  std::map<int, int> pid;  // relabelled input label -> piece
  std::vector<int> plab;   // piece label
  for (size_t i = 0; i < in.size(); ++i)
    for (int l : in[i].labels()) {
      pid[l + offset[i]] = (int)plab.size();
      plab.push_back(l + offset[i]);
    }
  int top = plab.empty() ? 0 : *std::max_element(plab.begin(), plab.end());
  std::vector<int> out_piece(d.nout, -1);
  std::vector<std::pair<int, int>> joins;
  for (int ai = 0; ai < (int)d.arcs.size(); ++ai) {
    auto [p, q] = d.arcs[ai];
    auto piece_at = [&](const Port& x) -> int {
      return pid[in[x.hole].boundary[x.pt] + offset[x.hole]];
    };
    if (p.hole < 0 && q.hole < 0) {
      int np = (int)plab.size();
      int tag = ai < (int)d.arc_tag.size() ? d.arc_tag[ai] : INT_MAX;
      if (tag == INT_MAX || pid.count(tag) ||
          std::find(plab.begin(), plab.end(), tag) != plab.end())
        tag = ++top;
      top = std::max(top, tag);
      plab.push_back(tag);
      out_piece[p.pt] = np;
      out_piece[q.pt] = np;
      continue;
    }
    if (p.hole < 0) out_piece[p.pt] = piece_at(q);
    else if (q.hole < 0) out_piece[q.pt] = piece_at(p);
    else {
      int dp = in[p.hole].bdir[p.pt], dq = in[q.hole].bdir[q.pt];
      if (dp == dq)
        throw DiagramError("orientation clash between holes " +
                           std::to_string(p.hole) + " and " +
                           std::to_string(q.hole));
      joins.push_back({piece_at(p), piece_at(q)});
    }
  }
  UF uf((int)plab.size());
  for (auto [a, b] : joins) uf.unite(a, b);
  std::map<int, int> cls;  // root -> min label
  for (int i = 0; i < (int)plab.size(); ++i) {
    int r = uf.find(i);
    auto it = cls.find(r);
    if (it == cls.end() || plab[i] < it->second) cls[r] = plab[i];
  }
  auto newlab = [&](int l) { return cls[uf.find(pid[l])]; };
  TangleDiagram t;
  std::set<int> used;
  for (size_t i = 0; i < in.size(); ++i)
    for (auto c : in[i].x) {
      for (int& e : c.e) e = newlab(e + offset[i]), used.insert(e);
      t.x.push_back(c);
    }
  t.boundary.resize(d.nout);
  t.bdir.resize(d.nout);
  for (int q = 0; q < d.nout; ++q) {
    int pc = out_piece[q];
    t.boundary[q] = cls[uf.find(pc)];
    used.insert(t.boundary[q]);
  }
  // boundary directions
  auto part = d.partner();
  for (int q = 0; q < d.nout; ++q) {
    Port o = part[{-1, q}].first;
    if (o.hole >= 0) {
      t.bdir[q] = in[o.hole].bdir[o.pt];
    } else {
      t.bdir[q] = q < o.pt ? +1 : -1;
    }
  }
  // loops: classes touching nothing
  std::set<int> loopset;
  for (auto& [r, m] : cls)
    if (!used.count(m)) loopset.insert(m);
  t.loops.assign(loopset.begin(), loopset.end());
  int ml = t.max_label();
  std::set<int> taken(used);
  taken.insert(t.loops.begin(), t.loops.end());
  for (int i = 0; i < d.loops; ++i) {
    int tag = i < (int)d.loop_tag.size() ? d.loop_tag[i] : INT_MAX;
    if (tag == INT_MAX || taken.count(tag)) tag = ++ml;
    taken.insert(tag);
    t.loops.push_back(tag);
  }
  std::sort(t.loops.begin(), t.loops.end());
  validate(t);
  return t;
}

CrossingDecomposition crossing_decomposition(const TangleDiagram& t) {
  CrossingDecomposition cd;
  auto ends = edge_ends(t);
  int fresh = t.max_label();
  int n = t.size();
  cd.parts.resize(n);
  for (int c = 0; c < n; ++c) {
    cd.parts[c].x = {t.x[c]};
    cd.parts[c].boundary.assign(t.x[c].e.begin(), t.x[c].e.end());
    cd.parts[c].bdir.resize(4);
    for (int s = 0; s < 4; ++s)
      cd.parts[c].bdir[s] = slot_is_head(t.x[c], s) ? -1 : +1;
    cd.d.holes.push_back(4);
  }
  cd.d.nout = (int)t.boundary.size();
  auto port_of = [&](const End& e) {
    return e.c >= 0 ? Port{e.c, e.s} : Port{-1, e.s};
  };
  for (auto& [lab, ee] : ends) {
    if (ee.head.c >= 0) {
      int f = ++fresh;
      auto& part = cd.parts[ee.head.c];
      part.x[0].e[ee.head.s] = f;
      part.boundary[ee.head.s] = f;
    }
    cd.d.arcs.push_back({port_of(ee.tail), port_of(ee.head)});
    cd.d.arc_tag.push_back(lab);
  }
  cd.d.loops = (int)t.loops.size();
  cd.d.loop_tag = t.loops;
  return cd;
}

// -------------------------------------------------------------- splitting

Split split_diagram(const TangleDiagram& t, const std::vector<int>& xs,
                    const std::vector<int>& through) {
  Split sp;
  std::set<int> S(xs.begin(), xs.end());
  std::set<int> loopset(t.loops.begin(), t.loops.end());
  std::vector<int> thr_edges;
  std::set<int> thr_loops;
  for (int e : through) {
    if (loopset.count(e)) thr_loops.insert(e);
    else thr_edges.push_back(e);
  }
  auto ends = edge_ends(t);
  int fresh = t.max_label();
  TangleDiagram& L = sp.local;
  TangleDiagram& R = sp.rest;
  std::map<int, int> lmap, rmap;  // crossing index maps
  for (int c = 0; c < t.size(); ++c) {
    if (S.count(c)) {
      lmap[c] = L.size();
      L.x.push_back(t.x[c]);
      sp.local_x.push_back(c);
    } else {
      rmap[c] = R.size();
      R.x.push_back(t.x[c]);
      sp.rest_x.push_back(c);
    }
  }
  auto side = [&](const End& e) -> char {
    if (e.c < 0) return 'O';
    return S.count(e.c) ? 'L' : 'R';
  };
  auto set_label = [&](TangleDiagram& D, std::map<int, int>& mp, const End& e,
                       int lab) { D.x[mp[e.c]].e[e.s] = lab; };
  std::vector<std::pair<Port, Port>> arcs;
  auto addL = [&](int lab, int dir) {
    L.boundary.push_back(lab);
    L.bdir.push_back(dir);
    return Port{0, (int)L.boundary.size() - 1};
  };
  auto addR = [&](int lab, int dir) {
    R.boundary.push_back(lab);
    R.bdir.push_back(dir);
    return Port{1, (int)R.boundary.size() - 1};
  };
  std::set<int> thr(thr_edges.begin(), thr_edges.end());
  // Output ports of T: route via whatever owns the edge end.
  std::map<int, Port> out_target;  // T boundary position -> port
  for (auto& [lab, ee] : ends) {
    if (thr.count(lab)) continue;
    char a = side(ee.tail), b = side(ee.head);
    if (a != 'L' && b != 'L') {
      // rest edge; T boundary ends become rest boundary points
      for (const End* e : {&ee.tail, &ee.head}) {
        if (e->c >= 0) {
          set_label(R, rmap, *e, lab);
        } else {
          Port p = addR(lab, t.bdir[e->s]);
          out_target[e->s] = p;
        }
      }
      continue;
    }
    if (a == 'L' && b == 'L') continue;  // internal; labels already right
    // one end in L
    const End& le = a == 'L' ? ee.tail : ee.head;
    const End& oe = a == 'L' ? ee.head : ee.tail;
    bool leaves_local = (a == 'L');  // strand runs from local to the other end
    (void)le;
    Port pl = addL(lab, leaves_local ? -1 : +1);
    if (oe.c >= 0) {
      int f = ++fresh;
      set_label(R, rmap, oe, f);
      Port pr = addR(f, leaves_local ? +1 : -1);
      arcs.push_back({pl, pr});
    } else {
      out_target[oe.s] = pl;
    }
  }
  for (int lab : thr_edges) {
    auto it = ends.find(lab);
    if (it == ends.end())
      throw DiagramError("no edge " + std::to_string(lab) + " at site");
    auto& ee = it->second;
    if (side(ee.tail) == 'L' || side(ee.head) == 'L')
      throw DiagramError("through edge touches a local crossing");
    Port p1 = addL(lab, +1);
    Port p2 = addL(lab, -1);
    for (auto [e, pl, dir] : {std::tuple{ee.tail, p1, -1},
                              std::tuple{ee.head, p2, +1}}) {
      if (e.c >= 0) {
        int f = ++fresh;
        set_label(R, rmap, e, f);
        Port pr = addR(f, dir);
        arcs.push_back({pl, pr});
      } else {
        out_target[e.s] = pl;
      }
    }
  }
  for (int l : t.loops) (thr_loops.count(l) ? L : R).loops.push_back(l);
  for (auto& [q, p] : out_target) arcs.push_back({p, Port{-1, q}});
  sp.d.holes = {(int)L.boundary.size(), (int)R.boundary.size()};
  sp.d.nout = (int)t.boundary.size();
  sp.d.arcs = arcs;
  sp.next_label = fresh + 1;
  return sp;
}

// ----------------------------------------------------------------- moves

std::string move_name(Move m) {
  switch (m) {
    case Move::R1a: return "R1a";
    case Move::R1b: return "R1b";
    case Move::R1inv: return "R1-";
    case Move::R2: return "R2+";
    case Move::R2inv: return "R2-";
    case Move::R3: return "R3";
    case Move::Saddle: return "Saddle";
    case Move::Cap: return "Cap";
    case Move::Cup: return "Cup";
  }
  return "?";
}

std::optional<Move> move_from_name(const std::string& s) {
  static const std::map<std::string, Move> m = {
      {"R1a", Move::R1a},    {"R1+", Move::R1a},     {"R1b", Move::R1b},
      {"R1-", Move::R1inv},  {"R1inv", Move::R1inv}, {"R2", Move::R2},
      {"R2+", Move::R2},     {"R2-", Move::R2inv},   {"R2inv", Move::R2inv},
      {"R3", Move::R3},      {"Saddle", Move::Saddle}, {"Cap", Move::Cap},
      {"Cup", Move::Cup}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

namespace {

Crossing make_crossing(int uin, int uout, int oin, int oout, bool pos) {
  Crossing c;
  c.positive = pos;
  c.e = pos ? std::array<int, 4>{uin, oout, uout, oin}
            : std::array<int, 4>{uin, oin, uout, oout};
  return c;
}

// Replace a local tangle by one with the same strands and no crossings.
TangleDiagram straighten(const TangleDiagram& L) {
  TangleDiagram out;
  out.boundary = L.boundary;
  out.bdir = L.bdir;
  out.loops = L.loops;
  auto ends = collect_ends(L);
  std::map<int, int> lab2idx;
  auto labs = L.labels();
  for (int i = 0; i < (int)labs.size(); ++i) lab2idx[labs[i]] = i;
  UF uf((int)labs.size());
  for (auto& c : L.x) {
    uf.unite(lab2idx[c.e[0]], lab2idx[c.e[2]]);
    uf.unite(lab2idx[c.e[1]], lab2idx[c.e[3]]);
  }
  std::map<int, int> minl;
  for (int i = 0; i < (int)labs.size(); ++i) {
    int r = uf.find(i);
    if (!minl.count(r) || labs[i] < minl[r]) minl[r] = labs[i];
  }
  std::set<int> touching;
  for (int p = 0; p < (int)L.boundary.size(); ++p) {
    int r = uf.find(lab2idx[L.boundary[p]]);
    out.boundary[p] = minl[r];
    touching.insert(r);
  }
  std::set<int> isl(L.loops.begin(), L.loops.end());
  for (auto& [r, m] : minl)
    if (!touching.count(r) && !isl.count(m)) out.loops.push_back(m);
  std::sort(out.loops.begin(), out.loops.end());
  return out;
}

bool has_face(const TangleDiagram& t, std::multiset<int> labs) {
  for (auto& f : faces(t)) {
    if (f.size() != labs.size()) continue;
    std::multiset<int> s;
    for (auto& d : f) s.insert(d.label);
    if (s == labs) return true;
  }
  return false;
}

MoveResult finish(const Split& sp, TangleDiagram la) {
  MoveResult r;
  r.before_split = sp;
  r.local_after = la;
  r.after = compose_tangles(sp.d, {la, sp.rest});
  return r;
}

// Strand structure of a crossing triangle for R3.
struct R3Data {
  int tri[3];       // internal edge per strand role: 0 top, 1 middle, 2 bottom
  int sin[3], sout[3];
  int first[3], second[3];  // local crossing index visited first / second
};

}  // namespace

MoveResult apply_move(const TangleDiagram& t, Move m, const Site& s) {
  auto need = [&](size_t n) {
    if (s.v.size() < n)
      throw DiagramError(move_name(m) + ": site needs " + std::to_string(n) +
                         " entries");
  };
  std::set<int> loopset(t.loops.begin(), t.loops.end());
  switch (m) {
    case Move::R1a:
    case Move::R1b: {
      need(1);
      int e = s.v[0];
      int side = s.v.size() > 1 ? s.v[1] & 1 : 0;
      bool pos = m == Move::R1a;
      Split sp = split_diagram(t, {}, {e});
      int f = sp.next_label;
      int lp = f, e2 = f + 1;
      TangleDiagram la;
      bool isloop = loopset.count(e) > 0;
      int e1 = e;
      if (isloop) e2 = e;
      if (!isloop) {
        la.boundary = {e1, e2};
        la.bdir = {+1, -1};
      }
      Crossing c;
      c.positive = pos;
      if (pos) c.e = side == 0 ? std::array<int, 4>{e1, e2, lp, lp}
                               : std::array<int, 4>{lp, lp, e2, e1};
      else c.e = side == 0 ? std::array<int, 4>{e1, lp, lp, e2}
                           : std::array<int, 4>{lp, e1, e2, lp};
      la.x = {c};
      return finish(sp, la);
    }
    case Move::R1inv: {
      need(1);
      int k = s.v[0];
      if (k < 0 || k >= t.size()) throw DiagramError("R1-: no such crossing");
      auto& e = t.x[k].e;
      bool kink = false;
      for (int i = 0; i < 4; ++i) kink |= e[i] == e[(i + 1) % 4];
      if (!kink) throw DiagramError("R1-: crossing is not a kink");
      Split sp = split_diagram(t, {k}, {});
      return finish(sp, straighten(sp.local));
    }
    case Move::R2: {
      need(2);
      int e = s.v[0], f = s.v[1];
      int variant = s.v.size() > 2 ? s.v[2] : 0;
      if (e == f) throw DiagramError("R2: needs two different strands");
      bool eloop = loopset.count(e) > 0, floop = loopset.count(f) > 0;
      Split sp = split_diagram(t, {}, {e, f});
      int nl = sp.next_label;
      int em = nl++, fm = nl++;
      int e1 = e, e2 = eloop ? e : nl++;
      int f1 = f, f2 = floop ? f : nl++;
      std::vector<MoveResult> ok;
      for (int order = 0; order < 2; ++order)
        for (int s1 = 0; s1 < 2; ++s1) {
          TangleDiagram la = sp.local;
          la.x.clear();
          // rebuild boundary labels for the pieces
          std::vector<int> bl;
          if (!eloop) bl.insert(bl.end(), {e1, e2});
          if (!floop) bl.insert(bl.end(), {f1, f2});
          la.boundary = bl;
          la.loops.clear();
          bool pos1 = s1 == 0;
          // under strand f: C1 f1->fm, C2 fm->f2
          Crossing c1, c2;
          if (order == 0) {
            c1 = make_crossing(f1, fm, e1, em, pos1);
            c2 = make_crossing(fm, f2, em, e2, !pos1);
          } else {
            c1 = make_crossing(f1, fm, em, e2, pos1);
            c2 = make_crossing(fm, f2, e1, em, !pos1);
          }
          la.x = {c1, c2};
          try {
            MoveResult r = finish(sp, la);
            if (has_face(r.after, {em, fm})) ok.push_back(r);
          } catch (const DiagramError&) {
          }
        }
      if (ok.empty()) throw DiagramError("R2: strands do not share a face");
      return ok[((variant % (int)ok.size()) + ok.size()) % ok.size()];
    }
    case Move::R2inv: {
      need(2);
      int a = s.v[0], b = s.v[1];
      if (a == b || a < 0 || b < 0 || a >= t.size() || b >= t.size())
        throw DiagramError("R2-: bad crossings");
      auto& A = t.x[a];
      auto& B = t.x[b];
      if (A.positive == B.positive)
        throw DiagramError("R2-: crossings have equal signs");
      // shared under edge and shared over edge
      bool under = false, over = false;
      for (int i : {0, 2})
        for (int j : {0, 2}) under |= A.e[i] == B.e[j];
      for (int i : {1, 3})
        for (int j : {1, 3}) over |= A.e[i] == B.e[j];
      if (!under || !over) throw DiagramError("R2-: not a bigon");
      std::multiset<int> bg;
      for (int i : {0, 2})
        for (int j : {0, 2})
          if (A.e[i] == B.e[j]) bg.insert(A.e[i]);
      for (int i : {1, 3})
        for (int j : {1, 3})
          if (A.e[i] == B.e[j]) bg.insert(A.e[i]);
      if (!has_face(t, bg)) throw DiagramError("R2-: bigon is not a face");
      Split sp = split_diagram(t, {a, b}, {});
      return finish(sp, straighten(sp.local));
    }
    case Move::R3: {
      need(3);
      std::vector<int> cs = {s.v[0], s.v[1], s.v[2]};
      std::set<int> cset(cs.begin(), cs.end());
      if (cset.size() != 3) throw DiagramError("R3: needs three crossings");
      for (int c : cs)
        if (c < 0 || c >= t.size()) throw DiagramError("R3: bad crossing");
      Split sp = split_diagram(t, cs, {});
      TangleDiagram& L = sp.local;
      std::vector<int> internal;
      for (auto& f : faces(t)) {
        if (f.size() != 3) continue;
        std::set<int> fc;
        for (auto& d : f) fc.insert(d.at.c);
        if (fc != cset) continue;
        internal.clear();
        for (auto& d : f) internal.push_back(d.label);
        break;
      }
      if (internal.size() != 3) throw DiagramError("R3: not a triangle face");
      auto le = edge_ends(L);
      R3Data D{};
      int seen_role[3] = {0, 0, 0};
      for (int l : internal) {
        End tl = le[l].tail, hd = le[l].head;
        bool over_t = tl.s % 2 == 1, over_h = hd.s % 2 == 1;
        int role = over_t && over_h ? 0 : (!over_t && !over_h ? 2 : 1);
        if (seen_role[role]++) throw DiagramError("R3: triangle is alternating");
        D.tri[role] = l;
        D.first[role] = tl.c;
        D.second[role] = hd.c;
        D.sin[role] = L.x[tl.c].e[(tl.s + 2) % 4];
        D.sout[role] = L.x[hd.c].e[(hd.s + 2) % 4];
      }
      TangleDiagram la = L;
      for (int c = 0; c < 3; ++c) {
        // strands through c
        int ro[2], k = 0;
        for (int r = 0; r < 3; ++r)
          if (D.first[r] == c || D.second[r] == c) ro[k++] = r;
        if (k != 2) throw DiagramError("R3: malformed triangle");
        // over strand has the smaller role index (top < middle < bottom)
        int ov = std::min(ro[0], ro[1]), un = std::max(ro[0], ro[1]);
        auto io = [&](int r) -> std::pair<int, int> {
          // after the move the visiting order along the strand swaps
          if (D.first[r] == c) return {D.tri[r], D.sout[r]};
          return {D.sin[r], D.tri[r]};
        };
        auto [uin, uout] = io(un);
        auto [oin, oout] = io(ov);
        la.x[c] = make_crossing(uin, uout, oin, oout, L.x[c].positive);
      }
      MoveResult r = finish(sp, la);
      return r;
    }
    case Move::Saddle: {
      need(2);
      int e = s.v[0], f = s.v[1];
      if (e == f) throw DiagramError("Saddle: needs two different strands");
      if (loopset.count(e)) std::swap(e, f);
      if (f == -1) {
        Split sp = split_diagram(t, {}, {e});
        TangleDiagram la = sp.local;
        la.loops.push_back(sp.next_label);
        return finish(sp, la);
      }
      if (loopset.count(f)) {
        Split sp = split_diagram(t, {}, {e, f});
        TangleDiagram la = sp.local;
        la.loops.clear();
        return finish(sp, la);
      }
      Split sp = split_diagram(t, {}, {e, f});
      TangleDiagram la;
      // points: 0 e-tail side, 1 e-head side, 2 f-tail side, 3 f-head side
      la.boundary = {e, f, f, e};
      la.bdir = {+1, -1, +1, -1};
      try {
        return finish(sp, la);
      } catch (const DiagramError&) {
        throw DiagramError("Saddle: strands are not antiparallel on a face");
      }
    }
    case Move::Cap: {
      Split sp = split_diagram(t, {}, {});
      TangleDiagram la;
      la.loops = {sp.next_label};
      return finish(sp, la);
    }
    case Move::Cup: {
      need(1);
      if (!loopset.count(s.v[0])) throw DiagramError("Cup: no such loop");
      Split sp = split_diagram(t, {}, {s.v[0]});
      return finish(sp, TangleDiagram{});
    }
  }
  throw DiagramError("unknown move");
}

TangleDiagram apply_reidemeister(const TangleDiagram& t, Move m,
                                 const Site& s) {
  return apply_move(t, m, s).after;
}

std::vector<Site> move_sites(const TangleDiagram& t, Move m) {
  std::vector<Site> out;
  auto try_site = [&](Site s) {
    try {
      apply_move(t, m, s);
      out.push_back(s);
    } catch (const DiagramError&) {
    }
  };
  auto labs = t.labels();
  switch (m) {
    case Move::R1a:
    case Move::R1b:
      for (int l : labs)
        for (int side : {0, 1}) out.push_back({{l, side}});
      break;
    case Move::R1inv:
      for (int c = 0; c < t.size(); ++c) try_site({{c}});
      break;
    case Move::R2: {
      std::set<std::pair<int, int>> pairs;
      for (auto& f : faces(t))
        for (auto& a : f)
          for (auto& b : f)
            if (a.label != b.label) pairs.insert({a.label, b.label});
      for (int l : t.loops)
        for (int e : labs)
          if (e != l) pairs.insert({l, e}), pairs.insert({e, l});
      for (auto [a, b] : pairs) try_site({{a, b, 0}});
      break;
    }
    case Move::R2inv:
      for (int a = 0; a < t.size(); ++a)
        for (int b = a + 1; b < t.size(); ++b) try_site({{a, b}});
      break;
    case Move::R3:
      for (auto& f : faces(t)) {
        if (f.size() != 3) continue;
        std::vector<int> cs;
        for (auto& d : f) cs.push_back(d.at.c);
        if (std::set<int>(cs.begin(), cs.end()).size() != 3 || *std::min_element(cs.begin(), cs.end()) < 0)
          continue;
        std::sort(cs.begin(), cs.end());
        try_site({cs});
      }
      break;
    case Move::Saddle: {
      std::set<std::pair<int, int>> pairs;
      for (auto& f : faces(t))
        for (auto& a : f)
          for (auto& b : f)
            if (a.label < b.label) pairs.insert({a.label, b.label});
      for (auto [a, b] : pairs) try_site({{a, b}});
      break;
    }
    case Move::Cap:
      out.push_back({});
      break;
    case Move::Cup:
      for (int l : t.loops) out.push_back({{l}});
      break;
  }
  return out;
}

// ----------------------------------------------------------- isomorphism

std::optional<Iso> isomorphism(const TangleDiagram& a,
                               const TangleDiagram& b) {
  if (a.size() != b.size() || a.boundary.size() != b.boundary.size() ||
      a.loops.size() != b.loops.size() || a.n_plus() != b.n_plus() ||
      a.bdir != b.bdir)
    return std::nullopt;
  auto ea = collect_ends(a), eb = collect_ends(b);
  Iso iso;
  iso.xperm.assign(a.size(), -1);
  std::vector<int> used(b.size(), 0);
  // map edge la->lb then propagate
  std::function<bool(std::vector<std::pair<int, int>>)> go;
  auto consistent_pair = [&](int la, int lb, std::vector<int>& xtouched,
                             std::vector<int>& ltouched) -> bool {
    std::vector<std::pair<int, int>> stack = {{la, lb}};
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      auto it = iso.label.find(x);
      if (it != iso.label.end()) {
        if (it->second != y) return false;
        continue;
      }
      iso.label[x] = y;
      ltouched.push_back(x);
      auto& va = ea[x].ends;
      auto& vb = eb[y].ends;
      if (va.size() != 2 || vb.size() != 2) return false;
      // match ends by role (head/tail)
      End a0 = va[0], a1 = va[1], b0 = vb[0], b1 = vb[1];
      if (end_is_head(a, a0) != end_is_head(b, b0)) std::swap(b0, b1);
      for (auto [p, q] : {std::pair{a0, b0}, std::pair{a1, b1}}) {
        if ((p.c < 0) != (q.c < 0)) return false;
        if (p.c < 0) {
          if (p.s != q.s) return false;
          continue;
        }
        if (p.s != q.s) return false;
        if (a.x[p.c].positive != b.x[q.c].positive) return false;
        if (iso.xperm[p.c] >= 0) {
          if (iso.xperm[p.c] != q.c) return false;
          continue;
        }
        if (used[q.c]) return false;
        iso.xperm[p.c] = q.c;
        used[q.c] = 1;
        xtouched.push_back(p.c);
        for (int s = 0; s < 4; ++s)
          stack.push_back({a.x[p.c].e[s], b.x[q.c].e[s]});
      }
    }
    return true;
  };
  auto undo = [&](std::vector<int>& xt, std::vector<int>& lt) {
    for (int c : xt) used[iso.xperm[c]] = 0, iso.xperm[c] = -1;
    for (int l : lt) iso.label.erase(l);
  };
  {
    std::vector<int> xt, lt;
    for (size_t p = 0; p < a.boundary.size(); ++p)
      if (!consistent_pair(a.boundary[p], b.boundary[p], xt, lt))
        return std::nullopt;
  }
  std::function<bool()> rec = [&]() -> bool {
    int c = -1;
    for (int i = 0; i < a.size() && c < 0; ++i)
      if (iso.xperm[i] < 0) c = i;
    if (c < 0) return true;
    for (int d = 0; d < b.size(); ++d) {
      if (used[d] || b.x[d].positive != a.x[c].positive) continue;
      std::vector<int> xt, lt;
      if (consistent_pair(a.x[c].e[0], b.x[d].e[0], xt, lt) &&
          iso.xperm[c] == d && rec())
        return true;
      undo(xt, lt);
    }
    return false;
  };
  if (!rec()) return std::nullopt;
  for (size_t i = 0; i < a.loops.size(); ++i)
    iso.label[a.loops[i]] = b.loops[i];
  return iso;
}

bool isomorphic(const TangleDiagram& a, const TangleDiagram& b) {
  return isomorphism(a, b).has_value();
}

int component_count(const TangleDiagram& t) {
  auto labs = t.labels();
  std::map<int, int> idx;
  for (int i = 0; i < (int)labs.size(); ++i) idx[labs[i]] = i;
  UF uf((int)labs.size());
  for (auto& c : t.x) {
    uf.unite(idx[c.e[0]], idx[c.e[2]]);
    uf.unite(idx[c.e[1]], idx[c.e[3]]);
  }
  int n = 0;
  for (int i = 0; i < (int)labs.size(); ++i) n += uf.find(i) == i;
  return n;
}

TangleDiagram mirror(const TangleDiagram& t) {
  TangleDiagram m = t;
  for (auto& c : m.x) {
    auto e = c.e;
    if (c.positive) c.e = {e[3], e[0], e[1], e[2]};
    else c.e = {e[1], e[2], e[3], e[0]};
    c.positive = !c.positive;
  }
  return m;
}

TangleDiagram braid_closure(int n, const std::vector<int>& word) {
  TangleDiagram t;
  std::vector<int> cur(n), start(n);
  int next = 1;
  for (int i = 0; i < n; ++i) start[i] = cur[i] = next++;
  for (int g : word) {
    int i = std::abs(g) - 1;
    if (g == 0 || i + 1 >= n) throw DiagramError("bad braid generator");
    int a = cur[i], b = cur[i + 1], c = next++, d = next++;
    Crossing x;
    x.positive = g > 0;
    x.e = g > 0 ? std::array<int, 4>{b, d, c, a}
                : std::array<int, 4>{a, b, d, c};
    t.x.push_back(x);
    cur[i] = c;
    cur[i + 1] = d;
  }
  // close up: the last label on each position is identified with the first
  std::map<int, int> ren;
  for (int i = 0; i < n; ++i)
    if (cur[i] != start[i]) ren[cur[i]] = start[i];
  for (auto& x : t.x)
    for (int& e : x.e)
      if (ren.count(e)) e = ren[e];
  for (int i = 0; i < n; ++i)
    if (cur[i] == start[i]) t.loops.push_back(start[i]);
  validate(t);
  return t;
}

// ---------------------------------------------------------- matchings

int arc_cycles(const std::vector<int>& a, const std::vector<int>& b,
               std::vector<int>* cyc) {
  int n = (int)a.size();
  std::vector<int> c(n, -1);
  int k = 0;
  for (int p = 0; p < n; ++p) {
    if (c[p] >= 0) continue;
    int q = p;
    do {
      c[q] = k;
      c[a[q]] = k;
      q = b[a[q]];
    } while (q != p);
    ++k;
  }
  if (cyc) *cyc = std::move(c);
  return k;
}

bool noncrossing(const std::vector<int>& m) {
  int n = (int)m.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = i, b = m[i], c = j, d = m[j];
      if (a > b || c > d) continue;
      if (a < c && c < b && b < d) return false;
    }
  return true;
}

}  // namespace kh
