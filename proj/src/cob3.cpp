#include "kh/cob3.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace kh {

namespace {

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

// Curve id -> component index for one generator.
std::vector<int> owner(const Surface& s, int ncurves) {
  std::vector<int> o(ncurves, -1);
  for (int i = 0; i < (int)s.size(); ++i)
    for (int c : s[i].curves) o[c] = i;
  return o;
}

struct Piece {
  std::vector<int> curves;
  int chi = 0;
  int dots = 0;
};

// Merge pieces along the classes of `uf`; `glue[i]` counts interval
// gluings charged to node i.
Surface assemble(int nnodes, UF& uf, const std::vector<Piece>& nodes,
                 const std::vector<int>& glue, int ncurves) {
  std::map<int, Piece> cls;
  for (int i = 0; i < nnodes; ++i) {
    Piece& p = cls[uf.find(i)];
    p.chi += nodes[i].chi - glue[i];
    p.dots += nodes[i].dots;
    p.curves.insert(p.curves.end(), nodes[i].curves.begin(),
                    nodes[i].curves.end());
  }
  Surface s;
  for (auto& [r, p] : cls) {
    int n = (int)p.curves.size();
    int twice_g = 2 - p.chi - n;
    if (twice_g < 0 || twice_g % 2)
      throw CobError("gluing produced an inconsistent Euler characteristic");
    Component c;
    c.curves = p.curves;
    c.genus = twice_g / 2;
    c.dots = p.dots;
    s.push_back(std::move(c));
  }
  return canonical(std::move(s), ncurves);
}

}  // namespace

int curve_count(const Smoothing& top, const Smoothing& bottom) {
  if (top.npts() != bottom.npts())
    throw CobError("top and bottom have different boundary points");
  return top.ncirc + bottom.ncirc +
         arc_cycles(top.match, bottom.match, nullptr);
}

Surface canonical(Surface s, int ncurves) {
  std::vector<int> seen(ncurves, 0);
  for (auto& c : s) {
    std::sort(c.curves.begin(), c.curves.end());
    for (int k : c.curves) {
      if (k < 0 || k >= ncurves || seen[k]++)
        throw CobError("curve " + std::to_string(k) + " not used exactly once");
    }
    if (c.genus < 0 || c.dots < 0) throw CobError("negative genus or dots");
  }
  for (int k = 0; k < ncurves; ++k)
    if (!seen[k]) throw CobError("curve " + std::to_string(k) + " unused");
  std::sort(s.begin(), s.end());
  return s;
}

// ---------------------------------------------------------- arithmetic

void Cobordism::add(const Surface& s, Coef c) {
  c = coef_norm(c, mod);
  if (c == 0) return;
  auto it = terms.find(s);
  if (it == terms.end()) {
    terms.emplace(s, c);
    return;
  }
  it->second = coef_norm(it->second + c, mod);
  if (it->second == 0) terms.erase(it);
}

static void check_same_ends(const Cobordism& a, const Cobordism& b) {
  if (!a.top.same_shape(b.top) || !a.bottom.same_shape(b.bottom))
    throw CobError("adding cobordisms with different ends");
}

Cobordism& Cobordism::operator+=(const Cobordism& o) {
  check_same_ends(*this, o);
  for (auto& [s, c] : o.terms) add(s, c);
  return *this;
}
Cobordism& Cobordism::operator-=(const Cobordism& o) {
  check_same_ends(*this, o);
  for (auto& [s, c] : o.terms) add(s, -c);
  return *this;
}
Cobordism Cobordism::operator+(const Cobordism& o) const {
  Cobordism r = *this;
  return r += o;
}
Cobordism Cobordism::operator-(const Cobordism& o) const {
  Cobordism r = *this;
  return r -= o;
}
Cobordism Cobordism::operator*(Coef k) const {
  Cobordism r(top, bottom, mod);
  for (auto& [s, c] : terms) r.add(s, c * k);
  return r;
}
bool Cobordism::operator==(const Cobordism& o) const {
  return top.same_shape(o.top) && bottom.same_shape(o.bottom) &&
         terms == o.terms;
}

// -------------------------------------------------------------- degree

int degree(const Surface& s, int npts) {
  int d = -npts / 2;
  for (auto& c : s) d += c.chi() - 2 * c.dots;
  return d;
}

int degree(const Surface& s, const Smoothing& top, const Smoothing& bottom) {
  return degree(s, top.npts()) + bottom.shift - top.shift;
}

int degree(const Cobordism& c) {
  int d = INT_MIN;
  for (auto& [s, k] : c.terms) {
    int e = degree(s, c.top, c.bottom);
    if (d != INT_MIN && d != e) throw CobError("inhomogeneous cobordism");
    d = e;
  }
  return d;
}

// ----------------------------------------------------------- reduction

Cobordism simplify(const Cobordism& in) {
  Cobordism out(in.top, in.bottom, in.mod);
  for (auto& [s, k] : in.terms) {
    Coef coef = k;
    Surface t;
    bool zero = false;
    for (Component c : s) {
      for (int g = 0; g < c.genus; ++g) coef *= 2;
      c.dots += c.genus;
      c.genus = 0;
      if (c.dots >= 2) {
        zero = true;
        break;
      }
      if (c.curves.empty()) {
        if (c.dots == 0) {
          zero = true;
          break;
        }
        continue;
      }
      t.push_back(std::move(c));
    }
    if (!zero) out.add(t, coef);
  }
  return out;
}

Cobordism reduce(const Cobordism& in) {
  Cobordism s = simplify(in);
  Cobordism out(in.top, in.bottom, in.mod);
  for (auto& [surf, k] : s.terms) {
    // each component expands to a list of alternatives (lists of disks)
    std::vector<Surface> acc = {{}};
    for (auto& c : surf) {
      std::vector<Surface> alts;
      int n = (int)c.curves.size();
      if (n == 1 || c.dots == 1) {
        Surface a;
        for (int x : c.curves) a.push_back({{x}, 0, n == 1 ? c.dots : 1});
        alts.push_back(a);
      } else {
        for (int u = 0; u < n; ++u) {
          Surface a;
          for (int i = 0; i < n; ++i) a.push_back({{c.curves[i]}, 0, i != u});
          alts.push_back(a);
        }
      }
      std::vector<Surface> next;
      for (auto& a : acc)
        for (auto& b : alts) {
          Surface m = a;
          m.insert(m.end(), b.begin(), b.end());
          next.push_back(std::move(m));
        }
      acc = std::move(next);
    }
    for (auto& a : acc) {
      std::sort(a.begin(), a.end());
      out.add(a, k);
    }
  }
  return out;
}

bool equal_reduced(const Cobordism& a, const Cobordism& b) {
  return reduce(a - b).is_zero();
}

// ----------------------------------------------------------- elementary

Cobordism zero_cob(const Smoothing& a, const Smoothing& b, int mod) {
  curve_count(a, b);
  return Cobordism(a, b, mod);
}

Cobordism identity(const Smoothing& s, int mod) {
  int n = s.ncirc;
  int cyc = arc_cycles(s.match, s.match, nullptr);
  Surface surf;
  for (int i = 0; i < n; ++i) surf.push_back({{i, n + i}, 0, 0});
  for (int j = 0; j < cyc; ++j) surf.push_back({{2 * n + j}, 0, 0});
  Cobordism c(s, s, mod);
  c.add(canonical(surf, 2 * n + cyc), 1);
  return c;
}

Cobordism from_parts(const Smoothing& a, const Smoothing& b,
                     const std::vector<Component>& parts, Coef k, int mod) {
  int n = curve_count(a, b);
  std::vector<int> used(n, 0);
  Surface s = parts;
  for (auto& c : parts)
    for (int x : c.curves)
      if (x >= 0 && x < n) used[x] = 1;
  for (int x = 0; x < n; ++x)
    if (!used[x]) s.push_back({{x}, 0, 0});
  Cobordism c(a, b, mod);
  c.add(canonical(s, n), k);
  return c;
}

Cobordism cap(int mod) {
  return from_parts(circles_only(0), circles_only(1), {{{0}, 0, 0}}, 1, mod);
}
Cobordism cup(int mod) {
  return from_parts(circles_only(1), circles_only(0), {{{0}, 0, 0}}, 1, mod);
}

// ---------------------------------------------------------- composition

Cobordism compose(const Cobordism& g, const Cobordism& f) {
  const Smoothing& A = f.top;
  const Smoothing& B = f.bottom;
  const Smoothing& C = g.bottom;
  if (!B.same_shape(g.top))
    throw CobError("vertical composition: middle smoothings differ");
  int a = A.ncirc, b = B.ncirc, c = C.ncirc;
  std::vector<int> cf, cg, cc;
  arc_cycles(A.match, B.match, &cf);
  arc_cycles(B.match, C.match, &cg);
  int ncc = arc_cycles(A.match, C.match, &cc);
  int nf_curves = curve_count(A, B), ng_curves = curve_count(B, C);
  int ncomp = a + c + ncc;
  int npts = A.npts();
  Cobordism out(A, C, f.mod);
  // first point of each composite cycle
  std::vector<int> cyc_first(ncc, -1);
  for (int p = npts - 1; p >= 0; --p) cyc_first[cc[p]] = p;
  for (auto& [sf, kf] : f.terms) {
    auto of = owner(sf, nf_curves);
    for (auto& [sg, kg] : g.terms) {
      auto og = owner(sg, ng_curves);
      int nf = (int)sf.size(), ng = (int)sg.size();
      UF uf(nf + ng);
      std::vector<Piece> nodes(nf + ng);
      std::vector<int> glue(nf + ng, 0);
      for (int i = 0; i < nf; ++i) {
        nodes[i].chi = sf[i].chi();
        nodes[i].dots = sf[i].dots;
      }
      for (int i = 0; i < ng; ++i) {
        nodes[nf + i].chi = sg[i].chi();
        nodes[nf + i].dots = sg[i].dots;
      }
      for (int i = 0; i < b; ++i) uf.unite(of[a + i], nf + og[i]);
      for (int p = 0; p < npts; ++p) {
        if (B.match[p] < p) continue;
        int u = of[a + b + cf[p]], v = nf + og[b + c + cg[p]];
        uf.unite(u, v);
        glue[u] += 1;
      }
      for (int i = 0; i < a; ++i) nodes[of[i]].curves.push_back(i);
      for (int i = 0; i < c; ++i) nodes[nf + og[b + i]].curves.push_back(a + i);
      for (int k = 0; k < ncc; ++k)
        nodes[of[a + b + cf[cyc_first[k]]]].curves.push_back(a + c + k);
      Surface s = assemble(nf + ng, uf, nodes, glue, ncomp);
      out.add(s, kf * kg);
    }
  }
  return simplify(out);
}

GlueResult glue_smoothings(const PlanarArcDiagram& d,
                           const std::vector<Smoothing>& parts) {
  if (parts.size() != d.holes.size())
    throw CobError("arity mismatch in planar composition");
  for (size_t i = 0; i < parts.size(); ++i)
    if (parts[i].npts() != d.holes[i])
      throw CobError("boundary mismatch at hole " + std::to_string(i));
  auto partner = d.partner();
  auto arc_tag = [&](int arc) {
    return arc < (int)d.arc_tag.size() ? d.arc_tag[arc] : INT_MAX;
  };
  GlueResult r;
  r.s.match.assign(d.nout, -1);
  r.s.atag.assign(d.nout, INT_MAX);
  r.out_rep.assign(d.nout, Port{-1, 0});
  std::vector<std::vector<char>> seen(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) seen[i].assign(d.holes[i], 0);
  for (int q = 0; q < d.nout; ++q) {
    if (r.s.match[q] >= 0) continue;
    int tag = INT_MAX;
    Port cur{-1, q};
    bool first = true;
    while (true) {
      auto [nxt, arc] = partner.at(cur);
      tag = std::min(tag, arc_tag(arc));
      if (nxt.hole < 0) {
        r.s.match[q] = nxt.pt;
        r.s.match[nxt.pt] = q;
        break;
      }
      if (first) r.out_rep[q] = nxt;
      first = false;
      const Smoothing& s = parts[nxt.hole];
      seen[nxt.hole][nxt.pt] = 1;
      tag = std::min(tag, s.atag.empty() ? INT_MAX : s.atag[nxt.pt]);
      int m = s.match[nxt.pt];
      seen[nxt.hole][m] = 1;
      cur = Port{nxt.hole, m};
    }
    r.s.atag[q] = r.s.atag[r.s.match[q]] = tag;
    // fill out_rep of the far end
    int far = r.s.match[q];
    if (far != q) {
      Port back{-1, far};
      auto [nxt, arc] = partner.at(back);
      r.out_rep[far] = nxt.hole >= 0 ? nxt : Port{-1, 0};
    }
  }
  struct Circ {
    int tag;
    int order;
    Port rep;
    int part = -1, idx = -1;
  };
  std::vector<Circ> circ;
  int order = 0;
  for (size_t i = 0; i < parts.size(); ++i)
    for (int j = 0; j < parts[i].ncirc; ++j) {
      int t = j < (int)parts[i].ctag.size() ? parts[i].ctag[j] : INT_MAX;
      circ.push_back({t, order++, Port{-2, 0}, (int)i, j});
    }
  for (size_t i = 0; i < parts.size(); ++i)
    for (int p = 0; p < d.holes[i]; ++p) {
      if (seen[i][p]) continue;
      int tag = INT_MAX;
      Port cur{(int)i, p};
      while (!seen[cur.hole][cur.pt]) {
        const Smoothing& s = parts[cur.hole];
        seen[cur.hole][cur.pt] = 1;
        tag = std::min(tag, s.atag.empty() ? INT_MAX : s.atag[cur.pt]);
        int m = s.match[cur.pt];
        seen[cur.hole][m] = 1;
        auto [nxt, arc] = partner.at(Port{cur.hole, m});
        tag = std::min(tag, arc_tag(arc));
        cur = nxt;
      }
      circ.push_back({tag, order++, Port{(int)i, p}});
    }
  for (int l = 0; l < d.loops; ++l)
    circ.push_back({l < (int)d.loop_tag.size() ? d.loop_tag[l] : INT_MAX,
                    order++, Port{-3, l}});
  std::stable_sort(circ.begin(), circ.end(), [](const Circ& x, const Circ& y) {
    return x.tag != y.tag ? x.tag < y.tag : x.order < y.order;
  });
  r.part_circle.resize(parts.size());
  for (size_t i = 0; i < parts.size(); ++i)
    r.part_circle[i].assign(parts[i].ncirc, -1);
  for (int k = 0; k < (int)circ.size(); ++k) {
    r.s.ctag.push_back(circ[k].tag);
    r.circle_rep.push_back(circ[k].rep);
    if (circ[k].part >= 0) r.part_circle[circ[k].part][circ[k].idx] = k;
  }
  r.s.ncirc = (int)circ.size();
  r.s.shift = 0;
  for (auto& p : parts) r.s.shift += p.shift;
  return r;
}

Cobordism planar_compose(const PlanarArcDiagram& d,
                         const std::vector<Cobordism>& parts) {
  std::vector<Smoothing> tops, bots;
  for (auto& p : parts) {
    tops.push_back(p.top);
    bots.push_back(p.bottom);
  }
  GlueResult gt = glue_smoothings(d, tops), gb = glue_smoothings(d, bots);
  int np = (int)parts.size();
  std::vector<std::vector<int>> cyc(np);
  std::vector<int> ncur(np);
  for (int i = 0; i < np; ++i) {
    arc_cycles(tops[i].match, bots[i].match, &cyc[i]);
    ncur[i] = curve_count(tops[i], bots[i]);
  }
  int mod = parts.empty() ? 0 : parts[0].mod;
  Cobordism out(gt.s, gb.s, mod);
  std::vector<int> ccyc;
  int nccyc = arc_cycles(gt.s.match, gb.s.match, &ccyc);
  int T = gt.s.ncirc, Bn = gb.s.ncirc;
  int ncomp = T + Bn + nccyc;
  int narcs = (int)d.arcs.size();
  auto partner = d.partner();
  std::vector<int> cyc_first(nccyc, -1);
  for (int q = d.nout - 1; q >= 0; --q) cyc_first[ccyc[q]] = q;

  // iterate over the product of term lists
  std::vector<std::vector<std::pair<const Surface*, Coef>>> tl(np);
  for (int i = 0; i < np; ++i)
    for (auto& [s, k] : parts[i].terms) tl[i].push_back({&s, k});
  for (auto& v : tl)
    if (v.empty()) return out;
  std::vector<size_t> idx(np, 0);
  while (true) {
    Coef k = 1;
    std::vector<int> base(np + 1, 0);
    for (int i = 0; i < np; ++i) {
      k *= tl[i][idx[i]].second;
      base[i + 1] = base[i] + (int)tl[i][idx[i]].first->size();
    }
    int nstrip0 = base[np];
    int nnodes = nstrip0 + narcs + d.loops;
    std::vector<Piece> nodes(nnodes);
    std::vector<int> glue(nnodes, 0);
    std::vector<std::vector<int>> own(np);
    for (int i = 0; i < np; ++i) {
      const Surface& s = *tl[i][idx[i]].first;
      own[i] = owner(s, ncur[i]);
      for (int c = 0; c < (int)s.size(); ++c) {
        nodes[base[i] + c].chi = s[c].chi();
        nodes[base[i] + c].dots = s[c].dots;
      }
    }
    for (int a = 0; a < narcs; ++a) nodes[nstrip0 + a].chi = 1;
    UF uf(nnodes);
    auto comp_at = [&](const Port& p) {
      int i = p.hole;
      return base[i] + own[i][tops[i].ncirc + bots[i].ncirc + cyc[i][p.pt]];
    };
    for (int a = 0; a < narcs; ++a)
      for (const Port& p : {d.arcs[a].first, d.arcs[a].second})
        if (p.hole >= 0) {
          uf.unite(nstrip0 + a, comp_at(p));
          glue[nstrip0 + a] += 1;
        }
    auto circle_node = [&](const GlueResult& g, int k, bool top) {
      const Port& r = g.circle_rep[k];
      if (r.hole == -3) return nstrip0 + narcs + r.pt;
      if (r.hole >= 0) return comp_at(r);
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < (int)g.part_circle[i].size(); ++j)
          if (g.part_circle[i][j] == k)
            return base[i] + own[i][top ? j : tops[i].ncirc + j];
      throw CobError("lost circle in planar composition");
    };
    for (int c = 0; c < T; ++c) nodes[circle_node(gt, c, true)].curves.push_back(c);
    for (int c = 0; c < Bn; ++c)
      nodes[circle_node(gb, c, false)].curves.push_back(T + c);
    for (int c = 0; c < nccyc; ++c) {
      int arc = partner.at(Port{-1, cyc_first[c]}).second;
      nodes[nstrip0 + arc].curves.push_back(T + Bn + c);
    }
    out.add(assemble(nnodes, uf, nodes, glue, ncomp), k);
    int i = 0;
    while (i < np && ++idx[i] == tl[i].size()) idx[i++] = 0;
    if (i == np) break;
  }
  return out;
}

// -------------------------------------------------------------- relations

namespace {

struct Surgery {
  Surface base;
  UF uf;
  std::vector<int> extra_genus, extra_dots;
  explicit Surgery(const Surface& s)
      : base(s), uf((int)s.size()), extra_genus(s.size()), extra_dots(s.size()) {}
  void tube(int i, int j) {
    int a = uf.find(i), b = uf.find(j);
    if (a == b) {
      extra_genus[a] += 1;
      return;
    }
    uf.unite(a, b);
    int r = uf.find(a);
    int o = r == a ? b : a;
    extra_genus[r] += extra_genus[o];
    extra_dots[r] += extra_dots[o];
  }
  void handle(int i) { extra_genus[uf.find(i)] += 1; }
  void dot(int i) { extra_dots[uf.find(i)] += 1; }
  Surface result(int ncurves) {
    std::map<int, Component> cls;
    for (int i = 0; i < (int)base.size(); ++i) {
      Component& c = cls[uf.find(i)];
      c.curves.insert(c.curves.end(), base[i].curves.begin(),
                      base[i].curves.end());
      c.genus += base[i].genus;
      c.dots += base[i].dots;
    }
    Surface s;
    for (auto& [r, c] : cls) {
      c.genus += extra_genus[r];
      c.dots += extra_dots[r];
      s.push_back(c);
    }
    return canonical(s, ncurves);
  }
};

}  // namespace

Surface add_tube(const Surface& s, int ci, int cj, int ncurves) {
  Surgery g(s);
  g.tube(ci, cj);
  return g.result(ncurves);
}
Surface add_handle(const Surface& s, int ci) {
  Surgery g(s);
  g.handle(ci);
  int n = 0;
  for (auto& c : s) n += (int)c.curves.size();
  return g.result(n);
}
Surface add_dot(const Surface& s, int ci) {
  Surgery g(s);
  g.dot(ci);
  int n = 0;
  for (auto& c : s) n += (int)c.curves.size();
  return g.result(n);
}

std::pair<Cobordism, Cobordism> relation_sides(const RelationInstance& r) {
  const Cobordism& amb = r.ambient;
  if (amb.terms.size() != 1)
    throw CobError("relation ambient must be a single generator");
  const Surface& s = amb.terms.begin()->first;
  int nc = amb.ncurves();
  for (int x : r.sites)
    if (x < 0 || x >= (int)s.size())
      throw CobError("relation site is not a component of the ambient");
  auto need = [&](size_t k) {
    if (r.sites.size() < k) throw CobError("relation needs more sites");
  };
  auto gen = [&](const std::vector<std::pair<int, int>>& tubes,
                 const std::vector<int>& handles, const std::vector<int>& dots) {
    Surgery g(s);
    for (auto [i, j] : tubes) g.tube(i, j);
    for (int h : handles) g.handle(h);
    for (int d : dots) g.dot(d);
    Cobordism c(amb.top, amb.bottom, amb.mod);
    c.add(g.result(nc), 1);
    return c;
  };
  auto tube = [&](int i, int j) { return gen({{r.sites[i], r.sites[j]}}, {}, {}); };
  auto hnd = [&](int i) { return gen({}, {r.sites[i]}, {}); };
  Cobordism zero(amb.top, amb.bottom, amb.mod);
  switch (r.kind) {
    case Relation::S: {
      Surface t = s;
      t.push_back({{}, 0, 0});
      std::sort(t.begin(), t.end());
      Cobordism l(amb.top, amb.bottom, amb.mod);
      l.add(t, 1);
      return {l, zero};
    }
    case Relation::T: {
      Surface t = s;
      t.push_back({{}, 1, 0});
      std::sort(t.begin(), t.end());
      Cobordism l(amb.top, amb.bottom, amb.mod);
      l.add(t, 1);
      return {l, amb * 2};
    }
    case Relation::FourTu:
      need(4);
      return {tube(0, 1) + tube(2, 3), tube(0, 2) + tube(1, 3)};
    case Relation::ThreeS1:
      need(3);
      return {tube(0, 1) + hnd(2), tube(0, 2) + tube(1, 2)};
    case Relation::ThreeS2:
      need(3);
      return {tube(0, 1) + tube(1, 2) + tube(0, 2), hnd(0) + hnd(1) + hnd(2)};
    case Relation::NeckCut:
      need(2);
      return {tube(0, 1) * 2, hnd(0) + hnd(1)};
  }
  throw CobError("unknown relation");
}

bool check_relation(const RelationInstance& r) {
  auto [l, rr] = relation_sides(r);
  return equal_reduced(l, rr);
}

// ------------------------------------------------------------------ json

nlohmann::json to_json(const Smoothing& s) {
  return {{"match", s.match}, {"circles", s.ncirc}, {"shift", s.shift}};
}

nlohmann::json to_json(const Cobordism& c) {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [s, k] : c.terms) {
    nlohmann::json comps = nlohmann::json::array();
    for (auto& x : s)
      comps.push_back({{"curves", x.curves}, {"genus", x.genus}, {"dots", x.dots}});
    terms.push_back({{"coef", k}, {"components", comps}});
  }
  return {{"top", to_json(c.top)}, {"bottom", to_json(c.bottom)},
          {"mod", c.mod}, {"terms", terms}};
}

}  // namespace kh
