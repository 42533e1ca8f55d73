#include "kh/tqft.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kh {

// ---------------------------------------------------------------- Poly

Poly Poly::x(int k, Coef coef) {
  Poly p;
  if (coef == 0) return p;
  p.c.assign(k + 1, 0);
  p.c[k] = coef;
  return p;
}

int Poly::lowest() const {
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i]) return (int)i;
  return -1;
}

void Poly::trim(int mod) {
  for (auto& v : c) v = coef_norm(v, mod);
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Poly& Poly::add(const Poly& o, int mod) {
  if (o.c.size() > c.size()) c.resize(o.c.size(), 0);
  for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
  trim(mod);
  return *this;
}

Poly Poly::mul(const Poly& o, int mod) const {
  Poly r;
  if (is_zero() || o.is_zero()) return r;
  r.c.assign(c.size() + o.c.size() - 1, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i]) continue;
    for (size_t j = 0; j < o.c.size(); ++j)
      r.c[i + j] = coef_norm(r.c[i + j] + c[i] * o.c[j], mod);
  }
  r.trim(mod);
  return r;
}

Coef Poly::eval(Coef at, int mod) const {
  Coef r = 0;
  for (size_t i = c.size(); i-- > 0;) r = coef_norm(r * at + c[i], mod);
  return r;
}

std::string Poly::str(const std::string& var) const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c.size(); ++i) {
    Coef k = c[i];
    if (!k) continue;
    if (!first) os << (k < 0 ? " - " : " + ");
    else if (k < 0) os << "-";
    first = false;
    Coef a = k < 0 ? -k : k;
    if (i == 0 || a != 1) os << a;
    if (i >= 1) os << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ---------------------------------------------------------------- specs

namespace {

void khovanov_core(FrobeniusSpec& s) {
  s.unit = {Poly(1), Poly(0)};
  s.counit = {Poly(0), Poly(1)};
  s.m[0][0][0] = 1;
  s.m[0][1][1] = 1;
  s.m[1][0][1] = 1;
  s.delta[0][0][1] = 1;
  s.delta[0][1][0] = 1;
  s.delta[1][1][1] = 1;
}

}  // namespace

FrobeniusSpec spec_khovanov(int mod) {
  FrobeniusSpec s;
  s.name = "khovanov";
  s.mod = mod;
  khovanov_core(s);
  return s;
}

FrobeniusSpec spec_lee() {
  FrobeniusSpec s;
  s.name = "lee";
  s.graded = false;
  s.descends = false;
  khovanov_core(s);
  s.m[1][1][0] = 1;
  s.delta[1][0][0] = 1;
  return s;
}

FrobeniusSpec spec_f3() {
  FrobeniusSpec s;
  s.name = "f3";
  s.var = "H";
  s.var_deg = -2;
  s.mod = 2;
  khovanov_core(s);
  s.delta[0][0][0] = Poly::x(1);
  s.m[1][1][1] = Poly::x(1);
  return s;
}

FrobeniusSpec spec_fc() {
  FrobeniusSpec s;
  s.name = "fc";
  s.var = "c";
  s.var_deg = 2;
  s.descends = false;
  khovanov_core(s);
  s.counit[0] = Poly::x(1, -1);
  s.delta[0][1][1] = Poly::x(1);
  return s;
}

FrobeniusSpec spec_by_name(const std::string& name, int mod) {
  if (name == "khovanov") return spec_khovanov(mod);
  if (name == "lee") return spec_lee();
  if (name == "f3") return spec_f3();
  if (name == "fc") return spec_fc();
  throw std::invalid_argument("unknown functor: " + name);
}

// ---------------------------------------------------------------- LinMap

LinMap lin_zero(int in, int out) {
  LinMap f;
  f.in = in;
  f.out = out;
  f.a.assign((size_t)1 << (in + out), Poly());
  return f;
}

LinMap lin_id(int legs) {
  LinMap f = lin_zero(legs, legs);
  for (int i = 0; i < (1 << legs); ++i) f.at(i, i) = 1;
  return f;
}

LinMap lin_swap() {
  LinMap f = lin_zero(2, 2);
  for (int i = 0; i < 4; ++i) f.at(((i & 1) << 1) | (i >> 1), i) = 1;
  return f;
}

LinMap lin_compose(const LinMap& g, const LinMap& f, int mod) {
  if (g.in != f.out) throw std::invalid_argument("lin_compose: shape");
  LinMap h = lin_zero(f.in, g.out);
  for (int o = 0; o < (1 << g.out); ++o)
    for (int k = 0; k < (1 << f.out); ++k) {
      const Poly& gk = g.at(o, k);
      if (gk.is_zero()) continue;
      for (int i = 0; i < (1 << f.in); ++i)
        if (!f.at(k, i).is_zero()) h.at(o, i).add(gk.mul(f.at(k, i), mod), mod);
    }
  return h;
}

LinMap lin_tensor(const LinMap& f, const LinMap& g, int mod) {
  LinMap h = lin_zero(f.in + g.in, f.out + g.out);
  for (int fo = 0; fo < (1 << f.out); ++fo)
    for (int fi = 0; fi < (1 << f.in); ++fi) {
      const Poly& a = f.at(fo, fi);
      if (a.is_zero()) continue;
      for (int go = 0; go < (1 << g.out); ++go)
        for (int gi = 0; gi < (1 << g.in); ++gi) {
          const Poly& b = g.at(go, gi);
          if (b.is_zero()) continue;
          h.at(fo | (go << f.out), fi | (gi << f.in)) = a.mul(b, mod);
        }
    }
  return h;
}

LinMap lin_unit(const FrobeniusSpec& s) {
  LinMap f = lin_zero(0, 1);
  for (int a = 0; a < 2; ++a) f.at(a, 0) = s.unit[a];
  return f;
}

LinMap lin_counit(const FrobeniusSpec& s) {
  LinMap f = lin_zero(1, 0);
  for (int a = 0; a < 2; ++a) f.at(0, a) = s.counit[a];
  return f;
}

LinMap lin_m(const FrobeniusSpec& s) {
  LinMap f = lin_zero(2, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) f.at(c, a | (b << 1)) = s.m[a][b][c];
  return f;
}

LinMap lin_delta(const FrobeniusSpec& s) {
  LinMap f = lin_zero(1, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) f.at(b | (c << 1), a) = s.delta[a][b][c];
  return f;
}

// ---------------------------------------------------------------- surfaces

namespace {

using Vec2 = std::array<Poly, 2>;

Vec2 apply_m(const FrobeniusSpec& s, const Vec2& x, const Vec2& y) {
  Vec2 r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (x[a].is_zero() || y[b].is_zero()) continue;
      Poly xy = x[a].mul(y[b], s.mod);
      for (int c = 0; c < 2; ++c)
        if (!s.m[a][b][c].is_zero()) r[c].add(xy.mul(s.m[a][b][c], s.mod), s.mod);
    }
  return r;
}

Vec2 basis(int a) {
  Vec2 v;
  v[a] = 1;
  return v;
}

// Dense map of a single connected component with t input and b output legs.
LinMap component_map(const FrobeniusSpec& s, int t, int b, int genus,
                     int dots) {
  LinMap f = lin_zero(t, b);
  for (int i = 0; i < (1 << t); ++i) {
    Vec2 v;
    if (t == 0) {
      v = s.unit;
    } else {
      v = basis(i & 1);
      for (int k = 1; k < t; ++k) v = apply_m(s, v, basis((i >> k) & 1));
    }
    for (int k = 0; k < dots; ++k) v = apply_m(s, basis(1), v);
    for (int k = 0; k < genus; ++k) {
      Vec2 w;
      for (int a = 0; a < 2; ++a) {
        if (v[a].is_zero()) continue;
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) {
            if (s.delta[a][p][q].is_zero()) continue;
            Vec2 mq = apply_m(s, basis(p), basis(q));
            Poly k2 = v[a].mul(s.delta[a][p][q], s.mod);
            for (int c = 0; c < 2; ++c) w[c].add(k2.mul(mq[c], s.mod), s.mod);
          }
      }
      v = w;
    }
    if (b == 0) {
      Poly r;
      for (int a = 0; a < 2; ++a) r.add(v[a].mul(s.counit[a], s.mod), s.mod);
      f.at(0, i) = r;
      continue;
    }
    // Iterated comultiplication, always splitting the last leg.
    std::vector<Poly> st(v.begin(), v.end());
    for (int n = 1; n < b; ++n) {
      std::vector<Poly> nx((size_t)1 << (n + 1));
      for (int x = 0; x < (1 << n); ++x) {
        if (st[x].is_zero()) continue;
        int a = (x >> (n - 1)) & 1;
        int base = x & ~(1 << (n - 1));
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            if (!s.delta[a][p][q].is_zero())
              nx[base | (p << (n - 1)) | (q << n)].add(
                  st[x].mul(s.delta[a][p][q], s.mod), s.mod);
      }
      st = std::move(nx);
    }
    for (int o = 0; o < (1 << b); ++o) f.at(o, i) = st[o];
  }
  return f;
}

struct SparseSurfaceMap {
  struct Comp {
    std::vector<int> tops, bots;
    LinMap f;
  };
  std::vector<Comp> comps;
  Poly scalar = 1;  // product of closed components
};

SparseSurfaceMap prepare(const FrobeniusSpec& s, const Surface& surf, int ntop,
                         int nbot) {
  SparseSurfaceMap m;
  for (const auto& c : surf) {
    SparseSurfaceMap::Comp k;
    for (int id : c.curves) {
      if (id < ntop) k.tops.push_back(id);
      else if (id < ntop + nbot) k.bots.push_back(id - ntop);
      else throw CobError("apply_functor: surface has boundary arcs");
    }
    k.f = component_map(s, (int)k.tops.size(), (int)k.bots.size(), c.genus,
                        c.dots);
    if (k.tops.empty() && k.bots.empty()) {
      m.scalar = m.scalar.mul(k.f.at(0, 0), s.mod);
      continue;
    }
    m.comps.push_back(std::move(k));
  }
  return m;
}

// Image of one basis state as (output state, coefficient) pairs.
std::vector<std::pair<uint64_t, Poly>> apply_sparse(const FrobeniusSpec& s,
                                                    const SparseSurfaceMap& m,
                                                    uint64_t in) {
  std::vector<std::pair<uint64_t, Poly>> cur;
  if (m.scalar.is_zero()) return cur;
  cur.push_back({0, m.scalar});
  for (const auto& k : m.comps) {
    int ti = 0;
    for (size_t j = 0; j < k.tops.size(); ++j)
      if ((in >> k.tops[j]) & 1) ti |= 1 << j;
    std::vector<std::pair<uint64_t, Poly>> nx;
    for (int o = 0; o < (1 << k.bots.size()); ++o) {
      const Poly& v = k.f.at(o, ti);
      if (v.is_zero()) continue;
      uint64_t ob = 0;
      for (size_t j = 0; j < k.bots.size(); ++j)
        if ((o >> j) & 1) ob |= uint64_t(1) << k.bots[j];
      for (const auto& [st, p] : cur) {
        Poly q = p.mul(v, s.mod);
        if (!q.is_zero()) nx.push_back({st | ob, std::move(q)});
      }
    }
    cur = std::move(nx);
    if (cur.empty()) break;
  }
  return cur;
}

}  // namespace

LinMap eval_surface(const FrobeniusSpec& s, const Surface& surf, int ntop,
                    int nbot) {
  SparseSurfaceMap m = prepare(s, surf, ntop, nbot);
  LinMap f = lin_zero(ntop, nbot);
  for (int i = 0; i < (1 << ntop); ++i)
    for (auto& [o, p] : apply_sparse(s, m, i)) f.at((int)o, i).add(p, s.mod);
  return f;
}

LinMap eval_cobordism(const FrobeniusSpec& s, const Cobordism& c) {
  if (!c.top.match.empty() || !c.bottom.match.empty())
    throw CobError("eval_cobordism: boundary arcs");
  LinMap f = lin_zero(c.top.ncirc, c.bottom.ncirc);
  for (const auto& [surf, k] : c.terms) {
    LinMap g = eval_surface(s, surf, c.top.ncirc, c.bottom.ncirc);
    for (size_t i = 0; i < f.a.size(); ++i)
      if (!g.a[i].is_zero()) f.a[i].add(g.a[i].mul(Poly(k), s.mod), s.mod);
  }
  return f;
}

// ---------------------------------------------------------------- axioms

std::pair<LinMap, LinMap> four_tu_sides(const FrobeniusSpec& s) {
  // Four disks (caps) in V^{(x)4}; tubes join two of them.  A tube between
  // caps i and j equals Delta o epsilon on those legs.
  auto tube = [&](int i, int j) {
    Surface surf;
    surf.push_back({{i, j}, 0, 0});
    for (int k = 0; k < 4; ++k)
      if (k != i && k != j) surf.push_back({{k}, 0, 0});
    std::sort(surf.begin(), surf.end());
    return eval_surface(s, surf, 0, 4);
  };
  auto sum = [&](LinMap a, const LinMap& b) {
    for (size_t i = 0; i < a.a.size(); ++i) a.a[i].add(b.a[i], s.mod);
    return a;
  };
  return {sum(tube(0, 1), tube(2, 3)), sum(tube(0, 2), tube(1, 3))};
}

AxiomReport check_axioms(const FrobeniusSpec& s) {
  AxiomReport r;
  int md = s.mod;
  LinMap m = lin_m(s), d = lin_delta(s), u = lin_unit(s), e = lin_counit(s),
         id = lin_id(1), sw = lin_swap();
  r.associative = lin_compose(m, lin_tensor(m, id, md), md) ==
                  lin_compose(m, lin_tensor(id, m, md), md);
  r.coassociative = lin_compose(lin_tensor(d, id, md), d, md) ==
                    lin_compose(lin_tensor(id, d, md), d, md);
  r.commutative = lin_compose(m, sw, md) == m;
  r.cocommutative = lin_compose(sw, d, md) == d;
  r.unit = lin_compose(m, lin_tensor(u, id, md), md) == id &&
           lin_compose(m, lin_tensor(id, u, md), md) == id;
  r.counit = lin_compose(lin_tensor(e, id, md), d, md) == id &&
             lin_compose(lin_tensor(id, e, md), d, md) == id;
  LinMap dm = lin_compose(d, m, md);
  r.frobenius = lin_compose(lin_tensor(m, id, md), lin_tensor(id, d, md), md) ==
                    dm &&
                lin_compose(lin_tensor(id, m, md), lin_tensor(d, id, md), md) ==
                    dm;
  r.sphere_value = lin_compose(e, u, md).at(0, 0);
  r.torus_value =
      lin_compose(e, lin_compose(m, lin_compose(d, u, md), md), md).at(0, 0);
  r.sphere = r.sphere_value.is_zero();
  r.torus = r.torus_value == Poly(coef_norm(2, md));
  auto [L, R] = four_tu_sides(s);
  r.four_tu = L == R;
  // Homogeneity: every structure constant has degree matching the grading.
  auto deg = [](int bits, int legs) { return legs - 2 * __builtin_popcount(bits); };
  bool h = true;
  auto check = [&](const LinMap& f, int shift) {
    for (int o = 0; o < (1 << f.out); ++o)
      for (int i = 0; i < (1 << f.in); ++i) {
        const Poly& p = f.at(o, i);
        for (size_t k = 0; k < p.c.size(); ++k)
          if (p.c[k] && deg(o, f.out) + s.var_deg * (int)k - deg(i, f.in) != shift)
            h = false;
      }
  };
  check(m, -1);
  check(d, -1);
  check(u, 1);
  check(e, 1);
  r.homogeneous = h;
  return r;
}

// ---------------------------------------------------------------- complexes

int AlgebraicComplex::dim(int r) const {
  if (r < r0 || r > r1()) return 0;
  return (int)qdeg[r - r0].size();
}

AlgebraicComplex apply_functor(const FrobeniusSpec& s, const FormalComplex& c) {
  if (c.npts != 0) throw CobError("apply_functor: diagram has boundary");
  AlgebraicComplex a;
  a.r0 = c.r0;
  a.mod = s.mod;
  a.var = s.var;
  a.var_deg = s.var_deg;
  a.graded = s.graded;
  std::vector<std::vector<int>> off(c.obj.size());
  for (size_t k = 0; k < c.obj.size(); ++k) {
    std::vector<int> q;
    for (const auto& sm : c.obj[k]) {
      if (sm.ncirc > 30) throw CobError("apply_functor: too many circles");
      off[k].push_back((int)q.size());
      for (int st = 0; st < (1 << sm.ncirc); ++st)
        q.push_back(sm.ncirc - 2 * __builtin_popcount(st) + sm.shift);
    }
    a.qdeg.push_back(std::move(q));
  }
  for (size_t k = 0; k + 1 < c.obj.size(); ++k)
    a.d.push_back(functor_matrix(s, c.d[k], c.obj[k], c.obj[k + 1]));
  return a;
}

PolyMatrix functor_matrix(const FrobeniusSpec& s, const CobMatrix& m,
                          const std::vector<Smoothing>& src,
                          const std::vector<Smoothing>& tgt) {
  auto offsets = [](const std::vector<Smoothing>& v, int& total) {
    std::vector<int> off;
    total = 0;
    for (const auto& sm : v) {
      if (sm.ncirc > 30) throw CobError("apply_functor: too many circles");
      off.push_back(total);
      total += 1 << sm.ncirc;
    }
    return off;
  };
  PolyMatrix pm;
  auto so = offsets(src, pm.cols);
  auto to = offsets(tgt, pm.rows);
  std::map<std::pair<int, int>, Poly> acc;  // (col,row)
  for (const auto& [ij, cob] : m.e) {
    auto [ti, sj] = ij;
    const Smoothing& a = src[sj];
    const Smoothing& b = tgt[ti];
    for (const auto& [surf, coef] : cob.terms) {
      SparseSurfaceMap sm = prepare(s, surf, a.ncirc, b.ncirc);
      Poly k0(coef_norm(coef, s.mod));
      for (int st = 0; st < (1 << a.ncirc); ++st)
        for (auto& [o, p] : apply_sparse(s, sm, st)) {
          int col = so[sj] + st, row = to[ti] + (int)o;
          acc[{col, row}].add(p.mul(k0, s.mod), s.mod);
        }
    }
  }
  for (auto& [cr, p] : acc)
    if (!p.is_zero()) pm.e.push_back({cr.second, cr.first, std::move(p)});
  return pm;
}

std::map<int, PolyMatrix> apply_functor_map(const FrobeniusSpec& s,
                                            const ChainMap& f) {
  std::map<int, PolyMatrix> out;
  const FormalComplex& a = *f.src;
  const FormalComplex& b = *f.tgt;
  for (int r = a.r0; r <= a.r1(); ++r) {
    if (!b.has(r + f.deg)) continue;
    out[r] = functor_matrix(s, f.get(r), a.at(r), b.at(r + f.deg));
  }
  return out;
}

AlgebraicComplex specialize(const AlgebraicComplex& c, Coef at) {
  AlgebraicComplex a = c;
  a.var.clear();
  a.var_deg = 0;
  a.graded = false;
  for (auto& m : a.d) {
    std::vector<Entry> ne;
    for (auto& e : m.e) {
      Coef v = e.v.eval(at, c.mod);
      if (v) ne.push_back({e.row, e.col, Poly(v)});
    }
    m.e = std::move(ne);
  }
  return a;
}

bool verify_d_squared(const AlgebraicComplex& c) {
  for (size_t k = 0; k + 1 < c.d.size(); ++k) {
    const auto& A = c.d[k];
    const auto& B = c.d[k + 1];
    std::vector<std::vector<const Entry*>> bcol(B.cols);
    for (const auto& e : B.e) bcol[e.col].push_back(&e);
    std::map<std::pair<int, int>, Poly> acc;
    for (const auto& e : A.e)
      for (const Entry* f : bcol[e.row])
        acc[{e.col, f->row}].add(f->v.mul(e.v, c.mod), c.mod);
    for (auto& [k2, p] : acc)
      if (!p.is_zero()) return false;
  }
  return true;
}

std::vector<int> entry_degrees(const AlgebraicComplex& c) {
  std::set<int> out;
  for (size_t k = 0; k < c.d.size(); ++k)
    for (const auto& e : c.d[k].e)
      for (size_t p = 0; p < e.v.c.size(); ++p)
        if (e.v.c[p])
          out.insert(c.qdeg[k + 1][e.row] - c.qdeg[k][e.col] +
                     c.var_deg * (int)p);
  return {out.begin(), out.end()};
}

nlohmann::json to_json(const AlgebraicComplex& c) {
  nlohmann::json j;
  j["r0"] = c.r0;
  j["mod"] = c.mod;
  j["var"] = c.var;
  j["var_deg"] = c.var_deg;
  j["qdeg"] = c.qdeg;
  j["d"] = nlohmann::json::array();
  for (const auto& m : c.d) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& e : m.e) t.push_back({e.row, e.col, e.v.c});
    j["d"].push_back({{"rows", m.rows}, {"cols", m.cols}, {"entries", t}});
  }
  return j;
}

}  // namespace kh
