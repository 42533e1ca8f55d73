#include "kh/bracket.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace kh {

// ------------------------------------------------------------- matrices

void CobMatrix::add(int i, int j, const Cobordism& c) {
  if (c.is_zero()) return;
  auto it = e.find({i, j});
  if (it == e.end()) {
    e.emplace(std::pair{i, j}, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) e.erase(it);
}

CobMatrix mat_compose(const CobMatrix& a, const CobMatrix& b) {
  if (a.cols != b.rows) throw CobError("matrix shapes do not compose");
  CobMatrix r;
  r.rows = a.rows;
  r.cols = b.cols;
  std::map<int, std::vector<std::pair<int, const Cobordism*>>> by_col;
  for (auto& [ij, c] : a.e) by_col[ij.second].push_back({ij.first, &c});
  for (auto& [kj, c] : b.e) {
    auto it = by_col.find(kj.first);
    if (it == by_col.end()) continue;
    for (auto& [i, ac] : it->second) r.add(i, kj.second, compose(*ac, c));
  }
  return r;
}

CobMatrix mat_add(const CobMatrix& a, const CobMatrix& b, Coef kb) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw CobError("matrix shapes differ in a sum");
  CobMatrix r = a;
  for (auto& [ij, c] : b.e) r.add(ij.first, ij.second, kb == 1 ? c : c * kb);
  return r;
}

CobMatrix mat_scale(const CobMatrix& a, Coef k) {
  CobMatrix r;
  r.rows = a.rows;
  r.cols = a.cols;
  for (auto& [ij, c] : a.e) r.add(ij.first, ij.second, c * k);
  return r;
}

CobMatrix mat_reduce(const CobMatrix& a) {
  CobMatrix r;
  r.rows = a.rows;
  r.cols = a.cols;
  for (auto& [ij, c] : a.e) r.add(ij.first, ij.second, reduce(c));
  return r;
}

CobMatrix mat_simplify(const CobMatrix& a) {
  CobMatrix r;
  r.rows = a.rows;
  r.cols = a.cols;
  for (auto& [ij, c] : a.e) r.add(ij.first, ij.second, simplify(c));
  return r;
}

bool mat_is_zero_reduced(const CobMatrix& a) {
  for (auto& [ij, c] : a.e)
    if (!reduce(c).is_zero()) return false;
  return true;
}

// ------------------------------------------------------------- complexes

const std::vector<Smoothing>& FormalComplex::at(int r) const {
  static const std::vector<Smoothing> empty;
  return has(r) ? obj[r - r0] : empty;
}

const CobMatrix& FormalComplex::diff(int r) const {
  static thread_local CobMatrix z;
  if (has(r) && r - r0 < (int)d.size()) return d[r - r0];
  z = CobMatrix{};
  z.rows = (int)at(r + 1).size();
  z.cols = (int)at(r).size();
  return z;
}

int FormalComplex::total_objects() const {
  int n = 0;
  for (auto& v : obj) n += (int)v.size();
  return n;
}

const CobMatrix* ChainMap::at(int r) const {
  auto it = maps.find(r);
  return it == maps.end() ? nullptr : &it->second;
}

CobMatrix ChainMap::get(int r) const {
  if (auto* m = at(r)) return *m;
  CobMatrix z;
  z.rows = (int)tgt->at(r + deg).size();
  z.cols = (int)src->at(r).size();
  return z;
}

namespace {

// Re-stamp entry ends after objects changed shifts.
void sync_entries(FormalComplex& c) {
  for (int k = 0; k < (int)c.d.size(); ++k) {
    for (auto& [ij, cob] : c.d[k].e) {
      cob.top = c.obj[k][ij.second];
      cob.bottom = c.obj[k + 1][ij.first];
    }
  }
}

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

// A resolution with the curve of every edge label: circle index, or
// -(1 + smallest boundary point) for arcs.
struct Res {
  Smoothing s;
  std::map<int, int> curve;
};

Res resolve_full(const TangleDiagram& t, const std::vector<int>& bits,
                 const std::vector<int>& labs, const std::map<int, int>& idx) {
  Res r;
  r.s = resolve(t, bits);
  UF uf((int)labs.size());
  for (int c = 0; c < t.size(); ++c) {
    auto& e = t.x[c].e;
    if (bits[c] == 0) {
      uf.unite(idx.at(e[0]), idx.at(e[1]));
      uf.unite(idx.at(e[2]), idx.at(e[3]));
    } else {
      uf.unite(idx.at(e[0]), idx.at(e[3]));
      uf.unite(idx.at(e[1]), idx.at(e[2]));
    }
  }
  std::map<int, int> root_curve;
  for (int p = (int)t.boundary.size() - 1; p >= 0; --p)
    root_curve[uf.find(idx.at(t.boundary[p]))] = -(1 + p);
  for (int k = 0; k < r.s.ncirc; ++k)
    root_curve[uf.find(idx.at(r.s.ctag[k]))] = k;
  for (int i = 0; i < (int)labs.size(); ++i)
    r.curve[labs[i]] = root_curve.at(uf.find(i));
  return r;
}

Cobordism cube_saddle(const Res& a, const Res& b, const Crossing& x, int mod) {
  const Smoothing& A = a.s;
  const Smoothing& B = b.s;
  std::vector<int> cyc;
  int ncyc = arc_cycles(A.match, B.match, &cyc);
  int na = A.ncirc, nb = B.ncirc;
  std::set<int> in_saddle;
  std::set<int> cyc_in;
  for (int lab : x.e) {
    int ca = a.curve.at(lab), cb = b.curve.at(lab);
    if (ca >= 0) in_saddle.insert(ca);
    else cyc_in.insert(cyc[-ca - 1]);
    if (cb >= 0) in_saddle.insert(na + cb);
    else cyc_in.insert(cyc[-cb - 1]);
  }
  Component sad;
  for (int c : in_saddle) sad.curves.push_back(c);
  for (int k : cyc_in) sad.curves.push_back(na + nb + k);
  Surface s = {sad};
  std::map<int, int> btag;
  for (int k = 0; k < nb; ++k)
    if (!in_saddle.count(na + k)) btag[B.ctag[k]] = na + k;
  for (int k = 0; k < na; ++k) {
    if (in_saddle.count(k)) continue;
    auto it = btag.find(A.ctag[k]);
    if (it == btag.end()) throw CobError("cube edge: unmatched circle");
    s.push_back({{k, it->second}, 0, 0});
  }
  for (int k = 0; k < ncyc; ++k)
    if (!cyc_in.count(k)) s.push_back({{na + nb + k}, 0, 0});
  Cobordism c(A, B, mod);
  c.add(canonical(s, na + nb + ncyc), 1);
  return c;
}

}  // namespace

std::map<int, int> curve_of_labels(const TangleDiagram& t,
                                   const std::vector<int>& bits) {
  auto labs = t.labels();
  std::map<int, int> idx;
  for (int i = 0; i < (int)labs.size(); ++i) idx[labs[i]] = i;
  return resolve_full(t, bits, labs, idx).curve;
}

FormalComplex build_cube(const TangleDiagram& t, int mod) {
  int n = t.size();
  if (n > 24) throw DiagramError("too many crossings for a full cube");
  FormalComplex c;
  c.r0 = -t.n_minus();
  c.npts = (int)t.boundary.size();
  c.mod = mod;
  c.xids.resize(n);
  std::iota(c.xids.begin(), c.xids.end(), 0);
  c.obj.resize(n + 1);
  c.bits.resize(n + 1);
  c.d.resize(n);
  auto labs = t.labels();
  std::map<int, int> idx;
  for (int i = 0; i < (int)labs.size(); ++i) idx[labs[i]] = i;
  uint64_t nv = uint64_t(1) << n;
  std::vector<std::vector<int>> bitv(nv, std::vector<int>(n));
  std::vector<std::vector<uint64_t>> by_h(n + 1);
  for (uint64_t m = 0; m < nv; ++m) {
    int h = 0;
    for (int i = 0; i < n; ++i) h += bitv[m][i] = (m >> i) & 1;
    by_h[h].push_back(m);
  }
  std::vector<int> pos(nv);
  for (int h = 0; h <= n; ++h) {
    std::sort(by_h[h].begin(), by_h[h].end(), [&](uint64_t x, uint64_t y) {
      return bitv[x] < bitv[y];
    });
    for (int k = 0; k < (int)by_h[h].size(); ++k) pos[by_h[h][k]] = k;
  }
  std::vector<Res> res(nv);
  for (uint64_t m = 0; m < nv; ++m) res[m] = resolve_full(t, bitv[m], labs, idx);
  for (int h = 0; h <= n; ++h)
    for (uint64_t m : by_h[h]) {
      c.obj[h].push_back(res[m].s);
      c.bits[h].push_back(bitv[m]);
    }
  for (int h = 0; h < n; ++h) {
    c.d[h].rows = (int)by_h[h + 1].size();
    c.d[h].cols = (int)by_h[h].size();
    for (uint64_t m : by_h[h]) {
      int before = 0;
      for (int j = 0; j < n; ++j) {
        if (bitv[m][j]) {
          ++before;
          continue;
        }
        uint64_t w = m | (uint64_t(1) << j);
        Cobordism s = cube_saddle(res[m], res[w], t.x[j], mod);
        c.d[h].add(pos[w], pos[m], before % 2 ? -s : s);
      }
    }
  }
  return c;
}

FormalComplex shift(const FormalComplex& c, int s, int m) {
  FormalComplex r = c;
  r.r0 -= s;
  for (auto& v : r.obj)
    for (auto& o : v) o.shift += m;
  sync_entries(r);
  return r;
}

FormalComplex kh_normalize(const FormalComplex& c, int n_plus, int n_minus) {
  FormalComplex r = c;
  for (int k = 0; k < (int)r.obj.size(); ++k)
    for (auto& o : r.obj[k]) o.shift += r.r0 + k + n_plus - n_minus;
  sync_entries(r);
  return r;
}

FormalComplex kh_complex(const TangleDiagram& t, int mod) {
  return kh_normalize(build_cube(t, mod), t.n_plus(), t.n_minus());
}

bool verify_d_squared(const FormalComplex& c) {
  for (int k = 0; k + 1 < (int)c.d.size(); ++k)
    if (!mat_is_zero_reduced(mat_compose(c.d[k + 1], c.d[k]))) return false;
  return true;
}

std::vector<int> differential_degrees(const FormalComplex& c) {
  std::set<int> s;
  for (auto& m : c.d)
    for (auto& [ij, cob] : m.e)
      if (!cob.is_zero()) s.insert(degree(cob));
  return {s.begin(), s.end()};
}

// ----------------------------------------------------- planar composition

FormalComplex planar_compose_complexes(const PlanarArcDiagram& d,
                                       const std::vector<FormalComplex>& parts) {
  return planar_compose_complexes(d, parts, nullptr);
}

namespace {

using Tuple = std::vector<std::pair<int, int>>;  // per part (height, index)

void enumerate_tuples(const std::vector<FormalComplex>& parts, int r,
                      std::vector<Tuple>& out) {
  int np = (int)parts.size();
  std::vector<int> lo(np + 1, 0), hi(np + 1, 0);
  for (int i = np - 1; i >= 0; --i) {
    lo[i] = lo[i + 1] + parts[i].r0;
    hi[i] = hi[i + 1] + parts[i].r1();
  }
  Tuple cur(np);
  std::vector<int> hs(np);
  // heights first (lexicographic), then objects
  std::function<void(int, int)> rec_h = [&](int i, int left) {
    if (i == np) {
      if (left != 0) return;
      std::function<void(int)> rec_o = [&](int k) {
        if (k == np) {
          out.push_back(cur);
          return;
        }
        int cnt = (int)parts[k].at(hs[k]).size();
        for (int o = 0; o < cnt; ++o) {
          cur[k] = {hs[k], o};
          rec_o(k + 1);
        }
      };
      rec_o(0);
      return;
    }
    for (int h = parts[i].r0; h <= parts[i].r1(); ++h) {
      int rest = left - h;
      if (rest < lo[i + 1] || rest > hi[i + 1]) continue;
      hs[i] = h;
      rec_h(i + 1, rest);
    }
  };
  rec_h(0, r);
}

}  // namespace

FormalComplex planar_compose_complexes(const PlanarArcDiagram& d,
                                       const std::vector<FormalComplex>& parts,
                                       CompositeIndex* idx) {
  int np = (int)parts.size();
  if (np != (int)d.holes.size()) throw CobError("arity mismatch");
  FormalComplex c;
  c.npts = d.nout;
  c.mod = np ? parts[0].mod : 0;
  int r0 = 0, r1 = 0;
  bool with_bits = true;
  for (auto& p : parts) {
    r0 += p.r0;
    r1 += p.r1();
    c.xids.insert(c.xids.end(), p.xids.begin(), p.xids.end());
    with_bits &= p.bits.size() == p.obj.size();
  }
  c.r0 = r0;
  int nh = r1 - r0 + 1;
  c.obj.resize(nh);
  if (with_bits) c.bits.resize(nh);
  c.d.resize(std::max(nh - 1, 0));
  std::vector<std::vector<Tuple>> tuples(nh);
  std::map<Tuple, int> where;
  for (int k = 0; k < nh; ++k) {
    enumerate_tuples(parts, r0 + k, tuples[k]);
    for (int o = 0; o < (int)tuples[k].size(); ++o) {
      const Tuple& tp = tuples[k][o];
      where[tp] = o;
      std::vector<Smoothing> sm;
      std::vector<int> bits;
      for (int i = 0; i < np; ++i) {
        sm.push_back(parts[i].at(tp[i].first)[tp[i].second]);
        if (with_bits) {
          auto& b = parts[i].bits[tp[i].first - parts[i].r0][tp[i].second];
          bits.insert(bits.end(), b.begin(), b.end());
        }
      }
      c.obj[k].push_back(glue_smoothings(d, sm).s);
      if (with_bits) c.bits[k].push_back(bits);
      if (idx) {
        idx->of[{r0 + k, o}] = tp;
        idx->inv[tp] = {r0 + k, o};
      }
    }
  }
  // part differentials indexed by source column
  std::vector<std::map<int, std::map<int, std::vector<std::pair<int, const Cobordism*>>>>>
      dcol(np);
  for (int i = 0; i < np; ++i)
    for (int k = 0; k < (int)parts[i].d.size(); ++k)
      for (auto& [ij, cob] : parts[i].d[k].e)
        dcol[i][parts[i].r0 + k][ij.second].push_back({ij.first, &cob});
  for (int k = 0; k + 1 < nh; ++k) {
    c.d[k].rows = (int)c.obj[k + 1].size();
    c.d[k].cols = (int)c.obj[k].size();
    for (int o = 0; o < (int)tuples[k].size(); ++o) {
      const Tuple& tp = tuples[k][o];
      int before = 0;
      for (int i = 0; i < np; ++i) {
        int h = tp[i].first;
        auto hit = dcol[i].find(h);
        if (hit != dcol[i].end()) {
          auto cit = hit->second.find(tp[i].second);
          if (cit != hit->second.end()) {
            for (auto& [row, cob] : cit->second) {
              std::vector<Cobordism> pcs;
              for (int j = 0; j < np; ++j)
                pcs.push_back(j == i ? *cob
                                     : identity(parts[j].at(tp[j].first)[tp[j].second],
                                                c.mod));
              Cobordism e = planar_compose(d, pcs);
              Tuple t2 = tp;
              t2[i] = {h + 1, row};
              int target = where.at(t2);
              c.d[k].add(target, o, before % 2 ? -e : e);
            }
          }
        }
        before += h;
      }
    }
  }
  return c;
}

ChainMap planar_compose_maps(const PlanarArcDiagram& d,
                             const std::vector<ChainMap>& maps,
                             std::shared_ptr<const FormalComplex> src,
                             std::shared_ptr<const FormalComplex> tgt) {
  int np = (int)maps.size();
  std::vector<FormalComplex> sp, tp;
  for (auto& m : maps) {
    if (m.deg != 0) throw CobError("planar composition needs degree-0 maps");
    sp.push_back(*m.src);
    tp.push_back(*m.tgt);
  }
  CompositeIndex si, ti;
  {
    // recompute index tables only (objects already in src/tgt)
    for (int r = src->r0; r <= src->r1(); ++r) {
      std::vector<Tuple> tl;
      enumerate_tuples(sp, r, tl);
      for (int o = 0; o < (int)tl.size(); ++o) si.of[{r, o}] = tl[o];
    }
    for (int r = tgt->r0; r <= tgt->r1(); ++r) {
      std::vector<Tuple> tl;
      enumerate_tuples(tp, r, tl);
      for (int o = 0; o < (int)tl.size(); ++o) ti.inv[tl[o]] = {r, o};
    }
  }
  ChainMap f;
  f.src = src;
  f.tgt = tgt;
  f.deg = 0;
  // per part, per height, entries by column
  std::vector<std::map<int, std::map<int, std::vector<std::pair<int, const Cobordism*>>>>>
      mcol(np);
  for (int i = 0; i < np; ++i)
    for (auto& [h, m] : maps[i].maps)
      for (auto& [ij, cob] : m.e) mcol[i][h][ij.second].push_back({ij.first, &cob});
  for (auto& [key, tpl] : si.of) {
    auto [r, o] = key;
    // product over parts of their column entries
    std::vector<const std::vector<std::pair<int, const Cobordism*>>*> lists(np);
    bool empty = false;
    for (int i = 0; i < np && !empty; ++i) {
      auto hit = mcol[i].find(tpl[i].first);
      if (hit == mcol[i].end()) {
        empty = true;
        break;
      }
      auto cit = hit->second.find(tpl[i].second);
      if (cit == hit->second.end()) empty = true;
      else lists[i] = &cit->second;
    }
    if (empty) continue;
    std::vector<size_t> ix(np, 0);
    while (true) {
      std::vector<Cobordism> pcs;
      Tuple t2 = tpl;
      for (int i = 0; i < np; ++i) {
        auto& [row, cob] = (*lists[i])[ix[i]];
        pcs.push_back(*cob);
        t2[i] = {tpl[i].first, row};
      }
      Cobordism e = planar_compose(d, pcs);
      auto [tr, to] = ti.inv.at(t2);
      auto& m = f.maps[r];
      m.rows = (int)tgt->at(tr).size();
      m.cols = (int)src->at(r).size();
      e.top = src->at(r)[o];
      e.bottom = tgt->at(tr)[to];
      m.add(to, o, e);
      int i = 0;
      while (i < np && ++ix[i] == lists[i]->size()) ix[i++] = 0;
      if (i == np) break;
    }
  }
  return f;
}

// ------------------------------------------------------------------ cones

FormalComplex cone(const ChainMap& psi) {
  if (psi.deg != 0) throw CobError("cone needs a degree-0 map");
  const FormalComplex& A = *psi.src;
  const FormalComplex& B = *psi.tgt;
  FormalComplex c;
  c.npts = A.npts;
  c.mod = A.mod;
  int lo = std::min(A.r0 - 1, B.r0), hi = std::max(A.r1() - 1, B.r1());
  c.r0 = lo;
  int nh = hi - lo + 1;
  c.obj.resize(nh);
  c.d.resize(std::max(nh - 1, 0));
  for (int k = 0; k < nh; ++k) {
    int r = lo + k;
    for (auto& o : A.at(r + 1)) c.obj[k].push_back(o);
    for (auto& o : B.at(r)) c.obj[k].push_back(o);
  }
  for (int k = 0; k + 1 < nh; ++k) {
    int r = lo + k;
    int a0 = (int)A.at(r + 1).size(), a1 = (int)A.at(r + 2).size();
    CobMatrix& m = c.d[k];
    m.rows = (int)c.obj[k + 1].size();
    m.cols = (int)c.obj[k].size();
    for (auto& [ij, cob] : A.diff(r + 1).e) m.add(ij.first, ij.second, -cob);
    if (auto* p = psi.at(r + 1))
      for (auto& [ij, cob] : p->e) m.add(a1 + ij.first, ij.second, cob);
    for (auto& [ij, cob] : B.diff(r).e) m.add(a1 + ij.first, a0 + ij.second, cob);
  }
  return c;
}

// ------------------------------------------------------------- chain maps

std::shared_ptr<const FormalComplex> share(FormalComplex c) {
  return std::make_shared<const FormalComplex>(std::move(c));
}

ChainMap identity_map(std::shared_ptr<const FormalComplex> c) {
  ChainMap f;
  f.src = c;
  f.tgt = c;
  for (int r = c->r0; r <= c->r1(); ++r) {
    CobMatrix m;
    m.rows = m.cols = (int)c->at(r).size();
    for (int k = 0; k < m.rows; ++k) m.add(k, k, identity(c->at(r)[k], c->mod));
    f.maps[r] = std::move(m);
  }
  return f;
}

ChainMap zero_map(std::shared_ptr<const FormalComplex> s,
                  std::shared_ptr<const FormalComplex> t, int deg) {
  ChainMap f;
  f.src = std::move(s);
  f.tgt = std::move(t);
  f.deg = deg;
  return f;
}

ChainMap map_compose(const ChainMap& g, const ChainMap& f) {
  ChainMap h;
  h.src = f.src;
  h.tgt = g.tgt;
  h.deg = f.deg + g.deg;
  for (auto& [r, fm] : f.maps) {
    auto* gm = g.at(r + f.deg);
    if (!gm) continue;
    CobMatrix m = mat_compose(*gm, fm);
    if (!m.is_zero()) h.maps[r] = std::move(m);
  }
  return h;
}

ChainMap map_add(const ChainMap& a, const ChainMap& b, Coef kb) {
  if (a.deg != b.deg) throw CobError("adding maps of different degrees");
  ChainMap r = a;
  for (auto& [h, m] : b.maps) {
    CobMatrix cur = r.get(h);
    CobMatrix s = mat_add(cur, m, kb);
    if (s.is_zero()) r.maps.erase(h);
    else r.maps[h] = std::move(s);
  }
  return r;
}

ChainMap map_scale(const ChainMap& a, Coef k) {
  ChainMap r = a;
  for (auto& [h, m] : r.maps) m = mat_scale(m, k);
  return r;
}

ChainMap map_reduce(const ChainMap& a) {
  ChainMap r = a;
  for (auto& [h, m] : r.maps) m = mat_reduce(m);
  return r;
}

bool map_is_zero_reduced(const ChainMap& a) {
  for (auto& [h, m] : a.maps)
    if (!mat_is_zero_reduced(m)) return false;
  return true;
}

bool maps_equal_reduced(const ChainMap& a, const ChainMap& b) {
  return map_is_zero_reduced(map_add(a, b, -1));
}

ChainMap differential_map(std::shared_ptr<const FormalComplex> c) {
  ChainMap f;
  f.src = c;
  f.tgt = c;
  f.deg = 1;
  for (int k = 0; k < (int)c->d.size(); ++k)
    if (!c->d[k].is_zero()) f.maps[c->r0 + k] = c->d[k];
  return f;
}

bool is_chain_map(const ChainMap& f) {
  ChainMap ds = differential_map(f.src), dt = differential_map(f.tgt);
  ChainMap l = map_compose(dt, f), r = map_compose(f, ds);
  return maps_equal_reduced(l, f.deg % 2 ? map_scale(r, -1) : r);
}

std::vector<int> map_degrees(const ChainMap& f) {
  std::set<int> s;
  for (auto& [h, m] : f.maps)
    for (auto& [ij, cob] : m.e)
      if (!cob.is_zero()) s.insert(degree(cob));
  return {s.begin(), s.end()};
}

// ------------------------------------------------------------ isomorphism

std::optional<ChainMap> cube_isomorphism(std::shared_ptr<const FormalComplex> a,
                                         std::shared_ptr<const FormalComplex> b) {
  if (a->r0 != b->r0 || a->obj.size() != b->obj.size()) return std::nullopt;
  if (a->bits.size() != a->obj.size() || b->bits.size() != b->obj.size())
    return std::nullopt;
  std::vector<int> ax = a->xids, bx = b->xids;
  {
    auto sa = ax, sb = bx;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  auto key = [](const std::vector<int>& xids, const std::vector<int>& bits) {
    std::map<int, int> m;
    for (size_t i = 0; i < xids.size(); ++i) m[xids[i]] = bits[i];
    std::vector<int> v;
    for (auto& [x, bit] : m) v.push_back(bit);
    return v;
  };
  std::map<std::vector<int>, std::pair<int, int>> bpos;
  for (int k = 0; k < (int)b->obj.size(); ++k)
    for (int o = 0; o < (int)b->obj[k].size(); ++o)
      bpos[key(bx, b->bits[k][o])] = {k, o};
  // object map a (k, o) -> b index
  std::vector<std::vector<int>> to(a->obj.size());
  for (int k = 0; k < (int)a->obj.size(); ++k) {
    if (a->obj[k].size() != b->obj[k].size()) return std::nullopt;
    for (int o = 0; o < (int)a->obj[k].size(); ++o) {
      auto it = bpos.find(key(ax, a->bits[k][o]));
      if (it == bpos.end() || it->second.first != k) return std::nullopt;
      int bo = it->second.second;
      const Smoothing& sa = a->obj[k][o];
      const Smoothing& sb = b->obj[k][bo];
      if (!(sa == sb) || sa.ctag != sb.ctag) return std::nullopt;
      to[k].push_back(bo);
    }
  }
  // signs by search over the edges
  std::vector<std::vector<int>> sign(a->obj.size());
  for (int k = 0; k < (int)a->obj.size(); ++k)
    sign[k].assign(a->obj[k].size(), 0);
  struct Edge {
    int k, from, to, ratio;
  };
  std::vector<std::vector<std::vector<std::pair<std::pair<int, int>, int>>>> adj(
      a->obj.size());
  for (int k = 0; k < (int)a->obj.size(); ++k) adj[k].resize(a->obj[k].size());
  size_t nb_entries = 0, na_entries = 0;
  for (auto& m : b->d) nb_entries += m.e.size();
  for (int k = 0; k < (int)a->d.size(); ++k) {
    const CobMatrix& db = b->d[k];
    for (auto& [ij, cob] : a->d[k].e) {
      ++na_entries;
      int i = ij.first, j = ij.second;
      auto it = db.e.find({to[k + 1][i], to[k][j]});
      if (it == db.e.end()) return std::nullopt;
      Cobordism ca = simplify(cob), cb = simplify(it->second);
      int ratio;
      if (ca.terms == cb.terms) ratio = 1;
      else if ((-ca).terms == cb.terms) ratio = -1;
      else return std::nullopt;
      adj[k][j].push_back({{k + 1, i}, ratio});
      adj[k + 1][i].push_back({{k, j}, ratio});
    }
  }
  if (na_entries != nb_entries) return std::nullopt;
  for (int k0 = 0; k0 < (int)a->obj.size(); ++k0)
    for (int o0 = 0; o0 < (int)a->obj[k0].size(); ++o0) {
      if (sign[k0][o0]) continue;
      sign[k0][o0] = 1;
      std::deque<std::pair<int, int>> q = {{k0, o0}};
      while (!q.empty()) {
        auto [k, o] = q.front();
        q.pop_front();
        for (auto& [nb, ratio] : adj[k][o]) {
          int want = sign[k][o] * ratio;
          int& s = sign[nb.first][nb.second];
          if (s == 0) {
            s = want;
            q.push_back(nb);
          } else if (s != want) {
            return std::nullopt;
          }
        }
      }
    }
  ChainMap f;
  f.src = a;
  f.tgt = b;
  for (int k = 0; k < (int)a->obj.size(); ++k) {
    CobMatrix m;
    m.rows = m.cols = (int)a->obj[k].size();
    for (int o = 0; o < m.cols; ++o) {
      Cobordism id = identity(a->obj[k][o], a->mod);
      id.bottom = b->obj[k][to[k][o]];
      m.add(to[k][o], o, sign[k][o] < 0 ? -id : id);
    }
    f.maps[a->r0 + k] = std::move(m);
  }
  return f;
}

// ------------------------------------------------------------------- json

nlohmann::json to_json(const FormalComplex& c) {
  nlohmann::json j;
  j["r0"] = c.r0;
  j["npts"] = c.npts;
  j["mod"] = c.mod;
  nlohmann::json objs = nlohmann::json::array();
  for (int k = 0; k < (int)c.obj.size(); ++k) {
    nlohmann::json lvl = nlohmann::json::array();
    for (int o = 0; o < (int)c.obj[k].size(); ++o) {
      nlohmann::json s = to_json(c.obj[k][o]);
      if (k < (int)c.bits.size()) s["bits"] = c.bits[k][o];
      lvl.push_back(s);
    }
    objs.push_back(lvl);
  }
  j["objects"] = objs;
  nlohmann::json ds = nlohmann::json::array();
  for (auto& m : c.d) {
    nlohmann::json trip = nlohmann::json::array();
    for (auto& [ij, cob] : m.e) {
      nlohmann::json terms = to_json(cob)["terms"];
      trip.push_back({ij.first, ij.second, terms});
    }
    ds.push_back(trip);
  }
  j["diffs"] = ds;
  return j;
}

}  // namespace kh
