#include "kh/movies.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "kh/parallel.hpp"
#include "kh/tqft.hpp"

namespace kh {

namespace {

using CPtr = std::shared_ptr<const FormalComplex>;

ChainMap make_map(CPtr s, CPtr t, std::map<int, CobMatrix> m) {
  ChainMap f;
  f.src = std::move(s);
  f.tgt = std::move(t);
  for (auto& [r, x] : m)
    if (!x.is_zero()) f.maps[r] = std::move(x);
  return f;
}

CobMatrix identity_block(const std::vector<Smoothing>& v, int mod) {
  CobMatrix m;
  m.rows = m.cols = (int)v.size();
  for (int k = 0; k < m.rows; ++k) m.add(k, k, identity(v[k], mod));
  return m;
}

Cobordism retag(Cobordism c, const Smoothing& top, const Smoothing& bottom) {
  c.top = top;
  c.bottom = bottom;
  return c;
}

// Remove circle `ci` from s: cup (with `dots` dots) and its reverse.
Smoothing drop_circle(const Smoothing& s, int ci, int sh) {
  Smoothing t = s;
  t.ncirc -= 1;
  if ((int)t.ctag.size() > ci) t.ctag.erase(t.ctag.begin() + ci);
  t.shift += sh;
  return t;
}

Cobordism circle_cup(const Smoothing& s, const Smoothing& t, int ci, int dots,
                     int mod) {
  int n = s.ncirc;
  std::vector<Component> parts;
  for (int i = 0; i < n; ++i) {
    if (i == ci) parts.push_back({{i}, 0, dots});
    else parts.push_back({{i, n + (i < ci ? i : i - 1)}, 0, 0});
  }
  return from_parts(s, t, parts, 1, mod);
}

Cobordism circle_cap(const Smoothing& t, const Smoothing& s, int ci, int dots,
                     int mod) {
  int n = s.ncirc, m = n - 1;
  std::vector<Component> parts;
  for (int i = 0; i < n; ++i) {
    if (i == ci) parts.push_back({{m + i}, 0, dots});
    else parts.push_back({{i < ci ? i : i - 1, m + i}, 0, 0});
  }
  return from_parts(t, s, parts, 1, mod);
}

// Identity-like entry: returns +1/-1 for +-identity, 0 otherwise.
int unit_sign(const Cobordism& c) {
  if (!c.top.same_shape(c.bottom) || c.top.shift != c.bottom.shift) return 0;
  Cobordism r = reduce(c);
  if (r.terms.size() != 1) return 0;
  Cobordism id = reduce(identity(c.top, c.mod));
  auto& [s, k] = *r.terms.begin();
  if (s != id.terms.begin()->first) return 0;
  Coef v = c.mod ? coef_norm(k, c.mod) : k;
  if (v == 1) return 1;
  if (v == -1 || (c.mod && v == c.mod - 1)) return -1;
  return 0;
}

struct Step {
  FormalComplex m;
  std::map<int, CobMatrix> f, g;  // m -> c and c -> m per height
};

Step deloop_step(const FormalComplex& c, int k, int o, int ci) {
  Step st;
  st.m = c;
  st.m.bits.clear();
  st.m.xids.clear();
  const Smoothing& S = c.obj[k][o];
  Smoothing up = drop_circle(S, ci, +1), dn = drop_circle(S, ci, -1);
  auto& ob = st.m.obj[k];
  ob.erase(ob.begin() + o);
  ob.insert(ob.begin() + o, {up, dn});
  int r = c.r0 + k;
  CobMatrix D, Di;  // c -> m, m -> c at height r
  D.rows = Di.cols = (int)ob.size();
  D.cols = Di.rows = (int)c.obj[k].size();
  for (int p = 0; p < (int)c.obj[k].size(); ++p) {
    if (p == o) continue;
    int q = p < o ? p : p + 1;
    D.add(q, p, identity(c.obj[k][p], c.mod));
    Di.add(p, q, identity(c.obj[k][p], c.mod));
  }
  D.add(o, o, circle_cup(S, up, ci, 1, c.mod));
  D.add(o + 1, o, circle_cup(S, dn, ci, 0, c.mod));
  Di.add(o, o, circle_cap(up, S, ci, 0, c.mod));
  Di.add(o, o + 1, circle_cap(dn, S, ci, 1, c.mod));
  if (k < (int)c.d.size()) st.m.d[k] = mat_reduce(mat_compose(c.d[k], Di));
  if (k > 0) st.m.d[k - 1] = mat_reduce(mat_compose(D, c.d[k - 1]));
  for (int h = 0; h < (int)c.obj.size(); ++h) {
    int rr = c.r0 + h;
    if (h == k) {
      st.f[rr] = Di;
      st.g[rr] = D;
    } else {
      st.f[rr] = identity_block(c.obj[h], c.mod);
      st.g[rr] = st.f[rr];
    }
  }
  (void)r;
  return st;
}

// Cancel the invertible entry d_k[j, i] (sign s).
Step eliminate_step(const FormalComplex& c, int k, int i, int j, int s) {
  Step st;
  st.m = c;
  st.m.bits.clear();
  st.m.xids.clear();
  const auto& A = c.obj[k];
  const auto& B = c.obj[k + 1];
  auto& MA = st.m.obj[k];
  auto& MB = st.m.obj[k + 1];
  MA.erase(MA.begin() + i);
  MB.erase(MB.begin() + j);
  auto na = [&](int p) { return p < i ? p : p - 1; };
  auto nb = [&](int p) { return p < j ? p : p - 1; };
  // phi^-1 : B[j] -> A[i]
  Cobordism phinv = retag(identity(A[i], c.mod), B[j], A[i]) * s;
  std::map<int, Cobordism> gamma, delta;  // gamma: A[i] -> B[l], delta: A[m] -> B[j]
  const CobMatrix& dk = c.d[k];
  for (auto& [ij, cob] : dk.e) {
    if (ij.second == i && ij.first != j) gamma[ij.first] = cob;
    if (ij.first == j && ij.second != i) delta[ij.second] = cob;
  }
  CobMatrix nd;
  nd.rows = (int)MB.size();
  nd.cols = (int)MA.size();
  for (auto& [ij, cob] : dk.e)
    if (ij.first != j && ij.second != i) nd.add(nb(ij.first), na(ij.second), cob);
  for (auto& [l, gl] : gamma)
    for (auto& [m, dm] : delta)
      nd.add(nb(l), na(m), -compose(gl, compose(phinv, dm)));
  st.m.d[k] = mat_reduce(nd);
  if (k > 0) {
    CobMatrix p;
    p.rows = (int)MA.size();
    p.cols = (int)c.obj[k - 1].size();
    for (auto& [ij, cob] : c.d[k - 1].e)
      if (ij.first != i) p.add(na(ij.first), ij.second, cob);
    st.m.d[k - 1] = p;
  }
  if (k + 1 < (int)c.d.size()) {
    CobMatrix p;
    p.rows = (int)c.obj[k + 2].size();
    p.cols = (int)MB.size();
    for (auto& [ij, cob] : c.d[k + 1].e)
      if (ij.second != j) p.add(ij.first, nb(ij.second), cob);
    st.m.d[k + 1] = p;
  }
  for (int h = 0; h < (int)c.obj.size(); ++h) {
    int rr = c.r0 + h;
    CobMatrix F, G;
    if (h == k) {
      F.rows = G.cols = (int)A.size();
      F.cols = G.rows = (int)MA.size();
      for (int m = 0; m < (int)A.size(); ++m) {
        if (m == i) continue;
        F.add(m, na(m), identity(A[m], c.mod));
        G.add(na(m), m, identity(A[m], c.mod));
        auto it = delta.find(m);
        if (it != delta.end()) F.add(i, na(m), -compose(phinv, it->second));
      }
    } else if (h == k + 1) {
      F.rows = G.cols = (int)B.size();
      F.cols = G.rows = (int)MB.size();
      for (int l = 0; l < (int)B.size(); ++l) {
        if (l == j) continue;
        F.add(l, nb(l), identity(B[l], c.mod));
        G.add(nb(l), l, identity(B[l], c.mod));
        auto it = gamma.find(l);
        if (it != gamma.end()) G.add(nb(l), j, -compose(it->second, phinv));
      }
    } else {
      F = identity_block(c.obj[h], c.mod);
      G = F;
    }
    st.f[rr] = mat_reduce(F);
    st.g[rr] = mat_reduce(G);
  }
  return st;
}

// Trims empty end heights so that complexes compare cleanly.
void apply_step(Retract& R, Step st) {
  CPtr cur = R.m;
  CPtr nm = share(std::move(st.m));
  ChainMap f = make_map(nm, cur, std::move(st.f));
  ChainMap g = make_map(cur, nm, std::move(st.g));
  R.f = map_reduce(map_compose(R.f, f));
  R.g = map_reduce(map_compose(g, R.g));
  R.m = nm;
}

std::optional<ChainMap> signed_iso(CPtr a, CPtr b,
                                   const std::vector<std::vector<int>>& to,
                                   const std::vector<std::vector<Cobordism>>& P) {
  const FormalComplex& A = *a;
  const FormalComplex& B = *b;
  int nh = (int)A.obj.size();
  std::vector<std::vector<int>> sign(nh);
  std::vector<std::vector<std::vector<std::pair<std::pair<int, int>, int>>>> adj(nh);
  for (int k = 0; k < nh; ++k) {
    sign[k].assign(A.obj[k].size(), 0);
    adj[k].resize(A.obj[k].size());
  }
  size_t na = 0, nb = 0;
  for (auto& m : B.d)
    for (auto& [ij, cob] : m.e)
      if (!reduce(cob).is_zero()) ++nb;
  for (int k = 0; k < (int)A.d.size(); ++k) {
    const CobMatrix& db = B.d[k];
    for (auto& [ij, cob] : A.d[k].e) {
      int i = ij.first, j = ij.second;
      Cobordism l = reduce(compose(P[k + 1][i], cob));
      if (l.is_zero()) continue;
      ++na;
      auto it = db.e.find({to[k + 1][i], to[k][j]});
      if (it == db.e.end()) return std::nullopt;
      Cobordism r = reduce(compose(it->second, P[k][j]));
      int ratio;
      if (l.terms == r.terms) ratio = 1;
      else if ((-l).terms == r.terms) ratio = -1;
      else return std::nullopt;
      adj[k][j].push_back({{k + 1, i}, ratio});
      adj[k + 1][i].push_back({{k, j}, ratio});
    }
  }
  if (na != nb) return std::nullopt;
  for (int k0 = 0; k0 < nh; ++k0)
    for (int o0 = 0; o0 < (int)A.obj[k0].size(); ++o0) {
      if (sign[k0][o0]) continue;
      sign[k0][o0] = 1;
      std::deque<std::pair<int, int>> q = {{k0, o0}};
      while (!q.empty()) {
        auto [k, o] = q.front();
        q.pop_front();
        for (auto& [nbr, ratio] : adj[k][o]) {
          int want = sign[k][o] * ratio;
          int& s = sign[nbr.first][nbr.second];
          if (s == 0) {
            s = want;
            q.push_back(nbr);
          } else if (s != want) {
            return std::nullopt;
          }
        }
      }
    }
  ChainMap f;
  f.src = a;
  f.tgt = b;
  for (int k = 0; k < nh; ++k) {
    CobMatrix m;
    m.rows = (int)B.obj[k].size();
    m.cols = (int)A.obj[k].size();
    for (int o = 0; o < m.cols; ++o) m.add(to[k][o], o, P[k][o] * sign[k][o]);
    if (!m.is_zero()) f.maps[A.r0 + k] = std::move(m);
  }
  return f;
}

// Drop empty heights at both ends.
FormalComplex trimmed(const FormalComplex& c) {
  FormalComplex t = c;
  while (!t.obj.empty() && t.obj.back().empty()) {
    t.obj.pop_back();
    if (!t.d.empty()) t.d.pop_back();
    if (!t.bits.empty()) t.bits.pop_back();
  }
  while (!t.obj.empty() && t.obj.front().empty()) {
    t.obj.erase(t.obj.begin());
    if (!t.d.empty()) t.d.erase(t.d.begin());
    if (!t.bits.empty()) t.bits.erase(t.bits.begin());
    ++t.r0;
  }
  return t;
}

}  // namespace

Retract simplify_complex(CPtr c) {
  Retract R;
  R.c = c;
  R.m = c;
  R.f = identity_map(c);
  R.g = identity_map(c);
  for (bool again = true; again;) {
    again = false;
    const FormalComplex& cur = *R.m;
    for (int k = 0; k < (int)cur.obj.size() && !again; ++k)
      for (int o = 0; o < (int)cur.obj[k].size() && !again; ++o)
        if (cur.obj[k][o].ncirc > 0) {
          apply_step(R, deloop_step(cur, k, o, cur.obj[k][o].ncirc - 1));
          again = true;
        }
  }
  for (bool again = true; again;) {
    again = false;
    const FormalComplex& cur = *R.m;
    for (int k = 0; k < (int)cur.d.size() && !again; ++k)
      for (auto& [ij, cob] : cur.d[k].e) {
        int s = unit_sign(cob);
        if (!s) continue;
        apply_step(R, eliminate_step(cur, k, ij.second, ij.first, s));
        again = true;
        break;
      }
  }
  // Trim empty heights.
  FormalComplex t = trimmed(*R.m);
  if (t.r0 != R.m->r0 || t.obj.size() != R.m->obj.size()) {
    CPtr tp = share(t);
    ChainMap f = R.f, g = R.g;
    f.src = tp;
    g.tgt = tp;
    R.f = f;
    R.g = g;
    R.m = tp;
  }
  return R;
}

std::optional<ChainMap> diagonal_isomorphism(CPtr a, CPtr b) {
  const FormalComplex& A = *a;
  const FormalComplex& B = *b;
  if (A.r0 != B.r0 || A.obj.size() != B.obj.size()) return std::nullopt;
  int nh = (int)A.obj.size();
  for (int k = 0; k < nh; ++k)
    if (A.obj[k].size() != B.obj[k].size()) return std::nullopt;
  // candidates per object
  std::vector<std::vector<int>> to(nh);
  std::vector<std::vector<Cobordism>> P(nh);
  std::vector<std::vector<char>> used(nh);
  for (int k = 0; k < nh; ++k) {
    to[k].assign(A.obj[k].size(), -1);
    P[k].resize(A.obj[k].size());
    used[k].assign(B.obj[k].size(), 0);
  }
  std::vector<std::pair<int, int>> order;
  for (int k = 0; k < nh; ++k)
    for (int o = 0; o < (int)A.obj[k].size(); ++o) order.push_back({k, o});
  std::optional<ChainMap> found;
  long budget = 20000;
  std::function<void(size_t)> rec = [&](size_t n) {
    if (found || budget <= 0) return;
    if (n == order.size()) {
      --budget;
      found = signed_iso(a, b, to, P);
      return;
    }
    auto [k, o] = order[n];
    const Smoothing& s = A.obj[k][o];
    for (int p = 0; p < (int)B.obj[k].size(); ++p) {
      if (used[k][p] || !(B.obj[k][p] == s)) continue;
      if (s.ncirc > 1) continue;  // circle pairing is ambiguous
      used[k][p] = 1;
      to[k][o] = p;
      P[k][o] = from_parts(s, B.obj[k][p],
                           s.ncirc ? std::vector<Component>{{{0, 1}, 0, 0}}
                                   : std::vector<Component>{},
                           1, A.mod);
      rec(n + 1);
      used[k][p] = 0;
      if (found) return;
    }
  };
  rec(0);
  return found;
}

std::optional<ChainMap> relabel_map(const TangleDiagram& a,
                                    const TangleDiagram& b, CPtr ka, CPtr kb) {
  auto iso = isomorphism(a, b);
  if (!iso) return std::nullopt;
  const FormalComplex& A = *ka;
  const FormalComplex& B = *kb;
  if (A.r0 != B.r0 || A.obj.size() != B.obj.size()) return std::nullopt;
  int n = a.size();
  std::map<std::vector<int>, std::pair<int, int>> bpos;
  for (int k = 0; k < (int)B.obj.size(); ++k)
    for (int o = 0; o < (int)B.obj[k].size(); ++o) bpos[B.bits[k][o]] = {k, o};
  int nh = (int)A.obj.size();
  std::vector<std::vector<int>> to(nh);
  std::vector<std::vector<Cobordism>> P(nh);
  for (int k = 0; k < nh; ++k)
    for (int o = 0; o < (int)A.obj[k].size(); ++o) {
      const auto& ba = A.bits[k][o];
      std::vector<int> bb(n);
      for (int i = 0; i < n; ++i) bb[iso->xperm[i]] = ba[i];
      auto it = bpos.find(bb);
      if (it == bpos.end() || it->second.first != k) return std::nullopt;
      int p = it->second.second;
      const Smoothing& sa = A.obj[k][o];
      const Smoothing& sb = B.obj[k][p];
      if (!(sa == sb)) return std::nullopt;
      auto cb = curve_of_labels(b, bb);
      std::vector<Component> parts;
      for (int c = 0; c < sa.ncirc; ++c) {
        int tgt = cb.at(iso->label.at(sa.ctag[c]));
        if (tgt < 0) return std::nullopt;
        parts.push_back({{c, sa.ncirc + tgt}, 0, 0});
      }
      to[k].push_back(p);
      P[k].push_back(from_parts(sa, sb, parts, 1, A.mod));
    }
  return signed_iso(ka, kb, to, P);
}

// ----------------------------------------------------------------- events

namespace {

FormalComplex with_xids(FormalComplex c, const std::vector<int>& xids) {
  c.xids = xids;
  return c;
}

// Local map Kh(before) -> Kh(after) between the two local tangles.
ChainMap local_map(Move mv, CPtr kb, CPtr ka) {
  switch (mv) {
    case Move::Cap:
    case Move::Cup:
    case Move::Saddle: {
      const Smoothing& sb = kb->obj.at(0).at(0);
      const Smoothing& sa = ka->obj.at(0).at(0);
      std::vector<Component> parts;
      if (mv == Move::Saddle) {
        Component all;
        for (int i = 0; i < curve_count(sb, sa); ++i) all.curves.push_back(i);
        parts.push_back(all);
      }
      CobMatrix m;
      m.rows = m.cols = 1;
      m.add(0, 0, from_parts(sb, sa, parts, 1, kb->mod));
      ChainMap f;
      f.src = kb;
      f.tgt = ka;
      f.maps[kb->r0] = m;
      return f;
    }
    default: {
      Retract rb = simplify_complex(kb), ra = simplify_complex(ka);
      auto iso = diagonal_isomorphism(rb.m, ra.m);
      if (!iso) throw CobError(move_name(mv) + ": minimal complexes do not match");
      return map_reduce(map_compose(ra.f, map_compose(*iso, rb.g)));
    }
  }
}

}  // namespace

EventResult event_map(const TangleDiagram& t, const MovieEvent& e, CPtr src) {
  MoveResult mr = apply_move(t, e.move, e.site);
  const Split& sp = mr.before_split;
  if (!src) src = share(kh_complex(t));
  CPtr tgt = share(kh_complex(mr.after));
  int nla = mr.local_after.size();
  std::vector<int> ax(nla), rx(sp.rest.size());
  std::iota(ax.begin(), ax.end(), 0);
  std::iota(rx.begin(), rx.end(), nla);
  CPtr kb = share(with_xids(kh_complex(sp.local), sp.local_x));
  CPtr ka = share(with_xids(kh_complex(mr.local_after), ax));
  CPtr krb = share(with_xids(kh_complex(sp.rest), sp.rest_x));
  CPtr kra = share(with_xids(kh_complex(sp.rest), rx));
  ChainMap loc = local_map(e.move, kb, ka);
  CPtr cs = share(planar_compose_complexes(sp.d, {*kb, *krb}));
  CPtr ct = share(planar_compose_complexes(sp.d, {*ka, *kra}));
  ChainMap idr = identity_map(krb);
  idr.tgt = kra;
  ChainMap glob = planar_compose_maps(sp.d, {loc, idr}, cs, ct);
  auto ib = cube_isomorphism(src, cs);
  auto ia = cube_isomorphism(ct, tgt);
  if (!ib || !ia) throw CobError("event: composite does not match the frame");
  EventResult r;
  r.after = mr.after;
  r.map = map_reduce(map_compose(*ia, map_compose(glob, *ib)));
  return r;
}

MovieResult evaluate_movie(const Movie& m) {
  MovieResult res;
  res.frames.push_back(m.start);
  CPtr cur = share(kh_complex(m.start));
  res.map = identity_map(cur);
  for (auto& e : m.events) {
    EventResult er = event_map(res.frames.back(), e, cur);
    res.map = map_reduce(map_compose(er.map, res.map));
    cur = er.map.tgt;
    res.frames.push_back(er.after);
  }
  return res;
}

// ------------------------------------------------------ algebraic checks

namespace {

struct QBlocks {
  AlgebraicComplex c;
  // per height r: q -> basis indices, and basis index -> position in block
  std::map<int, std::map<int, std::vector<int>>> idx;
  std::map<int, std::vector<int>> pos;
};

QBlocks blocks_of(const FormalComplex& f) {
  QBlocks b;
  b.c = apply_functor(spec_khovanov(), f);
  for (int r = b.c.r0; r <= b.c.r1(); ++r) {
    auto& q = b.c.qdeg[r - b.c.r0];
    auto& p = b.pos[r];
    p.resize(q.size());
    for (int i = 0; i < (int)q.size(); ++i) {
      auto& v = b.idx[r][q[i]];
      p[i] = (int)v.size();
      v.push_back(i);
    }
  }
  return b;
}

const std::vector<int>& indices(const QBlocks& b, int r, int j) {
  static const std::vector<int> none;
  auto it = b.idx.find(r);
  if (it == b.idx.end()) return none;
  auto jt = it->second.find(j);
  return jt == it->second.end() ? none : jt->second;
}

Coef entry_value(const Poly& p) {
  if (!p.is_const()) throw CobError("movie check: polynomial entry");
  return p.constant();
}

// Block of a matrix from height rs (columns) to height rt (rows) at q = j.
QMatrix dense_block(const PolyMatrix& m, const QBlocks& s, int rs,
                    const QBlocks& t, int rt, int j, int dq = 0) {
  auto& ci = indices(s, rs, j);
  auto& ri = indices(t, rt, j + dq);
  QMatrix out((int)ri.size(), (int)ci.size());
  if (ci.empty() || ri.empty()) return out;
  auto& qs = s.c.qdeg[rs - s.c.r0];
  auto& qt = t.c.qdeg[rt - t.c.r0];
  auto& ps = s.pos.at(rs);
  auto& pt = t.pos.at(rt);
  for (auto& e : m.e)
    if (qs[e.col] == j && qt[e.row] == j + dq)
      out(pt[e.row], ps[e.col]) += mpq_class(entry_value(e.v));
  return out;
}

QMatrix diff_block(const QBlocks& b, int r, int j) {
  if (r < b.c.r0 || r >= b.c.r1())
    return QMatrix((int)indices(b, r + 1, j).size(), (int)indices(b, r, j).size());
  return dense_block(b.c.d[r - b.c.r0], b, r, b, r + 1, j);
}

struct HomBasis {
  QMatrix basis;  // [boundaries | representatives]
  int nb = 0, k = 0;
};

HomBasis hom_basis(const QBlocks& b, int r, int j) {
  int n = (int)indices(b, r, j).size();
  QMatrix din = diff_block(b, r - 1, j);   // n x dim(r-1)
  QMatrix dout = diff_block(b, r, j);      // dim(r+1) x n
  QMatrix Z = dout.rows ? nullspace(dout) : QMatrix::identity(n);
  QMatrix Bm = din.cols ? din : QMatrix(n, 0);
  // basis of boundaries
  QMatrix bt = Bm;
  auto pb = rref(bt);
  (void)pb;
  QMatrix all = hcat(Bm, Z);
  QMatrix w = all;
  auto piv = rref(w);
  HomBasis h;
  std::vector<int> bcols, zcols;
  for (int c : piv) (c < Bm.cols ? bcols : zcols).push_back(c);
  h.nb = (int)bcols.size();
  h.k = (int)zcols.size();
  h.basis = QMatrix(n, h.nb + h.k);
  int col = 0;
  for (int c : bcols) {
    for (int i = 0; i < n; ++i) h.basis(i, col) = all(i, c);
    ++col;
  }
  for (int c : zcols) {
    for (int i = 0; i < n; ++i) h.basis(i, col) = all(i, c);
    ++col;
  }
  return h;
}

}  // namespace

std::map<std::pair<int, int>, QMatrix> homology_map(const ChainMap& f) {
  if (f.deg != 0) throw CobError("homology_map: degree-0 maps only");
  QBlocks s = blocks_of(*f.src), t = blocks_of(*f.tgt);
  auto F = apply_functor_map(spec_khovanov(), f);
  auto degs = map_degrees(f);
  if (degs.size() > 1) throw CobError("homology_map: map is not homogeneous");
  int dq = degs.empty() ? 0 : degs[0];
  std::map<std::pair<int, int>, QMatrix> out;
  for (auto& [r, qm] : s.idx)
    for (auto& [j, ix] : qm) {
      HomBasis hs = hom_basis(s, r, j);
      HomBasis ht = hom_basis(t, r, j + dq);
      if (hs.k == 0 && ht.k == 0) continue;
      QMatrix A(ht.k, hs.k);
      if (hs.k && ht.k && F.count(r)) {
        QMatrix Fb = dense_block(F.at(r), s, r, t, r, j, dq);
        QMatrix reps(hs.basis.rows, hs.k);
        for (int i = 0; i < hs.basis.rows; ++i)
          for (int c = 0; c < hs.k; ++c) reps(i, c) = hs.basis(i, hs.nb + c);
        QMatrix img = Fb * reps;
        auto x = solve(ht.basis, img);
        if (!x) throw CobError("homology_map: image is not a cycle");
        for (int i = 0; i < ht.k; ++i)
          for (int c = 0; c < hs.k; ++c) A(i, c) = (*x)(ht.nb + i, c);
      }
      out[{r, j}] = A;
    }
  return out;
}

int homology_sign(const ChainMap& f) {
  auto m = homology_map(f);
  int sign = 0;
  for (auto& [rj, A] : m) {
    if (A.rows != A.cols) return 0;
    QMatrix I = QMatrix::identity(A.rows);
    int s = A == I ? 1 : (A == mpq_class(-1) * I ? -1 : 0);
    if (s == 0 || (sign && s != sign)) return 0;
    sign = s;
  }
  return sign ? sign : 1;
}

int homology_relation(const ChainMap& a, const ChainMap& b) {
  auto ma = homology_map(a), mb = homology_map(b);
  if (ma.size() != mb.size()) return 0;
  bool eq = true, opp = true;
  for (auto& [rj, A] : ma) {
    auto it = mb.find(rj);
    if (it == mb.end()) return 0;
    eq &= A == it->second;
    opp &= A == mpq_class(-1) * it->second;
  }
  return eq ? 1 : (opp ? -1 : 0);
}

int homology_rank(const ChainMap& f) {
  int r = 0;
  for (auto& [rj, A] : homology_map(f)) r += rank(A);
  return r;
}

int homotopic_sign(const ChainMap& f, int threads) {
  if (f.deg != 0) throw CobError("homotopic_sign: degree-0 maps only");
  QBlocks b = blocks_of(*f.src);
  QBlocks bt = blocks_of(*f.tgt);
  if (b.c.qdeg != bt.c.qdeg || b.c.r0 != bt.c.r0)
    throw CobError("homotopic_sign: not an endomorphism");
  auto F = apply_functor_map(spec_khovanov(), f);
  std::set<int> qs;
  for (auto& [r, qm] : b.idx)
    for (auto& [j, ix] : qm) qs.insert(j);
  std::vector<int> js(qs.begin(), qs.end());
  std::vector<int> ok_plus(js.size(), 0), ok_minus(js.size(), 0);
  run_parallel(threads, js.size(), [&](size_t t) {
    int j = js[t];
    // unknowns: h^r : C^r -> C^{r-1}
    std::map<int, int> hoff;
    int nu = 0;
    for (int r = b.c.r0; r <= b.c.r1(); ++r) {
      hoff[r] = nu;
      nu += (int)indices(b, r, j).size() * (int)indices(b, r - 1, j).size();
    }
    std::vector<Triplet> A;
    std::vector<std::pair<int, int64_t>> rhs_id, rhs_f;
    int ne = 0;
    for (int r = b.c.r0; r <= b.c.r1(); ++r) {
      int n = (int)indices(b, r, j).size();
      int nm = (int)indices(b, r - 1, j).size();
      int np = (int)indices(b, r + 1, j).size();
      QMatrix dm = diff_block(b, r - 1, j);  // n x nm
      QMatrix dr = diff_block(b, r, j);      // np x n
      QMatrix Fr = F.count(r) ? dense_block(F.at(r), b, r, bt, r, j) : QMatrix(n, n);
      auto hv = [&](int rr, int a, int c, int ncols) {
        return hoff[rr] + a * ncols + c;  // h^rr (a in r-1, c in r)
      };
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          int eq = ne++;
          // (d h^r)(a, c) = sum_x dm(a, x) h^r(x, c)
          for (int x = 0; x < nm; ++x)
            if (dm(a, x) != 0)
              A.push_back({eq, hv(r, x, c, n), dm(a, x).get_num().get_si()});
          // (h^{r+1} d)(a, c) = sum_x h^{r+1}(a, x) dr(x, c)
          for (int x = 0; x < np; ++x)
            if (dr(x, c) != 0)
              A.push_back({eq, hv(r + 1, a, x, np), dr(x, c).get_num().get_si()});
          if (Fr(a, c) != 0) rhs_f.push_back({eq, Fr(a, c).get_num().get_si()});
          if (a == c) rhs_id.push_back({eq, 1});
        }
    }
    auto combo = [&](int sg) {
      std::map<int, int64_t> v;
      for (auto [i, x] : rhs_f) v[i] += x;
      for (auto [i, x] : rhs_id) v[i] -= sg * x;
      std::vector<std::pair<int, int64_t>> out;
      for (auto [i, x] : v)
        if (x) out.push_back({i, x});
      return out;
    };
    ok_plus[t] = in_column_span_q(ne, nu, A, combo(1));
    ok_minus[t] = in_column_span_q(ne, nu, A, combo(-1));
  });
  bool plus = std::all_of(ok_plus.begin(), ok_plus.end(), [](int x) { return x; });
  bool minus = std::all_of(ok_minus.begin(), ok_minus.end(), [](int x) { return x; });
  if (plus && !minus) return 1;
  if (minus && !plus) return -1;
  if (plus && minus) return 2;  // zero complex: both hold
  return 0;
}

// ------------------------------------------------------------ movie files

namespace {

std::string trim(const std::string& x) {
  size_t a = x.find_first_not_of(" \t\r"), b = x.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : x.substr(a, b - a + 1);
}

}  // namespace

MovieFile parse_movie(const std::string& text) {
  MovieFile mf;
  std::istringstream in(text);
  std::string line;
  bool want_frame = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("--", 0) == 0) {
      if (want_frame) throw DiagramError("movie: event without a frame before it");
      std::string body = trim(line.substr(2));
      std::string name = body, site;
      if (auto at = body.find('@'); at != std::string::npos) {
        name = trim(body.substr(0, at));
        site = body.substr(at + 1);
      }
      auto mv = move_from_name(name);
      if (!mv) throw DiagramError("movie: unknown move '" + name + "'");
      for (char& ch : site)
        if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
      std::istringstream ss(site);
      MovieEvent e{*mv, {}};
      int v;
      while (ss >> v) e.site.v.push_back(v);
      if (!ss.eof()) throw DiagramError("movie: bad site '" + site + "'");
      mf.events.push_back(e);
      want_frame = true;
      continue;
    }
    if (!want_frame && !mf.frames.empty())
      throw DiagramError("movie: two frames without an event between them");
    mf.frames.push_back(parse_pd(line));
    want_frame = false;
  }
  if (mf.frames.empty()) throw DiagramError("movie: no frames");
  if (mf.frames.size() != mf.events.size() + 1)
    throw DiagramError("movie: the last event has no frame after it");
  return mf;
}

std::string movie_text(const MovieResult& r, const std::vector<MovieEvent>& ev) {
  std::ostringstream os;
  for (size_t i = 0; i < r.frames.size(); ++i) {
    os << to_pd(r.frames[i]) << "\n";
    if (i < ev.size()) {
      os << "-- " << move_name(ev[i].move);
      if (!ev[i].site.v.empty()) {
        os << " @";
        for (int v : ev[i].site.v) os << " " << v;
      }
      os << "\n";
    }
  }
  return os.str();
}

ChainMap evaluate_movie_file(const MovieFile& m) {
  CPtr cur = share(kh_complex(m.frames[0]));
  ChainMap total = identity_map(cur);
  for (size_t i = 0; i < m.events.size(); ++i) {
    EventResult er = event_map(m.frames[i], m.events[i], cur);
    ChainMap step = er.map;
    if (!(er.after.x == m.frames[i + 1].x && er.after.loops == m.frames[i + 1].loops &&
          er.after.boundary == m.frames[i + 1].boundary)) {
      CPtr next = share(kh_complex(m.frames[i + 1]));
      auto iso = relabel_map(er.after, m.frames[i + 1], er.map.tgt, next);
      if (!iso)
        throw DiagramError("movie: frame " + std::to_string(i + 1) +
                           " does not match the result of event " +
                           std::to_string(i + 1));
      step = map_compose(*iso, step);
    }
    total = map_reduce(map_compose(step, total));
    cur = step.tgt;
  }
  return total;
}

// ---------------------------------------------------------- movie moves

namespace {

TangleDiagram hopf() { return parse_pd("PD[X[3,2,4,1],X[1,4,2,3]]"); }
TangleDiagram trefoil() { return parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]"); }
TangleDiagram figure_eight() {
  return parse_pd("PD[X[8,5,1,6],X[4,1,5,2],X[2,8,3,7],X[6,4,7,3]]");
}

std::optional<TangleDiagram> try_event(const TangleDiagram& t, const MovieEvent& e) {
  try {
    return apply_move(t, e.move, e.site).after;
  } catch (const DiagramError&) {
    return std::nullopt;
  }
}

std::vector<MovieEvent> events_of(const TangleDiagram& t, Move m) {
  std::vector<MovieEvent> out;
  for (auto& s : move_sites(t, m)) {
    if (m == Move::R2) {
      for (int v = 0; v < 4; ++v) {
        Site s2 = s;
        s2.v[2] = v;
        out.push_back({m, s2});
      }
    } else {
      out.push_back({m, s});
    }
  }
  return out;
}

bool undoes(const MovieEvent& prev, const MovieEvent& next) {
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if ((prev.move == Move::R1a || prev.move == Move::R1b) && next.move == Move::R1inv)
    return next.site.v[0] == 0;
  if (prev.move == Move::R2 && next.move == Move::R2inv)
    return sorted(next.site.v) == std::vector<int>{0, 1};
  if (prev.move == Move::R3 && next.move == Move::R3)
    return sorted(next.site.v) == std::vector<int>{0, 1, 2};
  return false;
}

TangleDiagram after_all(const Movie& m) {
  TangleDiagram t = m.start;
  for (auto& e : m.events) t = apply_move(t, e.move, e.site).after;
  return t;
}

int kink_loop_edge(const TangleDiagram& t, int c) {
  auto& e = t.x[c].e;
  for (int i = 0; i < 4; ++i)
    if (e[i] == e[(i + 1) % 4]) return e[i];
  return -1;
}

// Two different two-event clips from `start` with isomorphic end frames.
// `first` enumerates the first events, `second` the follow-ups; `key`
// gives a label that must differ between the two sides.
std::optional<std::pair<Movie, Movie>> two_paths(
    const TangleDiagram& start, const std::vector<MovieEvent>& first,
    const std::function<std::vector<MovieEvent>(const TangleDiagram&)>& second,
    const std::function<int(const std::vector<MovieEvent>&)>& key) {
  std::vector<std::pair<Movie, TangleDiagram>> ends;
  for (auto& e1 : first) {
    auto f1 = try_event(start, e1);
    if (!f1) continue;
    for (auto& e2 : second(*f1)) {
      auto f2 = try_event(*f1, e2);
      if (!f2) continue;
      Movie m{start, {e1, e2}};
      for (auto& [om, ot] : ends)
        if (key(om.events) != key(m.events) && isomorphic(ot, *f2))
          return std::make_pair(om, m);
      ends.push_back({m, *f2});
    }
  }
  return std::nullopt;
}

std::vector<MovieEvent> r1_events(const TangleDiagram& t) {
  auto a = events_of(t, Move::R1a), b = events_of(t, Move::R1b);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

// Clips following `pattern` (allowed moves per step) that return to a frame
// isomorphic to the start without undoing the previous event.
std::optional<Movie> find_circular_clip(const TangleDiagram& start,
                                   const std::vector<std::vector<Move>>& pattern) {
  std::vector<MovieEvent> ev;
  std::optional<Movie> found;
  std::function<void(const TangleDiagram&, size_t)> rec =
      [&](const TangleDiagram& t, size_t n) {
        if (found) return;
        if (n == pattern.size()) {
          if (isomorphic(t, start)) found = Movie{start, ev};
          return;
        }
        for (Move m : pattern[n])
          for (auto& e : events_of(t, m)) {
            if (!ev.empty() && undoes(ev.back(), e)) continue;
            auto nx = try_event(t, e);
            if (!nx) continue;
            if (n + 1 < pattern.size() && isomorphic(*nx, start)) continue;
            ev.push_back(e);
            rec(*nx, n + 1);
            ev.pop_back();
            if (found) return;
          }
      };
  rec(start, 0);
  return found;
}

MovieMoveInstance movie_move_instance(int k) {
  MovieMoveInstance in;
  in.k = k;
  auto need = [&](std::optional<Movie> m, const char* what) {
    if (!m) throw DiagramError(std::string("no instance found for ") + what);
    return *m;
  };
  auto with_kink = [] {
    TangleDiagram h = hopf();
    return apply_move(h, Move::R1a, {{h.labels()[0], 0}}).after;
  };
  switch (k) {
    case 1:
      in.description = "positive kink created and removed";
      in.left = Movie{hopf(), {{Move::R1a, {{hopf().labels()[0], 0}}},
                               {Move::R1inv, {{0}}}}};
      break;
    case 2:
      in.description = "bigon created and removed";
      in.left = Movie{trefoil(), {}};
      {
        auto ev = events_of(trefoil(), Move::R2);
        in.left.events = {ev.front(), {Move::R2inv, {{0, 1}}}};
      }
      break;
    case 3:
      in.description = "triangle move and its inverse";
      in.left = Movie{braid_closure(3, {1, 2, 1, 2}), {}};
      in.left.events = {events_of(in.left.start, Move::R3).front(),
                        {Move::R3, {{0, 1, 2}}}};
      break;
    case 4:
      in.description = "negative kink removed and recreated";
      {
        TangleDiagram h = hopf();
        TangleDiagram s = apply_move(h, Move::R1b, {{h.labels()[1], 1}}).after;
        in.left = need(find_circular_clip(s, {{Move::R1inv}, {Move::R1a, Move::R1b}}), "MM4");
      }
      break;
    case 5:
      in.description = "bigon removed and recreated";
      {
        TangleDiagram t = trefoil();
        TangleDiagram s = apply_move(t, Move::R2, events_of(t, Move::R2)[1].site).after;
        in.left = need(find_circular_clip(s, {{Move::R2inv}, {Move::R2}}), "MM5");
      }
      break;
    case 6:
      in.description = "bigon created, then a different bigon removed";
      in.left = need(find_circular_clip(hopf(), {{Move::R2}, {Move::R2inv}}), "MM6");
      break;
    case 7:
      in.description = "second kink created beside a kink, then the old kink removed";
      in.left = need(find_circular_clip(with_kink(), {{Move::R1a, Move::R1b}, {Move::R1inv}}),
                     "MM7");
      break;
    case 8:
      in.description = "kink slid through a bigon";
      in.left = need(find_circular_clip(hopf(), {{Move::R1a, Move::R1b},
                                            {Move::R2},
                                            {Move::R2inv},
                                            {Move::R1inv}}),
                     "MM8");
      break;
    case 9:
      in.description = "strand pushed across a crossing";
      in.left = need(find_circular_clip(trefoil(), {{Move::R2}, {Move::R3},
                                                    {Move::R3}, {Move::R2inv}}),
                     "MM9");
      break;
    case 10:
      in.description = "eight triangle moves around the half twist on four strands";
      in.left = need(find_circular_clip(braid_closure(4, {1, 2, 1, 3, 2, 1}),
                                   std::vector<std::vector<Move>>(8, {Move::R3})),
                     "MM10");
      break;
    case 11: {
      in.description = "circle born beside a strand and merged into it";
      TangleDiagram h = hopf();
      TangleDiagram c = apply_move(h, Move::Cap, {}).after;
      int loop = c.loops.back();
      in.left = Movie{h, {{Move::Cap, {}}, {Move::Saddle, {{h.labels()[0], loop}}}}};
      in.right = Movie{h, {}};
      break;
    }
    case 12: {
      in.description = "circle born and given a kink on either side";
      TangleDiagram h = hopf();
      TangleDiagram c = apply_move(h, Move::Cap, {}).after;
      int loop = c.loops.back();
      in.left = Movie{h, {{Move::Cap, {}}, {Move::R1a, {{loop, 0}}}}};
      in.right = Movie{h, {{Move::Cap, {}}, {Move::R1a, {{loop, 1}}}}};
      break;
    }
    case 13: {
      in.description = "kink on either of two strands, then a saddle through it";
      auto second = [](const TangleDiagram& t) {
        std::vector<MovieEvent> out;
        int lp = kink_loop_edge(t, 0);
        for (auto& e : events_of(t, Move::Saddle))
          if (e.site.v[0] == lp || e.site.v[1] == lp) out.push_back(e);
        return out;
      };
      auto key = [](const std::vector<MovieEvent>& ev) { return ev[0].site.v[0]; };
      auto p = two_paths(hopf(), r1_events(hopf()), second, key);
      if (!p) throw DiagramError("no instance found for MM13");
      in.left = p->first;
      in.right = p->second;
      break;
    }
    case 14: {
      in.description = "circle born on either side of a strand and pushed across it";
      TangleDiagram h = hopf();
      TangleDiagram c = apply_move(h, Move::Cap, {}).after;
      int loop = c.loops.back();
      std::vector<MovieEvent> first = {{Move::Cap, {}}};
      auto second = [loop](const TangleDiagram& t) {
        std::vector<MovieEvent> out;
        for (auto& e : events_of(t, Move::R2))
          if (e.site.v[0] == loop) out.push_back(e);
        return out;
      };
      auto key = [](const std::vector<MovieEvent>& ev) { return ev[1].site.v[2]; };
      auto p = two_paths(h, first, second, key);
      if (!p) throw DiagramError("no instance found for MM14");
      in.left = p->first;
      in.right = p->second;
      break;
    }
    case 15: {
      in.description = "strand pushed over either of two arcs, then a saddle of the arcs";
      TangleDiagram t = hopf();
      auto second = [](const TangleDiagram& f) {
        std::vector<MovieEvent> out;
        std::set<int> near;
        for (int c : {0, 1})
          for (int l : f.x[c].e) near.insert(l);
        for (auto& e : events_of(f, Move::Saddle))
          if (near.count(e.site.v[0]) && near.count(e.site.v[1])) out.push_back(e);
        return out;
      };
      auto key = [](const std::vector<MovieEvent>& ev) { return ev[0].site.v[1]; };
      std::vector<MovieEvent> first;
      for (auto& e : events_of(t, Move::R2))
        if (e.site.v[0] == t.labels()[0]) first.push_back(e);
      auto p = two_paths(t, first, second, key);
      if (!p) throw DiagramError("no instance found for MM15");
      in.left = p->first;
      in.right = p->second;
      break;
    }
    default:
      throw DiagramError("movie moves are numbered 1 to 15");
  }
  return in;
}

MovieMoveCheck check_movie_move(int k, int threads) {
  MovieMoveCheck r;
  r.k = k;
  MovieMoveInstance in = movie_move_instance(k);
  MovieResult L = evaluate_movie(in.left);
  std::ostringstream os;
  os << in.description << "; " << in.left.events.size() << " events";
  if (!in.right) {
    TangleDiagram last = L.frames.back();
    auto iso = relabel_map(last, in.left.start, L.map.tgt, L.map.src);
    if (!iso) throw CobError("movie move: clip is not circular");
    ChainMap self = map_reduce(map_compose(*iso, L.map));
    if (k <= 5) {
      r.sign = homotopic_sign(self, threads);
      os << ", homotopic to " << (r.sign == 1 ? "+1" : r.sign == -1 ? "-1" : "neither");
    } else {
      r.sign = homology_sign(self);
      os << ", homology map " << (r.sign == 1 ? "+id" : r.sign == -1 ? "-id" : "not +-id");
    }
    r.pass = r.sign == 1 || r.sign == -1;
  } else {
    MovieResult R = evaluate_movie(*in.right);
    ChainMap rmap = R.map;
    if (!in.right->events.empty() || !in.left.events.empty()) {
      auto iso = relabel_map(R.frames.back(), L.frames.back(), R.map.tgt, L.map.tgt);
      if (!iso) throw CobError("movie move: sides end in different frames");
      rmap = map_reduce(map_compose(*iso, R.map));
    }
    r.sign = homology_relation(L.map, rmap);
    int rk = homology_rank(L.map);
    os << ", " << in.right->events.size() << " events on the other side, sides "
       << (r.sign == 1 ? "equal" : r.sign == -1 ? "opposite" : "differ")
       << " on homology (rank " << rk << ")";
    r.pass = r.sign != 0 && rk > 0;
  }
  r.detail = os.str();
  return r;
}

}  // namespace kh
