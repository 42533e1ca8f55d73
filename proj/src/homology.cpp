#include "kh/homology.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <climits>
#include <functional>
#include <mutex>
#include <sstream>

#include "kh/linalg.hpp"
#include "kh/parallel.hpp"

namespace kh {

std::string field_name(Field f) { return f == Field::Q ? "Q" : "F2"; }

int BettiTable::at(int r, int j) const {
  if (floor_j && j < *floor_j) j = *floor_j;
  auto it = b.find({r, j});
  return it == b.end() ? 0 : it->second;
}

int BettiTable::total() const {
  int s = 0;
  for (auto& [k, v] : b) s += v;
  return s;
}

namespace {

Coef constant_entry(const Poly& p, Field f, int mod) {
  if (!p.is_const()) throw std::invalid_argument("homology: polynomial entry");
  Coef v = p.constant();
  if (f == Field::F2) return coef_norm(v, 2);
  if (mod != 0) throw std::invalid_argument("homology: Q needs integer entries");
  return v;
}

// Block decomposition of every differential. key(q) selects the block.
struct Blocks {
  // per height: basis index -> (block key, index in block)
  std::vector<std::vector<std::pair<int, int>>> pos;
  // per height: block key -> size
  std::vector<std::map<int, int>> size;
};

template <class Key>
Blocks make_blocks(const AlgebraicComplex& c, Key key) {
  Blocks b;
  b.pos.resize(c.qdeg.size());
  b.size.resize(c.qdeg.size());
  for (size_t k = 0; k < c.qdeg.size(); ++k)
    for (int q : c.qdeg[k]) {
      int kk = key(q);
      b.pos[k].push_back({kk, b.size[k][kk]++});
    }
  return b;
}

// rank of d^k restricted to each block
std::vector<std::map<int, int>> block_ranks(const AlgebraicComplex& c,
                                            const Blocks& b, Field f,
                                            int threads) {
  struct Job {
    int k, key;
    int rows, cols;
    std::vector<Triplet> e;
  };
  std::vector<Job> jobs;
  for (size_t k = 0; k < c.d.size(); ++k) {
    std::map<int, size_t> idx;
    for (const auto& e : c.d[k].e) {
      auto [kc, ic] = b.pos[k][e.col];
      auto [kr, ir] = b.pos[k + 1][e.row];
      if (kc != kr) throw std::invalid_argument("homology: entry crosses blocks");
      Coef v = constant_entry(e.v, f, c.mod);
      if (!v) continue;
      auto it = idx.find(kc);
      if (it == idx.end()) {
        it = idx.emplace(kc, jobs.size()).first;
        auto sz = [&](size_t h) {
          auto s = b.size[h].find(kc);
          return s == b.size[h].end() ? 0 : s->second;
        };
        jobs.push_back({(int)k, kc, sz(k + 1), sz(k), {}});
      }
      jobs[it->second].e.push_back({ir, ic, v});
    }
  }
  std::vector<int> res(jobs.size());
  run_parallel(threads, jobs.size(), [&](size_t i) {
    const Job& j = jobs[i];
    res[i] = f == Field::Q ? rank_q(j.rows, j.cols, j.e)
                           : rank_f2(j.rows, j.cols, j.e);
  });
  std::vector<std::map<int, int>> out(c.d.size());
  for (size_t i = 0; i < jobs.size(); ++i) out[jobs[i].k][jobs[i].key] = res[i];
  return out;
}

}  // namespace

BettiTable betti(const AlgebraicComplex& c, Field f, int threads) {
  for (int d : entry_degrees(c))
    if (d != 0) throw std::invalid_argument("betti: differential not of degree 0");
  Blocks b = make_blocks(c, [](int q) { return q; });
  auto rk = block_ranks(c, b, f, threads);
  BettiTable t;
  t.field = field_name(f);
  auto get = [&](int k, int j) {
    if (k < 0 || k >= (int)rk.size()) return 0;
    auto it = rk[k].find(j);
    return it == rk[k].end() ? 0 : it->second;
  };
  for (size_t k = 0; k < c.qdeg.size(); ++k)
    for (auto [j, n] : b.size[k]) {
      int v = n - get((int)k, j) - get((int)k - 1, j);
      if (v) t.b[{c.r0 + (int)k, j}] = v;
    }
  return t;
}

int total_dimension(const AlgebraicComplex& c, Field f, int threads) {
  auto degs = entry_degrees(c);
  bool mod4 = std::all_of(degs.begin(), degs.end(), [](int d) { return d % 4 == 0; });
  auto key = [&](int q) { return mod4 ? ((q % 4) + 4) % 4 : 0; };
  Blocks b = make_blocks(c, key);
  auto rk = block_ranks(c, b, f, threads);
  int total = 0;
  for (size_t k = 0; k < c.qdeg.size(); ++k) total += (int)c.qdeg[k].size();
  for (auto& m : rk)
    for (auto [key2, r] : m) total -= 2 * r;
  return total;
}

BettiTable betti_b3(const FormalComplex& fc, int threads) {
  AlgebraicComplex c = specialize(apply_functor(spec_f3(), fc), 1);
  for (int d : entry_degrees(c))
    if (d < 0) throw std::invalid_argument("betti_b3: decreasing entry");
  int n = (int)c.qdeg.size();
  int jmax = INT_MIN, jmin = INT_MAX;
  for (auto& v : c.qdeg)
    for (int q : v) jmax = std::max(jmax, q), jmin = std::min(jmin, q);
  BettiTable t;
  t.field = "b3";
  if (jmax == INT_MIN) return t;
  // rank of d^k on the span of columns with q >= j, for every j
  std::vector<std::map<int, int>> rk(n);
  run_parallel(threads, c.d.size(), [&](size_t k) {
    const auto& q = c.qdeg[k];
    std::vector<std::vector<int>> cols(q.size());
    for (const auto& e : c.d[k].e)
      if (e.v.constant() & 1) cols[e.col].push_back(e.row);
    std::vector<int> order(q.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return q[a] > q[b]; });
    std::vector<std::vector<int>> sorted;
    for (int i : order) sorted.push_back(std::move(cols[i]));
    auto ind = independent_columns_f2(std::move(sorted));
    int cnt = 0;
    size_t p = 0;
    for (int j = jmax; j >= jmin; --j) {
      while (p < order.size() && q[order[p]] >= j) cnt += ind[p++];
      rk[k][j] = cnt;
    }
  });
  for (int k = 0; k < n; ++k) {
    std::vector<int> qs = c.qdeg[k];
    std::sort(qs.rbegin(), qs.rend());
    size_t p = 0;
    for (int j = jmax; j >= jmin; --j) {
      while (p < qs.size() && qs[p] >= j) ++p;
      int v = (int)p - (k < (int)c.d.size() ? rk[k][j] : 0) -
              (k > 0 ? rk[k - 1][j] : 0);
      if (v) t.b[{c.r0 + k, j}] = v;
    }
  }
  t.floor_j = jmin;
  return t;
}

BettiTable khovanov_betti(const TangleDiagram& t, Field f, int threads) {
  int mod = f == Field::F2 ? 2 : 0;
  return betti(apply_functor(spec_khovanov(mod), kh_complex(t, mod)), f, threads);
}

int lee_dimension(const TangleDiagram& t, int threads) {
  return total_dimension(apply_functor(spec_lee(), kh_complex(t)), Field::Q,
                         threads);
}

// ---------------------------------------------------------------- torsion

namespace {

// Invariant factors of a dense integer matrix.
std::vector<mpz_class> smith(std::vector<std::vector<mpz_class>> a) {
  int m = (int)a.size(), n = m ? (int)a[0].size() : 0;
  std::vector<mpz_class> out;
  int t = 0;
  while (t < m && t < n) {
    // smallest nonzero entry as pivot
    int pi = -1, pj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
    if (pi < 0) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    bool done = false;
    while (!done) {
      done = true;
      for (int i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q = a[i][t] / a[t][t];
        for (int j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          done = false;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q = a[t][j] / a[t][t];
        for (int i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          done = false;
        }
      }
      if (done) {
        // divisibility condition
        for (int i = t + 1; i < m && done; ++i)
          for (int j = t + 1; j < n && done; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (int jj = t; jj < n; ++jj) a[t][jj] += a[i][jj];
              done = false;
            }
      }
    }
    out.push_back(abs(a[t][t]));
    ++t;
  }
  return out;
}

}  // namespace

std::map<std::pair<int, int>, std::vector<mpz_class>> integral_torsion(
    const AlgebraicComplex& c) {
  if (c.mod != 0 || !c.var.empty())
    throw std::invalid_argument("integral_torsion: needs an integral complex");
  std::map<std::pair<int, int>, std::vector<mpz_class>> out;
  Blocks b = make_blocks(c, [](int q) { return q; });
  for (size_t k = 0; k < c.d.size(); ++k) {
    std::map<int, std::vector<std::vector<mpz_class>>> mats;
    for (auto [j, n] : b.size[k]) {
      auto it = b.size[k + 1].find(j);
      int rows = it == b.size[k + 1].end() ? 0 : it->second;
      if ((int64_t)rows * n > 4000000)
        throw std::invalid_argument("integral_torsion: block too large");
      mats[j].assign(rows, std::vector<mpz_class>(n));
    }
    for (const auto& e : c.d[k].e) {
      auto [j, ic] = b.pos[k][e.col];
      mats[j][b.pos[k + 1][e.row].second][ic] = (long)e.v.constant();
    }
    for (auto& [j, m] : mats) {
      std::vector<mpz_class> tors;
      for (auto& f : smith(m))
        if (f > 1) tors.push_back(f);
      if (!tors.empty()) out[{c.r0 + (int)k + 1, j}] = tors;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Laurent

LaurentPoly LaurentPoly::mono(int e, Coef c) {
  LaurentPoly p;
  if (c) p.t[e] = c;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (auto [e, c] : o.t) {
    Coef v = (t[e] += c);
    if (!v) t.erase(e);
  }
  return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  return r += o;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  return *this + o * -1;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto [e1, c1] : t)
    for (auto [e2, c2] : o.t) r += mono(e1 + e2, c1 * c2);
  return r;
}

LaurentPoly LaurentPoly::operator*(Coef k) const {
  LaurentPoly r;
  if (k)
    for (auto [e, c] : t) r.t[e] = c * k;
  return r;
}

std::string LaurentPoly::str(const std::string& var) const {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    auto [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Coef a = c < 0 ? -c : c;
    if (e == 0 || a != 1) os << a;
    if (e != 0) {
      os << var;
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

LaurentPoly qint() { return LaurentPoly::mono(1) + LaurentPoly::mono(-1); }

namespace {

LaurentPoly qint_pow(int n) {
  static std::vector<LaurentPoly> cache{LaurentPoly::mono(0)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  while ((int)cache.size() <= n) cache.push_back(cache.back() * qint());
  return cache[n];
}

std::string match_str(const std::vector<int>& m) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (size_t i = 0; i < m.size(); ++i)
    if ((int)i < m[i]) {
      if (!first) os << " ";
      first = false;
      os << i << "-" << m[i];
    }
  os << "]";
  return os.str();
}

}  // namespace

std::string skein_str(const SkeinElement& s) {
  std::ostringstream os;
  bool first = true;
  for (auto& [m, p] : s) {
    if (!first) os << "\n";
    first = false;
    os << "(" << p.str() << ") " << match_str(m);
  }
  if (first) os << "0";
  return os.str();
}

LaurentPoly graded_euler(const AlgebraicComplex& c) {
  LaurentPoly p;
  for (size_t k = 0; k < c.qdeg.size(); ++k) {
    Coef sign = ((c.r0 + (int)k) % 2 == 0) ? 1 : -1;
    for (int q : c.qdeg[k]) p += LaurentPoly::mono(q, sign);
  }
  return p;
}

SkeinElement skein_class(const FormalComplex& c) {
  SkeinElement s;
  for (size_t k = 0; k < c.obj.size(); ++k) {
    Coef sign = ((c.r0 + (int)k) % 2 == 0) ? 1 : -1;
    for (const auto& o : c.obj[k]) {
      auto& v = s[o.match];
      v += LaurentPoly::mono(o.shift, sign) * qint_pow(o.ncirc);
    }
  }
  std::erase_if(s, [](const auto& kv) { return kv.second.is_zero(); });
  return s;
}

LaurentPoly graded_euler(const FormalComplex& c) {
  if (c.npts != 0) throw std::invalid_argument("graded_euler: open tangle");
  auto s = skein_class(c);
  return s.empty() ? LaurentPoly{} : s.begin()->second;
}

SkeinElement jones_skein(const TangleDiagram& t) {
  int n = t.size();
  if (n > 24) throw std::invalid_argument("jones_skein: too many crossings");
  std::vector<int> labels = t.labels();
  std::map<int, int> id;
  for (int l : labels) id.emplace(l, (int)id.size());
  int k = (int)t.boundary.size();
  std::vector<char> on_boundary(id.size(), 0);
  for (int l : t.boundary) on_boundary[id.at(l)] = 1;
  SkeinElement out;
  std::vector<int> par(id.size());
  std::function<int(int)> find = [&](int x) {
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  };
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    std::iota(par.begin(), par.end(), 0);
    LaurentPoly coef = LaurentPoly::mono(0);
    for (int c = 0; c < n; ++c) {
      const auto& e = t.x[c].e;
      bool one = (mask >> c) & 1;
      auto join = [&](int a, int b) { par[find(id.at(a))] = find(id.at(b)); };
      if (!one) join(e[0], e[1]), join(e[2], e[3]);
      else join(e[0], e[3]), join(e[1], e[2]);
      // positive: q S0 - q^2 S1; negative: q^-1 S1 - q^-2 S0
      LaurentPoly f = t.x[c].positive
                          ? (one ? LaurentPoly::mono(2, -1) : LaurentPoly::mono(1))
                          : (one ? LaurentPoly::mono(-1) : LaurentPoly::mono(-2, -1));
      coef = coef * f;
    }
    std::set<int> bound_roots;
    for (int l : t.boundary) bound_roots.insert(find(id.at(l)));
    std::set<int> roots;
    for (size_t i = 0; i < id.size(); ++i) roots.insert(find((int)i));
    int circles = 0;
    for (int r : roots)
      if (!bound_roots.count(r)) ++circles;
    std::vector<int> match(k, -1);
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < k; ++q)
        if (q != p && find(id.at(t.boundary[p])) == find(id.at(t.boundary[q])))
          match[p] = q;
    out[match] += coef * qint_pow(circles);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

LaurentPoly jones_hat(const TangleDiagram& t) {
  if (!t.closed()) throw std::invalid_argument("jones_hat: open tangle");
  auto s = jones_skein(t);
  return s.empty() ? LaurentPoly{} : s.begin()->second;
}

std::optional<LaurentPoly> jones_standard(const LaurentPoly& hat) {
  LaurentPoly rem = hat, quo;
  while (!rem.is_zero()) {
    auto [e, c] = *rem.t.rbegin();
    LaurentPoly term = LaurentPoly::mono(e - 1, c);
    quo += term;
    rem = rem - term * qint();
    if (!rem.is_zero() && rem.t.rbegin()->first >= e)
      return std::nullopt;
    if (!rem.is_zero() && rem.t.rbegin()->first < (hat.t.begin()->first))
      return std::nullopt;
  }
  LaurentPoly j;
  for (auto [e, c] : quo.t) {
    if (e % 2) return std::nullopt;
    j.t[e / 2] = c;
  }
  return j;
}

// ---------------------------------------------------------------- output

std::string betti_grid(const std::vector<const BettiTable*>& tables) {
  int rmin = INT_MAX, rmax = INT_MIN, jtop = INT_MIN, jbot = INT_MAX;
  const BettiTable* b3 = nullptr;
  bool plain = false;
  for (auto* t : tables) {
    if (t->floor_j) b3 = t;
    else plain = true;
  }
  for (auto* t : tables)
    for (auto& [rj, v] : t->b) {
      rmin = std::min(rmin, rj.first);
      rmax = std::max(rmax, rj.first);
      jtop = std::max(jtop, rj.second);
      if (!t->floor_j || !plain) jbot = std::min(jbot, rj.second);
    }
  if (rmin == INT_MAX) return "(zero)\n";
  auto box = [&](int r, int j) {
    std::string s;
    bool any = false;
    for (size_t i = 0; i < tables.size(); ++i) {
      int v = tables[i]->at(r, j);
      any |= v != 0;
      s += (i ? "," : "") + std::to_string(v);
    }
    return any ? s : std::string();
  };
  std::vector<std::string> rowlab;
  std::vector<std::vector<std::string>> cells;
  // rows step by 2 following the parity of jtop
  for (int j = jtop; j >= jbot; j -= 2) {
    rowlab.push_back(std::to_string(j));
    std::vector<std::string> row;
    for (int r = rmin; r <= rmax; ++r) row.push_back(box(r, j));
    cells.push_back(row);
  }
  if (b3) {
    rowlab.push_back("<" + std::to_string(jbot));
    std::vector<std::string> row;
    for (int r = rmin; r <= rmax; ++r) row.push_back(box(r, jbot - 2));
    cells.push_back(row);
  }
  size_t w = 3, lw = 4;
  for (auto& row : cells)
    for (auto& s : row) w = std::max(w, s.size());
  for (auto& l : rowlab) lw = std::max(lw, l.size());
  std::ostringstream os;
  auto pad = [](const std::string& s, size_t n) {
    return std::string(n - std::min(n, s.size()), ' ') + s;
  };
  os << pad("j\\r", lw);
  for (int r = rmin; r <= rmax; ++r) os << " | " << pad(std::to_string(r), w);
  os << "\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    os << pad(rowlab[i], lw);
    for (auto& s : cells[i]) os << " | " << pad(s, w);
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const BettiTable& t) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& [rj, v] : t.b) a.push_back({rj.first, rj.second, v});
  return a;
}

nlohmann::json to_json(const LaurentPoly& p) {
  nlohmann::json a = nlohmann::json::array();
  for (auto [e, c] : p.t) a.push_back({e, c});
  return a;
}

}  // namespace kh
