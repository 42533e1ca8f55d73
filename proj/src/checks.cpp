#include "kh/checks.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "kh/corpus.hpp"
#include "kh/homology.hpp"
#include "kh/movies.hpp"

namespace kh {

namespace {

CheckResult result(std::string name, int fails, int total,
                   const std::string& first) {
  std::ostringstream os;
  os << total - fails << "/" << total << " ok";
  if (fails) os << "; first failure: " << first;
  return {std::move(name), fails == 0 && total > 0, os.str()};
}

struct Tally {
  int total = 0, fails = 0;
  std::string first;
  void operator()(bool ok, const std::string& what) {
    ++total;
    if (!ok && fails++ == 0) first = what;
  }
};

std::vector<std::pair<CorpusEntry, TangleDiagram>> small_corpus(int maxc) {
  std::vector<std::pair<CorpusEntry, TangleDiagram>> out;
  for (auto& e : corpus()) {
    auto t = parse_pd(e.pd);
    if (t.size() <= maxc) out.push_back({e, t});
  }
  return out;
}

// All set partitions of {0..n-1}.
void partitions(int n, int i, std::vector<std::vector<int>>& cur,
                std::vector<std::vector<std::vector<int>>>& out) {
  if (i == n) {
    out.push_back(cur);
    return;
  }
  for (size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(i);
    partitions(n, i + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({i});
  partitions(n, i + 1, cur, out);
  cur.pop_back();
}

const std::vector<std::vector<int>> kMatch4 = {{1, 0, 3, 2}, {3, 2, 1, 0}};

Smoothing boundary_smoothing(int kind, int circles) {
  Smoothing s = kind < 0 ? circles_only(circles) : arcs_only(kMatch4[kind]);
  if (kind >= 0) {
    s.ncirc = circles;
    s.ctag.assign(circles, INT_MAX);
  }
  return s;
}

Cobordism random_generator(std::mt19937_64& rng, const Smoothing& a,
                           const Smoothing& b) {
  int n = curve_count(a, b);
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<Component> parts;
  int i = 0;
  while (i < n) {
    int len = 1 + (int)(rng() % (n - i));
    Component c;
    c.curves.assign(ids.begin() + i, ids.begin() + i + len);
    c.genus = (int)(rng() % 2);
    c.dots = (int)(rng() % 2);
    parts.push_back(c);
    i += len;
  }
  if (rng() % 3 == 0) parts.push_back({{}, (int)(rng() % 2), (int)(rng() % 2)});
  return from_parts(a, b, parts, 1 + (Coef)(rng() % 3));
}

}  // namespace

CheckResult check_relations() {
  Tally tally;
  // Ambients: every partition of the curves of (top, bottom) pairs with at
  // most three components, genus and dots 0 or 1 on the first component.
  std::vector<Cobordism> amb;
  for (int kind : {-1, 0, 1})
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) {
        Smoothing top = boundary_smoothing(kind, a);
        Smoothing bot = boundary_smoothing(kind < 0 ? -1 : 1 - kind, b);
        int n = curve_count(top, bot);
        if (n > 3) continue;
        std::vector<std::vector<int>> cur;
        std::vector<std::vector<std::vector<int>>> parts;
        partitions(n, 0, cur, parts);
        for (auto& p : parts)
          for (int extra = 0; extra < 2; ++extra)
            for (int g = 0; g < 2; ++g)
              for (int d = 0; d < 2; ++d) {
                if ((int)p.size() + extra > 3 || (p.empty() && !extra))
                  continue;
                std::vector<Component> comps;
                for (auto& blk : p) comps.push_back({blk, 0, 0});
                if (extra) comps.push_back({{}, 0, 1});
                comps[0].genus = g;
                comps[0].dots = d;
                amb.push_back(from_parts(top, bot, comps));
              }
      }
  for (auto& a : amb) {
    if (a.is_zero()) continue;
    int nc = (int)a.terms.begin()->first.size();
    auto where = [&](const char* rel) {
      return std::string(rel) + " on " + to_json(a).dump();
    };
    tally(check_relation({Relation::S, a, {}}), where("S"));
    tally(check_relation({Relation::T, a, {}}), where("T"));
    int n4 = nc * nc * nc * nc;
    for (int x = 0; x < n4; ++x) {
      std::vector<int> s = {x % nc, x / nc % nc, x / nc / nc % nc,
                            x / nc / nc / nc};
      tally(check_relation({Relation::FourTu, a, s}), where("4Tu"));
      if (s[3] == 0) {
        tally(check_relation({Relation::ThreeS1, a, s}), where("3S1"));
        tally(check_relation({Relation::ThreeS2, a, s}), where("3S2"));
      }
      if (s[2] == 0 && s[3] == 0)
        tally(check_relation({Relation::NeckCut, a, s}), where("neck cut"));
    }
  }
  return result("relations", tally.fails, tally.total, tally.first);
}

CheckResult check_reduce(int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tally tally;
  for (int it = 0; it < samples; ++it) {
    int kind = (int)(rng() % 3) - 1;
    Smoothing a = boundary_smoothing(kind, (int)(rng() % 3));
    Smoothing b = boundary_smoothing(kind < 0 ? -1 : (int)(rng() % 2),
                                     (int)(rng() % 3));
    auto c1 = random_generator(rng, a, b), c2 = random_generator(rng, a, b);
    Coef k1 = (Coef)(rng() % 7) - 3, k2 = (Coef)(rng() % 7) - 3;
    auto r1 = reduce(c1);
    tally(reduce(r1) == r1, "idempotence on " + to_json(c1).dump());
    tally(reduce(c1 * k1 + c2 * k2) == r1 * k1 + reduce(c2) * k2,
          "linearity on " + to_json(c1).dump());
  }
  return result("reduce", tally.fails, tally.total, tally.first);
}

CheckResult check_degrees(int samples, uint64_t seed) {
  Tally tally;
  auto saddle = from_parts(arcs_only(kMatch4[0]), arcs_only(kMatch4[1]),
                           {{{0}, 0, 0}});
  tally(degree(saddle) == -1, "saddle");
  tally(degree(cap()) == 1, "cap");
  tally(degree(cup()) == 1, "cup");

  std::mt19937_64 rng(seed);
  int done = 0, guard = 0;
  while (done < samples && guard++ < 20 * samples) {
    int kind = (int)(rng() % 3) - 1;
    auto pick = [&] {
      return boundary_smoothing(kind < 0 ? -1 : (int)(rng() % 2),
                                (int)(rng() % 3));
    };
    Smoothing a = pick(), b = pick(), c = pick();
    auto f = random_generator(rng, a, b), g = random_generator(rng, b, c);
    auto gf = compose(g, f);
    if (gf.is_zero()) continue;
    ++done;
    tally(degree(gf) == degree(f) + degree(g),
          "composite of " + to_json(f).dump() + " and " + to_json(g).dump());
  }
  tally(done == samples, "not enough nonzero composites");

  for (auto& [e, t] : small_corpus(8)) {
    auto k = kh_complex(t);
    auto ds = differential_degrees(k);
    tally(ds.empty() || ds == std::vector<int>{0}, "differential of " + e.name);
  }
  return result("degrees", tally.fails, tally.total, tally.first);
}

CheckResult check_dsquared(int max_crossings) {
  Tally tally;
  for (auto& [e, t] : small_corpus(max_crossings)) {
    auto k = kh_complex(t);
    tally(verify_d_squared(k), e.name + " formal");
    for (auto s : {spec_khovanov(), spec_khovanov(2), spec_lee(), spec_f3()})
      tally(verify_d_squared(apply_functor(s, k)), e.name + " " + s.name);
  }
  return result("dsquared", tally.fails, tally.total, tally.first);
}

CheckResult check_invariance(int samples, uint64_t seed, int max_crossings,
                             int threads) {
  static const Move kMoves[] = {Move::R1a, Move::R1b, Move::R1inv,
                                Move::R2,  Move::R2inv, Move::R3};
  auto pool = small_corpus(max_crossings);
  // Non-reduced diagrams, so that R3 and kink removal have sites.
  const std::vector<std::pair<int, std::vector<int>>> braids = {
      {2, {1}},          {2, {1, -1}},         {3, {1, 2, 1}},
      {3, {1, 2, 1, 2}}, {3, {1, 2, 1, -2}},   {3, {-1, -2, -1, 1, 1}},
      {4, {1, 2, 1, 3}}, {3, {1, 2, 1, 2, 2, 1}}};
  for (auto& [n, w] : braids) {
    auto t = braid_closure(n, w);
    if (t.size() > max_crossings) continue;
    std::string name = "braid" + std::to_string(n) + "(";
    for (size_t i = 0; i < w.size(); ++i) name += (i ? "," : "") + std::to_string(w[i]);
    pool.push_back({CorpusEntry{name + ")", component_count(t), to_pd(t)}, t});
  }
  std::mt19937_64 rng(seed);
  Tally tally;
  std::map<Move, int> used;
  int done = 0, guard = 0;
  while (done < samples && guard++ < 50 * samples) {
    // Move type first, then a diagram where it applies.
    Move m = kMoves[rng() % std::size(kMoves)];
    std::vector<size_t> fit;
    for (size_t i = 0; i < pool.size(); ++i)
      if (!move_sites(pool[i].second, m).empty()) fit.push_back(i);
    if (fit.empty()) continue;
    auto& [e, t] = pool[fit[rng() % fit.size()]];
    auto sites = move_sites(t, m);
    Site s = sites[rng() % sites.size()];
    if (m == Move::R2 && s.v.size() >= 3) s.v[2] = (int)(rng() % 4);
    TangleDiagram after;
    try {
      after = apply_reidemeister(t, m, s);
    } catch (const DiagramError&) {
      continue;
    }
    ++done;
    ++used[m];
    std::string what = e.name + " " + move_name(m);
    for (int x : s.v) what += " " + std::to_string(x);
    for (Field f : {Field::Q, Field::F2})
      tally(khovanov_betti(t, f, threads) == khovanov_betti(after, f, threads),
            what + " over " + field_name(f));
  }
  tally(done == samples, "not enough applicable moves");
  auto r = result("invariance", tally.fails, tally.total, tally.first);
  r.detail += " (";
  for (auto& [m, k] : used)
    r.detail += (m == used.begin()->first ? "" : ", ") + move_name(m) + " x" + std::to_string(k);
  r.detail += ")";
  return r;
}

CheckResult check_planar(int max_crossings, int threads) {
  Tally tally;
  for (auto& [e, t] : small_corpus(max_crossings)) {
    if (t.size() == 0) continue;
    auto cd = crossing_decomposition(t);
    std::vector<FormalComplex> parts;
    for (int i = 0; i < t.size(); ++i) {
      auto c = kh_complex(cd.parts[i]);
      c.xids = {i};
      parts.push_back(std::move(c));
    }
    auto comp = share(planar_compose_complexes(cd.d, parts));
    auto direct = share(kh_complex(t));
    tally(verify_d_squared(*comp), e.name + " composite d^2");
    auto iso = cube_isomorphism(comp, direct);
    tally(iso && is_chain_map(*iso), e.name + " complex isomorphism");
    for (Field f : {Field::Q, Field::F2}) {
      auto s = spec_khovanov(f == Field::F2 ? 2 : 0);
      tally(betti(apply_functor(s, *comp), f, threads) ==
                betti(apply_functor(s, *direct), f, threads),
            e.name + " homology over " + field_name(f));
    }
  }
  return result("planar", tally.fails, tally.total, tally.first);
}

CheckResult check_jones(int max_crossings) {
  Tally tally;
  for (auto& [e, t] : small_corpus(max_crossings)) {
    if (e.components != 1) continue;
    tally(graded_euler(kh_complex(t)) == jones_hat(t), e.name);
  }
  auto f8 = jones_hat(load_diagram("4_1"));
  tally(f8 == LaurentPoly::mono(5) + LaurentPoly::mono(-5),
        "4_1 gives " + f8.str());
  return result("jones", tally.fails, tally.total, tally.first);
}

CheckResult check_lee(int max_components, int max_crossings, int threads) {
  Tally tally;
  for (auto& [e, t] : small_corpus(max_crossings)) {
    if (e.components > max_components) continue;
    int d = lee_dimension(t, threads);
    tally(d == (1 << e.components),
          e.name + " has " + std::to_string(d));
  }
  return result("lee", tally.fails, tally.total, tally.first);
}

CheckResult check_frobenius() {
  auto r = check_axioms(spec_khovanov());
  Tally tally;
  tally(r.all_frobenius(), "Frobenius axioms");
  tally(r.sphere, "sphere");
  tally(r.torus, "torus");
  tally(r.four_tu, "4Tu");
  return result("frobenius", tally.fails, tally.total, tally.first);
}

CheckResult check_movies(int k, int threads) {
  Tally tally;
  std::ostringstream det;
  for (int i = 1; i <= 15; ++i) {
    if (k ? i != k : i == 10) continue;
    auto r = check_movie_move(i, threads);
    tally(r.pass, "MM" + std::to_string(i) + " " + r.detail);
    det << (det.tellp() ? "; " : "") << "MM" << i << " "
        << (r.pass ? "ok" : "FAIL") << " (" << r.detail << ")";
  }
  auto res = result("movies", tally.fails, tally.total, tally.first);
  res.detail += "; " + det.str();
  return res;
}

}  // namespace kh
