#include <random>

#include "doctest.h"
#include "kh/cob3.hpp"

using namespace kh;

namespace {

Smoothing two_arcs_h() { return arcs_only({1, 0, 3, 2}); }
Smoothing two_arcs_v() { return arcs_only({3, 2, 1, 0}); }

Cobordism saddle4() {
  return from_parts(two_arcs_h(), two_arcs_v(), {{{0}, 0, 0}});
}

Cobordism merge() {
  return from_parts(circles_only(2), circles_only(1), {{{0, 1, 2}, 0, 0}});
}
Cobordism split() {
  return from_parts(circles_only(1), circles_only(2), {{{0, 1, 2}, 0, 0}});
}

Cobordism scalar(Coef k) {
  Cobordism c(circles_only(0), circles_only(0));
  c.add({}, k);
  return c;
}

}  // namespace

TEST_CASE("degrees of elementary cobordisms") {
  CHECK(degree(saddle4()) == -1);
  CHECK(degree(cap()) == 1);
  CHECK(degree(cup()) == 1);
  CHECK(degree(identity(two_arcs_h())) == 0);
  CHECK(degree(identity(circles_only(3))) == 0);
  CHECK(degree(merge()) == -1);
  CHECK(degree(split()) == -1);
}

TEST_CASE("sphere and torus") {
  CHECK(compose(cup(), cap()).is_zero());
  auto torus = compose(cup(), compose(merge(), compose(split(), cap())));
  CHECK(torus == scalar(2));
  Cobordism g2(circles_only(0), circles_only(0));
  g2.add({{{}, 2, 0}}, 1);
  CHECK(reduce(g2).is_zero());
  Cobordism dd(circles_only(1), circles_only(1));
  dd.add({{{0, 1}, 0, 2}}, 1);
  CHECK(reduce(dd).is_zero());
}

TEST_CASE("identity is a unit") {
  auto s = saddle4();
  CHECK(compose(identity(two_arcs_v()), s) == s);
  CHECK(compose(s, identity(two_arcs_h())) == s);
  auto m = merge();
  CHECK(compose(identity(circles_only(1)), m) == m);
  CHECK(compose(m, identity(circles_only(2))) == m);
}

TEST_CASE("saddle twice on arcs gives a tube") {
  auto back = from_parts(two_arcs_v(), two_arcs_h(), {{{0}, 0, 0}});
  auto ss = compose(back, saddle4());
  REQUIRE(ss.terms.size() == 1);
  auto& surf = ss.terms.begin()->first;
  CHECK(surf.size() == 1);
  CHECK(surf[0].curves.size() == 2);
  CHECK(degree(ss) == -2);
}

TEST_CASE("horizontal composition") {
  auto r = PlanarArcDiagram::radial(4);
  auto s = saddle4();
  CHECK(planar_compose(r, {s}) == s);
  PlanarArcDiagram d;
  d.holes = {4, 4};
  d.nout = 4;
  // two squares side by side; inner points glued
  d.arcs = {{{0, 0}, {-1, 0}}, {{0, 1}, {-1, 1}}, {{0, 2}, {1, 1}},
            {{0, 3}, {1, 0}}, {{1, 2}, {-1, 2}}, {{1, 3}, {-1, 3}}};
  auto two = planar_compose(d, {s, s});
  CHECK(degree(two) == -2);
  auto one = planar_compose(d, {s, identity(two_arcs_h())});
  CHECK(degree(one) == -1);
}

TEST_CASE("relations exhaustive") {
  std::vector<Cobordism> ambients = {
      identity(circles_only(0)), identity(circles_only(1)), merge(),
      split(), saddle4(), identity(two_arcs_h()),
      from_parts(circles_only(1), circles_only(1), {{{0}, 0, 1}, {{1}, 0, 0}})};
  int count = 0;
  for (auto& a : ambients) {
    int nc = (int)a.terms.begin()->first.size();
    if (nc == 0) {
      CHECK(check_relation({Relation::S, a, {}}));
      CHECK(check_relation({Relation::T, a, {}}));
      continue;
    }
    CHECK(check_relation({Relation::S, a, {}}));
    CHECK(check_relation({Relation::T, a, {}}));
    for (int x = 0; x < nc * nc * nc * nc; ++x) {
      std::vector<int> s = {x % nc, x / nc % nc, x / nc / nc % nc,
                            x / nc / nc / nc};
      CHECK(check_relation({Relation::FourTu, a, s}));
      CHECK(check_relation({Relation::ThreeS1, a, s}));
      CHECK(check_relation({Relation::ThreeS2, a, s}));
      CHECK(check_relation({Relation::NeckCut, a, s}));
      ++count;
    }
  }
  CHECK(count > 30);
}

TEST_CASE("reduce idempotent and linear") {
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    int nt = rng() % 3, nb = rng() % 3;
    Smoothing a = circles_only(nt), b = circles_only(nb);
    auto rnd = [&] {
      int n = nt + nb;
      std::vector<Component> parts;
      std::vector<int> ids(n);
      for (int i = 0; i < n; ++i) ids[i] = i;
      std::shuffle(ids.begin(), ids.end(), rng);
      int i = 0;
      while (i < n) {
        int len = 1 + rng() % (n - i);
        Component c;
        c.curves.assign(ids.begin() + i, ids.begin() + i + len);
        c.genus = rng() % 3;
        c.dots = rng() % 3;
        parts.push_back(c);
        i += len;
      }
      if (rng() % 2) parts.push_back({{}, (int)(rng() % 2), (int)(rng() % 2)});
      return from_parts(a, b, parts, 1 + rng() % 3);
    };
    auto c1 = rnd(), c2 = rnd();
    CHECK(reduce(reduce(c1)) == reduce(c1));
    CHECK(reduce(c1 * 3 - c2 * 2) == reduce(c1) * 3 - reduce(c2) * 2);
  }
}
