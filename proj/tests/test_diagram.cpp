#include "doctest.h"
#include "kh/diagram.hpp"

using namespace kh;

TEST_CASE("parse trefoil and signs") {
  auto t = parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]");
  CHECK(t.size() == 3);
  CHECK(t.n_minus() == 3);
  CHECK(is_planar(t));
  CHECK(component_count(t) == 1);
  auto m = mirror(t);
  CHECK(m.n_plus() == 3);
  CHECK(is_planar(m));
  CHECK(faces(t).size() == 5);
}

TEST_CASE("boundary rotation convention") {
  auto a = parse_pd("PD[X[1,2,3,4],B[1,2,3,4]]");
  CHECK(is_planar(a));
  TangleDiagram b = a;
  b.boundary = {1, 4, 3, 2};
  b.bdir = {a.bdir[0], a.bdir[3], a.bdir[2], a.bdir[1]};
  CHECK_FALSE(is_planar(b));
}

TEST_CASE("resolve") {
  auto t = parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]");
  CHECK(resolve_mask(t, 0).ncirc + resolve_mask(t, 7).ncirc == 5);
  auto u = parse_pd("PD[O[2]]");
  CHECK(resolve(u, {}).ncirc == 2);
  CHECK(u.loops.size() == 2);
}

TEST_CASE("split and compose round trip") {
  auto t = parse_pd(
      "PD[X[8,5,1,6],X[4,1,5,2],X[2,8,3,7],X[6,4,7,3]]");
  for (std::vector<int> xs : {std::vector<int>{0}, {1, 2}, {0, 3}, {}}) {
    auto sp = split_diagram(t, xs, {});
    auto back = compose_tangles(sp.d, {sp.local, sp.rest});
    CHECK(isomorphic(back, t));
  }
  auto sp = split_diagram(t, {}, {5});
  CHECK(isomorphic(compose_tangles(sp.d, {sp.local, sp.rest}), t));
}

TEST_CASE("moves keep planarity and invert") {
  auto t = parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]");
  for (Move m : {Move::R1a, Move::R1b}) {
    for (auto& s : move_sites(t, m)) {
      auto r = apply_move(t, m, s).after;
      CHECK(r.size() == 4);
      CHECK(r.n_plus() == (m == Move::R1a ? 1 : 0));
      bool found = false;
      for (auto& s2 : move_sites(r, Move::R1inv)) {
        auto back = apply_move(r, Move::R1inv, s2).after;
        if (isomorphic(back, t)) found = true;
      }
      CHECK(found);
    }
  }
  auto r2 = move_sites(t, Move::R2);
  CHECK(!r2.empty());
  for (auto& s : r2) {
    auto r = apply_move(t, Move::R2, s).after;
    CHECK(r.size() == 5);
    bool found = false;
    for (auto& s2 : move_sites(r, Move::R2inv))
      if (isomorphic(apply_move(r, Move::R2inv, s2).after, t)) found = true;
    CHECK(found);
  }
}

TEST_CASE("R3 involution on braid closure") {
  auto t = braid_closure(3, {1, 2, 1});
  CHECK(is_planar(t));
  CHECK(t.n_plus() == 3);
  auto sites = move_sites(t, Move::R3);
  REQUIRE(!sites.empty());
  for (auto& s : sites) {
    auto r = apply_move(t, Move::R3, s).after;
    CHECK(r.n_plus() == 3);
    CHECK(isomorphic(r, braid_closure(3, {2, 1, 2})));
    auto back = apply_move(r, Move::R3, s).after;
    CHECK(isomorphic(back, t));
  }
  auto tr = braid_closure(2, {-1, -1, -1});
  auto k = parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]");
  CHECK(tr.n_minus() == 3);
  CHECK(component_count(tr) == 1);
  CHECK(faces(tr).size() == faces(k).size());
}
