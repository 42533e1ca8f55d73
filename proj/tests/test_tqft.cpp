#include "doctest.h"
#include "kh/tqft.hpp"

using namespace kh;

TEST_CASE("frobenius axioms") {
  for (auto s : {spec_khovanov(), spec_khovanov(2), spec_lee(), spec_f3(),
                 spec_fc()}) {
    CAPTURE(s.name);
    auto r = check_axioms(s);
    CHECK(r.all_frobenius());
    if (s.descends) {
      CHECK(r.sphere);
      CHECK(r.torus);
      CHECK(r.four_tu);
    }
    if (s.graded) CHECK(r.homogeneous);
  }
  auto fc = check_axioms(spec_fc());
  CHECK(fc.sphere_value == Poly::x(1, -1));
  CHECK_FALSE(fc.four_tu);
}

TEST_CASE("khovanov structure constants") {
  auto s = spec_khovanov();
  auto m = lin_m(s);
  CHECK(m.at(1, 0b10) == Poly(1));  // m(v+ v-) = v-
  CHECK(m.at(0, 0b11).is_zero());
  CHECK(m.at(1, 0b11).is_zero());
  auto r = check_axioms(s);
  CHECK(r.torus_value == Poly(2));
  auto [L, R] = four_tu_sides(s);
  // v-+++ + v+-++ + v++-+ + v+++- : one v- leg in each term
  for (int o = 0; o < 16; ++o)
    CHECK(L.at(o, 0) == Poly(__builtin_popcount(o) == 1 ? 1 : 0));
  CHECK(L == R);
}

TEST_CASE("lee genus three") {
  auto s = spec_lee();
  Surface g3{{{}, 3, 0}};
  CHECK(eval_surface(s, g3, 0, 0).at(0, 0) == Poly(8));
  Surface g3k{{{}, 3, 0}};
  CHECK(eval_surface(spec_khovanov(), g3k, 0, 0).at(0, 0).is_zero());
  Surface t{{{}, 1, 0}};
  CHECK(eval_surface(spec_khovanov(), t, 0, 0).at(0, 0) == Poly(2));
}

TEST_CASE("unknot and trefoil complexes") {
  auto u = apply_functor(spec_khovanov(), kh_complex(parse_pd("PD[O[1]]")));
  REQUIRE(u.qdeg.size() == 1);
  CHECK(u.qdeg[0] == std::vector<int>{1, -1});
  auto t = kh_complex(parse_pd("PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]"));
  for (auto s : {spec_khovanov(), spec_khovanov(2), spec_lee(), spec_f3(),
                 spec_fc()}) {
    CAPTURE(s.name);
    auto a = apply_functor(s, t);
    CHECK(verify_d_squared(a));
    auto d = entry_degrees(a);
    if (s.graded) CHECK(d == std::vector<int>{0});
    else for (int x : d) CHECK(x >= 0);
  }
  auto h1 = specialize(apply_functor(spec_f3(), t), 1);
  CHECK(verify_d_squared(h1));
  for (int x : entry_degrees(h1)) CHECK((x == 0 || x == 2));
}
