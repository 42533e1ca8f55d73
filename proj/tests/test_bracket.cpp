#include <set>

#include "doctest.h"
#include "kh/bracket.hpp"

using namespace kh;

namespace {
const char* kTrefoil = "PD[X[6,3,1,4],X[4,1,5,2],X[2,5,3,6]]";
const char* kFig8 = "PD[X[8,5,1,6],X[4,1,5,2],X[2,8,3,7],X[6,4,7,3]]";
}

TEST_CASE("unknot cube") {
  auto c = build_cube(parse_pd("PD[O[1]]"));
  CHECK(c.r0 == 0);
  REQUIRE(c.obj.size() == 1);
  CHECK(c.obj[0].size() == 1);
  CHECK(c.obj[0][0].ncirc == 1);
}

TEST_CASE("trefoil cube signs and d^2") {
  auto t = parse_pd(kTrefoil);
  auto c = build_cube(t);
  CHECK(c.r0 == -3);
  CHECK(verify_d_squared(c));
  // minus signs exactly on edges 01*, 10*, 1*0, 1*1
  std::set<std::string> neg;
  for (int k = 0; k < 3; ++k)
    for (auto& [ij, cob] : c.d[k].e) {
      auto& a = c.bits[k][ij.second];
      auto& b = c.bits[k + 1][ij.first];
      std::string s;
      for (int i = 0; i < 3; ++i) s += a[i] == b[i] ? char('0' + a[i]) : '*';
      if (cob.terms.begin()->second < 0) neg.insert(s);
    }
  CHECK(neg == std::set<std::string>{"01*", "10*", "1*0", "1*1"});
  auto k = kh_normalize(c, 0, 3);
  CHECK(differential_degrees(k) == std::vector<int>{0});
  CHECK(verify_d_squared(k));
  auto bad = c;
  auto& e = bad.d[0].e.begin()->second;
  e = -e;
  CHECK_FALSE(verify_d_squared(bad));
}

TEST_CASE("single crossing normalization") {
  auto p = parse_pd("PD[X[1,2,3,4],B[1,2,3,4]]");
  REQUIRE(p.n_plus() + p.n_minus() == 1);
  auto k = kh_complex(p);
  if (p.n_plus() == 1) {
    CHECK(k.r0 == 0);
    CHECK(k.obj[0][0].shift == 1);
    CHECK(k.obj[1][0].shift == 2);
  } else {
    CHECK(k.r0 == -1);
    CHECK(k.obj[0][0].shift == -2);
    CHECK(k.obj[1][0].shift == -1);
  }
}

TEST_CASE("cone lemma for a crossing") {
  auto p = parse_pd("PD[X[1,2,3,4],B[1,2,3,4]]");
  auto cube = build_cube(p);
  // one-term complexes for the two smoothings
  FormalComplex a, b;
  a.obj = {{cube.obj[0][0]}};
  b.obj = {{cube.obj[1][0]}};
  a.npts = b.npts = 4;
  ChainMap psi;
  psi.src = share(a);
  psi.tgt = share(b);
  CobMatrix m;
  m.rows = m.cols = 1;
  m.add(0, 0, cube.d[0].e.begin()->second);
  psi.maps[0] = m;
  auto g = cone(psi);
  int s = p.n_plus() == 1 ? -1 : 0;
  auto gs = shift(g, s, 0);
  CHECK(gs.r0 == cube.r0);
  CHECK(gs.obj.size() == 2);
  CHECK(gs.d[0].e.begin()->second == cube.d[0].e.begin()->second);
}

TEST_CASE("planar composition reproduces the cube") {
  for (auto pd : {kTrefoil, kFig8}) {
    auto t = parse_pd(pd);
    auto cd = crossing_decomposition(t);
    std::vector<FormalComplex> parts;
    for (int i = 0; i < t.size(); ++i) {
      auto c = build_cube(cd.parts[i]);
      c.xids = {i};
      parts.push_back(c);
    }
    auto comp = planar_compose_complexes(cd.d, parts);
    CHECK(verify_d_squared(comp));
    auto iso = cube_isomorphism(share(comp), share(build_cube(t)));
    CHECK(iso.has_value());
    if (iso) CHECK(is_chain_map(*iso));
  }
}
