#include "doctest.h"
#include "kh/corpus.hpp"
#include "kh/homology.hpp"

using namespace kh;

namespace {

LaurentPoly poly(std::initializer_list<std::pair<int, Coef>> terms) {
  LaurentPoly p;
  for (auto [e, c] : terms) p += LaurentPoly::mono(e, c);
  return p;
}

}  // namespace

TEST_CASE("unknot") {
  auto t = load_diagram("0_1");
  auto q = khovanov_betti(t, Field::Q);
  CHECK(q.total() == 2);
  CHECK(q.at(0, 1) == 1);
  CHECK(q.at(0, -1) == 1);
  CHECK(jones_hat(t) == qint());
  CHECK(lee_dimension(t) == 2);
}

TEST_CASE("left trefoil") {
  auto t = load_diagram("3_1");
  REQUIRE(t.n_minus() == 3);
  auto q = khovanov_betti(t, Field::Q);
  auto f = khovanov_betti(t, Field::F2);
  CHECK(q.b == std::map<std::pair<int, int>, int>{
                   {{0, -1}, 1}, {{0, -3}, 1}, {{-2, -5}, 1}, {{-3, -9}, 1}});
  // the knight move becomes a tetris piece mod 2
  CHECK(f.total() == 6);
  CHECK(f.at(-3, -7) == 1);
  CHECK(f.at(-2, -7) == 1);
  auto j = jones_hat(t);
  CHECK(j == poly({{-1, 1}, {-3, 1}, {-5, 1}, {-9, -1}}));
  CHECK(graded_euler(kh_complex(t)) == j);
  auto js = jones_standard(j);
  REQUIRE(js);
  // J = -q^-8 + q^-6 + q^-2 in the variable q^2
  CHECK(*js == poly({{-4, -1}, {-3, 1}, {-1, 1}}));
}

TEST_CASE("mirror flips the table") {
  auto t = load_diagram("3_1");
  auto q = khovanov_betti(t, Field::Q);
  auto m = khovanov_betti(mirror(t), Field::Q);
  REQUIRE(q.total() == m.total());
  for (auto& [k, v] : q.b) CHECK(m.at(-k.first, -k.second) == v);
}

TEST_CASE("figure eight") {
  auto t = load_diagram("4_1");
  auto q = khovanov_betti(t, Field::Q);
  CHECK(q.total() == 6);
  CHECK(q.at(0, 1) == 1);
  CHECK(q.at(0, -1) == 1);
  CHECK(q.at(2, 5) == 1);
  CHECK(q.at(-2, -5) == 1);
  CHECK(jones_hat(t) == poly({{5, 1}, {-5, 1}}));
  auto b = betti_b3(kh_complex(t));
  REQUIRE(b.floor_j);
  CHECK(b.at(0, -101) == 2);
}

TEST_CASE("hopf link") {
  auto t = load_diagram("L2a1");
  CHECK(khovanov_betti(t, Field::Q).total() == 4);
  CHECK(lee_dimension(t) == 4);
  CHECK(jones_skein(t).size() == 1);
}

TEST_CASE("integral torsion of the trefoil") {
  auto t = load_diagram("3_1");
  auto tor = integral_torsion(apply_functor(spec_khovanov(), kh_complex(t)));
  REQUIRE(tor.size() == 1);
  CHECK(tor.begin()->second == std::vector<mpz_class>{2});
}

TEST_CASE("betti grid and json") {
  auto t = load_diagram("0_1");
  auto q = khovanov_betti(t, Field::Q);
  auto g = betti_grid({&q});
  CHECK(g.find(" 1 ") != std::string::npos);
  auto j = to_json(q);
  CHECK(j.is_array());
}
