#include "doctest.h"
#include "kh/corpus.hpp"
#include "kh/movies.hpp"

using namespace kh;

namespace {

std::vector<int> degrees_of(const EventResult& r) { return map_degrees(r.map); }

}  // namespace

TEST_CASE("homotopy solver on scalars") {
  auto k = share(kh_complex(load_diagram("3_1")));
  auto id = identity_map(k);
  CHECK(homotopic_sign(id) == 1);
  CHECK(homotopic_sign(map_scale(id, -1)) == -1);
  CHECK(homotopic_sign(zero_map(k, k)) == 0);
  CHECK(homology_sign(id) == 1);
  CHECK(homology_relation(id, map_scale(id, -1)) == -1);
  CHECK(homology_rank(id) == 4);
}

TEST_CASE("simplification is a retract") {
  auto k = share(kh_complex(load_diagram("L2a1")));
  auto r = simplify_complex(k);
  CHECK(r.m->total_objects() <= k->total_objects());
  CHECK(is_chain_map(r.f));
  CHECK(is_chain_map(r.g));
  CHECK(maps_equal_reduced(map_compose(r.g, r.f), identity_map(r.m)));
  CHECK(homotopic_sign(map_compose(r.f, r.g)) == 1);
}

TEST_CASE("reidemeister maps are degree-0 chain maps") {
  auto t = load_diagram("3_1");
  auto src = share(kh_complex(t));
  int seen = 0;
  for (Move m : {Move::R1a, Move::R1b, Move::R2}) {
    auto sites = move_sites(t, m);
    REQUIRE(!sites.empty());
    auto r = event_map(t, {m, sites.front()}, src);
    CHECK(is_chain_map(r.map));
    CHECK(degrees_of(r) == std::vector<int>{0});
    CHECK(homology_rank(r.map) == 4);
    ++seen;
  }
  auto b = braid_closure(3, {1, 2, 1, 2});
  auto s3 = move_sites(b, Move::R3);
  REQUIRE(!s3.empty());
  auto r = event_map(b, {Move::R3, s3.front()});
  CHECK(is_chain_map(r.map));
  CHECK(degrees_of(r) == std::vector<int>{0});
  CHECK(seen == 3);
}

TEST_CASE("morse events carry euler characteristic degrees") {
  auto t = load_diagram("L2a1");
  auto cap = event_map(t, {Move::Cap, {}});
  CHECK(is_chain_map(cap.map));
  CHECK(degrees_of(cap) == std::vector<int>{1});
  REQUIRE(cap.after.loops.size() == 1);
  auto cup = event_map(cap.after, {Move::Cup, {{cap.after.loops[0]}}});
  CHECK(degrees_of(cup) == std::vector<int>{1});
  // sphere: cup after cap is zero
  CHECK(map_is_zero_reduced(map_compose(cup.map, cap.map)));
  auto sites = move_sites(t, Move::Saddle);
  REQUIRE(!sites.empty());
  auto sad = event_map(t, {Move::Saddle, sites.front()});
  CHECK(is_chain_map(sad.map));
  CHECK(degrees_of(sad) == std::vector<int>{-1});
}

TEST_CASE("movie files round trip") {
  auto t = load_diagram("L2a1");
  Movie m{t, {{Move::Cap, {}}}};
  auto loop = apply_reidemeister(t, Move::Cap, {}).loops.at(0);
  m.events.push_back({Move::Cup, {{loop}}});
  auto res = evaluate_movie(m);
  auto text = movie_text(res, m.events);
  auto mf = parse_movie(text);
  CHECK(mf.frames.size() == 3);
  CHECK(mf.events.size() == 2);
  CHECK(map_is_zero_reduced(evaluate_movie_file(mf)));
  CHECK_THROWS_AS(parse_movie("-- R2"), DiagramError);
  CHECK_THROWS_AS(parse_movie(to_pd(t) + "\n-- Bogus\n" + to_pd(t)), DiagramError);
}

TEST_CASE("movie moves") {
  for (int k : {1, 2, 6, 11, 12}) {
    CAPTURE(k);
    auto r = check_movie_move(k);
    CHECK(r.pass);
  }
}
