#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kh/bracket.hpp"
#include "kh/homology.hpp"
#include "kh/linalg.hpp"

namespace kh {

// Homotopy equivalence onto a smaller complex with g o f = 1.
struct Retract {
  std::shared_ptr<const FormalComplex> c, m;
  ChainMap f;  // m -> c
  ChainMap g;  // c -> m
};
// Deloops every circle, then cancels invertible differential entries.
Retract simplify_complex(std::shared_ptr<const FormalComplex> c);

// Chain isomorphism sending each object to an object of the same shape by a
// signed identity; objects are paired by search.
std::optional<ChainMap> diagonal_isomorphism(
    std::shared_ptr<const FormalComplex> a,
    std::shared_ptr<const FormalComplex> b);

// Chain isomorphism Kh(a) -> Kh(b) induced by a diagram isomorphism.
std::optional<ChainMap> relabel_map(const TangleDiagram& a,
                                    const TangleDiagram& b,
                                    std::shared_ptr<const FormalComplex> ka,
                                    std::shared_ptr<const FormalComplex> kb);

struct MovieEvent {
  Move move;
  Site site;
};

struct EventResult {
  TangleDiagram after;
  ChainMap map;  // Kh(before) -> Kh(after)
};
EventResult event_map(const TangleDiagram& t, const MovieEvent& e,
                      std::shared_ptr<const FormalComplex> src = nullptr);

struct Movie {
  TangleDiagram start;
  std::vector<MovieEvent> events;
};

struct MovieResult {
  std::vector<TangleDiagram> frames;
  ChainMap map;  // Kh(first frame) -> Kh(last frame)
};
MovieResult evaluate_movie(const Movie& m);

// Movie files: one PD frame per line, "-- <move> [@ site ints]" between
// frames. Frames after an event must be isomorphic to the move result.
struct MovieFile {
  std::vector<TangleDiagram> frames;
  std::vector<MovieEvent> events;
};
MovieFile parse_movie(const std::string& text);
std::string movie_text(const MovieResult& r, const std::vector<MovieEvent>& ev);
// Chain map Kh(first) -> Kh(last) of a parsed movie file.
ChainMap evaluate_movie_file(const MovieFile& m);

// Khovanov functor over Q.
// sigma = +1 or -1 if f - sigma is null-homotopic, 0 if neither (f must be
// an endomorphism of a closed-diagram complex).
int homotopic_sign(const ChainMap& f, int threads = 1);

// Induced map on Q homology per (r, j), on bases fixed by the complexes.
std::map<std::pair<int, int>, QMatrix> homology_map(const ChainMap& f);
// +1 or -1 if f induces +-identity on homology of an endomorphism, else 0.
int homology_sign(const ChainMap& f);
// +1 if a and b agree on homology, -1 if a = -b, else 0.
int homology_relation(const ChainMap& a, const ChainMap& b);
// Total rank of the induced map on Q homology.
int homology_rank(const ChainMap& f);

// Clip whose i-th event is one of pattern[i], ending in a frame isomorphic
// to the start and never undoing the event just before.
std::optional<Movie> find_circular_clip(
    const TangleDiagram& start, const std::vector<std::vector<Move>>& pattern);

// Movie move library: closed instances of the fifteen moves.
struct MovieMoveInstance {
  int k = 0;
  std::string description;
  Movie left;
  std::optional<Movie> right;  // type III: second path between the same frames
};
MovieMoveInstance movie_move_instance(int k);

struct MovieMoveCheck {
  int k = 0;
  bool pass = false;
  int sign = 0;
  std::string detail;
};
MovieMoveCheck check_movie_move(int k, int threads = 1);

}  // namespace kh
