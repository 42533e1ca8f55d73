#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kh/smoothing.hpp"

namespace kh {

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// X[a,b,c,d]: edge labels counterclockwise, starting at the incoming
// under-strand. Positive iff the over-strand runs d -> b.
struct Crossing {
  std::array<int, 4> e{};
  bool positive = true;
  bool operator==(const Crossing&) const = default;
};

struct TangleDiagram {
  std::vector<Crossing> x;
  std::vector<int> boundary;  // counterclockwise from the base point
  std::vector<int> bdir;      // +1 strand enters the disk here, -1 leaves
  std::vector<int> loops;     // labels of closed crossingless components

  int size() const { return (int)x.size(); }
  int n_plus() const;
  int n_minus() const;
  bool closed() const { return boundary.empty(); }
  std::vector<int> labels() const;
  int max_label() const;
};

// Position of an edge end: crossing c and slot s, or boundary position s
// when c == -1.
struct End {
  int c = -1;
  int s = 0;
  bool operator==(const End&) const = default;
};

struct EdgeEnds {
  End tail, head;
};

// Orientation read off the crossing data and boundary directions.
std::map<int, EdgeEnds> edge_ends(const TangleDiagram& t);

// Throws DiagramError on bad incidence, orientation clashes or non-planarity.
void validate(const TangleDiagram& t);
bool is_planar(const TangleDiagram& t);
// Faces of the diagram as lists of edge labels (boundary-free diagrams and
// tangles alike); each face lists (label, crossing, slot) darts.
struct Dart {
  int label;
  End at;
};
std::vector<std::vector<Dart>> faces(const TangleDiagram& t);

TangleDiagram parse_pd(const std::string& text);
std::string to_pd(const TangleDiagram& t);

// Smoothing at vertex bits (bit i = resolution of crossing i).
Smoothing resolve(const TangleDiagram& t, const std::vector<int>& bits);
Smoothing resolve_mask(const TangleDiagram& t, uint64_t mask);

// Planar arc diagrams: holes with point counts, an output disk, arcs.
struct Port {
  int hole = -1;  // -1 is the output disk
  int pt = 0;
  bool operator==(const Port&) const = default;
  auto operator<=>(const Port&) const = default;
};

struct PlanarArcDiagram {
  std::vector<int> holes;
  int nout = 0;
  std::vector<std::pair<Port, Port>> arcs;
  int loops = 0;
  std::vector<int> arc_tag;   // optional bookkeeping tag per arc
  std::vector<int> loop_tag;  // optional tag per loop

  static PlanarArcDiagram radial(int n);
  void check() const;
  // partner port of each port
  std::map<Port, std::pair<Port, int>> partner() const;
};

TangleDiagram compose_tangles(const PlanarArcDiagram& d,
                              const std::vector<TangleDiagram>& in);

// Cut a diagram into a local disk (crossings `xs` plus middle pieces of the
// edges `through`; loop labels in `through` move whole loops) and the rest.
// compose_tangles(D, {local, rest}) gives the original back, same labels.
// Through edge i owns local points 2i (tail side) and 2i+1 after the cut
// points of `xs`.
struct Split {
  PlanarArcDiagram d;
  TangleDiagram local, rest;
  std::vector<int> local_x, rest_x;  // original crossing index per crossing
  int next_label = 0;
};
Split split_diagram(const TangleDiagram& t, const std::vector<int>& xs,
                    const std::vector<int>& through);

// Every crossing in its own hole: D(X_1, ..., X_n) = T. Each crossing
// tangle keeps the edge label at the tail end of an edge and gets a fresh
// label at the head end.
struct CrossingDecomposition {
  PlanarArcDiagram d;
  std::vector<TangleDiagram> parts;
};
CrossingDecomposition crossing_decomposition(const TangleDiagram& t);

enum class Move { R1a, R1b, R1inv, R2, R2inv, R3, Saddle, Cap, Cup };
std::string move_name(Move m);
std::optional<Move> move_from_name(const std::string& s);

// Site data (edges may be loop labels where it makes sense):
//   R1a (positive kink) / R1b (negative kink): {edge, side}
//   R1inv: {crossing}          R2: {over edge, under edge, variant}
//   R2inv: {c1, c2}            R3: {c1, c2, c3}
//   Saddle: {e, f} joins two edges, {e, loop} absorbs a loop, {e, -1} buds
//   a new loop off e.          Cap: {}      Cup: {loop}
struct Site {
  std::vector<int> v;
};

struct MoveResult {
  TangleDiagram after;
  Split before_split;   // local part of the input
  TangleDiagram local_after;
};

MoveResult apply_move(const TangleDiagram& t, Move m, const Site& s);
TangleDiagram apply_reidemeister(const TangleDiagram& t, Move m,
                                 const Site& s);

// All sites where a move applies (for randomized testing).
std::vector<Site> move_sites(const TangleDiagram& t, Move m);

// Combinatorial isomorphism: edge relabelling + crossing permutation that
// preserves slot order, signs, boundary order and loop count.
struct Iso {
  std::vector<int> xperm;      // crossing i of a -> crossing xperm[i] of b
  std::map<int, int> label;    // edge label of a -> edge label of b
};
std::optional<Iso> isomorphism(const TangleDiagram& a, const TangleDiagram& b);
bool isomorphic(const TangleDiagram& a, const TangleDiagram& b);

// Link components (closed diagrams), counting free loops.
int component_count(const TangleDiagram& t);

TangleDiagram mirror(const TangleDiagram& t);

// Closure of a braid word on n strands: generator i > 0 is sigma_i,
// i < 0 its inverse.
TangleDiagram braid_closure(int n, const std::vector<int>& word);

}  // namespace kh
