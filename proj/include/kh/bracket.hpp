#pragma once
#include <map>
#include <memory>
#include <vector>

#include "kh/cob3.hpp"
#include "kh/diagram.hpp"

namespace kh {

// Sparse matrix of cobordisms; entry (i, j) maps source object j to target
// object i.
struct CobMatrix {
  int rows = 0, cols = 0;
  std::map<std::pair<int, int>, Cobordism> e;

  void add(int i, int j, const Cobordism& c);
  bool is_zero() const { return e.empty(); }
};

CobMatrix mat_compose(const CobMatrix& a, const CobMatrix& b);  // a o b
CobMatrix mat_add(const CobMatrix& a, const CobMatrix& b, Coef kb = 1);
CobMatrix mat_scale(const CobMatrix& a, Coef k);
CobMatrix mat_reduce(const CobMatrix& a);
CobMatrix mat_simplify(const CobMatrix& a);
bool mat_is_zero_reduced(const CobMatrix& a);

struct FormalComplex {
  int r0 = 0;
  std::vector<std::vector<Smoothing>> obj;  // obj[k] lives at height r0 + k
  std::vector<CobMatrix> d;                 // d[k]: obj[k] -> obj[k+1]
  int npts = 0;
  int mod = 0;
  // Cube bookkeeping: crossing ids of the coordinates and per object bits.
  std::vector<int> xids;
  std::vector<std::vector<std::vector<int>>> bits;

  int r1() const { return r0 + (int)obj.size() - 1; }
  bool has(int r) const { return r >= r0 && r <= r1(); }
  const std::vector<Smoothing>& at(int r) const;
  const CobMatrix& diff(int r) const;  // height r -> r + 1
  int total_objects() const;
};

// Map of homological degree `deg` between two complexes; maps[r] sends
// source height r to target height r + deg.
struct ChainMap {
  std::shared_ptr<const FormalComplex> src, tgt;
  int deg = 0;
  std::map<int, CobMatrix> maps;

  const CobMatrix* at(int r) const;
  CobMatrix get(int r) const;  // zero matrix with the right shape if absent
};

// Curve through every edge label at a vertex: circle index, or
// -(1 + smallest boundary point) for arcs.
std::map<int, int> curve_of_labels(const TangleDiagram& t,
                                   const std::vector<int>& bits);

FormalComplex build_cube(const TangleDiagram& t, int mod = 0);
FormalComplex kh_normalize(const FormalComplex& c, int n_plus, int n_minus);
FormalComplex kh_complex(const TangleDiagram& t, int mod = 0);

FormalComplex shift(const FormalComplex& c, int s, int m);
bool verify_d_squared(const FormalComplex& c);
// Graded degree of every nonzero differential entry (set of values).
std::vector<int> differential_degrees(const FormalComplex& c);

FormalComplex planar_compose_complexes(const PlanarArcDiagram& d,
                                       const std::vector<FormalComplex>& parts);
// Summand index bookkeeping for a planar composite.
struct CompositeIndex {
  // for composite height r and object k: per part (height, object index)
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> of;
  std::map<std::vector<std::pair<int, int>>, std::pair<int, int>> inv;
};
FormalComplex planar_compose_complexes(const PlanarArcDiagram& d,
                                       const std::vector<FormalComplex>& parts,
                                       CompositeIndex* idx);
// D(f_1, ..., f_d) for homological-degree-0 maps on the parts.
ChainMap planar_compose_maps(const PlanarArcDiagram& d,
                             const std::vector<ChainMap>& maps,
                             std::shared_ptr<const FormalComplex> src,
                             std::shared_ptr<const FormalComplex> tgt);

FormalComplex cone(const ChainMap& psi);

std::shared_ptr<const FormalComplex> share(FormalComplex c);
ChainMap identity_map(std::shared_ptr<const FormalComplex> c);
ChainMap zero_map(std::shared_ptr<const FormalComplex> s,
                  std::shared_ptr<const FormalComplex> t, int deg = 0);
ChainMap map_compose(const ChainMap& g, const ChainMap& f);  // g o f
ChainMap map_add(const ChainMap& a, const ChainMap& b, Coef kb = 1);
ChainMap map_scale(const ChainMap& a, Coef k);
ChainMap map_reduce(const ChainMap& a);
bool map_is_zero_reduced(const ChainMap& a);
bool maps_equal_reduced(const ChainMap& a, const ChainMap& b);
// d f - (-1)^deg f d == 0
bool is_chain_map(const ChainMap& f);
// Graded degrees of the nonzero entries.
std::vector<int> map_degrees(const ChainMap& f);
// The differential of a complex as a degree-1 self map.
ChainMap differential_map(std::shared_ptr<const FormalComplex> c);

// Isomorphism between a planar composite of cube complexes and the cube of
// the composed diagram: objects matched through the crossing ids, diagonal
// signs found by search. Returns nullopt if they do not match.
std::optional<ChainMap> cube_isomorphism(std::shared_ptr<const FormalComplex> a,
                                         std::shared_ptr<const FormalComplex> b);

nlohmann::json to_json(const FormalComplex& c);

}  // namespace kh
