#pragma once
#include <array>
#include <string>
#include <vector>

#include "kh/bracket.hpp"

namespace kh {

// Polynomial in one variable with nonnegative exponents; coefficient
// arithmetic is reduced modulo `mod` when it is nonzero.
struct Poly {
  std::vector<Coef> c;  // c[k] = coefficient of x^k, trimmed

  Poly() = default;
  Poly(Coef k) { if (k) c = {k}; }  // NOLINT: implicit constants
  static Poly x(int k = 1, Coef coef = 1);

  bool is_zero() const { return c.empty(); }
  bool is_const() const { return c.size() <= 1; }
  Coef constant() const { return c.empty() ? 0 : c[0]; }
  int lowest() const;  // smallest exponent with nonzero coefficient
  Poly& add(const Poly& o, int mod);
  Poly mul(const Poly& o, int mod) const;
  Coef eval(Coef at, int mod) const;
  void trim(int mod);
  bool operator==(const Poly&) const = default;
  std::string str(const std::string& var) const;
};

// Rank-2 Frobenius algebra on the basis v+ (index 0, degree +1) and
// v- (index 1, degree -1). Unit `unit` (called epsilon), counit `counit`
// (called eta).
struct FrobeniusSpec {
  std::string name;
  std::string var;   // polynomial variable name, empty if constant
  int var_deg = 0;   // q-degree of the variable
  int mod = 0;       // coefficient modulus
  bool graded = true;
  bool descends = true;  // satisfies S, T, 4Tu
  std::array<Poly, 2> unit;
  std::array<Poly, 2> counit;
  Poly m[2][2][2];      // m(v_a (x) v_b) = sum_c m[a][b][c] v_c
  Poly delta[2][2][2];  // Delta(v_a) = sum_{b,c} delta[a][b][c] v_b (x) v_c
};

FrobeniusSpec spec_khovanov(int mod = 0);
FrobeniusSpec spec_lee();
FrobeniusSpec spec_f3();
FrobeniusSpec spec_fc();
FrobeniusSpec spec_by_name(const std::string& name, int mod = 0);

// Dense tensors over V: a linear map V^{(x)a} -> V^{(x)b} as a 2^b x 2^a
// matrix of polynomials; bit i of a state index is the v- flag of leg i.
struct LinMap {
  int in = 0, out = 0;
  std::vector<Poly> a;  // row-major (out state, in state)
  Poly& at(int o, int i) { return a[(size_t)o * ((size_t)1 << in) + i]; }
  const Poly& at(int o, int i) const {
    return a[(size_t)o * ((size_t)1 << in) + i];
  }
  bool operator==(const LinMap&) const = default;
};
LinMap lin_zero(int in, int out);
LinMap lin_compose(const LinMap& g, const LinMap& f, int mod);
LinMap lin_tensor(const LinMap& f, const LinMap& g, int mod);  // f on low legs
LinMap lin_id(int legs);
LinMap lin_swap();
LinMap lin_unit(const FrobeniusSpec& s);
LinMap lin_counit(const FrobeniusSpec& s);
LinMap lin_m(const FrobeniusSpec& s);
LinMap lin_delta(const FrobeniusSpec& s);

// Value of one closed-diagram cobordism generator as a linear map from the
// top circles to the bottom circles.
LinMap eval_surface(const FrobeniusSpec& s, const Surface& surf, int ntop,
                    int nbot);
LinMap eval_cobordism(const FrobeniusSpec& s, const Cobordism& c);

struct AxiomReport {
  bool associative = false, coassociative = false, commutative = false,
       cocommutative = false, unit = false, counit = false, frobenius = false,
       sphere = false, torus = false, four_tu = false, homogeneous = false;
  Poly sphere_value, torus_value;
  bool all_frobenius() const {
    return associative && coassociative && commutative && cocommutative &&
           unit && counit && frobenius;
  }
};
AxiomReport check_axioms(const FrobeniusSpec& s);
// The 4Tu vectors L and R of the (cap^4 + tubes) computation in V^{(x)4}.
std::pair<LinMap, LinMap> four_tu_sides(const FrobeniusSpec& s);

// Sparse matrix of polynomials.
struct Entry {
  int row, col;
  Poly v;
};
struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<Entry> e;  // sorted by (col, row), no zeros
};

struct AlgebraicComplex {
  int r0 = 0;
  std::vector<std::vector<int>> qdeg;  // per height, basis q-degrees
  std::vector<PolyMatrix> d;           // d[k]: height r0+k -> r0+k+1
  int mod = 0;
  std::string var;
  int var_deg = 0;
  bool graded = true;

  int r1() const { return r0 + (int)qdeg.size() - 1; }
  int dim(int r) const;
};

AlgebraicComplex apply_functor(const FrobeniusSpec& s, const FormalComplex& c);
// Matrix of a cobordism matrix on the basis used by apply_functor.
PolyMatrix functor_matrix(const FrobeniusSpec& s, const CobMatrix& m,
                          const std::vector<Smoothing>& src,
                          const std::vector<Smoothing>& tgt);
// Per source height r, the matrix from height r to r + deg.
std::map<int, PolyMatrix> apply_functor_map(const FrobeniusSpec& s,
                                            const ChainMap& f);
// Substitute a value for the variable (e.g. H = 1).
AlgebraicComplex specialize(const AlgebraicComplex& c, Coef at);
bool verify_d_squared(const AlgebraicComplex& c);
// Set of (target q - source q + var_deg * exponent) over all entry terms.
std::vector<int> entry_degrees(const AlgebraicComplex& c);

nlohmann::json to_json(const AlgebraicComplex& c);

}  // namespace kh
