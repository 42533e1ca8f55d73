#pragma once
#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kh/tqft.hpp"

namespace kh {

enum class Field { Q, F2 };
std::string field_name(Field f);

struct BettiTable {
  std::string field;                     // "Q", "F2" or "b3"
  std::map<std::pair<int, int>, int> b;  // (r, j) -> dimension, no zeros
  // For b3: values at j below `floor_j` equal those at floor_j.
  std::optional<int> floor_j;

  int at(int r, int j) const;
  int total() const;
  bool operator==(const BettiTable& o) const { return b == o.b; }
};

// Per-q-block homology of a graded complex over a field.
BettiTable betti(const AlgebraicComplex& c, Field f, int threads = 1);
// Filtered Betti numbers of the F3 theory at H = 1.
BettiTable betti_b3(const FormalComplex& c, int threads = 1);
// Total dimension of homology (ungraded complexes welcome).
int total_dimension(const AlgebraicComplex& c, Field f, int threads = 1);

// Convenience for link diagrams.
BettiTable khovanov_betti(const TangleDiagram& t, Field f, int threads = 1);
int lee_dimension(const TangleDiagram& t, int threads = 1);

// Torsion invariant factors (> 1) of integral homology per (r, j).
std::map<std::pair<int, int>, std::vector<mpz_class>> integral_torsion(
    const AlgebraicComplex& c);

struct LaurentPoly {
  std::map<int, Coef> t;  // exponent -> nonzero coefficient

  static LaurentPoly mono(int e, Coef c = 1);
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(Coef k) const;
  bool operator==(const LaurentPoly&) const = default;
  bool is_zero() const { return t.empty(); }
  std::string str(const std::string& var = "q") const;
};
LaurentPoly qint();  // q + q^-1

// Noncrossing matching of the boundary points -> coefficient.
using SkeinElement = std::map<std::vector<int>, LaurentPoly>;
std::string skein_str(const SkeinElement& s);

LaurentPoly graded_euler(const AlgebraicComplex& c);
LaurentPoly graded_euler(const FormalComplex& c);
SkeinElement skein_class(const FormalComplex& c);
// Independent state-sum expansion by the skein relations.
SkeinElement jones_skein(const TangleDiagram& t);
LaurentPoly jones_hat(const TangleDiagram& t);
// J with J-hat(q) = (q + q^-1) J(q^2), if the division is exact.
std::optional<LaurentPoly> jones_standard(const LaurentPoly& hat);

// Plain-text grid in the layout of the classic Betti tables: rows are q
// degrees (top = largest), columns homological degrees, boxes list the
// values of every table, comma separated. A final "<j" row shows the b3
// floor when a b3 table is present.
std::string betti_grid(const std::vector<const BettiTable*>& tables);

nlohmann::json to_json(const BettiTable& t);
nlohmann::json to_json(const LaurentPoly& p);

}  // namespace kh
