#pragma once
#include <climits>
#include <vector>

namespace kh {

// A crossingless picture in a disk: a matching of the boundary points plus
// some closed circles, carrying a formal degree shift.
struct Smoothing {
  std::vector<int> match;  // partner of every boundary point
  int ncirc = 0;
  int shift = 0;
  // Bookkeeping tags (smallest edge label on the curve). Not part of equality.
  std::vector<int> ctag;  // per circle, circles sorted by tag
  std::vector<int> atag;  // per boundary point, tag of the arc through it

  int npts() const { return (int)match.size(); }
  bool operator==(const Smoothing& o) const {
    return match == o.match && ncirc == o.ncirc && shift == o.shift;
  }
  bool operator!=(const Smoothing& o) const { return !(*this == o); }
  bool same_shape(const Smoothing& o) const {
    return match == o.match && ncirc == o.ncirc;
  }
  bool same_tags(const Smoothing& o) const {
    return *this == o && ctag == o.ctag;
  }
  Smoothing shifted(int m) const {
    Smoothing s = *this;
    s.shift += m;
    return s;
  }
};

inline Smoothing circles_only(int k, int shift = 0) {
  Smoothing s;
  s.ncirc = k;
  s.shift = shift;
  s.ctag.assign(k, INT_MAX);
  return s;
}

inline Smoothing arcs_only(std::vector<int> match, int shift = 0) {
  Smoothing s;
  s.match = std::move(match);
  s.shift = shift;
  s.atag.assign(s.match.size(), INT_MAX);
  return s;
}

// Number of components of the matching-union for two matchings on the same
// point set, and the component index per point (ordered by smallest point).
int arc_cycles(const std::vector<int>& a, const std::vector<int>& b,
               std::vector<int>* cyc);

bool noncrossing(const std::vector<int>& match);

}  // namespace kh
