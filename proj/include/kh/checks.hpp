#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace kh {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// S, T, 4Tu, 3S1, 3S2 and neck cutting on every generator with at most
// three components over small closed and arc boundaries.
CheckResult check_relations();
// reduce(reduce(c)) == reduce(c) and linearity on random cobordisms.
CheckResult check_reduce(int samples = 1000, uint64_t seed = 1);
// Elementary degrees, additivity on random composites, degree-0
// differentials on the corpus.
CheckResult check_degrees(int samples = 1000, uint64_t seed = 1);
// d^2 = 0 for every corpus diagram, formally and after the functor.
CheckResult check_dsquared(int max_crossings = 8);
// Random single Reidemeister moves keep the Q and F2 tables.
CheckResult check_invariance(int samples = 100, uint64_t seed = 1,
                             int max_crossings = 6, int threads = 1);
// Composition of one-crossing complexes against the direct complex.
CheckResult check_planar(int max_crossings = 6, int threads = 1);
// Graded Euler characteristic against the state-sum Jones polynomial.
CheckResult check_jones(int max_crossings = 8);
// Lee homology: 2 for knots, 2^c for c-component links.
CheckResult check_lee(int max_components = 3, int max_crossings = 8,
                      int threads = 1);
// Sphere, torus and 4Tu for the Khovanov algebra.
CheckResult check_frobenius();
// One movie move (1..15), or all but 10 when k == 0.
CheckResult check_movies(int k = 0, int threads = 1);

}  // namespace kh
