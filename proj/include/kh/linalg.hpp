#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace kh {

struct Triplet {
  int row, col;
  int64_t v;
};

// Exact ranks of sparse integer matrices.
int rank_q(int rows, int cols, const std::vector<Triplet>& e);
int rank_f2(int rows, int cols, const std::vector<Triplet>& e);

// Columns over F2 given as row-index lists; flags which columns are
// independent of the columns before them (in the given order).
std::vector<char> independent_columns_f2(std::vector<std::vector<int>> cols);

// Dense matrix over Q for the small systems of the movie checks.
struct QMatrix {
  int rows = 0, cols = 0;
  std::vector<mpq_class> a;  // row-major

  QMatrix() = default;
  QMatrix(int r, int c) : rows(r), cols(c), a((size_t)r * c) {}
  mpq_class& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
  const mpq_class& operator()(int i, int j) const {
    return a[(size_t)i * cols + j];
  }
  static QMatrix identity(int n);
  bool is_zero() const;
  bool operator==(const QMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

QMatrix operator*(const QMatrix& x, const QMatrix& y);
QMatrix operator+(const QMatrix& x, const QMatrix& y);
QMatrix operator-(const QMatrix& x, const QMatrix& y);
QMatrix operator*(const mpq_class& k, const QMatrix& x);
QMatrix transpose(const QMatrix& x);
// Column concatenation [x | y].
QMatrix hcat(const QMatrix& x, const QMatrix& y);

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(QMatrix& m);
int rank(QMatrix m);
// Columns form a basis of the null space.
QMatrix nullspace(const QMatrix& m);
// Some x with m x = b (b may have several columns), or nullopt.
std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b);

// Sparse least-effort feasibility over Q: is b in the column span of m?
// Both given as triplets; b has a single column.
bool in_column_span_q(int rows, int cols, const std::vector<Triplet>& m,
                      const std::vector<std::pair<int, int64_t>>& b);

}  // namespace kh
