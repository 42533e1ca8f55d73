#include "kh/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace kh {

namespace {

struct Overflow {};

template <class T>
struct Num;

template <>
struct Num<int64_t> {
  static int64_t mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static int64_t sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
  }
  static int64_t gcd(int64_t a, int64_t b) { return std::gcd(a, b); }
  static int64_t div(int64_t a, int64_t b) { return a / b; }
  static bool neg(int64_t a) { return a < 0; }
  static bool one(int64_t a) { return a == 1; }
};

template <>
struct Num<mpz_class> {
  static mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
  static mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
  static mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
  }
  static mpz_class div(const mpz_class& a, const mpz_class& b) { return a / b; }
  static bool neg(const mpz_class& a) { return sgn(a) < 0; }
  static bool one(const mpz_class& a) { return a == 1; }
};

template <class T>
using Row = std::vector<std::pair<int, T>>;

template <class T>
void normalize(Row<T>& r) {
  if (r.empty()) return;
  T g = r[0].second < 0 ? T(-r[0].second) : r[0].second;
  for (size_t i = 1; i < r.size() && !Num<T>::one(g); ++i)
    g = Num<T>::gcd(g, r[i].second);
  if (Num<T>::neg(r[0].second)) g = -g;
  if (!Num<T>::one(g))
    for (auto& [c, v] : r) v = Num<T>::div(v, g);
}

// r := p * r - a * P where p, a are the leading coefficients.
template <class T>
Row<T> eliminate(const Row<T>& r, const Row<T>& P) {
  const T& a = r[0].second;
  const T& p = P[0].second;
  Row<T> out;
  out.reserve(r.size() + P.size());
  size_t i = 1, j = 1;
  bool unit = Num<T>::one(p);
  while (i < r.size() || j < P.size()) {
    if (j >= P.size() || (i < r.size() && r[i].first < P[j].first)) {
      out.push_back({r[i].first, unit ? r[i].second : Num<T>::mul(p, r[i].second)});
      ++i;
    } else if (i >= r.size() || P[j].first < r[i].first) {
      out.push_back({P[j].first, -Num<T>::mul(a, P[j].second)});
      ++j;
    } else {
      T v = Num<T>::sub(unit ? r[i].second : Num<T>::mul(p, r[i].second),
                        Num<T>::mul(a, P[j].second));
      if (v != 0) out.push_back({r[i].first, v});
      ++i;
      ++j;
    }
  }
  return out;
}

template <class T>
int rank_impl(int rows, const std::vector<Triplet>& e) {
  std::vector<Row<T>> R(rows);
  for (const auto& t : e)
    if (t.v) R[t.row].push_back({t.col, T(t.v)});
  for (auto& r : R) {
    std::sort(r.begin(), r.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    // merge duplicates
    Row<T> m;
    for (auto& [c, v] : r) {
      if (!m.empty() && m.back().first == c) m.back().second += v;
      else m.push_back({c, v});
    }
    std::erase_if(m, [](const auto& x) { return x.second == 0; });
    r = std::move(m);
  }
  std::vector<int> order(rows);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return R[x].size() < R[y].size(); });
  std::unordered_map<int, Row<T>> piv;
  for (int idx : order) {
    Row<T> r = std::move(R[idx]);
    normalize(r);
    while (!r.empty()) {
      auto it = piv.find(r[0].first);
      if (it == piv.end()) break;
      r = eliminate(r, it->second);
      normalize(r);
    }
    if (!r.empty()) piv.emplace(r[0].first, std::move(r));
  }
  return (int)piv.size();
}

}  // namespace

int rank_q(int rows, int cols, const std::vector<Triplet>& e) {
  (void)cols;
  try {
    return rank_impl<int64_t>(rows, e);
  } catch (const Overflow&) {
    return rank_impl<mpz_class>(rows, e);
  }
}

int rank_f2(int rows, int cols, const std::vector<Triplet>& e) {
  std::vector<std::vector<int>> cs(cols);
  for (const auto& t : e)
    if (t.v & 1) cs[t.col].push_back(t.row);
  (void)rows;
  auto f = independent_columns_f2(std::move(cs));
  return (int)std::count(f.begin(), f.end(), 1);
}

std::vector<char> independent_columns_f2(std::vector<std::vector<int>> cols) {
  std::vector<char> out(cols.size(), 0);
  // pivot: leading (largest) row index -> reduced column
  std::unordered_map<int, std::vector<int>> piv;
  std::vector<int> tmp;
  for (size_t k = 0; k < cols.size(); ++k) {
    auto& c = cols[k];
    std::sort(c.begin(), c.end());
    // cancel duplicate rows pairwise
    std::vector<int> v;
    for (int r : c) {
      if (!v.empty() && v.back() == r) v.pop_back();
      else v.push_back(r);
    }
    while (!v.empty()) {
      auto it = piv.find(v.back());
      if (it == piv.end()) break;
      tmp.clear();
      std::set_symmetric_difference(v.begin(), v.end(), it->second.begin(),
                                    it->second.end(), std::back_inserter(tmp));
      v.swap(tmp);
    }
    if (!v.empty()) {
      out[k] = 1;
      int lead = v.back();
      piv.emplace(lead, std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------- dense Q

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool QMatrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](const mpq_class& x) { return x == 0; });
}

QMatrix operator*(const QMatrix& x, const QMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("QMatrix *: shape");
  QMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const mpq_class& v = x(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        if (y(k, j) != 0) z(i, j) += v * y(k, j);
    }
  return z;
}

QMatrix operator+(const QMatrix& x, const QMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("QMatrix +: shape");
  QMatrix z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

QMatrix operator-(const QMatrix& x, const QMatrix& y) {
  return x + mpq_class(-1) * y;
}

QMatrix operator*(const mpq_class& k, const QMatrix& x) {
  QMatrix z = x;
  for (auto& v : z.a) v *= k;
  return z;
}

QMatrix transpose(const QMatrix& x) {
  QMatrix z(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
  return z;
}

QMatrix hcat(const QMatrix& x, const QMatrix& y) {
  if (x.rows != y.rows) throw std::invalid_argument("hcat: shape");
  QMatrix z(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) z(i, j) = x(i, j);
    for (int j = 0; j < y.cols; ++j) z(i, x.cols + j) = y(i, j);
  }
  return z;
}

std::vector<int> rref(QMatrix& m) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    mpq_class inv = 1 / m(r, c);
    for (int j = c; j < m.cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      mpq_class f = m(i, c);
      for (int j = c; j < m.cols; ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int rank(QMatrix m) { return (int)rref(m).size(); }

QMatrix nullspace(const QMatrix& m) {
  QMatrix r = m;
  auto piv = rref(r);
  std::vector<char> is_piv(m.cols, 0);
  for (int c : piv) is_piv[c] = 1;
  std::vector<int> free;
  for (int c = 0; c < m.cols; ++c)
    if (!is_piv[c]) free.push_back(c);
  QMatrix n(m.cols, (int)free.size());
  for (size_t k = 0; k < free.size(); ++k) {
    n(free[k], (int)k) = 1;
    for (size_t i = 0; i < piv.size(); ++i) n(piv[i], (int)k) = -r((int)i, free[k]);
  }
  return n;
}

std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b) {
  QMatrix aug = hcat(m, b);
  auto piv = rref(aug);
  QMatrix x(m.cols, b.cols);
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] >= m.cols) return std::nullopt;
    for (int j = 0; j < b.cols; ++j) x(piv[i], j) = aug((int)i, m.cols + j);
  }
  return x;
}

bool in_column_span_q(int rows, int cols, const std::vector<Triplet>& m,
                      const std::vector<std::pair<int, int64_t>>& b) {
  int r0 = rank_q(rows, cols, m);
  std::vector<Triplet> aug = m;
  for (auto [i, v] : b) aug.push_back({i, cols, v});
  return rank_q(rows, cols + 1, aug) == r0;
}

}  // namespace kh
