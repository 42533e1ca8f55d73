#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "kh/checks.hpp"
#include "kh/corpus.hpp"
#include "kh/homology.hpp"

using namespace kh;

namespace {

// (r, j, bQ, bF2, b3); the b3 rows below the last listed j repeat it.
struct Cell {
  int r, j, q, f2, b3;
};

const std::vector<Cell> kFigureEight = {
    {2, 5, 1, 1, 1},   {1, 3, 0, 1, 0},   {2, 3, 0, 1, 1},
    {0, 1, 1, 1, 1},   {1, 1, 1, 1, 0},   {-1, -1, 1, 1, 1},
    {0, -1, 1, 1, 2},  {-2, -3, 0, 1, 0}, {-1, -3, 0, 1, 1},
    {0, -3, 0, 0, 2},  {-2, -5, 1, 1, 0}, {0, -5, 0, 0, 2}};

const std::vector<Cell> k10n136 = {
    {3, 9, 1, 1, 1},   {2, 7, 1, 2, 1},   {3, 7, 0, 1, 1},
    {1, 5, 1, 2, 1},   {2, 5, 1, 2, 1},   {0, 3, 2, 3, 2},
    {1, 3, 1, 2, 1},   {-1, 1, 1, 3, 1},  {0, 1, 2, 4, 3},
    {-2, -1, 1, 2, 1}, {-1, -1, 2, 3, 1}, {0, -1, 1, 1, 2},
    {-3, -3, 1, 2, 1}, {-2, -3, 1, 2, 1}, {0, -3, 0, 0, 2},
    {-4, -5, 0, 1, 0}, {-3, -5, 1, 2, 1}, {0, -5, 0, 0, 2},
    {-4, -7, 1, 1, 0}, {0, -7, 0, 0, 2}};

CheckResult table_check(const std::string& name, const std::vector<Cell>& want,
                  int threads) {
  auto t = load_diagram(name);
  auto q = khovanov_betti(t, Field::Q, threads);
  auto f = khovanov_betti(t, Field::F2, threads);
  auto b = betti_b3(kh_complex(t), threads);
  int rmin = 0, rmax = 0, jmin = 0, jmax = 0;
  for (auto& c : want) {
    rmin = std::min(rmin, c.r), rmax = std::max(rmax, c.r);
    jmin = std::min(jmin, c.j), jmax = std::max(jmax, c.j);
  }
  int bad = 0, cells = 0;
  std::string first;
  // Every box of the grid plus two rows below it and a margin outside.
  for (int r = rmin - 1; r <= rmax + 1; ++r)
    for (int j = jmin - 4; j <= jmax + 2; j += 2) {
      Cell w{r, j, 0, 0, 0};
      for (auto& c : want)
        if (c.r == r && c.j == j) w = c;
      if (j < jmin)
        for (auto& c : want)
          if (c.r == r && c.j == jmin) w.b3 = c.b3;
      ++cells;
      if (q.at(r, j) != w.q || f.at(r, j) != w.f2 || b.at(r, j) != w.b3) {
        if (!bad++)
          first = "(" + std::to_string(r) + "," + std::to_string(j) + ") got " +
                  std::to_string(q.at(r, j)) + "," + std::to_string(f.at(r, j)) +
                  "," + std::to_string(b.at(r, j));
      }
    }
  std::string det = std::to_string(cells - bad) + "/" + std::to_string(cells) +
                    " cells ok";
  if (bad) det += "; first mismatch " + first;
  return {name + " table", bad == 0, det};
}

}  // namespace

int main() {
  int threads = (int)std::max(1u, std::thread::hardware_concurrency());
  using Crit = std::function<std::vector<CheckResult>()>;
  std::vector<std::pair<std::string, Crit>> crits = {
      {"4_1 betti table",
       [&] { return std::vector{table_check("4_1", kFigureEight, threads)}; }},
      {"10_136 betti table",
       [&] { return std::vector{table_check("10_136", k10n136, threads)}; }},
      {"euler = jones", [] { return std::vector{check_jones(8)}; }},
      {"reidemeister invariance",
       [&] { return std::vector{check_invariance(100, 1, 6, threads)}; }},
      {"planar composition",
       [&] { return std::vector{check_planar(6, threads)}; }},
      {"relation engine",
       [] { return std::vector{check_relations(), check_reduce(1000, 1)}; }},
      {"degrees", [] { return std::vector{check_degrees(1000, 1)}; }},
      {"movie moves", [&] { return std::vector{check_movies(0, threads)}; }},
      {"lee dimension", [&] { return std::vector{check_lee(3, 10, threads)}; }},
      {"frobenius", [] { return std::vector{check_frobenius()}; }}};
  int failed = 0;
  for (size_t i = 0; i < crits.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
      for (auto& r : crits[i].second()) {
        ok = ok && r.pass;
        detail += (detail.empty() ? "" : " | ") + r.name + ": " + r.detail;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("error: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count();
    std::printf("criterion %2zu %-24s %s  (%.2fs) %s\n", i + 1,
                crits[i].first.c_str(), ok ? "PASS" : "FAIL", s, detail.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed ? 1 : 0;
}
