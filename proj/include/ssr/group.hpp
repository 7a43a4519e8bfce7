#pragma once

// Finite groups as validated multiplication tables (0-based element
// indices). Construction checks the Latin-square property, associativity,
// identity and inverses once; everything downstream trusts the table.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ssr {

struct FiniteGroup {
  std::size_t order = 0;
  std::vector<std::vector<std::size_t>> table;  // table[i][j] = index of g_i g_j
  std::size_t identity = 0;
  std::vector<std::size_t> inverse;

  std::size_t mul(std::size_t i, std::size_t j) const { return table[i][j]; }

  bool is_abelian() const {
    for (std::size_t i = 0; i < order; ++i)
      for (std::size_t j = i + 1; j < order; ++j)
        if (table[i][j] != table[j][i]) return false;
    return true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> commuting_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> ps;
    for (std::size_t i = 0; i < order; ++i)
      for (std::size_t j = i + 1; j < order; ++j)
        if (table[i][j] == table[j][i]) ps.emplace_back(i, j);
    return ps;
  }

  bool same_as(const FiniteGroup& o) const { return table == o.table; }

  static FiniteGroup from_table(std::vector<std::vector<std::size_t>> t) {
    FiniteGroup g;
    g.order = t.size();
    if (g.order == 0) throw std::invalid_argument("group table: empty");
    for (const auto& row : t) {
      if (row.size() != g.order) throw ShapeError("group table: not square");
      for (std::size_t v : row)
        if (v >= g.order) throw std::invalid_argument("group table: entry out of range");
    }
    // Latin square
    for (std::size_t i = 0; i < g.order; ++i) {
      std::vector<bool> seen_row(g.order, false), seen_col(g.order, false);
      for (std::size_t j = 0; j < g.order; ++j) {
        if (seen_row[t[i][j]] || seen_col[t[j][i]])
          throw std::invalid_argument("group table: rows/columns are not permutations");
        seen_row[t[i][j]] = seen_col[t[j][i]] = true;
      }
    }
    // associativity
    for (std::size_t a = 0; a < g.order; ++a)
      for (std::size_t b = 0; b < g.order; ++b)
        for (std::size_t c = 0; c < g.order; ++c)
          if (t[t[a][b]][c] != t[a][t[b][c]])
            throw std::invalid_argument("group table: associativity fails at (" + std::to_string(a) + "," +
                                        std::to_string(b) + "," + std::to_string(c) + ")");
    // identity
    bool found = false;
    for (std::size_t e = 0; e < g.order && !found; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < g.order; ++x) ok = ok && t[e][x] == x && t[x][e] == x;
      if (ok) {
        g.identity = e;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("group table: no identity element");
    // inverses
    g.inverse.assign(g.order, 0);
    for (std::size_t x = 0; x < g.order; ++x) {
      bool ok = false;
      for (std::size_t y = 0; y < g.order; ++y)
        if (t[x][y] == g.identity && t[y][x] == g.identity) {
          g.inverse[x] = y;
          ok = true;
          break;
        }
      if (!ok) throw std::invalid_argument("group table: missing inverse");
    }
    g.table = std::move(t);
    return g;
  }

  static FiniteGroup cyclic(std::size_t n) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return from_table(std::move(t));
  }

  // Index convention: (i, j) -> i * |B| + j.
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    const std::size_t n = a.order * b.order;
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t i1 = 0; i1 < a.order; ++i1)
      for (std::size_t i2 = 0; i2 < b.order; ++i2)
        for (std::size_t j1 = 0; j1 < a.order; ++j1)
          for (std::size_t j2 = 0; j2 < b.order; ++j2)
            t[i1 * b.order + i2][j1 * b.order + j2] = a.table[i1][j1] * b.order + b.table[i2][j2];
    return from_table(std::move(t));
  }

  // Z_2 x Z_2 with element order {e, a, b, ab}.
  static FiniteGroup klein_four() { return direct_product(cyclic(2), cyclic(2)); }

  // S_3 via composition of the six permutations of {0,1,2} in lexicographic
  // order; the only nonabelian group small enough for the test corpus.
  static FiniteGroup symmetric3() {
    const std::vector<std::vector<std::size_t>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto find = [&](const std::vector<std::size_t>& p) -> std::size_t {
      for (std::size_t k = 0; k < perms.size(); ++k)
        if (perms[k] == p) return k;
      throw std::invalid_argument("symmetric3: composition left the table");
    };
    std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        std::vector<std::size_t> comp(3);
        for (std::size_t x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
        t[i][j] = find(comp);
      }
    return from_table(std::move(t));
  }
};

}  // namespace ssr
