#pragma once

// Brute-force reference computations. Nothing here calls into the library's
// normal-form or solver code; the tests compare the two routes.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using Mat = std::vector<std::vector<i64>>;

/// Laplace expansion; only used on matrices up to 6 x 6.
inline i64 det(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  i64 total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    Mat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<i64> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[i][j]);
      minor.push_back(row);
    }
    i64 term = a[0][c] * det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, 0, cur, out);
  return out;
}

/// Determinantal divisors d_k = gcd of all k x k minors (d_0 = 1).
inline std::vector<i64> determinantal_divisors(const Mat& a, std::size_t rows, std::size_t cols) {
  std::vector<i64> d{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    i64 g = 0;
    for (const auto& rs : subsets(rows, k))
      for (const auto& cs : subsets(cols, k)) {
        Mat m;
        for (auto i : rs) {
          std::vector<i64> row;
          for (auto j : cs) row.push_back(a[i][j]);
          m.push_back(row);
        }
        g = std::gcd(g, det(m));
      }
    d.push_back(g < 0 ? -g : g);
  }
  return d;
}

/// SNF diagonal via s_k = d_k / d_{k-1}, zeros once a d_k vanishes.
inline std::vector<i64> smith_diagonal(const Mat& a, std::size_t rows, std::size_t cols) {
  auto d = determinantal_divisors(a, rows, cols);
  std::vector<i64> s;
  for (std::size_t k = 1; k < d.size(); ++k) s.push_back(d[k] == 0 ? 0 : d[k] / d[k - 1]);
  return s;
}

/// Rank over Q by fraction-free elimination in 64-bit (small inputs only).
inline std::size_t rank(Mat a) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      i64 f = a[i][c], g = a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] * g - a[r][j] * f;
      i64 h = 0;
      for (auto v : a[i]) h = std::gcd(h, v);
      if (h > 1)
        for (auto& v : a[i]) v /= h;
    }
    ++r;
  }
  return r;
}

/// |Z^n / span(columns)| by enumerating the image of the relation lattice in
/// (Z/D)^n, where D = |det| of a nonsingular maximal minor (so D Z^n lies in
/// the span). Returns nullopt when the quotient is infinite.
inline std::optional<i64> quotient_order(const std::vector<std::vector<i64>>& columns, std::size_t n) {
  if (n == 0) return 1;
  Mat rowsMat(n, std::vector<i64>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) rowsMat[i][j] = columns[j][i];
  if (rank(rowsMat) < n) return std::nullopt;
  i64 D = 0;
  for (const auto& cs : subsets(columns.size(), n)) {
    Mat m(n, std::vector<i64>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) m[i][k] = columns[cs[k]][i];
    i64 v = det(m);
    if (v != 0) {
      D = v < 0 ? -v : v;
      break;
    }
  }
  auto reduce = [&](std::vector<i64> v) {
    for (auto& x : v) x = ((x % D) + D) % D;
    return v;
  };
  std::set<std::vector<i64>> seen{std::vector<i64>(n, 0)};
  std::vector<std::vector<i64>> frontier{std::vector<i64>(n, 0)};
  while (!frontier.empty()) {
    std::vector<std::vector<i64>> next;
    for (const auto& v : frontier)
      for (const auto& g : columns) {
        std::vector<i64> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] + g[i];
        w = reduce(w);
        if (seen.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }
  i64 total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= D;
  return total / static_cast<i64>(seen.size());
}

/// Prime factorization of a positive integer by trial division.
inline std::map<std::uint64_t, int> trial_division(std::uint64_t n) {
  std::map<std::uint64_t, int> f;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  if (n > 1) ++f[n];
  return f;
}

}  // namespace oracle
