#pragma once
// Small reference implementations the tests compare the library against.
// They are deliberately naive and share no code with src/.

#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

inline std::size_t largest_component(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  UnionFind uf(n);
  for (auto [a, b] : edges) uf.unite(a, b);
  std::map<std::size_t, std::size_t> sizes;
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, ++sizes[uf.find(i)]);
  return best;
}

// Ordinary least squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Sum of binary entropies computed straight from label counts.
inline double binary_entropy_sum(const std::map<std::string, int>& counts) {
  int total = 0;
  for (auto& kv : counts) total += kv.second;
  double h = 0.0;
  for (auto& kv : counts) {
    const double p = static_cast<double>(kv.second) / total;
    if (p > 0.0 && p < 1.0) h += -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  }
  return h;
}

}  // namespace oracle
