#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsp/rational.hpp"

namespace testsupport {

using dsp::Rational;

// Independent forest oracle.  A forest is a parent array (-1 for roots).
using Forest = std::vector<int>;

inline std::string forest_key(const Forest& p, const std::vector<bool>& keep) {
  const int n = static_cast<int>(p.size());
  std::function<std::string(int)> node = [&](int v) {
    std::vector<std::string> kids;
    for (int c = 0; c < n; ++c)
      if (keep[c] && p[c] == v) kids.push_back(node(c));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
  };
  std::vector<std::string> trees;
  for (int v = 0; v < n; ++v)
    if (keep[v] && (p[v] < 0 || !keep[p[v]])) trees.push_back(node(v));
  std::sort(trees.begin(), trees.end());
  std::string s = "[";
  for (auto& t : trees) s += t;
  return s + "]";
}

inline bool acyclic(const Forest& p) {
  for (std::size_t v = 0; v < p.size(); ++v) {
    int x = static_cast<int>(v);
    for (std::size_t steps = 0; x >= 0; ++steps) {
      if (steps > p.size()) return false;
      x = p[x];
    }
  }
  return true;
}

// One parent array per iso class of forests with n nodes.
inline std::map<std::string, Forest> forests_with(int n) {
  std::map<std::string, Forest> out;
  Forest p(n, -1);
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      if (acyclic(p)) out.emplace(forest_key(p, std::vector<bool>(n, true)), p);
      return;
    }
    for (int q = -1; q < n; ++q) {
      if (q == v) continue;
      p[v] = q;
      rec(v + 1);
    }
  };
  rec(0);
  return out;
}

// Admissible cuts: the crown is a set of nodes closed under taking children, the trunk is the rest.
inline std::map<std::pair<std::string, std::string>, int> cut_oracle(const Forest& p) {
  const int n = static_cast<int>(p.size());
  std::map<std::pair<std::string, std::string>, int> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<bool> crown(n), trunk(n);
    bool ok = true;
    for (int v = 0; v < n; ++v) {
      crown[v] = mask >> v & 1;
      trunk[v] = !crown[v];
    }
    for (int v = 0; v < n; ++v)
      if (p[v] >= 0 && crown[p[v]] && !crown[v]) ok = false;
    if (ok) ++out[{forest_key(p, crown), forest_key(p, trunk)}];
  }
  return out;
}

// Ordered vertex bipartitions of a graph given by its vertex count and edge list.
// Graphs on at most three vertices are determined by (vertices, edges).
inline std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> subset_oracle(
    int n, const std::vector<std::pair<int, int>>& edges) {
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    int na = __builtin_popcount(mask), ea = 0, eb = 0;
    for (auto [u, v] : edges) {
      bool a = mask >> u & 1, b = mask >> v & 1;
      if (a && b) ++ea;
      if (!a && !b) ++eb;
    }
    ++out[{{na, ea}, {n - na, eb}}];
  }
  return out;
}

inline std::pair<int, int> graph_shape(const std::string& key) {
  auto semi = key.find(';');
  return {std::stoi(key.substr(0, semi)), static_cast<int>(std::count(key.begin(), key.end(), '-'))};
}

inline Rational gauss_oracle(int q, int n, int k) {
  Rational num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    Rational a = 1, b = 1;
    for (int j = 0; j < n - i; ++j) a *= q;
    for (int j = 0; j < i + 1; ++j) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

}  // namespace testsupport
