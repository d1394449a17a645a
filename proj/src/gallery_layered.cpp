// Species of labelled structures with a layer function l: [n] -> {0, .., k-1}.  Level k
// of the simplicial groupoid has k layers: d_0 and d_k delete the first and last layer,
// inner faces merge two adjacent layers and degeneracies insert an empty layer.  Labels
// are never sorted by layer, so disjoint union is strictly compatible with all of this.

#include <algorithm>
#include <functional>

#include "gallery_common.hpp"

namespace dsp {

namespace {

struct Species {
  std::string name;
  std::function<std::vector<Payload>(int n)> structures;
  std::function<bool(int n, const Payload& layer, const Payload& s)> admissible;
  // Structure induced on the sorted label subset `kept`.
  std::function<Payload(int n, const Payload& s, const std::vector<int>& kept)> restrict;
  // Structure transported along the relabelling i -> g[i].
  std::function<Payload(int n, const Payload& s, const Perm& g)> relabel;
  std::function<Payload(int na, const Payload& a, int nb, const Payload& b)> disjoint_union;
  // Iso-invariant text of (layer, s) at the level with k layers.
  std::function<std::string(int n, const Payload& layer, const Payload& s, int k)> key;
};

struct Parts {
  int n;
  Payload layer, s;
};

Parts split(const Payload& p) {
  const int n = p[0];
  return {n, Payload(p.begin() + 1, p.begin() + 1 + n), Payload(p.begin() + 1 + n, p.end())};
}

Payload join(int n, const Payload& layer, const Payload& s) {
  Payload p{n};
  p.insert(p.end(), layer.begin(), layer.end());
  p.insert(p.end(), s.begin(), s.end());
  return p;
}

std::string digits(const Payload& v) {
  std::string s;
  for (int x : v) s += std::to_string(x);
  return s;
}

MonoidalSpace layered_space(const Species& sp, int max_size, int N) {
  auto species = std::make_shared<Species>(sp);
  std::vector<AGPtr> levels;
  for (int k = 0; k <= N; ++k) {
    std::vector<ActionGroupoid::Block> blocks;
    std::vector<ActionGroupoid::Object> objs;
    for (int n = 0; n <= max_size; ++n) {
      blocks.push_back({static_cast<std::size_t>(n), symmetric_generators(n)});
      if (k == 0 && n > 0) continue;
      const auto structs = sp.structures(n);
      Payload layer(n, 0);
      // Odometer over all layer functions [n] -> {0..k-1}.
      while (true) {
        for (const auto& s : structs)
          if (sp.admissible(n, layer, s)) objs.push_back({join(n, layer, s), n, n});
        int pos = 0;
        while (pos < n && layer[pos] == k - 1) layer[pos++] = 0;
        if (pos == n) break;
        ++layer[pos];
      }
    }
    auto act = [species](const Payload& p, int, const Perm& g) {
      auto [n, layer, s] = split(p);
      Payload l2(n);
      for (int i = 0; i < n; ++i) l2[g[i]] = layer[i];
      return join(n, l2, species->relabel(n, s, g));
    };
    auto render = [k](const Payload& p) {
      auto [n, layer, s] = split(p);
      std::string out = "n=" + std::to_string(n);
      if (k > 1) out += " layers=" + digits(layer);
      if (!s.empty()) out += " data=" + digits(s);
      return out;
    };
    auto canon = [species, k](const Payload& p) {
      auto [n, layer, s] = split(p);
      return species->key(n, layer, s, k);
    };
    levels.push_back(std::make_shared<ActionGroupoid>(sp.name + "_" + std::to_string(k), std::move(blocks),
                                                      std::move(objs), act, render, canon));
  }

  // Labels surviving the deletion of one layer.
  auto survivors = [](const Payload& layer, int deleted) {
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(layer.size()); ++i)
      if (layer[i] != deleted) kept.push_back(i);
    return kept;
  };
  auto face = [&](int k, int i) {
    const std::string nm = "d_" + std::to_string(i);
    if (i == 0 || i == k) {
      const int deleted = i == 0 ? 0 : k - 1;
      auto obj = [species, survivors, deleted](const Payload& p) {
        auto [n, layer, s] = split(p);
        const auto kept = survivors(layer, deleted);
        Payload l2;
        for (int x : kept) l2.push_back(layer[x] > deleted ? layer[x] - 1 : layer[x]);
        return join(static_cast<int>(kept.size()), l2, species->restrict(n, s, kept));
      };
      auto arr = [survivors, deleted](const Payload& p, const Perm& g) {
        auto [n, layer, s] = split(p);
        const auto kept = survivors(layer, deleted);
        std::vector<int> img;
        for (int x : kept) img.push_back(g[x]);
        std::sort(img.begin(), img.end());
        return detail::restrict_perm(g, kept, img);
      };
      return detail::payload_functor(levels[k], levels[k - 1], obj, arr, nm);
    }
    auto obj = [i](const Payload& p) {
      auto [n, layer, s] = split(p);
      for (int& l : layer)
        if (l >= i) --l;
      return join(n, layer, s);
    };
    return detail::payload_functor(levels[k], levels[k - 1], obj, [](const Payload&, const Perm& g) { return g; },
                                   nm);
  };
  auto degen = [&](int k, int i) {
    auto obj = [i](const Payload& p) {
      auto [n, layer, s] = split(p);
      for (int& l : layer)
        if (l >= i) ++l;
      return join(n, layer, s);
    };
    return detail::payload_functor(levels[k], levels[k + 1], obj, [](const Payload&, const Perm& g) { return g; },
                                   "s_" + std::to_string(i));
  };
  SPtr X = detail::assemble(sp.name, N, max_size, levels, face, degen);
  SPtr sq = product_simplicial(X, X, max_size);
  SimpMap mu{sq, X, {}, "disjoint union"};
  for (int k = 0; k <= N; ++k) {
    auto L = levels[k];
    auto obj = [species, L](const Payload& pair) {
      auto [na, la, sa] = split(L->data(pair[0]));
      auto [nb, lb, sb] = split(L->data(pair[1]));
      la.insert(la.end(), lb.begin(), lb.end());
      return join(na + nb, la, species->disjoint_union(na, sa, nb, sb));
    };
    mu.comp.push_back(detail::payload_functor(detail::action_level(sq->levels[k]), L, obj,
                                              [](const Payload&, const Perm& g) { return g; }, "mu"));
  }
  return {X, sq, mu};
}

// ---------------------------------------------------------------- forests

// Parent arrays, -1 for roots.
std::vector<Payload> all_forests(int n) {
  std::vector<Payload> out;
  Payload parent(n, -1);
  auto acyclic = [&] {
    for (int x = 0; x < n; ++x) {
      int y = x;
      for (int steps = 0; y >= 0; ++steps) {
        if (steps > n) return false;
        y = parent[y];
      }
    }
    return true;
  };
  std::function<void(int)> rec = [&](int x) {
    if (x == n) {
      if (acyclic()) out.push_back(parent);
      return;
    }
    for (int p = -1; p < n; ++p) {
      if (p == x) continue;
      parent[x] = p;
      rec(x + 1);
    }
    parent[x] = -1;
  };
  rec(0);
  return out;
}

std::string forest_key(int n, const Payload& layer, const Payload& parent, int k) {
  const bool layered = k > 1;
  std::vector<std::vector<int>> children(n);
  std::vector<int> roots;
  for (int x = 0; x < n; ++x) (parent[x] < 0 ? roots : children[parent[x]]).push_back(x);
  std::function<std::string(int)> node = [&](int x) {
    std::vector<std::string> cs;
    for (int c : children[x]) cs.push_back(node(c));
    std::sort(cs.begin(), cs.end());
    std::string s = layered ? std::to_string(layer[x]) : "";
    s += "(";
    for (const auto& c : cs) s += c;
    return s + ")";
  };
  std::vector<std::string> ts;
  for (int r : roots) ts.push_back(node(r));
  std::sort(ts.begin(), ts.end());
  std::string s = "[";
  for (const auto& t : ts) s += t;
  return s + "]";
}

Species forest_species() {
  Species sp;
  sp.name = "H";
  sp.structures = all_forests;
  sp.admissible = [](int n, const Payload& layer, const Payload& parent) {
    for (int x = 0; x < n; ++x)
      if (parent[x] >= 0 && layer[parent[x]] < layer[x]) return false;
    return true;
  };
  sp.restrict = [](int n, const Payload& parent, const std::vector<int>& kept) {
    std::vector<int> pos(n, -1);
    for (std::size_t a = 0; a < kept.size(); ++a) pos[kept[a]] = static_cast<int>(a);
    Payload out;
    for (int x : kept) out.push_back(parent[x] < 0 ? -1 : pos[parent[x]]);
    return out;
  };
  sp.relabel = [](int n, const Payload& parent, const Perm& g) {
    Payload out(n);
    for (int x = 0; x < n; ++x) out[g[x]] = parent[x] < 0 ? -1 : g[parent[x]];
    return out;
  };
  sp.disjoint_union = [](int na, const Payload& a, int, const Payload& b) {
    Payload out = a;
    for (int p : b) out.push_back(p < 0 ? -1 : p + na);
    return out;
  };
  sp.key = forest_key;
  return sp;
}

// ---------------------------------------------------------------- graphs

// Index of the pair u < v in the upper-triangle bit vector.
int pair_index(int n, int u, int v) {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

Payload relabel_graph(int n, const Payload& adj, const Perm& g) {
  Payload out(adj.size(), 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[pair_index(n, u, v)]) out[pair_index(n, g[u], g[v])] = 1;
  return out;
}

std::string graph_text(int n, const Payload& adj) {
  std::string s = std::to_string(n) + ";";
  bool first = true;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[pair_index(n, u, v)]) {
        s += (first ? "" : ",") + std::to_string(u) + "-" + std::to_string(v);
        first = false;
      }
  return s;
}

std::string graph_key(int n, const Payload& layer, const Payload& adj, int k) {
  const bool layered = k > 1;
  // Smallest (layers, complemented edge bits) over all relabellings; complementing makes
  // graphs with edges on small labels come first.
  std::vector<int> best;
  Payload best_adj, best_layer;
  bool first = true;
  for (const auto& g : all_permutations(n)) {
    Payload l2(n);
    for (int i = 0; i < n; ++i) l2[g[i]] = layered ? layer[i] : 0;
    Payload a2 = relabel_graph(n, adj, g);
    std::vector<int> cand(l2.begin(), l2.end());
    for (int b : a2) cand.push_back(1 - b);
    if (first || cand < best) {
      first = false;
      best = std::move(cand);
      best_adj = std::move(a2);
      best_layer = std::move(l2);
    }
  }
  std::string s = graph_text(n, best_adj);
  if (layered) s += "|" + digits(best_layer);
  return s;
}

Species graph_species() {
  Species sp;
  sp.name = "G";
  sp.structures = [](int n) {
    const int m = n * (n - 1) / 2;
    std::vector<Payload> out;
    for (int mask = 0; mask < (1 << m); ++mask) {
      Payload adj(m);
      for (int b = 0; b < m; ++b) adj[b] = (mask >> b) & 1;
      out.push_back(std::move(adj));
    }
    return out;
  };
  sp.admissible = [](int, const Payload&, const Payload&) { return true; };
  sp.restrict = [](int n, const Payload& adj, const std::vector<int>& kept) {
    const int m = static_cast<int>(kept.size());
    Payload out(m * (m - 1) / 2, 0);
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) out[pair_index(m, a, b)] = adj[pair_index(n, kept[a], kept[b])];
    return out;
  };
  sp.relabel = relabel_graph;
  sp.disjoint_union = [](int na, const Payload& a, int nb, const Payload& b) {
    const int n = na + nb;
    Payload out(n * (n - 1) / 2, 0);
    for (int u = 0; u < na; ++u)
      for (int v = u + 1; v < na; ++v) out[pair_index(n, u, v)] = a[pair_index(na, u, v)];
    for (int u = 0; u < nb; ++u)
      for (int v = u + 1; v < nb; ++v) out[pair_index(n, na + u, na + v)] = b[pair_index(nb, u, v)];
    return out;
  };
  sp.key = graph_key;
  return sp;
}

// ---------------------------------------------------------------- finite sets

Species set_species() {
  Species sp;
  sp.name = "B";
  sp.structures = [](int) { return std::vector<Payload>{Payload{}}; };
  sp.admissible = [](int, const Payload&, const Payload&) { return true; };
  sp.restrict = [](int, const Payload&, const std::vector<int>&) { return Payload{}; };
  sp.relabel = [](int, const Payload&, const Perm&) { return Payload{}; };
  sp.disjoint_union = [](int, const Payload&, int, const Payload&) { return Payload{}; };
  sp.key = [](int n, const Payload& layer, const Payload&, int k) {
    if (k <= 1) return std::to_string(n);
    std::vector<int> sizes(k, 0);
    for (int l : layer) ++sizes[l];
    std::string s = "(";
    for (int i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
    return s + ")";
  };
  return sp;
}

}  // namespace

MonoidalSpace binomial_B(int max_size, int N) { return layered_space(set_species(), max_size, N); }

MonoidalSpace forests_H(int max_nodes, int N) { return layered_space(forest_species(), max_nodes, N); }
MonoidalSpace graphs_G(int max_vertices, int N) { return layered_space(graph_species(), max_vertices, N); }

std::optional<std::string> graph_alias(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'K' && name[0] != 'E')) return std::nullopt;
  if (!std::all_of(name.begin() + 1, name.end(), ::isdigit)) return std::nullopt;
  const int n = std::stoi(name.substr(1));
  Payload adj(n * (n - 1) / 2, name[0] == 'K' ? 1 : 0);
  return graph_text(n, adj);
}

}  // namespace dsp
