#include <fstream>
#include <map>
#include <sstream>

#include "gallery_common.hpp"

namespace dsp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

PosetSpec parse_poset(std::istream& in) {
  PosetSpec p;
  std::map<std::string, int> ids;
  auto id = [&](const std::string& name) {
    if (name.empty()) throw NotAPoset("empty element name");
    auto [it, fresh] = ids.emplace(name, static_cast<int>(p.elements.size()));
    if (fresh) p.elements.push_back(name);
    return it->second;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    // "a < b < c" is read as a < b and b < c; a lone name declares an element.
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t k; (k = line.find('<', start)) != std::string::npos; start = k + 1)
      parts.push_back(trim(line.substr(start, k - start)));
    parts.push_back(trim(line.substr(start)));
    try {
      int prev = id(parts[0]);
      for (std::size_t k = 1; k < parts.size(); ++k) {
        const int cur = id(parts[k]);
        p.less.emplace_back(prev, cur);
        prev = cur;
      }
    } catch (const NotAPoset& e) {
      throw NotAPoset("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  order_relation(p);
  return p;
}

PosetSpec parse_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotAPoset("cannot open " + path);
  return parse_poset(in);
}

PosetSpec chain_poset(int n) {
  PosetSpec p;
  for (int i = 0; i < n; ++i) p.elements.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) p.less.emplace_back(i, i + 1);
  return p;
}

PosetSpec antichain_poset(int n) {
  PosetSpec p;
  for (int i = 0; i < n; ++i) p.elements.push_back(std::string(1, static_cast<char>('a' + i)));
  return p;
}

PosetSpec divisibility_poset(const std::vector<int>& values) {
  PosetSpec p;
  for (int v : values) p.elements.push_back(std::to_string(v));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j)
      if (i != j && values[i] != 0 && values[j] % values[i] == 0)
        p.less.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return p;
}

std::vector<std::vector<bool>> order_relation(const PosetSpec& p) {
  const std::size_t n = p.elements.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (auto [a, b] : p.less) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
      throw NotAPoset("relation refers to an unknown element");
    le[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (le[i][j] && le[j][i]) throw NotAPoset("cycle through " + p.elements[i] + " and " + p.elements[j]);
  return le;
}

SPtr nerve_of_poset(const PosetSpec& p, int N) {
  const auto le = order_relation(p);
  const int n = static_cast<int>(p.elements.size());
  auto render = [names = p.elements](const Payload& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "<=" : "") + names[c[i]];
    return s;
  };
  auto trivial = [](const Payload& x, int, const Perm&) { return x; };
  std::vector<AGPtr> levels;
  for (int k = 0; k <= N; ++k) {
    std::vector<ActionGroupoid::Object> objs;
    std::vector<Payload> chains;
    for (int x = 0; x < n; ++x) chains.push_back({x});
    for (int len = 1; len <= k; ++len) {
      std::vector<Payload> next;
      for (const auto& c : chains)
        for (int y = 0; y < n; ++y)
          if (le[c.back()][y]) {
            Payload d = c;
            d.push_back(y);
            next.push_back(std::move(d));
          }
      chains = std::move(next);
    }
    for (auto& c : chains) objs.push_back({std::move(c), 0, 0});
    levels.push_back(std::make_shared<ActionGroupoid>("N_" + std::to_string(k), std::vector<ActionGroupoid::Block>{{0, {}}},
                                                      std::move(objs), trivial, render));
  }
  auto none = [](const Payload&, const Perm&) { return Perm{}; };
  auto face = [&](int k, int i) {
    return detail::payload_functor(
        levels[k], levels[k - 1],
        [i](const Payload& c) {
          Payload d = c;
          d.erase(d.begin() + i);
          return d;
        },
        none, "d_" + std::to_string(i));
  };
  auto degen = [&](int k, int i) {
    return detail::payload_functor(
        levels[k], levels[k + 1],
        [i](const Payload& c) {
          Payload d = c;
          d.insert(d.begin() + i, c[i]);
          return d;
        },
        none, "s_" + std::to_string(i));
  };
  return detail::assemble("nerve", N, 0, levels, face, degen);
}

FiniteCategory poset_category(const PosetSpec& p) {
  const auto le = order_relation(p);
  FiniteCategory C;
  C.name = "poset";
  const int n = static_cast<int>(p.elements.size());
  C.grade.assign(n, 0);
  C.aut_degree.assign(n, 0);
  C.aut_gens.assign(n, {});
  C.homs = [le](int a, int b) { return le[a][b] ? std::vector<Payload>{Payload{}} : std::vector<Payload>{}; };
  C.compose = [](int, int, int, const Payload&, const Payload&) { return Payload{}; };
  C.identity = [](int) { return Payload{}; };
  C.act = [](int, int, const Payload& f, const Perm&, const Perm&) { return f; };
  C.render = [names = p.elements](int a, int b, const Payload&) { return names[a] + "<=" + names[b]; };
  C.string_key = [names = p.elements](const std::vector<int>& objs) {
    std::string s;
    for (std::size_t i = 0; i < objs.size(); ++i) s += (i ? "<=" : "") + names[objs[i]];
    return s;
  };
  return C;
}

}  // namespace dsp
