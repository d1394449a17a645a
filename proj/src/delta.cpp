#include "dsp/delta.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

namespace dsp {

DeltaMap::DeltaMap(int dom_, int cod_, std::vector<int> img_) : dom(dom_), cod(cod_), img(std::move(img_)) {
  if (dom < 0 || cod < 0) throw InvalidDeltaMap("negative ordinal");
  if (static_cast<int>(img.size()) != dom + 1) throw InvalidDeltaMap("image list has the wrong length");
  for (int i = 0; i <= dom; ++i) {
    if (img[i] < 0 || img[i] > cod) throw InvalidDeltaMap("image out of range: " + std::to_string(img[i]));
    if (i && img[i] < img[i - 1]) throw InvalidDeltaMap("images are not weakly increasing");
  }
}

DeltaMap identity_map(int n) {
  std::vector<int> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = i;
  return {n, n, v};
}

DeltaMap coface(int n, int i) {
  if (n < 1 || i < 0 || i > n) throw InvalidDeltaMap("coface index out of range");
  std::vector<int> v(n);
  for (int j = 0; j < n; ++j) v[j] = j < i ? j : j + 1;
  return {n - 1, n, v};
}

DeltaMap codegeneracy(int n, int i) {
  if (n < 0 || i < 0 || i > n) throw InvalidDeltaMap("codegeneracy index out of range");
  std::vector<int> v(n + 2);
  for (int j = 0; j <= n + 1; ++j) v[j] = j <= i ? j : j - 1;
  return {n + 1, n, v};
}

DeltaMap compose(const DeltaMap& g, const DeltaMap& f) {
  if (f.cod != g.dom) throw NotComposable("cannot compose " + to_string(g) + " after " + to_string(f));
  std::vector<int> v(f.dom + 1);
  for (int i = 0; i <= f.dom; ++i) v[i] = g(f(i));
  return {f.dom, g.cod, v};
}

bool is_active(const DeltaMap& f) { return f(0) == 0 && f(f.dom) == f.cod; }

bool is_inert(const DeltaMap& f) {
  for (int i = 0; i < f.dom; ++i)
    if (f(i + 1) != f(i) + 1) return false;
  return true;
}

DeltaKind classify(const DeltaMap& f) {
  const bool a = is_active(f), i = is_inert(f);
  if (a && i) return DeltaKind::Both;
  if (a) return DeltaKind::Active;
  if (i) return DeltaKind::Inert;
  return DeltaKind::Neither;
}

std::string to_string(DeltaKind k) {
  switch (k) {
    case DeltaKind::Active: return "active";
    case DeltaKind::Inert: return "inert";
    case DeltaKind::Neither: return "neither";
    case DeltaKind::Both: return "both";
  }
  return "?";
}

ActiveInert active_inert_factorize(const DeltaMap& f) {
  const int lo = f(0), k = f(f.dom) - lo;
  std::vector<int> a(f.dom + 1), in(k + 1);
  for (int i = 0; i <= f.dom; ++i) a[i] = f(i) - lo;
  for (int j = 0; j <= k; ++j) in[j] = j + lo;
  return {{f.dom, k, a}, {k, f.cod, in}};
}

DeltaMap wedge(const DeltaMap& g1, const DeltaMap& g2) {
  if (!is_active(g1) || !is_active(g2)) throw NotActive("wedge needs active maps");
  std::vector<int> v(g1.img);
  for (int i = 1; i <= g2.dom; ++i) v.push_back(g2(i) + g1.cod);
  return {g1.dom + g2.dom, g1.cod + g2.cod, v};
}

bool DeltaSquare::commutes() const {
  if (top.dom != right.cod || left.dom != bottom.cod || right.dom != bottom.dom || top.cod != left.cod) return false;
  return compose(top, right) == compose(left, bottom);
}

DeltaSquare pushout_active_inert(const DeltaMap& g, const DeltaMap& i) {
  if (!is_active(g)) throw NotActive(to_string(g) + " is not active");
  if (!is_inert(i)) throw NotInert(to_string(i) + " is not inert");
  if (g.dom != i.dom) throw NotComposable("pushout needs a common domain");
  const int a = i(0), b = i.cod - i(i.dom);
  const DeltaMap top = wedge(wedge(identity_map(a), g), identity_map(b));
  std::vector<int> inc(g.cod + 1);
  for (int j = 0; j <= g.cod; ++j) inc[j] = j + a;
  const DeltaMap left{g.cod, a + g.cod + b, inc};
  return {top, left, i, g, "pushout of " + to_string(g) + " along " + to_string(i)};
}

std::string to_string(const Generator& g) {
  return (g.kind == Generator::Face ? "d^" : "s^") + std::to_string(g.index);
}

std::vector<Generator> generator_decomposition(const DeltaMap& f) {
  std::vector<Generator> out;
  int level = f.dom;
  for (int j = f.dom - 1; j >= 0; --j)
    if (f(j) == f(j + 1)) out.push_back({Generator::Degeneracy, --level, j});
  std::vector<bool> hit(f.cod + 1, false);
  for (int v : f.img) hit[v] = true;
  for (int i = 0; i <= f.cod; ++i)
    if (!hit[i]) out.push_back({Generator::Face, ++level, i});
  return out;
}

DeltaMap generator_map(const Generator& g) {
  return g.kind == Generator::Face ? coface(g.level, g.index) : codegeneracy(g.level, g.index);
}

DeltaMap recompose(int dom, const std::vector<Generator>& gens) {
  DeltaMap f = identity_map(dom);
  for (const auto& g : gens) f = compose(generator_map(g), f);
  return f;
}

std::vector<DeltaSquare> decomposition_axiom_squares(int N) {
  if (N < 2) throw LevelOutOfRange("decomposition squares need level N >= 2");
  std::vector<DeltaSquare> out;
  auto add = [&](const DeltaMap& g, const DeltaMap& i, std::string desc) {
    DeltaSquare sq = pushout_active_inert(g, i);
    sq.desc = std::move(desc);
    out.push_back(std::move(sq));
  };
  add(codegeneracy(0, 0), coface(2, 0), "s_1 / d_0 on X_1");
  add(codegeneracy(0, 0), coface(2, 2), "s_0 / d_2 on X_1");
  for (int n = 2; n + 1 <= N; ++n) {
    for (int i = 1; i < n; ++i) {
      add(coface(n, i), coface(n, 0),
          "d_" + std::to_string(i + 1) + " / d_0 on X_" + std::to_string(n + 1) + " (inner d_" + std::to_string(i) + ")");
      add(coface(n, i), coface(n, n),
          "d_" + std::to_string(i) + " / d_" + std::to_string(n + 1) + " on X_" + std::to_string(n + 1) +
              " (inner d_" + std::to_string(i) + ")");
    }
  }
  return out;
}

std::vector<DeltaSquare> segal_axiom_squares(int N) {
  if (N < 2) throw LevelOutOfRange("Segal squares need level N >= 2");
  std::vector<DeltaSquare> out;
  for (int n = 1; n + 1 <= N; ++n)
    out.push_back({coface(n + 1, 0), coface(n + 1, n + 1), coface(n, n), coface(n, 0),
                   "d_0 / d_" + std::to_string(n + 1) + " on X_" + std::to_string(n + 1)});
  return out;
}

std::vector<DeltaSquare> bonus_squares(int N) {
  std::vector<DeltaSquare> out;
  auto lvl = [](int n) { return "X_" + std::to_string(n); };
  for (int n = 0; n + 2 <= N; ++n) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n + 1; ++j) {
        if (i < j)
          out.push_back({coface(n + 1, j), codegeneracy(n + 1, i), codegeneracy(n, i), coface(n + 2, j + 1),
                         "d_" + std::to_string(j) + " / s_" + std::to_string(i) + " on " + lvl(n + 1)});
        else
          out.push_back({coface(n + 1, j), codegeneracy(n + 1, i + 1), codegeneracy(n, i), coface(n + 2, j),
                         "d_" + std::to_string(j) + " / s_" + std::to_string(i + 1) + " on " + lvl(n + 1)});
      }
    for (int j = 1; j <= n + 1; ++j)
      for (int i = 0; i < j; ++i)
        out.push_back({codegeneracy(n, j - 1), codegeneracy(n, i), codegeneracy(n + 1, i), codegeneracy(n + 1, j),
                       "s_" + std::to_string(j - 1) + " / s_" + std::to_string(i) + " on " + lvl(n)});
  }
  return out;
}

std::vector<DeltaMap> all_maps(int dom, int cod) {
  std::vector<DeltaMap> out;
  std::vector<int> v(dom + 1, 0);
  while (true) {
    out.emplace_back(dom, cod, v);
    int k = dom;
    while (k >= 0 && v[k] == cod) --k;
    if (k < 0) break;
    ++v[k];
    for (int j = k + 1; j <= dom; ++j) v[j] = v[k];
  }
  return out;
}

std::vector<DeltaMap> active_maps(int dom, int cod) {
  std::vector<DeltaMap> out;
  for (auto& f : all_maps(dom, cod))
    if (is_active(f)) out.push_back(std::move(f));
  return out;
}

std::vector<SplittingSquare> splitting_squares(int N) {
  if (N < 1) throw LevelOutOfRange("splitting squares need level N >= 1");
  std::vector<SplittingSquare> out;
  for (int m = 0; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      for (auto& g : active_maps(n, m)) {
        SplittingSquare d{g, {}, {}, {}};
        for (int i = 1; i <= n; ++i) {
          const int lo = g(i - 1), mi = g(i) - lo;
          d.parts.push_back({1, mi, {0, mi}});
          std::vector<int> seg(mi + 1);
          for (int j = 0; j <= mi; ++j) seg[j] = lo + j;
          d.segments.push_back({mi, m, seg});
          d.edges.push_back({1, n, {i - 1, i}});
        }
        out.push_back(std::move(d));
      }
  return out;
}

std::string to_string(const DeltaMap& f) {
  std::string s = "[" + std::to_string(f.dom) + "]->[" + std::to_string(f.cod) + "]:(";
  for (int i = 0; i <= f.dom; ++i) s += (i ? "," : "") + std::to_string(f(i));
  return s + ")";
}

DeltaMap parse_delta_map(const std::string& text) {
  static const std::regex re(R"(\s*\[(\d+)\]\s*->\s*\[(\d+)\]\s*:\s*\(([\d,\s]*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw InvalidDeltaMap("cannot parse map '" + text + "'");
  std::vector<int> img;
  std::string body = m[3];
  std::replace(body.begin(), body.end(), ',', ' ');
  std::istringstream in(body);
  for (int v; in >> v;) img.push_back(v);
  return {std::stoi(m[1]), std::stoi(m[2]), img};
}

}  // namespace dsp
