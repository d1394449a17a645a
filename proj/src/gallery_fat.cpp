#include <map>
#include <numeric>
#include <unordered_map>

#include "gallery_common.hpp"

namespace dsp {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

// Hom lists with payload -> index lookup.
struct HomTable {
  std::vector<std::vector<std::vector<Payload>>> list;
  std::vector<std::vector<std::unordered_map<Payload, int, PayloadHash>>> index;

  explicit HomTable(const FiniteCategory& C) {
    const int n = C.num_objects();
    list.assign(n, std::vector<std::vector<Payload>>(n));
    index.assign(n, std::vector<std::unordered_map<Payload, int, PayloadHash>>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        list[a][b] = C.homs(a, b);
        for (std::size_t k = 0; k < list[a][b].size(); ++k) index[a][b].emplace(list[a][b][k], static_cast<int>(k));
      }
  }
  int find(int a, int b, const Payload& f) const {
    auto it = index[a][b].find(f);
    if (it == index[a][b].end()) throw InvalidCategory("morphism outside its hom-set");
    return it->second;
  }
};

std::vector<Payload> perm_group_homs(const std::vector<Perm>& elems) {
  std::vector<Payload> out;
  for (const auto& g : elems) out.emplace_back(g.begin(), g.end());
  return out;
}

Perm to_perm(const Payload& p) { return Perm(p.begin(), p.end()); }

}  // namespace

void validate_category(const FiniteCategory& C) {
  const int n = C.num_objects();
  if (C.aut_degree.size() != static_cast<std::size_t>(n) || C.aut_gens.size() != static_cast<std::size_t>(n))
    throw InvalidCategory(C.name + ": automorphism data does not match the objects");
  HomTable H(C);
  auto in = [&](int a, int b, const Payload& f) { return H.index[a][b].count(f) > 0; };
  for (int a = 0; a < n; ++a) {
    if (!in(a, a, C.identity(a))) throw InvalidCategory(C.name + ": identity missing from an endo-hom-set");
    for (const auto& g : C.aut_gens[a])
      if (g.size() != C.aut_degree[a] || !is_permutation(g))
        throw InvalidCategory(C.name + ": automorphism generator of the wrong degree");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (const auto& f : H.list[a][b]) {
        if (C.compose(a, a, b, C.identity(a), f) != f || C.compose(a, b, b, f, C.identity(b)) != f)
          throw InvalidCategory(C.name + ": unit law fails at " + C.render(a, b, f));
        for (const auto& ha : C.aut_gens[a])
          for (const auto& hb : C.aut_gens[b])
            if (!in(a, b, C.act(a, b, f, ha, hb)))
              throw InvalidCategory(C.name + ": automorphisms do not preserve " + C.render(a, b, f));
        if (C.act(a, b, f, identity_perm(C.aut_degree[a]), identity_perm(C.aut_degree[b])) != f)
          throw InvalidCategory(C.name + ": identity automorphisms act nontrivially");
        for (int c = 0; c < n; ++c)
          for (const auto& g : H.list[b][c]) {
            const Payload gf = C.compose(a, b, c, f, g);
            if (!in(a, c, gf)) throw InvalidCategory(C.name + ": composite outside its hom-set");
            for (const auto& hb : C.aut_gens[b]) {
              const Perm ia = identity_perm(C.aut_degree[a]), ic = identity_perm(C.aut_degree[c]);
              const Payload lhs = C.compose(a, b, c, C.act(a, b, f, ia, hb), C.act(b, c, g, hb, ic));
              if (lhs != gf) throw InvalidCategory(C.name + ": automorphisms do not cancel in composites");
            }
            for (int d = 0; d < n; ++d)
              for (const auto& h : H.list[c][d])
                if (C.compose(a, c, d, gf, h) != C.compose(a, b, d, f, C.compose(b, c, d, g, h)))
                  throw InvalidCategory(C.name + ": composition is not associative");
          }
      }
}

SPtr fat_nerve(const FiniteCategory& C, int N, std::optional<int> grade_bound) {
  auto H = std::make_shared<HomTable>(C);
  auto cat = std::make_shared<FiniteCategory>(C);
  const int n_obj = C.num_objects();
  auto allowed = [&](int o) { return !grade_bound || C.grade[o] <= *grade_bound; };

  auto render = [cat, H](const Payload& p) {
    const int k = static_cast<int>(p.size()) / 2;
    if (k == 0) return cat->render(p[0], p[0], cat->identity(p[0]));
    std::vector<std::string> parts;
    for (int i = 1; i <= k; ++i) parts.push_back(cat->render(p[i - 1], p[i], H->list[p[i - 1]][p[i]][p[k + i]]));
    return join(parts, " ; ");
  };
  ActionGroupoid::Render canon;
  if (C.string_key)
    canon = [cat](const Payload& p) {
      const std::size_t k = p.size() / 2;
      return cat->string_key(std::vector<int>(p.begin(), p.begin() + k + 1));
    };

  std::vector<AGPtr> levels;
  for (int k = 0; k <= N; ++k) {
    std::vector<ActionGroupoid::Block> blocks;
    std::map<std::vector<int>, int> block_of;
    std::vector<ActionGroupoid::Object> objs;
    // Extend object tuples and morphism choices one step at a time.
    std::vector<std::pair<std::vector<int>, std::vector<int>>> strings;
    for (int o = 0; o < n_obj; ++o)
      if (allowed(o)) strings.push_back({{o}, {}});
    for (int j = 1; j <= k; ++j) {
      std::vector<std::pair<std::vector<int>, std::vector<int>>> next;
      for (const auto& [os, is] : strings)
        for (int o = 0; o < n_obj; ++o) {
          if (!allowed(o)) continue;
          const auto& homs = H->list[os.back()][o];
          for (std::size_t m = 0; m < homs.size(); ++m) {
            auto os2 = os;
            auto is2 = is;
            os2.push_back(o);
            is2.push_back(static_cast<int>(m));
            next.emplace_back(std::move(os2), std::move(is2));
          }
        }
      strings = std::move(next);
    }
    for (const auto& [os, is] : strings) {
      auto [it, fresh] = block_of.emplace(os, static_cast<int>(blocks.size()));
      if (fresh) {
        std::vector<std::vector<Perm>> per;
        std::vector<std::size_t> degs;
        for (int o : os) {
          per.push_back(C.aut_gens[o]);
          degs.push_back(C.aut_degree[o]);
        }
        blocks.push_back({std::accumulate(degs.begin(), degs.end(), std::size_t{0}), direct_sum_generators(per, degs)});
      }
      Payload p(os.begin(), os.end());
      p.insert(p.end(), is.begin(), is.end());
      objs.push_back({std::move(p), it->second, C.grade[os.back()]});
    }
    auto act = [cat, H, k](const Payload& p, int, const Perm& g) {
      std::vector<Perm> h;
      std::size_t off = 0;
      for (int i = 0; i <= k; ++i) {
        const std::size_t d = cat->aut_degree[p[i]];
        h.push_back(slice(g, off, d));
        off += d;
      }
      Payload q = p;
      for (int i = 1; i <= k; ++i) {
        const int a = p[i - 1], b = p[i];
        q[k + i] = H->find(a, b, cat->act(a, b, H->list[a][b][p[k + i]], h[i - 1], h[i]));
      }
      return q;
    };
    levels.push_back(std::make_shared<ActionGroupoid>(C.name + "_" + std::to_string(k), std::move(blocks),
                                                      std::move(objs), act, render, canon));
  }

  // Offset of the automorphism slice of object i in a string payload.
  auto offset = [cat](const Payload& p, int i) {
    std::size_t off = 0;
    for (int j = 0; j < i; ++j) off += cat->aut_degree[p[j]];
    return off;
  };
  auto face = [&](int k, int i) {
    auto obj = [cat, H, k, i](const Payload& p) {
      std::vector<int> os(p.begin(), p.begin() + k + 1), is(p.begin() + k + 1, p.end());
      if (i == 0) {
        os.erase(os.begin());
        is.erase(is.begin());
      } else if (i == k) {
        os.pop_back();
        is.pop_back();
      } else {
        const int a = os[i - 1], b = os[i], c = os[i + 1];
        const Payload gf = cat->compose(a, b, c, H->list[a][b][is[i - 1]], H->list[b][c][is[i]]);
        is[i - 1] = H->find(a, c, gf);
        is.erase(is.begin() + i);
        os.erase(os.begin() + i);
      }
      Payload q(os.begin(), os.end());
      q.insert(q.end(), is.begin(), is.end());
      return q;
    };
    auto arr = [cat, offset, i](const Payload& p, const Perm& g) {
      return detail::cut(g, offset(p, i), cat->aut_degree[p[i]]);
    };
    return detail::payload_functor(levels[k], levels[k - 1], obj, arr, "d_" + std::to_string(i));
  };
  auto degen = [&](int k, int i) {
    auto obj = [cat, H, k, i](const Payload& p) {
      std::vector<int> os(p.begin(), p.begin() + k + 1), is(p.begin() + k + 1, p.end());
      const int o = os[i];
      os.insert(os.begin() + i, o);
      is.insert(is.begin() + i, H->find(o, o, cat->identity(o)));
      Payload q(os.begin(), os.end());
      q.insert(q.end(), is.begin(), is.end());
      return q;
    };
    auto arr = [cat, offset, i](const Payload& p, const Perm& g) {
      const std::size_t off = offset(p, i), d = cat->aut_degree[p[i]];
      return direct_sum(direct_sum(slice(g, 0, off + d), slice(g, off, d)), slice(g, off + d, g.size() - off - d));
    };
    return detail::payload_functor(levels[k], levels[k + 1], obj, arr, "s_" + std::to_string(i));
  };
  return detail::assemble("N(" + C.name + ")", N, grade_bound ? *grade_bound : -1, levels, face, degen);
}

FiniteCategory group_category(std::string name, std::size_t degree, std::vector<Perm> gens) {
  FiniteCategory C;
  C.name = std::move(name);
  C.grade = {0};
  C.aut_degree = {degree};
  C.aut_gens = {gens};
  auto elems = std::make_shared<std::vector<Payload>>(perm_group_homs(group_closure(gens, degree)));
  C.homs = [elems](int, int) { return *elems; };
  C.compose = [](int, int, int, const Payload& f, const Payload& g) {
    const Perm h = compose(to_perm(g), to_perm(f));
    return Payload(h.begin(), h.end());
  };
  C.identity = [degree](int) {
    const Perm id = identity_perm(degree);
    return Payload(id.begin(), id.end());
  };
  C.act = [](int, int, const Payload& f, const Perm& ha, const Perm& hb) {
    const Perm h = compose(hb, compose(to_perm(f), inverse(ha)));
    return Payload(h.begin(), h.end());
  };
  C.render = [](int, int, const Payload& f) { return to_string(to_perm(f)); };
  return C;
}

namespace {

std::string sizes_key(const std::vector<int>& objs) {
  std::vector<std::string> parts;
  for (int o : objs) parts.push_back(std::to_string(o));
  return join(parts, "->");
}

std::string injection_text(int a, int b, const Payload& f) {
  std::vector<std::string> parts;
  for (int x : f) parts.push_back(std::to_string(x));
  return std::to_string(a) + "->" + std::to_string(b) + ":(" + join(parts, ",") + ")";
}

// All injections [a] -> [b] as image lists, optionally only the monotone ones.
std::vector<Payload> injections(int a, int b, bool monotone) {
  std::vector<Payload> out;
  Payload cur;
  std::vector<bool> used(b, false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == a) {
      out.push_back(cur);
      return;
    }
    for (int y = monotone && !cur.empty() ? cur.back() + 1 : 0; y < b; ++y) {
      if (used[y]) continue;
      used[y] = true;
      cur.push_back(y);
      rec();
      cur.pop_back();
      used[y] = false;
    }
  };
  rec();
  return out;
}

FiniteCategory finite_sets(int max_size, bool monotone) {
  FiniteCategory C;
  C.name = monotone ? "OI" : "I";
  for (int a = 0; a <= max_size; ++a) {
    C.grade.push_back(a);
    C.aut_degree.push_back(monotone ? 0 : static_cast<std::size_t>(a));
    C.aut_gens.push_back(monotone ? std::vector<Perm>{} : symmetric_generators(a));
  }
  C.homs = [monotone](int a, int b) { return injections(a, b, monotone); };
  C.compose = [](int, int, int, const Payload& f, const Payload& g) {
    Payload h;
    for (int x : f) h.push_back(g[x]);
    return h;
  };
  C.identity = [](int a) {
    Payload id(a);
    std::iota(id.begin(), id.end(), 0);
    return id;
  };
  if (monotone) {
    C.act = [](int, int, const Payload& f, const Perm&, const Perm&) { return f; };
  } else {
    C.act = [](int, int, const Payload& f, const Perm& ha, const Perm& hb) {
      const Perm inv = inverse(ha);
      Payload h(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) h[i] = hb[f[inv[i]]];
      return h;
    };
    C.string_key = sizes_key;
  }
  C.render = injection_text;
  return C;
}

}  // namespace

FiniteCategory injections_category(int max_size) { return finite_sets(max_size, false); }
FiniteCategory monotone_injections_category(int max_size) { return finite_sets(max_size, true); }

MonoidalSpace injections_I(int max_size, int N) {
  const FiniteCategory C = injections_category(max_size);
  SPtr I = fat_nerve(C, N, max_size);
  SPtr sq = product_simplicial(I, I, max_size);
  auto H = std::make_shared<HomTable>(C);
  SimpMap mu{sq, I, {}, "disjoint union"};
  for (int k = 0; k <= N; ++k) {
    auto src = detail::action_level(sq->levels[k]);
    auto L = detail::action_level(I->levels[k]);
    auto obj = [L, H, k](const Payload& pair) {
      const Payload& a = L->data(pair[0]);
      const Payload& b = L->data(pair[1]);
      Payload q(k + 1);
      for (int i = 0; i <= k; ++i) q[i] = a[i] + b[i];
      for (int i = 1; i <= k; ++i) {
        Payload h = H->list[a[i - 1]][a[i]][a[k + i]];
        for (int x : H->list[b[i - 1]][b[i]][b[k + i]]) h.push_back(x + a[i]);
        q.push_back(H->find(q[i - 1], q[i], h));
      }
      return q;
    };
    // (h_0 + ... + h_k) + (g_0 + ... + g_k)  ->  (h_0 + g_0) + ... + (h_k + g_k)
    auto arr = [L, k](const Payload& pair, const Perm& g) {
      const Payload& a = L->data(pair[0]);
      const Payload& b = L->data(pair[1]);
      std::size_t da = 0;
      for (int i = 0; i <= k; ++i) da += a[i];
      Perm out;
      std::size_t oa = 0, ob = da;
      for (int i = 0; i <= k; ++i) {
        out = direct_sum(out, direct_sum(slice(g, oa, a[i]), slice(g, ob, b[i])));
        oa += a[i];
        ob += b[i];
      }
      return out;
    };
    mu.comp.push_back(detail::payload_functor(src, L, obj, arr, "mu"));
  }
  return {I, sq, mu};
}

SimpMap dec_equivalence(const Dec& dec_bot_B, const SPtr& I) {
  const SPtr& D = dec_bot_B.space;
  if (D->N != I->N) throw TruncationMismatch("Dec_bot(B) and I are truncated at different levels");
  const int max_size = I->grade_bound >= 0 ? I->grade_bound : 0;
  auto H = std::make_shared<HomTable>(injections_category(max_size));
  SimpMap F{D, I, {}, "Dec_bot(B) -> I"};
  for (int k = 0; k <= D->N; ++k) {
    auto src = detail::action_level(D->levels[k]);
    auto tgt = detail::action_level(I->levels[k]);
    // Labels with layer <= j, for j = 0..k.
    auto segments = [k](const Payload& p) {
      const int n = p[0];
      std::vector<std::vector<int>> y(k + 1);
      for (int j = 0; j <= k; ++j)
        for (int x = 0; x < n; ++x)
          if (p[1 + x] <= j) y[j].push_back(x);
      return y;
    };
    auto obj = [H, k, segments](const Payload& p) {
      const auto y = segments(p);
      Payload q;
      for (const auto& s : y) q.push_back(static_cast<int>(s.size()));
      for (int j = 1; j <= k; ++j) {
        Payload f;
        for (int x : y[j - 1]) f.push_back(static_cast<int>(std::lower_bound(y[j].begin(), y[j].end(), x) - y[j].begin()));
        q.push_back(H->find(q[j - 1], q[j], f));
      }
      return q;
    };
    auto arr = [k, segments](const Payload& p, const Perm& g) {
      const auto y = segments(p);
      Perm out;
      for (int j = 0; j <= k; ++j) {
        std::vector<int> img;
        for (int x : y[j]) img.push_back(g[x]);
        std::sort(img.begin(), img.end());
        out = direct_sum(out, detail::restrict_perm(g, y[j], img));
      }
      return out;
    };
    F.comp.push_back(detail::payload_functor(src, tgt, obj, arr, "dec_equivalence"));
  }
  return F;
}

SimpMap oi_to_i(int max_size, int N) {
  const FiniteCategory OI = monotone_injections_category(max_size), IC = injections_category(max_size);
  SPtr X = fat_nerve(OI, N, max_size), Y = fat_nerve(IC, N, max_size);
  auto HO = std::make_shared<HomTable>(OI), HI = std::make_shared<HomTable>(IC);
  SimpMap F{X, Y, {}, "OI -> I"};
  for (int k = 0; k <= N; ++k) {
    auto obj = [HO, HI, k](const Payload& p) {
      Payload q = p;
      for (int i = 1; i <= k; ++i) q[k + i] = HI->find(p[i - 1], p[i], HO->list[p[i - 1]][p[i]][p[k + i]]);
      return q;
    };
    auto arr = [k](const Payload& p, const Perm&) {
      std::size_t d = 0;
      for (int i = 0; i <= k; ++i) d += p[i];
      return identity_perm(d);
    };
    F.comp.push_back(detail::payload_functor(detail::action_level(X->levels[k]), detail::action_level(Y->levels[k]),
                                             obj, arr, "forget"));
  }
  return F;
}

}  // namespace dsp
