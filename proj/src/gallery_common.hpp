#pragma once

// Helpers shared by the gallery constructors.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "dsp/gallery.hpp"

namespace dsp::detail {

using PayloadMap = std::function<Payload(const Payload&)>;
using ArrowMap = std::function<Perm(const Payload&, const Perm&)>;

// Functor between action groupoids given on payloads.
inline Functor payload_functor(const AGPtr& src, const AGPtr& tgt, const PayloadMap& obj, const ArrowMap& arr,
                               std::string name) {
  return Functor::tabulated(
      src, tgt,
      [src, tgt, obj](Obj x) {
        const Obj y = tgt->find(obj(src->data(x)));
        if (y < 0) throw ObjectNotFound(tgt->name() + ": no image for " + src->render(x));
        return y;
      },
      [src, arr](Obj x, const Perm& g) { return arr(src->data(x), g); }, std::move(name));
}

inline AGPtr action_level(const GPtr& g) {
  auto a = std::dynamic_pointer_cast<const ActionGroupoid>(g);
  if (!a) throw InvalidGroupoid(g->name() + " is not presented by explicit objects");
  return a;
}

// Cuts the segment [off, off + len) out of a direct-sum arrow.
inline Perm cut(const Perm& g, std::size_t off, std::size_t len) {
  return direct_sum(slice(g, 0, off), slice(g, off + len, g.size() - off - len));
}

// Orbit of a payload under a group given by generators.
inline std::vector<Payload> orbit(const Payload& start, const std::vector<Perm>& gens,
                                  const std::function<Payload(const Payload&, const Perm&)>& act) {
  std::vector<Payload> out{start};
  std::unordered_set<Payload, PayloadHash> seen{start};
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      Payload p = act(out[k], g);
      if (seen.insert(p).second) out.push_back(std::move(p));
    }
  return out;
}

// Builds the simplicial groupoid from levels and per-generator functor factories.
inline std::shared_ptr<SimplicialGroupoid> assemble(std::string name, int N, int grade_bound,
                                                    std::vector<AGPtr> levels,
                                                    const std::function<Functor(int n, int i)>& face,
                                                    const std::function<Functor(int n, int i)>& degen) {
  auto X = std::make_shared<SimplicialGroupoid>();
  X->name = std::move(name);
  X->N = N;
  X->grade_bound = grade_bound;
  X->levels.assign(levels.begin(), levels.end());
  X->face.resize(N + 1);
  X->degen.resize(N + 1);
  for (int n = 1; n <= N; ++n)
    for (int i = 0; i <= n; ++i) X->face[n].push_back(face(n, i));
  for (int n = 0; n < N; ++n)
    for (int i = 0; i <= n; ++i) X->degen[n].push_back(degen(n, i));
  return X;
}

// Perm on the points listed in `from` (sorted), carried by g to the sorted list `to`.
inline Perm restrict_perm(const Perm& g, const std::vector<int>& from, const std::vector<int>& to) {
  Perm p(from.size());
  for (std::size_t a = 0; a < from.size(); ++a) {
    const int img = g[from[a]];
    p[a] = static_cast<std::uint16_t>(std::lower_bound(to.begin(), to.end(), img) - to.begin());
  }
  return p;
}

}  // namespace dsp::detail
