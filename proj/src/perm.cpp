#include "dsp/perm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace dsp {

Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: degree mismatch");
  Perm r(a.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint16_t>(i);
  return r;
}

Perm direct_sum(const Perm& a, const Perm& b) {
  Perm r(a);
  r.reserve(a.size() + b.size());
  for (auto x : b) r.push_back(static_cast<std::uint16_t>(x + a.size()));
  return r;
}

std::vector<Perm> direct_sum_generators(const std::vector<std::vector<Perm>>& per_factor,
                                        const std::vector<std::size_t>& degrees) {
  std::vector<Perm> out;
  for (std::size_t i = 0; i < per_factor.size(); ++i) {
    for (const auto& g : per_factor[i]) {
      Perm p;
      for (std::size_t j = 0; j < degrees.size(); ++j) p = direct_sum(p, j == i ? g : identity_perm(degrees[j]));
      out.push_back(std::move(p));
    }
  }
  return out;
}

Perm slice(const Perm& p, std::size_t offset, std::size_t len) {
  Perm r(len);
  for (std::size_t i = 0; i < len; ++i) r[i] = static_cast<std::uint16_t>(p[offset + i] - offset);
  return r;
}

bool is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

bool is_permutation(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::string to_string(const Perm& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::size_t PermHash::operator()(const Perm& p) const noexcept {
  std::size_t h = p.size() * 0x9e3779b97f4a7c15ULL;
  for (auto x : p) h = (h ^ x) * 0x100000001b3ULL;
  return h;
}

std::vector<Perm> group_closure(const std::vector<Perm>& gens, std::size_t degree) {
  std::vector<Perm> elems{identity_perm(degree)};
  std::unordered_set<Perm, PermHash> seen(elems.begin(), elems.end());
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (const auto& g : gens) {
      Perm h = compose(g, elems[k]);
      if (seen.insert(h).second) elems.push_back(std::move(h));
    }
  }
  return elems;
}

std::vector<Perm> symmetric_generators(std::size_t n) {
  std::vector<Perm> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Perm t = identity_perm(n);
    std::swap(t[i], t[i + 1]);
    gens.push_back(std::move(t));
  }
  return gens;
}

std::vector<Perm> all_permutations(std::size_t n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace dsp
