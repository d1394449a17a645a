#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dsp {

// A permutation of {0, ..., n-1} stored as its image table: p[i] is the image of i.
using Perm = std::vector<std::uint16_t>;

Perm identity_perm(std::size_t n);
// (a * b)[i] = a[b[i]]; apply b first.
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
// Direct sum: a acts on the first a.size() points, b on the rest.
Perm direct_sum(const Perm& a, const Perm& b);
// Generators of a direct product: each factor generator padded with identities.
std::vector<Perm> direct_sum_generators(const std::vector<std::vector<Perm>>& per_factor,
                                        const std::vector<std::size_t>& degrees);
Perm slice(const Perm& p, std::size_t offset, std::size_t len);
bool is_identity(const Perm& p);
bool is_permutation(const Perm& p);
std::string to_string(const Perm& p);

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept;
};

// All elements of the group generated by gens (acting on `degree` points).
std::vector<Perm> group_closure(const std::vector<Perm>& gens, std::size_t degree);

// Adjacent transpositions generating the symmetric group on n points.
std::vector<Perm> symmetric_generators(std::size_t n);

// All permutations of n points in lexicographic order.
std::vector<Perm> all_permutations(std::size_t n);

}  // namespace dsp
