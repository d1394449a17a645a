#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsp/simplicial.hpp"

namespace dsp {

struct NotAPoset : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidCategory : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedField : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- posets

// Elements and generating relations a < b (the order is their reflexive-transitive closure).
struct PosetSpec {
  std::vector<std::string> elements;
  std::vector<std::pair<int, int>> less;
};

// Lines "a < b"; blank lines and '#' comments are ignored.  Elements are numbered in
// order of first appearance.
PosetSpec parse_poset(std::istream& in);
PosetSpec parse_poset_file(const std::string& path);
PosetSpec chain_poset(int n);  // 0 < 1 < ... < n-1
PosetSpec antichain_poset(int n);
PosetSpec divisibility_poset(const std::vector<int>& values);

// Reflexive-transitive closure; throws NotAPoset on a cycle.
std::vector<std::vector<bool>> order_relation(const PosetSpec& p);

// Discrete levels: X_n = chains x_0 <= ... <= x_n.  Keys render as "a<=b<=c".
SPtr nerve_of_poset(const PosetSpec& p, int N);

// ---------------------------------------------------------------- finite categories

// A skeletal finite category: the only isomorphisms are automorphisms, and Aut(o) is
// given as a permutation group acting on aut_degree[o] points.  Morphisms are payloads.
struct FiniteCategory {
  std::string name;
  std::vector<int> grade;  // per object
  std::vector<std::size_t> aut_degree;
  std::vector<std::vector<Perm>> aut_gens;
  std::function<std::vector<Payload>(int a, int b)> homs;
  // g after f for f: a -> b, g: b -> c.
  std::function<Payload(int a, int b, int c, const Payload& f, const Payload& g)> compose;
  std::function<Payload(int a)> identity;
  // hb . f . ha^-1 for automorphisms ha of a and hb of b.
  std::function<Payload(int a, int b, const Payload& f, const Perm& ha, const Perm& hb)> act;
  std::function<std::string(int a, int b, const Payload& f)> render;
  // Optional iso-invariant key of a string of objects, used when strings of morphisms
  // are classified by their objects alone.
  std::function<std::string(const std::vector<int>& objects)> string_key;

  int num_objects() const { return static_cast<int>(grade.size()); }
};

// Checks units and associativity on all composable pairs and triples, and that the
// automorphism action preserves hom-sets.  Throws InvalidCategory.
void validate_category(const FiniteCategory& C);

// X_n = strings of n composable morphisms, morphisms are ladders of automorphisms.
// Grade of a string is the grade of its last object; strings above the bound are dropped.
SPtr fat_nerve(const FiniteCategory& C, int N, std::optional<int> grade_bound = std::nullopt);

FiniteCategory poset_category(const PosetSpec& p);
// One-object category of a group given by permutation generators (acting on degree points).
FiniteCategory group_category(std::string name, std::size_t degree, std::vector<Perm> gens);
// Finite sets [0..max_size] with injections.
FiniteCategory injections_category(int max_size);
// Finite ordinals with monotone injections.
FiniteCategory monotone_injections_category(int max_size);
// F_q^d, d <= max_dim, with injective linear maps.
FiniteCategory monos_category(int q, int max_dim);

// ---------------------------------------------------------------- monoidal spaces

// A simplicial groupoid with a strict monoidal structure mu: X x X -> X, where X x X is
// truncated at the grade bound of X.
struct MonoidalSpace {
  SPtr space;
  SPtr square;
  SimpMap mu;
};

// ---------------------------------------------------------------- the example families

// Finite sets with layer functions: B_k has objects (n, l: [n] -> [k]) up to relabelling.
MonoidalSpace binomial_B(int max_size, int N);
// Rooted forests with k-1 admissible cuts; layer 0 is the crown, the last layer holds the roots.
MonoidalSpace forests_H(int max_nodes, int N);
// Simple graphs with an ordered partition of the vertices into k parts.
MonoidalSpace graphs_G(int max_vertices, int N);

// Fat nerve of injections, graded by the last set, with disjoint union.
MonoidalSpace injections_I(int max_size, int N);
// Dec_bot(B) -> I, (x_0, ..., x_k) |-> [x_0 c x_0+x_1 c ...] in order-preserving coordinates.
SimpMap dec_equivalence(const Dec& dec_bot_B, const SPtr& I);
// Fat nerve of monotone injections mapped into I.
SimpMap oi_to_i(int max_size, int N);

// Waldhausen S-construction of vect over F_q, q in {2, 3}: V_n holds gap complexes with
// top dimension <= max_total_dim, stored as the full staircase.
SPtr vect_S(int q, int max_total_dim, int N);
// Dec_bot(V) -> fat nerve of monomorphisms, reading off the bottom row.
SimpMap bottom_row(const Dec& dec_bot_V, const SPtr& monos);

// Graph key aliases: K<n> (complete graph), E<n> (edgeless graph).
std::optional<std::string> graph_alias(const std::string& name);

}  // namespace dsp
