#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dsp {

struct InvalidDeltaMap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotComposable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotActive : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotInert : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct LevelOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Monotone map [dom] -> [cod]; img[i] is the image of i.
struct DeltaMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> img;

  DeltaMap() : img{0} {}
  // Throws InvalidDeltaMap unless img is weakly increasing, of length dom+1, within 0..cod.
  DeltaMap(int dom, int cod, std::vector<int> img);

  int operator()(int i) const { return img[i]; }
  bool operator==(const DeltaMap&) const = default;
  auto operator<=>(const DeltaMap&) const = default;
};

DeltaMap identity_map(int n);
// d^i: [n-1] -> [n], skipping i.
DeltaMap coface(int n, int i);
// s^i: [n+1] -> [n], hitting i twice.
DeltaMap codegeneracy(int n, int i);

// g after f.  Throws NotComposable when cod f != dom g.
DeltaMap compose(const DeltaMap& g, const DeltaMap& f);

enum class DeltaKind { Active, Inert, Neither, Both };
DeltaKind classify(const DeltaMap& f);
bool is_active(const DeltaMap& f);
bool is_inert(const DeltaMap& f);
std::string to_string(DeltaKind k);

struct ActiveInert {
  DeltaMap active;
  DeltaMap inert;
};
// f = inert . active, with active: [dom f] -> [f(m) - f(0)].
ActiveInert active_inert_factorize(const DeltaMap& f);

// Amalgamated ordinal sum over [0] of two active maps: [n1+n2] -> [k1+k2].
DeltaMap wedge(const DeltaMap& g1, const DeltaMap& g2);

// A commuting square of Delta maps, named after the sides of the groupoid square
// it induces under a simplicial groupoid X:
//
//   X_w --X(top)--> X_a
//    |X(left)        |X(right)
//   X_b --X(bottom)-> X_c
//
// so top: [a] -> [w], left: [b] -> [w], right: [c] -> [a], bottom: [c] -> [b], and
// commutation means top . right = left . bottom.
struct DeltaSquare {
  DeltaMap top, left, right, bottom;
  std::string desc;
  bool commutes() const;
};

// Pushout of active g: [n] -> [k] along inert i: [n] -> [m].  Writing [m] = [a] v [n] v [b],
// the result has top = id v g v id (active), left = [k] -> [a] v [k] v [b] (inert),
// right = i and bottom = g.
DeltaSquare pushout_active_inert(const DeltaMap& g, const DeltaMap& i);

struct Generator {
  enum Kind { Face, Degeneracy } kind;
  int level;  // codomain of the generator: d^i: [level-1] -> [level], s^i: [level+1] -> [level]
  int index;
  bool operator==(const Generator&) const = default;
};
std::string to_string(const Generator& g);

// Generators in order of application: codegeneracies (descending index), then cofaces
// (ascending index).
std::vector<Generator> generator_decomposition(const DeltaMap& f);
DeltaMap generator_map(const Generator& g);
DeltaMap recompose(int dom, const std::vector<Generator>& gens);

// The squares whose images must be pullbacks in a decomposition space, with every
// corner at level <= N.  Throws LevelOutOfRange if N < 2.
std::vector<DeltaSquare> decomposition_axiom_squares(int N);
// Segal squares d_top / d_0 on X_{n+1} for 0 < n, n+1 <= N.
std::vector<DeltaSquare> segal_axiom_squares(int N);

// The s_i / d_j squares (both index regimes) and the s_i / s_{j-1} squares that are
// pullbacks in any decomposition space, with every corner at level <= N.
std::vector<DeltaSquare> bonus_squares(int N);

// Data for the pullback criterion on an active g: [n] -> [m]: the splitting
// g = g_1 v ... v g_n with g_i: [1] -> [m_i], the inert segments [m_i] -> [m] and the
// inert edges [1] -> [n].
struct SplittingSquare {
  DeltaMap g;
  std::vector<DeltaMap> parts;
  std::vector<DeltaMap> segments;
  std::vector<DeltaMap> edges;
};
// All active g: [n] -> [m] with 1 <= n and m <= N.
std::vector<SplittingSquare> splitting_squares(int N);

std::vector<DeltaMap> all_maps(int dom, int cod);
std::vector<DeltaMap> active_maps(int dom, int cod);

// Textual form [m]->[n]:(i0,...,im).
std::string to_string(const DeltaMap& f);
DeltaMap parse_delta_map(const std::string& text);

}  // namespace dsp
