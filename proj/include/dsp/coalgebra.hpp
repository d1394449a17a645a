#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsp/gallery.hpp"
#include "dsp/rational.hpp"
#include "dsp/simplicial.hpp"

namespace dsp {

struct GradeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownKey : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Basis element of a tensor power: one iso-class key per factor (empty for the ground field).
using Key = std::vector<IsoKey>;
std::string to_string(const Key& k);

// Finite map Key -> nonzero rational.
class SparseVec {
 public:
  void add(const Key& k, const Rational& c);
  Rational at(const Key& k) const;
  const std::map<Key, Rational>& entries() const { return e_; }
  bool empty() const { return e_.empty(); }
  bool operator==(const SparseVec& o) const { return e_ == o.e_; }

 private:
  std::map<Key, Rational> e_;
};

// Columns indexed by basis keys; each column a SparseVec over row keys.
struct SparseMat {
  std::map<Key, SparseVec> columns;
  Rational at(const Key& row, const Key& col) const;
  const SparseVec& column(const Key& col) const;  // throws GradeOverflow if absent
  bool operator==(const SparseMat& o) const;
};

struct BasisElement {
  IsoKey key;
  std::size_t aut_order = 1;
  Obj rep = 0;
};
// Iso classes of X_1 with grade <= bound (all classes without a bound), sorted by key.
std::vector<BasisElement> basis(const SimplicialGroupoid& X, std::optional<int> grade_bound = std::nullopt);

// Coefficient at [y] is the sum of 1/|Aut m| over classes [m] of the source with F m = y;
// legs give the tuple of target keys.
SparseVec coeff_vector(const std::vector<Functor>& legs);
// The same vector restricted to the homotopy fibre of p over s (objects (m, p m -> s)).
SparseVec fibre_coeff_vector(const Functor& p, Obj s, const std::vector<Functor>& legs);

// Delta_n: column [f] is the pushforward of the fibre of the long edge X_n -> X_1 over f along
// the n elementary edges.  n = 0 gives the counit, n = 1 the identity.
SparseMat delta_n(const SimplicialGroupoid& X, int n, std::optional<int> grade_bound = std::nullopt);
SparseMat comultiplication(const SimplicialGroupoid& X, std::optional<int> grade_bound = std::nullopt);
SparseMat counit(const SimplicialGroupoid& X, std::optional<int> grade_bound = std::nullopt);

// Column [f] of the comultiplication computed literally: build the homotopy fibre of d_1 over f
// and push it forward along (d_2, d_0).
SparseVec comultiplication_column_via_fibre(const SimplicialGroupoid& X, Obj f);
// c^f_{a,b} as |fibre of (d_1, d_2, d_0) over (f, a, b)| / (|Aut a| |Aut b|).
Rational coefficient_via_triple_fibre(const SimplicialGroupoid& X, Obj f, Obj a, Obj b);

// Replaces factor `pos` of every row key of v by the column of M at that key.
SparseVec apply_on_factor(const SparseMat& M, const SparseVec& v, std::size_t pos);
// Applies M to every factor of every row key (M tensor ... tensor M).
SparseVec apply_on_all_factors(const SparseMat& M, const SparseVec& v);
// M after v, for v a vector over the column basis of M.
SparseVec apply(const SparseMat& M, const SparseVec& v);

// (Delta x id) Delta = (id x Delta) Delta = Delta_3 and both counit laws, column by column.
CheckReport check_coassociativity(const SimplicialGroupoid& X, std::optional<int> grade_bound = std::nullopt);

// Matrix of F_1!: column [f] is the unit vector at [F_1 f].
SparseMat pushforward_hom(const SimpMap& F, std::optional<int> grade_bound = std::nullopt);
// Matrix of G_1! after the inverse of E_1!, for a levelwise equivalence E: Z -> X and G: Z -> Y.
// Throws UnknownKey when a class of X_1 has no preimage.
SparseMat transfer_matrix(const SimpMap& E, const SimpMap& G, std::optional<int> grade_bound = std::nullopt);
// Delta_Y M = (M x M) Delta_X and eps_Y M = eps_X on the columns of M.
CheckReport check_homomorphism(const SparseMat& M, const SimplicialGroupoid& X, const SimplicialGroupoid& Y,
                               std::optional<int> grade_bound = std::nullopt);

// Matrix of mu_1!, from pairs to the basis.
SparseMat multiplication(const MonoidalSpace& M, std::optional<int> grade_bound = std::nullopt);
// Product of tensors, factorwise through the multiplication matrix.
SparseVec tensor_multiply(const SparseMat& mult, const SparseVec& u, const SparseVec& v);
// (a) mu is CULF, (b) Delta is multiplicative, (c) the counit is multiplicative.
CheckReport check_bialgebra(const MonoidalSpace& M, std::optional<int> grade_bound = std::nullopt);

struct HallResult {
  Rational enumerated;
  Rational formula;
  bool match() const { return enumerated == formula; }
};
Rational gaussian_binomial(int q, int n, int k);
// Comultiplication coefficient of [n] at ([k], [n-k]) in the S-construction of vect over F_q.
HallResult hall_number(int q, int n, int k);

// CSV rows "f,a,b,coefficient" in basis order.
std::string coproduct_csv(const SparseMat& delta);

}  // namespace dsp
