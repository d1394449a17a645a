#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsp/delta.hpp"
#include "dsp/groupoid.hpp"
#include "dsp/report.hpp"

namespace dsp {

struct TruncationMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Strict simplicial groupoid truncated at level N.  face[n][i] = d_i: X_n -> X_{n-1}
// (face[0] is empty), degen[n][i] = s_i: X_n -> X_{n+1} for n < N.  Objects of every
// level have grade <= grade_bound (or no bound when negative).
struct SimplicialGroupoid {
  std::string name;
  int N = 0;
  int grade_bound = -1;
  std::vector<GPtr> levels;
  std::vector<std::vector<Functor>> face;
  std::vector<std::vector<Functor>> degen;

  const GPtr& level(int n) const;
  std::optional<int> bound() const { return grade_bound < 0 ? std::nullopt : std::optional<int>(grade_bound); }
};

using SPtr = std::shared_ptr<const SimplicialGroupoid>;

// Levelwise functors F_n: source_n -> target_n.
struct SimpMap {
  SPtr source, target;
  std::vector<Functor> comp;
  std::string name;
};

CheckReport validate_simplicial(const SimplicialGroupoid& X);
CheckReport validate_simp_map(const SimpMap& F);

// X(f): X_n -> X_m for f: [m] -> [n].
Functor evaluate(const SimplicialGroupoid& X, const DeltaMap& f);
// Composite of the images of an explicit generator sequence starting at [dom].
Functor evaluate_generators(const SimplicialGroupoid& X, int dom, const std::vector<Generator>& gens);

SPtr truncate(const SPtr& X, int N);
SimpMap truncate(const SimpMap& F, int N);
SimpMap identity_simp_map(const SPtr& X);
SimpMap compose(const SimpMap& G, const SimpMap& F);

// The groupoid square induced by a square in Delta.
GroupoidSquare instantiate(const SimplicialGroupoid& X, const DeltaSquare& sq);

CheckReport check_segal(const SimplicialGroupoid& X);
// Equivalence X_r -> X_1 x_{X_0} ... x_{X_0} X_1 through iterated homotopy pullbacks.
Verdict check_segal_direct(const SimplicialGroupoid& X, int r);
CheckReport check_decomposition(const SimplicialGroupoid& X);
// The same property through the squares X_m -> prod X_{m_i} over X_n -> prod X_1 of
// every active g: [n] -> [m].
CheckReport check_decomposition_splitting(const SimplicialGroupoid& X);

CheckReport check_cartesian(const SimpMap& F, const std::vector<DeltaMap>& maps);
CheckReport check_culf(const SimpMap& F);
CheckReport check_conservative(const SimpMap& F);
CheckReport check_ulf(const SimpMap& F);
enum class Side { Bottom, Top };
CheckReport check_fibration(const SimpMap& F, Side side);
CheckReport check_relatively_segal(const SimpMap& F);

struct Dec {
  SPtr space;
  SimpMap map;  // Dec(X) -> X truncated to N-1
};
Dec dec(const SPtr& X, Side side);
// Dec(F): Dec(Y) -> Dec(X) given the decs of source and target.
SimpMap dec_of_map(const SimpMap& F, const Dec& source_dec, const Dec& target_dec, Side side);

// Four verdicts: (a) decomposition; (b) both decs Segal and both dec maps CULF;
// (c) decs Segal and dec maps conservative; (d) decs Segal and the two degeneracy squares.
struct DecCharacterization {
  CheckReport report;
  bool a = false, b = false, c = false, d = false;
  bool agree() const { return a == b && b == c && c == d; }
};
DecCharacterization check_dec_characterization(const SPtr& X);

CheckReport check_bonus_pullbacks(const SimplicialGroupoid& X);

SPtr terminal_simplicial(int N);
SimpMap to_terminal(const SPtr& X);
// Levelwise product; pairs above the bound (when given) are dropped.
SPtr product_simplicial(const SPtr& X, const SPtr& Y, std::optional<int> grade_bound = std::nullopt);
SimpMap product_projection(const SPtr& prod, const SPtr& X, const SPtr& Y, int which);
SimpMap diagonal(const SPtr& X, const SPtr& prod);

// Full subgroupoid on the objects satisfying keep (which must be constant on components).
AGPtr restrict_groupoid(const GPtr& g, const std::function<bool(Obj)>& keep, std::string name);

// Negative controls.  delete_simplex removes the class of x in X_k together with every
// simplex having it among its iterated faces or degeneracies; the result is again a
// strict simplicial groupoid.  constant_face replaces d_i on X_n by a constant functor.
SPtr delete_simplex(const SPtr& X, int k, Obj x);
SPtr constant_face(const SPtr& X, int n, int i);
// Nondegenerate classes of X_k (not isomorphic to any s_j of a (k-1)-simplex).
std::vector<Obj> nondegenerate_classes(const SimplicialGroupoid& X, int k);

}  // namespace dsp
