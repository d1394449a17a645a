#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsp/perm.hpp"
#include "dsp/rational.hpp"
#include "dsp/report.hpp"

namespace dsp {

using Obj = std::int64_t;
using Payload = std::vector<int>;

struct PayloadHash {
  std::size_t operator()(const Payload& p) const noexcept;
};

struct InvalidGroupoid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ObjectNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TargetMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonCommutingSquare : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical name of an isomorphism class.  Ordered by grade first.
struct IsoKey {
  int grade = 0;
  std::string text;
  auto operator<=>(const IsoKey&) const = default;
};

// A finite groupoid presented by group actions.  Objects are numbered 0..size()-1
// and partitioned into blocks; each block carries a permutation group, and the
// arrows x -> y are the group elements g with g.x = y.  Composition is the
// product in the group, so the groupoid axioms hold by construction.
class Groupoid {
 public:
  virtual ~Groupoid() = default;

  virtual const std::string& name() const = 0;
  virtual Obj size() const = 0;
  virtual int grade(Obj x) const = 0;
  virtual Obj num_blocks() const = 0;
  virtual Obj block_of(Obj x) const = 0;
  virtual std::size_t degree(Obj x) const = 0;
  virtual std::vector<Perm> generators(Obj x) const = 0;
  virtual Obj act(Obj x, const Perm& g) const = 0;

  virtual Obj num_components() const = 0;
  virtual Obj component(Obj x) const = 0;
  // Representative: the object with the smallest payload in its class.
  virtual Obj rep(Obj c) const = 0;
  // An arrow rep(component(x)) -> x.
  virtual Perm transport(Obj x) const = 0;
  // All elements of Aut(rep(c)).
  virtual const std::vector<Perm>& aut(Obj c) const = 0;
  virtual const std::vector<Perm>& aut_generators(Obj c) const = 0;

  virtual std::string render(Obj x) const = 0;
  virtual IsoKey class_key(Obj c) const = 0;

  std::size_t aut_order(Obj c) const { return aut(c).size(); }
  // Aut(x), obtained by conjugating Aut(rep) along the transport.
  std::vector<Perm> aut_at(Obj x) const;
  std::vector<Perm> hom(Obj x, Obj y) const;
  Perm identity(Obj x) const { return identity_perm(degree(x)); }
  int component_grade(Obj c) const { return grade(rep(c)); }
  IsoKey key_of(Obj x) const { return class_key(component(x)); }
};

using GPtr = std::shared_ptr<const Groupoid>;

// Objects are explicit payloads, sorted; orbits, transports and automorphism
// groups are computed once at construction.
class ActionGroupoid final : public Groupoid {
 public:
  struct Block {
    std::size_t degree = 0;
    std::vector<Perm> gens;
  };
  struct Object {
    Payload data;
    int block = 0;
    int grade = 0;
  };
  using Action = std::function<Payload(const Payload&, int block, const Perm&)>;
  using Render = std::function<std::string(const Payload&)>;

  ActionGroupoid(std::string name, std::vector<Block> blocks, std::vector<Object> objects, Action act,
                 Render render = {}, Render canon = {});

  const std::string& name() const override { return name_; }
  Obj size() const override { return static_cast<Obj>(objects_.size()); }
  int grade(Obj x) const override { return objects_[x].grade; }
  Obj num_blocks() const override { return static_cast<Obj>(blocks_.size()); }
  Obj block_of(Obj x) const override { return objects_[x].block; }
  std::size_t degree(Obj x) const override { return blocks_[objects_[x].block].degree; }
  std::vector<Perm> generators(Obj x) const override { return blocks_[objects_[x].block].gens; }
  Obj act(Obj x, const Perm& g) const override;
  Obj num_components() const override { return static_cast<Obj>(reps_.size()); }
  Obj component(Obj x) const override { return comp_[x]; }
  Obj rep(Obj c) const override { return reps_[c]; }
  Perm transport(Obj x) const override { return transport_[x]; }
  const std::vector<Perm>& aut(Obj c) const override { return aut_[c]; }
  const std::vector<Perm>& aut_generators(Obj c) const override { return aut_gens_[c]; }
  std::string render(Obj x) const override;
  IsoKey class_key(Obj c) const override;

  Obj find(const Payload& p) const;
  const Payload& data(Obj x) const { return objects_[x].data; }
  const std::vector<Obj>& members(Obj c) const { return members_[c]; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Action& action() const { return act_; }

 private:
  std::string name_;
  std::vector<Block> blocks_;
  std::vector<Object> objects_;
  Action act_;
  Render render_, canon_;
  std::unordered_map<Payload, Obj, PayloadHash> index_;
  std::vector<Obj> comp_, reps_;
  std::vector<std::vector<Obj>> members_;
  std::vector<Perm> transport_;
  std::vector<std::vector<Perm>> aut_, aut_gens_;
};

using AGPtr = std::shared_ptr<const ActionGroupoid>;

// Product of groupoids without materializing the object set; objects are
// mixed-radix codes of tuples.  Grade of a tuple is the sum of grades.
class ProductGroupoid final : public Groupoid {
 public:
  explicit ProductGroupoid(std::vector<GPtr> factors);

  const std::string& name() const override { return name_; }
  Obj size() const override { return size_; }
  int grade(Obj x) const override;
  Obj num_blocks() const override { return nblocks_; }
  Obj block_of(Obj x) const override;
  std::size_t degree(Obj x) const override;
  std::vector<Perm> generators(Obj x) const override;
  Obj act(Obj x, const Perm& g) const override;
  Obj num_components() const override { return ncomp_; }
  Obj component(Obj x) const override;
  Obj rep(Obj c) const override;
  Perm transport(Obj x) const override;
  const std::vector<Perm>& aut(Obj c) const override;
  const std::vector<Perm>& aut_generators(Obj c) const override;
  std::string render(Obj x) const override;
  IsoKey class_key(Obj c) const override;

  std::vector<Obj> decode(Obj x) const;
  Obj encode(const std::vector<Obj>& xs) const;
  std::vector<Obj> decode_component(Obj c) const;
  Obj encode_component(const std::vector<Obj>& cs) const;
  const std::vector<GPtr>& factors() const { return factors_; }
  // Splits a tuple arrow into its factor arrows.
  std::vector<Perm> split(Obj x, const Perm& g) const;

 private:
  std::vector<GPtr> factors_;
  std::string name_;
  Obj size_ = 1, ncomp_ = 1, nblocks_ = 1;
  mutable std::mutex mu_;
  mutable std::map<Obj, std::vector<Perm>> aut_cache_, gen_cache_;
};

// Functor between presented groupoids: an object map and, for each arrow g: x -> g.x,
// the image arrow F(x) -> F(g.x) in the target's group.
class Functor {
 public:
  using ObjMap = std::function<Obj(Obj)>;
  using ArrMap = std::function<Perm(Obj, const Perm&)>;

  Functor() = default;
  Functor(GPtr src, GPtr tgt, ObjMap om, ArrMap am, std::string name = {});
  // Precomputes the object map (source must be small enough to enumerate).
  static Functor tabulated(GPtr src, GPtr tgt, const ObjMap& om, ArrMap am, std::string name = {});

  Obj operator()(Obj x) const { return om_(x); }
  Perm operator()(Obj x, const Perm& g) const { return am_(x, g); }
  const GPtr& source() const { return src_; }
  const GPtr& target() const { return tgt_; }
  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(om_); }
  Functor tabulate() const;

 private:
  GPtr src_, tgt_;
  ObjMap om_;
  ArrMap am_;
  std::string name_;
};

Functor identity_functor(const GPtr& g);
// g after f.
Functor compose(const Functor& g, const Functor& f);
// Object maps agree everywhere and arrow maps agree on all generators.
bool functors_equal(const Functor& a, const Functor& b, std::string* witness = nullptr);
CheckReport validate_functor(const Functor& f);

// Square  W --top--> Y
//         |left      |right
//         X --bottom-> S      with the two composites equal on the nose.
struct GroupoidSquare {
  Functor top, left, right, bottom;
  std::string desc;
};

// Grade assigned to pullback objects (x, y, s): Max = max(g x, g y), Additive = g x + g y - g s,
// Left = g x, Top = g y.  Auto picks Left (resp. Top) when that leg of the square preserves
// grade on W, else Additive.
enum class GradeRule { Max, Additive, Left, Top, Auto };

struct Verdict {
  bool ok = true;
  std::string witness;
  explicit operator bool() const { return ok; }
};

void check_commutes(const GroupoidSquare& sq);
Verdict is_equivalence(const Functor& f, std::optional<int> grade_bound = std::nullopt);
// Throws NonCommutingSquare.  With a grade bound, pullback components of larger grade
// (under the rule) are not required to be hit.
Verdict is_pullback_square(const GroupoidSquare& sq, std::optional<int> grade_bound = std::nullopt,
                           GradeRule rule = GradeRule::Auto);
// Same verdict, routed through an explicit homotopy pullback and is_equivalence.
Verdict is_pullback_square_explicit(const GroupoidSquare& sq, std::optional<int> grade_bound = std::nullopt,
                                    GradeRule rule = GradeRule::Auto);
GradeRule resolve_grade_rule(const GroupoidSquare& sq, GradeRule rule);

struct IsoClassTable {
  struct Entry {
    Obj rep;
    std::vector<Obj> members;
    std::size_t aut_order;
    IsoKey key;
  };
  std::vector<Entry> classes;
};

IsoClassTable iso_classes(const Groupoid& g);
Rational groupoid_cardinality(const Groupoid& g);
// Cardinality of the part of g with grade <= bound.
Rational groupoid_cardinality(const Groupoid& g, int bound);

AGPtr terminal_groupoid();
// One object with automorphism group generated by gens.
AGPtr one_object_groupoid(std::string name, std::size_t degree, std::vector<Perm> gens);
// Materialized product; pairs with grade sum above the bound are dropped.
AGPtr product(const GPtr& a, const GPtr& b, std::optional<int> grade_bound = std::nullopt);
Functor product_projection(const AGPtr& prod, const GPtr& a, const GPtr& b, int which);
std::shared_ptr<const ProductGroupoid> product_virtual(std::vector<GPtr> factors);
// Tuple functor X -> prod of targets.
Functor tuple_functor(const std::vector<Functor>& fs, std::shared_ptr<const ProductGroupoid> target);
// Product of functors prod X_i -> prod Y_i.
Functor product_functor(const std::vector<Functor>& fs, std::shared_ptr<const ProductGroupoid> source,
                        std::shared_ptr<const ProductGroupoid> target);
// Functor 1 -> S picking out s.
Functor name_functor(const GPtr& s, Obj obj);

struct Pullback {
  AGPtr object;
  Functor to_x, to_y;
  Functor p, q;
};
// Objects (x, y, sigma: p x -> q y); arrows (g, h) with sigma' p(g) = q(h) sigma.
Pullback homotopy_pullback(const Functor& p, const Functor& q, GradeRule rule = GradeRule::Max,
                           std::optional<int> grade_bound = std::nullopt);
// Comparison W -> X x_S Y sending w to (left w, top w, id).
Functor pullback_comparison(const GroupoidSquare& sq, const Pullback& pb);
AGPtr homotopy_fibre(const Functor& p, Obj s);
// Fibre of the tuple (F_1, ..., F_r) over (s_1, ..., s_r): objects (m, sigma_i: F_i m -> s_i).
AGPtr homotopy_fibre_multi(const std::vector<Functor>& fs, const std::vector<Obj>& targets);

// Groupoids given by an explicit arrow table; used for validation and as an
// independent oracle for the presented representation.
struct ExplicitGroupoid {
  struct Arrow {
    int src = 0, tgt = 0;
  };
  std::vector<int> grade;  // one entry per object
  std::vector<Arrow> arrows;
  std::vector<int> identity;                   // object -> arrow id
  std::map<std::pair<int, int>, int> compose;  // (g, f) -> g after f, for tgt f = src g
  int num_objects() const { return static_cast<int>(grade.size()); }
};

CheckReport validate_groupoid(const ExplicitGroupoid& g);
ExplicitGroupoid to_explicit(const Groupoid& g);
struct Presented {
  AGPtr groupoid;
  std::vector<Perm> arrow_perm;  // arrow id -> group element
};
// Requires a valid explicit groupoid; throws InvalidGroupoid otherwise.
Presented from_explicit(const ExplicitGroupoid& g);

}  // namespace dsp
