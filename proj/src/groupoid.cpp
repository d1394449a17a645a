#include "dsp/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace dsp {

std::size_t PayloadHash::operator()(const Payload& p) const noexcept {
  std::size_t h = p.size() * 0x9e3779b97f4a7c15ULL;
  for (int x : p) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 0x100000001b3ULL;
  return h;
}

namespace {

std::string join_payload(const Payload& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  return "<" + s + ">";
}

}  // namespace

// ---------------------------------------------------------------- Groupoid

std::vector<Perm> Groupoid::aut_at(Obj x) const {
  const Perm t = transport(x);
  const Perm ti = inverse(t);
  std::vector<Perm> out;
  const auto& a = aut(component(x));
  out.reserve(a.size());
  for (const auto& g : a) out.push_back(compose(t, compose(g, ti)));
  return out;
}

std::vector<Perm> Groupoid::hom(Obj x, Obj y) const {
  std::vector<Perm> out;
  if (component(x) != component(y)) return out;
  const Perm tx = inverse(transport(x));
  const Perm ty = transport(y);
  for (const auto& g : aut(component(x))) out.push_back(compose(ty, compose(g, tx)));
  return out;
}

// ---------------------------------------------------------------- ActionGroupoid

ActionGroupoid::ActionGroupoid(std::string name, std::vector<Block> blocks, std::vector<Object> objects,
                               Action act, Render render, Render canon)
    : name_(std::move(name)),
      blocks_(std::move(blocks)),
      objects_(std::move(objects)),
      act_(std::move(act)),
      render_(std::move(render)),
      canon_(std::move(canon)) {
  for (const auto& b : blocks_)
    for (const auto& g : b.gens)
      if (g.size() != b.degree || !is_permutation(g))
        throw InvalidGroupoid(name_ + ": block generator is not a permutation of its degree");
  std::sort(objects_.begin(), objects_.end(), [](const Object& a, const Object& b) { return a.data < b.data; });
  index_.reserve(objects_.size() * 2);
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].block < 0 || objects_[i].block >= static_cast<int>(blocks_.size()))
      throw InvalidGroupoid(name_ + ": object with unknown block");
    if (!index_.emplace(objects_[i].data, static_cast<Obj>(i)).second)
      throw InvalidGroupoid(name_ + ": duplicate object " + join_payload(objects_[i].data));
  }

  const Obj n = size();
  comp_.assign(n, -1);
  transport_.assign(n, Perm{});
  for (Obj x = 0; x < n; ++x) {
    if (comp_[x] >= 0) continue;
    const Obj c = static_cast<Obj>(reps_.size());
    const auto& blk = blocks_[objects_[x].block];
    reps_.push_back(x);
    comp_[x] = c;
    transport_[x] = identity_perm(blk.degree);
    std::vector<Obj> mem{x};
    std::vector<Perm> gens;
    std::vector<Perm> elems{identity_perm(blk.degree)};
    std::unordered_set<Perm, PermHash> elem_set(elems.begin(), elems.end());
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const Obj y = mem[k];
      for (const auto& s : blk.gens) {
        const Obj z = this->act(y, s);
        if (objects_[z].block != objects_[y].block)
          throw InvalidGroupoid(name_ + ": action changes block at " + this->render(y));
        if (comp_[z] < 0) {
          comp_[z] = c;
          transport_[z] = compose(s, transport_[y]);
          mem.push_back(z);
        } else {
          Perm u = compose(inverse(transport_[z]), compose(s, transport_[y]));
          if (!elem_set.count(u)) {
            gens.push_back(std::move(u));
            elems = group_closure(gens, blk.degree);
            elem_set = std::unordered_set<Perm, PermHash>(elems.begin(), elems.end());
          }
        }
      }
    }
    members_.push_back(std::move(mem));
    aut_.push_back(std::move(elems));
    aut_gens_.push_back(std::move(gens));
  }
}

Obj ActionGroupoid::find(const Payload& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

Obj ActionGroupoid::act(Obj x, const Perm& g) const {
  if (g.size() != degree(x)) throw InvalidGroupoid(name_ + ": arrow of wrong degree at " + render(x));
  Payload p = act_(objects_[x].data, objects_[x].block, g);
  Obj y = find(p);
  if (y < 0) throw InvalidGroupoid(name_ + ": action leaves the object set at " + render(x));
  return y;
}

std::string ActionGroupoid::render(Obj x) const {
  return render_ ? render_(objects_[x].data) : join_payload(objects_[x].data);
}

IsoKey ActionGroupoid::class_key(Obj c) const {
  const Obj r = reps_[c];
  return {objects_[r].grade, canon_ ? canon_(objects_[r].data) : render(r)};
}

// ---------------------------------------------------------------- ProductGroupoid

ProductGroupoid::ProductGroupoid(std::vector<GPtr> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) name_ += " x ";
    name_ += factors_[i]->name();
    size_ *= factors_[i]->size();
    ncomp_ *= factors_[i]->num_components();
    nblocks_ *= factors_[i]->num_blocks();
  }
  if (factors_.empty()) name_ = "1";
}

std::vector<Obj> ProductGroupoid::decode(Obj x) const {
  std::vector<Obj> xs(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    xs[i] = x % factors_[i]->size();
    x /= factors_[i]->size();
  }
  return xs;
}

Obj ProductGroupoid::encode(const std::vector<Obj>& xs) const {
  Obj x = 0;
  for (std::size_t i = factors_.size(); i-- > 0;) x = x * factors_[i]->size() + xs[i];
  return x;
}

std::vector<Obj> ProductGroupoid::decode_component(Obj c) const {
  std::vector<Obj> cs(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    cs[i] = c % factors_[i]->num_components();
    c /= factors_[i]->num_components();
  }
  return cs;
}

Obj ProductGroupoid::encode_component(const std::vector<Obj>& cs) const {
  Obj c = 0;
  for (std::size_t i = factors_.size(); i-- > 0;) c = c * factors_[i]->num_components() + cs[i];
  return c;
}

int ProductGroupoid::grade(Obj x) const {
  auto xs = decode(x);
  int g = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) g += factors_[i]->grade(xs[i]);
  return g;
}

Obj ProductGroupoid::block_of(Obj x) const {
  auto xs = decode(x);
  Obj b = 0;
  for (std::size_t i = factors_.size(); i-- > 0;) b = b * factors_[i]->num_blocks() + factors_[i]->block_of(xs[i]);
  return b;
}

std::size_t ProductGroupoid::degree(Obj x) const {
  auto xs = decode(x);
  std::size_t d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) d += factors_[i]->degree(xs[i]);
  return d;
}


std::vector<Perm> ProductGroupoid::generators(Obj x) const {
  auto xs = decode(x);
  std::vector<std::vector<Perm>> per;
  std::vector<std::size_t> degs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    per.push_back(factors_[i]->generators(xs[i]));
    degs.push_back(factors_[i]->degree(xs[i]));
  }
  return direct_sum_generators(per, degs);
}

std::vector<Perm> ProductGroupoid::split(Obj x, const Perm& g) const {
  auto xs = decode(x);
  std::vector<Perm> parts;
  std::size_t off = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t d = factors_[i]->degree(xs[i]);
    parts.push_back(slice(g, off, d));
    off += d;
  }
  return parts;
}

Obj ProductGroupoid::act(Obj x, const Perm& g) const {
  auto xs = decode(x);
  auto parts = split(x, g);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = factors_[i]->act(xs[i], parts[i]);
  return encode(xs);
}

Obj ProductGroupoid::component(Obj x) const {
  auto xs = decode(x);
  std::vector<Obj> cs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) cs[i] = factors_[i]->component(xs[i]);
  return encode_component(cs);
}

Obj ProductGroupoid::rep(Obj c) const {
  auto cs = decode_component(c);
  std::vector<Obj> xs(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) xs[i] = factors_[i]->rep(cs[i]);
  return encode(xs);
}

Perm ProductGroupoid::transport(Obj x) const {
  auto xs = decode(x);
  Perm p;
  for (std::size_t i = 0; i < xs.size(); ++i) p = direct_sum(p, factors_[i]->transport(xs[i]));
  return p;
}

const std::vector<Perm>& ProductGroupoid::aut(Obj c) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = aut_cache_.find(c);
  if (it != aut_cache_.end()) return it->second;
  auto cs = decode_component(c);
  std::vector<Perm> acc{Perm{}};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::vector<Perm> next;
    for (const auto& a : acc)
      for (const auto& b : factors_[i]->aut(cs[i])) next.push_back(direct_sum(a, b));
    acc = std::move(next);
  }
  return aut_cache_.emplace(c, std::move(acc)).first->second;
}

const std::vector<Perm>& ProductGroupoid::aut_generators(Obj c) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = gen_cache_.find(c);
  if (it != gen_cache_.end()) return it->second;
  auto cs = decode_component(c);
  std::vector<std::vector<Perm>> per;
  std::vector<std::size_t> degs;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    per.push_back(factors_[i]->aut_generators(cs[i]));
    degs.push_back(factors_[i]->degree(factors_[i]->rep(cs[i])));
  }
  return gen_cache_.emplace(c, direct_sum_generators(per, degs)).first->second;
}

std::string ProductGroupoid::render(Obj x) const {
  auto xs = decode(x);
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += factors_[i]->render(xs[i]);
  }
  return s + ")";
}

IsoKey ProductGroupoid::class_key(Obj c) const {
  auto cs = decode_component(c);
  IsoKey k{0, ""};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto fk = factors_[i]->class_key(cs[i]);
    k.grade += fk.grade;
    if (i) k.text += " | ";
    k.text += fk.text;
  }
  return k;
}

// ---------------------------------------------------------------- Functor

Functor::Functor(GPtr src, GPtr tgt, ObjMap om, ArrMap am, std::string name)
    : src_(std::move(src)), tgt_(std::move(tgt)), om_(std::move(om)), am_(std::move(am)), name_(std::move(name)) {}

Functor Functor::tabulated(GPtr src, GPtr tgt, const ObjMap& om, ArrMap am, std::string name) {
  auto table = std::make_shared<std::vector<Obj>>(src->size());
  for (Obj x = 0; x < src->size(); ++x) (*table)[x] = om(x);
  return Functor(std::move(src), std::move(tgt), [table](Obj x) { return (*table)[x]; }, std::move(am),
                 std::move(name));
}

Functor Functor::tabulate() const { return tabulated(src_, tgt_, om_, am_, name_); }

Functor identity_functor(const GPtr& g) {
  return Functor(
      g, g, [](Obj x) { return x; }, [](Obj, const Perm& p) { return p; }, "id");
}

Functor compose(const Functor& g, const Functor& f) {
  if (f.target().get() != g.source().get())
    throw TargetMismatch("compose: " + f.name() + " does not land in the source of " + g.name());
  return Functor(
      f.source(), g.target(), [f, g](Obj x) { return g(f(x)); },
      [f, g](Obj x, const Perm& p) { return g(f(x), f(x, p)); }, g.name() + "." + f.name());
}

bool functors_equal(const Functor& a, const Functor& b, std::string* witness) {
  if (a.source()->size() != b.source()->size() || a.target()->size() != b.target()->size()) {
    if (witness) *witness = "different source or target";
    return false;
  }
  const auto& src = *a.source();
  for (Obj x = 0; x < src.size(); ++x) {
    if (a(x) != b(x)) {
      if (witness) *witness = "object " + src.render(x) + " maps to " + a.target()->render(a(x)) + " vs " +
                              b.target()->render(b(x));
      return false;
    }
    for (const auto& g : src.generators(x)) {
      if (a(x, g) != b(x, g)) {
        if (witness) *witness = "arrow " + to_string(g) + " at " + src.render(x) + " maps differently";
        return false;
      }
    }
  }
  return true;
}

CheckReport validate_functor(const Functor& f) {
  CheckReport rep;
  rep.check = "validate_functor";
  rep.space = f.name();
  const auto& src = *f.source();
  const auto& tgt = *f.target();
  std::optional<std::string> bad_obj, bad_arr, bad_hom;
  for (Obj x = 0; x < src.size() && !(bad_obj && bad_arr && bad_hom); ++x) {
    const Obj fx = f(x);
    if (fx < 0 || fx >= tgt.size()) {
      if (!bad_obj) bad_obj = "object " + src.render(x) + " has no image";
      continue;
    }
    if (f(x, src.identity(x)) != tgt.identity(fx) && !bad_arr) bad_arr = "identity at " + src.render(x) + " not preserved";
    const auto gens = src.generators(x);
    for (const auto& g : gens) {
      Perm fg = f(x, g);
      if (fg.size() != tgt.degree(fx) || !is_permutation(fg)) {
        if (!bad_arr) bad_arr = "arrow at " + src.render(x) + " has a malformed image";
        continue;
      }
      if (tgt.act(fx, fg) != f(src.act(x, g)) && !bad_arr)
        bad_arr = "target of image arrow at " + src.render(x) + " is not the image of the target";
      for (const auto& h : gens) {
        const Obj hx = src.act(x, h);
        if (f(x, compose(g, h)) != compose(f(hx, g), f(x, h)) && !bad_hom)
          bad_hom = "composition not preserved at " + src.render(x);
      }
    }
  }
  rep.add("object map total", !bad_obj, bad_obj);
  rep.add("sources, targets and identities preserved", !bad_arr, bad_arr);
  rep.add("composition preserved", !bad_hom, bad_hom);
  return rep;
}

// ---------------------------------------------------------------- squares

void check_commutes(const GroupoidSquare& sq) {
  if (sq.top.source().get() != sq.left.source().get() || sq.top.target().get() != sq.right.source().get() ||
      sq.left.target().get() != sq.bottom.source().get() || sq.right.target().get() != sq.bottom.target().get())
    throw TargetMismatch("square sides do not fit together: " + sq.desc);
  const auto& w = *sq.left.source();
  for (Obj x = 0; x < w.size(); ++x) {
    const Obj y = sq.top(x), l = sq.left(x);
    if (sq.right(y) != sq.bottom(l))
      throw NonCommutingSquare(sq.desc + ": composites differ on object " + w.render(x));
    for (const auto& g : w.generators(x)) {
      if (sq.right(y, sq.top(x, g)) != sq.bottom(l, sq.left(x, g)))
        throw NonCommutingSquare(sq.desc + ": composites differ on an arrow at " + w.render(x));
    }
  }
}

Verdict is_equivalence(const Functor& f, std::optional<int> grade_bound) {
  const auto& a = *f.source();
  const auto& b = *f.target();
  std::unordered_map<Obj, Obj> hit;
  for (Obj c = 0; c < a.num_components(); ++c) {
    const Obj x = a.rep(c);
    const Obj fx = f(x);
    const Obj d = b.component(fx);
    auto [it, fresh] = hit.emplace(d, c);
    if (!fresh)
      return {false, "objects " + a.render(a.rep(it->second)) + " and " + a.render(x) +
                         " are not isomorphic but have isomorphic images"};
    const auto& aut = a.aut(c);
    if (aut.size() != b.aut_order(d))
      return {false, "hom-set sizes " + std::to_string(aut.size()) + " vs " + std::to_string(b.aut_order(d)) +
                         " at " + a.render(x)};
    std::unordered_set<Perm, PermHash> images;
    for (const auto& g : aut) images.insert(f(x, g));
    if (images.size() != aut.size()) return {false, "not faithful at " + a.render(x)};
  }
  for (Obj d = 0; d < b.num_components(); ++d) {
    if (hit.count(d)) continue;
    if (grade_bound && b.component_grade(d) > *grade_bound) continue;
    return {false, "object " + b.render(b.rep(d)) + " is not in the essential image"};
  }
  return {};
}

GradeRule resolve_grade_rule(const GroupoidSquare& sq, GradeRule rule) {
  if (rule != GradeRule::Auto) return rule;
  const auto& w = *sq.left.source();
  bool left_ok = true, top_ok = true;
  for (Obj x = 0; x < w.size() && (left_ok || top_ok); ++x) {
    if (sq.left.target()->grade(sq.left(x)) != w.grade(x)) left_ok = false;
    if (sq.top.target()->grade(sq.top(x)) != w.grade(x)) top_ok = false;
  }
  if (left_ok) return GradeRule::Left;
  if (top_ok) return GradeRule::Top;
  return GradeRule::Additive;
}

namespace {

int rule_grade(GradeRule rule, int gx, int gy, int gs) {
  switch (rule) {
    case GradeRule::Max: return std::max(gx, gy);
    case GradeRule::Additive: return gx + gy - gs;
    case GradeRule::Left: return gx;
    case GradeRule::Top: return gy;
    case GradeRule::Auto: break;
  }
  return std::max(gx, gy);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Components of the pullback lying over a pair of components (cx, cy): the double
// cosets Im Aut(y0) \ Hom(b x0, r y0) / Im Aut(x0), transported into Aut(s0).
struct DoubleCosets {
  Perm tb, tr;
  std::unordered_map<Perm, int, PermHash> index;
  std::vector<int> orbit;
  std::vector<Perm> elems;
  int count = 0;
  int grade = 0;
};

class PullbackAnalysis {
 public:
  PullbackAnalysis(const GroupoidSquare& sq, GradeRule rule)
      : sq_(sq), X_(*sq.left.target()), Y_(*sq.top.target()), S_(*sq.bottom.target()), rule_(rule) {}

  DoubleCosets& cosets(Obj cx, Obj cy) {
    auto key = std::make_pair(cx, cy);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    DoubleCosets dc;
    const Obj x0 = X_.rep(cx), y0 = Y_.rep(cy);
    const Obj bx = sq_.bottom(x0), ry = sq_.right(y0);
    const Obj cs = S_.component(bx);
    dc.tb = S_.transport(bx);
    dc.tr = S_.transport(ry);
    dc.grade = rule_grade(rule_, X_.grade(x0), Y_.grade(y0), S_.component_grade(cs));
    dc.elems = S_.aut(cs);
    for (std::size_t i = 0; i < dc.elems.size(); ++i) dc.index.emplace(dc.elems[i], static_cast<int>(i));
    const Perm tbi = inverse(dc.tb), tri = inverse(dc.tr);
    std::vector<Perm> left_inv, right;
    for (const auto& g : X_.aut_generators(cx))
      left_inv.push_back(inverse(compose(tbi, compose(sq_.bottom(x0, g), dc.tb))));
    for (const auto& h : Y_.aut_generators(cy)) right.push_back(compose(tri, compose(sq_.right(y0, h), dc.tr)));
    UnionFind uf(dc.elems.size());
    for (std::size_t i = 0; i < dc.elems.size(); ++i) {
      for (const auto& l : left_inv) uf.unite(static_cast<int>(i), dc.index.at(compose(dc.elems[i], l)));
      for (const auto& r : right) uf.unite(static_cast<int>(i), dc.index.at(compose(r, dc.elems[i])));
    }
    dc.orbit.assign(dc.elems.size(), -1);
    std::unordered_map<int, int> ids;
    for (std::size_t i = 0; i < dc.elems.size(); ++i) {
      auto [jt, fresh] = ids.emplace(uf.find(static_cast<int>(i)), dc.count);
      if (fresh) ++dc.count;
      dc.orbit[i] = jt->second;
    }
    return cache_.emplace(key, std::move(dc)).first->second;
  }

 private:
  const GroupoidSquare& sq_;
  const Groupoid &X_, &Y_, &S_;
  GradeRule rule_;
  std::map<std::pair<Obj, Obj>, DoubleCosets> cache_;
};

}  // namespace

Verdict is_pullback_square(const GroupoidSquare& sq, std::optional<int> grade_bound, GradeRule rule) {
  check_commutes(sq);
  rule = resolve_grade_rule(sq, rule);
  const auto& W = *sq.left.source();
  const auto& X = *sq.left.target();
  const auto& Y = *sq.top.target();
  const auto& S = *sq.bottom.target();
  PullbackAnalysis pa(sq, rule);
  std::map<std::pair<Obj, Obj>, std::vector<Obj>> hit;

  for (Obj cw = 0; cw < W.num_components(); ++cw) {
    const Obj w = W.rep(cw);
    const Obj x = sq.left(w), y = sq.top(w);
    const Obj cx = X.component(x), cy = Y.component(y);
    const Obj x0 = X.rep(cx);
    auto& dc = pa.cosets(cx, cy);
    const Perm alpha = X.transport(x);
    const Perm beta_inv = inverse(Y.transport(y));
    const Perm sigma = compose(sq.right(y, beta_inv), sq.bottom(x0, alpha));
    const Perm a = compose(inverse(dc.tr), compose(sigma, dc.tb));
    const int orb = dc.orbit[dc.index.at(a)];
    auto& h = hit[{cx, cy}];
    if (h.empty()) h.assign(dc.count, -1);
    if (h[orb] >= 0)
      return {false, "non-isomorphic objects " + W.render(W.rep(h[orb])) + " and " + W.render(w) +
                         " give isomorphic objects of the pullback"};
    h[orb] = cw;

    const auto aut_w = W.aut_at(w);
    std::unordered_map<Perm, std::size_t, PermHash> bimg;
    for (const auto& g : X.aut_at(x)) ++bimg[sq.bottom(x, g)];
    std::size_t aut_p = 0;
    for (const auto& k : Y.aut_at(y)) {
      auto it = bimg.find(sq.right(y, k));
      if (it != bimg.end()) aut_p += it->second;
    }
    if (aut_p != aut_w.size())
      return {false, "automorphism groups differ at " + W.render(w) + ": " + std::to_string(aut_w.size()) +
                         " in the corner vs " + std::to_string(aut_p) + " in the pullback"};
    std::unordered_set<Perm, PermHash> pairs;
    for (const auto& g : aut_w) pairs.insert(direct_sum(sq.left(w, g), sq.top(w, g)));
    if (pairs.size() != aut_w.size()) return {false, "comparison is not faithful at " + W.render(w)};
  }

  std::unordered_map<Obj, std::vector<Obj>> ybucket;
  for (Obj cy = 0; cy < Y.num_components(); ++cy) ybucket[S.component(sq.right(Y.rep(cy)))].push_back(cy);
  for (Obj cx = 0; cx < X.num_components(); ++cx) {
    const Obj x0 = X.rep(cx);
    const Obj cs = S.component(sq.bottom(x0));
    auto it = ybucket.find(cs);
    if (it == ybucket.end()) continue;
    for (Obj cy : it->second) {
      const Obj y0 = Y.rep(cy);
      const int g = rule_grade(rule, X.grade(x0), Y.grade(y0), S.component_grade(cs));
      if (grade_bound && g > *grade_bound) continue;
      auto& dc = pa.cosets(cx, cy);
      auto ht = hit.find({cx, cy});
      for (int o = 0; o < dc.count; ++o) {
        if (ht != hit.end() && ht->second[o] >= 0) continue;
        int idx = static_cast<int>(std::find(dc.orbit.begin(), dc.orbit.end(), o) - dc.orbit.begin());
        const Perm sigma = compose(dc.tr, compose(dc.elems[idx], inverse(dc.tb)));
        return {false, "pullback object (" + X.render(x0) + ", " + Y.render(y0) + ", " + to_string(sigma) +
                           ") is not in the image of the corner"};
      }
    }
  }
  return {};
}

Verdict is_pullback_square_explicit(const GroupoidSquare& sq, std::optional<int> grade_bound, GradeRule rule) {
  check_commutes(sq);
  rule = resolve_grade_rule(sq, rule);
  Pullback pb = homotopy_pullback(sq.bottom, sq.right, rule);
  return is_equivalence(pullback_comparison(sq, pb), grade_bound);
}

// ---------------------------------------------------------------- classes, cardinality

IsoClassTable iso_classes(const Groupoid& g) {
  IsoClassTable t;
  t.classes.resize(g.num_components());
  for (Obj c = 0; c < g.num_components(); ++c) {
    t.classes[c].rep = g.rep(c);
    t.classes[c].aut_order = g.aut_order(c);
    t.classes[c].key = g.class_key(c);
  }
  for (Obj x = 0; x < g.size(); ++x) t.classes[g.component(x)].members.push_back(x);
  return t;
}

Rational groupoid_cardinality(const Groupoid& g) {
  Rational r = 0;
  for (Obj c = 0; c < g.num_components(); ++c) r += Rational(1, static_cast<long>(g.aut_order(c)));
  return r;
}

Rational groupoid_cardinality(const Groupoid& g, int bound) {
  Rational r = 0;
  for (Obj c = 0; c < g.num_components(); ++c)
    if (g.component_grade(c) <= bound) r += Rational(1, static_cast<long>(g.aut_order(c)));
  return r;
}

// ---------------------------------------------------------------- constructions

AGPtr terminal_groupoid() {
  static AGPtr t = std::make_shared<ActionGroupoid>(
      "1", std::vector<ActionGroupoid::Block>{{0, {}}}, std::vector<ActionGroupoid::Object>{{{}, 0, 0}},
      [](const Payload& p, int, const Perm&) { return p; }, [](const Payload&) { return std::string("*"); });
  return t;
}

AGPtr one_object_groupoid(std::string name, std::size_t degree, std::vector<Perm> gens) {
  return std::make_shared<ActionGroupoid>(
      name, std::vector<ActionGroupoid::Block>{{degree, std::move(gens)}},
      std::vector<ActionGroupoid::Object>{{{0}, 0, 0}}, [](const Payload& p, int, const Perm&) { return p; },
      [](const Payload&) { return std::string("*"); });
}

AGPtr product(const GPtr& a, const GPtr& b, std::optional<int> grade_bound) {
  std::vector<ActionGroupoid::Block> blocks;
  std::map<std::pair<Obj, Obj>, int> block_ids;
  std::vector<ActionGroupoid::Object> objs;
  for (Obj x = 0; x < a->size(); ++x) {
    for (Obj y = 0; y < b->size(); ++y) {
      const int g = a->grade(x) + b->grade(y);
      if (grade_bound && g > *grade_bound) continue;
      auto key = std::make_pair(a->block_of(x), b->block_of(y));
      auto it = block_ids.find(key);
      if (it == block_ids.end()) {
        std::vector<std::vector<Perm>> per{a->generators(x), b->generators(y)};
        std::vector<std::size_t> degs{a->degree(x), b->degree(y)};
        blocks.push_back({degs[0] + degs[1], direct_sum_generators(per, degs)});
        it = block_ids.emplace(key, static_cast<int>(blocks.size()) - 1).first;
      }
      objs.push_back({{static_cast<int>(x), static_cast<int>(y)}, it->second, g});
    }
  }
  auto act = [a, b](const Payload& p, int, const Perm& g) {
    const std::size_t da = a->degree(p[0]);
    return Payload{static_cast<int>(a->act(p[0], slice(g, 0, da))),
                   static_cast<int>(b->act(p[1], slice(g, da, g.size() - da)))};
  };
  auto render = [a, b](const Payload& p) { return "(" + a->render(p[0]) + ", " + b->render(p[1]) + ")"; };
  auto canon = [a, b](const Payload& p) { return "(" + a->key_of(p[0]).text + "," + b->key_of(p[1]).text + ")"; };
  return std::make_shared<ActionGroupoid>(a->name() + " x " + b->name(), std::move(blocks), std::move(objs), act,
                                          render, canon);
}

Functor product_projection(const AGPtr& prod, const GPtr& a, const GPtr& b, int which) {
  if (which == 0)
    return Functor::tabulated(
        prod, a, [prod](Obj x) { return static_cast<Obj>(prod->data(x)[0]); },
        [prod, a](Obj x, const Perm& g) { return slice(g, 0, a->degree(prod->data(x)[0])); }, "pr1");
  return Functor::tabulated(
      prod, b, [prod](Obj x) { return static_cast<Obj>(prod->data(x)[1]); },
      [prod, a](Obj x, const Perm& g) {
        const std::size_t da = a->degree(prod->data(x)[0]);
        return slice(g, da, g.size() - da);
      },
      "pr2");
}

std::shared_ptr<const ProductGroupoid> product_virtual(std::vector<GPtr> factors) {
  return std::make_shared<ProductGroupoid>(std::move(factors));
}

Functor tuple_functor(const std::vector<Functor>& fs, std::shared_ptr<const ProductGroupoid> target) {
  GPtr src = fs.at(0).source();
  return Functor(
      src, target,
      [fs, target](Obj x) {
        std::vector<Obj> ys;
        for (const auto& f : fs) ys.push_back(f(x));
        return target->encode(ys);
      },
      [fs](Obj x, const Perm& g) {
        Perm p;
        for (const auto& f : fs) p = direct_sum(p, f(x, g));
        return p;
      },
      "tuple");
}

Functor product_functor(const std::vector<Functor>& fs, std::shared_ptr<const ProductGroupoid> source,
                        std::shared_ptr<const ProductGroupoid> target) {
  return Functor(
      source, target,
      [fs, source, target](Obj x) {
        auto xs = source->decode(x);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = fs[i](xs[i]);
        return target->encode(xs);
      },
      [fs, source](Obj x, const Perm& g) {
        auto xs = source->decode(x);
        auto parts = source->split(x, g);
        Perm p;
        for (std::size_t i = 0; i < xs.size(); ++i) p = direct_sum(p, fs[i](xs[i], parts[i]));
        return p;
      },
      "product");
}

Functor name_functor(const GPtr& s, Obj obj) {
  if (obj < 0 || obj >= s->size()) throw ObjectNotFound("name: object out of range");
  const std::size_t d = s->degree(obj);
  return Functor(
      terminal_groupoid(), s, [obj](Obj) { return obj; }, [d](Obj, const Perm&) { return identity_perm(d); },
      "name");
}

Pullback homotopy_pullback(const Functor& p, const Functor& q, GradeRule rule, std::optional<int> grade_bound) {
  if (p.target().get() != q.target().get()) throw TargetMismatch("homotopy_pullback: legs have different targets");
  if (rule == GradeRule::Auto) rule = GradeRule::Max;
  GPtr X = p.source(), Y = q.source(), S = p.target();
  std::unordered_map<Obj, std::vector<Obj>> ybucket;
  for (Obj y = 0; y < Y->size(); ++y) ybucket[S->component(q(y))].push_back(y);
  std::vector<ActionGroupoid::Block> blocks;
  std::map<std::pair<Obj, Obj>, int> block_ids;
  std::vector<ActionGroupoid::Object> objs;
  for (Obj x = 0; x < X->size(); ++x) {
    const Obj px = p(x);
    const Obj cs = S->component(px);
    auto it = ybucket.find(cs);
    if (it == ybucket.end()) continue;
    const Perm tpi = inverse(S->transport(px));
    for (Obj y : it->second) {
      const int g = rule_grade(rule, X->grade(x), Y->grade(y), S->component_grade(cs));
      if (grade_bound && g > *grade_bound) continue;
      auto key = std::make_pair(X->block_of(x), Y->block_of(y));
      auto bt = block_ids.find(key);
      if (bt == block_ids.end()) {
        std::vector<std::vector<Perm>> per{X->generators(x), Y->generators(y)};
        std::vector<std::size_t> degs{X->degree(x), Y->degree(y)};
        blocks.push_back({degs[0] + degs[1], direct_sum_generators(per, degs)});
        bt = block_ids.emplace(key, static_cast<int>(blocks.size()) - 1).first;
      }
      const Perm tq = S->transport(q(y));
      for (const auto& a : S->aut(cs)) {
        Perm sigma = compose(tq, compose(a, tpi));
        Payload pl{static_cast<int>(x), static_cast<int>(y)};
        pl.insert(pl.end(), sigma.begin(), sigma.end());
        objs.push_back({std::move(pl), bt->second, g});
      }
    }
  }
  auto act = [X, Y, p, q](const Payload& pl, int, const Perm& gh) {
    const Obj x = pl[0], y = pl[1];
    const std::size_t dx = X->degree(x);
    const Perm g = slice(gh, 0, dx), h = slice(gh, dx, gh.size() - dx);
    const Perm sigma(pl.begin() + 2, pl.end());
    const Perm s2 = compose(q(y, h), compose(sigma, inverse(p(x, g))));
    Payload out{static_cast<int>(X->act(x, g)), static_cast<int>(Y->act(y, h))};
    out.insert(out.end(), s2.begin(), s2.end());
    return out;
  };
  auto render = [X, Y](const Payload& pl) {
    const Perm sigma(pl.begin() + 2, pl.end());
    return "(" + X->render(pl[0]) + ", " + Y->render(pl[1]) + ", " + to_string(sigma) + ")";
  };
  auto P = std::make_shared<ActionGroupoid>(X->name() + " x_" + S->name() + " " + Y->name(), std::move(blocks),
                                            std::move(objs), act, render);
  Pullback pb;
  pb.object = P;
  pb.p = p;
  pb.q = q;
  pb.to_x = Functor::tabulated(
      P, X, [P](Obj o) { return static_cast<Obj>(P->data(o)[0]); },
      [P, X](Obj o, const Perm& g) { return slice(g, 0, X->degree(P->data(o)[0])); }, "pr_x");
  pb.to_y = Functor::tabulated(
      P, Y, [P](Obj o) { return static_cast<Obj>(P->data(o)[1]); },
      [P, X](Obj o, const Perm& g) {
        const std::size_t dx = X->degree(P->data(o)[0]);
        return slice(g, dx, g.size() - dx);
      },
      "pr_y");
  return pb;
}

Functor pullback_comparison(const GroupoidSquare& sq, const Pullback& pb) {
  auto P = pb.object;
  GPtr S = sq.bottom.target();
  return Functor(
      sq.left.source(), P,
      [sq, P, S](Obj w) {
        const Obj x = sq.left(w), y = sq.top(w);
        Payload pl{static_cast<int>(x), static_cast<int>(y)};
        const Perm id = identity_perm(S->degree(sq.bottom(x)));
        pl.insert(pl.end(), id.begin(), id.end());
        const Obj o = P->find(pl);
        if (o < 0) throw ObjectNotFound("comparison: pullback object missing for " + sq.left.source()->render(w));
        return o;
      },
      [sq](Obj w, const Perm& g) { return direct_sum(sq.left(w, g), sq.top(w, g)); }, "comparison");
}

AGPtr homotopy_fibre_multi(const std::vector<Functor>& fs, const std::vector<Obj>& targets) {
  if (fs.empty() || fs.size() != targets.size()) throw std::invalid_argument("homotopy_fibre_multi: arity mismatch");
  GPtr M = fs[0].source();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].source().get() != M.get()) throw TargetMismatch("homotopy_fibre_multi: functors differ in source");
    if (targets[i] < 0 || targets[i] >= fs[i].target()->size()) throw ObjectNotFound("homotopy_fibre: no such object");
  }
  std::vector<ActionGroupoid::Block> blocks;
  std::map<Obj, int> block_ids;
  std::vector<ActionGroupoid::Object> objs;
  for (Obj m = 0; m < M->size(); ++m) {
    std::vector<std::vector<Perm>> homs;
    bool ok = true;
    for (std::size_t i = 0; i < fs.size() && ok; ++i) {
      homs.push_back(fs[i].target()->hom(fs[i](m), targets[i]));
      ok = !homs.back().empty();
    }
    if (!ok) continue;
    auto bt = block_ids.find(M->block_of(m));
    if (bt == block_ids.end()) {
      blocks.push_back({M->degree(m), M->generators(m)});
      bt = block_ids.emplace(M->block_of(m), static_cast<int>(blocks.size()) - 1).first;
    }
    std::vector<std::size_t> idx(fs.size(), 0);
    while (true) {
      Payload pl{static_cast<int>(m)};
      for (std::size_t i = 0; i < fs.size(); ++i) {
        pl.push_back(static_cast<int>(homs[i][idx[i]].size()));
        pl.insert(pl.end(), homs[i][idx[i]].begin(), homs[i][idx[i]].end());
      }
      objs.push_back({std::move(pl), bt->second, M->grade(m)});
      std::size_t k = 0;
      while (k < fs.size() && ++idx[k] == homs[k].size()) idx[k++] = 0;
      if (k == fs.size()) break;
    }
  }
  auto act = [M, fs](const Payload& pl, int, const Perm& g) {
    const Obj m = pl[0];
    Payload out{static_cast<int>(M->act(m, g))};
    std::size_t pos = 1;
    for (const auto& f : fs) {
      const std::size_t d = pl[pos];
      const Perm sigma(pl.begin() + pos + 1, pl.begin() + pos + 1 + d);
      const Perm s2 = compose(sigma, inverse(f(m, g)));
      out.push_back(static_cast<int>(d));
      out.insert(out.end(), s2.begin(), s2.end());
      pos += 1 + d;
    }
    return out;
  };
  auto render = [M](const Payload& pl) { return "fibre point over " + M->render(pl[0]); };
  return std::make_shared<ActionGroupoid>("fibre", std::move(blocks), std::move(objs), act, render);
}

AGPtr homotopy_fibre(const Functor& p, Obj s) { return homotopy_fibre_multi({p}, {s}); }

// ---------------------------------------------------------------- explicit groupoids

CheckReport validate_groupoid(const ExplicitGroupoid& g) {
  CheckReport rep;
  rep.check = "validate_groupoid";
  rep.space = "explicit groupoid";
  const int n = g.num_objects();
  const int m = static_cast<int>(g.arrows.size());
  auto arrow_name = [](int a) { return "arrow #" + std::to_string(a); };

  std::optional<std::string> malformed;
  for (int a = 0; a < m && !malformed; ++a)
    if (g.arrows[a].src < 0 || g.arrows[a].src >= n || g.arrows[a].tgt < 0 || g.arrows[a].tgt >= n)
      malformed = arrow_name(a) + " has an unknown source or target";
  if (!malformed && static_cast<int>(g.identity.size()) != n) malformed = "identity table does not cover every object";
  for (int x = 0; x < n && !malformed; ++x) {
    const int i = g.identity[x];
    if (i < 0 || i >= m || g.arrows[i].src != x || g.arrows[i].tgt != x)
      malformed = "identity of object " + std::to_string(x) + " is not an endo-arrow of it";
  }
  rep.add("ids well formed", !malformed, malformed);
  if (malformed) return rep;

  auto comp = [&](int h, int f) -> int {
    auto it = g.compose.find({h, f});
    return it == g.compose.end() ? -1 : it->second;
  };
  std::optional<std::string> partial;
  for (int f = 0; f < m && !partial; ++f)
    for (int h = 0; h < m && !partial; ++h) {
      if (g.arrows[f].tgt != g.arrows[h].src) continue;
      const int c = comp(h, f);
      if (c < 0 || c >= m)
        partial = "composite of " + arrow_name(h) + " after " + arrow_name(f) + " is undefined";
      else if (g.arrows[c].src != g.arrows[f].src || g.arrows[c].tgt != g.arrows[h].tgt)
        partial = "composite of " + arrow_name(h) + " after " + arrow_name(f) + " has the wrong endpoints";
    }
  rep.add("composition total on composable pairs", !partial, partial);
  if (partial) return rep;

  std::optional<std::string> unit;
  for (int f = 0; f < m && !unit; ++f) {
    if (comp(g.identity[g.arrows[f].tgt], f) != f || comp(f, g.identity[g.arrows[f].src]) != f)
      unit = "identities are not units for " + arrow_name(f);
  }
  rep.add("identities are two-sided units", !unit, unit);

  std::optional<std::string> assoc;
  for (int f = 0; f < m && !assoc; ++f)
    for (int h = 0; h < m && !assoc; ++h) {
      if (g.arrows[f].tgt != g.arrows[h].src) continue;
      for (int k = 0; k < m && !assoc; ++k) {
        if (g.arrows[h].tgt != g.arrows[k].src) continue;
        if (comp(k, comp(h, f)) != comp(comp(k, h), f))
          assoc = "associativity fails on " + arrow_name(k) + ", " + arrow_name(h) + ", " + arrow_name(f);
      }
    }
  rep.add("composition is associative", !assoc, assoc);

  std::optional<std::string> inv;
  for (int f = 0; f < m && !inv; ++f) {
    bool found = false;
    for (int h = 0; h < m && !found; ++h) {
      if (g.arrows[h].src != g.arrows[f].tgt || g.arrows[h].tgt != g.arrows[f].src) continue;
      found = comp(h, f) == g.identity[g.arrows[f].src] && comp(f, h) == g.identity[g.arrows[f].tgt];
    }
    if (!found) inv = "groupoid condition: " + arrow_name(f) + " has no inverse";
  }
  rep.add("groupoid condition", !inv, inv);
  return rep;
}

ExplicitGroupoid to_explicit(const Groupoid& g) {
  ExplicitGroupoid e;
  const Obj n = g.size();
  e.grade.resize(n);
  e.identity.resize(n);
  std::vector<std::unordered_map<Perm, int, PermHash>> out(n);
  std::vector<std::vector<Obj>> by_comp(g.num_components());
  for (Obj x = 0; x < n; ++x) {
    e.grade[x] = g.grade(x);
    by_comp[g.component(x)].push_back(x);
  }
  for (Obj x = 0; x < n; ++x) {
    for (Obj y : by_comp[g.component(x)]) {
      for (auto& p : g.hom(x, y)) {
        out[x].emplace(p, static_cast<int>(e.arrows.size()));
        e.arrows.push_back({static_cast<int>(x), static_cast<int>(y)});
      }
    }
    e.identity[x] = out[x].at(g.identity(x));
  }
  std::vector<Perm> perm_of(e.arrows.size());
  for (Obj x = 0; x < n; ++x)
    for (auto& [p, id] : out[x]) perm_of[id] = p;
  for (std::size_t f = 0; f < e.arrows.size(); ++f) {
    const Obj y = e.arrows[f].tgt;
    for (auto& [q, h] : out[y]) e.compose[{h, static_cast<int>(f)}] = out[e.arrows[f].src].at(compose(q, perm_of[f]));
  }
  return e;
}

Presented from_explicit(const ExplicitGroupoid& g) {
  auto rep = validate_groupoid(g);
  if (!rep.pass()) throw InvalidGroupoid(rep.first_failure()->witness.value_or("invalid groupoid"));
  const int n = g.num_objects();
  const int m = static_cast<int>(g.arrows.size());
  UnionFind uf(n);
  for (const auto& a : g.arrows) uf.unite(a.src, a.tgt);
  std::map<int, std::vector<int>> comps;
  for (int x = 0; x < n; ++x) comps[uf.find(x)].push_back(x);
  auto comp = [&](int h, int f) { return g.compose.at({h, f}); };
  auto inv = [&](int f) {
    for (int h = 0; h < m; ++h)
      if (g.arrows[h].src == g.arrows[f].tgt && comp(h, f) == g.identity[g.arrows[f].src]) return h;
    return -1;
  };

  std::vector<ActionGroupoid::Block> blocks;
  std::vector<ActionGroupoid::Object> objs;
  std::vector<int> pos(n), comp_of(n);
  std::vector<std::vector<int>> comp_objects;
  std::vector<std::size_t> aut_size;
  Presented res;
  res.arrow_perm.resize(m);
  for (auto& [root, xs] : comps) {
    const int r = xs.front();
    const int k = static_cast<int>(xs.size());
    std::vector<int> autl;
    for (int a = 0; a < m; ++a)
      if (g.arrows[a].src == r && g.arrows[a].tgt == r) autl.push_back(a);
    std::map<int, int> aidx;
    for (std::size_t i = 0; i < autl.size(); ++i) aidx[autl[i]] = static_cast<int>(i);
    std::vector<int> tau(k), tau_inv(k);
    for (int i = 0; i < k; ++i) {
      pos[xs[i]] = i;
      comp_of[xs[i]] = static_cast<int>(comp_objects.size());
      for (int a = 0; a < m; ++a)
        if (g.arrows[a].src == r && g.arrows[a].tgt == xs[i]) {
          tau[i] = a;
          break;
        }
      tau_inv[i] = inv(tau[i]);
    }
    const std::size_t na = autl.size();
    const std::size_t deg = na * k;
    const int block = static_cast<int>(blocks.size());
    std::vector<Perm> gens;
    for (int a = 0; a < m; ++a) {
      const int i = g.arrows[a].src, j = g.arrows[a].tgt;
      if (uf.find(i) != root) continue;
      const int pi = pos[i], pj = pos[j];
      const int ael = aidx.at(comp(tau_inv[pj], comp(a, tau[pi])));
      const int t = ((pj - pi) % k + k) % k;
      Perm p(deg);
      for (std::size_t b = 0; b < na; ++b)
        for (int u = 0; u < k; ++u)
          p[u * na + b] = static_cast<std::uint16_t>(((u + t) % k) * na + aidx.at(comp(autl[ael], autl[b])));
      res.arrow_perm[a] = p;
      if (i == r) gens.push_back(p);
    }
    blocks.push_back({deg, std::move(gens)});
    for (int x : xs) objs.push_back({{x}, block, g.grade[x]});
    comp_objects.push_back(xs);
    aut_size.push_back(na);
  }
  auto act = [pos, comp_of, comp_objects, aut_size](const Payload& p, int, const Perm& g) {
    const int x = p[0];
    const int c = comp_of[x];
    const int k = static_cast<int>(comp_objects[c].size());
    // The image of point 0 records the translation part of g.
    const int t = static_cast<int>(g[0] / aut_size[c]);
    return Payload{comp_objects[c][(pos[x] + t) % k]};
  };
  res.groupoid = std::make_shared<ActionGroupoid>("presented", std::move(blocks), std::move(objs), act);
  return res;
}

}  // namespace dsp
