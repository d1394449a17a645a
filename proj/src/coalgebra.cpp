#include "dsp/coalgebra.hpp"

#include <algorithm>

namespace dsp {

std::string to_string(const Key& k) {
  if (k.size() == 1) return k[0].text;
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ", " : "") + k[i].text;
  return s + ")";
}

void SparseVec::add(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = e_.emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) e_.erase(it);
}

Rational SparseVec::at(const Key& k) const {
  auto it = e_.find(k);
  return it == e_.end() ? Rational(0) : it->second;
}

Rational SparseMat::at(const Key& row, const Key& col) const {
  auto it = columns.find(col);
  return it == columns.end() ? Rational(0) : it->second.at(row);
}

const SparseVec& SparseMat::column(const Key& col) const {
  auto it = columns.find(col);
  if (it == columns.end()) throw GradeOverflow("no column for " + to_string(col) + " in the computed table");
  return it->second;
}

bool SparseMat::operator==(const SparseMat& o) const {
  if (columns.size() != o.columns.size()) return false;
  for (const auto& [k, v] : columns) {
    auto it = o.columns.find(k);
    if (it == o.columns.end() || !(it->second == v)) return false;
  }
  return true;
}

std::vector<BasisElement> basis(const SimplicialGroupoid& X, std::optional<int> grade_bound) {
  const auto& X1 = *X.level(1);
  std::vector<BasisElement> out;
  for (Obj c = 0; c < X1.num_components(); ++c) {
    if (grade_bound && X1.component_grade(c) > *grade_bound) continue;
    out.push_back({X1.class_key(c), X1.aut_order(c), X1.rep(c)});
  }
  std::sort(out.begin(), out.end(), [](const BasisElement& a, const BasisElement& b) { return a.key < b.key; });
  return out;
}

namespace {

Rational ratio(std::size_t num, std::size_t den) { return Rational(static_cast<long>(num), static_cast<long>(den)); }

Key keys_of(const std::vector<Functor>& legs, Obj m) {
  Key k;
  for (const auto& f : legs) k.push_back(f.target()->key_of(f(m)));
  return k;
}

std::optional<int> effective_bound(const SimplicialGroupoid& X, std::optional<int> requested) {
  if (requested && X.grade_bound >= 0 && *requested > X.grade_bound)
    throw GradeOverflow(X.name + " is truncated at grade " + std::to_string(X.grade_bound) + ", asked for " +
                        std::to_string(*requested));
  return requested ? requested : X.bound();
}

// Text of a differing entry, for witnesses.
std::optional<std::string> difference(const SparseVec& a, const SparseVec& b) {
  for (const auto& [k, c] : a.entries())
    if (b.at(k) != c) return "at " + to_string(k) + ": " + to_string(c) + " vs " + to_string(b.at(k));
  for (const auto& [k, c] : b.entries())
    if (a.at(k) != c) return "at " + to_string(k) + ": " + to_string(a.at(k)) + " vs " + to_string(c);
  return std::nullopt;
}

SparseVec unit(const Key& k) {
  SparseVec v;
  v.add(k, 1);
  return v;
}

// Records lhs == rhs, turning a missing column into a failed record.
template <class L, class R>
void compare(CheckReport& rep, const std::string& desc, L lhs, R rhs) {
  try {
    const auto d = difference(lhs(), rhs());
    rep.add(desc, !d, d);
  } catch (const GradeOverflow& e) {
    rep.add(desc, false, std::string("grade overflow: ") + e.what());
  }
}

}  // namespace

SparseVec coeff_vector(const std::vector<Functor>& legs) {
  if (legs.empty()) throw std::invalid_argument("coeff_vector needs at least one leg");
  const auto& M = *legs[0].source();
  SparseVec v;
  for (Obj c = 0; c < M.num_components(); ++c) v.add(keys_of(legs, M.rep(c)), ratio(1, M.aut_order(c)));
  return v;
}

SparseVec fibre_coeff_vector(const Functor& p, Obj s, const std::vector<Functor>& legs) {
  AGPtr fib = homotopy_fibre(p, s);
  SparseVec v;
  for (Obj c = 0; c < fib->num_components(); ++c) {
    const Obj m = fib->data(fib->rep(c))[0];
    v.add(keys_of(legs, m), ratio(1, fib->aut_order(c)));
  }
  return v;
}

SparseMat delta_n(const SimplicialGroupoid& X, int n, std::optional<int> grade_bound) {
  if (n < 0 || n > X.N) throw LevelOutOfRange(X.name + ": Delta_" + std::to_string(n) + " needs level " + std::to_string(n));
  const auto bound = effective_bound(X, grade_bound);
  const auto& X1 = *X.level(1);
  const auto& Xn = *X.level(n);
  const Functor longest = evaluate(X, n == 0 ? DeltaMap(1, 0, {0, 0}) : DeltaMap(1, n, {0, n}));
  std::vector<Functor> edges;
  for (int i = 1; i <= n; ++i) edges.push_back(evaluate(X, DeltaMap(1, n, {i - 1, i})));
  SparseMat M;
  for (const auto& b : basis(X, bound)) M.columns[{b.key}];
  for (Obj c = 0; c < Xn.num_components(); ++c) {
    const Obj m = Xn.rep(c);
    const Obj cf = X1.component(longest(m));
    if (bound && X1.component_grade(cf) > *bound) continue;
    M.columns[{X1.class_key(cf)}].add(keys_of(edges, m), ratio(X1.aut_order(cf), Xn.aut_order(c)));
  }
  return M;
}

SparseMat comultiplication(const SimplicialGroupoid& X, std::optional<int> grade_bound) {
  return delta_n(X, 2, grade_bound);
}

SparseMat counit(const SimplicialGroupoid& X, std::optional<int> grade_bound) { return delta_n(X, 0, grade_bound); }

SparseVec comultiplication_column_via_fibre(const SimplicialGroupoid& X, Obj f) {
  return fibre_coeff_vector(X.face.at(2)[1], f, {X.face[2][2], X.face[2][0]});
}

Rational coefficient_via_triple_fibre(const SimplicialGroupoid& X, Obj f, Obj a, Obj b) {
  AGPtr fib = homotopy_fibre_multi({X.face.at(2)[1], X.face[2][2], X.face[2][0]}, {f, a, b});
  const auto& X1 = *X.level(1);
  return groupoid_cardinality(*fib) /
         ratio(X1.aut_order(X1.component(a)) * X1.aut_order(X1.component(b)), 1);
}

SparseVec apply_on_factor(const SparseMat& M, const SparseVec& v, std::size_t pos) {
  SparseVec out;
  for (const auto& [k, c] : v.entries()) {
    if (pos >= k.size()) throw std::out_of_range("apply_on_factor: no factor " + std::to_string(pos));
    for (const auto& [r, d] : M.column({k[pos]}).entries()) {
      Key nk(k.begin(), k.begin() + pos);
      nk.insert(nk.end(), r.begin(), r.end());
      nk.insert(nk.end(), k.begin() + pos + 1, k.end());
      out.add(nk, c * d);
    }
  }
  return out;
}

SparseVec apply_on_all_factors(const SparseMat& M, const SparseVec& v) {
  if (v.empty()) return v;
  const std::size_t len = v.entries().begin()->first.size();
  SparseVec out = v;
  // Right to left, so earlier positions stay put whatever the row arity of M.
  for (std::size_t pos = len; pos-- > 0;) out = apply_on_factor(M, out, pos);
  return out;
}

SparseVec apply(const SparseMat& M, const SparseVec& v) {
  SparseVec out;
  for (const auto& [k, c] : v.entries())
    for (const auto& [r, d] : M.column(k).entries()) out.add(r, c * d);
  return out;
}

CheckReport check_coassociativity(const SimplicialGroupoid& X, std::optional<int> grade_bound) {
  CheckReport rep;
  rep.check = "coassociativity";
  rep.space = X.name;
  rep.level = X.N;
  const auto bound = effective_bound(X, grade_bound);
  rep.grade_bound = bound ? *bound : -1;
  const SparseMat D = comultiplication(X, bound), E = counit(X, bound);
  std::optional<SparseMat> D3;
  if (X.N >= 3)
    D3 = delta_n(X, 3, bound);
  else
    rep.notes.push_back("N < 3: Delta_3 not compared");
  for (const auto& b : basis(X, bound)) {
    const Key f{b.key};
    const SparseVec& col = D.column(f);
    auto left = [&] { return apply_on_factor(D, col, 0); };
    auto right = [&] { return apply_on_factor(D, col, 1); };
    compare(rep, "(Delta x id) Delta = (id x Delta) Delta at " + b.key.text, left, right);
    if (D3) compare(rep, "(Delta x id) Delta = Delta_3 at " + b.key.text, left, [&] { return D3->column(f); });
    compare(rep, "(eps x id) Delta = id at " + b.key.text, [&] { return apply_on_factor(E, col, 0); },
            [&] { return unit(f); });
    compare(rep, "(id x eps) Delta = id at " + b.key.text, [&] { return apply_on_factor(E, col, 1); },
            [&] { return unit(f); });
  }
  return rep;
}

SparseMat pushforward_hom(const SimpMap& F, std::optional<int> grade_bound) {
  const auto bound = effective_bound(*F.source, grade_bound);
  const Functor& F1 = F.comp.at(1);
  SparseMat M;
  for (const auto& b : basis(*F.source, bound)) M.columns[{b.key}].add({F1.target()->key_of(F1(b.rep))}, 1);
  return M;
}

SparseMat transfer_matrix(const SimpMap& E, const SimpMap& G, std::optional<int> grade_bound) {
  if (E.source.get() != G.source.get()) throw TargetMismatch("transfer_matrix: maps with different sources");
  const auto bound = effective_bound(*E.target, grade_bound);
  const Functor &E1 = E.comp.at(1), &G1 = G.comp.at(1);
  const auto& Z1 = *E.source->level(1);
  std::map<IsoKey, Obj> preimage;
  for (Obj c = 0; c < Z1.num_components(); ++c) preimage.emplace(E1.target()->key_of(E1(Z1.rep(c))), Z1.rep(c));
  SparseMat M;
  for (const auto& b : basis(*E.target, bound)) {
    auto it = preimage.find(b.key);
    if (it == preimage.end()) throw UnknownKey("no preimage of " + b.key.text + " under " + E.name);
    M.columns[{b.key}].add({G1.target()->key_of(G1(it->second))}, 1);
  }
  return M;
}

CheckReport check_homomorphism(const SparseMat& M, const SimplicialGroupoid& X, const SimplicialGroupoid& Y,
                               std::optional<int> grade_bound) {
  CheckReport rep;
  rep.check = "coalgebra homomorphism";
  rep.space = X.name + " -> " + Y.name;
  rep.level = X.N;
  const auto bound = effective_bound(X, grade_bound);
  rep.grade_bound = bound ? *bound : -1;
  const SparseMat DX = comultiplication(X, bound), EX = counit(X, bound);
  const SparseMat DY = comultiplication(Y), EY = counit(Y);
  for (const auto& b : basis(X, bound)) {
    const Key f{b.key};
    compare(rep, "Delta M = (M x M) Delta at " + b.key.text, [&] { return apply(DY, M.column(f)); },
            [&] { return apply_on_all_factors(M, DX.column(f)); });
    compare(rep, "eps M = eps at " + b.key.text, [&] { return apply(EY, M.column(f)); },
            [&] { return EX.column(f); });
  }
  return rep;
}

SparseMat multiplication(const MonoidalSpace& M, std::optional<int> grade_bound) {
  if (!M.space || !M.square || M.mu.comp.size() < 2)
    throw std::invalid_argument("multiplication needs a monoidal structure map");
  const auto bound = effective_bound(*M.space, grade_bound);
  auto P = std::dynamic_pointer_cast<const ActionGroupoid>(M.square->level(1));
  if (!P) throw std::invalid_argument("the square of a monoidal space must be materialized");
  const auto& X1 = *M.space->level(1);
  const Functor& mu = M.mu.comp[1];
  SparseMat out;
  for (Obj c = 0; c < P->num_components(); ++c) {
    const Obj r = P->rep(c);
    if (bound && P->grade(r) > *bound) continue;
    const Payload& pair = P->data(r);
    out.columns[{X1.key_of(pair[0]), X1.key_of(pair[1])}].add({X1.key_of(mu(r))}, 1);
  }
  return out;
}

SparseVec tensor_multiply(const SparseMat& mult, const SparseVec& u, const SparseVec& v) {
  SparseVec out;
  for (const auto& [ku, cu] : u.entries())
    for (const auto& [kv, cv] : v.entries()) {
      if (ku.size() != kv.size()) throw std::invalid_argument("tensor_multiply: arity mismatch");
      std::vector<std::pair<Key, Rational>> partial{{Key{}, cu * cv}};
      for (std::size_t i = 0; i < ku.size(); ++i) {
        std::vector<std::pair<Key, Rational>> next;
        for (const auto& [k, c] : partial)
          for (const auto& [r, d] : mult.column({ku[i], kv[i]}).entries()) {
            Key nk = k;
            nk.insert(nk.end(), r.begin(), r.end());
            next.emplace_back(std::move(nk), c * d);
          }
        partial = std::move(next);
      }
      for (const auto& [k, c] : partial) out.add(k, c);
    }
  return out;
}

CheckReport check_bialgebra(const MonoidalSpace& M, std::optional<int> grade_bound) {
  const auto& X = *M.space;
  const auto bound = effective_bound(X, grade_bound);
  CheckReport rep;
  rep.check = "bialgebra";
  rep.space = X.name;
  rep.level = X.N;
  rep.grade_bound = bound ? *bound : -1;
  rep.absorb(check_culf(M.mu), "(a) mu CULF: ");
  const SparseMat D = comultiplication(X, bound), E = counit(X, bound), mult = multiplication(M, bound);
  const auto B = basis(X, bound);
  for (const auto& a : B)
    for (const auto& b : B) {
      if (bound && a.key.grade + b.key.grade > *bound) continue;
      const Key ab{a.key, b.key};
      if (!mult.columns.count(ab)) continue;  // grades are not additive for this space
      const std::string at = " at " + a.key.text + " . " + b.key.text;
      compare(rep, "(b) Delta(ab) = Delta(a) Delta(b)" + at, [&] { return apply(D, mult.column(ab)); },
              [&] { return tensor_multiply(mult, D.column({a.key}), D.column({b.key})); });
      compare(rep, "(c) eps(ab) = eps(a) eps(b)" + at, [&] { return apply(E, mult.column(ab)); },
              [&] { return tensor_multiply(mult, E.column({a.key}), E.column({b.key})); });
    }
  return rep;
}

Rational gaussian_binomial(int q, int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational r = 1;
  auto pw = [q](int e) {
    long x = 1;
    while (e-- > 0) x *= q;
    return x;
  };
  for (int i = 1; i <= k; ++i) r *= Rational(pw(n - i + 1) - 1, pw(i) - 1);
  return r;
}

HallResult hall_number(int q, int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("hall_number needs 0 <= k <= n");
  SPtr V = vect_S(q, n, 2);
  const SparseMat D = comultiplication(*V);
  auto key_of_dim = [&](int d) -> IsoKey {
    for (const auto& b : basis(*V))
      if (b.key.grade == d) return b.key;
    throw UnknownKey("no vector space of dimension " + std::to_string(d));
  };
  return {D.at({key_of_dim(k), key_of_dim(n - k)}, {key_of_dim(n)}), gaussian_binomial(q, n, k)};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string coproduct_csv(const SparseMat& delta) {
  std::string out = "f,a,b,coefficient\n";
  for (const auto& [f, col] : delta.columns)
    for (const auto& [r, c] : col.entries())
      out += csv_field(to_string(f)) + "," + csv_field(r.at(0).text) + "," + csv_field(r.at(1).text) + "," +
             to_string(c) + "\n";
  return out;
}

}  // namespace dsp
