// Acceptance run: one PASS/FAIL line per criterion, sub-clauses indented below it.
// Exit status is 0 iff the failing criteria are exactly those given by --known-failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "dsp/coalgebra.hpp"
#include "support/oracles.hpp"
#include "support/random_groupoids.hpp"

using namespace dsp;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  std::vector<std::pair<bool, std::string>> clauses;
  void add(bool ok, std::string what) { clauses.emplace_back(ok, std::move(what)); }
  bool pass() const {
    for (const auto& [ok, w] : clauses)
      if (!ok) return false;
    return !clauses.empty();
  }
};

std::string first_failure(const CheckReport& r) {
  auto f = r.first_failure();
  return f ? f->desc : std::string("none");
}

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Key bkey(std::vector<int> sizes) {
  Key k;
  for (int s : sizes) k.push_back({s, std::to_string(s)});
  return k;
}

SPtr divisors12(int N) { return nerve_of_poset(divisibility_poset({1, 2, 3, 4, 6, 12}), N); }

// The six families at their default bounds.
std::vector<SPtr> gallery(int N) {
  return {binomial_B(4, N).space,      forests_H(4, N).space, graphs_G(3, N).space,
          fat_nerve(injections_category(3), N, 3), vect_S(2, 2, N), divisors12(N)};
}

// Simplex deletions, up to `per_space` from each small gallery space, level 1 before level 2.
std::vector<std::pair<std::string, SPtr>> perturbations(std::size_t per_space, std::size_t total) {
  std::vector<SPtr> bases = {divisors12(3),      binomial_B(3, 3).space, forests_H(3, 3).space,
                             graphs_G(3, 3).space, fat_nerve(injections_category(2), 3, 2), vect_S(2, 2, 3)};
  std::vector<std::pair<std::string, SPtr>> out;
  for (const auto& X : bases) {
    std::size_t taken = 0;
    for (int k = 1; k <= 2 && taken < per_space; ++k)
      for (Obj c : nondegenerate_classes(*X, k)) {
        if (taken == per_space || out.size() == total) break;
        out.emplace_back(X->name + " minus " + X->level(k)->render(c), delete_simplex(X, k, c));
        ++taken;
      }
  }
  return out;
}

Outcome binomials() {
  Outcome o;
  auto t0 = Clock::now();
  auto D = comultiplication(*binomial_B(5, 3).space);
  bool exact = true;
  int count = 0;
  for (int n = 0; n <= 5; ++n) {
    const auto& col = D.column(bkey({n}));
    exact = exact && col.entries().size() == static_cast<std::size_t>(n + 1);
    for (int a = 0; a <= n; ++a, ++count)
      exact = exact && col.at(bkey({a, n - a})) == factorial(n) / (factorial(a) * factorial(n - a));
  }
  o.add(exact, std::to_string(count) + " coefficients n!/(a!b!) for 0 <= a <= n <= 5");
  double t = seconds_since(t0);
  std::ostringstream os;
  os << "runtime " << t << " s < 10 s";
  o.add(t < 10, os.str());
  return o;
}

Outcome hall_numbers() {
  Outcome o;
  for (int q : {2, 3}) {
    bool exact = true;
    std::string bad;
    for (int n = 0; n <= 3; ++n)
      for (int k = 0; k <= n; ++k) {
        auto h = hall_number(q, n, k);
        if (!(h.enumerated == gauss_oracle(q, n, k) && h.formula == gauss_oracle(q, n, k))) {
          exact = false;
          bad += " (" + std::to_string(n) + "," + std::to_string(k) + ")";
        }
      }
    o.add(exact, "q = " + std::to_string(q) + ": enumerated coefficient = Gaussian binomial for 0 <= k <= n <= 3" +
                     (bad.empty() ? "" : ", mismatch at" + bad));
  }
  return o;
}

Outcome forests() {
  Outcome o;
  auto H = forests_H(4, 3).space;
  o.add(check_decomposition(*H).pass(), "decomposition space at N = 3, 4 nodes");
  auto s = check_segal(*H);
  o.add(!s.pass() && first_failure(s) == "d_0 / d_2 on X_2", "Segal fails, first at " + first_failure(s));
  auto D = comultiplication(*H);
  bool exact = true;
  int columns = 0;
  for (int n = 0; n <= 4; ++n)
    for (const auto& [key, p] : forests_with(n)) {
      std::map<std::pair<std::string, std::string>, Rational> got, want;
      for (const auto& [row, c] : D.column(Key{IsoKey{n, key}}).entries()) got[{row[0].text, row[1].text}] = c;
      for (const auto& [k, c] : cut_oracle(p)) want[k] = c;
      exact = exact && got == want;
      ++columns;
    }
  o.add(exact, "coproduct of all " + std::to_string(columns) + " forests with <= 4 nodes = admissible-cut enumeration");
  return o;
}

Outcome graphs() {
  Outcome o;
  auto G = graphs_G(3, 3).space;
  o.add(check_decomposition(*G).pass(), "decomposition space at N = 3, 3 vertices");
  auto s = check_segal(*G);
  o.add(!s.pass(), "Segal fails, first at " + first_failure(s));
  auto D = comultiplication(*G);
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Rational> got, want;
  for (const auto& [row, c] : D.column(Key{IsoKey{2, "2;0-1"}}).entries())
    got[{graph_shape(row[0].text), graph_shape(row[1].text)}] += c;
  for (const auto& [k, c] : subset_oracle(2, {{0, 1}})) want[k] = c;
  o.add(got == want && got.size() == 3, "coproduct of K2 = ordered vertex bipartitions {(0,K2):1, (1,1):2, (K2,0):1}");
  return o;
}

Outcome decalage_agreement() {
  Outcome o;
  std::vector<std::pair<std::string, SPtr>> spaces = {
      {"B", binomial_B(4, 4).space},         {"I", fat_nerve(injections_category(3), 4, 3)},
      {"H", forests_H(4, 4).space},          {"G", graphs_G(3, 4).space},
      {"divisors of 12", divisors12(4)},     {"chain of 3", nerve_of_poset(chain_poset(3), 4)},
      {"S(vect_2)", vect_S(2, 2, 4)}};
  for (const auto& [name, X] : spaces) {
    auto dc = check_dec_characterization(X);
    o.add(dc.agree() && dc.a, name + " at N = 4: four verdicts " +
                                  (dc.agree() ? "agree" : "DISAGREE") + (dc.a ? " (decomposition)" : ""));
  }
  // Corrupted controls: the first failing deletions and constant faces of each small space.
  std::vector<std::pair<SPtr, int>> bases = {{divisors12(3), 2},         {binomial_B(3, 3).space, 2},
                                             {forests_H(3, 3).space, 2}, {graphs_G(3, 3).space, 2},
                                             {fat_nerve(injections_category(2), 3, 2), 1}, {vect_S(2, 2, 3), 1}};
  int controls = 0, agree = 0;
  for (const auto& [X, quota] : bases) {
    std::vector<SPtr> candidates;
    for (int k = 1; k <= 2; ++k)
      for (Obj c : nondegenerate_classes(*X, k)) candidates.push_back(delete_simplex(X, k, c));
    for (int n = 1; n <= 2; ++n)
      for (int i = 0; i <= n; ++i) candidates.push_back(constant_face(X, n, i));
    int taken = 0;
    for (const auto& Y : candidates) {
      if (taken == quota) break;
      if (check_decomposition(*Y).pass()) continue;
      auto dc = check_dec_characterization(Y);
      ++controls;
      agree += dc.agree() && !dc.a;
      ++taken;
    }
  }
  o.add(controls == 10 && agree == 10, std::to_string(agree) + " of " + std::to_string(controls) +
                                           " corrupted controls fail all four verdicts");
  return o;
}

Outcome coassociativity() {
  Outcome o;
  for (const auto& X : gallery(3)) {
    auto r = check_coassociativity(*X);
    bool has_d3 = false;
    for (const auto& s : r.squares) has_d3 = has_d3 || s.desc.find("Delta_3") != std::string::npos;
    o.add(r.pass() && has_d3, X->name + ": coassociativity, counit laws and (Delta x id) Delta = Delta_3 on " +
                                  std::to_string(basis(*X).size()) + " basis elements");
  }
  return o;
}

Outcome reduction() {
  Outcome o;
  auto B = binomial_B(4, 4).space;
  auto I = fat_nerve(injections_category(4), 3, 4);
  auto d = dec(B, Side::Bottom);
  auto E = dec_equivalence(d, I);
  bool eq = validate_simp_map(E).pass();
  for (int k = 0; k <= 3; ++k) eq = eq && is_equivalence(E.comp[k]).ok;
  o.add(eq, "Dec_bot(B) -> I is a levelwise equivalence at set size <= 4, N = 3");
  auto M = transfer_matrix(E, d.map);
  o.add(check_homomorphism(M, *I, *truncate(B, 3)).pass(), "induced I -> B matrix is a coalgebra homomorphism");
  return o;
}

Outcome cross_validation() {
  Outcome o;
  for (const auto& X : gallery(3)) {
    bool split = check_decomposition(*X).pass() == check_decomposition_splitting(*X).pass();
    bool direct = true;
    for (int r = 1; r <= 3; ++r) direct = direct && check_segal_direct(*X, r).ok;
    bool segal = check_segal(*X).pass() == direct;
    o.add(split && segal, X->name + ": decomposition = splitting criterion, Segal = direct Segal maps for r <= 3");
  }
  auto perturbed = perturbations(4, 20);
  int agree = 0, decomposition = 0;
  for (const auto& [name, Y] : perturbed) {
    bool a = check_decomposition(*Y).pass();
    agree += a == check_decomposition_splitting(*Y).pass();
    decomposition += a;
  }
  o.add(perturbed.size() == 20 && agree == 20,
        std::to_string(agree) + " of " + std::to_string(perturbed.size()) + " perturbed instances agree (" +
            std::to_string(decomposition) + " decomposition spaces, " +
            std::to_string(static_cast<int>(perturbed.size()) - decomposition) + " not)");
  return o;
}

Outcome culf_suite() {
  Outcome o;
  auto F = oi_to_i(3, 3);
  o.add(check_culf(F).pass(), "OI -> I is CULF");
  auto fib = check_fibration(F, Side::Bottom);
  o.add(!fib.pass(), fib.pass() ? "OI -> I fails check_fibration(bottom): it passes, every d_0 square is a pullback"
                                : "OI -> I fails check_fibration(bottom) at " + first_failure(fib));
  for (const auto& M : {binomial_B(4, 3), forests_H(4, 3), graphs_G(3, 3), injections_I(3, 3)})
    o.add(check_culf(M.mu).pass() && check_bialgebra(M).pass(), M.space->name + ": mu is CULF and a bialgebra map");
  auto B = binomial_B(4, 3);
  auto mult = multiplication(B);
  auto D = comultiplication(*B.space);
  SparseVec x, power;
  x.add(bkey({0, 1}), 1);
  x.add(bkey({1, 0}), 1);
  power.add(bkey({0, 0}), 1);
  bool powers = true;
  for (int n = 0; n <= 4; ++n) {
    powers = powers && power == D.column(bkey({n}));
    if (n < 4) power = tensor_multiply(mult, power, x);
  }
  o.add(powers, "B: (delta_0 x delta_1 + delta_1 x delta_0)^n = Delta(delta_n) for n <= 4");
  return o;
}

bool homotopy_sum_property(int trials) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < trials; ++trial) {
    WordSpace ws{3, 3, random_group_gens(rng, 3)};
    WordSpace wt{3, 2, ws.gens};
    auto x = random_word_groupoid(rng, ws, "X");
    auto s = word_groupoid("S", wt, all_words(3, 2));
    auto f = letter_map(x, s, random_letter_map(rng, 3, 2));
    Rational total = 0;
    for (Obj c = 0; c < s->num_components(); ++c)
      total += groupoid_cardinality(*homotopy_fibre(f, s->rep(c))) / Rational(static_cast<long>(s->aut_order(c)));
    if (total != groupoid_cardinality(*x)) return false;
  }
  return true;
}

// Left square is a pullback iff the outer rectangle is, given the right square is.
bool prism_property(int trials) {
  std::mt19937 rng(31);
  int left_failures = 0;
  for (int trial = 0; trial < trials; ++trial) {
    WordSpace w4{3, 4, random_group_gens(rng, 3)};
    WordSpace w3{3, 3, w4.gens}, w2{3, 2, w4.gens};
    auto X = random_word_groupoid(rng, w4, "X");
    auto S = word_groupoid("S", w3, all_words(3, 3));
    auto T = word_groupoid("T", w2, all_words(3, 2));
    auto Z = random_word_groupoid(rng, w3, "Z");
    auto u = letter_map(X, S, random_letter_map(rng, 4, 3));
    auto v = letter_map(S, T, random_letter_map(rng, 3, 2));
    auto z = letter_map(Z, T, random_letter_map(rng, 3, 2));
    auto right = strict_fibre(v, z, w4.gens, 3);
    auto Y = right.corner;
    auto vu = compose(v, u);
    auto outer = strict_fibre(vu, z, w4.gens, 3, trial % 4);
    auto W = outer.corner;
    if (W->size() == 0) continue;
    Functor wy = Functor::tabulated(
        W, Y,
        [W, Y, u](Obj o) {
          const auto& d = W->data(o);
          return Y->find({static_cast<int>(u(d[0])), d[1], 0});
        },
        [](Obj, const Perm& h) { return slice(h, 0, 3); }, "wy");
    GroupoidSquare right_sq{right.to_y, right.to_x, z, v, "right"};
    GroupoidSquare outer_sq{compose(right.to_y, wy), outer.to_x, z, vu, "outer"};
    GroupoidSquare left_sq{wy, outer.to_x, right.to_x, u, "left"};
    if (!is_pullback_square(right_sq, std::nullopt, GradeRule::Max).ok) return false;
    const bool outer_ok = is_pullback_square(outer_sq, std::nullopt, GradeRule::Max).ok;
    const bool left_ok = is_pullback_square(left_sq, std::nullopt, GradeRule::Max).ok;
    if (left_ok != outer_ok) return false;
    if (is_pullback_square_explicit(left_sq, std::nullopt, GradeRule::Max).ok != left_ok) return false;
    left_failures += !left_ok;
  }
  return left_failures > 0;
}

bool two_routes(const SimplicialGroupoid& X) {
  auto D = comultiplication(X);
  std::map<IsoKey, Obj> rep;
  for (const auto& b : basis(X)) rep[b.key] = b.rep;
  for (const auto& b : basis(X)) {
    const auto& col = D.column(Key{b.key});
    if (!(comultiplication_column_via_fibre(X, b.rep) == col)) return false;
    for (const auto& [row, c] : col.entries())
      if (coefficient_via_triple_fibre(X, b.rep, rep.at(row[0]), rep.at(row[1])) != c) return false;
  }
  return true;
}

Outcome properties(Clock::time_point suite_start) {
  Outcome o;
  auto H = forests_H(4, 3).space;
  auto B = binomial_B(4, 3).space;
  o.add(two_routes(*H) && two_routes(*B), "two-route coefficient identity on H and B (every column and entry)");
  o.add(homotopy_sum_property(15), "homotopy-sum decomposition of cardinality on 15 random maps");
  o.add(prism_property(16), "prism law on 16 random rectangles, with failing left squares present");
  o.add(check_bonus_pullbacks(*H).pass() && check_bonus_pullbacks(*B).pass(), "bonus pullback squares on H and B");
  double t = seconds_since(suite_start);
  std::ostringstream os;
  os << "suite runtime " << t << " s < 300 s";
  o.add(t < 300, os.str());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> known, only;
  app.add_option("--known-failure", known, "criteria expected to fail");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"binomial coefficients from B at bound 5", binomials},
      {"Hall numbers equal Gaussian binomials for q = 2, 3", hall_numbers},
      {"forests: decomposition, not Segal, cut coproduct", forests},
      {"graphs: decomposition, not Segal, subset coproduct", graphs},
      {"decalage characterization: four verdicts agree", decalage_agreement},
      {"coassociativity and counit laws on six families", coassociativity},
      {"reduction Dec_bot(B) = I and its coalgebra homomorphism", reduction},
      {"checker cross-validation", cross_validation},
      {"CULF suite", culf_suite},
      {"property suites and total runtime", [start] { return properties(start); }},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.add(false, std::string("exception: ") + e.what());
    }
    if (!out.pass()) failed.insert(id);
    std::printf("%s %2d  %s (%.1f s)\n", out.pass() ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                seconds_since(t0));
    for (const auto& [ok, what] : out.clauses) std::printf("          %s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    std::fflush(stdout);
  }

  std::set<int> expected;
  for (int k : known)
    if (only.empty() || std::find(only.begin(), only.end(), k) != only.end()) expected.insert(k);
  std::printf("%zu failing, total %.1f s", failed.size(), seconds_since(start));
  if (!expected.empty()) {
    std::printf("; known failures:");
    for (int k : expected) std::printf(" %d", k);
  }
  std::printf("\n");
  return failed == expected ? 0 : 1;
}
