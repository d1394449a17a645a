#include <map>

#include "doctest.h"
#include "dsp/coalgebra.hpp"
#include "support/oracles.hpp"

using namespace dsp;
using namespace testsupport;

namespace {

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

}  // namespace

TEST_CASE("basis") {
  auto B = binomial_B(4, 3).space;
  auto b = basis(*B);
  REQUIRE(b.size() == 5);
  for (int n = 0; n <= 4; ++n) {
    CHECK(b[n].key == IsoKey{n, std::to_string(n)});
    CHECK(Rational(static_cast<long>(b[n].aut_order)) == factorial(n));
  }
  CHECK(basis(*B, 2).size() == 3);
  CHECK(basis(*forests_H(4, 3).space, 2).size() == 4);
}

TEST_CASE("binomial coefficients") {
  auto B = binomial_B(5, 3).space;
  auto D = comultiplication(*B);
  for (int n = 0; n <= 5; ++n) {
    const auto& col = D.column(bkey({n}));
    CHECK(col.entries().size() == static_cast<std::size_t>(n + 1));
    for (int a = 0; a <= n; ++a)
      CHECK(col.at(bkey({a, n - a})) == factorial(n) / (factorial(a) * factorial(n - a)));
  }
  CHECK_THROWS_AS(D.column(bkey({6})), GradeOverflow);
}

TEST_CASE("delta_n") {
  auto B = binomial_B(4, 3).space;
  CHECK(delta_n(*B, 0) == counit(*B));
  auto id = delta_n(*B, 1);
  for (int n = 0; n <= 4; ++n) {
    CHECK(id.column(bkey({n})).entries().size() == 1);
    CHECK(id.at(bkey({n}), bkey({n})) == 1);
  }
  CHECK(delta_n(*B, 2) == comultiplication(*B));
  auto d3 = delta_n(*B, 3);
  for (int n = 0; n <= 4; ++n)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) {
        int c = n - a - b;
        CHECK(d3.at(bkey({a, b, c}), bkey({n})) == factorial(n) / (factorial(a) * factorial(b) * factorial(c)));
      }
}

TEST_CASE("counit") {
  auto B = binomial_B(3, 3).space;
  auto e = counit(*B);
  CHECK(e.at(Key{}, bkey({0})) == 1);
  for (int n = 1; n <= 3; ++n) CHECK(e.at(Key{}, bkey({n})) == 0);
  auto P = nerve_of_poset(divisibility_poset({1, 2, 4}), 3);
  auto ep = counit(*P);
  for (const auto& b : basis(*P)) {
    bool degenerate = b.key.text == "1<=1" || b.key.text == "2<=2" || b.key.text == "4<=4";
    CHECK(ep.at(Key{}, Key{b.key}) == (degenerate ? 1 : 0));
  }
}

TEST_CASE("forests: coproduct equals the admissible-cut enumeration") {
  auto H = forests_H(3, 3).space;
  auto D = comultiplication(*H);
  int columns = 0;
  for (int n = 0; n <= 3; ++n)
    for (const auto& [key, p] : forests_with(n)) {
      CAPTURE(key);
      const auto& col = D.column(Key{IsoKey{n, key}});
      auto expect = cut_oracle(p);
      std::map<std::pair<std::string, std::string>, Rational> got;
      for (const auto& [row, c] : col.entries()) got[{row[0].text, row[1].text}] = c;
      std::map<std::pair<std::string, std::string>, Rational> want;
      for (const auto& [k, c] : expect) want[k] = c;
      CHECK(got == want);
      ++columns;
    }
  CHECK(columns == 8);
  // Ladder with two nodes.
  const auto& ladder = D.column(Key{IsoKey{2, "[(())]"}});
  CHECK(ladder.entries().size() == 3);
  CHECK(ladder.at(Key{IsoKey{0, "[]"}, IsoKey{2, "[(())]"}}) == 1);
  CHECK(ladder.at(Key{IsoKey{1, "[()]"}, IsoKey{1, "[()]"}}) == 1);
  CHECK(ladder.at(Key{IsoKey{2, "[(())]"}, IsoKey{0, "[]"}}) == 1);
}

TEST_CASE("graphs: coproduct equals the vertex-subset enumeration") {
  auto G = graphs_G(3, 3).space;
  auto D = comultiplication(*G);
  const std::map<std::string, std::vector<std::pair<int, int>>> reps = {
      {"0;", {}}, {"1;", {}}, {"2;", {}}, {"2;0-1", {{0, 1}}}, {"3;", {}},
      {"3;0-1", {{0, 1}}}, {"3;0-1,0-2", {{0, 1}, {0, 2}}}, {"3;0-1,0-2,1-2", {{0, 1}, {0, 2}, {1, 2}}}};
  for (const auto& [key, edges] : reps) {
    CAPTURE(key);
    int n = graph_shape(key).first;
    const auto& col = D.column(Key{IsoKey{n, key}});
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Rational> got;
    for (const auto& [row, c] : col.entries()) got[{graph_shape(row[0].text), graph_shape(row[1].text)}] += c;
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, Rational> want;
    for (const auto& [k, c] : subset_oracle(n, edges)) want[k] = c;
    CHECK(got == want);
  }
  const auto& k2 = D.column(Key{IsoKey{2, "2;0-1"}});
  CHECK(k2.entries().size() == 3);
  CHECK(k2.at(Key{IsoKey{0, "0;"}, IsoKey{2, "2;0-1"}}) == 1);
  CHECK(k2.at(Key{IsoKey{1, "1;"}, IsoKey{1, "1;"}}) == 2);
  CHECK(k2.at(Key{IsoKey{2, "2;0-1"}, IsoKey{0, "0;"}}) == 1);
}

TEST_CASE("divisibility poset coproduct") {
  auto P = nerve_of_poset(divisibility_poset({1, 2, 4}), 3);
  auto D = comultiplication(*P);
  const auto& col = D.column(Key{IsoKey{0, "1<=4"}});
  CHECK(col.entries().size() == 3);
  CHECK(col.at(Key{IsoKey{0, "1<=1"}, IsoKey{0, "1<=4"}}) == 1);
  CHECK(col.at(Key{IsoKey{0, "1<=2"}, IsoKey{0, "2<=4"}}) == 1);
  CHECK(col.at(Key{IsoKey{0, "1<=4"}, IsoKey{0, "4<=4"}}) == 1);
}

TEST_CASE("two routes to the coefficients agree") {
  std::vector<SPtr> spaces = {binomial_B(3, 3).space, forests_H(3, 3).space, graphs_G(3, 3).space,
                              fat_nerve(injections_category(2), 3, 2), vect_S(2, 2, 3)};
  for (const auto& X : spaces) {
    CAPTURE(X->name);
    auto D = comultiplication(*X);
    std::map<IsoKey, Obj> rep;
    for (const auto& b : basis(*X)) rep[b.key] = b.rep;
    for (const auto& b : basis(*X)) {
      const auto& col = D.column(Key{b.key});
      CHECK(comultiplication_column_via_fibre(*X, b.rep) == col);
      for (const auto& [row, c] : col.entries())
        CHECK(coefficient_via_triple_fibre(*X, b.rep, rep.at(row[0]), rep.at(row[1])) == c);
    }
  }
}

TEST_CASE("grading: coefficients respect the grade") {
  for (const auto& X : {binomial_B(4, 3).space, forests_H(4, 3).space, graphs_G(3, 3).space}) {
    auto D = comultiplication(*X);
    for (const auto& [col, v] : D.columns)
      for (const auto& [row, c] : v.entries()) CHECK(row[0].grade + row[1].grade == col[0].grade);
  }
}

TEST_CASE("coassociativity and counit laws on every family") {
  std::vector<SPtr> spaces = {binomial_B(4, 3).space, forests_H(4, 3).space, graphs_G(3, 3).space,
                              injections_I(3, 3).space, vect_S(2, 2, 3),
                              nerve_of_poset(divisibility_poset({1, 2, 3, 4, 6, 12}), 3)};
  for (const auto& X : spaces) {
    CAPTURE(X->name);
    auto r = check_coassociativity(*X);
    CHECK(r.pass());
    CHECK(r.squares.size() == 4 * basis(*X).size());
  }
}

TEST_CASE("coassociativity at level 2 skips Delta_3") {
  auto X = binomial_B(3, 2).space;
  auto r = check_coassociativity(*X);
  CHECK(r.pass());
  CHECK(r.squares.size() == 3 * basis(*X).size());
  CHECK(r.notes.back() == "N < 3: Delta_3 not compared");
}

TEST_CASE("corrupted face breaks coassociativity") {
  auto X = constant_face(binomial_B(3, 3).space, 3, 1);
  CHECK_FALSE(check_coassociativity(*X).pass());
}

TEST_CASE("bialgebras") {
  for (const auto& M : {binomial_B(4, 3), forests_H(3, 3), graphs_G(3, 3), injections_I(2, 3)}) {
    CAPTURE(M.space->name);
    CHECK(check_bialgebra(M).pass());
  }
}

TEST_CASE("binomial bialgebra: powers of the primitive") {
  auto B = binomial_B(4, 3);
  auto mult = multiplication(B);
  auto D = comultiplication(*B.space);
  SparseVec x;
  x.add(bkey({0, 1}), 1);
  x.add(bkey({1, 0}), 1);
  SparseVec power;
  power.add(bkey({0, 0}), 1);
  for (int n = 0; n <= 4; ++n) {
    CAPTURE(n);
    // delta_1^n = delta_n, so the power of the primitive is Delta(delta_n).
    SparseVec dn;
    dn.add(bkey({n}), 1);
    SparseVec one;
    one.add(bkey({0}), 1);
    SparseVec p = one;
    for (int i = 0; i < n; ++i) {
      SparseVec d1;
      d1.add(bkey({1}), 1);
      p = tensor_multiply(mult, p, d1);
    }
    CHECK(p == dn);
    CHECK(power == D.column(bkey({n})));
    if (n < 4) power = tensor_multiply(mult, power, x);
  }
}

TEST_CASE("Hall numbers") {
  for (int q : {2, 3})
    for (int n = 0; n <= 3; ++n)
      for (int k = 0; k <= n; ++k) {
        CAPTURE(q);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(gaussian_binomial(q, n, k) == gauss_oracle(q, n, k));
        if (q == 3 && n == 3) continue;  // covered by the acceptance run
        auto h = hall_number(q, n, k);
        CHECK(h.match());
        CHECK(h.enumerated == gauss_oracle(q, n, k));
      }
  CHECK(hall_number(2, 2, 1).enumerated == 3);
  CHECK(hall_number(3, 2, 1).enumerated == 4);
  CHECK_THROWS_AS(hall_number(4, 2, 1), UnsupportedField);
}

TEST_CASE("reduction from injections to binomial") {
  auto B = binomial_B(4, 4).space;
  auto I = fat_nerve(injections_category(4), 3, 4);
  auto d = dec(B, Side::Bottom);
  auto M = transfer_matrix(dec_equivalence(d, I), d.map);
  // a -> b goes to the complement b - a.
  for (const auto& [col, v] : M.columns) {
    REQUIRE(v.entries().size() == 1);
    const auto& text = col[0].text;
    int a = text[0] - '0', b = text[3] - '0';
    CHECK(v.at(bkey({b - a})) == 1);
  }
  CHECK(check_homomorphism(M, *I, *truncate(B, 3)).pass());
}

TEST_CASE("homomorphism checks") {
  auto H = forests_H(3, 3);
  auto id = identity_simp_map(H.space);
  CHECK(check_homomorphism(pushforward_hom(id), *H.space, *H.space).pass());
  auto pr = product_projection(H.square, H.space, H.space, 0);
  auto r = check_homomorphism(pushforward_hom(pr), *H.square, *H.space);
  CHECK_FALSE(r.pass());
}

TEST_CASE("coproduct csv") {
  auto csv = coproduct_csv(comultiplication(*binomial_B(2, 3).space));
  CHECK(csv ==
        "f,a,b,coefficient\n"
        "0,0,0,1\n"
        "1,0,1,1\n"
        "1,1,0,1\n"
        "2,0,2,1\n"
        "2,1,1,2\n"
        "2,2,0,1\n");
  auto g = coproduct_csv(comultiplication(*graphs_G(3, 3).space));
  CHECK(g.find("\"3;0-1,0-2\",1;,2;0-1,2\n") != std::string::npos);
}

TEST_CASE("sparse vectors drop zeros") {
  SparseVec v;
  v.add(bkey({1}), 2);
  v.add(bkey({1}), -2);
  CHECK(v.empty());
  CHECK(v.at(bkey({1})) == 0);
}
