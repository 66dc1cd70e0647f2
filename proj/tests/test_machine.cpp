#include <catch_amalgamated.hpp>

#include <random>

#include "dvn/catalog.hpp"
#include "dvn/error.hpp"
#include "dvn/homeo.hpp"
#include "dvn/machine.hpp"
#include "oracles.hpp"

using namespace dvn;

namespace {

WordD W(std::string const& s, int n = 2) {
  return WordD::parse(s, n);
}

struct Edge {
  int to;
  std::string out;
};

// One row of edges per state, d = 1, range equal to the domain.
Diagram rows(int n, std::vector<std::vector<Edge>> const& r) {
  Tables t;
  t.domain = {1, n};
  t.range = {1, n};
  t.states = static_cast<int>(r.size());
  for (auto const& row : r) {
    for (auto const& e : row) {
      t.next.push_back(e.to);
      t.out.push_back(WordD(n, std::vector<Word>{word_from_digits(e.out, n)}));
    }
  }
  return validate(std::move(t));
}

// Swapped by letter 0, fixed by 1, identity outputs.
Diagram swap_automaton() {
  return rows(2, {{{1, "0"}, {0, "1"}}, {{0, "0"}, {1, "1"}}});
}

Tables incoherent_output() {
  Tables t;
  t.domain = {2, 2};
  t.range = {2, 2};
  t.states = 1;
  t.next = {0, 0, 0, 0};
  t.out = {W("(0,)"), W("(0,)"), W("(1,)"), W("(1,)")};
  return t;
}

}  // namespace

TEST_CASE("validate", "[machine]") {
  SECTION("one-dimensional tables are always coherent") {
    CHECK_NOTHROW(rows(2, {{{0, "0110"}, {0, ""}}}));
  }
  SECTION("identity") {
    CHECK_NOTHROW(validate(identity(3, 2).tables()));
  }
  SECTION("incoherent outputs") {
    CHECK_THROWS_AS(validate(incoherent_output()), IncoherentOutput);
    CHECK_THROWS_WITH(validate(incoherent_output()),
                      Catch::Matchers::ContainsSubstring("IncoherentOutput at state 0, gens ("));
  }
  SECTION("incoherent transitions") {
    Tables t;
    t.domain = {2, 2};
    t.range = {2, 2};
    t.states = 2;
    // x_{0,*} toggles the state; x_{1,*} goes to 0.
    t.next = {1, 1, 0, 0, 0, 0, 0, 0};
    t.out.assign(8, WordD(2, 2));
    CHECK_THROWS_AS(validate(t), IncoherentTransition);
  }
  SECTION("shape errors") {
    Tables t = identity(1, 2).tables();
    t.next[0] = 3;
    CHECK_THROWS_AS(Diagram(t), InvalidTable);
    t = identity(1, 2).tables();
    t.out[0] = W("(0,0)");
    CHECK_THROWS_AS(Diagram(t), InvalidTable);
  }
}

TEST_CASE("run and eval_prefix", "[machine]") {
  Diagram const F = fig3_left();
  int const q0 = F.state("q0");
  SECTION("identity") {
    auto const [q, w] = run(identity(2, 3), 0, W("(012,2)", 3));
    CHECK(q == 0);
    CHECK(w == W("(012,2)", 3));
  }
  SECTION("four-state involution") {
    auto const [q, w] = run(F, q0, W("(01)"));
    CHECK(q == q0);
    CHECK(w == W("(001)"));
    CHECK(eval_prefix(F, q0, W("(0001)")) == W("(0001)"));
    CHECK(eval_prefix(F, q0, W("(001)")) == W("(01)"));
  }
  SECTION("baker's lazy machine") {
    Handle const b = bakers();
    CHECK(eval_prefix(b, b->start(), W("(0,)")) == W("(,0)"));
  }
  SECTION("digit splitting") {
    CHECK(eval_prefix(fig5_T(), 0, W("(02)", 4)) == W("(01,00)"));
  }
  SECTION("signature mismatch") {
    CHECK_THROWS_AS(run(F, 0, W("(0,)")), SignatureMismatch);
  }
  SECTION("handles agree with diagrams") {
    Handle const h = as_handle(F, q0);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      WordD const w(2, oracle::random_coords(1, 2, 8, rng));
      CHECK(eval_prefix(h, h->start(), w) == eval_prefix(F, q0, w));
    }
  }
}

TEST_CASE("is_nondegenerate", "[machine]") {
  CHECK(is_nondegenerate(fig3_left()));
  CHECK(is_nondegenerate(identity(2, 2)));
  CHECK_FALSE(is_nondegenerate(rows(2, {{{0, ""}, {0, ""}}})));
  // Range coordinate 1 never receives output.
  Tables t;
  t.domain = {1, 2};
  t.range = {2, 2};
  t.states = 1;
  t.next = {0, 0};
  t.out = {W("(0,)"), W("(1,)")};
  CHECK_FALSE(is_nondegenerate(validate(t)));
}

TEST_CASE("compose", "[machine]") {
  Diagram const F = fig3_left();
  SECTION("with identity") {
    Diagram const C = compose(F, identity(1, 2));
    for (int q = 0; q < F.size(); ++q) {
      CHECK(oracle::same_behaviour(C, q, F, q, 6));
    }
  }
  SECTION("the involution squares to the identity") {
    Diagram const C = compose(F, F);
    int const s = F.state("q0") * F.size() + F.state("q0");
    for (auto const& w : oracle::all_words(1, 2, 10)) {
      auto const out = oracle::eval(C, s, w);
      CHECK(oracle::is_prefix(out, w));
    }
  }
  SECTION("compose_from keeps the reachable part") {
    auto const [C, pairs] = compose_from(F, F, 0, 0);
    CHECK(pairs.front() == std::pair<int, int>{0, 0});
    CHECK(C.size() <= 16);
    CHECK(oracle::same_behaviour(C, 0, compose(F, F), 0, 6));
  }
  SECTION("signature mismatch") {
    CHECK_THROWS_AS(compose(F, fig5_T()), SignatureMismatch);
  }
}

TEST_CASE("product", "[machine]") {
  CHECK(product({identity(1, 2), identity(1, 2)}) == identity(2, 2));
  Diagram const B = product({fig3_left(), fig3_right()});
  CHECK(B.size() == 16);
  CHECK(B == fig4_B());
  CHECK(B.d() == 2);
  std::mt19937_64 rng(3);
  Diagram const X = oracle::random_1d(3, 2, 2, rng);
  Diagram const Y = oracle::random_1d(2, 2, 2, rng);
  Diagram const P = product({X, Y});
  for (int a = 0; a < X.size(); ++a) {
    for (int b = 0; b < Y.size(); ++b) {
      for (int i = 0; i < 20; ++i) {
        auto const w = oracle::random_coords(2, 2, 6, rng);
        auto const got = oracle::eval(P, a * Y.size() + b, w);
        CHECK(got[0] == oracle::eval(X, a, {w[0]})[0]);
        CHECK(got[1] == oracle::eval(Y, b, {w[1]})[0]);
      }
    }
  }
  CHECK_THROWS_AS(product(std::vector<Diagram>{}), InvalidTable);
}

TEST_CASE("minimize", "[machine]") {
  Diagram const F = fig3_left();
  SECTION("minimal machines are fixed") {
    auto const m = minimize(F);
    CHECK(m.machine.size() == 4);
    CHECK(m.map == std::vector<int>{0, 1, 2, 3});
  }
  SECTION("a duplicated state merges") {
    Tables t = F.tables();
    int const b = F.state("b");
    t.states = 5;
    t.names.push_back("b2");
    for (int g = 0; g < 2; ++g) {
      t.next.push_back(t.next[static_cast<std::size_t>(b * 2 + g)]);
      t.out.push_back(t.out[static_cast<std::size_t>(b * 2 + g)]);
    }
    t.next[static_cast<std::size_t>(b * 2)] = 4;
    Diagram const D = validate(t);
    auto const m = minimize(D);
    CHECK(m.machine.size() == 4);
    CHECK(m.map[4] == m.map[static_cast<std::size_t>(b)]);
    for (int q = 0; q < D.size(); ++q) {
      CHECK(oracle::same_behaviour(m.machine, m.map[static_cast<std::size_t>(q)], D, q, 8));
    }
  }
}

TEST_CASE("image", "[machine]") {
  CHECK(image(identity(2, 2), 0).is_full());
  CHECK(image(fig3_left(), 0).is_full());
  for (int n : {3, 4, 5}) {
    CHECK(image(fig2_forward(n), 0).is_full());
  }
  ConeSet const i = image(rows(2, {{{1, "10"}, {1, "11"}}, {{1, "0"}, {1, "1"}}}), 0);
  CHECK(i.cones() == std::vector<WordD>{W("(1)")});
  // Only the all-zero sequence is hit; no clopen fixpoint.
  CHECK_THROWS_AS(image(rows(2, {{{0, "0"}, {0, "00"}}}), 0), CapExceeded);
}

TEST_CASE("complete_response", "[machine]") {
  SECTION("already complete") {
    CHECK(complete_response(fig3_left()) == fig3_left());
  }
  SECTION("a shared leading letter migrates") {
    // x -> 1x.
    Diagram const T = rows(2, {{{1, "10"}, {1, "11"}}, {{1, "0"}, {1, "1"}}});
    Diagram const C = complete_response(T);
    CHECK(C.out(0, 0) == W("(0)"));
    CHECK(C.out(1, 1) == W("(1)"));
    for (auto const& w : oracle::all_words(1, 2, 6)) {
      if (w[0].empty()) {
        continue;
      }
      auto const lhs = oracle::concat({std::string(1, '\1')}, oracle::eval(C, 0, w));
      CHECK(lhs == oracle::eval(T, 0, w));
    }
    CHECK(lcp(image(C, 0).cones()).empty());
  }
}

TEST_CASE("injectivity", "[machine]") {
  CHECK(injectivity(identity(2, 2), 0).verdict == Verdict::Yes);
  CHECK(injectivity(fig3_left(), fig3_left().state("q0")).verdict == Verdict::Yes);
  Diagram const K = rows(2, {{{0, "0"}, {0, "0"}}});
  Injectivity const r = injectivity(K, 0);
  REQUIRE(r.verdict == Verdict::No);
  CHECK(r.left_prefix != r.right_prefix);
  // Both witnesses are mapped to 000... by the constant machine.
  CHECK_FALSE(r.left_cycle.empty());
  CHECK_FALSE(r.right_cycle.empty());
}

TEST_CASE("synchronizing_level and core", "[machine]") {
  CHECK(synchronizing_level(identity(2, 2)) == 0);
  CHECK(synchronizing_level(fig3_left()) == 3);
  CHECK_FALSE(synchronizing_level(swap_automaton()).has_value());
  CHECK_THROWS_AS(core(swap_automaton()), NotSynchronizing);
  CHECK(core(fig3_left()) == fig3_left());
  Diagram const junk = rows(2, {{{0, "0"}, {0, "1"}}, {{0, "1"}, {0, "0"}}});
  CHECK(core(junk).size() == 1);
  CHECK(core(junk) == identity(1, 2));
  // Level 3 is exact: some level-2 word leaves two states apart.
  Diagram const F = fig3_left();
  bool split = false;
  for (auto const& u : square_words(1, 2, 2)) {
    std::set<int> s;
    for (int q = 0; q < F.size(); ++q) {
      s.insert(run(F, q, u).first);
    }
    split = split || s.size() > 1;
  }
  CHECK(split);
}

TEST_CASE("strong_iso", "[machine]") {
  Diagram const F = fig3_left();
  CHECK(strong_iso(F, F) == std::vector<int>{0, 1, 2, 3});
  std::vector<int> const perm{2, 0, 3, 1};
  CHECK(strong_iso(F, relabel(F, perm)) == perm);
  CHECK_FALSE(strong_iso(F, identity(1, 2)).has_value());
  Diagram const junk = rows(2, {{{0, "0"}, {0, "1"}}, {{0, "1"}, {0, "0"}}});
  CHECK_THROWS_AS(strong_iso(junk, junk), NotCore);
}

TEST_CASE("minimal_for_homeomorphism", "[machine]") {
  SECTION("identity") {
    Diagram const D = rows(2, {{{1, "0"}, {1, "1"}}, {{0, "0"}, {0, "1"}}});
    auto const [M, q] = minimal_for_homeomorphism(D, 1);
    CHECK(M.size() == 1);
    CHECK(is_identity_state(M, q));
  }
  SECTION("swapping the halves") {
    PrefixExchange const h(validate_prefix_code({W("(0)"), W("(1)")}),
                           validate_prefix_code({W("(0)"), W("(1)")}), {1, 0});
    Handle const T = machine_of(h);
    auto const [M, q] = minimal_for_homeomorphism(T, T->start(), 100);
    // Residuals: the start state and the identity after one letter.
    CHECK(M.size() == 2);
    for (auto const& w : oracle::all_words(1, 2, 6)) {
      WordD const x(2, w);
      if (auto y = apply(h, x)) {
        CHECK(eval_prefix(M, q, x) == *y);
      }
    }
  }
  SECTION("baker's map has no finite minimal machine") {
    Handle const b = bakers();
    CHECK_THROWS_AS(minimal_for_homeomorphism(b, b->start(), 10), BoundExceeded);
    CHECK_THROWS_AS(explore(b, b->start(), 10), BoundExceeded);
  }
}

TEST_CASE("distinct_states_lower_bound", "[machine]") {
  Handle const id = as_handle(identity(2, 2));
  CHECK(distinct_states_lower_bound(id, id->start(), 4) == 1);
  Handle const b = bakers();
  CHECK(distinct_states_lower_bound(b, b->start(), 4) >= 5);
  Diagram const F = fig3_left();
  Handle const f = as_handle(F, F.state("q0"));
  CHECK(distinct_states_lower_bound(f, f->start(), 6) == 4);
}

TEST_CASE("pair keys", "[machine]") {
  auto const k = pair_key("1;2", "x");
  CHECK(split_key(k) == std::pair<std::string, std::string>{"1;2", "x"});
}
