#include <catch_amalgamated.hpp>

#include "dvn/catalog.hpp"
#include "dvn/error.hpp"
#include "oracles.hpp"

using namespace dvn;

namespace {

WordD W(std::string const& s, int n = 2) {
  return WordD::parse(s, n);
}

}  // namespace

TEST_CASE("four-state involution", "[catalog]") {
  Diagram const F = fig3_left();
  int const q0 = F.state("q0");
  CHECK(eval_prefix(F, q0, W("(001)")) == W("(01)"));
  CHECK(eval_prefix(F, q0, W("(01)")) == W("(001)"));
  CHECK(synchronizing_level(F) == 3);
  CHECK(core_states(F).size() == 4);
  CHECK(strongly_connected(F));
  CHECK(F.state("a") == 1);
  CHECK(F.state("b") == 3);
  // Reconstruction of the right-hand machine.
  CHECK(fig3_right() == F);
}

TEST_CASE("involution on all-zero blocks", "[catalog]") {
  // (00)^n -> (000)^{2n/3}
  Diagram const F = fig3_left();
  for (int n : {3, 6, 9}) {
    WordD const x(2, std::vector<Word>{Word(static_cast<std::size_t>(2 * n), '\0')});
    WordD const y(2, std::vector<Word>{Word(static_cast<std::size_t>(3 * (2 * n / 3)), '\0')});
    CHECK(eval_prefix(F, F.state("q0"), x) == y);
  }
}

TEST_CASE("splitting machine", "[catalog]") {
  Diagram const T = fig5_T();
  CHECK(T.out(0, 2) == W("(1,0)"));
  CHECK(T.out(0, 0) == W("(0,0)"));
  CHECK(T.out(0, 1) == W("(0,1)"));
  CHECK(T.out(0, 3) == W("(1,1)"));
  CHECK(eval_prefix(T, 0, W("(020202)", 4)) == W("(010101,000000)"));
}

TEST_CASE("product of the two involutions", "[catalog]") {
  Diagram const B = fig4_B();
  CHECK(B.d() == 2);
  CHECK(B.n() == 2);
  Diagram const F = fig3_left();
  for (auto const& w : oracle::all_words(2, 2, 4)) {
    WordD const y = eval_prefix(B, 0, WordD(2, w));
    CHECK(y[0] == oracle::eval(F, 0, {w[0]})[0]);
    CHECK(y[1] == oracle::eval(F, 0, {w[1]})[0]);
  }
}

TEST_CASE("cross-alphabet pair", "[catalog]") {
  for (int n : {3, 4, 5}) {
    CAPTURE(n);
    Diagram const f = fig2_forward(n);
    Diagram const g = fig2_backward(n);
    CHECK(f.range().n == n);
    CHECK(g.domain().n == n);
    CHECK(fig2_code(n).size() == static_cast<std::size_t>(n));
    Diagram const fg = compose(f, g);
    for (auto const& w : oracle::all_words(1, 2, 8)) {
      WordD const x(2, w);
      WordD const y = eval_prefix(fg, 0, x);
      CHECK(is_prefix(y, x));
      CHECK(y[0].size() + static_cast<std::size_t>(n - 1) >= x[0].size());
    }
    Diagram const gf = compose(g, f);
    for (auto const& w : oracle::all_words(1, n, n == 5 ? 5 : 6)) {
      WordD const x(n, w);
      CHECK(eval_prefix(gf, 0, x) == x);
    }
  }
  Diagram const f3 = fig2_forward(3);
  CHECK(eval_prefix(f3, 0, W("(00)")) == W("(2)", 3));
  CHECK(eval_prefix(f3, 0, W("(001)")) == W("(20)", 3));
  CHECK(eval_prefix(f3, 0, W("(01)")) == W("(1)", 3));
  CHECK(eval_prefix(f3, 0, W("(1)")) == W("(0)", 3));
  CHECK_THROWS_AS(fig2_forward(1), InvalidWord);
}

TEST_CASE("irreducible code", "[catalog]") {
  PrefixCode const c = scary_code();
  CHECK(c.size() == 5);
  CHECK(refinement_irreducible(c));
  CHECK(oracle::is_complete_code(c.members(), 3, 2));
}

TEST_CASE("finite entries are valid and non-degenerate", "[catalog]") {
  for (auto const& name : catalog_names()) {
    CAPTURE(name);
    CatalogEntry const e = catalog_entry(name);
    int const set = (e.diagram ? 1 : 0) + (e.handle ? 1 : 0) + (e.exchange ? 1 : 0) + (e.code ? 1 : 0);
    CHECK(set == 1);
    CHECK_FALSE(e.note.empty());
    if (e.diagram) {
      CHECK_NOTHROW(validate(e.diagram->tables()));
      CHECK(is_nondegenerate(*e.diagram));
    }
  }
  for (int d = 1; d <= 3; ++d) {
    auto const P = perm_cores(d);
    std::size_t f = 1;
    for (int i = 2; i <= d; ++i) {
      f *= static_cast<std::size_t>(i);
    }
    CHECK(P.size() == f);
    CHECK(is_identity(P.front()));
    for (auto const& p : P) {
      CHECK(is_nondegenerate(p.machine()));
    }
  }
}

TEST_CASE("entry parameters", "[catalog]") {
  CHECK(catalog_entry("fig2_forward:4").diagram->range().n == 4);
  CHECK(catalog_entry("identity:2:3").diagram->d() == 2);
  CHECK(catalog_entry("identity:2:3").diagram->n() == 3);
  CHECK(*catalog_entry("perm_core:2:2:(0 1)").diagram == permutation_core({1, 0}, 2).machine());
  CHECK(catalog_entry("fig2_code:5").code->size() == 5);
  CHECK_THROWS_AS(catalog_entry("nope"), UnknownEntry);
  CHECK_THROWS_AS(catalog_entry("fig2_forward:x"), UnknownEntry);
  CHECK_THROWS_AS(catalog_entry("fig3_left:2"), UnknownEntry);
  CHECK_THROWS_AS(catalog_entry("identity:1:2:3"), UnknownEntry);
}
