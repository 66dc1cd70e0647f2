#include <catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "dvn/catalog.hpp"
#include "dvn/enumerate.hpp"
#include "dvn/error.hpp"
#include "oracles.hpp"

using namespace dvn;

namespace {

EnumerationSpec spec(int d, int n, int states, int cap, Stage s) {
  EnumerationSpec e;
  e.d = d;
  e.n = n;
  e.max_states = states;
  e.max_output = cap;
  e.stage = s;
  return e;
}

// Raw one-dimensional table: successor and output per (state, letter).
struct Raw {
  int states;
  std::vector<int> next;
  std::vector<std::string> out;
};

std::vector<std::string> words_upto(int n, int cap) {
  std::vector<std::string> all{""};
  std::vector<std::string> level{""};
  for (int l = 1; l <= cap; ++l) {
    std::vector<std::string> grow;
    for (auto const& w : level) {
      for (int x = 0; x < n; ++x) {
        grow.push_back(w + static_cast<char>(x));
      }
    }
    all.insert(all.end(), grow.begin(), grow.end());
    level = std::move(grow);
  }
  return all;
}

// Independent relabeling-invariant key.
std::string raw_key(Raw const& r, int n) {
  std::vector<int> perm(static_cast<std::size_t>(r.states));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    // perm[old] = new
    std::vector<std::string> rows(static_cast<std::size_t>(r.states));
    for (int q = 0; q < r.states; ++q) {
      std::string row;
      for (int x = 0; x < n; ++x) {
        std::size_t const c = static_cast<std::size_t>(q * n + x);
        row += std::to_string(perm[static_cast<std::size_t>(r.next[c])]) + ":" + std::to_string(r.out[c].size()) + r.out[c] + ";";
      }
      rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(q)])] = row;
    }
    std::string k;
    for (auto const& row : rows) {
      k += row + "|";
    }
    if (best.empty() || k < best) {
      best = k;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Degenerate iff some path of `states` empty-output edges exists.
bool raw_degenerate(Raw const& r, int n) {
  std::function<bool(int, int)> walk = [&](int q, int left) {
    if (left == 0) {
      return true;
    }
    for (int x = 0; x < n; ++x) {
      std::size_t const c = static_cast<std::size_t>(q * n + x);
      if (r.out[c].empty() && walk(r.next[c], left - 1)) {
        return true;
      }
    }
    return false;
  };
  for (int q = 0; q < r.states; ++q) {
    if (walk(q, r.states)) {
      return true;
    }
  }
  return false;
}

// Visits every raw (1, n) table with exactly `states` states.
template <typename F>
void all_raw(int states, int n, int cap, F&& f) {
  auto const words = words_upto(n, cap);
  int const cells = states * n;
  std::size_t const choices = static_cast<std::size_t>(states) * words.size();
  std::vector<std::size_t> digit(static_cast<std::size_t>(cells), 0);
  while (true) {
    Raw r{states, {}, {}};
    for (std::size_t dgt : digit) {
      r.next.push_back(static_cast<int>(dgt / words.size()));
      r.out.push_back(words[dgt % words.size()]);
    }
    f(r);
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == choices) {
      digit[i] = 0;
      ++i;
    }
    if (i == digit.size()) {
      return;
    }
  }
}

}  // namespace

TEST_CASE("stage names", "[enumerate]") {
  for (int i = 0; i < stage_count; ++i) {
    Stage const s = static_cast<Stage>(i);
    CHECK(parse_stage(stage_name(s)) == s);
  }
  CHECK(stage_name(Stage::CompleteResponse) == "complete-response");
  CHECK_THROWS_AS(parse_stage("bogus"), ParseError);
}

TEST_CASE("one state with one-letter outputs", "[enumerate]") {
  auto const nd = enumerate(spec(1, 2, 1, 1, Stage::NonDegenerate));
  // Every map x -> λ(x) with one-letter outputs, constants included.
  CHECK(nd.size() == 4);
  auto const inj = enumerate(spec(1, 2, 1, 1, Stage::Injective));
  REQUIRE(inj.size() == 2);
  std::set<std::string> outs;
  for (auto const& D : inj) {
    outs.insert(D.out(0, 0).str() + D.out(0, 1).str());
  }
  CHECK(outs == std::set<std::string>{"(0)(1)", "(1)(0)"});
  CHECK(enumerate(spec(1, 2, 1, 1, Stage::Valid)).size() == 9);
}

TEST_CASE("valid count over two dimensions matches a brute-force scan", "[enumerate]") {
  // Every one-state (2,2) table with outputs of length <= 1, kept if coherent.
  std::vector<WordD> outs;
  for (auto const& a : words_upto(2, 1)) {
    for (auto const& b : words_upto(2, 1)) {
      outs.emplace_back(2, std::vector<Word>{a, b});
    }
  }
  std::size_t coherent = 0;
  std::vector<std::size_t> digit(4, 0);
  while (true) {
    Tables t;
    t.domain = {2, 2};
    t.range = {2, 2};
    t.states = 1;
    t.next = {0, 0, 0, 0};
    for (std::size_t g : digit) {
      t.out.push_back(outs[g]);
    }
    try {
      validate(std::move(t));
      ++coherent;
    } catch (Error const&) {
    }
    std::size_t i = 0;
    while (i < 4 && ++digit[i] == outs.size()) {
      digit[i] = 0;
      ++i;
    }
    if (i == 4) {
      break;
    }
  }
  CHECK(enumerate(spec(2, 2, 1, 1, Stage::Valid)).size() == coherent);
  CHECK(census(spec(2, 2, 1, 1, Stage::Valid)).front().second == coherent);
}

TEST_CASE("two-state census matches the brute-force oracle", "[enumerate]") {
  std::set<std::string> all;
  std::set<std::string> nondeg;
  for (int N = 1; N <= 2; ++N) {
    all_raw(N, 2, 2, [&](Raw const& r) {
      std::string const k = std::to_string(N) + "#" + raw_key(r, 2);
      all.insert(k);
      if (!raw_degenerate(r, 2)) {
        nondeg.insert(k);
      }
    });
  }
  auto const c = census(spec(1, 2, 2, 2, Stage::Invertible));
  REQUIRE(c.size() == static_cast<std::size_t>(stage_count));
  CHECK(c[0].second == all.size());
  CHECK(all.size() == 19355);
  CHECK(c[1].second == nondeg.size());
  for (std::size_t i = 1; i < c.size(); ++i) {
    CHECK(c[i].second <= c[i - 1].second);
  }
  SECTION("census agrees with enumerate stage by stage") {
    for (auto const& [s, count] : c) {
      CHECK(enumerate(spec(1, 2, 2, 2, s)).size() == count);
    }
  }
}

TEST_CASE("emitted representatives", "[enumerate]") {
  auto const valid = enumerate(spec(1, 2, 2, 1, Stage::Valid));
  SECTION("deterministic") {
    auto const again = enumerate(spec(1, 2, 2, 1, Stage::Valid));
    REQUIRE(again.size() == valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) {
      CHECK(again[i] == valid[i]);
    }
  }
  SECTION("pairwise distinct classes") {
    std::set<std::string> keys;
    for (auto const& D : valid) {
      keys.insert(relabel_invariant_key(D));
    }
    CHECK(keys.size() == valid.size());
    auto const cores = enumerate(spec(1, 3, 2, 2, Stage::Injective));
    for (std::size_t i = 0; i < cores.size(); ++i) {
      for (std::size_t j = i + 1; j < cores.size(); ++j) {
        CHECK_FALSE(strong_iso(cores[i], cores[j]).has_value());
      }
    }
  }
  SECTION("random raw tables land on emitted classes") {
    std::set<std::string> keys;
    for (auto const& D : valid) {
      keys.insert(relabel_invariant_key(D));
    }
    std::mt19937_64 rng(0);
    for (int i = 0; i < 200; ++i) {
      int const N = 1 + static_cast<int>(rng() % 2);
      Diagram const D = oracle::random_1d(N, 2, 1, rng);
      CHECK(keys.count(relabel_invariant_key(D)) == 1);
    }
  }
  SECTION("relabeling leaves the key unchanged") {
    for (auto const& D : valid) {
      if (D.size() == 2) {
        CHECK(relabel_invariant_key(relabel(D, {1, 0})) == relabel_invariant_key(D));
      }
    }
  }
}

TEST_CASE("cores and invertibles", "[enumerate]") {
  auto const cores = enumerate_cores(spec(1, 3, 1, 2, Stage::Valid));
  CHECK(cores.size() == 6);
  for (auto const& c : cores) {
    CHECK(c.size() == 1);
    CHECK(is_identity(multiply(c, *find_inverse(c))));
  }
  auto const inv = enumerate(spec(1, 2, 2, 2, Stage::Invertible));
  for (auto const& D : inv) {
    CoreElement const c = canonicalize(D);
    CHECK(c.machine() == D);
    CHECK(find_inverse(c).has_value());
  }
}

TEST_CASE("four states reach the involution", "[enumerate][slow]") {
  auto const inv = enumerate(spec(1, 2, 4, 2, Stage::Invertible));
  CoreElement const F = canonicalize(fig3_left());
  CHECK(std::count(inv.begin(), inv.end(), F.machine()) == 1);
}

TEST_CASE("spec errors", "[enumerate]") {
  CHECK_THROWS_AS(enumerate(spec(1, 2, 7, 2, Stage::Valid)), SpecTooLarge);
  CHECK_THROWS_AS(census(spec(1, 2, 4, 2, Stage::Valid)), SpecTooLarge);
  EnumerationSpec small = spec(1, 2, 3, 2, Stage::Valid);
  small.budget = 100;
  CHECK_THROWS_AS(enumerate(small), SpecTooLarge);
  CHECK_THROWS_AS(enumerate(spec(1, 2, 0, 2, Stage::Valid)), InvalidTable);
  CHECK_THROWS_AS(enumerate(spec(1, 1, 1, 2, Stage::Valid)), InvalidTable);
}
