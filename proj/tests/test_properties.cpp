// Seeded property suites; every suite runs at least 100 cases.

#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "dvn/catalog.hpp"
#include "dvn/enumerate.hpp"
#include "dvn/error.hpp"
#include "oracles.hpp"

using namespace dvn;

namespace {

constexpr int cases = 100;

std::vector<CoreElement> const& cores_13() {
  static std::vector<CoreElement> const v = [] {
    EnumerationSpec s;
    s.n = 3;
    s.max_states = 2;
    return enumerate_cores(s);
  }();
  return v;
}

std::vector<CoreElement> const& cores_12() {
  static std::vector<CoreElement> const v = [] {
    EnumerationSpec s;
    s.max_states = 3;
    std::vector<CoreElement> out = enumerate_cores(s);
    out.push_back(canonicalize(fig3_left()));
    return out;
  }();
  return v;
}

template <typename T>
T const& pick(std::vector<T> const& v, std::mt19937_64& rng) {
  return v[rng() % v.size()];
}

// Product of random one-dimensional machines: a coherent d-dimensional table.
Diagram random_product(int d, std::mt19937_64& rng, int states = 2) {
  std::vector<Diagram> f;
  for (int i = 0; i < d; ++i) {
    f.push_back(oracle::random_1d(1 + static_cast<int>(rng() % static_cast<unsigned>(states)), 2, 2, rng));
  }
  return product(f);
}

}  // namespace

TEST_CASE("transducer law", "[properties]") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < cases; ++i) {
    Diagram const D = random_product(1 + i % 3, rng);
    int const q = static_cast<int>(rng() % static_cast<unsigned>(D.size()));
    WordD const u(2, oracle::random_coords(D.d(), 2, 3, rng));
    WordD const v(2, oracle::random_coords(D.d(), 2, 3, rng));
    auto const [p, a] = run(D, q, u);
    auto const [r, b] = run(D, p, v);
    auto const [s, c] = run(D, q, concat(u, v));
    CHECK(s == r);
    CHECK(c == concat(a, b));
    CHECK(c.coords() == oracle::eval(D, q, concat(u, v).coords()));
    CHECK(c.coords() == oracle::eval_interleaved(D, q, concat(u, v).coords()));
  }
}

TEST_CASE("minimize is idempotent and keeps behaviour", "[properties]") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < cases; ++i) {
    Diagram D = oracle::random_1d(2 + static_cast<int>(rng() % 4), 2, 2, rng);
    if (i % 2 == 0) {
      // Duplicated states make merging non-trivial.
      Tables t = D.tables();
      int const N = t.states;
      t.states = 2 * N;
      t.names.clear();
      auto const next = t.next;
      auto const out = t.out;
      for (std::size_t c = 0; c < next.size(); ++c) {
        t.next[c] = next[c] + (rng() % 2 ? N : 0);
      }
      for (std::size_t c = 0; c < next.size(); ++c) {
        t.next.push_back(next[c] + (rng() % 2 ? N : 0));
        t.out.push_back(out[c]);
      }
      D = validate(std::move(t));
    }
    Minimized const m = minimize(D);
    CHECK(minimize(m.machine).machine.size() == m.machine.size());
    CHECK(m.machine.size() <= (i % 2 == 0 ? D.size() / 2 : D.size()));
    for (int q = 0; q < D.size(); ++q) {
      CHECK(oracle::same_behaviour(D, q, m.machine, m.map[static_cast<std::size_t>(q)], 6));
    }
  }
}

TEST_CASE("compose and product agree with the oracles", "[properties]") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < cases; ++i) {
    Diagram const A = oracle::random_1d(1 + static_cast<int>(rng() % 3), 2, 2, rng);
    Diagram const B = oracle::random_1d(1 + static_cast<int>(rng() % 3), 2, 2, rng);
    Diagram const AB = compose(A, B);
    int const p = static_cast<int>(rng() % static_cast<unsigned>(A.size()));
    int const q = static_cast<int>(rng() % static_cast<unsigned>(B.size()));
    for (int j = 0; j < 8; ++j) {
      oracle::Coords const w = oracle::random_coords(1, 2, 6, rng);
      CHECK(oracle::eval(AB, p * B.size() + q, w) == oracle::eval(B, q, oracle::eval(A, p, w)));
    }
    Diagram const C = oracle::random_1d(1 + static_cast<int>(rng() % 2), 2, 2, rng);
    Diagram const P = product({A, C});
    for (int j = 0; j < 8; ++j) {
      oracle::Coords const w = oracle::random_coords(2, 2, 4, rng);
      oracle::Coords const y = oracle::eval(P, p * C.size(), w);
      CHECK(y[0] == oracle::eval(A, p, {w[0]})[0]);
      CHECK(y[1] == oracle::eval(C, 0, {w[1]})[0]);
    }
  }
}

TEST_CASE("complete response leaves no common prefix", "[properties]") {
  std::mt19937_64 rng(104);
  int done = 0;
  for (int i = 0; done < cases && i < 50 * cases; ++i) {
    Diagram const D = oracle::random_1d(1 + static_cast<int>(rng() % 3), 2, 2, rng, 1);
    Diagram C = D;
    try {
      C = complete_response(D);
    } catch (CapExceeded const&) {
      continue;  // non-clopen image
    }
    ++done;
    for (auto const& img : images(C)) {
      REQUIRE_FALSE(img.empty());
      CHECK(lcp(img.cones()).empty());
    }
    // pre(q)·C(w) extends D(w).
    auto const old = images(D);
    for (int q = 0; q < D.size(); ++q) {
      WordD const pre = lcp(old[static_cast<std::size_t>(q)].cones());
      for (auto const& w : oracle::all_words(1, 2, 4)) {
        WordD const x(2, w);
        WordD const full = eval_prefix(D, q, x);
        WordD const got = concat(pre, eval_prefix(C, q, x));
        CHECK(is_prefix(full, got));
      }
    }
  }
  CHECK(done == cases);
}

TEST_CASE("multiply is associative", "[properties]") {
  std::mt19937_64 rng(105);
  auto const& c12 = cores_12();
  auto const& c13 = cores_13();
  for (int i = 0; i < cases; ++i) {
    auto const& pool = i % 2 ? c12 : c13;
    CoreElement const& a = pick(pool, rng);
    CoreElement const& b = pick(pool, rng);
    CoreElement const& c = pick(pool, rng);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
  }
  // All catalog triples over (2, 2).
  CoreElement const X = canonicalize(fig3_left());
  CoreElement const I = core_identity(1, 2);
  std::vector<CoreElement> cat = perm_cores(2);
  cat.push_back(recompose({X, I}));
  cat.push_back(recompose({I, X}));
  cat.push_back(canonicalize(fig4_B()));
  for (auto const& a : cat) {
    for (auto const& b : cat) {
      for (auto const& c : cat) {
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
      }
    }
  }
}

TEST_CASE("multiply is well defined and neutral", "[properties]") {
  std::mt19937_64 rng(106);
  auto const& pool = cores_13();
  for (int i = 0; i < cases; ++i) {
    CoreElement const& a = pick(pool, rng);
    CoreElement const& b = pick(pool, rng);
    auto shuffled = [&](CoreElement const& e) {
      std::vector<int> perm(static_cast<std::size_t>(e.size()));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      return canonicalize(relabel(e.machine(), perm));
    };
    CHECK(multiply(shuffled(a), shuffled(b)) == multiply(a, b));
    CHECK(multiply(a, core_identity(1, 3)) == a);
    CHECK(multiply(core_identity(1, 3), a) == a);
  }
}

TEST_CASE("sig and psi are multiplicative", "[properties]") {
  std::mt19937_64 rng(107);
  auto const& pool = cores_13();
  for (int i = 0; i < cases; ++i) {
    CoreElement const& a = pick(pool, rng);
    CoreElement const& b = pick(pool, rng);
    CHECK(sig(multiply(a, b)) == sig(a) * sig(b) % 2);
  }
  CoreElement const X = canonicalize(fig3_left());
  CoreElement const I = core_identity(1, 2);
  std::vector<CoreElement> gens = perm_cores(3);
  gens.push_back(recompose({X, I, I}));
  gens.push_back(recompose({I, X, X}));
  for (int i = 0; i < cases; ++i) {
    CoreElement const& a = pick(gens, rng);
    CoreElement const& b = pick(gens, rng);
    CoreElement const ab = multiply(a, b);
    CHECK(psi(ab) == perm_compose(psi(a), psi(b)));
    gens.push_back(ab);
  }
}

TEST_CASE("signature of recomposed products", "[properties]") {
  std::mt19937_64 rng(108);
  auto const& pool = cores_13();
  for (int i = 0; i < cases; ++i) {
    int const d = 2 + i % 2;
    std::vector<CoreElement> f;
    int expect = 1;
    for (int j = 0; j < d; ++j) {
      f.push_back(pick(pool, rng));
      expect = expect * sig(f.back()) % 2;
    }
    CoreElement const R = recompose(f);
    CHECK(sig(R) == expect);
    CHECK(decompose(R) == f);
  }
}

TEST_CASE("signature does not depend on the decomposition", "[properties]") {
  std::mt19937_64 rng(109);
  for (int i = 0; i < cases; ++i) {
    int const d = 1 + i % 3;
    int const n = 2 + static_cast<int>(rng() % 3);
    PrefixCode const code = random_code(d, n, 4, rng);
    std::vector<WordD> chosen;
    for (auto const& m : code.members()) {
      if (rng() % 2) {
        chosen.push_back(m);
      }
    }
    if (chosen.empty()) {
      chosen.push_back(code.members().front());
    }
    ConeSet const s(d, n, chosen);
    // Split one cone into its children along a random coordinate.
    std::vector<WordD> split = chosen;
    WordD const u = split.back();
    split.pop_back();
    int const coord = static_cast<int>(rng() % static_cast<unsigned>(d));
    for (int x = 0; x < n; ++x) {
      split.push_back(concat(u, WordD::generator(d, n, coord, x)));
    }
    ConeSet const t(d, n, split);
    CHECK(ssig(t) == ssig(s));
    CHECK(static_cast<int>(split.size() % static_cast<std::size_t>(n - 1)) == ssig(s));
    CHECK(t == s);
  }
}

TEST_CASE("dV cosets: a dV factor leaves the core", "[properties]") {
  std::mt19937_64 rng(110);
  std::vector<CoreElement> const pool{canonicalize(fig3_left()), core_identity(1, 2)};
  int done = 0;
  for (int i = 0; done < cases && i < 10 * cases; ++i) {
    CoreElement const& P = pool[static_cast<std::size_t>(i) % 2];
    auto const [D, base] = realize(P);
    PrefixExchange const h = random_exchange(1, 2, 3, rng);
    Handle const g = compose(as_handle(D, base), machine_of(h));
    auto const [M, q] = minimal_for_homeomorphism(g, g->start(), 4096);
    CHECK(canonicalize(M) == P);
    ++done;
  }
  CHECK(done == cases);
}

TEST_CASE("invertible cores have unit signature", "[properties]") {
  for (auto const& c : cores_13()) {
    if (auto const b = find_inverse(c)) {
      CHECK(sig(c) == 1);
      CHECK(is_identity(multiply(c, *b)));
    }
  }
}
