// outer.cpp -- the core monoid and the maps out of it.

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dvn/enumerate.hpp"
#include "dvn/error.hpp"
#include "dvn/homeo.hpp"
#include "dvn/outer.hpp"

namespace dvn {

////////////////////////////////////////////////////////////////////////
// Permutations
////////////////////////////////////////////////////////////////////////

Perm perm_identity(int d) {
  Perm p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_compose(Perm const& g, Perm const& h) {
  if (g.size() != h.size()) {
    throw SignatureMismatch("permutations of different degrees");
  }
  Perm r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    r[i] = h[static_cast<std::size_t>(g[i])];
  }
  return r;
}

Perm perm_inverse(Perm const& g) {
  Perm r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    r[static_cast<std::size_t>(g[i])] = static_cast<int>(i);
  }
  return r;
}

bool is_permutation(Perm const& g) {
  std::vector<char> hit(g.size(), 0);
  for (int x : g) {
    if (x < 0 || static_cast<std::size_t>(x) >= g.size() || hit[static_cast<std::size_t>(x)]) {
      return false;
    }
    hit[static_cast<std::size_t>(x)] = 1;
  }
  return true;
}

std::string perm_str(Perm const& g) {
  if (!is_permutation(g)) {
    // A coordinate map that is not a bijection prints as its image list.
    std::string s = "[";
    for (std::size_t i = 0; i < g.size(); ++i) {
      s += (i ? " " : "") + std::to_string(g[i]);
    }
    return s + "]";
  }
  std::string s;
  std::vector<char> done(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (done[i] || g[i] == static_cast<int>(i)) {
      continue;
    }
    s += "(";
    std::size_t j = i;
    bool first = true;
    while (!done[j]) {
      done[j] = 1;
      s += (first ? "" : " ") + std::to_string(j);
      first = false;
      j = static_cast<std::size_t>(g[j]);
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

Perm perm_parse(std::string const& text, int d) {
  Perm p = perm_identity(d);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',')) {
      ++i;
    }
  };
  std::vector<char> used(static_cast<std::size_t>(d), 0);
  skip();
  while (i < text.size()) {
    if (text[i] != '(') {
      throw ParseError("expected '(' in permutation " + text);
    }
    ++i;
    std::vector<int> cyc;
    skip();
    while (i < text.size() && text[i] != ')') {
      std::size_t end = i;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) {
        ++end;
      }
      if (end == i) {
        throw ParseError("bad permutation " + text);
      }
      int const x = std::stoi(text.substr(i, end - i));
      if (x >= d || used[static_cast<std::size_t>(x)]) {
        throw ParseError("bad point " + std::to_string(x) + " in permutation " + text);
      }
      used[static_cast<std::size_t>(x)] = 1;
      cyc.push_back(x);
      i = end;
      skip();
    }
    if (i >= text.size()) {
      throw ParseError("unclosed cycle in " + text);
    }
    ++i;
    for (std::size_t j = 0; j < cyc.size(); ++j) {
      p[static_cast<std::size_t>(cyc[j])] = cyc[(j + 1) % cyc.size()];
    }
    skip();
  }
  return p;
}

////////////////////////////////////////////////////////////////////////
// Canonical form
////////////////////////////////////////////////////////////////////////

CoreElement canonicalize_core(Diagram const& D) {
  if (D.domain() != D.range()) {
    throw SignatureMismatch("a core element maps (d,n) to itself");
  }
  Diagram m = minimize(complete_response(minimize(D).machine)).machine;
  auto const level = synchronizing_level(m);
  if (!level) {
    throw NotSynchronizing("the state subsets never collapse");
  }
  WordD zero(m.d(), m.n());
  for (int i = 0; i < m.d(); ++i) {
    for (int j = 0; j < *level; ++j) {
      zero.append(i, 0);
    }
  }
  int const base = run(m, 0, zero).first;
  std::vector<int> order = reachable(m, base);
  if (order.size() != static_cast<std::size_t>(m.size())) {
    throw NotCore("some state is not reachable from the synchronized state");
  }
  std::vector<int> perm(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    perm[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }
  Tables t = relabel(m, perm).tables();
  t.names.clear();
  return CoreElement(Diagram(std::move(t)));
}

CoreElement canonicalize(Diagram const& D) {
  return canonicalize_core(core(D));
}

CoreElement core_identity(int d, int n) {
  return canonicalize_core(identity(d, n));
}

namespace {

// The unique closed strongly connected component reachable from q.
std::vector<int> closed_component(Diagram const& D, int q) {
  int x = q;
  while (true) {
    std::vector<int> R = reachable(D, x);
    std::vector<char> inR(static_cast<std::size_t>(D.size()), 0);
    for (int r : R) {
      inR[static_cast<std::size_t>(r)] = 1;
    }
    // Reverse reachability to x inside R.
    std::vector<std::vector<int>> rev(static_cast<std::size_t>(D.size()));
    for (int r : R) {
      for (int g = 0; g < D.gens(); ++g) {
        rev[static_cast<std::size_t>(D.next(r, g))].push_back(r);
      }
    }
    std::vector<char> back(static_cast<std::size_t>(D.size()), 0);
    std::vector<int> stack{x};
    back[static_cast<std::size_t>(x)] = 1;
    while (!stack.empty()) {
      int const y = stack.back();
      stack.pop_back();
      for (int z : rev[static_cast<std::size_t>(y)]) {
        if (!back[static_cast<std::size_t>(z)]) {
          back[static_cast<std::size_t>(z)] = 1;
          stack.push_back(z);
        }
      }
    }
    auto escape = std::find_if(R.begin(), R.end(),
                               [&](int r) { return !back[static_cast<std::size_t>(r)]; });
    if (escape == R.end()) {
      std::sort(R.begin(), R.end());
      return R;
    }
    x = *escape;
  }
}

}  // namespace

CoreElement multiply(CoreElement const& A, CoreElement const& B) {
  if (A.machine().domain() != B.machine().domain()) {
    throw SignatureMismatch("core elements over different signatures");
  }
  Diagram const C = compose_from(A.machine(), B.machine(), 0, 0).first;
  return canonicalize_core(restrict_to(C, closed_component(C, 0)).first);
}

bool is_identity(CoreElement const& A) {
  return A.size() == 1 && is_identity_state(A.machine(), 0);
}

////////////////////////////////////////////////////////////////////////
// Coordinate map, signature, decomposition
////////////////////////////////////////////////////////////////////////

Perm psi(CoreElement const& A) {
  Diagram const& M = A.machine();
  Perm p(static_cast<std::size_t>(M.d()), -1);
  for (int i = 0; i < M.d(); ++i) {
    std::vector<char> fed(static_cast<std::size_t>(M.d()), 0);
    for (int q = 0; q < M.size(); ++q) {
      for (int x = 0; x < M.n(); ++x) {
        WordD const& o = M.out(q, M.gen_index(i, x));
        for (int j = 0; j < M.d(); ++j) {
          fed[static_cast<std::size_t>(j)] |= static_cast<char>(!o[j].empty());
        }
      }
    }
    int const count = static_cast<int>(std::count(fed.begin(), fed.end(), 1));
    if (count != 1) {
      throw Inconsistent("coordinate " + std::to_string(i) + " feeds " + std::to_string(count)
                         + " output coordinates");
    }
    p[static_cast<std::size_t>(i)] =
        static_cast<int>(std::find(fed.begin(), fed.end(), 1) - fed.begin());
  }
  return p;
}

bool in_dK(CoreElement const& A) {
  return psi(A) == perm_identity(A.d());
}

int sig(CoreElement const& A) {
  return ssig(image(A.machine(), 0));
}

std::vector<CoreElement> decompose(CoreElement const& A) {
  Diagram const& M = A.machine();
  if (!in_dK(A)) {
    throw DecompositionMismatch("coordinate map " + perm_str(psi(A)) + " is not the identity");
  }
  std::vector<CoreElement> factors;
  for (int i = 0; i < M.d(); ++i) {
    // The ~_i class of state 0.
    std::vector<int> cls{0};
    std::vector<int> index(static_cast<std::size_t>(M.size()), -1);
    index[0] = 0;
    for (std::size_t h = 0; h < cls.size(); ++h) {
      for (int x = 0; x < M.n(); ++x) {
        int const p = M.next(cls[h], M.gen_index(i, x));
        if (index[static_cast<std::size_t>(p)] < 0) {
          index[static_cast<std::size_t>(p)] = static_cast<int>(cls.size());
          cls.push_back(p);
        }
      }
    }
    Tables t;
    t.domain = {1, M.n()};
    t.range = {1, M.n()};
    t.states = static_cast<int>(cls.size());
    for (int q : cls) {
      for (int x = 0; x < M.n(); ++x) {
        int const g = M.gen_index(i, x);
        t.next.push_back(index[static_cast<std::size_t>(M.next(q, g))]);
        t.out.emplace_back(M.n(), std::vector<Word>{M.out(q, g)[i]});
      }
    }
    factors.push_back(canonicalize(Diagram(std::move(t))));
  }
  if (!(recompose(factors) == A)) {
    throw DecompositionMismatch("the product of the factors differs from the input");
  }
  return factors;
}

CoreElement recompose(std::vector<CoreElement> const& factors) {
  if (factors.empty()) {
    throw DecompositionMismatch("no factors");
  }
  std::vector<Diagram> ms;
  for (auto const& f : factors) {
    if (f.d() != 1 || f.n() != factors.front().n()) {
      throw SignatureMismatch("factors must be one-dimensional over a common alphabet");
    }
    ms.push_back(f.machine());
  }
  return canonicalize_core(product(ms));
}

CoreElement permutation_core(Perm const& g, int n) {
  if (!is_permutation(g)) {
    throw InvalidTable("not a permutation: " + perm_str(g));
  }
  int const d = static_cast<int>(g.size());
  Tables t;
  t.domain = {d, n};
  t.range = {d, n};
  t.states = 1;
  for (int i = 0; i < d; ++i) {
    for (int x = 0; x < n; ++x) {
      t.next.push_back(0);
      t.out.push_back(WordD::generator(d, n, g[static_cast<std::size_t>(i)], x));
    }
  }
  return canonicalize_core(Diagram(std::move(t)));
}

////////////////////////////////////////////////////////////////////////
// Wreath coordinates
////////////////////////////////////////////////////////////////////////

WreathCoordinates wreath_coordinates(CoreElement const& A) {
  Perm const g = psi(A);
  if (!is_permutation(g)) {
    throw NotInvertible("coordinate map " + perm_str(g) + " is not a bijection");
  }
  CoreElement const K = multiply(A, permutation_core(perm_inverse(g), A.n()));
  return {decompose(K), g};
}

CoreElement from_wreath(WreathCoordinates const& w) {
  return multiply(recompose(w.factors), permutation_core(w.perm, w.factors.front().n()));
}

WreathCoordinates wreath_multiply(WreathCoordinates const& a, WreathCoordinates const& b) {
  if (a.factors.size() != b.factors.size() || a.perm.size() != a.factors.size()) {
    throw SignatureMismatch("wreath coordinates of different degrees");
  }
  WreathCoordinates r;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    r.factors.push_back(
        multiply(a.factors[i], b.factors[static_cast<std::size_t>(a.perm[i])]));
  }
  r.perm = perm_compose(a.perm, b.perm);
  return r;
}

////////////////////////////////////////////////////////////////////////
// Inverses
////////////////////////////////////////////////////////////////////////

namespace {

constexpr std::size_t inverse_explore_bound = 4096;

bool inverts(CoreElement const& A, CoreElement const& B) {
  return is_identity(multiply(A, B)) && is_identity(multiply(B, A));
}

std::optional<CoreElement> invert_direct(CoreElement const& A) {
  if (A.d() == 1) {
    Handle const inv = inverse_handle(A.machine(), 0);
    Diagram const D = explore(inv, inv->start(), inverse_explore_bound);
    return canonicalize(D);
  }
  WreathCoordinates const w = wreath_coordinates(A);
  std::vector<CoreElement> inv;
  for (auto const& f : w.factors) {
    auto fi = invert_direct(f);
    if (!fi) {
      return std::nullopt;
    }
    inv.push_back(*fi);
  }
  return multiply(permutation_core(perm_inverse(w.perm), A.n()), recompose(inv));
}

}  // namespace

std::optional<CoreElement> find_inverse(CoreElement const& A, int max_states) {
  if (max_states < 0) {
    max_states = A.size() + 2;
  }
  if (is_identity(A)) {
    return A;
  }
  try {
    auto B = invert_direct(A);
    if (B && B->size() <= max_states && inverts(A, *B)) {
      return B;
    }
    if (B) {
      return std::nullopt;
    }
  } catch (Error const&) {
    // Not invertible by construction; fall through to the bounded search.
  }
  EnumerationSpec spec;
  spec.d = A.d();
  spec.n = A.n();
  spec.max_states = max_states;
  spec.stage = Stage::Injective;
  try {
    for (auto const& B : enumerate_cores(spec)) {
      if (inverts(A, B)) {
        return B;
      }
    }
  } catch (SpecTooLarge const&) {
  }
  return std::nullopt;
}

}  // namespace dvn
