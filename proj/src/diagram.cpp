// diagram.cpp -- finite transducers: construction, evaluation,
// composition, products and minimization.

#include <algorithm>
#include <deque>
#include <map>

#include "dvn/error.hpp"
#include "dvn/machine.hpp"

namespace dvn {

namespace {

std::string gen_str(Generator g) {
  return std::to_string(g.letter) + "@" + std::to_string(g.coord);
}

// Appends w to the coordinates of acc.
void append_to(std::vector<Word>& acc, WordD const& w) {
  for (int i = 0; i < w.dims(); ++i) {
    acc[static_cast<std::size_t>(i)] += w[i];
  }
}

}  // namespace

Diagram::Diagram(Tables t) : _t(std::move(t)) {
  auto const& dom = _t.domain;
  auto const& rng = _t.range;
  if (dom.d < 1 || dom.n < 2 || rng.d < 1 || rng.n < 2) {
    throw InvalidTable("bad signature");
  }
  if (_t.states < 1) {
    throw InvalidTable("no states");
  }
  std::size_t const cells = static_cast<std::size_t>(_t.states) * static_cast<std::size_t>(gens());
  if (_t.next.size() != cells || _t.out.size() != cells) {
    throw InvalidTable("tables are not total");
  }
  for (int x : _t.next) {
    if (x < 0 || x >= _t.states) {
      throw InvalidTable("transition to unknown state " + std::to_string(x));
    }
  }
  for (auto const& w : _t.out) {
    if (w.dims() != rng.d || w.alphabet() != rng.n) {
      throw InvalidTable("output " + w.str() + " outside the range signature");
    }
  }
  if (!_t.names.empty() && _t.names.size() != static_cast<std::size_t>(_t.states)) {
    throw InvalidTable("state name count mismatch");
  }
}

std::string Diagram::name(int q) const {
  return _t.names.empty() ? std::to_string(q) : _t.names[static_cast<std::size_t>(q)];
}

int Diagram::state(std::string const& nm) const {
  for (int q = 0; q < size(); ++q) {
    if (name(q) == nm) {
      return q;
    }
  }
  throw InvalidTable("no state named '" + nm + "'");
}

bool Diagram::operator==(Diagram const& o) const {
  return _t.domain == o._t.domain && _t.range == o._t.range && _t.states == o._t.states
         && _t.next == o._t.next && _t.out == o._t.out;
}

Diagram validate(Tables t) {
  Diagram D(std::move(t));
  int const d = D.d();
  int const n = D.n();
  for (int q = 0; q < D.size(); ++q) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            int const x = D.gen_index(i, a);
            int const y = D.gen_index(j, b);
            int const qx = D.next(q, x);
            int const qy = D.next(q, y);
            std::string const where = "at state " + D.name(q) + ", gens ("
                                      + gen_str({i, a}) + ", " + gen_str({j, b}) + ")";
            if (D.next(qx, y) != D.next(qy, x)) {
              throw IncoherentTransition(where);
            }
            if (concat(D.out(q, x), D.out(qx, y)) != concat(D.out(q, y), D.out(qy, x))) {
              throw IncoherentOutput(where);
            }
          }
        }
      }
    }
  }
  return D;
}

Diagram identity(int d, int n) {
  Tables t;
  t.domain = {d, n};
  t.range = {d, n};
  t.states = 1;
  for (int i = 0; i < d; ++i) {
    for (int x = 0; x < n; ++x) {
      t.next.push_back(0);
      t.out.push_back(WordD::generator(d, n, i, x));
    }
  }
  return Diagram(std::move(t));
}

Diagram relabel(Diagram const& D, std::vector<int> const& perm) {
  Tables t = D.tables();
  int const G = D.gens();
  for (int q = 0; q < D.size(); ++q) {
    int const p = perm[static_cast<std::size_t>(q)];
    for (int g = 0; g < G; ++g) {
      t.next[static_cast<std::size_t>(p * G + g)] = perm[static_cast<std::size_t>(D.next(q, g))];
      t.out[static_cast<std::size_t>(p * G + g)] = D.out(q, g);
    }
    if (!t.names.empty()) {
      t.names[static_cast<std::size_t>(p)] = D.name(q);
    }
  }
  return Diagram(std::move(t));
}

std::pair<Diagram, std::vector<int>> restrict_to(Diagram const& D, std::vector<int> const& keep) {
  std::vector<int> map(static_cast<std::size_t>(D.size()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    map[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  }
  Tables t;
  t.domain = D.domain();
  t.range = D.range();
  t.states = static_cast<int>(keep.size());
  for (int q : keep) {
    for (int g = 0; g < D.gens(); ++g) {
      int const p = map[static_cast<std::size_t>(D.next(q, g))];
      if (p < 0) {
        throw InvalidTable("state set is not closed under transitions");
      }
      t.next.push_back(p);
      t.out.push_back(D.out(q, g));
    }
    if (!D.tables().names.empty()) {
      t.names.push_back(D.name(q));
    }
  }
  return {Diagram(std::move(t)), map};
}

std::vector<int> reachable(Diagram const& D, int q) {
  std::vector<char> seen(static_cast<std::size_t>(D.size()), 0);
  std::vector<int> order{q};
  seen[static_cast<std::size_t>(q)] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int g = 0; g < D.gens(); ++g) {
      int const p = D.next(order[i], g);
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = 1;
        order.push_back(p);
      }
    }
  }
  return order;
}

bool is_identity_state(Diagram const& D, int q) {
  if (D.domain() != D.range()) {
    return false;
  }
  for (int g = 0; g < D.gens(); ++g) {
    Generator const x = D.gen(g);
    if (D.next(q, g) != q || D.out(q, g) != WordD::generator(D.d(), D.n(), x.coord, x.letter)) {
      return false;
    }
  }
  return true;
}

bool strongly_connected(Diagram const& D) {
  for (int q = 0; q < D.size(); ++q) {
    if (reachable(D, q).size() != static_cast<std::size_t>(D.size())) {
      return false;
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////
// Evaluation
////////////////////////////////////////////////////////////////////////

std::pair<int, WordD> run(Diagram const& D, int q, WordD const& w) {
  if (w.dims() != D.d() || w.alphabet() != D.n()) {
    throw SignatureMismatch("word " + w.str() + " for a machine over ("
                            + std::to_string(D.d()) + "," + std::to_string(D.n()) + ")");
  }
  std::vector<Word> acc(static_cast<std::size_t>(D.range().d));
  for (int i = 0; i < w.dims(); ++i) {
    for (unsigned char x : w[i]) {
      int const g = D.gen_index(i, x);
      append_to(acc, D.out(q, g));
      q = D.next(q, g);
    }
  }
  return {q, WordD(D.range().n, std::move(acc))};
}

WordD eval_prefix(Diagram const& D, int q, WordD const& w) {
  return run(D, q, w).second;
}

SquareTable square_table(Diagram const& D) {
  int const d = D.d();
  int const n = D.n();
  int U = 1;
  for (int i = 0; i < d; ++i) {
    U *= n;
  }
  SquareTable s;
  s.letters = U;
  s.next.reserve(static_cast<std::size_t>(D.size() * U));
  s.out.reserve(static_cast<std::size_t>(D.size() * U));
  for (int q = 0; q < D.size(); ++q) {
    for (int u = 0; u < U; ++u) {
      int p = q;
      std::vector<Word> acc(static_cast<std::size_t>(D.range().d));
      int div = U;
      for (int i = 0; i < d; ++i) {
        div /= n;
        int const g = D.gen_index(i, (u / div) % n);
        append_to(acc, D.out(p, g));
        p = D.next(p, g);
      }
      s.next.push_back(p);
      s.out.emplace_back(D.range().n, std::move(acc));
    }
  }
  return s;
}

////////////////////////////////////////////////////////////////////////
// Composition and products
////////////////////////////////////////////////////////////////////////

std::pair<Diagram, std::vector<std::pair<int, int>>> compose_from(Diagram const& A, Diagram const& B,
                                                                  int a, int b) {
  if (A.range() != B.domain()) {
    throw SignatureMismatch("range of the first machine differs from the domain of the second");
  }
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs{{a, b}};
  index[{a, b}] = 0;
  Tables t;
  t.domain = A.domain();
  t.range = B.range();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto const [p, q] = pairs[i];
    for (int g = 0; g < A.gens(); ++g) {
      auto [q2, o] = run(B, q, A.out(p, g));
      std::pair<int, int> const key{A.next(p, g), q2};
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, static_cast<int>(pairs.size())).first;
        pairs.push_back(key);
      }
      t.next.push_back(it->second);
      t.out.push_back(std::move(o));
    }
  }
  t.states = static_cast<int>(pairs.size());
  return {Diagram(std::move(t)), pairs};
}

Diagram compose(Diagram const& A, Diagram const& B) {
  if (A.range() != B.domain()) {
    throw SignatureMismatch("range of the first machine differs from the domain of the second");
  }
  Tables t;
  t.domain = A.domain();
  t.range = B.range();
  t.states = A.size() * B.size();
  bool const named = !A.tables().names.empty() || !B.tables().names.empty();
  for (int p = 0; p < A.size(); ++p) {
    for (int q = 0; q < B.size(); ++q) {
      for (int g = 0; g < A.gens(); ++g) {
        auto [q2, o] = run(B, q, A.out(p, g));
        t.next.push_back(A.next(p, g) * B.size() + q2);
        t.out.push_back(std::move(o));
      }
      if (named) {
        t.names.push_back("(" + A.name(p) + "," + B.name(q) + ")");
      }
    }
  }
  return Diagram(std::move(t));
}

Diagram product(std::vector<Diagram> const& factors) {
  if (factors.empty()) {
    throw InvalidTable("product of no factors");
  }
  int const n = factors.front().n();
  int const m = factors.front().range().n;
  int d = 0;
  int k = 0;
  int states = 1;
  for (auto const& f : factors) {
    if (f.n() != n || f.range().n != m) {
      throw SignatureMismatch("product factors over different alphabets");
    }
    d += f.d();
    k += f.range().d;
    states *= f.size();
  }
  Tables t;
  t.domain = {d, n};
  t.range = {k, m};
  t.states = states;
  bool const named = std::any_of(factors.begin(), factors.end(),
                                 [](Diagram const& f) { return !f.tables().names.empty(); });
  std::size_t const F = factors.size();
  for (int s = 0; s < states; ++s) {
    std::vector<int> comp(F);
    int r = s;
    for (std::size_t i = F; i-- > 0;) {
      comp[i] = r % factors[i].size();
      r /= factors[i].size();
    }
    int in_off = 0;
    int out_off = 0;
    for (std::size_t i = 0; i < F; ++i) {
      auto const& f = factors[i];
      for (int c = 0; c < f.d(); ++c) {
        for (int x = 0; x < n; ++x) {
          int const g = f.gen_index(c, x);
          std::vector<int> nc = comp;
          nc[i] = f.next(comp[i], g);
          int idx = 0;
          for (std::size_t j = 0; j < F; ++j) {
            idx = idx * factors[j].size() + nc[j];
          }
          t.next.push_back(idx);
          std::vector<Word> o(static_cast<std::size_t>(k));
          WordD const& fo = f.out(comp[i], g);
          for (int j = 0; j < f.range().d; ++j) {
            o[static_cast<std::size_t>(out_off + j)] = fo[j];
          }
          t.out.emplace_back(m, std::move(o));
        }
      }
      in_off += f.d();
      out_off += f.range().d;
    }
    if (named) {
      std::string nm = "(";
      for (std::size_t i = 0; i < F; ++i) {
        nm += (i > 0 ? "," : "") + factors[i].name(comp[i]);
      }
      t.names.push_back(nm + ")");
    }
  }
  return Diagram(std::move(t));
}

////////////////////////////////////////////////////////////////////////
// Minimization
////////////////////////////////////////////////////////////////////////

Minimized minimize(Diagram const& D) {
  int const N = D.size();
  int const G = D.gens();
  std::vector<int> cls(static_cast<std::size_t>(N));
  {
    std::map<std::vector<WordD>, int> ids;
    for (int q = 0; q < N; ++q) {
      std::vector<WordD> profile;
      profile.reserve(static_cast<std::size_t>(G));
      for (int g = 0; g < G; ++g) {
        profile.push_back(D.out(q, g));
      }
      auto it = ids.emplace(std::move(profile), static_cast<int>(ids.size())).first;
      cls[static_cast<std::size_t>(q)] = it->second;
    }
  }
  int count = *std::max_element(cls.begin(), cls.end()) + 1;
  while (true) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next_cls(static_cast<std::size_t>(N));
    for (int q = 0; q < N; ++q) {
      std::vector<int> key{cls[static_cast<std::size_t>(q)]};
      for (int g = 0; g < G; ++g) {
        key.push_back(cls[static_cast<std::size_t>(D.next(q, g))]);
      }
      auto it = ids.emplace(std::move(key), static_cast<int>(ids.size())).first;
      next_cls[static_cast<std::size_t>(q)] = it->second;
    }
    int const c = static_cast<int>(ids.size());
    cls = std::move(next_cls);
    if (c == count) {
      break;
    }
    count = c;
  }
  std::vector<int> rep(static_cast<std::size_t>(count), -1);
  for (int q = 0; q < N; ++q) {
    auto& r = rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(q)])];
    if (r < 0) {
      r = q;
    }
  }
  Tables t;
  t.domain = D.domain();
  t.range = D.range();
  t.states = count;
  for (int c = 0; c < count; ++c) {
    int const q = rep[static_cast<std::size_t>(c)];
    for (int g = 0; g < G; ++g) {
      t.next.push_back(cls[static_cast<std::size_t>(D.next(q, g))]);
      t.out.push_back(D.out(q, g));
    }
    if (!D.tables().names.empty()) {
      t.names.push_back(D.name(q));
    }
  }
  return {Diagram(std::move(t)), std::move(cls)};
}

}  // namespace dvn
