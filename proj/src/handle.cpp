// handle.cpp -- lazy machines: adapters, composites, exploration and
// the distinct-state probe.

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "dvn/error.hpp"
#include "dvn/machine.hpp"

namespace dvn {

std::string pair_key(std::string const& a, std::string const& b) {
  return std::to_string(a.size()) + ":" + a + b;
}

std::pair<std::string, std::string> split_key(std::string const& key) {
  auto const colon = key.find(':');
  if (colon == std::string::npos) {
    throw InvalidTable("malformed composite state key");
  }
  std::size_t const len = std::stoul(key.substr(0, colon));
  if (colon + 1 + len > key.size()) {
    throw InvalidTable("malformed composite state key");
  }
  return {key.substr(colon + 1, len), key.substr(colon + 1 + len)};
}

namespace {

void check_word(Signature s, WordD const& w) {
  if (w.dims() != s.d || w.alphabet() != s.n) {
    throw SignatureMismatch("word " + w.str() + " for a machine over (" + std::to_string(s.d) + ","
                            + std::to_string(s.n) + ")");
  }
}

class DiagramMachine final : public Machine {
 public:
  DiagramMachine(Diagram D, int base) : _d(std::move(D)), _base(base) {}
  Signature domain() const override { return _d.domain(); }
  Signature range() const override { return _d.range(); }
  std::string start() const override { return std::to_string(_base); }
  std::string next(std::string const& s, Generator g) const override {
    return std::to_string(_d.next(index(s), _d.gen_index(g.coord, g.letter)));
  }
  WordD out(std::string const& s, Generator g) const override {
    return _d.out(index(s), _d.gen_index(g.coord, g.letter));
  }
  std::string describe(std::string const& s) const override { return _d.name(index(s)); }

 private:
  int index(std::string const& s) const {
    int const q = std::stoi(s);
    if (q < 0 || q >= _d.size()) {
      throw InvalidTable("unknown state " + s);
    }
    return q;
  }
  Diagram _d;
  int _base;
};

class ComposeMachine final : public Machine {
 public:
  ComposeMachine(Handle a, Handle b) : _a(std::move(a)), _b(std::move(b)) {
    if (_a->range() != _b->domain()) {
      throw SignatureMismatch("range of the first machine differs from the domain of the second");
    }
  }
  Signature domain() const override { return _a->domain(); }
  Signature range() const override { return _b->range(); }
  std::string start() const override { return pair_key(_a->start(), _b->start()); }
  std::string next(std::string const& s, Generator g) const override {
    auto [p, q] = split_key(s);
    return pair_key(_a->next(p, g), dvn::run(_b, q, _a->out(p, g)).first);
  }
  WordD out(std::string const& s, Generator g) const override {
    auto [p, q] = split_key(s);
    return dvn::run(_b, q, _a->out(p, g)).second;
  }
  std::string describe(std::string const& s) const override {
    auto [p, q] = split_key(s);
    return "(" + _a->describe(p) + "," + _b->describe(q) + ")";
  }

 private:
  Handle _a;
  Handle _b;
};

// Keys are length-prefixed component keys, concatenated.
std::vector<std::string> split_list(std::string key, std::size_t count) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    auto [head, rest] = split_key(key);
    parts.push_back(std::move(head));
    key = std::move(rest);
  }
  parts.push_back(std::move(key));
  return parts;
}

std::string join_list(std::vector<std::string> const& parts) {
  std::string key = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    key = pair_key(parts[i], key);
  }
  return key;
}

class ProductMachine final : public Machine {
 public:
  explicit ProductMachine(std::vector<Handle> f) : _f(std::move(f)) {
    if (_f.empty()) {
      throw InvalidTable("product of no factors");
    }
    int d = 0;
    int k = 0;
    for (auto const& h : _f) {
      if (h->domain().n != _f.front()->domain().n || h->range().n != _f.front()->range().n) {
        throw SignatureMismatch("product factors over different alphabets");
      }
      _din.push_back(d);
      _kout.push_back(k);
      d += h->domain().d;
      k += h->range().d;
    }
    _dom = {d, _f.front()->domain().n};
    _rng = {k, _f.front()->range().n};
  }
  Signature domain() const override { return _dom; }
  Signature range() const override { return _rng; }
  std::string start() const override {
    std::vector<std::string> parts;
    for (auto const& h : _f) {
      parts.push_back(h->start());
    }
    return join_list(parts);
  }
  std::string next(std::string const& s, Generator g) const override {
    auto parts = split_list(s, _f.size());
    std::size_t const i = factor(g.coord);
    parts[i] = _f[i]->next(parts[i], {g.coord - _din[i], g.letter});
    return join_list(parts);
  }
  WordD out(std::string const& s, Generator g) const override {
    auto parts = split_list(s, _f.size());
    std::size_t const i = factor(g.coord);
    WordD const o = _f[i]->out(parts[i], {g.coord - _din[i], g.letter});
    std::vector<Word> c(static_cast<std::size_t>(_rng.d));
    for (int j = 0; j < o.dims(); ++j) {
      c[static_cast<std::size_t>(_kout[i] + j)] = o[j];
    }
    return WordD(_rng.n, std::move(c));
  }
  std::string describe(std::string const& s) const override {
    auto parts = split_list(s, _f.size());
    std::string r = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      r += (i ? "," : "") + _f[i]->describe(parts[i]);
    }
    return r + ")";
  }

 private:
  std::size_t factor(int coord) const {
    std::size_t i = _din.size() - 1;
    while (_din[i] > coord) {
      --i;
    }
    return i;
  }
  std::vector<Handle> _f;
  std::vector<int> _din;
  std::vector<int> _kout;
  Signature _dom;
  Signature _rng;
};

}  // namespace

Handle as_handle(Diagram D, int base) {
  if (base < 0 || base >= D.size()) {
    throw InvalidTable("base state out of range");
  }
  return std::make_shared<DiagramMachine>(std::move(D), base);
}

Handle compose(Handle A, Handle B) {
  return std::make_shared<ComposeMachine>(std::move(A), std::move(B));
}

Handle product(std::vector<Handle> factors) {
  return std::make_shared<ProductMachine>(std::move(factors));
}

std::pair<std::string, WordD> run(Handle const& M, std::string const& state, WordD const& w) {
  check_word(M->domain(), w);
  std::string s = state;
  std::vector<Word> acc(static_cast<std::size_t>(M->range().d));
  for (int i = 0; i < w.dims(); ++i) {
    for (unsigned char x : w[i]) {
      Generator const g{i, x};
      WordD const o = M->out(s, g);
      for (int j = 0; j < o.dims(); ++j) {
        acc[static_cast<std::size_t>(j)] += o[j];
      }
      s = M->next(s, g);
    }
  }
  return {s, WordD(M->range().n, std::move(acc))};
}

WordD eval_prefix(Handle const& M, std::string const& state, WordD const& w) {
  return run(M, state, w).second;
}

Diagram explore(Handle const& M, std::string const& state, std::size_t bound) {
  Signature const dom = M->domain();
  std::unordered_map<std::string, int> index{{state, 0}};
  std::vector<std::string> keys{state};
  Tables t;
  t.domain = dom;
  t.range = M->range();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (int c = 0; c < dom.d; ++c) {
      for (int x = 0; x < dom.n; ++x) {
        Generator const g{c, x};
        std::string nk = M->next(keys[i], g);
        auto it = index.find(nk);
        if (it == index.end()) {
          if (keys.size() >= bound) {
            throw BoundExceeded("more than " + std::to_string(bound) + " reachable states");
          }
          it = index.emplace(nk, static_cast<int>(keys.size())).first;
          keys.push_back(std::move(nk));
        }
        t.next.push_back(it->second);
        t.out.push_back(M->out(keys[i], g));
      }
    }
  }
  t.states = static_cast<int>(keys.size());
  std::set<std::string> seen;
  for (auto const& k : keys) {
    t.names.push_back(M->describe(k));
    seen.insert(t.names.back());
  }
  if (seen.size() != keys.size()) {
    t.names.clear();
  }
  return Diagram(std::move(t));
}

std::pair<Diagram, int> minimal_for_homeomorphism(Handle const& M, std::string const& state,
                                                  std::size_t bound, int depth_cap) {
  return minimal_for_homeomorphism(explore(M, state, bound), 0, depth_cap);
}

namespace {

// True iff some word of total length <= budget, in coordinate-major
// order, yields different outputs from a and b.
bool differ(Machine const& M, std::string const& a, std::string const& b, std::vector<Word> la,
            std::vector<Word> lb, int min_coord, int budget) {
  if (la != lb) {
    return true;
  }
  if (budget == 0) {
    return false;
  }
  Signature const dom = M.domain();
  for (int c = min_coord; c < dom.d; ++c) {
    for (int x = 0; x < dom.n; ++x) {
      Generator const g{c, x};
      WordD const oa = M.out(a, g);
      WordD const ob = M.out(b, g);
      std::vector<Word> na = la;
      std::vector<Word> nb = lb;
      for (int j = 0; j < oa.dims(); ++j) {
        na[static_cast<std::size_t>(j)] += oa[j];
        nb[static_cast<std::size_t>(j)] += ob[j];
      }
      if (differ(M, M.next(a, g), M.next(b, g), std::move(na), std::move(nb), c, budget - 1)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::size_t distinct_states_lower_bound(Handle const& M, std::string const& state, int depth) {
  Signature const dom = M->domain();
  // States reached by words with every coordinate of length <= depth,
  // reading coordinates in order.
  std::set<std::string> layer{state};
  for (int c = 0; c < dom.d; ++c) {
    std::set<std::string> all = layer;
    std::set<std::string> frontier = layer;
    for (int l = 0; l < depth; ++l) {
      std::set<std::string> nxt;
      for (auto const& s : frontier) {
        for (int x = 0; x < dom.n; ++x) {
          nxt.insert(M->next(s, {c, x}));
        }
      }
      all.insert(nxt.begin(), nxt.end());
      frontier = std::move(nxt);
    }
    layer = std::move(all);
  }
  std::vector<std::string> reps;
  std::vector<Word> const empty(static_cast<std::size_t>(M->range().d));
  for (auto const& s : layer) {
    bool fresh = true;
    for (auto const& r : reps) {
      if (!differ(*M, s, r, empty, empty, 0, depth + 4)) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      reps.push_back(s);
    }
  }
  return reps.size();
}

}  // namespace dvn
