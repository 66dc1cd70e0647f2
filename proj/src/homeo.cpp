// homeo.cpp -- prefix exchanges, lazy machines and realization of cores.

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "dvn/error.hpp"
#include "dvn/homeo.hpp"

namespace dvn {

////////////////////////////////////////////////////////////////////////
// Prefix exchanges
////////////////////////////////////////////////////////////////////////

PrefixExchange::PrefixExchange(PrefixCode source, PrefixCode target, std::vector<std::size_t> bij)
    : _src(std::move(source)), _dst(std::move(target)), _bij(std::move(bij)) {
  if (_src.dims() != _dst.dims() || _src.alphabet() != _dst.alphabet()) {
    throw InvalidExchange("codes over different signatures");
  }
  if (_src.size() != _dst.size() || _bij.size() != _src.size()) {
    throw InvalidExchange("codes of sizes " + std::to_string(_src.size()) + " and "
                          + std::to_string(_dst.size()) + " with a bijection of size "
                          + std::to_string(_bij.size()));
  }
  std::vector<char> hit(_bij.size(), 0);
  for (std::size_t b : _bij) {
    if (b >= _bij.size() || hit[b]) {
      throw InvalidExchange("the member map is not a bijection");
    }
    hit[b] = 1;
  }
}

PrefixExchange PrefixExchange::identity(int d, int n) {
  PrefixCode const c = validate_prefix_code({WordD(d, n)});
  return PrefixExchange(c, c, {0});
}

std::optional<WordD> apply(PrefixExchange const& h, WordD const& w) {
  int const i = h.source().member_below(w);
  if (i < 0) {
    return std::nullopt;
  }
  auto const k = static_cast<std::size_t>(i);
  return concat(h.image_of(k), strip_prefix(h.source().members()[k], w));
}

namespace {

PrefixExchange from_pairs(std::vector<std::pair<WordD, WordD>> pairs) {
  std::vector<WordD> src;
  std::vector<WordD> dst;
  for (auto const& [u, v] : pairs) {
    src.push_back(u);
    dst.push_back(v);
  }
  PrefixCode const s = validate_prefix_code(src);
  PrefixCode const t = validate_prefix_code(dst);
  std::vector<std::size_t> bij(pairs.size());
  for (auto const& [u, v] : pairs) {
    auto const i = static_cast<std::size_t>(s.member_below(u));
    bij[i] = static_cast<std::size_t>(t.member_below(v));
  }
  return PrefixExchange(s, t, std::move(bij));
}

}  // namespace

PrefixExchange compose_exchanges(PrefixExchange const& g, PrefixExchange const& h) {
  if (g.dims() != h.dims() || g.alphabet() != h.alphabet()) {
    throw SignatureMismatch("exchanges over different signatures");
  }
  std::vector<std::pair<WordD, WordD>> todo;
  for (std::size_t i = 0; i < g.source().size(); ++i) {
    todo.emplace_back(g.source().members()[i], g.image_of(i));
  }
  std::vector<std::pair<WordD, WordD>> done;
  while (!todo.empty()) {
    auto [u, v] = std::move(todo.back());
    todo.pop_back();
    if (auto img = apply(h, v)) {
      done.emplace_back(std::move(u), std::move(*img));
      continue;
    }
    // Split in a coordinate where some meeting member of h's source is deeper.
    int coord = -1;
    for (auto const& s : h.source().members()) {
      if (!cones_meet(s, v)) {
        continue;
      }
      for (int i = 0; i < v.dims() && coord < 0; ++i) {
        if (s[i].size() > v[i].size()) {
          coord = i;
        }
      }
      if (coord >= 0) {
        break;
      }
    }
    for (int x = 0; x < g.alphabet(); ++x) {
      WordD ux = u;
      WordD vx = v;
      ux.append(coord, x);
      vx.append(coord, x);
      todo.emplace_back(std::move(ux), std::move(vx));
    }
  }
  return from_pairs(std::move(done));
}

PrefixExchange invert(PrefixExchange const& h) {
  std::vector<std::size_t> inv(h.bij().size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    inv[h.bij()[i]] = i;
  }
  return PrefixExchange(h.target(), h.source(), std::move(inv));
}

bool same_map(PrefixExchange const& g, PrefixExchange const& h) {
  PrefixExchange const r = compose_exchanges(g, invert(h));
  for (std::size_t i = 0; i < r.source().size(); ++i) {
    if (r.source().members()[i] != r.image_of(i)) {
      return false;
    }
  }
  return true;
}

PrefixExchange baker_exchange() {
  return from_pairs({{WordD::parse("(0,)", 2), WordD::parse("(,0)", 2)},
                     {WordD::parse("(1,)", 2), WordD::parse("(,1)", 2)}});
}

PrefixCode random_code(int d, int n, int splits, std::mt19937_64& rng) {
  PrefixCode c = validate_prefix_code({WordD(d, n)});
  for (int i = 0; i < splits; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    std::uniform_int_distribution<int> coord(0, d - 1);
    std::size_t const m = pick(rng);
    c = refine(c, m, coord(rng));
  }
  return c;
}

PrefixExchange random_exchange(int d, int n, int splits, std::mt19937_64& rng) {
  PrefixCode s = random_code(d, n, splits, rng);
  PrefixCode t = random_code(d, n, splits, rng);
  std::vector<std::size_t> bij(s.size());
  std::iota(bij.begin(), bij.end(), 0);
  std::shuffle(bij.begin(), bij.end(), rng);
  return PrefixExchange(std::move(s), std::move(t), std::move(bij));
}

////////////////////////////////////////////////////////////////////////
// T_h
////////////////////////////////////////////////////////////////////////

namespace {

// Longest common prefix of the image of the cone s.
WordD image_lcp(PrefixExchange const& h, WordD const& s) {
  std::vector<WordD> roots;
  auto const& m = h.source().members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (cones_meet(m[i], s)) {
      roots.push_back(concat(h.image_of(i), strip_prefix(m[i], join(m[i], s))));
    }
  }
  return lcp(roots);
}

constexpr char const* top_key = "T";

class ExchangeMachine final : public Machine {
 public:
  explicit ExchangeMachine(PrefixExchange h) : _h(std::move(h)) {}
  Signature domain() const override { return {_h.dims(), _h.alphabet()}; }
  Signature range() const override { return domain(); }
  std::string start() const override { return key(WordD(_h.dims(), _h.alphabet())); }
  std::string next(std::string const& s, Generator g) const override {
    if (s == top_key) {
      return s;
    }
    WordD w = WordD::parse(s, _h.alphabet());
    w.append(g.coord, g.letter);
    return key(w);
  }
  WordD out(std::string const& s, Generator g) const override {
    if (s == top_key) {
      return WordD::generator(_h.dims(), _h.alphabet(), g.coord, g.letter);
    }
    return exchange_output(_h, WordD::parse(s, _h.alphabet()), g);
  }

 private:
  std::string key(WordD const& w) const {
    return _h.source().member_below(w) >= 0 ? std::string(top_key) : w.str();
  }
  PrefixExchange _h;
};

}  // namespace

WordD exchange_output(PrefixExchange const& h, WordD const& s, Generator g) {
  WordD sx = s;
  sx.append(g.coord, g.letter);
  return strip_prefix(image_lcp(h, s), image_lcp(h, sx));
}

Handle machine_of(PrefixExchange const& h) {
  return std::make_shared<ExchangeMachine>(h);
}

bool is_dvn_member(PrefixExchange const& h) {
  int const d = h.dims();
  int const n = h.alphabet();
  for (auto const& s : square_words(d, n, static_cast<int>(h.source().depth()))) {
    for (int i = 0; i < d; ++i) {
      for (int x = 0; x < n; ++x) {
        if (exchange_output(h, s, {i, x}) != WordD::generator(d, n, i, x)) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_dvn_member(Diagram const& D, int q) {
  Diagram const M = minimal_for_homeomorphism(D, q).first;
  if (!synchronizing_level(M)) {
    throw NotSynchronizing("the minimal machine does not synchronize");
  }
  Diagram const C = core(M);
  return C.size() == 1 && is_identity_state(C, 0);
}

Handle bakers() {
  return machine_of(baker_exchange());
}

////////////////////////////////////////////////////////////////////////
// Digit pairing
////////////////////////////////////////////////////////////////////////

namespace {

// States buffer unmatched letters of one coordinate: (w,) or (,w).
class DigitPairing final : public Machine {
 public:
  Signature domain() const override { return {2, 2}; }
  Signature range() const override { return {1, 4}; }
  std::string start() const override { return WordD(2, 2).str(); }
  std::string next(std::string const& s, Generator g) const override { return step(s, g).first; }
  WordD out(std::string const& s, Generator g) const override { return step(s, g).second; }

 private:
  static std::pair<std::string, WordD> step(std::string const& s, Generator g) {
    WordD const w = WordD::parse(s, 2);
    Word b0 = w[0];
    Word b1 = w[1];
    Word out;
    Word& mine = g.coord == 0 ? b0 : b1;
    Word& other = g.coord == 0 ? b1 : b0;
    if (other.empty()) {
      mine.push_back(static_cast<char>(g.letter));
    } else {
      int const hi = g.coord == 0 ? g.letter : other[0];
      int const lo = g.coord == 0 ? other[0] : g.letter;
      out.push_back(static_cast<char>(2 * hi + lo));
      other.erase(0, 1);
    }
    return {WordD(2, {b0, b1}).str(), WordD(4, {out})};
  }
};

}  // namespace

Handle inverse_digit_pairing_D() {
  return std::make_shared<DigitPairing>();
}

////////////////////////////////////////////////////////////////////////
// Realization
////////////////////////////////////////////////////////////////////////

namespace {

struct Graft {
  std::vector<WordD> A;  // image cones at q, sorted
  std::vector<WordD> B;  // target code, sorted
  int k = 0;             // square level of the graft
};

Graft plan_graft(Diagram const& M, int q) {
  Graft g;
  g.A = image(M, q).cones();
  std::sort(g.A.begin(), g.A.end());
  g.B = left_comb(M.d(), M.n(), g.A.size()).members();
  std::size_t need = 0;
  for (auto const& a : g.A) {
    need = std::max(need, a.max_length());
  }
  // m[j][p]: least coordinate-j output length over square words of the
  // current level read from p.
  SquareTable const sq = square_table(M);
  int const d = M.d();
  std::vector<std::vector<std::size_t>> m(static_cast<std::size_t>(d),
                                          std::vector<std::size_t>(static_cast<std::size_t>(M.size()), 0));
  int const cap = default_depth_cap * M.size();
  while (true) {
    bool enough = true;
    for (int j = 0; j < d; ++j) {
      enough = enough && m[static_cast<std::size_t>(j)][static_cast<std::size_t>(q)] >= need;
    }
    if (enough) {
      return g;
    }
    if (++g.k > cap) {
      throw CapExceeded("outputs do not grow; the machine is degenerate");
    }
    for (int j = 0; j < d; ++j) {
      std::vector<std::size_t> nm(static_cast<std::size_t>(M.size()));
      for (int p = 0; p < M.size(); ++p) {
        std::size_t best = SIZE_MAX;
        for (int u = 0; u < sq.letters; ++u) {
          std::size_t const cell = static_cast<std::size_t>(p * sq.letters + u);
          best = std::min(best, sq.out[cell][j].size()
                                    + m[static_cast<std::size_t>(j)][static_cast<std::size_t>(sq.next[cell])]);
        }
        nm[static_cast<std::size_t>(p)] = best;
      }
      m[static_cast<std::size_t>(j)] = std::move(nm);
    }
  }
}

// Output and state of the graft on a square word b of level k.
std::pair<int, WordD> graft_step(Diagram const& M, int q, Graft const& g, WordD const& b) {
  auto [st, o] = run(M, q, b);
  for (std::size_t i = 0; i < g.A.size(); ++i) {
    if (is_prefix(g.A[i], o)) {
      return {st, concat(g.B[i], strip_prefix(g.A[i], o))};
    }
  }
  throw PrefixViolation("output " + o.str() + " is below no image cone");
}

std::pair<Diagram, int> realize_1d(Diagram const& M, int q) {
  Graft const g = plan_graft(M, q);
  if (g.k == 0) {
    auto [sub, map] = restrict_to(M, reachable(M, q));
    return {sub, map[static_cast<std::size_t>(q)]};
  }
  int const n = M.n();
  // Words of length < k, by length then value; index = (n^l - 1)/(n-1) + value.
  std::vector<int> first(static_cast<std::size_t>(g.k) + 1, 0);
  for (int l = 1; l <= g.k; ++l) {
    int p = 1;
    for (int i = 1; i < l; ++i) {
      p *= n;
    }
    first[static_cast<std::size_t>(l)] = first[static_cast<std::size_t>(l - 1)] + p;
  }
  int const offset = first[static_cast<std::size_t>(g.k)];
  Tables t;
  t.domain = M.domain();
  t.range = M.range();
  t.states = offset + M.size();
  for (int l = 0; l < g.k; ++l) {
    int const count = first[static_cast<std::size_t>(l + 1)] - first[static_cast<std::size_t>(l)];
    for (int v = 0; v < count; ++v) {
      Word w;
      for (int i = l - 1, r = v; i >= 0; --i, r /= n) {
        w.insert(w.begin(), static_cast<char>(r % n));
      }
      t.names.push_back("N" + digits(w));
      for (int x = 0; x < n; ++x) {
        if (l + 1 < g.k) {
          t.next.push_back(first[static_cast<std::size_t>(l + 1)] + v * n + x);
          t.out.emplace_back(1, n);
        } else {
          Word wx = w;
          wx.push_back(static_cast<char>(x));
          auto [st, o] = graft_step(M, q, g, WordD(n, {wx}));
          t.next.push_back(offset + st);
          t.out.push_back(std::move(o));
        }
      }
    }
  }
  for (int p = 0; p < M.size(); ++p) {
    t.names.push_back("P" + M.name(p));
    for (int x = 0; x < n; ++x) {
      t.next.push_back(offset + M.next(p, x));
      t.out.push_back(M.out(p, x));
    }
  }
  return {Diagram(std::move(t)), 0};
}

class RealizeMachine final : public Machine {
 public:
  RealizeMachine(Diagram M, int q) : _m(std::move(M)), _q(q), _g(plan_graft(_m, q)) {}
  Signature domain() const override { return _m.domain(); }
  Signature range() const override { return _m.range(); }
  std::string start() const override {
    return _g.k == 0 ? "P" + std::to_string(_q) : "N" + WordD(_m.d(), _m.n()).str();
  }
  std::string next(std::string const& s, Generator g) const override { return step(s, g).first; }
  WordD out(std::string const& s, Generator g) const override { return step(s, g).second; }
  std::string describe(std::string const& s) const override {
    return s[0] == 'P' ? "P" + _m.name(std::stoi(s.substr(1))) : s;
  }

 private:
  std::pair<std::string, WordD> step(std::string const& s, Generator g) const {
    int const x = _m.gen_index(g.coord, g.letter);
    if (s[0] == 'P') {
      int const p = std::stoi(s.substr(1));
      return {"P" + std::to_string(_m.next(p, x)), _m.out(p, x)};
    }
    WordD w = WordD::parse(s.substr(1), _m.n());
    w.append(g.coord, g.letter);
    if (w.min_length() < static_cast<std::size_t>(_g.k)) {
      return {"N" + w.str(), WordD(_m.d(), _m.n())};
    }
    std::vector<Word> b;
    std::vector<Word> t;
    for (auto const& c : w.coords()) {
      b.push_back(c.substr(0, static_cast<std::size_t>(_g.k)));
      t.push_back(c.substr(static_cast<std::size_t>(_g.k)));
    }
    auto [st, o] = graft_step(_m, _q, _g, WordD(_m.n(), b));
    auto [st2, o2] = run(_m, st, WordD(_m.n(), t));
    return {"P" + std::to_string(st2), concat(o, o2)};
  }
  Diagram _m;
  int _q;
  Graft _g;
};

void require_signature(Diagram const& M, int q) {
  int const s = ssig(image(M, q));
  if (s != 1 % (M.n() - 1)) {
    throw SignatureObstruction("image has " + std::to_string(image(M, q).size())
                               + " cones, not 1 mod " + std::to_string(M.n() - 1));
  }
}

}  // namespace

std::pair<Diagram, int> realize(CoreElement const& P, int q) {
  Diagram const& M = P.machine();
  require_signature(M, q);
  if (P.d() == 1) {
    return realize_1d(M, q);
  }
  if (image(M, q).is_full()) {
    auto [sub, map] = restrict_to(M, reachable(M, q));
    return {sub, map[static_cast<std::size_t>(q)]};
  }
  // Through the wreath coordinates: P = (prod K_i) * T_g.
  WreathCoordinates const w = wreath_coordinates(P);
  std::vector<Diagram> parts;
  for (auto const& f : w.factors) {
    require_signature(f.machine(), 0);
    parts.push_back(realize_1d(f.machine(), 0).first);
  }
  Diagram const prod = product(parts);
  Diagram const perm = permutation_core(w.perm, P.n()).machine();
  return {compose(prod, perm), 0};
}

Handle realize_handle(CoreElement const& P, int q) {
  require_signature(P.machine(), q);
  return std::make_shared<RealizeMachine>(P.machine(), q);
}

////////////////////////////////////////////////////////////////////////
// Inverse threads
////////////////////////////////////////////////////////////////////////

namespace {

struct Thread {
  Word x;  // input beyond the emitted prefix
  int p;   // state after x
  Word s;  // output beyond the letters read
  auto operator<=>(Thread const&) const = default;
};

// Inverse of f_{A,q}: states are sorted thread lists.
class InverseMachine final : public Machine {
 public:
  InverseMachine(Diagram A, int q) : _a(std::move(A)) {
    if (_a.d() != 1 || _a.range().d != 1 || _a.range().n != _a.n()) {
      throw SignatureMismatch("inverse threads need a (1,n,1,n) machine");
    }
    // Past the first image cone every input stays inside the image.
    WordD const cone = image(_a, q).cones().front();
    std::vector<Thread> ts{{Word(), q, Word()}};
    for (char c : cone[0]) {
      ts = advance(ts, c).first;
    }
    _start = encode(ts);
  }
  Signature domain() const override { return _a.range(); }
  Signature range() const override { return _a.domain(); }
  std::string start() const override { return _start; }
  std::string next(std::string const& s, Generator g) const override {
    return encode(advance(decode(s), static_cast<char>(g.letter)).first);
  }
  WordD out(std::string const& s, Generator g) const override {
    return WordD(_a.n(), {advance(decode(s), static_cast<char>(g.letter)).second});
  }

 private:
  void expand(Thread t, char a, int depth, std::vector<Thread>& out) const {
    if (!t.s.empty()) {
      if (t.s[0] == a) {
        t.s.erase(0, 1);
        out.push_back(std::move(t));
      }
      return;
    }
    if (depth > _a.size()) {
      throw CapExceeded("a cycle of empty outputs");
    }
    for (int b = 0; b < _a.n(); ++b) {
      Thread c{t.x + static_cast<char>(b), _a.next(t.p, b), _a.out(t.p, b)[0]};
      expand(std::move(c), a, depth + 1, out);
    }
  }

  std::pair<std::vector<Thread>, Word> advance(std::vector<Thread> const& ts, char a) const {
    std::vector<Thread> out;
    for (auto const& t : ts) {
      expand(t, a, 0, out);
    }
    if (out.empty()) {
      throw PrefixViolation("input left the image");
    }
    std::size_t common = out.front().x.size();
    for (auto const& t : out) {
      std::size_t i = 0;
      while (i < common && i < t.x.size() && t.x[i] == out.front().x[i]) {
        ++i;
      }
      common = i;
    }
    Word const e = out.front().x.substr(0, common);
    for (auto& t : out) {
      t.x.erase(0, common);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return {std::move(out), e};
  }

  static std::string encode(std::vector<Thread> const& ts) {
    std::string k;
    for (auto const& t : ts) {
      k += digits(t.x) + "/" + std::to_string(t.p) + "/" + digits(t.s) + ";";
    }
    return k;
  }

  std::vector<Thread> decode(std::string const& k) const {
    std::vector<Thread> ts;
    std::size_t i = 0;
    while (i < k.size()) {
      std::size_t const a = k.find('/', i);
      std::size_t const b = k.find('/', a + 1);
      std::size_t const c = k.find(';', b + 1);
      ts.push_back({word_from_digits(k.substr(i, a - i), _a.n()), std::stoi(k.substr(a + 1, b - a - 1)),
                    word_from_digits(k.substr(b + 1, c - b - 1), _a.n())});
      i = c + 1;
    }
    return ts;
  }

  Diagram _a;
  std::string _start;
};

}  // namespace

Handle inverse_handle(Diagram const& A, int q) {
  return std::make_shared<InverseMachine>(A, q);
}

}  // namespace dvn
