// words.cpp -- d-dimensional words, cones, clopen sets and prefix codes.

#include "dvn/words.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "dvn/error.hpp"

namespace dvn {

namespace {

void check_alphabet(int n) {
  if (n < 2) {
    throw InvalidWord("alphabet size " + std::to_string(n) + " < 2");
  }
}

void check_same(WordD const& u, WordD const& v) {
  if (u.dims() != v.dims() || u.alphabet() != v.alphabet()) {
    throw SignatureMismatch("words " + u.str() + " and " + v.str());
  }
}

bool word_prefix(Word const& a, Word const& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

}  // namespace

////////////////////////////////////////////////////////////////////////
// WordD
////////////////////////////////////////////////////////////////////////

WordD::WordD(int d, int n) : _n(n), _c(static_cast<std::size_t>(d)) {
  check_alphabet(n);
  if (d < 1) {
    throw InvalidWord("dimension " + std::to_string(d) + " < 1");
  }
}

WordD::WordD(int n, std::vector<Word> coords) : _n(n), _c(std::move(coords)) {
  check_alphabet(n);
  if (_c.empty()) {
    throw InvalidWord("dimension 0");
  }
  for (auto const& w : _c) {
    for (unsigned char x : w) {
      if (x >= n) {
        throw InvalidWord("letter " + std::to_string(x) + " not below "
                          + std::to_string(n));
      }
    }
  }
}

WordD WordD::generator(int d, int n, int coord, int letter) {
  WordD w(d, n);
  w.append(coord, letter);
  return w;
}

WordD WordD::parse(std::string_view text, int n) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw ParseError("word '" + std::string(text) + "' must be parenthesized");
  }
  if (n > 10) {
    throw ParseError("text words need n <= 10");
  }
  std::vector<Word> coords(1);
  for (char ch : text.substr(1, text.size() - 2)) {
    if (ch == ',') {
      coords.emplace_back();
    } else if (ch >= '0' && ch <= '9' && ch - '0' < n) {
      coords.back().push_back(static_cast<char>(ch - '0'));
    } else {
      throw ParseError("bad letter '" + std::string(1, ch) + "' in '"
                       + std::string(text) + "'");
    }
  }
  return WordD(n, std::move(coords));
}

bool WordD::empty() const noexcept {
  return std::all_of(_c.begin(), _c.end(), [](Word const& w) { return w.empty(); });
}

std::size_t WordD::total_length() const noexcept {
  std::size_t t = 0;
  for (auto const& w : _c) {
    t += w.size();
  }
  return t;
}

std::size_t WordD::max_length() const noexcept {
  std::size_t t = 0;
  for (auto const& w : _c) {
    t = std::max(t, w.size());
  }
  return t;
}

std::size_t WordD::min_length() const noexcept {
  std::size_t t = _c.empty() ? 0 : _c.front().size();
  for (auto const& w : _c) {
    t = std::min(t, w.size());
  }
  return t;
}

std::string WordD::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < _c.size(); ++i) {
    if (i > 0) {
      s += ',';
    }
    s += digits(_c[i]);
  }
  return s + ")";
}

void WordD::append(int coord, int letter) {
  if (coord < 0 || coord >= dims() || letter < 0 || letter >= _n) {
    throw InvalidWord("generator " + std::to_string(letter) + "@"
                      + std::to_string(coord) + " out of range");
  }
  _c[static_cast<std::size_t>(coord)].push_back(static_cast<char>(letter));
}

Word word_from_digits(std::string_view text, int n) {
  Word w;
  for (char ch : text) {
    if (ch < '0' || ch > '9' || ch - '0' >= n) {
      throw ParseError("bad letter '" + std::string(1, ch) + "' in '"
                       + std::string(text) + "'");
    }
    w.push_back(static_cast<char>(ch - '0'));
  }
  return w;
}

std::string digits(Word const& w) {
  std::string s;
  for (unsigned char x : w) {
    if (x < 10) {
      s.push_back(static_cast<char>('0' + x));
    } else {
      s += "[" + std::to_string(x) + "]";
    }
  }
  return s;
}

////////////////////////////////////////////////////////////////////////
// Word algebra
////////////////////////////////////////////////////////////////////////

WordD concat(WordD const& u, WordD const& v) {
  check_same(u, v);
  std::vector<Word> c = u.coords();
  for (int i = 0; i < u.dims(); ++i) {
    c[static_cast<std::size_t>(i)] += v[i];
  }
  return WordD(u.alphabet(), std::move(c));
}

bool is_prefix(WordD const& u, WordD const& v) {
  check_same(u, v);
  for (int i = 0; i < u.dims(); ++i) {
    if (!word_prefix(u[i], v[i])) {
      return false;
    }
  }
  return true;
}

WordD strip_prefix(WordD const& p, WordD const& w) {
  if (!is_prefix(p, w)) {
    throw NotAPrefix(p.str() + " is not a prefix of " + w.str());
  }
  std::vector<Word> c(static_cast<std::size_t>(w.dims()));
  for (int i = 0; i < w.dims(); ++i) {
    c[static_cast<std::size_t>(i)] = w[i].substr(p[i].size());
  }
  return WordD(w.alphabet(), std::move(c));
}

WordD lcp(std::vector<WordD> const& s) {
  if (s.empty()) {
    throw EmptySet("lcp of the empty set");
  }
  std::vector<Word> c = s.front().coords();
  for (auto const& w : s) {
    check_same(s.front(), w);
    for (int i = 0; i < w.dims(); ++i) {
      auto& a = c[static_cast<std::size_t>(i)];
      auto const& b = w[i];
      std::size_t j = 0;
      while (j < a.size() && j < b.size() && a[j] == b[j]) {
        ++j;
      }
      a.resize(j);
    }
  }
  return WordD(s.front().alphabet(), std::move(c));
}

bool cones_meet(WordD const& u, WordD const& v) {
  check_same(u, v);
  for (int i = 0; i < u.dims(); ++i) {
    if (!word_prefix(u[i], v[i]) && !word_prefix(v[i], u[i])) {
      return false;
    }
  }
  return true;
}

WordD join(WordD const& u, WordD const& v) {
  std::vector<Word> c(static_cast<std::size_t>(u.dims()));
  for (int i = 0; i < u.dims(); ++i) {
    c[static_cast<std::size_t>(i)] = u[i].size() >= v[i].size() ? u[i] : v[i];
  }
  return WordD(u.alphabet(), std::move(c));
}

std::vector<WordD> square_words(int d, int n, int k) {
  std::vector<WordD> out;
  std::size_t const total = static_cast<std::size_t>(d) * static_cast<std::size_t>(k);
  std::vector<int> digit(total, 0);
  while (true) {
    std::vector<Word> c(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < total; ++j) {
      c[j / static_cast<std::size_t>(k)].push_back(static_cast<char>(digit[j]));
    }
    out.emplace_back(n, std::move(c));
    std::size_t j = total;
    while (j > 0 && digit[j - 1] == n - 1) {
      digit[--j] = 0;
    }
    if (j == 0) {
      break;
    }
    ++digit[j - 1];
  }
  if (total == 0) {
    out.assign(1, WordD(d, n));
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Normal form of clopen sets
////////////////////////////////////////////////////////////////////////

namespace {

// Canonical decomposition of the union of `family`, looking only at
// coordinates >= c (coordinates below c are empty in every member).
// Coordinate c is split as a trie; a node becomes a leaf exactly when
// the section over its cone is constant, which makes the result depend
// only on the set.
std::vector<WordD> canon_from(int c, int d, int n, std::vector<WordD> const& family);

struct TrieNode {
  bool leaf = false;
  std::vector<WordD> section;  // for leaves
  std::vector<TrieNode> kids;  // otherwise
};

TrieNode trie(int c, int d, int n, Word const& w, std::vector<WordD> const& rel) {
  bool deeper = false;
  for (auto const& u : rel) {
    if (u[c].size() > w.size()) {
      deeper = true;
      break;
    }
  }
  TrieNode node;
  if (!deeper) {
    std::vector<WordD> tails;
    tails.reserve(rel.size());
    for (auto const& u : rel) {
      std::vector<Word> cc = u.coords();
      cc[static_cast<std::size_t>(c)].clear();
      tails.emplace_back(n, std::move(cc));
    }
    node.leaf = true;
    node.section = canon_from(c + 1, d, n, tails);
    return node;
  }
  node.kids.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    Word wx = w;
    wx.push_back(static_cast<char>(x));
    std::vector<WordD> sub;
    for (auto const& u : rel) {
      if (word_prefix(u[c], wx) || word_prefix(wx, u[c])) {
        sub.push_back(u);
      }
    }
    node.kids.push_back(trie(c, d, n, wx, sub));
  }
  bool same = true;
  for (auto const& k : node.kids) {
    if (!k.leaf || k.section != node.kids.front().section) {
      same = false;
      break;
    }
  }
  if (same) {
    node.leaf = true;
    node.section = node.kids.front().section;
    node.kids.clear();
  }
  return node;
}

void flatten(TrieNode const& node, int c, int n, Word const& w, std::vector<WordD>& out) {
  if (node.leaf) {
    for (auto const& s : node.section) {
      std::vector<Word> cc = s.coords();
      cc[static_cast<std::size_t>(c)] = w;
      out.emplace_back(n, std::move(cc));
    }
    return;
  }
  for (int x = 0; x < n; ++x) {
    Word wx = w;
    wx.push_back(static_cast<char>(x));
    flatten(node.kids[static_cast<std::size_t>(x)], c, n, wx, out);
  }
}

// One-dimensional merge: the maximal cones of a 1D set are unique.
std::vector<WordD> canon_last(int c, int n, std::vector<WordD> const& family) {
  std::set<Word> words;
  for (auto const& u : family) {
    words.insert(u[c]);
  }
  // drop words having a proper prefix in the set
  std::set<Word> minimal;
  for (auto const& w : words) {
    bool dominated = false;
    for (std::size_t l = 0; l < w.size() && !dominated; ++l) {
      dominated = minimal.count(w.substr(0, l)) > 0;
    }
    if (!dominated) {
      minimal.insert(w);
    }
  }
  // Merge complete sibling groups, longest words first.
  std::size_t longest = 0;
  for (auto const& w : minimal) {
    longest = std::max(longest, w.size());
  }
  for (std::size_t l = longest; l > 0; --l) {
    std::map<Word, int> kids;
    for (auto const& w : minimal) {
      if (w.size() == l) {
        ++kids[w.substr(0, l - 1)];
      }
    }
    for (auto const& [parent, count] : kids) {
      if (count == n) {
        for (int x = 0; x < n; ++x) {
          minimal.erase(parent + static_cast<char>(x));
        }
        minimal.insert(parent);
      }
    }
  }
  std::vector<WordD> out;
  int const d = family.front().dims();
  for (auto const& w : minimal) {
    WordD u(d, n);
    std::vector<Word> cc = u.coords();
    cc[static_cast<std::size_t>(c)] = w;
    out.emplace_back(n, std::move(cc));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<WordD> canon_from(int c, int d, int n, std::vector<WordD> const& family) {
  if (family.empty()) {
    return {};
  }
  for (auto const& u : family) {
    bool eps = true;
    for (int i = c; i < d && eps; ++i) {
      eps = u[i].empty();
    }
    if (eps) {
      return {WordD(d, n)};
    }
  }
  if (c == d - 1) {
    return canon_last(c, n, family);
  }
  TrieNode root = trie(c, d, n, Word(), family);
  std::vector<WordD> out;
  flatten(root, c, n, Word(), out);
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic greedy sibling merge to a fixpoint.
std::vector<WordD> merge_siblings(int d, int n, std::vector<WordD> const& cones) {
  std::set<WordD> s(cones.begin(), cones.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto const& u : s) {
      for (int i = 0; i < d && !changed; ++i) {
        if (u[i].empty()) {
          continue;
        }
        std::vector<Word> pc = u.coords();
        pc[static_cast<std::size_t>(i)].pop_back();
        std::vector<WordD> kids;
        for (int x = 0; x < n; ++x) {
          std::vector<Word> kc = pc;
          kc[static_cast<std::size_t>(i)].push_back(static_cast<char>(x));
          kids.emplace_back(n, std::move(kc));
        }
        if (std::all_of(kids.begin(), kids.end(),
                        [&](WordD const& k) { return s.count(k) > 0; })) {
          for (auto const& k : kids) {
            s.erase(k);
          }
          s.insert(WordD(n, std::move(pc)));
          changed = true;
        }
      }
      if (changed) {
        break;
      }
    }
  }
  return {s.begin(), s.end()};
}

}  // namespace

std::vector<WordD> normalize(int d, int n, std::vector<WordD> const& family) {
  for (auto const& u : family) {
    if (u.dims() != d || u.alphabet() != n) {
      throw SignatureMismatch("cone " + u.str() + " in a set over (" + std::to_string(d)
                              + "," + std::to_string(n) + ")");
    }
  }
  if (d == 1) {
    return canon_from(0, d, n, family);
  }
  return merge_siblings(d, n, canon_from(0, d, n, family));
}

////////////////////////////////////////////////////////////////////////
// ConeSet
////////////////////////////////////////////////////////////////////////

ConeSet::ConeSet(int d, int n, std::vector<WordD> const& family)
    : _d(d), _n(n), _cones(normalize(d, n, family)) {}

ConeSet ConeSet::full(int d, int n) {
  return ConeSet(d, n, {WordD(d, n)});
}

bool ConeSet::is_full() const {
  return _cones.size() == 1 && _cones.front().empty();
}

bool ConeSet::contains_prefix_of(WordD const& u) const {
  return std::any_of(_cones.begin(), _cones.end(),
                     [&](WordD const& c) { return is_prefix(c, u); });
}

ConeSet ConeSet::prefixed(WordD const& p) const {
  if (p.dims() != _d || p.alphabet() != _n) {
    throw SignatureMismatch("prefix " + p.str());
  }
  std::vector<WordD> f;
  f.reserve(_cones.size());
  for (auto const& c : _cones) {
    f.push_back(concat(p, c));
  }
  return ConeSet(_d, _n, f);
}

std::string ConeSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < _cones.size(); ++i) {
    s += (i > 0 ? "," : "") + _cones[i].str();
  }
  return s + "}";
}

ConeSet set_union(ConeSet const& a, ConeSet const& b) {
  if (a.dims() != b.dims() || a.alphabet() != b.alphabet()) {
    throw SignatureMismatch("union of sets over different spaces");
  }
  std::vector<WordD> f = a.cones();
  f.insert(f.end(), b.cones().begin(), b.cones().end());
  return ConeSet(a.dims(), a.alphabet(), f);
}

ConeSet set_intersection(ConeSet const& a, ConeSet const& b) {
  if (a.dims() != b.dims() || a.alphabet() != b.alphabet()) {
    throw SignatureMismatch("intersection of sets over different spaces");
  }
  std::vector<WordD> f;
  for (auto const& u : a.cones()) {
    for (auto const& v : b.cones()) {
      if (cones_meet(u, v)) {
        f.push_back(join(u, v));
      }
    }
  }
  return ConeSet(a.dims(), a.alphabet(), f);
}

int ssig(ConeSet const& s) {
  int const m = s.alphabet() - 1;
  return static_cast<int>(s.size() % static_cast<std::size_t>(m));
}

////////////////////////////////////////////////////////////////////////
// Prefix codes
////////////////////////////////////////////////////////////////////////

namespace {

// Exact cover check of w𝔠 by the members in `rel`; splits only along
// coordinates where some member is deeper than w.
void check_cover(WordD const& w, std::vector<WordD> const& rel) {
  std::vector<WordD> below;
  for (auto const& u : rel) {
    if (is_prefix(u, w)) {
      below.push_back(u);
    }
  }
  if (below.size() >= 2) {
    throw Overlap("members " + below[0].str() + " and " + below[1].str() + " meet");
  }
  if (below.size() == 1) {
    for (auto const& u : rel) {
      if (u != below.front()) {
        throw Overlap("members " + below.front().str() + " and " + u.str() + " meet");
      }
    }
    return;
  }
  if (rel.empty()) {
    throw Gap("no member covers the cone " + w.str());
  }
  int coord = -1;
  for (int i = 0; i < w.dims() && coord < 0; ++i) {
    for (auto const& u : rel) {
      if (u[i].size() > w[i].size()) {
        coord = i;
        break;
      }
    }
  }
  for (int x = 0; x < w.alphabet(); ++x) {
    WordD wx = w;
    wx.append(coord, x);
    std::vector<WordD> sub;
    for (auto const& u : rel) {
      if (cones_meet(u, wx)) {
        sub.push_back(u);
      }
    }
    check_cover(wx, sub);
  }
}

}  // namespace

std::size_t PrefixCode::depth() const noexcept {
  std::size_t k = 0;
  for (auto const& u : _m) {
    k = std::max(k, u.max_length());
  }
  return k;
}

int PrefixCode::member_below(WordD const& w) const {
  for (std::size_t i = 0; i < _m.size(); ++i) {
    if (is_prefix(_m[i], w)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

PrefixCode validate_prefix_code(std::vector<WordD> f) {
  if (f.empty()) {
    throw EmptySet("empty prefix code");
  }
  for (auto const& u : f) {
    if (u.dims() != f.front().dims() || u.alphabet() != f.front().alphabet()) {
      throw SignatureMismatch("members " + f.front().str() + " and " + u.str());
    }
  }
  std::sort(f.begin(), f.end());
  auto dup = std::adjacent_find(f.begin(), f.end());
  if (dup != f.end()) {
    throw Overlap("member " + dup->str() + " listed twice");
  }
  int const n = f.front().alphabet();
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (cones_meet(f[i], f[j])) {
        throw Overlap("members " + f[i].str() + " and " + f[j].str() + " meet");
      }
    }
  }
  // Disjoint cones cover everything iff their measures sum to 1.
  std::size_t deepest = 0;
  for (auto const& u : f) {
    deepest = std::max(deepest, u.total_length());
  }
  unsigned __int128 whole = 1;
  bool exact = true;
  for (std::size_t l = 0; l < deepest && exact; ++l) {
    exact = whole <= (~static_cast<unsigned __int128>(0)) / static_cast<unsigned>(n) / f.size();
    whole *= static_cast<unsigned>(n);
  }
  if (exact) {
    unsigned __int128 sum = 0;
    for (auto const& u : f) {
      unsigned __int128 w = 1;
      for (std::size_t l = u.total_length(); l < deepest; ++l) {
        w *= static_cast<unsigned>(n);
      }
      sum += w;
    }
    if (sum != whole) {
      check_cover(WordD(f.front().dims(), n), f);  // names the gap
      throw Gap("members do not cover the space");
    }
  } else {
    check_cover(WordD(f.front().dims(), n), f);
  }
  PrefixCode code;
  code._d = f.front().dims();
  code._n = f.front().alphabet();
  code._m = std::move(f);
  return code;
}

bool code_size_realizable(long m, int d, int n) {
  (void) d;
  if (m < 1 || n < 2) {
    return false;
  }
  return (m - 1) % (n - 1) == 0;
}

bool refinement_irreducible(PrefixCode const& f) {
  std::set<WordD> s(f.members().begin(), f.members().end());
  for (auto const& u : f.members()) {
    for (int i = 0; i < u.dims(); ++i) {
      if (u[i].empty()) {
        continue;
      }
      std::vector<Word> pc = u.coords();
      pc[static_cast<std::size_t>(i)].pop_back();
      bool all = true;
      for (int x = 0; x < u.alphabet() && all; ++x) {
        std::vector<Word> kc = pc;
        kc[static_cast<std::size_t>(i)].push_back(static_cast<char>(x));
        all = s.count(WordD(u.alphabet(), std::move(kc))) > 0;
      }
      if (all) {
        return false;
      }
    }
  }
  return true;
}

PrefixCode refine(PrefixCode const& f, std::size_t index, int coord) {
  std::vector<WordD> m = f.members();
  WordD u = m.at(index);
  m.erase(m.begin() + static_cast<std::ptrdiff_t>(index));
  for (int x = 0; x < f.alphabet(); ++x) {
    WordD ux = u;
    ux.append(coord, x);
    m.push_back(std::move(ux));
  }
  return validate_prefix_code(std::move(m));
}

PrefixCode left_comb(int d, int n, std::size_t size) {
  if (!code_size_realizable(static_cast<long>(size), d, n)) {
    throw SignatureObstruction("no complete prefix code has " + std::to_string(size)
                               + " members over alphabet " + std::to_string(n));
  }
  PrefixCode code = validate_prefix_code({WordD(d, n)});
  while (code.size() < size) {
    code = refine(code, 0, 0);
  }
  return code;
}

}  // namespace dvn
