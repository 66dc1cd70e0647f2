// words.hpp -- d-dimensional words, cones, clopen sets and prefix codes.

#ifndef DVN_WORDS_HPP_
#define DVN_WORDS_HPP_

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dvn {

/// One coordinate: letters stored as raw byte values 0..n-1.
using Word = std::string;

/// Element of (X_n^*)^d.
class WordD {
 public:
  WordD() = default;
  /// ε_d over alphabet n.
  WordD(int d, int n);
  /// Checks every letter is below n.
  WordD(int n, std::vector<Word> coords);

  static WordD epsilon(int d, int n) { return WordD(d, n); }
  /// The generator x_{d,i}.
  static WordD generator(int d, int n, int coord, int letter);
  /// Parses `(01,1,)`; the number of coordinates fixes d.
  static WordD parse(std::string_view text, int n);

  int dims() const noexcept { return static_cast<int>(_c.size()); }
  int alphabet() const noexcept { return _n; }
  Word const& operator[](int i) const { return _c[static_cast<std::size_t>(i)]; }
  std::vector<Word> const& coords() const noexcept { return _c; }
  bool empty() const noexcept;
  /// Sum of coordinate lengths.
  std::size_t total_length() const noexcept;
  std::size_t max_length() const noexcept;
  std::size_t min_length() const noexcept;

  /// Text form `(01,1,)`.
  std::string str() const;

  void append(int coord, int letter);

  auto operator<=>(WordD const&) const = default;
  bool operator==(WordD const&) const = default;

 private:
  int _n = 2;
  std::vector<Word> _c;
};

/// Word of a single coordinate from a digit string such as "001".
Word word_from_digits(std::string_view digits, int n);
std::string digits(Word const& w);

WordD concat(WordD const& u, WordD const& v);
bool is_prefix(WordD const& u, WordD const& v);
/// r with concat(p, r) == w; throws NotAPrefix.
WordD strip_prefix(WordD const& p, WordD const& w);
/// Coordinatewise longest common prefix; throws EmptySet.
WordD lcp(std::vector<WordD> const& s);
/// True iff the cones u𝔠 and v𝔠 intersect (coordinatewise comparable).
bool cones_meet(WordD const& u, WordD const& v);
/// Coordinatewise longer word; only meaningful when cones_meet(u, v).
WordD join(WordD const& u, WordD const& v);

/// All elements of (X_n^k)^d in lexicographic order.
std::vector<WordD> square_words(int d, int n, int k);

/// A clopen subset of 𝔠_n^d as a normalized disjoint family of cones.
class ConeSet {
 public:
  ConeSet(int d, int n) : _d(d), _n(n) {}
  /// Normalizes an arbitrary (possibly overlapping) family.
  ConeSet(int d, int n, std::vector<WordD> const& family);

  static ConeSet full(int d, int n);

  int dims() const noexcept { return _d; }
  int alphabet() const noexcept { return _n; }
  std::vector<WordD> const& cones() const noexcept { return _cones; }
  std::size_t size() const noexcept { return _cones.size(); }
  bool empty() const noexcept { return _cones.empty(); }
  bool is_full() const;

  /// True iff some cone is a prefix of u.  Exact for square words
  /// at least as deep as every cone.
  bool contains_prefix_of(WordD const& u) const;

  /// The set p·S.
  ConeSet prefixed(WordD const& p) const;
  std::string str() const;

  bool operator==(ConeSet const&) const = default;

 private:
  int _d;
  int _n;
  std::vector<WordD> _cones;
};

ConeSet set_union(ConeSet const& a, ConeSet const& b);
ConeSet set_intersection(ConeSet const& a, ConeSet const& b);
/// Canonical disjoint decomposition of the union of the given cones.
std::vector<WordD> normalize(int d, int n, std::vector<WordD> const& family);
/// |cones| mod (n-1), as a residue in [0, n-1).
int ssig(ConeSet const& s);

/// A validated complete prefix code.
class PrefixCode {
 public:
  int dims() const noexcept { return _d; }
  int alphabet() const noexcept { return _n; }
  std::vector<WordD> const& members() const noexcept { return _m; }
  std::size_t size() const noexcept { return _m.size(); }
  /// Largest coordinate length over the members.
  std::size_t depth() const noexcept;
  /// Index of the member that is a prefix of w, or -1.
  int member_below(WordD const& w) const;

  bool operator==(PrefixCode const&) const = default;

 private:
  friend PrefixCode validate_prefix_code(std::vector<WordD> f);
  int _d = 1;
  int _n = 2;
  std::vector<WordD> _m;
};

/// Throws Overlap or Gap.
PrefixCode validate_prefix_code(std::vector<WordD> f);
bool code_size_realizable(long m, int d, int n);
/// False iff some n members agree except for the final letter of one
/// coordinate.
bool refinement_irreducible(PrefixCode const& f);

/// Split member `index` into its n children in coordinate `coord`.
PrefixCode refine(PrefixCode const& f, std::size_t index, int coord);
/// The code of the given size obtained by repeatedly splitting the least
/// member in coordinate 0.
PrefixCode left_comb(int d, int n, std::size_t size);

}  // namespace dvn

#endif  // DVN_WORDS_HPP_
