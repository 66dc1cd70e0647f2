// machine.hpp -- (d,n,k,m)-transducers: diagrams, lazy handles and the
// algorithms acting on them.
//
// Composition is left to right: compose(A, B) first applies A, then B.

#ifndef DVN_MACHINE_HPP_
#define DVN_MACHINE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dvn/words.hpp"

namespace dvn {

/// (dimension, alphabet size) of a domain or range.
struct Signature {
  int d = 1;
  int n = 2;
  bool operator==(Signature const&) const = default;
};

/// The generator x_{d,i}: `letter` in coordinate `coord`.
struct Generator {
  int coord = 0;
  int letter = 0;
};

/// Raw per-state, per-generator tables.  Generator g = coord * n + letter.
struct Tables {
  Signature domain;
  Signature range;
  int states = 0;
  std::vector<int> next;    // [q * gens + g]
  std::vector<WordD> out;   // [q * gens + g], over the range signature
  std::vector<std::string> names;  // optional; empty means "0", "1", ...
};

/// A finite transducer.  Constructing one checks shapes only; use
/// validate() to also check cross-coordinate coherence.
class Diagram {
 public:
  explicit Diagram(Tables t);

  Signature domain() const noexcept { return _t.domain; }
  Signature range() const noexcept { return _t.range; }
  int d() const noexcept { return _t.domain.d; }
  int n() const noexcept { return _t.domain.n; }
  int size() const noexcept { return _t.states; }
  int gens() const noexcept { return _t.domain.d * _t.domain.n; }
  int gen_index(int coord, int letter) const noexcept { return coord * n() + letter; }
  Generator gen(int g) const noexcept { return {g / n(), g % n()}; }

  int next(int q, int g) const { return _t.next[static_cast<std::size_t>(q * gens() + g)]; }
  WordD const& out(int q, int g) const {
    return _t.out[static_cast<std::size_t>(q * gens() + g)];
  }
  std::string name(int q) const;
  /// Index of the state with this name; throws InvalidTable.
  int state(std::string const& name) const;
  Tables const& tables() const noexcept { return _t; }

  /// Table equality; state names are ignored.
  bool operator==(Diagram const& other) const;

 private:
  Tables _t;
};

/// Throws IncoherentTransition / IncoherentOutput naming the state and
/// the pair of generators, e.g. "at state a, gens (0@0, 1@1)".
Diagram validate(Tables t);

/// The one-state identity over (d, n).
Diagram identity(int d, int n);
/// Rename states: state q becomes perm[q].
Diagram relabel(Diagram const& D, std::vector<int> const& perm);
/// Subtransducer on a transition-closed set of states (listed in order).
std::pair<Diagram, std::vector<int>> restrict_to(Diagram const& D, std::vector<int> const& keep);
/// States reachable from q, in BFS order over generators.
std::vector<int> reachable(Diagram const& D, int q);
bool is_identity_state(Diagram const& D, int q);
bool strongly_connected(Diagram const& D);

/// Fold over the generators of w, coordinate 0's letters first.
std::pair<int, WordD> run(Diagram const& D, int q, WordD const& w);
WordD eval_prefix(Diagram const& D, int q, WordD const& w);

/// One letter in every domain coordinate; index u encodes the letters in
/// base n with coordinate 0 most significant.
struct SquareTable {
  int letters = 0;
  std::vector<int> next;
  std::vector<WordD> out;
};
SquareTable square_table(Diagram const& D);

bool is_nondegenerate(Diagram const& D);
Diagram compose(Diagram const& A, Diagram const& B);
/// States of compose(A, B) reachable from (a, b); pair (a, b) maps to
/// the returned index of the second component.
std::pair<Diagram, std::vector<std::pair<int, int>>> compose_from(Diagram const& A, Diagram const& B,
                                                                  int a, int b);
/// Signatures concatenate; factor i occupies coordinates offset_i..offset_i+d_i-1
/// of the domain and range.  State index is mixed radix, factor 0 most
/// significant.
Diagram product(std::vector<Diagram> const& factors);

struct Minimized {
  Diagram machine;
  std::vector<int> map;  // old state -> class
};
/// Moore refinement; class numbers follow the first state of each class.
Minimized minimize(Diagram const& D);

constexpr int default_depth_cap = 64;
/// Greatest-fixpoint image of every state.  Throws CapExceeded.
std::vector<ConeSet> images(Diagram const& D, int depth_cap = default_depth_cap);
ConeSet image(Diagram const& D, int q, int depth_cap = default_depth_cap);
/// Throws CapExceeded, PrefixViolation.
Diagram complete_response(Diagram const& D, int depth_cap = default_depth_cap);

enum class Verdict { Yes, No, Unknown };
struct Injectivity {
  Verdict verdict = Verdict::Unknown;
  /// For No: the inputs (left_prefix left_cycle^ω) and
  /// (right_prefix right_cycle^ω) differ and have equal images.
  WordD left_prefix, left_cycle, right_prefix, right_cycle;
};
/// offset_cap < 0 selects |Q|^2 * (1 + longest output).
Injectivity injectivity(Diagram const& D, int q, long offset_cap = -1);

/// nullopt means not synchronizing.
std::optional<int> synchronizing_level(Diagram const& D);
/// States 𝔰(u) for u at the synchronizing level; throws NotSynchronizing.
std::vector<int> core_states(Diagram const& D);
Diagram core(Diagram const& D);
/// Bijection Q_A -> Q_B, or nullopt.  Throws NotCore unless both
/// machines are strongly connected.
std::optional<std::vector<int>> strong_iso(Diagram const& A, Diagram const& B);

/// Restrict to states reachable from q, remove incomplete response,
/// minimize.  Returns the machine and the image of q.
std::pair<Diagram, int> minimal_for_homeomorphism(Diagram const& D, int q,
                                                  int depth_cap = default_depth_cap);

////////////////////////////////////////////////////////////////////////
// Lazy machines
////////////////////////////////////////////////////////////////////////

/// Uniform interface over finite diagrams and infinite machines whose
/// states are identified by opaque keys.
class Machine {
 public:
  virtual ~Machine() = default;
  virtual Signature domain() const = 0;
  virtual Signature range() const = 0;
  /// The distinguished base state.
  virtual std::string start() const = 0;
  virtual std::string next(std::string const& state, Generator g) const = 0;
  virtual WordD out(std::string const& state, Generator g) const = 0;
  /// Human-readable form of a state key.
  virtual std::string describe(std::string const& state) const { return state; }
};

using Handle = std::shared_ptr<Machine const>;

/// Keys are decimal state indices; `base` is the start state.
Handle as_handle(Diagram D, int base = 0);
Handle compose(Handle A, Handle B);
Handle product(std::vector<Handle> factors);

std::pair<std::string, WordD> run(Handle const& M, std::string const& state, WordD const& w);
WordD eval_prefix(Handle const& M, std::string const& state, WordD const& w);

/// Breadth-first materialization of the states reachable from `state`;
/// throws BoundExceeded past `bound` states.  The start state is 0.
Diagram explore(Handle const& M, std::string const& state, std::size_t bound);
std::pair<Diagram, int> minimal_for_homeomorphism(Handle const& M, std::string const& state,
                                                  std::size_t bound,
                                                  int depth_cap = default_depth_cap);

/// Number of behaviourally distinct states among π(state, w) for all w
/// with every coordinate of length <= depth, where distinctness is
/// witnessed by a probe word of total length <= depth + 4.
std::size_t distinct_states_lower_bound(Handle const& M, std::string const& state, int depth);

/// Length-prefixed pair encoding used by composite keys.
std::string pair_key(std::string const& a, std::string const& b);
std::pair<std::string, std::string> split_key(std::string const& key);

}  // namespace dvn

#endif  // DVN_MACHINE_HPP_
