// outer.hpp -- the core monoid: canonical cores, multiplication, the
// coordinate map, signatures, product decomposition and wreath
// coordinates.

#ifndef DVN_OUTER_HPP_
#define DVN_OUTER_HPP_

#include <optional>
#include <vector>

#include "dvn/machine.hpp"

namespace dvn {

/// A permutation or coordinate map: p[i] is the image of i.
using Perm = std::vector<int>;

Perm perm_identity(int d);
/// Left to right: apply g, then h.
Perm perm_compose(Perm const& g, Perm const& h);
Perm perm_inverse(Perm const& g);
bool is_permutation(Perm const& g);
/// Cycle notation with fixed points omitted; the identity is "()".
std::string perm_str(Perm const& g);
/// Parses cycle notation over {0..d-1}; throws ParseError.
Perm perm_parse(std::string const& text, int d);

/// Canonical representative of a strong-isomorphism class of cores.
class CoreElement {
 public:
  Diagram const& machine() const noexcept { return _m; }
  int d() const noexcept { return _m.d(); }
  int n() const noexcept { return _m.n(); }
  int size() const noexcept { return _m.size(); }
  bool operator==(CoreElement const& o) const { return _m == o._m; }

 private:
  explicit CoreElement(Diagram m) : _m(std::move(m)) {}
  friend CoreElement canonicalize_core(Diagram const& D);
  Diagram _m;
};

/// core -> complete response -> minimize -> relabel by BFS from the
/// state reached on the all-zero square word at the synchronizing level.
CoreElement canonicalize(Diagram const& D);
/// As canonicalize, for a machine already equal to its own core.
CoreElement canonicalize_core(Diagram const& D);

CoreElement core_identity(int d, int n);
CoreElement multiply(CoreElement const& A, CoreElement const& B);
bool is_identity(CoreElement const& A);

/// (i)psi is the unique range coordinate fed by coordinate-i inputs.
/// Throws Inconsistent.
Perm psi(CoreElement const& A);
bool in_dK(CoreElement const& A);

/// Throws DecompositionMismatch (including for inputs outside dK).
std::vector<CoreElement> decompose(CoreElement const& A);
CoreElement recompose(std::vector<CoreElement> const& factors);

/// ssig of the image at the base state, as a residue in [0, n-1).
int sig(CoreElement const& A);

/// The one-state core with out(0, x_{d,i}) = x_{d,(i)g}; psi of it is g.
CoreElement permutation_core(Perm const& g, int n);

struct WreathCoordinates {
  std::vector<CoreElement> factors;
  Perm perm;
  bool operator==(WreathCoordinates const&) const = default;
};
/// A = recompose(factors) * permutation_core(perm).  Throws NotInvertible
/// when psi is not a bijection.
WreathCoordinates wreath_coordinates(CoreElement const& A);
/// Inverse of wreath_coordinates.
CoreElement from_wreath(WreathCoordinates const& w);
/// The wreath law: factors_i(ab) = factors_i(a) * factors_{(i)g_a}(b),
/// perm(ab) = g_a g_b.
WreathCoordinates wreath_multiply(WreathCoordinates const& a, WreathCoordinates const& b);

/// The inverse with at most max_states states, or nullopt.
/// max_states < 0 selects |Q_A| + 2.
std::optional<CoreElement> find_inverse(CoreElement const& A, int max_states = -1);

}  // namespace dvn

#endif  // DVN_OUTER_HPP_
