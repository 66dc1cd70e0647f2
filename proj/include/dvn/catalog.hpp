// catalog.hpp -- built-in fixtures: the worked machines, codes and maps.

#ifndef DVN_CATALOG_HPP_
#define DVN_CATALOG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dvn/homeo.hpp"
#include "dvn/machine.hpp"
#include "dvn/outer.hpp"
#include "dvn/words.hpp"

namespace dvn {

/// One named fixture; exactly one of the object fields is set.
struct CatalogEntry {
  std::string name;
  std::string note;
  std::optional<Diagram> diagram;
  int base = 0;
  Handle handle;
  std::optional<PrefixExchange> exchange;
  std::optional<PrefixCode> code;
};

/// The five-member code over (3, 2) that is not a refinement of {ε}.
PrefixCode scary_code();
/// F_1 = {0^i 1 : i < n-1} ∪ {0^(n-1)} over alphabet 2.
PrefixCode fig2_code(int n);
/// (1,2,1,n) machine sending the i-th member of F_1 to letter i;
/// states s_0..s_{n-2}.
Diagram fig2_forward(int n);
/// (1,n,1,2) one-state inverse of fig2_forward.
Diagram fig2_backward(int n);
/// Four-state involution over (1,2); states q0, a, c, b.
Diagram fig3_left();
/// Reconstructed as fig3_left.
Diagram fig3_right();
Diagram fig4_B();
/// (1,4,2,2): x -> (x / 2, x mod 2).
Diagram fig5_T();
/// The d! permutation cores over (d, n), in lexicographic order of perms.
std::vector<CoreElement> perm_cores(int d, int n = 2);

/// Base names without parameters.
std::vector<std::string> catalog_names();
/// `name` or `name:arg:...`:
///   fig2_forward:N, fig2_backward:N, fig2_code:N,
///   identity:D:N, perm_core:D:N:CYCLES (e.g. "perm_core:2:2:(0 1)").
/// Throws UnknownEntry.
CatalogEntry catalog_entry(std::string const& spec);

}  // namespace dvn

#endif  // DVN_CATALOG_HPP_
