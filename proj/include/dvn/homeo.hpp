// homeo.hpp -- prefix exchanges, their lazy transducers, membership in
// dV_n, realization of cores, and the built-in infinite machines.

#ifndef DVN_HOMEO_HPP_
#define DVN_HOMEO_HPP_

#include <optional>
#include <random>
#include <vector>

#include "dvn/machine.hpp"
#include "dvn/outer.hpp"

namespace dvn {

/// source.members()[i] is sent to target.members()[bij[i]].
class PrefixExchange {
 public:
  /// Throws InvalidExchange.
  PrefixExchange(PrefixCode source, PrefixCode target, std::vector<std::size_t> bij);

  static PrefixExchange identity(int d, int n);

  PrefixCode const& source() const noexcept { return _src; }
  PrefixCode const& target() const noexcept { return _dst; }
  std::vector<std::size_t> const& bij() const noexcept { return _bij; }
  int dims() const noexcept { return _src.dims(); }
  int alphabet() const noexcept { return _src.alphabet(); }
  /// Image of source member i.
  WordD const& image_of(std::size_t i) const { return _dst.members()[_bij[i]]; }

 private:
  PrefixCode _src;
  PrefixCode _dst;
  std::vector<std::size_t> _bij;
};

/// nullopt means w is too shallow to determine the image.
std::optional<WordD> apply(PrefixExchange const& h, WordD const& w);
/// First g, then h.
PrefixExchange compose_exchanges(PrefixExchange const& g, PrefixExchange const& h);
PrefixExchange invert(PrefixExchange const& h);
/// Same map, checked on both common refinements.
bool same_map(PrefixExchange const& g, PrefixExchange const& h);

/// The baker's map {(0,),(1,)} -> {(,0),(,1)}.
PrefixExchange baker_exchange();
/// Code from `splits` random refinements of {ε}.
PrefixCode random_code(int d, int n, int splits, std::mt19937_64& rng);
/// Random codes of equal size with a random bijection.
PrefixExchange random_exchange(int d, int n, int splits, std::mt19937_64& rng);

/// Output of the state s of T_h on generator g.
WordD exchange_output(PrefixExchange const& h, WordD const& s, Generator g);
/// T_h; states are the words read so far, and every state at or below a
/// source member is the single identity state "T".
Handle machine_of(PrefixExchange const& h);

/// Every state at square level (code depth) outputs its input.
bool is_dvn_member(PrefixExchange const& h);
/// The minimal machine of f_{D,q} has a one-state identity core.
/// Throws NotSynchronizing.
bool is_dvn_member(Diagram const& D, int q);

/// A homeomorphism (D, base) of the whole space whose minimal machine has
/// core strongly isomorphic to P.  Throws SignatureObstruction.
std::pair<Diagram, int> realize(CoreElement const& P, int q = 0);
/// The lazy construction with word states; any dimension.
Handle realize_handle(CoreElement const& P, int q = 0);

/// The baker's map transducer (infinite).
Handle bakers();
/// The (2,2,1,4) machine pairing digits across coordinates.
Handle inverse_digit_pairing_D();

/// Inverse of f_{A,q} restricted to the first cone c of its image: input
/// y stands for c·y.  States are sets of pending preimage threads (d = 1).
Handle inverse_handle(Diagram const& A, int q);

}  // namespace dvn

#endif  // DVN_HOMEO_HPP_
