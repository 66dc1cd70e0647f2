// enumerate.hpp -- bounded enumeration of transducers up to strong
// isomorphism.

#ifndef DVN_ENUMERATE_HPP_
#define DVN_ENUMERATE_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dvn/machine.hpp"
#include "dvn/outer.hpp"

namespace dvn {

/// Filter pipeline; each stage includes all earlier ones.
enum class Stage {
  Valid,
  NonDegenerate,
  Synchronizing,
  Core,
  Minimal,
  CompleteResponse,
  Injective,
  Invertible,
};
constexpr int stage_count = 8;
std::string stage_name(Stage s);
/// Throws ParseError.
Stage parse_stage(std::string const& s);

struct EnumerationSpec {
  int d = 1;
  int n = 2;
  int max_states = 1;
  /// Cap on every output coordinate of every edge.
  int max_output = 2;
  Stage stage = Stage::Valid;
  /// Largest number of full tables the search may materialize.
  std::size_t budget = 20'000'000;
};

/// One representative per strong-isomorphism class passing every stage
/// up to spec.stage, in a fixed order.  From CompleteResponse on,
/// representatives are canonical core forms.  Throws SpecTooLarge.
std::vector<Diagram> enumerate(EnumerationSpec const& spec);
/// The same search forced to at least the Injective stage.
std::vector<CoreElement> enumerate_cores(EnumerationSpec const& spec);

/// Number of classes surviving each stage, in pipeline order up to
/// spec.stage.
std::vector<std::pair<Stage, std::size_t>> census(EnumerationSpec const& spec);

/// Smallest serialization over all state relabelings.
std::string relabel_invariant_key(Diagram const& D);

}  // namespace dvn

#endif  // DVN_ENUMERATE_HPP_
