// io.hpp -- MachineFile JSON, DOT export and argument loading for the CLI.

#ifndef DVN_TOOLS_IO_HPP_
#define DVN_TOOLS_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvn/catalog.hpp"

namespace dvn::io {

/// A loaded argument: a finite machine with a base state, a lazy
/// machine, an exchange or a code.
struct Loaded {
  std::string source;
  std::optional<Diagram> diagram;
  int base = 0;
  Handle handle;
  std::optional<PrefixExchange> exchange;
  std::optional<PrefixCode> code;
};

nlohmann::json to_json(Diagram const& D, int base = 0);
/// Throws ParseError on malformed files and the validate() errors on
/// incoherent ones.
std::pair<Diagram, int> from_json(nlohmann::json const& j);

/// Graphviz digraph with edges labeled x_{coord,letter}/output.
std::string to_dot(Diagram const& D, int base, std::string const& title);
/// The first `limit` states of a lazy machine; edges leaving the explored
/// part end at a dashed "..." node.
std::string to_dot(Handle const& M, std::size_t limit, std::string const& title);
/// Root with one edge per member.
std::string to_dot(PrefixCode const& c, std::string const& title);

/// Output word text with ε for empty coordinates.
std::string word_label(WordD const& w);
/// "(01,1)" or, for one coordinate, plain digits.
WordD parse_word(std::string const& text, int d, int n);

/// Reads the stdin once for "-"; later requests reuse the text.
class Loader {
 public:
  explicit Loader(std::istream& in) : _in(in) {}
  /// `catalog:NAME`, `-`, or a path.  A JSON array yields one entry per
  /// element.  Throws ParseError, UnknownEntry.
  std::vector<Loaded> load_all(std::string const& arg);
  /// Exactly one object.
  Loaded load(std::string const& arg);
  /// Exactly one finite machine.
  Loaded load_diagram(std::string const& arg);

 private:
  std::string text_of(std::string const& arg);
  std::istream& _in;
  std::optional<std::string> _stdin;
};

}  // namespace dvn::io

#endif  // DVN_TOOLS_IO_HPP_
