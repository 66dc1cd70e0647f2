// catalog.cpp -- built-in fixtures.

#include <algorithm>
#include <numeric>

#include "dvn/catalog.hpp"
#include "dvn/error.hpp"

namespace dvn {

namespace {

struct Edge {
  int to;
  char const* out;  // digits
};

// One-dimensional machine from rows of per-letter edges.
Diagram rows_1d(int n, int m, std::vector<std::string> names, std::vector<std::vector<Edge>> const& rows) {
  Tables t;
  t.domain = {1, n};
  t.range = {1, m};
  t.states = static_cast<int>(rows.size());
  t.names = std::move(names);
  for (auto const& row : rows) {
    for (auto const& e : row) {
      t.next.push_back(e.to);
      t.out.emplace_back(m, std::vector<Word>{word_from_digits(e.out, m)});
    }
  }
  return validate(std::move(t));
}

int parse_int(std::string const& s, std::string const& spec) {
  try {
    std::size_t used = 0;
    int const v = std::stoi(s, &used);
    if (used == s.size()) {
      return v;
    }
  } catch (std::exception const&) {
  }
  throw UnknownEntry("bad parameter '" + s + "' in " + spec);
}

}  // namespace

PrefixCode scary_code() {
  std::vector<WordD> m;
  for (char const* w : {"(,0,0)", "(0,1,)", "(1,,1)", "(0,0,1)", "(1,1,0)"}) {
    m.push_back(WordD::parse(w, 2));
  }
  return validate_prefix_code(std::move(m));
}

PrefixCode fig2_code(int n) {
  if (n < 2) {
    throw InvalidWord("alphabet size " + std::to_string(n));
  }
  std::vector<WordD> m;
  for (int i = 0; i < n - 1; ++i) {
    m.emplace_back(2, std::vector<Word>{Word(static_cast<std::size_t>(i), '\0') + '\1'});
  }
  m.emplace_back(2, std::vector<Word>{Word(static_cast<std::size_t>(n - 1), '\0')});
  return validate_prefix_code(std::move(m));
}

Diagram fig2_forward(int n) {
  if (n < 2) {
    throw InvalidWord("alphabet size " + std::to_string(n));
  }
  Tables t;
  t.domain = {1, 2};
  t.range = {1, n};
  t.states = n - 1;
  for (int i = 0; i < n - 1; ++i) {
    t.names.push_back("s" + std::to_string(i));
    if (i == n - 2) {
      t.next.push_back(0);
      t.out.emplace_back(n, std::vector<Word>{Word(1, static_cast<char>(n - 1))});
    } else {
      t.next.push_back(i + 1);
      t.out.emplace_back(1, n);
    }
    t.next.push_back(0);
    t.out.emplace_back(n, std::vector<Word>{Word(1, static_cast<char>(i))});
  }
  return validate(std::move(t));
}

Diagram fig2_backward(int n) {
  if (n < 2) {
    throw InvalidWord("alphabet size " + std::to_string(n));
  }
  Tables t;
  t.domain = {1, n};
  t.range = {1, 2};
  t.states = 1;
  for (int i = 0; i < n; ++i) {
    Word w(static_cast<std::size_t>(i), '\0');
    if (i < n - 1) {
      w += '\1';
    }
    t.next.push_back(0);
    t.out.emplace_back(2, std::vector<Word>{w});
  }
  return validate(std::move(t));
}

Diagram fig3_left() {
  // q0=0, a=1, c=2, b=3
  return rows_1d(2, 2, {"q0", "a", "c", "b"},
                 {{{1, "0"}, {0, "1"}},
                  {{2, ""}, {0, "01"}},
                  {{3, "00"}, {0, "1"}},
                  {{3, "0"}, {0, "1"}}});
}

Diagram fig3_right() {
  return fig3_left();
}

Diagram fig4_B() {
  return product({fig3_left(), fig3_right()});
}

Diagram fig5_T() {
  Tables t;
  t.domain = {1, 4};
  t.range = {2, 2};
  t.states = 1;
  for (int x = 0; x < 4; ++x) {
    t.next.push_back(0);
    t.out.emplace_back(2, std::vector<Word>{Word(1, static_cast<char>(x / 2)), Word(1, static_cast<char>(x % 2))});
  }
  return validate(std::move(t));
}

std::vector<CoreElement> perm_cores(int d, int n) {
  std::vector<CoreElement> out;
  Perm g = perm_identity(d);
  do {
    out.push_back(permutation_core(g, n));
  } while (std::next_permutation(g.begin(), g.end()));
  return out;
}

std::vector<std::string> catalog_names() {
  return {"scary_code", "fig2_code",    "fig2_forward", "fig2_backward",  "fig3_left",
          "fig3_right", "fig4_B",       "fig5_T",       "bakers",         "baker_exchange",
          "digit_pairing_D", "identity", "perm_core"};
}

CatalogEntry catalog_entry(std::string const& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t const c = spec.find(':', start);
    parts.push_back(spec.substr(start, c == std::string::npos ? c : c - start));
    if (c == std::string::npos) {
      break;
    }
    start = c + 1;
  }
  std::string const& name = parts[0];
  auto arg = [&](std::size_t i, int fallback) {
    return i < parts.size() ? parse_int(parts[i], spec) : fallback;
  };
  std::size_t const max_args = name == "perm_core" ? 4 : name == "identity" ? 3
                               : name.rfind("fig2_", 0) == 0                ? 2
                                                                            : 1;
  if (parts.size() > max_args) {
    throw UnknownEntry("too many parameters in " + spec);
  }
  CatalogEntry e;
  e.name = spec;
  if (name == "scary_code") {
    e.code = scary_code();
    e.note = "five-member (3,2) code that is not a refinement of the trivial code";
  } else if (name == "fig2_code") {
    e.code = fig2_code(arg(1, 3));
    e.note = "F_1 = {0^i 1} u {0^(n-1)}";
  } else if (name == "fig2_forward") {
    e.diagram = fig2_forward(arg(1, 3));
    e.note = "F_1 member i -> letter i";
  } else if (name == "fig2_backward") {
    e.diagram = fig2_backward(arg(1, 3));
    e.note = "letter i -> F_1 member i";
  } else if (name == "fig3_left") {
    e.diagram = fig3_left();
    e.note = "four-state involution core; synchronizing at level 3";
  } else if (name == "fig3_right") {
    e.diagram = fig3_right();
    e.note = "reconstruction: equal to fig3_left";
  } else if (name == "fig4_B") {
    e.diagram = fig4_B();
    e.note = "product of fig3_left and fig3_right";
  } else if (name == "fig5_T") {
    e.diagram = fig5_T();
    e.note = "x -> (x/2, x mod 2); letters 1 and 3 reconstructed";
  } else if (name == "bakers") {
    e.handle = bakers();
    e.note = "baker's map transducer; infinite, so a lazy handle";
  } else if (name == "baker_exchange") {
    e.exchange = baker_exchange();
    e.note = "{(0,),(1,)} -> {(,0),(,1)}";
  } else if (name == "digit_pairing_D") {
    e.handle = inverse_digit_pairing_D();
    e.note = "(2,2) -> (1,4) digit pairing; infinite";
  } else if (name == "identity") {
    e.diagram = identity(arg(1, 1), arg(2, 2));
    e.note = "one-state identity";
  } else if (name == "perm_core") {
    int const d = arg(1, 2);
    int const n = arg(2, 2);
    Perm const g = parts.size() > 3 ? perm_parse(parts[3], d) : perm_identity(d);
    e.diagram = permutation_core(g, n).machine();
    e.note = "coordinate permutation " + perm_str(g);
  } else {
    throw UnknownEntry("no catalog entry named '" + name + "'");
  }
  return e;
}

}  // namespace dvn
