// io.cpp -- MachineFile JSON, DOT export and argument loading.

#include "io.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "dvn/error.hpp"

namespace dvn::io {

using nlohmann::json;

json to_json(Diagram const& D, int base) {
  json j;
  j["domain"] = {{"d", D.d()}, {"n", D.n()}};
  j["range"] = {{"k", D.range().d}, {"m", D.range().n}};
  json states = json::array();
  for (int q = 0; q < D.size(); ++q) {
    states.push_back(D.name(q));
  }
  j["states"] = states;
  j["base"] = D.name(base);
  json edges = json::array();
  for (int q = 0; q < D.size(); ++q) {
    for (int g = 0; g < D.gens(); ++g) {
      json out = json::array();
      for (auto const& c : D.out(q, g).coords()) {
        out.push_back(digits(c));
      }
      edges.push_back({{"from", D.name(q)},
                       {"coord", D.gen(g).coord},
                       {"letter", D.gen(g).letter},
                       {"to", D.name(D.next(q, g))},
                       {"out", out}});
    }
  }
  j["edges"] = edges;
  return j;
}

namespace {

template <typename T>
T field(json const& j, char const* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (json::exception const&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::pair<Diagram, int> from_json(json const& j) {
  json const dom = field<json>(j, "domain");
  json const ran = field<json>(j, "range");
  Tables t;
  t.domain = {field<int>(dom, "d"), field<int>(dom, "n")};
  t.range = {field<int>(ran, "k"), field<int>(ran, "m")};
  if (t.domain.d < 1 || t.domain.n < 2 || t.range.d < 1 || t.range.n < 2) {
    throw ParseError("signature out of range");
  }
  t.names = field<std::vector<std::string>>(j, "states");
  t.states = static_cast<int>(t.names.size());
  if (t.states == 0) {
    throw ParseError("no states");
  }
  std::map<std::string, int> index;
  for (int q = 0; q < t.states; ++q) {
    if (!index.emplace(t.names[static_cast<std::size_t>(q)], q).second) {
      throw ParseError("duplicate state name '" + t.names[static_cast<std::size_t>(q)] + "'");
    }
  }
  auto state = [&](std::string const& name) {
    auto const it = index.find(name);
    if (it == index.end()) {
      throw ParseError("unknown state '" + name + "'");
    }
    return it->second;
  };
  int const G = t.domain.d * t.domain.n;
  std::size_t const cells = static_cast<std::size_t>(t.states * G);
  t.next.assign(cells, -1);
  t.out.assign(cells, WordD(t.range.d, t.range.n));
  for (json const& e : field<json>(j, "edges")) {
    int const q = state(field<std::string>(e, "from"));
    int const c = field<int>(e, "coord");
    int const x = field<int>(e, "letter");
    if (c < 0 || c >= t.domain.d || x < 0 || x >= t.domain.n) {
      throw ParseError("generator " + std::to_string(x) + "@" + std::to_string(c) + " out of range");
    }
    std::size_t const cell = static_cast<std::size_t>(q * G + c * t.domain.n + x);
    if (t.next[cell] >= 0) {
      throw ParseError("duplicate edge at state " + t.names[static_cast<std::size_t>(q)] + ", gen "
                       + std::to_string(x) + "@" + std::to_string(c));
    }
    t.next[cell] = state(field<std::string>(e, "to"));
    auto const out = field<std::vector<std::string>>(e, "out");
    if (static_cast<int>(out.size()) != t.range.d) {
      throw ParseError("edge output needs " + std::to_string(t.range.d) + " coordinates");
    }
    std::vector<Word> w;
    for (auto const& s : out) {
      w.push_back(word_from_digits(s, t.range.n));
    }
    t.out[cell] = WordD(t.range.n, std::move(w));
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (t.next[cell] < 0) {
      int const q = static_cast<int>(cell) / G;
      int const g = static_cast<int>(cell) % G;
      throw ParseError("missing edge at state " + t.names[static_cast<std::size_t>(q)] + ", gen "
                       + std::to_string(g % t.domain.n) + "@" + std::to_string(g / t.domain.n));
    }
  }
  int base = 0;
  if (j.contains("base")) {
    base = state(field<std::string>(j, "base"));
  }
  return {validate(std::move(t)), base};
}

std::string word_label(WordD const& w) {
  auto coord = [](Word const& c) { return c.empty() ? std::string("ε") : digits(c); };
  if (w.dims() == 1) {
    return coord(w[0]);
  }
  std::string s = "(";
  for (int i = 0; i < w.dims(); ++i) {
    s += (i ? "," : "") + coord(w[i]);
  }
  return s + ")";
}

WordD parse_word(std::string const& text, int d, int n) {
  WordD w = !text.empty() && text[0] == '(' ? WordD::parse(text, n)
                                             : WordD(n, std::vector<Word>{word_from_digits(text, n)});
  if (w.dims() != d) {
    throw ParseError("word " + text + " has " + std::to_string(w.dims()) + " coordinates, expected "
                     + std::to_string(d));
  }
  return w;
}

namespace {

std::string quote(std::string const& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      q.push_back('\\');
    }
    q.push_back(c);
  }
  return q + "\"";
}

std::string gen_label(Generator g) {
  return "x_{" + std::to_string(g.coord) + "," + std::to_string(g.letter) + "}";
}

std::string header(std::string const& title) {
  return "digraph " + quote(title) + " {\n  rankdir=LR;\n  node [shape=circle];\n";
}

}  // namespace

std::string to_dot(Diagram const& D, int base, std::string const& title) {
  std::string s = header(title);
  for (int q = 0; q < D.size(); ++q) {
    s += "  " + quote(D.name(q)) + (q == base ? " [shape=doublecircle];\n" : ";\n");
  }
  for (int q = 0; q < D.size(); ++q) {
    for (int g = 0; g < D.gens(); ++g) {
      s += "  " + quote(D.name(q)) + " -> " + quote(D.name(D.next(q, g))) + " [label="
           + quote(gen_label(D.gen(g)) + "/" + word_label(D.out(q, g))) + "];\n";
    }
  }
  return s + "}\n";
}

std::string to_dot(Handle const& M, std::size_t limit, std::string const& title) {
  std::string s = header(title);
  std::map<std::string, std::size_t> seen{{M->start(), 0}};
  std::vector<std::string> order{M->start()};
  bool cut = false;
  std::string edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string const k = order[i];
    for (int c = 0; c < M->domain().d; ++c) {
      for (int x = 0; x < M->domain().n; ++x) {
        std::string const to = M->next(k, {c, x});
        std::string label = gen_label({c, x}) + "/" + word_label(M->out(k, {c, x}));
        std::string target;
        if (seen.count(to) || seen.size() < limit) {
          if (seen.emplace(to, order.size()).second) {
            order.push_back(to);
          }
          target = quote(M->describe(to));
        } else {
          cut = true;
          target = "\"...\"";
        }
        edges += "  " + quote(M->describe(k)) + " -> " + target + " [label=" + quote(label) + "];\n";
      }
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    s += "  " + quote(M->describe(order[i])) + (i == 0 ? " [shape=doublecircle];\n" : ";\n");
  }
  if (cut) {
    s += "  \"...\" [shape=plaintext];\n";
  }
  return s + edges + "}\n";
}

std::string to_dot(PrefixCode const& c, std::string const& title) {
  std::string s = header(title);
  s += "  \"root\" [shape=point];\n";
  for (auto const& m : c.members()) {
    s += "  " + quote(m.str()) + " [shape=box];\n";
    s += "  \"root\" -> " + quote(m.str()) + " [label=" + quote(word_label(m)) + "];\n";
  }
  return s + "}\n";
}

std::string Loader::text_of(std::string const& arg) {
  if (arg == "-") {
    if (!_stdin) {
      _stdin = std::string(std::istreambuf_iterator<char>(_in), std::istreambuf_iterator<char>());
    }
    return *_stdin;
  }
  std::ifstream f(arg);
  if (!f) {
    throw ParseError("cannot read " + arg);
  }
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

std::vector<Loaded> Loader::load_all(std::string const& arg) {
  constexpr std::string_view scheme = "catalog:";
  if (arg.rfind(scheme, 0) == 0) {
    CatalogEntry e = catalog_entry(arg.substr(scheme.size()));
    Loaded l;
    l.source = arg;
    l.diagram = std::move(e.diagram);
    l.base = e.base;
    l.handle = std::move(e.handle);
    l.exchange = std::move(e.exchange);
    l.code = std::move(e.code);
    return {std::move(l)};
  }
  json j;
  try {
    j = json::parse(text_of(arg));
  } catch (json::parse_error const& e) {
    throw ParseError(arg + ": " + e.what());
  }
  std::vector<json> items;
  if (j.is_array()) {
    items.assign(j.begin(), j.end());
  } else if (j.is_object() && j.contains("factors")) {
    items.assign(j["factors"].begin(), j["factors"].end());
  } else {
    items.push_back(j);
  }
  std::vector<Loaded> out;
  for (auto const& item : items) {
    auto [D, base] = from_json(item);
    Loaded l;
    l.source = arg;
    l.diagram = std::move(D);
    l.base = base;
    out.push_back(std::move(l));
  }
  return out;
}

Loaded Loader::load(std::string const& arg) {
  auto all = load_all(arg);
  if (all.size() != 1) {
    throw ParseError(arg + " holds " + std::to_string(all.size()) + " machines, expected one");
  }
  return std::move(all.front());
}

Loaded Loader::load_diagram(std::string const& arg) {
  Loaded l = load(arg);
  if (!l.diagram) {
    throw ParseError(arg + " is not a finite machine");
  }
  return l;
}

}  // namespace dvn::io
