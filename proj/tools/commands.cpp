// commands.cpp -- subcommand table for the dvn tool.

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "dvn/enumerate.hpp"
#include "dvn/error.hpp"
#include "io.hpp"

namespace dvn {

namespace {

using nlohmann::json;

struct Context {
  io::Loader loader;
  std::ostream& out;
};

void print_machine(Context& c, Diagram const& D, int base = 0) {
  c.out << io::to_json(D, base).dump(2) << "\n";
}

void print_machines(Context& c, std::vector<CoreElement> const& v) {
  json a = json::array();
  for (auto const& e : v) {
    a.push_back(io::to_json(e.machine()));
  }
  c.out << a.dump(2) << "\n";
}

CoreElement load_core(Context& c, std::string const& arg) {
  return canonicalize(*c.loader.load_diagram(arg).diagram);
}

std::string sig_str(int r, int n) {
  return std::to_string(r) + " mod " + std::to_string(n - 1);
}

std::string signature_str(Signature a, Signature b) {
  return "(" + std::to_string(a.d) + "," + std::to_string(a.n) + ") -> (" + std::to_string(b.d) + ","
         + std::to_string(b.n) + ")";
}

struct EnumArgs {
  int d = 1;
  int n = 2;
  int states = 1;
  int max_output = 2;
  std::string stage = "valid";
  double budget = 2e7;
  EnumerationSpec spec() const {
    EnumerationSpec s;
    s.d = d;
    s.n = n;
    s.max_states = states;
    s.max_output = max_output;
    s.stage = parse_stage(stage);
    s.budget = static_cast<std::size_t>(budget);
    return s;
  }
};

void enum_options(CLI::App* sub, EnumArgs& a) {
  sub->add_option("--d", a.d, "dimension")->capture_default_str();
  sub->add_option("--n", a.n, "alphabet size")->capture_default_str();
  sub->add_option("--states", a.states, "largest state count")->capture_default_str();
  sub->add_option("--max-output", a.max_output, "longest edge output per coordinate")
      ->capture_default_str();
  sub->add_option("--stage", a.stage,
                  "last filter: valid, non-degenerate, synchronizing, core, minimal, "
                  "complete-response, injective, invertible")
      ->capture_default_str();
  sub->add_option("--budget", a.budget, "largest candidate count")->capture_default_str();
}

// Resolves a state name (finite) or key (lazy).
int finite_state(io::Loaded const& l, std::string const& name) {
  return name.empty() ? l.base : l.diagram->state(name);
}

}  // namespace

int run_cli(std::vector<std::string> const& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Transducers, prefix exchanges and the outer automorphism monoid of dV_n"};
  app.require_subcommand(1);
  app.name("dvn");
  Context c{io::Loader(in), out};

  std::string file;
  std::string file2;
  std::string word;
  std::string state;
  std::vector<std::string> files;
  int max_states = -1;
  std::size_t limit = 32;
  bool count_only = false;
  std::string name;
  EnumArgs ea;

  auto one = [&](char const* cmd, char const* help) {
    CLI::App* s = app.add_subcommand(cmd, help);
    s->add_option("machine", file, "file, catalog:NAME, or - for stdin")->required();
    return s;
  };

  one("validate", "check a machine, code or exchange")->callback([&] {
    io::Loaded const l = c.loader.load(file);
    if (l.diagram) {
      out << "valid " << signature_str(l.diagram->domain(), l.diagram->range()) << ", "
          << l.diagram->size() << " states\n";
    } else if (l.code) {
      out << "valid prefix code, " << l.code->size() << " members\n";
    } else if (l.exchange) {
      out << "valid prefix exchange, " << l.exchange->source().size() << " members\n";
    } else {
      out << "lazy machine " << signature_str(l.handle->domain(), l.handle->range()) << "\n";
    }
  });

  for (char const* cmd : {"run", "eval"}) {
    bool const full = std::string(cmd) == "run";
    CLI::App* s = one(cmd, full ? "final state and output on a finite word" : "output on a finite word");
    s->add_option("word", word, "input such as (01,1) or 0011")->required();
    s->add_option("--state", state, "start state (default: base)");
    s->callback([&, full] {
      io::Loaded const l = c.loader.load(file);
      if (l.diagram) {
        WordD const w = io::parse_word(word, l.diagram->d(), l.diagram->n());
        auto const [q, o] = run(*l.diagram, finite_state(l, state), w);
        if (full) {
          out << "state " << l.diagram->name(q) << "\n";
        }
        out << o.str() << "\n";
        return;
      }
      Handle const M = l.handle ? l.handle : l.exchange ? machine_of(*l.exchange) : nullptr;
      if (!M) {
        throw ParseError(file + " is a code, not a machine");
      }
      WordD const w = io::parse_word(word, M->domain().d, M->domain().n);
      auto const [q, o] = run(M, state.empty() ? M->start() : state, w);
      if (full) {
        out << "state " << M->describe(q) << "\n";
      }
      out << o.str() << "\n";
    });
  }

  one("minimize", "merge equivalent states")->callback([&] {
    io::Loaded const l = c.loader.load_diagram(file);
    Minimized const m = minimize(*l.diagram);
    print_machine(c, m.machine, m.map[static_cast<std::size_t>(l.base)]);
  });
  one("cr", "remove incomplete response")->callback([&] {
    io::Loaded const l = c.loader.load_diagram(file);
    print_machine(c, complete_response(*l.diagram), l.base);
  });
  one("sync", "synchronizing level")->callback([&] {
    io::Loaded const l = c.loader.load_diagram(file);
    auto const k = synchronizing_level(*l.diagram);
    if (!k) {
      throw NotSynchronizing(file);
    }
    out << *k << "\n";
  });
  one("core", "the core")->callback([&] {
    print_machine(c, core(*c.loader.load_diagram(file).diagram));
  });

  {
    CLI::App* s = app.add_subcommand("compose", "first A, then B");
    s->add_option("a", file, "machine A")->required();
    s->add_option("b", file2, "machine B")->required();
    s->callback([&] {
      io::Loaded const a = c.loader.load_diagram(file);
      io::Loaded const b = c.loader.load_diagram(file2);
      print_machine(c, compose_from(*a.diagram, *b.diagram, a.base, b.base).first, 0);
    });
  }
  {
    CLI::App* s = app.add_subcommand("product", "categorical product");
    s->add_option("machines", files, "factors")->required();
    s->callback([&] {
      std::vector<Diagram> parts;
      int base = 0;
      for (auto const& f : files) {
        for (auto& l : c.loader.load_all(f)) {
          if (!l.diagram) {
            throw ParseError(f + " is not a finite machine");
          }
          base = base * l.diagram->size() + l.base;
          parts.push_back(std::move(*l.diagram));
        }
      }
      print_machine(c, product(parts), base);
    });
  }

  one("canon", "canonical core")->callback([&] { print_machine(c, load_core(c, file).machine()); });
  {
    CLI::App* s = app.add_subcommand("mul", "product of canonical cores");
    s->add_option("a", file, "core A")->required();
    s->add_option("b", file2, "core B")->required();
    s->callback([&] {
      CoreElement const a = load_core(c, file);
      print_machine(c, multiply(a, load_core(c, file2)).machine());
    });
  }
  {
    CLI::App* s = app.add_subcommand("is-identity", "is the core the identity");
    s->add_option("machine", file, "default: stdin")->default_val("-");
    s->callback([&] { out << (is_identity(load_core(c, file)) ? "true" : "false") << "\n"; });
  }
  one("psi", "coordinate map, cycle notation")->callback([&] {
    out << perm_str(psi(load_core(c, file))) << "\n";
  });
  one("sig", "image signature")->callback([&] {
    CoreElement const a = load_core(c, file);
    out << sig_str(sig(a), a.n()) << "\n";
  });
  one("decompose", "one-dimensional factors")->callback([&] { print_machines(c, decompose(load_core(c, file))); });
  {
    CLI::App* s = app.add_subcommand("recompose", "product of one-dimensional cores");
    s->add_option("machines", files, "factors, or one array file")->required();
    s->callback([&] {
      std::vector<CoreElement> parts;
      for (auto const& f : files) {
        for (auto& l : c.loader.load_all(f)) {
          if (!l.diagram) {
            throw ParseError(f + " is not a finite machine");
          }
          parts.push_back(canonicalize(*l.diagram));
        }
      }
      print_machine(c, recompose(parts).machine());
    });
  }
  one("wreath", "wreath coordinates")->callback([&] {
    WreathCoordinates const w = wreath_coordinates(load_core(c, file));
    json j;
    j["perm"] = perm_str(w.perm);
    j["factors"] = json::array();
    for (auto const& f : w.factors) {
      j["factors"].push_back(io::to_json(f.machine()));
    }
    out << j.dump(2) << "\n";
  });
  {
    CLI::App* s = one("inverse", "inverse core");
    s->add_option("--max-states", max_states, "largest inverse to accept (default |Q|+2)");
    s->callback([&] {
      CoreElement const a = load_core(c, file);
      auto const b = find_inverse(a, max_states);
      if (!b) {
        throw NotInvertible("no inverse found within the state bound");
      }
      print_machine(c, b->machine());
    });
  }
  {
    CLI::App* s = one("is-dvn", "is the map in dV_n");
    s->add_option("--state", state, "base state (default: file base)");
    s->callback([&] {
      io::Loaded const l = c.loader.load(file);
      bool yes = false;
      if (l.diagram) {
        yes = is_dvn_member(*l.diagram, finite_state(l, state));
      } else if (l.exchange) {
        yes = is_dvn_member(*l.exchange);
      } else if (l.handle) {
        auto const [M, q] = minimal_for_homeomorphism(l.handle, l.handle->start(), 4096);
        yes = is_dvn_member(M, q);
      } else {
        throw ParseError(file + " is a code, not a map");
      }
      out << (yes ? "true" : "false") << "\n";
    });
  }
  one("realize", "homeomorphism with the given core")->callback([&] {
    auto const [D, base] = realize(load_core(c, file));
    print_machine(c, D, base);
  });

  {
    CLI::App* s = app.add_subcommand("enumerate", "machines up to strong isomorphism");
    enum_options(s, ea);
    s->add_flag("--count", count_only, "print only the number of classes");
    s->callback([&] {
      auto const found = enumerate(ea.spec());
      if (count_only) {
        out << found.size() << "\n";
        return;
      }
      json a = json::array();
      for (auto const& D : found) {
        a.push_back(io::to_json(D));
      }
      out << a.dump(2) << "\n";
    });
  }
  {
    CLI::App* s = app.add_subcommand("census", "class counts per filter stage");
    enum_options(s, ea);
    s->callback([&] {
      for (auto const& [st, n] : census(ea.spec())) {
        out << stage_name(st) << " " << n << "\n";
      }
    });
  }
  {
    CLI::App* s = app.add_subcommand("catalog", "list or print built-in fixtures");
    s->add_option("name", name, "entry, e.g. fig3_left or fig2_forward:4");
    s->callback([&] {
      if (name.empty()) {
        for (auto const& n : catalog_names()) {
          out << n << "  " << catalog_entry(n).note << "\n";
        }
        return;
      }
      io::Loaded const l = c.loader.load("catalog:" + name);
      if (l.diagram) {
        print_machine(c, *l.diagram, l.base);
      } else if (l.code) {
        for (auto const& m : l.code->members()) {
          out << m.str() << "\n";
        }
      } else if (l.exchange) {
        for (std::size_t i = 0; i < l.exchange->source().size(); ++i) {
          out << l.exchange->source().members()[i].str() << " -> " << l.exchange->image_of(i).str() << "\n";
        }
      } else {
        out << "lazy machine " << signature_str(l.handle->domain(), l.handle->range())
            << "; use run or render\n";
      }
    });
  }
  {
    CLI::App* s = one("render", "Graphviz DOT");
    s->add_option("--limit", limit, "states shown for infinite machines")->capture_default_str();
    s->callback([&] {
      io::Loaded const l = c.loader.load(file);
      if (l.diagram) {
        out << io::to_dot(*l.diagram, l.base, file);
      } else if (l.code) {
        out << io::to_dot(*l.code, file);
      } else {
        out << io::to_dot(l.handle ? l.handle : machine_of(*l.exchange), limit, file);
      }
    });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  } catch (ParseError const& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (UnknownEntry const& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (Error const& e) {
    err << e.what() << "\n";
    return exit_domain;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << "\n";
    return exit_domain;
  }
  return exit_ok;
}

}  // namespace dvn
