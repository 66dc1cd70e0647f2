// enumerate.cpp -- structure-first enumeration with output-length
// profiles and content odometers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "dvn/enumerate.hpp"
#include "dvn/error.hpp"

namespace dvn {

namespace {

constexpr char const* stage_names[stage_count] = {
    "valid", "non-degenerate", "synchronizing", "core", "minimal", "complete-response",
    "injective", "invertible"};

bool at_least(Stage s, Stage t) {
  return static_cast<int>(s) >= static_cast<int>(t);
}

// Serialization of D with state q renamed perm[q].
std::string table_key(Diagram const& D, std::vector<int> const& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t q = 0; q < perm.size(); ++q) {
    inv[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
  }
  std::string key;
  for (int p = 0; p < D.size(); ++p) {
    int const q = inv[static_cast<std::size_t>(p)];
    for (int g = 0; g < D.gens(); ++g) {
      key.push_back(static_cast<char>('A' + perm[static_cast<std::size_t>(D.next(q, g))]));
      for (auto const& c : D.out(q, g).coords()) {
        for (char x : c) {
          key.push_back(static_cast<char>('0' + x));
        }
        key.push_back(',');
      }
      key.push_back(';');
    }
  }
  return key;
}

// Bareiss determinant of an integer matrix.
__int128 determinant(std::vector<std::vector<__int128>> a) {
  std::size_t const N = a.size();
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < N && a[r][k] == 0) {
        ++r;
      }
      if (r == N) {
        return 0;
      }
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      for (std::size_t j = k + 1; j < N; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[N - 1][N - 1];
}

bool all_states_injective(Diagram const& D) {
  for (int q = 0; q < D.size(); ++q) {
    if (injectivity(D, q).verdict != Verdict::Yes) {
      return false;
    }
  }
  return true;
}

bool has_complete_response(Diagram const& D) {
  try {
    for (auto const& img : images(D)) {
      if (img.empty() || !lcp(img.cones()).empty()) {
        return false;
      }
    }
    return true;
  } catch (CapExceeded const&) {
    return false;
  }
}

bool is_minimal(Diagram const& D) {
  return minimize(D).machine.size() == D.size();
}

// The single test of stage s (earlier stages assumed).
bool passes(Diagram const& D, Stage s) {
  switch (s) {
    case Stage::Valid:
      return true;
    case Stage::NonDegenerate:
      return is_nondegenerate(D);
    case Stage::Synchronizing:
      return synchronizing_level(D).has_value();
    case Stage::Core:
      return strongly_connected(D);
    case Stage::Minimal:
      return is_minimal(D);
    case Stage::CompleteResponse:
      return has_complete_response(D);
    case Stage::Injective:
      return all_states_injective(D);
    case Stage::Invertible:
      return true;
  }
  return true;
}

// Iterates a mixed-radix odometer; f returns false to stop early.
template <typename F>
void odometer(std::vector<int> const& radix, F&& f) {
  std::vector<int> digit(radix.size(), 0);
  for (int r : radix) {
    if (r <= 0) {
      return;
    }
  }
  while (true) {
    f(digit);
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == radix[i]) {
      digit[i] = 0;
      ++i;
    }
    if (i == digit.size()) {
      return;
    }
  }
}

double ipow(double b, double e) {
  return std::pow(b, e);
}

class Search {
 public:
  Search(EnumerationSpec const& spec, bool dedup_structures)
      : _s(spec), _dedup(dedup_structures), _G(spec.d * spec.n) {
    if (spec.d < 1 || spec.n < 2 || spec.max_states < 1 || spec.max_output < 0) {
      throw InvalidTable("bad enumeration spec");
    }
    _U = 1;
    for (int i = 0; i < spec.d; ++i) {
      _U *= spec.n;
    }
  }

  // Calls f on every candidate table, by state count.  The whole search
  // is sized before any table is built.
  void run(std::function<void(Diagram const&)> const& f, bool prune) {
    std::vector<std::tuple<int, std::vector<int>, std::vector<int>>> work;
    double content = 0;
    for (int N = 1; N <= _s.max_states; ++N) {
      for (auto const& next : structures(N, prune)) {
        for (auto& prof : profiles(N, next, prune)) {
          double c = 1;
          for (int l : prof) {
            c *= ipow(_s.n, l);
          }
          content += c;
          if (content > static_cast<double>(_s.budget)) {
            throw SpecTooLarge("more than " + std::to_string(_s.budget) + " candidate tables");
          }
          work.emplace_back(N, next, std::move(prof));
        }
      }
    }
    for (auto const& [N, next, prof] : work) {
      contents(N, next, prof, prune, f);
    }
  }

 private:
  // Transition tables, coherent, optionally deduplicated and filtered.
  std::vector<std::vector<int>> structures(int N, bool prune) {
    std::vector<std::vector<int>> out;
    std::set<std::string> seen;
    double const total = ipow(N, N * _G);
    if (total > static_cast<double>(_s.budget)) {
      throw SpecTooLarge(std::to_string(N) + "-state transition tables exceed the budget");
    }
    odometer(std::vector<int>(static_cast<std::size_t>(N * _G), N), [&](std::vector<int> const& next) {
      if (!transitions_coherent(N, next)) {
        return;
      }
      Diagram const D = skeleton(N, next);
      if (prune && at_least(_s.stage, Stage::Synchronizing) && !synchronizing_level(D)) {
        return;
      }
      if (prune && at_least(_s.stage, Stage::Core) && !strongly_connected(D)) {
        return;
      }
      if (_dedup && !seen.insert(relabel_invariant_key(D)).second) {
        return;
      }
      out.push_back(next);
    });
    return out;
  }

  bool transitions_coherent(int N, std::vector<int> const& next) const {
    int const n = _s.n;
    for (int q = 0; q < N; ++q) {
      for (int x = 0; x < _G; ++x) {
        for (int y = 0; y < _G; ++y) {
          if (x / n == y / n) {
            continue;
          }
          int const a = next[static_cast<std::size_t>(next[static_cast<std::size_t>(q * _G + x)] * _G + y)];
          int const b = next[static_cast<std::size_t>(next[static_cast<std::size_t>(q * _G + y)] * _G + x)];
          if (a != b) {
            return false;
          }
        }
      }
    }
    return true;
  }

  Diagram skeleton(int N, std::vector<int> const& next) const {
    Tables t;
    t.domain = {_s.d, _s.n};
    t.range = {_s.d, _s.n};
    t.states = N;
    t.next = next;
    t.out.assign(next.size(), WordD(_s.d, _s.n));
    return Diagram(std::move(t));
  }

  // Output lengths, indexed [(q * G + g) * d + j].
  std::vector<std::vector<int>> profiles(int N, std::vector<int> const& next, bool prune) {
    int const d = _s.d;
    int const n = _s.n;
    std::size_t const cells = static_cast<std::size_t>(N * _G * d);
    if (ipow(_s.max_output + 1, static_cast<double>(cells)) > static_cast<double>(_s.budget)) {
      throw SpecTooLarge("output-length profiles exceed the budget");
    }
    // Square letters: successor and per-coordinate output length.
    std::vector<std::vector<int>> out;
    odometer(std::vector<int>(cells, _s.max_output + 1), [&](std::vector<int> const& len) {
      auto L = [&](int q, int g, int j) {
        return len[static_cast<std::size_t>((q * _G + g) * d + j)];
      };
      for (int q = 0; q < N; ++q) {
        for (int x = 0; x < _G; ++x) {
          for (int y = 0; y < _G; ++y) {
            if (x / n == y / n) {
              continue;
            }
            int const qx = next[static_cast<std::size_t>(q * _G + x)];
            int const qy = next[static_cast<std::size_t>(q * _G + y)];
            for (int j = 0; j < d; ++j) {
              if (L(q, x, j) + L(qx, y, j) != L(q, y, j) + L(qy, x, j)) {
                return;
              }
            }
          }
        }
      }
      if (prune && at_least(_s.stage, Stage::NonDegenerate)) {
        std::vector<int> snext(static_cast<std::size_t>(N * _U));
        std::vector<std::vector<int>> slen(static_cast<std::size_t>(N * _U), std::vector<int>(static_cast<std::size_t>(d), 0));
        for (int q = 0; q < N; ++q) {
          for (int u = 0; u < _U; ++u) {
            int p = q;
            int div = _U;
            auto& sl = slen[static_cast<std::size_t>(q * _U + u)];
            for (int i = 0; i < d; ++i) {
              div /= n;
              int const g = i * n + (u / div) % n;
              for (int j = 0; j < d; ++j) {
                sl[static_cast<std::size_t>(j)] += L(p, g, j);
              }
              p = next[static_cast<std::size_t>(p * _G + g)];
            }
            snext[static_cast<std::size_t>(q * _U + u)] = p;
          }
        }
        for (int j = 0; j < d; ++j) {
          if (eps_cycle(N, snext, slen, j)) {
            return;
          }
        }
        if (prune && at_least(_s.stage, Stage::Injective) && !measure_balanced(N, snext, slen)) {
          return;
        }
      }
      out.push_back(len);
    });
    return out;
  }

  bool eps_cycle(int N, std::vector<int> const& snext, std::vector<std::vector<int>> const& slen,
                 int j) const {
    std::vector<int> indeg(static_cast<std::size_t>(N), 0);
    auto keep = [&](int q, int u) {
      return slen[static_cast<std::size_t>(q * _U + u)][static_cast<std::size_t>(j)] == 0;
    };
    for (int q = 0; q < N; ++q) {
      for (int u = 0; u < _U; ++u) {
        if (keep(q, u)) {
          ++indeg[static_cast<std::size_t>(snext[static_cast<std::size_t>(q * _U + u)])];
        }
      }
    }
    std::vector<int> stack;
    for (int q = 0; q < N; ++q) {
      if (indeg[static_cast<std::size_t>(q)] == 0) {
        stack.push_back(q);
      }
    }
    int removed = 0;
    while (!stack.empty()) {
      int const q = stack.back();
      stack.pop_back();
      ++removed;
      for (int u = 0; u < _U; ++u) {
        if (keep(q, u)) {
          int const p = snext[static_cast<std::size_t>(q * _U + u)];
          if (--indeg[static_cast<std::size_t>(p)] == 0) {
            stack.push_back(p);
          }
        }
      }
    }
    return removed < N;
  }

  // Image measures v satisfy v = M v with M[q][p] = sum of n^-|out|;
  // a positive solution needs det(I - M) = 0.
  bool measure_balanced(int N, std::vector<int> const& snext,
                        std::vector<std::vector<int>> const& slen) const {
    int top = 0;
    for (auto const& sl : slen) {
      top = std::max(top, std::accumulate(sl.begin(), sl.end(), 0));
    }
    __int128 scale = 1;
    for (int i = 0; i < top; ++i) {
      scale *= _s.n;
    }
    std::vector<std::vector<__int128>> a(static_cast<std::size_t>(N),
                                         std::vector<__int128>(static_cast<std::size_t>(N), 0));
    for (int q = 0; q < N; ++q) {
      a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] = scale;
      for (int u = 0; u < _U; ++u) {
        auto const& sl = slen[static_cast<std::size_t>(q * _U + u)];
        int const total = std::accumulate(sl.begin(), sl.end(), 0);
        __int128 w = 1;
        for (int i = total; i < top; ++i) {
          w *= _s.n;
        }
        a[static_cast<std::size_t>(q)][static_cast<std::size_t>(snext[static_cast<std::size_t>(q * _U + u)])] -= w;
      }
    }
    return determinant(std::move(a)) == 0;
  }

  void contents(int N, std::vector<int> const& next, std::vector<int> const& prof, bool prune,
                std::function<void(Diagram const&)> const& f) {
    int const d = _s.d;
    int const n = _s.n;
    std::vector<int> radix;
    for (int l : prof) {
      for (int i = 0; i < l; ++i) {
        radix.push_back(n);
      }
    }
    odometer(radix, [&](std::vector<int> const& digit) {
      Tables t;
      t.domain = {d, n};
      t.range = {d, n};
      t.states = N;
      t.next = next;
      t.out.reserve(next.size());
      std::size_t pos = 0;
      for (std::size_t c = 0; c < next.size(); ++c) {
        std::vector<Word> w(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
          int const l = prof[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
          for (int i = 0; i < l; ++i) {
            w[static_cast<std::size_t>(j)].push_back(static_cast<char>(digit[pos++]));
          }
        }
        t.out.emplace_back(n, std::move(w));
      }
      if (prune && d == 1 && at_least(_s.stage, Stage::CompleteResponse)) {
        // All outputs of a state starting with one letter put its image in
        // a proper cone.
        for (int q = 0; q < N; ++q) {
          bool shared = true;
          for (int x = 0; x < n && shared; ++x) {
            Word const& o = t.out[static_cast<std::size_t>(q * n + x)][0];
            shared = !o.empty() && o[0] == t.out[static_cast<std::size_t>(q * n)][0][0];
          }
          if (shared) {
            return;
          }
        }
      }
      if (d > 1 && !outputs_coherent(t)) {
        return;
      }
      f(Diagram(std::move(t)));
    });
  }

  bool outputs_coherent(Tables const& t) const {
    int const n = _s.n;
    for (int q = 0; q < t.states; ++q) {
      for (int x = 0; x < _G; ++x) {
        for (int y = x + 1; y < _G; ++y) {
          if (x / n == y / n) {
            continue;
          }
          int const qx = t.next[static_cast<std::size_t>(q * _G + x)];
          int const qy = t.next[static_cast<std::size_t>(q * _G + y)];
          WordD const a = concat(t.out[static_cast<std::size_t>(q * _G + x)],
                                 t.out[static_cast<std::size_t>(qx * _G + y)]);
          WordD const b = concat(t.out[static_cast<std::size_t>(q * _G + y)],
                                 t.out[static_cast<std::size_t>(qy * _G + x)]);
          if (a != b) {
            return false;
          }
        }
      }
    }
    return true;
  }

  EnumerationSpec _s;
  bool _dedup;
  int _G;
  int _U = 1;
};

std::vector<CoreElement> invertible_only(std::vector<CoreElement> const& cores) {
  std::vector<CoreElement> out;
  for (auto const& A : cores) {
    for (auto const& B : cores) {
      if (is_identity(multiply(A, B)) && is_identity(multiply(B, A))) {
        out.push_back(A);
        break;
      }
    }
  }
  return out;
}

// Sorts representatives by state count, then serialization.
void order(std::vector<Diagram>& v) {
  std::sort(v.begin(), v.end(), [](Diagram const& a, Diagram const& b) {
    if (a.size() != b.size()) {
      return a.size() < b.size();
    }
    std::vector<int> pa(static_cast<std::size_t>(a.size()));
    std::iota(pa.begin(), pa.end(), 0);
    std::vector<int> pb(static_cast<std::size_t>(b.size()));
    std::iota(pb.begin(), pb.end(), 0);
    return table_key(a, pa) < table_key(b, pb);
  });
}

}  // namespace

std::string stage_name(Stage s) {
  return stage_names[static_cast<int>(s)];
}

Stage parse_stage(std::string const& s) {
  for (int i = 0; i < stage_count; ++i) {
    if (s == stage_names[i]) {
      return static_cast<Stage>(i);
    }
  }
  throw ParseError("unknown filter stage " + s);
}

std::string relabel_invariant_key(Diagram const& D) {
  std::vector<int> perm(static_cast<std::size_t>(D.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  do {
    std::string k = table_key(D, perm);
    if (first || k < best) {
      best = std::move(k);
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Diagram> enumerate(EnumerationSpec const& spec) {
  Stage const last = spec.stage == Stage::Invertible ? Stage::Injective : spec.stage;
  bool const canonical = at_least(last, Stage::CompleteResponse);
  std::set<std::string> seen;
  std::vector<Diagram> found;
  Search search(spec, true);
  search.run(
      [&](Diagram const& D) {
        // Cheap tests first; the filters commute.
        static constexpr Stage cheap_first[] = {Stage::NonDegenerate, Stage::Synchronizing,
                                                Stage::Core,          Stage::Minimal,
                                                Stage::CompleteResponse, Stage::Injective};
        for (Stage s : cheap_first) {
          if (at_least(last, s) && !passes(D, s)) {
            return;
          }
        }
        if (canonical) {
          CoreElement const c = canonicalize_core(D);
          std::vector<int> id(static_cast<std::size_t>(c.size()));
          std::iota(id.begin(), id.end(), 0);
          if (seen.insert(table_key(c.machine(), id)).second) {
            found.push_back(c.machine());
          }
        } else if (seen.insert(relabel_invariant_key(D)).second) {
          found.push_back(D);
        }
      },
      true);
  order(found);
  if (spec.stage == Stage::Invertible) {
    std::vector<CoreElement> cores;
    for (auto const& D : found) {
      cores.push_back(canonicalize_core(D));
    }
    found.clear();
    for (auto const& c : invertible_only(cores)) {
      found.push_back(c.machine());
    }
  }
  return found;
}

std::vector<CoreElement> enumerate_cores(EnumerationSpec const& spec) {
  EnumerationSpec s = spec;
  if (!at_least(s.stage, Stage::Injective)) {
    s.stage = Stage::Injective;
  }
  std::vector<CoreElement> out;
  for (auto const& D : enumerate(s)) {
    out.push_back(canonicalize_core(D));
  }
  return out;
}

std::vector<std::pair<Stage, std::size_t>> census(EnumerationSpec const& spec) {
  int const last = static_cast<int>(spec.stage);
  double raw = 0;
  double const words = [&] {
    double w = 0;
    for (int l = 0; l <= spec.max_output; ++l) {
      w += ipow(spec.n, l);
    }
    return w;
  }();
  for (int N = 1; N <= spec.max_states; ++N) {
    double const cells = N * spec.d * spec.n;
    raw += ipow(N, cells) * ipow(words, cells * spec.d);
  }
  if (raw > static_cast<double>(spec.budget)) {
    throw SpecTooLarge("raw space of about " + std::to_string(static_cast<long long>(raw))
                       + " tables exceeds the budget");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(stage_count), 0);
  std::vector<CoreElement> injective;
  Search search(spec, false);
  search.run(
      [&](Diagram const& D) {
        std::vector<int> id(static_cast<std::size_t>(D.size()));
        std::iota(id.begin(), id.end(), 0);
        if (relabel_invariant_key(D) != table_key(D, id)) {
          return;
        }
        for (int s = 0; s <= std::min(last, static_cast<int>(Stage::Injective)); ++s) {
          if (!passes(D, static_cast<Stage>(s))) {
            return;
          }
          ++counts[static_cast<std::size_t>(s)];
          if (static_cast<Stage>(s) == Stage::Injective) {
            injective.push_back(canonicalize_core(D));
          }
        }
      },
      false);
  if (spec.stage == Stage::Invertible) {
    counts[static_cast<std::size_t>(Stage::Invertible)] = invertible_only(injective).size();
  }
  std::vector<std::pair<Stage, std::size_t>> out;
  for (int s = 0; s <= last; ++s) {
    out.emplace_back(static_cast<Stage>(s), counts[static_cast<std::size_t>(s)]);
  }
  return out;
}

}  // namespace dvn
