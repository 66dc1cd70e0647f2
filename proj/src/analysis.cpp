// analysis.cpp -- images, complete response, degeneracy, injectivity,
// synchronization, cores and strong isomorphism.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "dvn/error.hpp"
#include "dvn/machine.hpp"

namespace dvn {

////////////////////////////////////////////////////////////////////////
// Images and complete response
////////////////////////////////////////////////////////////////////////

namespace {

// Non-clopen images never stabilize and double in size each round.
constexpr std::size_t image_cone_cap = 1 << 14;

// One-dimensional range: decides whether the image of q is clopen by
// determinizing the automaton that checks an output stream against the
// pending output of each run.  The image is open iff no cycle avoids the
// subsets from which every continuation survives.  nullopt when the
// subset construction gets too large.
std::optional<bool> image_clopen_1d(SquareTable const& sq, int m, int q) {
  using Config = std::pair<int, Word>;
  using Subset = std::set<Config>;
  std::size_t const letters = static_cast<std::size_t>(sq.letters);
  int const states = static_cast<int>(sq.next.size() / letters);

  // States with an infinite path of empty outputs accept any stream.
  std::vector<char> stall(static_cast<std::size_t>(states), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int p = 0; p < states; ++p) {
      if (!stall[static_cast<std::size_t>(p)]) {
        continue;
      }
      bool any = false;
      for (std::size_t u = 0; u < letters && !any; ++u) {
        std::size_t const cell = static_cast<std::size_t>(p) * letters + u;
        any = sq.out[cell].empty() && stall[static_cast<std::size_t>(sq.next[cell])];
      }
      if (!any) {
        stall[static_cast<std::size_t>(p)] = 0;
        changed = true;
      }
    }
  }

  // An empty-pending config that can stall makes the subset universal;
  // it is kept as the marker (-1, "").
  auto close = [&](Subset s) {
    std::vector<Config> work(s.begin(), s.end());
    while (!work.empty()) {
      Config const c = work.back();
      work.pop_back();
      if (c.first < 0 || !c.second.empty()) {
        continue;
      }
      if (stall[static_cast<std::size_t>(c.first)]) {
        return Subset{{-1, Word()}};
      }
      for (std::size_t u = 0; u < letters; ++u) {
        std::size_t const cell = static_cast<std::size_t>(c.first) * letters + u;
        Config n{sq.next[cell], sq.out[cell][0]};
        if (s.insert(n).second) {
          work.push_back(std::move(n));
        }
      }
    }
    return s;
  };

  constexpr std::size_t subset_cap = 1 << 14;
  std::map<Subset, int> index;
  std::vector<Subset> subsets;
  std::vector<std::vector<int>> edges;
  auto intern = [&](Subset s) {
    auto [it, fresh] = index.emplace(std::move(s), static_cast<int>(subsets.size()));
    if (fresh) {
      subsets.push_back(it->first);
      edges.emplace_back();
    }
    return it->second;
  };
  intern(close({{q, Word()}}));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets.size() > subset_cap) {
      return std::nullopt;
    }
    Subset const s = subsets[i];
    for (int a = 0; a < m; ++a) {
      Subset t;
      for (auto const& [p, r] : s) {
        if (p < 0) {
          t.insert({-1, Word()});
        } else if (!r.empty() && r[0] == static_cast<char>(a)) {
          t.insert({p, r.substr(1)});
        }
      }
      int const j = intern(close(std::move(t)));
      edges[i].push_back(j);
    }
  }

  // Subsets that can die, by backward reachability from the empty one.
  std::size_t const total = subsets.size();
  std::vector<char> mortal(total, 0);
  for (std::size_t i = 0; i < total; ++i) {
    mortal[i] = subsets[i].empty() ? 1 : 0;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < total; ++i) {
      if (mortal[i]) {
        continue;
      }
      for (int j : edges[i]) {
        if (mortal[static_cast<std::size_t>(j)]) {
          mortal[i] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  // A cycle through live, mortal subsets is a point of the image with no
  // cone around it.
  std::vector<char> colour(total, 0);
  auto live = [&](std::size_t i) { return mortal[i] && !subsets[i].empty(); };
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < total; ++root) {
    if (!live(root) || colour[root]) {
      continue;
    }
    stack.push_back({root, 0});
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, e] = stack.back();
      if (e == edges[v].size()) {
        colour[v] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t const w = static_cast<std::size_t>(edges[v][e++]);
      if (!live(w)) {
        continue;
      }
      if (colour[w] == 1) {
        return false;
      }
      if (colour[w] == 0) {
        colour[w] = 1;
        stack.push_back({w, 0});
      }
    }
  }
  return true;
}

std::vector<ConeSet> images_of(Diagram const& D, SquareTable const& sq,
                               std::vector<int> const& states, int depth_cap) {
  int const k = D.range().d;
  int const m = D.range().n;
  std::vector<int> local(static_cast<std::size_t>(D.size()), -1);
  for (std::size_t i = 0; i < states.size(); ++i) {
    local[static_cast<std::size_t>(states[i])] = static_cast<int>(i);
  }
  if (k == 1) {
    for (int q : states) {
      if (image_clopen_1d(sq, m, q) == false) {
        throw CapExceeded("image of state " + std::to_string(q) + " is not clopen");
      }
    }
  }
  std::vector<ConeSet> cur(states.size(), ConeSet::full(k, m));
  for (int t = 0; t < depth_cap; ++t) {
    std::vector<ConeSet> nxt;
    nxt.reserve(states.size());
    for (int q : states) {
      std::vector<WordD> family;
      for (int u = 0; u < sq.letters; ++u) {
        std::size_t const cell = static_cast<std::size_t>(q * sq.letters + u);
        int const p = local[static_cast<std::size_t>(sq.next[cell])];
        for (auto const& c : cur[static_cast<std::size_t>(p)].cones()) {
          family.push_back(concat(sq.out[cell], c));
        }
      }
      if (family.size() > image_cone_cap) {
        throw CapExceeded("image needs more than " + std::to_string(image_cone_cap) + " cones");
      }
      nxt.emplace_back(k, m, family);
    }
    if (nxt == cur) {
      return cur;
    }
    cur = std::move(nxt);
  }
  throw CapExceeded("image did not stabilize within " + std::to_string(depth_cap)
                    + " iterations");
}

}  // namespace

std::vector<ConeSet> images(Diagram const& D, int depth_cap) {
  std::vector<int> all(static_cast<std::size_t>(D.size()));
  for (int q = 0; q < D.size(); ++q) {
    all[static_cast<std::size_t>(q)] = q;
  }
  return images_of(D, square_table(D), all, depth_cap);
}

ConeSet image(Diagram const& D, int q, int depth_cap) {
  std::vector<int> r = reachable(D, q);
  return images_of(D, square_table(D), r, depth_cap).front();
}

Diagram complete_response(Diagram const& D, int depth_cap) {
  std::vector<ConeSet> const img = images(D, depth_cap);
  std::vector<WordD> g;
  g.reserve(img.size());
  for (auto const& s : img) {
    if (s.empty()) {
      throw PrefixViolation("a state has empty image");
    }
    g.push_back(lcp(s.cones()));
  }
  Tables t = D.tables();
  for (int q = 0; q < D.size(); ++q) {
    for (int x = 0; x < D.gens(); ++x) {
      WordD const full = concat(D.out(q, x), g[static_cast<std::size_t>(D.next(q, x))]);
      WordD const& pre = g[static_cast<std::size_t>(q)];
      if (!is_prefix(pre, full)) {
        throw PrefixViolation("at state " + D.name(q) + ": " + pre.str() + " is not a prefix of "
                              + full.str());
      }
      t.out[static_cast<std::size_t>(q * D.gens() + x)] = strip_prefix(pre, full);
    }
  }
  return Diagram(std::move(t));
}

////////////////////////////////////////////////////////////////////////
// Degeneracy
////////////////////////////////////////////////////////////////////////

namespace {

// Kahn's algorithm on the subgraph of edges accepted by `keep`.
template <typename Keep>
bool has_cycle(int N, int letters, std::vector<int> const& next, Keep keep) {
  std::vector<int> indeg(static_cast<std::size_t>(N), 0);
  for (int q = 0; q < N; ++q) {
    for (int u = 0; u < letters; ++u) {
      if (keep(q, u)) {
        ++indeg[static_cast<std::size_t>(next[static_cast<std::size_t>(q * letters + u)])];
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
    for (int u = 0; u < letters; ++u) {
      if (keep(q, u)) {
        int const p = next[static_cast<std::size_t>(q * letters + u)];
        if (--indeg[static_cast<std::size_t>(p)] == 0) {
          stack.push_back(p);
        }
      }
    }
  }
  return removed < N;
}

}  // namespace

bool is_nondegenerate(Diagram const& D) {
  SquareTable const sq = square_table(D);
  for (int i = 0; i < D.range().d; ++i) {
    bool const cyc = has_cycle(D.size(), sq.letters, sq.next, [&](int q, int u) {
      return sq.out[static_cast<std::size_t>(q * sq.letters + u)][i].empty();
    });
    if (cyc) {
      return false;
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////
// Injectivity: pair-offset search
////////////////////////////////////////////////////////////////////////

namespace {

// Per range coordinate: which side is ahead (0 none, 1 left, 2 right)
// and the surplus word.
struct Offset {
  std::vector<char> side;
  std::vector<Word> surplus;
};

// Adds outputs a (left) and b (right); false on a conflict.
bool advance(Offset& off, WordD const& a, WordD const& b) {
  for (std::size_t i = 0; i < off.side.size(); ++i) {
    Word A = off.side[i] == 1 ? off.surplus[i] : Word();
    Word B = off.side[i] == 2 ? off.surplus[i] : Word();
    A += a[static_cast<int>(i)];
    B += b[static_cast<int>(i)];
    if (A.size() <= B.size()) {
      if (B.compare(0, A.size(), A) != 0) {
        return false;
      }
      off.surplus[i] = B.substr(A.size());
      off.side[i] = off.surplus[i].empty() ? 0 : 2;
    } else {
      if (A.compare(0, B.size(), B) != 0) {
        return false;
      }
      off.surplus[i] = A.substr(B.size());
      off.side[i] = 1;
    }
  }
  return true;
}

std::string node_key(int p1, int p2, Offset const& off) {
  std::string key = std::to_string(p1) + "," + std::to_string(p2);
  for (std::size_t i = 0; i < off.side.size(); ++i) {
    key += "|";
    key.push_back(static_cast<char>('0' + off.side[i]));
    key += off.surplus[i];
  }
  return key;
}

WordD square_word(Diagram const& D, std::vector<int> const& letters) {
  WordD w(D.d(), D.n());
  for (int i = 0; i < D.d(); ++i) {
    for (int u : letters) {
      int div = 1;
      for (int j = i + 1; j < D.d(); ++j) {
        div *= D.n();
      }
      w.append(i, (u / div) % D.n());
    }
  }
  return w;
}

}  // namespace

Injectivity injectivity(Diagram const& D, int q, long offset_cap) {
  SquareTable const sq = square_table(D);
  int const U = sq.letters;
  int const k = D.range().d;
  int const m = D.range().n;
  if (offset_cap < 0) {
    std::size_t longest = 0;
    for (auto const& o : D.tables().out) {
      longest = std::max(longest, o.max_length());
    }
    offset_cap = static_cast<long>(D.size()) * D.size() * (1 + static_cast<long>(longest));
  }

  // With images known, keep only pairs whose futures can still collide;
  // every such pair then has a surviving successor.  Images are costly
  // (and may not exist), so a budgeted search without them runs first.
  std::optional<std::vector<ConeSet>> img;
  auto viable = [&](int p1, int p2, Offset const& off) {
    if (!img) {
      return true;
    }
    std::vector<Word> l(static_cast<std::size_t>(k));
    std::vector<Word> r(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < off.side.size(); ++i) {
      (off.side[i] == 1 ? l : r)[i] = off.surplus[i];
    }
    return !set_intersection((*img)[static_cast<std::size_t>(p1)].prefixed(WordD(m, l)),
                             (*img)[static_cast<std::size_t>(p2)].prefixed(WordD(m, r)))
                .empty();
  };
  auto too_far = [&](Offset const& off) {
    for (auto const& s : off.surplus) {
      if (static_cast<long>(s.size()) > offset_cap) {
        return true;
      }
    }
    return false;
  };

  // Generator path from q to every reachable state.
  std::vector<int> par(static_cast<std::size_t>(D.size()), -2);
  std::vector<int> via(static_cast<std::size_t>(D.size()), -1);
  std::vector<int> order{q};
  par[static_cast<std::size_t>(q)] = -1;
  for (std::size_t h = 0; h < order.size(); ++h) {
    for (int g = 0; g < D.gens(); ++g) {
      int const t = D.next(order[h], g);
      if (par[static_cast<std::size_t>(t)] == -2) {
        par[static_cast<std::size_t>(t)] = order[h];
        via[static_cast<std::size_t>(t)] = g;
        order.push_back(t);
      }
    }
  }
  auto path_to = [&](int r) {
    std::vector<int> path;
    for (int t = r; par[static_cast<std::size_t>(t)] >= 0; t = par[static_cast<std::size_t>(t)]) {
      path.push_back(via[static_cast<std::size_t>(t)]);
    }
    WordD w(D.d(), D.n());
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      w.append(D.gen(*it).coord, D.gen(*it).letter);
    }
    return w;
  };

  // Depth-first over pair nodes, built on demand; 1 on the stack, 2 done.
  // nullopt means the node budget ran out.
  struct Frame {
    int p1;
    int p2;
    Offset off;
    std::string key;
    int edge;
    int u;
    int v;
  };
  auto search = [&](std::size_t budget) -> std::optional<Injectivity> {
    std::unordered_map<std::string, char> state;
    bool overflow = false;
    for (int r : order) {
      for (int u = 0; u < U; ++u) {
        for (int v = u + 1; v < U; ++v) {
          std::size_t const cu = static_cast<std::size_t>(r * U + u);
          std::size_t const cv = static_cast<std::size_t>(r * U + v);
          Offset off{std::vector<char>(static_cast<std::size_t>(k), 0),
                     std::vector<Word>(static_cast<std::size_t>(k))};
          int const p1 = sq.next[cu];
          int const p2 = sq.next[cv];
          if (!advance(off, sq.out[cu], sq.out[cv]) || !viable(p1, p2, off)) {
            continue;
          }
          std::string key = node_key(p1, p2, off);
          if (state.count(key)) {
            continue;
          }
          if (too_far(off)) {
            overflow = true;
            continue;
          }
          state[key] = 1;
          std::vector<Frame> stack;
          stack.push_back({p1, p2, std::move(off), std::move(key), 0, u, v});
          while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.edge == U * U) {
              state[f.key] = 2;
              stack.pop_back();
              continue;
            }
            int const a = f.edge / U;
            int const b = f.edge % U;
            ++f.edge;
            std::size_t const ca = static_cast<std::size_t>(f.p1 * U + a);
            std::size_t const cb = static_cast<std::size_t>(f.p2 * U + b);
            Offset child = f.off;
            int const c1 = sq.next[ca];
            int const c2 = sq.next[cb];
            if (!advance(child, sq.out[ca], sq.out[cb]) || !viable(c1, c2, child)) {
              continue;
            }
            std::string ckey = node_key(c1, c2, child);
            auto const it = state.find(ckey);
            if (it != state.end() && it->second == 2) {
              continue;
            }
            if (it != state.end()) {
              // Cycle back to a node on the stack.
              std::size_t j = 0;
              while (stack[j].key != ckey) {
                ++j;
              }
              std::vector<int> pu;
              std::vector<int> pv;
              for (std::size_t i = 0; i <= j; ++i) {
                pu.push_back(stack[i].u);
                pv.push_back(stack[i].v);
              }
              std::vector<int> lu;
              std::vector<int> lv;
              for (std::size_t i = j + 1; i < stack.size(); ++i) {
                lu.push_back(stack[i].u);
                lv.push_back(stack[i].v);
              }
              lu.push_back(a);
              lv.push_back(b);
              WordD const common = path_to(r);
              Injectivity res;
              res.verdict = Verdict::No;
              res.left_prefix = concat(common, square_word(D, pu));
              res.right_prefix = concat(common, square_word(D, pv));
              res.left_cycle = square_word(D, lu);
              res.right_cycle = square_word(D, lv);
              return res;
            }
            if (too_far(child)) {
              overflow = true;
              continue;
            }
            if (state.size() >= budget) {
              return std::nullopt;
            }
            state[ckey] = 1;
            stack.push_back({c1, c2, std::move(child), std::move(ckey), 0, a, b});
          }
        }
      }
    }
    Injectivity res;
    res.verdict = overflow ? Verdict::Unknown : Verdict::Yes;
    return res;
  };

  if (auto quick = search(4096)) {
    return *quick;
  }
  try {
    img = images(D);
  } catch (CapExceeded const&) {
    // Without images the pair graph can be exponential in the offset cap.
    if (auto slow = search(1 << 20)) {
      return *slow;
    }
    return Injectivity{};
  }
  return *search(SIZE_MAX);
}

////////////////////////////////////////////////////////////////////////
// Synchronization and cores
////////////////////////////////////////////////////////////////////////

namespace {

struct SyncInfo {
  int level;
  std::vector<int> core;
};

std::optional<SyncInfo> sync_info(Diagram const& D) {
  SquareTable const sq = square_table(D);
  using Subset = std::vector<int>;
  std::set<Subset> family;
  {
    Subset all(static_cast<std::size_t>(D.size()));
    for (int q = 0; q < D.size(); ++q) {
      all[static_cast<std::size_t>(q)] = q;
    }
    family.insert(all);
  }
  std::set<std::set<Subset>> seen;
  for (int level = 0;; ++level) {
    bool singletons = std::all_of(family.begin(), family.end(),
                                  [](Subset const& s) { return s.size() == 1; });
    if (singletons) {
      std::set<int> core;
      for (auto const& s : family) {
        core.insert(s.front());
      }
      return SyncInfo{level, std::vector<int>(core.begin(), core.end())};
    }
    if (!seen.insert(family).second) {
      return std::nullopt;
    }
    std::set<Subset> nxt;
    for (auto const& s : family) {
      for (int u = 0; u < sq.letters; ++u) {
        Subset t;
        t.reserve(s.size());
        for (int q : s) {
          t.push_back(sq.next[static_cast<std::size_t>(q * sq.letters + u)]);
        }
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        nxt.insert(std::move(t));
      }
    }
    family = std::move(nxt);
  }
}

}  // namespace

std::optional<int> synchronizing_level(Diagram const& D) {
  auto info = sync_info(D);
  if (!info) {
    return std::nullopt;
  }
  return info->level;
}

std::vector<int> core_states(Diagram const& D) {
  auto info = sync_info(D);
  if (!info) {
    throw NotSynchronizing("the state subsets never collapse");
  }
  return info->core;
}

Diagram core(Diagram const& D) {
  return restrict_to(D, core_states(D)).first;
}

std::optional<std::vector<int>> strong_iso(Diagram const& A, Diagram const& B) {
  if (!strongly_connected(A) || !strongly_connected(B)) {
    throw NotCore("strong_iso expects strongly connected cores");
  }
  if (A.domain() != B.domain() || A.range() != B.range() || A.size() != B.size()) {
    return std::nullopt;
  }
  int const N = A.size();
  for (int b0 = 0; b0 < N; ++b0) {
    std::vector<int> fwd(static_cast<std::size_t>(N), -1);
    std::vector<int> bwd(static_cast<std::size_t>(N), -1);
    fwd[0] = b0;
    bwd[static_cast<std::size_t>(b0)] = 0;
    std::vector<int> todo{0};
    bool ok = true;
    while (ok && !todo.empty()) {
      int const a = todo.back();
      todo.pop_back();
      int const b = fwd[static_cast<std::size_t>(a)];
      for (int g = 0; g < A.gens() && ok; ++g) {
        if (A.out(a, g) != B.out(b, g)) {
          ok = false;
          break;
        }
        int const a2 = A.next(a, g);
        int const b2 = B.next(b, g);
        if (fwd[static_cast<std::size_t>(a2)] < 0) {
          if (bwd[static_cast<std::size_t>(b2)] >= 0) {
            ok = false;
            break;
          }
          fwd[static_cast<std::size_t>(a2)] = b2;
          bwd[static_cast<std::size_t>(b2)] = a2;
          todo.push_back(a2);
        } else if (fwd[static_cast<std::size_t>(a2)] != b2) {
          ok = false;
        }
      }
    }
    if (ok) {
      return fwd;
    }
  }
  return std::nullopt;
}

std::pair<Diagram, int> minimal_for_homeomorphism(Diagram const& D, int q, int depth_cap) {
  auto [sub, map] = restrict_to(D, reachable(D, q));
  Diagram const cr = complete_response(sub, depth_cap);
  Minimized mz = minimize(cr);
  return {std::move(mz.machine), mz.map[static_cast<std::size_t>(map[static_cast<std::size_t>(q)])]};
}

}  // namespace dvn
