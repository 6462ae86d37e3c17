// Copyright 2026 The affq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Short-cycle analysis of Tanner graphs.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "affq/base_affine.hpp"
#include "affq/cpm_lift.hpp"
#include "affq/random.hpp"
#include "affq/tanner_graph.hpp"

namespace affq {

// Closed walk checks[0] - qubits[0] - checks[1] - qubits[1] - ... - qubits[k-1] - checks[0].
struct Cycle {
  std::vector<std::uint32_t> checks;
  std::vector<std::uint32_t> qubits;

  std::size_t length() const { return 2 * checks.size(); }
};

// True iff the cycle is a closed walk in g with all vertices distinct.
inline bool is_cycle(const TannerGraph& g, const Cycle& cyc) {
  const std::size_t k = cyc.checks.size();
  if (k < 2 || cyc.qubits.size() != k) return false;
  auto distinct = [](std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!distinct(cyc.checks) || !distinct(cyc.qubits)) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (cyc.checks[i] >= g.num_checks() || cyc.qubits[i] >= g.num_qubits()) return false;
    if (!g.adjacent(cyc.checks[i], cyc.qubits[i])) return false;
    if (!g.adjacent(cyc.checks[(i + 1) % k], cyc.qubits[i])) return false;
  }
  return true;
}

// A 4-cycle exists iff two distinct checks share two qubits.
inline std::optional<Cycle> find_4cycle(const TannerGraph& g) {
  std::vector<std::uint32_t> first_shared(g.num_checks());
  std::vector<std::uint32_t> count(g.num_checks(), 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t c = 0; c < g.num_checks(); ++c) {
    touched.clear();
    std::optional<Cycle> hit;
    for (auto q : g.check_neighbors(c)) {
      for (auto d : g.qubit_neighbors(q)) {
        if (d == c) continue;
        if (count[d]++ == 0) {
          first_shared[d] = q;
          touched.push_back(d);
        } else if (!hit) {
          hit = Cycle{{c, d}, {first_shared[d], q}};
        }
      }
    }
    for (auto d : touched) count[d] = 0;
    if (hit) return hit;
  }
  return std::nullopt;
}

// Combinatorial 6-cycle scan: a 6-cycle is three checks meeting pairwise in
// three distinct qubits. Assumes no 4-cycles, as the pairwise intersections
// are then single qubits.
inline std::optional<Cycle> find_6cycle(const TannerGraph& g) {
  for (std::uint32_t c = 0; c < g.num_checks(); ++c) {
    const auto adj = g.check_neighbors(c);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        const auto u = adj[i];
        const auto w = adj[j];
        for (auto c1 : g.qubit_neighbors(u)) {
          if (c1 == c) continue;
          for (auto c2 : g.qubit_neighbors(w)) {
            if (c2 == c || c2 == c1) continue;
            // Shared qubit of c1 and c2 other than u, w.
            const auto a = g.check_neighbors(c1);
            const auto b = g.check_neighbors(c2);
            std::size_t x = 0;
            std::size_t y = 0;
            while (x < a.size() && y < b.size()) {
              if (a[x] < b[y]) {
                ++x;
              } else if (b[y] < a[x]) {
                ++y;
              } else {
                if (a[x] != u && a[x] != w) return Cycle{{c, c1, c2}, {u, a[x], w}};
                ++x;
                ++y;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

struct GirthResult {
  std::optional<std::size_t> girth;  // nullopt: the graph is a forest
  std::optional<Cycle> witness;
};

// Girth by breadth-first search from each source check, truncated at the best
// cycle found so far. Every cycle passes through a check, so the default
// (all checks as sources) is exact; for a graph with a cyclic automorphism a
// set of orbit representatives suffices.
inline GirthResult girth(const TannerGraph& g, std::span<const std::uint32_t> sources = {}) {
  const std::size_t nc = g.num_checks();
  const std::size_t nv = nc + g.num_qubits();
  // Vertex ids: checks [0, nc), qubits [nc, nv).
  auto neighbors = [&](std::uint32_t v) {
    return v < nc ? g.check_neighbors(v) : g.qubit_neighbors(v - nc);
  };
  auto offset = [&](std::uint32_t v) -> std::uint32_t { return v < nc ? static_cast<std::uint32_t>(nc) : 0U; };

  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(nv, kUnseen);
  std::vector<std::uint32_t> parent(nv, kUnseen);
  std::vector<std::uint32_t> queue;
  queue.reserve(nv);

  GirthResult best;
  std::size_t best_len = std::numeric_limits<std::size_t>::max();

  auto record = [&](std::uint32_t u, std::uint32_t w) {
    // Climb both tree paths to their meeting point; the loop through it is simple.
    std::vector<std::uint32_t> left{u};
    std::vector<std::uint32_t> right{w};
    std::uint32_t a = u;
    std::uint32_t b = w;
    while (a != b) {
      if (dist[a] >= dist[b]) {
        a = parent[a];
        left.push_back(a);
      } else {
        b = parent[b];
        right.push_back(b);
      }
    }
    right.pop_back();  // meeting vertex appears once, at the end of `left`
    std::vector<std::uint32_t> walk(left.rbegin(), left.rend());
    walk.insert(walk.end(), right.begin(), right.end());
    const std::size_t len = walk.size();
    if (len >= best_len) return;
    std::size_t start = 0;
    while (walk[start] >= nc) ++start;
    std::rotate(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(start), walk.end());
    Cycle cyc;
    for (std::size_t i = 0; i < len; i += 2) {
      cyc.checks.push_back(walk[i]);
      cyc.qubits.push_back(walk[i + 1] - static_cast<std::uint32_t>(nc));
    }
    best_len = len;
    best.girth = len;
    best.witness = std::move(cyc);
  };

  auto bfs = [&](std::uint32_t s) {
    queue.clear();
    queue.push_back(s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t u = queue[head];
      if (2 * static_cast<std::size_t>(dist[u]) >= best_len) break;
      for (auto raw : neighbors(u)) {
        const std::uint32_t w = raw + offset(u);
        if (w == parent[u]) continue;
        if (dist[w] == kUnseen) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (static_cast<std::size_t>(dist[u]) + dist[w] + 1 < best_len) {
          record(u, w);
        }
      }
    }
    for (auto v : queue) {
      dist[v] = kUnseen;
      parent[v] = kUnseen;
    }
  };

  if (sources.empty()) {
    for (std::uint32_t c = 0; c < nc; ++c) bfs(c);
  } else {
    for (auto c : sources) bfs(c);
  }
  return best;
}

// Check indices i*P for i in [0, checks/P): one representative per orbit of
// the cyclic shift acting on a P-fold circulant lift.
inline std::vector<std::uint32_t> lift_orbit_representatives(std::size_t num_checks, std::size_t lift_factor) {
  std::vector<std::uint32_t> reps;
  for (std::size_t c = 0; c < num_checks; c += lift_factor) reps.push_back(static_cast<std::uint32_t>(c));
  return reps;
}

// Girth of one side of a circulant lift, searching from orbit representatives.
inline GirthResult lifted_girth(const CssCode& lifted, Side side) {
  const TannerGraph& g = side == Side::X ? lifted.x_graph : lifted.z_graph;
  const auto reps = lift_orbit_representatives(g.num_checks(), std::max<std::size_t>(lifted.lift_factor, 1));
  return girth(g, reps);
}

struct GirthFloorResult {
  LiftSpec spec;
  std::uint64_t seed = 0;  // seed that produced `spec`
  std::size_t attempts = 0;
  bool reached = false;
};

// Draws label sets from seeds derive_seed(seed, 0), derive_seed(seed, 1), ...
// until both lifted graphs have girth >= girth_floor or the attempts run out.
// Labels are not otherwise optimized for cycles.
inline GirthFloorResult solve_labels_with_girth_floor(const CssCode& base, std::uint32_t P, std::uint64_t seed,
                                                      std::size_t girth_floor, std::size_t max_attempts) {
  GirthFloorResult out;
  for (std::size_t a = 0; a < max_attempts; ++a) {
    const std::uint64_t s = derive_seed(seed, a);
    out.spec = solve_labels(base, P, s);
    out.seed = s;
    out.attempts = a + 1;
    const CssCode lifted = expand(base, out.spec);
    auto ok = [&](Side side) {
      const auto g = lifted_girth(lifted, side);
      return !g.girth || *g.girth >= girth_floor;
    };
    if (ok(Side::X) && ok(Side::Z)) {
      out.reached = true;
      break;
    }
  }
  return out;
}

// The explicit 8-cycle of the base graph: with nonzero a in the first family
// subspace and b in the second (A and B on the X side, D1 and D2 on the Z side),
//   F1 - 0 - F2 - b - (b+F1) - (a+b) - (a+F2) - a - F1.
// Uses a = first basis vector of the first family, b = first of the second.
inline Cycle affine_8cycle(const BaseCode& base, Side side) {
  const auto& v = base.basis.vectors();
  const int fam1 = side == Side::X ? 0 : 3;
  const int fam2 = side == Side::X ? 1 : 4;
  const Point9 zero{};
  const Point9 a = v[kFamilyDirections[fam1][0]];
  const Point9 b = v[kFamilyDirections[fam2][0]];

  auto row_of = [&](int fam, Point9 p) {
    const std::size_t block = static_cast<std::size_t>(fam % 3) * kBaseRowsPerFamily;
    return static_cast<std::uint32_t>(block +
                                      detail::coset_index(base.basis.coordinates(p), kFamilyDirections[fam]));
  };
  Cycle cyc;
  cyc.checks = {row_of(fam1, zero), row_of(fam2, zero), row_of(fam1, b), row_of(fam2, a)};
  cyc.qubits = {zero.index, b.index, (a + b).index, a.index};
  return cyc;
}

}  // namespace affq
