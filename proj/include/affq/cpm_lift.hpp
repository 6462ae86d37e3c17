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

// Circulant permutation matrix (CPM) lifts of the base pair.
//
// Convention: I_P(t) has its one in row i at column (i + t) mod P. Lifted row
// r*P + i and lifted qubit v*P + j are copy i of base row r and copy j of base
// qubit v.
//
// Orthogonality after lifting: an X-row r and a Z-row s of the base meet in
// zero or two qubits {v1, v2}. The lifted blocks are orthogonal iff
//   x(r,v1) - z(s,v1) == x(r,v2) - z(s,v2)  (mod P).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "affq/base_affine.hpp"
#include "affq/css_code.hpp"
#include "affq/gf2.hpp"
#include "affq/random.hpp"

namespace affq {

inline BitMatrix cpm(std::size_t P, std::size_t t) {
  if (P == 0 || t >= P) throw std::invalid_argument("cpm: need 0 <= t < P");
  BitMatrix m(P, P);
  for (std::size_t i = 0; i < P; ++i) m.set(i, (i + t) % P);
  return m;
}

// Shift labels on the supports of the base matrices. Edge (r, v) of a side is
// addressed by its position in the sorted support of row r.
struct LiftSpec {
  std::uint32_t P = 1;
  std::vector<std::vector<std::uint32_t>> x_labels;  // [x_row][position]
  std::vector<std::vector<std::uint32_t>> z_labels;  // [z_row][position]

  bool operator==(const LiftSpec&) const = default;
};

namespace detail {

inline std::size_t edge_position(const TannerGraph& g, std::size_t row, std::size_t qubit) {
  const auto adj = g.check_neighbors(row);
  const auto it = std::lower_bound(adj.begin(), adj.end(), static_cast<std::uint32_t>(qubit));
  if (it == adj.end() || *it != qubit) throw std::out_of_range("edge_position: not an edge");
  return static_cast<std::size_t>(it - adj.begin());
}

struct CrossPair {
  std::uint32_t x_row, z_row;
  std::uint32_t q1, q2;  // q1 < q2
};

// All (X-row, Z-row) pairs whose supports meet, with their two common qubits.
// Throws if an intersection is not of size 0 or 2.
inline std::vector<CrossPair> cross_pairs(const CssCode& base) {
  std::vector<CrossPair> out;
  const auto& gx = base.x_graph;
  const auto& gz = base.z_graph;
  std::vector<std::vector<std::uint32_t>> common(gz.num_checks());
  std::vector<std::uint32_t> touched;
  for (std::uint32_t r = 0; r < gx.num_checks(); ++r) {
    touched.clear();
    for (auto q : gx.check_neighbors(r)) {
      for (auto s : gz.qubit_neighbors(q)) {
        if (common[s].empty()) touched.push_back(s);
        common[s].push_back(q);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto s : touched) {
      if (common[s].size() != 2) {
        throw std::invalid_argument("lift: X-row " + std::to_string(r) + " and Z-row " + std::to_string(s) +
                                    " meet in " + std::to_string(common[s].size()) + " qubits (need 0 or 2)");
      }
      out.push_back({r, s, common[s][0], common[s][1]});
      common[s].clear();
    }
  }
  return out;
}

inline std::uint32_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid; a must be a unit mod m.
  std::int64_t t = 0;
  std::int64_t new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m);
  std::int64_t new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint32_t>(t);
}

}  // namespace detail

inline std::uint32_t label_x(const CssCode& base, const LiftSpec& spec, std::size_t row, std::size_t qubit) {
  return spec.x_labels[row][detail::edge_position(base.x_graph, row, qubit)];
}
inline std::uint32_t label_z(const CssCode& base, const LiftSpec& spec, std::size_t row, std::size_t qubit) {
  return spec.z_labels[row][detail::edge_position(base.z_graph, row, qubit)];
}

struct CongruenceViolation {
  std::uint32_t x_row, z_row;
  std::uint32_t q1, q2;
};

// Checks every two-point intersection; returns the first violated pair.
inline std::optional<CongruenceViolation> find_congruence_violation(const CssCode& base, const LiftSpec& spec) {
  const std::uint64_t P = spec.P;
  for (const auto& cp : detail::cross_pairs(base)) {
    const std::uint64_t d1 = (label_x(base, spec, cp.x_row, cp.q1) + P - label_z(base, spec, cp.z_row, cp.q1)) % P;
    const std::uint64_t d2 = (label_x(base, spec, cp.x_row, cp.q2) + P - label_z(base, spec, cp.z_row, cp.q2)) % P;
    if (d1 != d2) return CongruenceViolation{cp.x_row, cp.z_row, cp.q1, cp.q2};
  }
  return std::nullopt;
}

inline LiftSpec zero_labels(const CssCode& base, std::uint32_t P) {
  if (P < 1) throw std::invalid_argument("lift factor must be >= 1");
  LiftSpec spec;
  spec.P = P;
  for (std::size_t r = 0; r < base.x_graph.num_checks(); ++r) {
    spec.x_labels.emplace_back(base.x_graph.check_neighbors(r).size(), 0U);
  }
  for (std::size_t s = 0; s < base.z_graph.num_checks(); ++s) {
    spec.z_labels.emplace_back(base.z_graph.check_neighbors(s).size(), 0U);
  }
  return spec;
}

struct LabelSystemStats {
  std::size_t equations = 0;
  std::size_t variables = 0;
  std::size_t pivots = 0;
  std::size_t pinned = 0;  // variables forced to zero by rows without a unit pivot
};

// Solves the congruence system over Z_P by Gauss-Jordan elimination. Pivots
// are entries that are units mod P (all initial coefficients are +-1), taken
// column by column with the lowest eligible row. Free variables are drawn
// uniformly from Z_P; pivot variables follow by back-substitution.
inline LiftSpec solve_labels(const CssCode& base, std::uint32_t P, std::uint64_t seed,
                             LabelSystemStats* stats = nullptr) {
  LiftSpec spec = zero_labels(base, P);
  const auto pairs = detail::cross_pairs(base);

  // Variable numbering: x edges first, then z edges, each in row-major support order.
  std::vector<std::size_t> x_offset(base.x_graph.num_checks() + 1, 0);
  for (std::size_t r = 0; r < base.x_graph.num_checks(); ++r) {
    x_offset[r + 1] = x_offset[r] + base.x_graph.check_neighbors(r).size();
  }
  std::vector<std::size_t> z_offset(base.z_graph.num_checks() + 1, x_offset.back());
  for (std::size_t s = 0; s < base.z_graph.num_checks(); ++s) {
    z_offset[s + 1] = z_offset[s] + base.z_graph.check_neighbors(s).size();
  }
  const std::size_t vars = z_offset.back();
  const std::size_t eqs = pairs.size();
  const std::uint64_t mod = P;

  std::vector<std::uint32_t> m(eqs * vars, 0);
  auto at = [&](std::size_t e, std::size_t v) -> std::uint32_t& { return m[e * vars + v]; };
  auto add = [&](std::size_t e, std::size_t v, std::int64_t c) {
    const std::int64_t cur = at(e, v);
    at(e, v) = static_cast<std::uint32_t>(((cur + c) % static_cast<std::int64_t>(mod) + static_cast<std::int64_t>(mod)) %
                                          static_cast<std::int64_t>(mod));
  };
  for (std::size_t e = 0; e < eqs; ++e) {
    const auto& cp = pairs[e];
    // x(r,q1) - z(s,q1) - x(r,q2) + z(s,q2) == 0
    add(e, x_offset[cp.x_row] + detail::edge_position(base.x_graph, cp.x_row, cp.q1), 1);
    add(e, z_offset[cp.z_row] + detail::edge_position(base.z_graph, cp.z_row, cp.q1), -1);
    add(e, x_offset[cp.x_row] + detail::edge_position(base.x_graph, cp.x_row, cp.q2), -1);
    add(e, z_offset[cp.z_row] + detail::edge_position(base.z_graph, cp.z_row, cp.q2), 1);
  }

  std::vector<bool> used(eqs, false);
  std::vector<std::uint32_t> pivot_row_of(vars, ~0U);
  std::vector<std::uint32_t> pivot_cols;
  std::vector<std::uint32_t> nz;
  for (std::size_t col = 0; col < vars; ++col) {
    std::size_t pr = eqs;
    for (std::size_t e = 0; e < eqs; ++e) {
      if (!used[e] && at(e, col) != 0 && std::gcd<std::uint64_t, std::uint64_t>(at(e, col), mod) == 1) {
        pr = e;
        break;
      }
    }
    if (pr == eqs) continue;
    used[pr] = true;
    pivot_row_of[col] = static_cast<std::uint32_t>(pr);
    pivot_cols.push_back(static_cast<std::uint32_t>(col));
    const std::uint64_t inv = detail::mod_inverse(at(pr, col), mod);
    nz.clear();
    for (std::size_t v = 0; v < vars; ++v) {
      if (at(pr, v) != 0) {
        at(pr, v) = static_cast<std::uint32_t>(at(pr, v) * inv % mod);
        nz.push_back(static_cast<std::uint32_t>(v));
      }
    }
    for (std::size_t e = 0; e < eqs; ++e) {
      if (e == pr || at(e, col) == 0) continue;
      const std::uint64_t f = at(e, col);
      for (auto v : nz) {
        at(e, v) = static_cast<std::uint32_t>((at(e, v) + mod * mod - f * at(pr, v) % mod) % mod);
      }
    }
  }

  // Rows left without a unit pivot: pin their variables to zero.
  std::vector<bool> pinned(vars, false);
  std::size_t pinned_count = 0;
  for (std::size_t e = 0; e < eqs; ++e) {
    if (used[e]) continue;
    for (std::size_t v = 0; v < vars; ++v) {
      if (at(e, v) != 0 && !pinned[v]) {
        pinned[v] = true;
        ++pinned_count;
      }
    }
  }

  Rng rng(derive_seed(seed, P));
  std::vector<std::uint64_t> value(vars, 0);
  for (std::size_t v = 0; v < vars; ++v) {
    if (pivot_row_of[v] == ~0U && !pinned[v]) value[v] = uniform_below(rng, mod);
  }
  for (auto col : pivot_cols) {
    const std::size_t pr = pivot_row_of[col];
    std::uint64_t acc = 0;
    for (std::size_t v = 0; v < vars; ++v) {
      if (v != col && at(pr, v) != 0) acc = (acc + at(pr, v) * value[v]) % mod;
    }
    value[col] = (mod - acc) % mod;
  }

  for (std::size_t r = 0; r < base.x_graph.num_checks(); ++r) {
    for (std::size_t k = 0; k < spec.x_labels[r].size(); ++k) {
      spec.x_labels[r][k] = static_cast<std::uint32_t>(value[x_offset[r] + k]);
    }
  }
  for (std::size_t s = 0; s < base.z_graph.num_checks(); ++s) {
    for (std::size_t k = 0; k < spec.z_labels[s].size(); ++k) {
      spec.z_labels[s][k] = static_cast<std::uint32_t>(value[z_offset[s] + k]);
    }
  }
  if (stats != nullptr) *stats = {eqs, vars, pivot_cols.size(), pinned_count};
  if (auto bad = find_congruence_violation(base, spec)) {
    throw std::logic_error("solve_labels produced a congruence violation at X-row " + std::to_string(bad->x_row) +
                           ", Z-row " + std::to_string(bad->z_row));
  }
  return spec;
}

inline CssCode expand(const CssCode& base, const LiftSpec& spec) {
  const std::size_t P = spec.P;
  auto lift_side = [&](const TannerGraph& g, const std::vector<std::vector<std::uint32_t>>& labels) {
    std::vector<std::vector<std::uint32_t>> adj(g.num_checks() * P);
    for (std::size_t r = 0; r < g.num_checks(); ++r) {
      const auto nb = g.check_neighbors(r);
      for (std::size_t i = 0; i < P; ++i) {
        auto& row = adj[r * P + i];
        for (std::size_t k = 0; k < nb.size(); ++k) {
          row.push_back(static_cast<std::uint32_t>(nb[k] * P + (i + labels[r][k]) % P));
        }
      }
    }
    return TannerGraph(g.num_qubits() * P, std::move(adj));
  };
  CssCode out;
  out.x_graph = lift_side(base.x_graph, spec.x_labels);
  out.z_graph = lift_side(base.z_graph, spec.z_labels);
  out.hx = out.x_graph.to_matrix();
  out.hz = out.z_graph.to_matrix();
  out.lift_factor = base.lift_factor * P;
  out.family_rows = base.family_rows;
  return out;
}

// A base code with a label assignment; the binary matrices are expanded on
// first use.
class QcLiftedCode {
 public:
  QcLiftedCode(std::shared_ptr<const BaseCode> base, LiftSpec spec)
      : base_(std::move(base)), spec_(std::move(spec)), cache_(std::make_unique<Cache>()) {
    if (auto bad = find_congruence_violation(base_->code, spec_)) {
      throw std::invalid_argument("QcLiftedCode: congruence violated at X-row " + std::to_string(bad->x_row) +
                                  ", Z-row " + std::to_string(bad->z_row));
    }
  }

  const BaseCode& base() const { return *base_; }
  const LiftSpec& spec() const { return spec_; }
  std::uint32_t lift_factor() const { return spec_.P; }

  const CssCode& expanded() const {
    std::call_once(cache_->once, [this] { cache_->code = expand(base_->code, spec_); });
    return cache_->code;
  }

 private:
  struct Cache {
    std::once_flag once;
    CssCode code;
  };
  std::shared_ptr<const BaseCode> base_;
  LiftSpec spec_;
  std::unique_ptr<Cache> cache_;
};

inline CodeDimension lifted_dimension(const QcLiftedCode& code) { return code_dimension(code.expanded()); }

}  // namespace affq
