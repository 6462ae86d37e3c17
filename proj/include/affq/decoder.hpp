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

// BP followed by syndrome repair on low-reliability candidate sets:
//   1. residual setup, 2. prefix OSD with bisection over the prefix size,
//   3. local OSD around the unsatisfied checks, 4. restricted fallback
//   supports, 5. re-BP when one side is clear, joint repair when neither is.
// The decoder only sees the syndromes and the channel; success against the
// true error is judged separately by check_sc.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "affq/bp.hpp"
#include "affq/css_code.hpp"
#include "affq/gf2.hpp"
#include "affq/tanner_graph.hpp"

namespace affq {

// Ordered by how far down the pipeline a decode had to go.
enum class DecodeStatus {
  BpConverged,
  RepairedOsd,
  RepairedLocal,
  RepairedFallback,
  RepairedJoint,
  FailedResidualSyndrome,
  LogicalError,
};

constexpr std::string_view to_string(DecodeStatus s) {
  switch (s) {
    case DecodeStatus::BpConverged: return "bp-converged";
    case DecodeStatus::RepairedOsd: return "repaired-osd";
    case DecodeStatus::RepairedLocal: return "repaired-local";
    case DecodeStatus::RepairedFallback: return "repaired-fallback";
    case DecodeStatus::RepairedJoint: return "repaired-joint";
    case DecodeStatus::FailedResidualSyndrome: return "failed-residual-syndrome";
    case DecodeStatus::LogicalError: return "logical-error";
  }
  return "?";
}

constexpr bool is_failure(DecodeStatus s) {
  return s == DecodeStatus::FailedResidualSyndrome || s == DecodeStatus::LogicalError;
}

// A fallback support given on the base graph. It applies to a residual of the
// given component when every unsatisfied check projects into base_checks; the
// candidate set is every lift copy of base_qubits plus the neighborhood of the
// unsatisfied checks.
struct RepairTemplate {
  Side side = Side::X;
  std::vector<std::uint32_t> base_checks;
  std::vector<std::uint32_t> base_qubits;
};

struct DecoderConfig {
  std::size_t max_iter = 64;
  std::size_t re_bp_iter = 16;
  double clip = 30.0;
  std::size_t fallback_threshold = 8;
  std::size_t joint_cap = 96;
  // Log-weight added to prior states agreeing with an already repaired
  // component when BP is rerun.
  double re_bp_bias = 4.0;
  std::string template_path;
};

struct DecodeOutcome {
  PauliError estimate;
  DecodeStatus status = DecodeStatus::FailedResidualSyndrome;
  std::size_t residual_syndrome_x = 0;  // weight of r_X = s_Z + Hz x^
  std::size_t residual_syndrome_z = 0;
  std::size_t bp_iterations = 0;
  // Filled in by classify() for logical errors.
  std::optional<BitVector> logical_residual_x;
  std::optional<BitVector> logical_residual_z;
};

// ---------------------------------------------------------------------------
// Residuals and reliability order.

struct Residuals {
  BitVector r_x;  // drives X-component repair, lives on the Hz checks
  BitVector r_z;

  const BitVector& of(Side component) const { return component == Side::X ? r_x : r_z; }
};

inline Residuals residual_setup(const CssCode& code, const Syndromes& syn, const PauliError& estimate) {
  BitVector rx = code.z_graph.syndrome(estimate.x);
  rx ^= syn.s_z;
  BitVector rz = code.x_graph.syndrome(estimate.z);
  rz ^= syn.s_x;
  return {std::move(rx), std::move(rz)};
}

// Least reliable first: ascending cost, ties by qubit index.
inline std::vector<std::uint32_t> reliability_order(std::span<const double> costs) {
  std::vector<std::uint32_t> order(costs.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return costs[a] < costs[b]; });
  return order;
}

inline void sort_by_cost(std::vector<std::uint32_t>& qubits, std::span<const double> costs) {
  std::sort(qubits.begin(), qubits.end(), [&](std::uint32_t a, std::uint32_t b) {
    return costs[a] < costs[b] || (costs[a] == costs[b] && a < b);
  });
}

inline double correction_cost(const BitVector& delta, std::span<const double> costs) {
  double c = 0.0;
  for (auto v : delta.support()) c += costs[v];
  return c;
}

// ---------------------------------------------------------------------------
// Solving on a candidate set.

enum class SolveVerdict { Solved, Ambiguous, Unsolvable };

struct SupportSolve {
  SolveVerdict verdict = SolveVerdict::Unsolvable;
  BitVector correction;  // length n, valid when Solved
};

namespace detail {

// Greedy descent on C(delta) over the nullspace basis.
inline void minimize_cost(BitVector& local, const BitMatrix& nullspace, std::span<const std::uint32_t> support,
                          std::span<const double> costs) {
  for (int pass = 0; pass < 8; ++pass) {
    bool improved = false;
    for (std::size_t k = 0; k < nullspace.rows(); ++k) {
      double change = 0.0;
      for (auto j : nullspace.row_support(k)) change += local.get(j) ? -costs[support[j]] : costs[support[j]];
      if (change < -1e-12) {
        const auto row = nullspace.row(k);
        xor_words(local.words(), row);
        improved = true;
      }
    }
    if (!improved) break;
  }
}

}  // namespace detail

// Solves H[:, support] delta = r with columns taken in the given order, so the
// particular solution favours the front of `support`. With `stabilizers` set,
// a nullspace leaving that row space makes the system ambiguous; without it
// the cheapest solution found is returned regardless.
inline SupportSolve solve_on_support(const TannerGraph& h, const BitVector& r, std::span<const std::uint32_t> support,
                                     std::span<const double> costs, const RowEchelonCache* stabilizers) {
  SupportSolve out{SolveVerdict::Unsolvable, BitVector(h.num_qubits())};
  const BitMatrix sub = h.columns(support);
  auto sol = solve(sub, r, true);
  if (!sol) return out;
  if (stabilizers != nullptr) {
    for (std::size_t k = 0; k < sol->nullspace.rows(); ++k) {
      BitVector eta(h.num_qubits());
      for (auto j : sol->nullspace.row_support(k)) eta.set(support[j]);
      if (!stabilizers->contains(eta)) {
        out.verdict = SolveVerdict::Ambiguous;
        return out;
      }
    }
  }
  detail::minimize_cost(sol->particular, sol->nullspace, support, costs);
  for (auto j : sol->particular.support()) out.correction.set(support[j]);
  if (h.syndrome(out.correction) != r) return out;  // cannot happen; recomputed by contract
  out.verdict = SolveVerdict::Solved;
  return out;
}

// ---------------------------------------------------------------------------
// Prefix OSD.

// Smallest m with r in the span of the first m ordered columns, found by a
// doubling bracket and bisection over incrementally built bases. Solvability
// is monotone in m because columns are only ever added.
inline std::optional<std::size_t> minimal_solvable_prefix(const TannerGraph& h, const BitVector& r,
                                                          std::span<const std::uint32_t> order) {
  if (r.none()) return 0;
  const std::size_t n = order.size();
  auto extend = [&](XorBasis& b, std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to; ++k) b.insert(h.column(order[k]));
  };
  XorBasis lo_basis(h.num_checks());
  std::size_t lo = 0;  // unsolvable
  std::size_t hi = 0;  // solvable, once found
  for (std::size_t m = 1;; m = std::min(2 * m, n)) {
    XorBasis trial = lo_basis;
    extend(trial, lo, m);
    if (trial.spans(r)) {
      hi = m;
      break;
    }
    if (m == n) return std::nullopt;
    lo = m;
    lo_basis = std::move(trial);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    XorBasis trial = lo_basis;
    extend(trial, lo, mid);
    if (trial.spans(r)) {
      hi = mid;
    } else {
      lo = mid;
      lo_basis = std::move(trial);
    }
  }
  return hi;
}

struct OsdResult {
  SolveVerdict verdict = SolveVerdict::Unsolvable;
  std::size_t m_sol = 0;
  std::optional<BitVector> correction;
};

// Prefix OSD on the cost order. `stabilizers` is the row space of the
// stabilizers of the repaired type (row(Hx) when repairing x against Hz).
inline OsdResult osd_bisect(const TannerGraph& h, const BitVector& r, std::span<const double> costs,
                            const RowEchelonCache& stabilizers) {
  OsdResult out;
  const auto order = reliability_order(costs);
  const auto m = minimal_solvable_prefix(h, r, order);
  if (!m) return out;
  out.m_sol = *m;
  if (*m == 0) {
    out.verdict = SolveVerdict::Solved;
    out.correction = BitVector(h.num_qubits());
    return out;
  }
  auto s = solve_on_support(h, r, std::span(order).first(*m), costs, &stabilizers);
  out.verdict = s.verdict;
  if (s.verdict == SolveVerdict::Solved) out.correction = std::move(s.correction);
  return out;
}

// ---------------------------------------------------------------------------
// Local OSD.

namespace detail {

inline std::vector<std::uint32_t> qubits_of_checks(const TannerGraph& h, std::span<const std::uint32_t> checks) {
  std::vector<std::uint32_t> q;
  for (auto c : checks) q.insert(q.end(), h.check_neighbors(c).begin(), h.check_neighbors(c).end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

inline std::vector<std::uint32_t> checks_of_qubits(const TannerGraph& h, std::span<const std::uint32_t> qubits) {
  std::vector<std::uint32_t> c;
  for (auto q : qubits) c.insert(c.end(), h.qubit_neighbors(q).begin(), h.qubit_neighbors(q).end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace detail

inline OsdResult osd_local(const TannerGraph& h, const BitVector& r, std::span<const double> costs,
                           const RowEchelonCache& stabilizers) {
  OsdResult out;
  if (r.none()) throw std::invalid_argument("osd_local: residual must be nonzero");
  const auto unsat = r.support();
  auto support = detail::qubits_of_checks(h, unsat);
  for (int round = 0; round < 2; ++round) {
    sort_by_cost(support, costs);
    auto s = solve_on_support(h, r, support, costs, &stabilizers);
    out.verdict = s.verdict;
    out.m_sol = support.size();
    if (s.verdict == SolveVerdict::Solved) {
      out.correction = std::move(s.correction);
      return out;
    }
    if (s.verdict == SolveVerdict::Ambiguous) return out;
    std::sort(support.begin(), support.end());
    support = detail::qubits_of_checks(h, detail::checks_of_qubits(h, support));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Restricted fallback.

// Projection of one side of a lifted code onto its base graph.
struct LiftProjection {
  std::size_t lift_factor = 1;
  std::size_t family_rows = 0;
  TannerGraph base;

  LiftProjection() = default;
  LiftProjection(const TannerGraph& lifted, std::size_t P, std::size_t family)
      : lift_factor(P), family_rows(family) {
    if (P == 0 || lifted.num_checks() % P != 0 || lifted.num_qubits() % P != 0) {
      throw std::invalid_argument("LiftProjection: sizes are not multiples of the lift factor");
    }
    std::vector<std::vector<std::uint32_t>> adj(lifted.num_checks() / P);
    for (std::size_t b = 0; b < adj.size(); ++b) {
      for (auto q : lifted.check_neighbors(b * P)) adj[b].push_back(static_cast<std::uint32_t>(q / P));
    }
    base = TannerGraph(lifted.num_qubits() / P, std::move(adj));
  }

  std::uint32_t base_check(std::uint32_t c) const { return static_cast<std::uint32_t>(c / lift_factor); }
  std::uint32_t base_qubit(std::uint32_t q) const { return static_cast<std::uint32_t>(q / lift_factor); }
  std::optional<std::size_t> family(std::uint32_t c) const {
    if (family_rows == 0) return std::nullopt;
    return base_check(c) / family_rows;
  }
};

namespace detail {

// Shortest base path (alternating check, qubit, check, ...) from `from` to
// the nearest base check in `targets`, as a list of base vertices.
inline std::optional<std::vector<std::uint32_t>> base_path(const TannerGraph& base, std::uint32_t from,
                                                           const std::vector<bool>& targets) {
  const std::size_t nc = base.num_checks();
  std::vector<std::int64_t> parent(nc + base.num_qubits(), -2);
  std::queue<std::uint32_t> queue;
  parent[from] = -1;
  queue.push(from);
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop();
    if (u < nc && u != from && targets[u]) {
      std::vector<std::uint32_t> path;
      for (std::int64_t v = u; v != -1; v = parent[v]) path.push_back(static_cast<std::uint32_t>(v));
      std::reverse(path.begin(), path.end());
      return path;
    }
    const auto nbrs = u < nc ? base.check_neighbors(u) : base.qubit_neighbors(u - nc);
    const std::uint32_t shift = u < nc ? static_cast<std::uint32_t>(nc) : 0U;
    for (auto w0 : nbrs) {
      const std::uint32_t w = w0 + shift;
      if (parent[w] != -2) continue;
      parent[w] = u;
      queue.push(w);
    }
  }
  return std::nullopt;
}

// Walks a base path in the lift starting at lifted check c; returns the lifted
// qubits visited. Each lifted check has exactly one lift of each base
// neighbour, so the walk is unique.
inline std::vector<std::uint32_t> walk_in_lift(const TannerGraph& h, const LiftProjection& proj, std::uint32_t c,
                                               std::span<const std::uint32_t> path) {
  const std::size_t nc = proj.base.num_checks();
  std::vector<std::uint32_t> qubits;
  std::uint32_t cur = c;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool to_qubit = path[i] >= nc;
    const std::uint32_t target = to_qubit ? static_cast<std::uint32_t>(path[i] - nc) : path[i];
    const auto nbrs = to_qubit ? h.check_neighbors(cur) : h.qubit_neighbors(cur);
    bool found = false;
    for (auto w : nbrs) {
      if ((to_qubit ? proj.base_qubit(w) : proj.base_check(w)) == target) {
        cur = w;
        found = true;
        break;
      }
    }
    if (!found) break;
    if (to_qubit) qubits.push_back(cur);
  }
  return qubits;
}

inline void merge_into(std::vector<std::uint32_t>& dst, std::span<const std::uint32_t> src) {
  dst.insert(dst.end(), src.begin(), src.end());
  std::sort(dst.begin(), dst.end());
  dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
}

}  // namespace detail

struct FallbackResult {
  std::optional<BitVector> correction;
  int support_type = 0;  // 1 path closure, 2 shared base row or family, 3 template
};

// Tries the three fallback support types in order; within a type the
// cheapest syndrome-clearing candidate wins. No uniqueness test here.
inline FallbackResult fallback_repair(const TannerGraph& h, const LiftProjection& proj, Side side, const BitVector& r,
                                      std::span<const double> costs, std::span<const RepairTemplate> templates,
                                      std::size_t threshold) {
  FallbackResult out;
  const auto unsat = r.support();
  if (unsat.empty() || unsat.size() > threshold) return out;
  const auto around = detail::qubits_of_checks(h, unsat);

  std::optional<BitVector> best;
  double best_cost = 0.0;
  auto consider = [&](std::vector<std::uint32_t> support) {
    detail::merge_into(support, around);
    sort_by_cost(support, costs);
    auto s = solve_on_support(h, r, support, costs, nullptr);
    if (s.verdict != SolveVerdict::Solved) return;
    const double c = correction_cost(s.correction, costs);
    if (!best || c < best_cost) {
      best = std::move(s.correction);
      best_cost = c;
    }
  };
  auto finish = [&](int type) {
    if (!best) return false;
    out.correction = std::move(best);
    out.support_type = type;
    return true;
  };

  // (i) path closure between unsatisfied checks with distinct base images.
  {
    std::vector<bool> targets(proj.base.num_checks(), false);
    for (auto u : unsat) targets[proj.base_check(u)] = true;
    for (auto u : unsat) {
      const auto b = proj.base_check(u);
      const bool had = targets[b];
      targets[b] = false;
      auto path = detail::base_path(proj.base, b, targets);
      targets[b] = had;
      if (!path) continue;
      auto forward = detail::walk_in_lift(h, proj, u, *path);
      std::vector<std::uint32_t> reversed(path->rbegin(), path->rend());
      // Close from the other end too, from every unsatisfied check over the target row.
      std::vector<std::uint32_t> support = forward;
      for (auto w : unsat) {
        if (proj.base_check(w) == path->back()) detail::merge_into(support, detail::walk_in_lift(h, proj, w, reversed));
      }
      consider(std::move(support));
    }
    if (finish(1)) return out;
  }

  // (ii) pairs over one base row or one base family: both neighbourhoods plus
  // the checks bridging them.
  for (std::size_t i = 0; i < unsat.size(); ++i) {
    for (std::size_t j = i + 1; j < unsat.size(); ++j) {
      const auto a = unsat[i];
      const auto b = unsat[j];
      const bool same_row = proj.base_check(a) == proj.base_check(b);
      const bool same_family = proj.family(a) && proj.family(a) == proj.family(b);
      if (!same_row && !same_family) continue;
      const std::uint32_t pair[2] = {a, b};
      const auto na = h.check_neighbors(a);
      const auto nb = h.check_neighbors(b);
      const auto ca = detail::checks_of_qubits(h, na);
      const auto cb = detail::checks_of_qubits(h, nb);
      std::vector<std::uint32_t> bridges;
      std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(bridges));
      auto support = detail::qubits_of_checks(h, pair);
      detail::merge_into(support, detail::qubits_of_checks(h, bridges));
      consider(std::move(support));
    }
  }
  if (finish(2)) return out;

  // (iii) templates.
  for (const auto& t : templates) {
    if (t.side != side) continue;
    bool covers = true;
    for (auto u : unsat) {
      if (std::find(t.base_checks.begin(), t.base_checks.end(), proj.base_check(u)) == t.base_checks.end()) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    std::vector<std::uint32_t> support;
    for (auto bq : t.base_qubits) {
      if (bq >= proj.base.num_qubits()) continue;
      for (std::size_t i = 0; i < proj.lift_factor; ++i) {
        support.push_back(static_cast<std::uint32_t>(bq * proj.lift_factor + i));
      }
    }
    consider(std::move(support));
  }
  finish(3);
  return out;
}

// ---------------------------------------------------------------------------
// Joint repair.

struct JointResult {
  std::optional<BitVector> delta_x;
  std::optional<BitVector> delta_z;
};

inline JointResult joint_repair(const CssCode& code, const Residuals& res, std::span<const double> cost_x,
                                std::span<const double> cost_z, std::size_t cap) {
  JointResult out;
  const auto ux = res.r_x.support();
  const auto uz = res.r_z.support();
  auto support = detail::qubits_of_checks(code.z_graph, ux);
  detail::merge_into(support, detail::qubits_of_checks(code.x_graph, uz));
  std::vector<double> combined(code.n());
  for (std::size_t v = 0; v < code.n(); ++v) combined[v] = cost_x[v] + cost_z[v];

  for (int round = 0; round < 2; ++round) {
    auto ranked = support;
    sort_by_cost(ranked, combined);
    if (ranked.size() > cap) ranked.resize(cap);
    auto sx = solve_on_support(code.z_graph, res.r_x, ranked, cost_x, nullptr);
    auto sz = solve_on_support(code.x_graph, res.r_z, ranked, cost_z, nullptr);
    if (sx.verdict == SolveVerdict::Solved && sz.verdict == SolveVerdict::Solved) {
      out.delta_x = std::move(sx.correction);
      out.delta_z = std::move(sz.correction);
      return out;
    }
    auto grow = detail::qubits_of_checks(code.z_graph, detail::checks_of_qubits(code.z_graph, support));
    detail::merge_into(grow, detail::qubits_of_checks(code.x_graph, detail::checks_of_qubits(code.x_graph, support)));
    support = std::move(grow);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Success criterion.

enum class ScStatus { Success, ResidualSyndrome, LogicalError };

struct ScResult {
  ScStatus status = ScStatus::Success;
  BitVector residual_x;  // x^ + x
  BitVector residual_z;
  bool x_is_stabilizer = true;
  bool z_is_stabilizer = true;
};

// Syndrome equations first, then x^ + x in row(Hx) and z^ + z in row(Hz).
inline ScResult check_sc(const CssCode& code, const PauliError& estimate, const PauliError& truth,
                         const StabilizerSpaces& spaces) {
  ScResult out;
  out.residual_x = estimate.x;
  out.residual_x ^= truth.x;
  out.residual_z = estimate.z;
  out.residual_z ^= truth.z;
  if (code.z_graph.syndrome(out.residual_x).any() || code.x_graph.syndrome(out.residual_z).any()) {
    out.status = ScStatus::ResidualSyndrome;
    return out;
  }
  out.x_is_stabilizer = spaces.x_rows.contains(out.residual_x);
  out.z_is_stabilizer = spaces.z_rows.contains(out.residual_z);
  out.status = out.x_is_stabilizer && out.z_is_stabilizer ? ScStatus::Success : ScStatus::LogicalError;
  return out;
}

// Applies the referee's verdict to a decoder outcome.
inline void classify(DecodeOutcome& outcome, const ScResult& sc) {
  if (sc.status == ScStatus::ResidualSyndrome) {
    outcome.status = DecodeStatus::FailedResidualSyndrome;
  } else if (sc.status == ScStatus::LogicalError) {
    outcome.status = DecodeStatus::LogicalError;
    if (!sc.x_is_stabilizer) outcome.logical_residual_x = sc.residual_x;
    if (!sc.z_is_stabilizer) outcome.logical_residual_z = sc.residual_z;
  }
}

// ---------------------------------------------------------------------------
// Pipeline.

// Holds read-only per-code data; decode() is const and may be called from
// many threads. The code must outlive the decoder.
class Decoder {
 public:
  explicit Decoder(const CssCode& code, DecoderConfig config = {}, std::vector<RepairTemplate> templates = {})
      : code_(&code),
        config_(std::move(config)),
        templates_(std::move(templates)),
        graph_(code),
        spaces_(code) {
    const std::size_t P = std::max<std::size_t>(code.lift_factor, 1);
    x_proj_ = LiftProjection(code.x_graph, P, code.family_rows);
    z_proj_ = LiftProjection(code.z_graph, P, code.family_rows);
  }

  const CssCode& code() const { return *code_; }
  const DecoderConfig& config() const { return config_; }
  const StabilizerSpaces& spaces() const { return spaces_; }

  DecodeOutcome decode(const Syndromes& syn, const DepolarizingPrior& prior) const {
    const CssCode& code = *code_;
    DecodeOutcome out;
    auto bp = bp_decode(code, graph_, syn, prior, config_.max_iter, config_.clip);
    out.bp_iterations = bp.state.iterations;
    out.estimate = std::move(bp.estimate);
    if (bp.state.converged) {
      out.status = DecodeStatus::BpConverged;
      return out;
    }

    DecodeStatus stage[2] = {DecodeStatus::BpConverged, DecodeStatus::BpConverged};
    bool clear[2] = {false, false};
    auto idx = [](Side s) { return s == Side::X ? 0 : 1; };

    Residuals res = residual_setup(code, syn, out.estimate);
    for (Side s : {Side::X, Side::Z}) {
      if (res.of(s).none()) {
        clear[idx(s)] = true;
        continue;
      }
      if (auto fix = repair(s, res.of(s), bp.state.costs(s))) {
        out.estimate.component(s) ^= fix->first;
        stage[idx(s)] = fix->second;
        clear[idx(s)] = true;
      }
    }

    if (clear[0] != clear[1]) {
      // One side done: rerun BP leaning on it and retry the other side.
      const Side done = clear[0] ? Side::X : Side::Z;
      const Side open = other(done);
      BpBias bias{&out.estimate, done == Side::X ? config_.re_bp_bias : 0.0,
                  done == Side::Z ? config_.re_bp_bias : 0.0};
      auto again = bp_decode(code, graph_, syn, prior, config_.re_bp_iter, config_.clip, &bias);
      out.bp_iterations += again.state.iterations;
      BitVector candidate = again.estimate.component(open);
      const TannerGraph& h = code.detecting_graph(open);
      BitVector r = h.syndrome(candidate);
      r ^= syn.detecting(open);
      if (r.none()) {
        out.estimate.component(open) = std::move(candidate);
        clear[idx(open)] = true;
      } else if (auto fix = repair(open, r, again.state.costs(open))) {
        candidate ^= fix->first;
        out.estimate.component(open) = std::move(candidate);
        stage[idx(open)] = fix->second;
        clear[idx(open)] = true;
      }
    } else if (!clear[0] && !clear[1]) {
      res = residual_setup(code, syn, out.estimate);
      auto joint = joint_repair(code, res, bp.state.cost_x, bp.state.cost_z, config_.joint_cap);
      if (joint.delta_x && joint.delta_z) {
        out.estimate.x ^= *joint.delta_x;
        out.estimate.z ^= *joint.delta_z;
        stage[0] = stage[1] = DecodeStatus::RepairedJoint;
        clear[0] = clear[1] = true;
      }
    }

    res = residual_setup(code, syn, out.estimate);
    out.residual_syndrome_x = res.r_x.weight();
    out.residual_syndrome_z = res.r_z.weight();
    if (res.r_x.any() || res.r_z.any()) {
      out.status = DecodeStatus::FailedResidualSyndrome;
    } else {
      out.status = std::max(stage[0], stage[1]);
    }
    return out;
  }

 private:
  // Stages 2 to 4 on one component; returns the correction and the stage that produced it.
  std::optional<std::pair<BitVector, DecodeStatus>> repair(Side component, const BitVector& r,
                                                           std::span<const double> costs) const {
    const TannerGraph& h = code_->detecting_graph(component);
    const RowEchelonCache& stab = spaces_.of(component);
    auto osd = osd_bisect(h, r, costs, stab);
    if (osd.correction) return std::pair{std::move(*osd.correction), DecodeStatus::RepairedOsd};
    auto local = osd_local(h, r, costs, stab);
    if (local.correction) return std::pair{std::move(*local.correction), DecodeStatus::RepairedLocal};
    const LiftProjection& proj = component == Side::X ? z_proj_ : x_proj_;
    auto fb = fallback_repair(h, proj, component, r, costs, templates_, config_.fallback_threshold);
    if (fb.correction) return std::pair{std::move(*fb.correction), DecodeStatus::RepairedFallback};
    return std::nullopt;
  }

  const CssCode* code_;
  DecoderConfig config_;
  std::vector<RepairTemplate> templates_;
  BpGraph graph_;
  StabilizerSpaces spaces_;
  LiftProjection x_proj_;
  LiftProjection z_proj_;
};

}  // namespace affq
