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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <set>

#include "affq/base_affine.hpp"
#include "affq/bp.hpp"
#include "affq/cpm_lift.hpp"
#include "affq/decoder.hpp"
#include "affq/logical_search.hpp"
#include "affq/sim.hpp"
#include "oracles.hpp"

namespace {

using affq::BitVector;
using affq::CssCode;
using affq::DecodeStatus;
using affq::PauliError;
using affq::Side;
using affq::SolveVerdict;
using affq::TannerGraph;

const affq::BaseCode& base() {
  static const affq::BaseCode b = affq::build_base(affq::BasisChoice::standard());
  return b;
}

const CssCode& lifted4() {
  static const CssCode c = affq::expand(base().code, affq::solve_labels(base().code, 4, 1));
  return c;
}

TannerGraph random_graph(std::mt19937& gen, std::size_t checks, std::size_t qubits, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<std::vector<std::uint32_t>> adj(checks);
  for (auto& row : adj) {
    for (std::uint32_t q = 0; q < qubits; ++q) {
      if (bit(gen)) row.push_back(q);
    }
  }
  return TannerGraph(qubits, std::move(adj));
}

BitVector random_bits(std::mt19937& gen, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, gen() & 1U);
  return v;
}

std::vector<double> random_costs(std::mt19937& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> c(n);
  for (auto& x : c) x = u(gen);
  return c;
}

// ---------------------------------------------------------------------------
// Belief propagation.

TEST(Bp, ExactMarginalsOnATree) {
  // One X-check on {0,1} and one Z-check on {1,2}: the factor graph is a tree.
  affq::BitMatrix hx(1, 3);
  affq::BitMatrix hz(1, 3);
  hx.set(0, 0);
  hx.set(0, 1);
  hz.set(0, 1);
  hz.set(0, 2);
  const CssCode code = CssCode::from_matrices(hx, hz);
  std::size_t compared = 0;
  for (double p : {0.05, 0.2}) {
    for (int sx = 0; sx < 2; ++sx) {
      for (int sz = 0; sz < 2; ++sz) {
        affq::Syndromes syn{BitVector(1), BitVector(1)};
        syn.s_x.set(0, sx);
        syn.s_z.set(0, sz);
        // Posterior by enumeration of all 64 Pauli errors.
        const std::array<double, 4> prior{1 - p, p / 3, p / 3, p / 3};
        std::array<std::array<double, 4>, 3> post{};
        double total = 0.0;
        for (int e = 0; e < 64; ++e) {
          const int s[3] = {e & 3, (e >> 2) & 3, (e >> 4) & 3};
          const int zbits = static_cast<int>(affq::has_z(s[0])) ^ static_cast<int>(affq::has_z(s[1]));
          const int xbits = static_cast<int>(affq::has_x(s[1])) ^ static_cast<int>(affq::has_x(s[2]));
          if (zbits != sx || xbits != sz) continue;
          const double w = prior[s[0]] * prior[s[1]] * prior[s[2]];
          total += w;
          for (int v = 0; v < 3; ++v) post[v][s[v]] += w;
        }
        const auto r = affq::bp_decode(code, syn, affq::DepolarizingPrior{p}, 10);
        if (r.state.iterations < 2) continue;
        ++compared;
        for (int v = 0; v < 3; ++v) {
          for (int s = 0; s < 4; ++s) EXPECT_NEAR(r.state.marginals[v][s], post[v][s] / total, 1e-9);
        }
      }
    }
  }
  EXPECT_GE(compared, 4U);
}

TEST(Bp, ZeroSyndromeGivesIdentity) {
  for (double p : {0.0, 0.05}) {
    const affq::Syndromes syn{BitVector(192), BitVector(192)};
    const auto r = affq::bp_decode(base().code, syn, affq::DepolarizingPrior{p}, 8);
    EXPECT_TRUE(r.state.converged);
    EXPECT_EQ(r.state.iterations, 1U);
    EXPECT_EQ(r.estimate.weight(), 0U);
  }
}

TEST(Bp, PriorOutsideRangeRejected) {
  EXPECT_THROW(affq::DepolarizingPrior{1.0}.probabilities(), std::invalid_argument);
  EXPECT_THROW(affq::DepolarizingPrior{-0.1}.probabilities(), std::invalid_argument);
}

TEST(Bp, CostsAreClippedLogRatios) {
  PauliError e(512);
  e.x.set(17);
  const auto r = affq::bp_decode(base().code, affq::compute_syndrome(base().code, e), affq::DepolarizingPrior{0.05}, 30,
                                 20.0);
  for (std::size_t v = 0; v < 512; ++v) {
    for (Side s : {Side::X, Side::Z}) {
      const double c = r.state.costs(s)[v];
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 20.0);
    }
    double sum = 0.0;
    for (double m : r.state.marginals[v]) sum += m;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Prefix OSD.

TEST(Osd, MinimalPrefixMatchesRankOracle) {
  std::mt19937 gen(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t checks = 2 + gen() % 11;
    const std::size_t qubits = 2 + gen() % 23;
    const TannerGraph h = random_graph(gen, checks, qubits, 0.3);
    BitVector r = random_bits(gen, checks);
    std::vector<std::uint32_t> order(qubits);
    std::iota(order.begin(), order.end(), 0U);
    std::shuffle(order.begin(), order.end(), gen);

    const auto dense = oracle::to_dense(h.to_matrix());
    const auto rb = oracle::bits(r);
    std::optional<std::size_t> expected;
    for (std::size_t m = 0; m <= qubits && !expected; ++m) {
      if (oracle::solvable(oracle::column_prefix(dense, order, m), rb)) expected = m;
    }
    const auto got = affq::minimal_solvable_prefix(h, r, order);
    ASSERT_EQ(got, expected) << "trial " << trial;
    // Solvability is monotone beyond the minimum.
    if (expected) {
      for (std::size_t m = *expected; m <= qubits; ++m) {
        ASSERT_TRUE(oracle::solvable(oracle::column_prefix(dense, order, m), rb));
      }
    }
  }
}

TEST(Osd, BisectSolvesOnThePrefixOnly) {
  std::mt19937 gen(52);
  std::size_t solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const TannerGraph h = random_graph(gen, 12, 18, 0.25);
    // Syndrome of a random sparse error, so a solution always exists.
    BitVector e(18);
    for (int k = 0; k < 3; ++k) e.set(gen() % 18);
    const BitVector r = h.syndrome(e);
    const auto costs = random_costs(gen, 18);
    const affq::RowEchelonCache none(affq::BitMatrix(0, 18));
    const auto res = affq::osd_bisect(h, r, costs, none);
    const auto order = affq::reliability_order(costs);
    ASSERT_EQ(res.m_sol, *affq::minimal_solvable_prefix(h, r, order));
    // With an empty stabilizer space the prefix solution is unique iff its columns are independent.
    const auto prefix = oracle::column_prefix(oracle::to_dense(h.to_matrix()), order, res.m_sol);
    const bool unique = oracle::rank(prefix) == res.m_sol;
    if (r.none()) {
      EXPECT_EQ(res.verdict, SolveVerdict::Solved);
      continue;
    }
    EXPECT_EQ(res.verdict == SolveVerdict::Solved, unique);
    if (res.verdict != SolveVerdict::Solved) {
      EXPECT_EQ(res.verdict, SolveVerdict::Ambiguous);
      continue;
    }
    ++solved;
    ASSERT_TRUE(res.correction.has_value());
    EXPECT_EQ(h.syndrome(*res.correction), r);
    for (auto q : res.correction->support()) {
      const auto pos = std::find(order.begin(), order.end(), q) - order.begin();
      EXPECT_LT(static_cast<std::size_t>(pos), res.m_sol);
    }
  }
  EXPECT_GT(solved, 20U);
}

TEST(Osd, SingleColumnPrefix) {
  const auto& h = base().code.z_graph;
  std::vector<double> costs(512, 5.0);
  costs[77] = 0.5;
  const BitVector r = h.column(77);
  const auto res = affq::osd_bisect(h, r, costs, affq::StabilizerSpaces(base().code).of(Side::X));
  EXPECT_EQ(res.m_sol, 1U);
  ASSERT_EQ(res.verdict, SolveVerdict::Solved);
  EXPECT_EQ(res.correction->support(), (std::vector<std::uint32_t>{77}));
}

TEST(Osd, ReliabilityOrderIsStable) {
  const std::vector<double> costs{2.0, 1.0, 2.0, 0.5, 1.0};
  EXPECT_EQ(affq::reliability_order(costs), (std::vector<std::uint32_t>{3, 1, 4, 0, 2}));
}

TEST(Osd, AmbiguityWhenNullspaceLeavesStabilizers) {
  // Qubits 0 and 1 have the same column, and the syndrome needs qubit 2, the
  // most reliable one, so the minimal prefix contains their sum in its kernel.
  const TannerGraph h(3, {{0, 1}, {2}});
  BitVector r(2);
  r.set(0);
  r.set(1);
  const std::vector<double> costs{0.1, 0.2, 3.0};
  const affq::RowEchelonCache none(affq::BitMatrix(0, 3));
  const auto amb = affq::osd_bisect(h, r, costs, none);
  EXPECT_EQ(amb.m_sol, 3U);
  EXPECT_EQ(amb.verdict, SolveVerdict::Ambiguous);
  EXPECT_FALSE(amb.correction.has_value());
  // Once that kernel vector is declared a stabilizer the answer is unique.
  affq::BitMatrix stab(1, 3);
  stab.set(0, 0);
  stab.set(0, 1);
  const auto ok = affq::osd_bisect(h, r, costs, affq::RowEchelonCache(stab));
  ASSERT_EQ(ok.verdict, SolveVerdict::Solved);
  EXPECT_EQ(h.syndrome(*ok.correction), r);
  EXPECT_EQ(ok.correction->support(), (std::vector<std::uint32_t>{0, 2}));
}

// ---------------------------------------------------------------------------
// Local OSD.

TEST(LocalOsd, SingleFlipIsRecovered) {
  const affq::StabilizerSpaces spaces(base().code);
  std::mt19937 gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t q = gen() % 512;
    const BitVector r = base().code.z_graph.column(q);
    const auto costs = random_costs(gen, 512);
    const auto res = affq::osd_local(base().code.z_graph, r, costs, spaces.of(Side::X));
    ASSERT_EQ(res.verdict, SolveVerdict::Solved);
    EXPECT_EQ(res.correction->support(), (std::vector<std::uint32_t>{q}));
  }
  EXPECT_THROW(affq::osd_local(base().code.z_graph, BitVector(192), std::vector<double>(512, 1.0), spaces.of(Side::X)),
               std::invalid_argument);
}

TEST(LocalOsd, LoneCheckIsNeverReachable) {
  // Every check of the affine code sits in a row dependency, so no residual
  // made of one unsatisfied check has a solution anywhere.
  const CssCode code = affq::expand(base().code, affq::solve_labels(base().code, 4, 59));
  for (Side side : {Side::X, Side::Z}) {
    const affq::RowEchelonCache columns(code.detecting_matrix(side).transpose());
    for (std::uint32_t c = 0; c < 768; c += 7) {
      BitVector e(768);
      e.set(c);
      EXPECT_FALSE(columns.contains(e)) << c;
    }
  }
}

TEST(LocalOsd, FarApartChecksFallThrough) {
  // A ring of 40 checks. e_0 + e_20 is solved by either arc, but the expanded
  // neighbourhoods of checks 0 and 20 are disjoint and neither half solves a
  // lone check, so local OSD must give up while prefix OSD succeeds.
  const std::uint32_t L = 40;
  std::vector<std::vector<std::uint32_t>> adj(L);
  for (std::uint32_t c = 0; c < L; ++c) {
    adj[c] = {(c + L - 1) % L, c};
    std::sort(adj[c].begin(), adj[c].end());
  }
  const TannerGraph h(L, std::move(adj));
  BitVector r(L);
  r.set(0);
  r.set(20);
  std::mt19937 gen(60);
  const auto costs = random_costs(gen, L);
  affq::BitMatrix ones(1, L);
  for (std::uint32_t q = 0; q < L; ++q) ones.set(0, q);
  const affq::RowEchelonCache stab(ones);  // the whole ring is the only cycle

  const auto local = affq::osd_local(h, r, costs, stab);
  EXPECT_EQ(local.verdict, SolveVerdict::Unsolvable);
  EXPECT_FALSE(local.correction.has_value());

  const auto global = affq::osd_bisect(h, r, costs, stab);
  ASSERT_EQ(global.verdict, SolveVerdict::Solved);
  EXPECT_EQ(h.syndrome(*global.correction), r);
  EXPECT_EQ(global.correction->weight(), 20U);
}

TEST(LocalOsd, ExpandsOnceWhenTheFirstRingIsShort) {
  // Path of checks 0-1-2-3-4. Clearing e_0 + e_3 needs qubits 0, 1 and 2;
  // the first ring around checks 0 and 3 misses qubit 1, the expansion has it.
  const TannerGraph h(4, {{0}, {0, 1}, {1, 2}, {2, 3}, {3}});
  BitVector r(5);
  r.set(0);
  r.set(3);
  const affq::RowEchelonCache none(affq::BitMatrix(0, 4));
  const auto res = affq::osd_local(h, r, std::vector<double>(4, 1.0), none);
  ASSERT_EQ(res.verdict, SolveVerdict::Solved);
  EXPECT_EQ(res.correction->support(), (std::vector<std::uint32_t>{0, 1, 2}));
}

// ---------------------------------------------------------------------------
// Fallback and joint repair.

TEST(Fallback, SharedFamilyPairUsesBridgeChecks) {
  // Checks a=0 and b=1 form one family. The only a-b path runs a-q0-k-q1-b,
  // and q0+q1 leaves m unsatisfied; the solution also needs q2 and q3, which
  // sit on the bridge check k=2 only.
  const TannerGraph h(4, {{0}, {1}, {0, 1, 2, 3}, {0, 2}});
  const affq::LiftProjection proj(h, 1, 2);
  BitVector r(4);
  r.set(0);
  r.set(1);
  const auto res = affq::fallback_repair(h, proj, Side::X, r, std::vector<double>(4, 1.0), {}, 8);
  ASSERT_TRUE(res.correction.has_value());
  EXPECT_EQ(res.support_type, 2);
  EXPECT_EQ(res.correction->support(), (std::vector<std::uint32_t>{0, 1, 2, 3}));
  // Without the family relation the pair is not considered.
  const affq::LiftProjection flat(h, 1, 0);
  EXPECT_FALSE(affq::fallback_repair(h, flat, Side::X, r, std::vector<double>(4, 1.0), {}, 8).correction);
}

TEST(Fallback, ThresholdBoundsTheResidual) {
  const CssCode& code = lifted4();
  const affq::LiftProjection proj(code.z_graph, 4, 64);
  BitVector r(code.z_graph.num_checks());
  for (std::uint32_t c = 0; c < 9; ++c) r.set(c * 40);
  const auto res = affq::fallback_repair(code.z_graph, proj, Side::X, r, std::vector<double>(code.n(), 1.0), {}, 8);
  EXPECT_FALSE(res.correction.has_value());
}

TEST(Fallback, TemplatesReachDistantQubits) {
  // Components {c0,c1} and {c2,c3}; clearing c0 needs qubit 1, which no
  // unsatisfied check touches, and the checks are in no common row or family.
  const TannerGraph h(4, {{0}, {0, 1}, {2}, {2, 3}});
  const affq::LiftProjection proj(h, 1, 0);
  BitVector r(4);
  r.set(0);
  r.set(2);
  const std::vector<double> costs(4, 1.0);
  EXPECT_FALSE(affq::fallback_repair(h, proj, Side::X, r, costs, {}, 8).correction.has_value());

  const std::vector<affq::RepairTemplate> wrong_side{{Side::Z, {0, 2}, {1, 3}}};
  EXPECT_FALSE(affq::fallback_repair(h, proj, Side::X, r, costs, wrong_side, 8).correction.has_value());

  const std::vector<affq::RepairTemplate> lib{{Side::X, {0, 2}, {1, 3}}};
  const auto res = affq::fallback_repair(h, proj, Side::X, r, costs, lib, 8);
  ASSERT_TRUE(res.correction.has_value());
  EXPECT_EQ(res.support_type, 3);
  EXPECT_EQ(res.correction->support(), (std::vector<std::uint32_t>{0, 1, 2, 3}));
}

TEST(Fallback, PathClosureAcrossBaseRows) {
  const CssCode& code = lifted4();
  const auto& h = code.z_graph;
  const affq::LiftProjection proj(h, 4, 64);
  // Two qubits at distance four in the lift: their syndromes share no check.
  PauliError e(code.n());
  const std::uint32_t q0 = 100;
  const auto c0 = h.qubit_neighbors(q0)[0];
  std::uint32_t q1 = 0;
  for (auto q : h.check_neighbors(c0)) {
    if (q != q0) q1 = q;
  }
  e.x.set(q0);
  e.x.set(q1);
  const BitVector r = h.syndrome(e.x);
  ASSERT_EQ(r.weight(), 4U);
  const auto res = affq::fallback_repair(h, proj, Side::X, r, std::vector<double>(code.n(), 1.0), {}, 8);
  ASSERT_TRUE(res.correction.has_value());
  EXPECT_EQ(h.syndrome(*res.correction), r);
  EXPECT_EQ(res.support_type, 1);
}

TEST(Joint, ClearsBothResiduals) {
  const CssCode& code = base().code;
  std::mt19937 gen(55);
  for (int trial = 0; trial < 10; ++trial) {
    PauliError e(512);
    for (int k = 0; k < 3; ++k) {
      const auto q = gen() % 512;
      e.x.set(q);
      e.z.set(q);
    }
    const auto syn = affq::compute_syndrome(code, e);
    const auto res = affq::residual_setup(code, syn, PauliError(512));
    const auto cx = random_costs(gen, 512);
    const auto cz = random_costs(gen, 512);
    const auto j = affq::joint_repair(code, res, cx, cz, 96);
    ASSERT_TRUE(j.delta_x && j.delta_z);
    EXPECT_EQ(code.z_graph.syndrome(*j.delta_x), res.r_x);
    EXPECT_EQ(code.x_graph.syndrome(*j.delta_z), res.r_z);
  }
}

// ---------------------------------------------------------------------------
// Success criterion.

TEST(SuccessCriterion, DistinguishesTheThreeOutcomes) {
  const CssCode& code = base().code;
  const affq::StabilizerSpaces spaces(code);
  const auto logical = affq::find_low_weight_logical(code, Side::X, 8, 2000, 56);
  ASSERT_TRUE(logical.has_value());
  EXPECT_EQ(logical->weight(), 8U);

  PauliError truth(512);
  truth.x.set(3);
  truth.z.set(200);

  EXPECT_EQ(affq::check_sc(code, truth, truth, spaces).status, affq::ScStatus::Success);

  PauliError plus_stab = truth;
  plus_stab.x ^= code.hx.row_vector(7);
  plus_stab.z ^= code.hz.row_vector(9);
  EXPECT_EQ(affq::check_sc(code, plus_stab, truth, spaces).status, affq::ScStatus::Success);

  PauliError plus_logical = truth;
  plus_logical.x ^= *logical;
  const auto sc = affq::check_sc(code, plus_logical, truth, spaces);
  EXPECT_EQ(sc.status, affq::ScStatus::LogicalError);
  EXPECT_FALSE(sc.x_is_stabilizer);
  EXPECT_TRUE(sc.z_is_stabilizer);

  affq::DecodeOutcome out;
  out.status = DecodeStatus::BpConverged;
  affq::classify(out, sc);
  EXPECT_EQ(out.status, DecodeStatus::LogicalError);
  ASSERT_TRUE(out.logical_residual_x.has_value());
  EXPECT_EQ(*out.logical_residual_x, *logical);
  EXPECT_FALSE(out.logical_residual_z.has_value());

  PauliError off = truth;
  off.z.flip(11);
  EXPECT_EQ(affq::check_sc(code, off, truth, spaces).status, affq::ScStatus::ResidualSyndrome);
}

// ---------------------------------------------------------------------------
// Pipeline.

TEST(Pipeline, SingleErrorsOnTheBase) {
  const CssCode& code = base().code;
  const affq::Decoder dec(code);
  for (std::uint32_t q = 0; q < 512; q += 13) {
    for (int s = 1; s < 4; ++s) {
      PauliError e(512);
      e.x.set(q, affq::has_x(s));
      e.z.set(q, affq::has_z(s));
      auto out = dec.decode(affq::compute_syndrome(code, e), affq::DepolarizingPrior{0.01});
      EXPECT_FALSE(affq::is_failure(out.status));
      EXPECT_EQ(affq::check_sc(code, out.estimate, e, dec.spaces()).status, affq::ScStatus::Success);
    }
  }
}

TEST(Pipeline, ZeroSyndromeAtZeroNoise) {
  const affq::Decoder dec(base().code);
  const auto out = dec.decode({BitVector(192), BitVector(192)}, affq::DepolarizingPrior{0.0});
  EXPECT_EQ(out.status, DecodeStatus::BpConverged);
  EXPECT_EQ(out.estimate.weight(), 0U);
}

TEST(Pipeline, EstimatesMatchTheSyndromeUnlessFlagged) {
  const CssCode& code = lifted4();
  const affq::Decoder dec(code);
  std::size_t repaired = 0;
  for (std::uint64_t t = 0; t < 300; ++t) {
    affq::Rng rng(affq::derive_seed(57, t));
    const auto e = affq::sample_depolarizing(code.n(), 0.08, rng);
    const auto syn = affq::compute_syndrome(code, e);
    const auto out = dec.decode(syn, affq::DepolarizingPrior{0.08});
    if (out.status != DecodeStatus::BpConverged) ++repaired;
    if (out.status == DecodeStatus::FailedResidualSyndrome) {
      EXPECT_GT(out.residual_syndrome_x + out.residual_syndrome_z, 0U);
      continue;
    }
    EXPECT_EQ(affq::compute_syndrome(code, out.estimate).s_x, syn.s_x);
    EXPECT_EQ(affq::compute_syndrome(code, out.estimate).s_z, syn.s_z);
    EXPECT_EQ(out.residual_syndrome_x + out.residual_syndrome_z, 0U);
  }
  EXPECT_GT(repaired, 0U);
}

TEST(Pipeline, Deterministic) {
  const CssCode& code = lifted4();
  const affq::Decoder dec(code);
  affq::Rng rng(58);
  const auto e = affq::sample_depolarizing(code.n(), 0.09, rng);
  const auto syn = affq::compute_syndrome(code, e);
  const auto a = dec.decode(syn, affq::DepolarizingPrior{0.09});
  const auto b = dec.decode(syn, affq::DepolarizingPrior{0.09});
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.estimate.x, b.estimate.x);
  EXPECT_EQ(a.estimate.z, b.estimate.z);
  EXPECT_EQ(a.bp_iterations, b.bp_iterations);
}

TEST(Pipeline, StatusNamesAndOrder) {
  EXPECT_EQ(affq::to_string(DecodeStatus::RepairedLocal), "repaired-local");
  EXPECT_LT(DecodeStatus::BpConverged, DecodeStatus::RepairedOsd);
  EXPECT_LT(DecodeStatus::RepairedFallback, DecodeStatus::RepairedJoint);
  EXPECT_TRUE(affq::is_failure(DecodeStatus::LogicalError));
  EXPECT_FALSE(affq::is_failure(DecodeStatus::RepairedJoint));
}

}  // namespace
