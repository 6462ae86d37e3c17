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

#include <map>
#include <memory>
#include <utility>

#include "affq/base_affine.hpp"
#include "affq/cpm_lift.hpp"
#include "oracles.hpp"

namespace {

using affq::CssCode;
using affq::LiftSpec;

const affq::BaseCode& base() {
  static const affq::BaseCode b = affq::build_base(affq::BasisChoice::standard());
  return b;
}

// Number of (x_row, z_row) pairs with odd overlap, counted qubit by qubit.
std::size_t odd_overlaps(const CssCode& c) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> parity;
  for (std::size_t q = 0; q < c.n(); ++q) {
    for (auto r : c.x_graph.qubit_neighbors(q)) {
      for (auto s : c.z_graph.qubit_neighbors(q)) parity[{r, s}] ^= 1;
    }
  }
  std::size_t odd = 0;
  for (const auto& [_, v] : parity) odd += static_cast<std::size_t>(v);
  return odd;
}

// Expected entry of a lifted matrix from the block definition.
bool block_entry(const affq::BitMatrix& h, const std::vector<std::vector<std::uint32_t>>& labels, std::size_t P,
                 std::size_t row, std::size_t col) {
  const std::size_t r = row / P;
  const std::size_t i = row % P;
  const std::size_t v = col / P;
  const std::size_t j = col % P;
  if (!h.get(r, v)) return false;
  const auto sup = h.row_support(r);
  const std::size_t pos = std::find(sup.begin(), sup.end(), v) - sup.begin();
  return j == (i + labels[r][pos]) % P;
}

TEST(CpmLift, PermutationMatrixAlgebra) {
  for (std::size_t P : {1U, 2U, 5U, 8U}) {
    for (std::size_t a = 0; a < P; ++a) {
      const auto m = affq::cpm(P, a);
      for (std::size_t i = 0; i < P; ++i) EXPECT_EQ(m.row_support(i), (std::vector<std::uint32_t>{static_cast<std::uint32_t>((i + a) % P)}));
      EXPECT_EQ(m.transpose(), affq::cpm(P, (P - a) % P));
      for (std::size_t b = 0; b < P; ++b) EXPECT_EQ(m * affq::cpm(P, b), affq::cpm(P, (a + b) % P));
    }
  }
  EXPECT_THROW(affq::cpm(4, 4), std::invalid_argument);
  EXPECT_THROW(affq::cpm(0, 0), std::invalid_argument);
}

TEST(CpmLift, SolvedLabelsAreOrthogonalForManyP) {
  for (std::uint32_t P : {2U, 3U, 5U, 8U, 32U}) {
    const LiftSpec spec = affq::solve_labels(base().code, P, 41);
    EXPECT_FALSE(affq::find_congruence_violation(base().code, spec).has_value()) << "P=" << P;
    const CssCode lifted = affq::expand(base().code, spec);
    EXPECT_EQ(lifted.n(), 512U * P);
    EXPECT_EQ(lifted.hx.rows(), 192U * P);
    EXPECT_EQ(odd_overlaps(lifted), 0U) << "P=" << P;
    EXPECT_TRUE((lifted.hx * lifted.hz.transpose()).is_zero());
    EXPECT_TRUE(affq::verify_regularity_orthogonality(lifted).x_row_weights_ok);
    EXPECT_TRUE(affq::verify_regularity_orthogonality(lifted).z_column_weights_ok);
  }
}

TEST(CpmLift, ExpansionMatchesBlockDefinition) {
  const std::uint32_t P = 3;
  const LiftSpec spec = affq::solve_labels(base().code, P, 42);
  const CssCode lifted = affq::expand(base().code, spec);
  for (std::size_t row = 0; row < lifted.hx.rows(); row += 7) {
    for (std::size_t col = 0; col < lifted.n(); ++col) {
      ASSERT_EQ(lifted.hx.get(row, col), block_entry(base().code.hx, spec.x_labels, P, row, col));
      ASSERT_EQ(lifted.hz.get(row, col), block_entry(base().code.hz, spec.z_labels, P, row, col));
    }
  }
  EXPECT_EQ(lifted.lift_factor, P);
  EXPECT_EQ(lifted.family_rows, 64U);
}

TEST(CpmLift, DenseProductVanishesAtSmallP) {
  const LiftSpec spec = affq::solve_labels(base().code, 2, 43);
  const CssCode lifted = affq::expand(base().code, spec);
  const auto x = oracle::to_dense(lifted.hx);
  const auto z = oracle::to_dense(lifted.hz);
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t s = 0; s < z.size(); ++s) {
      int acc = 0;
      for (std::size_t j = 0; j < x[r].size(); ++j) acc ^= x[r][j] & z[s][j];
      ASSERT_EQ(acc, 0) << r << "," << s;
    }
  }
}

TEST(CpmLift, DeterministicPerSeed) {
  const auto a = affq::solve_labels(base().code, 8, 44);
  const auto b = affq::solve_labels(base().code, 8, 44);
  const auto c = affq::solve_labels(base().code, 8, 45);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(CpmLift, ZeroLabelsDoubleTheCode) {
  const auto lifted = affq::expand(base().code, affq::zero_labels(base().code, 2));
  const auto dim = affq::code_dimension(lifted);
  EXPECT_EQ(dim.k, 348U);
  EXPECT_EQ(odd_overlaps(lifted), 0U);
}

TEST(CpmLift, TrivialLiftIsTheBase) {
  const auto lifted = affq::expand(base().code, affq::solve_labels(base().code, 1, 46));
  EXPECT_EQ(lifted.hx, base().code.hx);
  EXPECT_EQ(lifted.hz, base().code.hz);
}

TEST(CpmLift, PerturbedLabelIsDetected) {
  LiftSpec spec = affq::solve_labels(base().code, 5, 47);
  spec.x_labels[10][3] = (spec.x_labels[10][3] + 1) % 5;
  const auto bad = affq::find_congruence_violation(base().code, spec);
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(bad->x_row, 10U);
  EXPECT_GT(odd_overlaps(affq::expand(base().code, spec)), 0U);
  auto shared = std::make_shared<const affq::BaseCode>(base());
  EXPECT_THROW(affq::QcLiftedCode(shared, spec), std::invalid_argument);
}

TEST(CpmLift, LiftedDimensionAtFour) {
  auto shared = std::make_shared<const affq::BaseCode>(base());
  const affq::QcLiftedCode code(shared, affq::solve_labels(base().code, 4, 1));
  const auto dim = affq::lifted_dimension(code);
  EXPECT_EQ(dim.rank_x, oracle::rank(oracle::to_dense(code.expanded().hx)));
  EXPECT_GE(dim.k, 512U);
}

}  // namespace
