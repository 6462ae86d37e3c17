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

#include <set>
#include <vector>

#include "affq/base_affine.hpp"
#include "oracles.hpp"

namespace {

using affq::BaseCode;
using affq::BasisChoice;
using Support = std::vector<std::uint32_t>;

std::set<Support> supports(const affq::BitMatrix& h) {
  std::set<Support> out;
  for (std::size_t r = 0; r < h.rows(); ++r) out.insert(h.row_support(r));
  return out;
}

// Every coset of span{v[d] : d in dirs}, built by enumerating all 512 points.
std::set<Support> family_cosets(const BasisChoice& basis, const std::array<int, 3>& dirs) {
  std::set<Support> out;
  for (std::uint32_t c = 0; c < 512; ++c) {
    std::set<std::uint32_t> coset;
    for (std::uint32_t m = 0; m < 8; ++m) {
      std::uint32_t x = c;
      for (int i = 0; i < 3; ++i) {
        if ((m >> i) & 1U) x ^= 1U << dirs[i];
      }
      coset.insert(basis.point(static_cast<std::uint16_t>(x)).index);
    }
    out.insert(Support(coset.begin(), coset.end()));
  }
  return out;
}

std::set<Support> side_oracle(const BasisChoice& basis, int first_family) {
  std::set<Support> out;
  for (int f = first_family; f < first_family + 3; ++f) {
    const auto fam = family_cosets(basis, affq::kFamilyDirections[f]);
    out.insert(fam.begin(), fam.end());
  }
  return out;
}

TEST(BaseAffine, FamilyDirectionsAsSpecified) {
  const std::array<std::array<int, 3>, 6> expected{{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};
  for (int f = 0; f < 6; ++f) EXPECT_EQ(affq::kFamilyDirections[f], expected[f]) << f;
}

TEST(BaseAffine, RowsAreExactlyTheAffineCosets) {
  const BaseCode base = affq::build_base(BasisChoice::standard());
  EXPECT_EQ(supports(base.code.hx), side_oracle(base.basis, 0));
  EXPECT_EQ(supports(base.code.hz), side_oracle(base.basis, 3));
  EXPECT_EQ(base.code.hx.rows(), 192U);
  EXPECT_EQ(base.code.hz.rows(), 192U);
  EXPECT_EQ(base.code.n(), 512U);
}

TEST(BaseAffine, FirstD1CosetOfOrigin) {
  const BaseCode base = affq::build_base(BasisChoice::standard());
  EXPECT_EQ(base.z_rows[0].family, affq::CheckFamily::D1);
  EXPECT_EQ(base.z_rows[0].coset, 0);
  EXPECT_EQ(base.code.hz.row_support(0), (Support{0, 1, 8, 9, 64, 65, 72, 73}));
}

TEST(BaseAffine, RowTagsFollowBlockLayout) {
  const BaseCode base = affq::build_base(BasisChoice::standard());
  for (std::size_t r = 0; r < 192; ++r) {
    EXPECT_EQ(static_cast<int>(base.x_rows[r].family), static_cast<int>(r / 64));
    EXPECT_EQ(static_cast<int>(base.z_rows[r].family), 3 + static_cast<int>(r / 64));
    EXPECT_EQ(base.x_rows[r].coset, r % 64);
  }
}

TEST(BaseAffine, StructureHoldsByDirectCount) {
  const BaseCode base = affq::build_base(BasisChoice::standard());
  const auto x = oracle::to_dense(base.code.hx);
  const auto z = oracle::to_dense(base.code.hz);
  auto overlap = [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    int s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] & b[j];
    return s;
  };
  for (std::size_t r = 0; r < 192; ++r) {
    for (std::size_t s = 0; s < 192; ++s) {
      const int cross = overlap(x[r], z[s]);
      ASSERT_TRUE(cross == 0 || cross == 2) << r << "," << s;
      if (r != s) {
        ASSERT_LE(overlap(x[r], x[s]), 1);
        ASSERT_LE(overlap(z[r], z[s]), 1);
      }
    }
  }
  const auto report = affq::verify_regularity_orthogonality(base.code);
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.odd_pairs.empty());
  ASSERT_EQ(report.cross_intersection_histogram.size(), 1U);
  EXPECT_EQ(report.cross_intersection_histogram.begin()->first, 2U);
}

TEST(BaseAffine, RanksMatchNaiveElimination) {
  const BaseCode base = affq::build_base(BasisChoice::standard());
  const std::size_t rx = oracle::rank(oracle::to_dense(base.code.hx));
  const std::size_t rz = oracle::rank(oracle::to_dense(base.code.hz));
  EXPECT_EQ(rx, 169U);
  EXPECT_EQ(rz, 169U);
  const auto dim = affq::base_dimension(base);
  EXPECT_EQ(dim.rank_x, rx);
  EXPECT_EQ(dim.rank_z, rz);
  EXPECT_EQ(dim.k, 512U - rx - rz);
  EXPECT_EQ(dim.k, 174U);
}

TEST(BaseAffine, RandomBasesGiveTheMappedCode) {
  affq::Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const BasisChoice basis = BasisChoice::random(rng);
    ASSERT_TRUE(basis.independent());
    const BaseCode base = affq::build_base(basis);
    EXPECT_EQ(supports(base.code.hx), side_oracle(basis, 0));
    EXPECT_EQ(supports(base.code.hz), side_oracle(basis, 3));
    EXPECT_TRUE(affq::verify_regularity_orthogonality(base.code).passed());
    EXPECT_EQ(affq::base_dimension(base).k, 174U);
    EXPECT_TRUE(affq::verify_spc3_equivalence(basis).passed());
  }
}

TEST(BaseAffine, StandardBasisIsTheProductCodeVerbatim) {
  const auto report = affq::verify_spc3_equivalence(BasisChoice::standard());
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.identical_without_permutation);
  for (std::uint16_t p = 0; p < 512; ++p) EXPECT_EQ(report.qubit_map[p], p);
}

TEST(BaseAffine, DegenerateBasisRejected) {
  std::array<affq::Point9, 9> v{};
  for (int i = 0; i < 9; ++i) v[i].index = static_cast<std::uint16_t>(1U << i);
  v[8].index = v[0].index ^ v[1].index;
  const BasisChoice basis(v);
  EXPECT_FALSE(basis.independent());
  EXPECT_THROW(affq::build_base(basis), affq::DegenerateBasis);
}

TEST(BaseAffine, StructureCheckCatchesOneFlippedBit) {
  BaseCode base = affq::build_base(BasisChoice::standard());
  affq::BitMatrix hx = base.code.hx;
  hx.flip(5, 300);
  const auto bad = affq::CssCode::from_matrices(hx, base.code.hz);
  const auto report = affq::verify_regularity_orthogonality(bad);
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.x_row_weights_ok);
  EXPECT_FALSE(report.orthogonal);
  EXPECT_FALSE(report.odd_pairs.empty());
}

}  // namespace
