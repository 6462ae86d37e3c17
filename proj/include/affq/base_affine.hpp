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

// The length-512 affine-coset base pair.
//
// Qubits are the points of V = GF(2)^9. X-checks are the affine cosets of
// A = <a1,a2,a3>, B = <b1,b2,b3>, C = <c1,c2,c3>; Z-checks are the affine
// cosets of D_i = <a_i,b_i,c_i>. Every check is an 8-point coset, so both
// matrices are 192 x 512 and (3,8)-regular.
//
// Column order: a point is stored as its 9-bit integer in the standard basis
// e1..e9, with e1 the least significant bit. Under the standard basis choice
// a_i = e_i, b_i = e_{i+3}, c_i = e_{i+6} this is the order where the
// A-coordinates are the lowest bits, so row r of the A block covers the
// consecutive columns [8r, 8r+8).
//
// Row order: blocks A,B,C (resp. D1,D2,D3) of 64 rows. Within a block the
// coset index is the integer formed by the six fixed coordinates with respect
// to the chosen basis, taken in basis order.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "affq/css_code.hpp"
#include "affq/gf2.hpp"
#include "affq/random.hpp"

namespace affq {

inline constexpr std::size_t kBaseQubits = 512;
inline constexpr std::size_t kBaseRowsPerFamily = 64;
inline constexpr std::size_t kBaseRows = 192;
inline constexpr std::size_t kBaseRowWeight = 8;
inline constexpr std::size_t kBaseColumnWeight = 3;

// A point of GF(2)^9; bit i-1 holds the coefficient of e_i.
struct Point9 {
  std::uint16_t index = 0;

  constexpr bool coordinate(int i) const { return (index >> i) & 1U; }
  constexpr Point9 operator+(Point9 o) const { return {static_cast<std::uint16_t>(index ^ o.index)}; }
  constexpr bool operator==(const Point9&) const = default;
};

class DegenerateBasis : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ordered basis (a1,a2,a3,b1,b2,b3,c1,c2,c3) of V.
class BasisChoice {
 public:
  BasisChoice() : BasisChoice(standard_vectors()) {}

  explicit BasisChoice(const std::array<Point9, 9>& vectors) : vectors_(vectors) {
    image_.fill(0);
    preimage_.fill(kUnset);
    for (std::uint16_t c = 0; c < kBaseQubits; ++c) {
      std::uint16_t x = 0;
      for (int i = 0; i < 9; ++i) {
        if ((c >> i) & 1U) x ^= vectors_[i].index;
      }
      image_[c] = x;
      if (x >= kBaseQubits || preimage_[x] != kUnset) {
        independent_ = false;
        continue;
      }
      preimage_[x] = c;
    }
  }

  static BasisChoice standard() { return BasisChoice(); }

  // Rejection-samples nine vectors until they are independent.
  static BasisChoice random(Rng& rng) {
    for (;;) {
      std::array<Point9, 9> v{};
      for (auto& p : v) p.index = static_cast<std::uint16_t>(uniform_below(rng, kBaseQubits));
      BasisChoice b(v);
      if (b.independent()) return b;
    }
  }

  bool independent() const { return independent_; }
  const std::array<Point9, 9>& vectors() const { return vectors_; }
  bool is_standard() const { return vectors_ == standard_vectors(); }

  // The linear map T with T(e_i) = i-th basis vector, on coordinate integers.
  Point9 point(std::uint16_t coordinates) const { return {image_[coordinates]}; }
  // Inverse of T; requires an independent basis.
  std::uint16_t coordinates(Point9 p) const { return preimage_[p.index]; }

  bool operator==(const BasisChoice& o) const { return vectors_ == o.vectors_; }

 private:
  static constexpr std::uint16_t kUnset = 0xffff;

  static std::array<Point9, 9> standard_vectors() {
    std::array<Point9, 9> v{};
    for (int i = 0; i < 9; ++i) v[i].index = static_cast<std::uint16_t>(1U << i);
    return v;
  }

  std::array<Point9, 9> vectors_{};
  std::array<std::uint16_t, kBaseQubits> image_{};
  std::array<std::uint16_t, kBaseQubits> preimage_{};
  bool independent_ = true;
};

enum class CheckFamily : std::uint8_t { A, B, C, D1, D2, D3 };

constexpr std::string_view to_string(CheckFamily f) {
  constexpr std::array<std::string_view, 6> names{"A", "B", "C", "D1", "D2", "D3"};
  return names[static_cast<std::size_t>(f)];
}

inline CheckFamily family_from_string(std::string_view s) {
  for (int f = 0; f < 6; ++f) {
    if (to_string(static_cast<CheckFamily>(f)) == s) return static_cast<CheckFamily>(f);
  }
  throw std::invalid_argument("unknown check family '" + std::string(s) + "'");
}

// Coordinate positions (0-based, in basis order) spanning each family's subspace.
constexpr std::array<std::array<int, 3>, 6> kFamilyDirections{{
    {0, 1, 2},  // A
    {3, 4, 5},  // B
    {6, 7, 8},  // C
    {0, 3, 6},  // D1
    {1, 4, 7},  // D2
    {2, 5, 8},  // D3
}};

struct RowTag {
  CheckFamily family = CheckFamily::A;
  std::uint8_t coset = 0;
  bool operator==(const RowTag&) const = default;
};

struct BaseCode {
  BasisChoice basis;
  CssCode code;
  std::vector<RowTag> x_rows;
  std::vector<RowTag> z_rows;
};

namespace detail {

// Packs the coordinates not in `dirs` (in increasing position) into a 6-bit index.
constexpr std::uint8_t coset_index(std::uint16_t coordinates, const std::array<int, 3>& dirs) {
  std::uint8_t out = 0;
  int bit = 0;
  for (int i = 0; i < 9; ++i) {
    if (i == dirs[0] || i == dirs[1] || i == dirs[2]) continue;
    if ((coordinates >> i) & 1U) out |= static_cast<std::uint8_t>(1U << bit);
    ++bit;
  }
  return out;
}

}  // namespace detail

inline BaseCode build_base(const BasisChoice& basis) {
  if (!basis.independent()) throw DegenerateBasis("build_base: basis vectors are linearly dependent");
  BaseCode base{basis, {}, {}, {}};
  BitMatrix hx(kBaseRows, kBaseQubits);
  BitMatrix hz(kBaseRows, kBaseQubits);
  for (int f = 0; f < 6; ++f) {
    BitMatrix& h = f < 3 ? hx : hz;
    const std::size_t block = static_cast<std::size_t>(f % 3) * kBaseRowsPerFamily;
    for (std::uint16_t c = 0; c < kBaseQubits; ++c) {
      const std::size_t row = block + detail::coset_index(c, kFamilyDirections[f]);
      h.set(row, basis.point(c).index);
    }
  }
  for (int f = 0; f < 6; ++f) {
    auto& tags = f < 3 ? base.x_rows : base.z_rows;
    for (std::size_t k = 0; k < kBaseRowsPerFamily; ++k) {
      tags.push_back({static_cast<CheckFamily>(f), static_cast<std::uint8_t>(k)});
    }
  }
  base.code = CssCode::from_matrices(std::move(hx), std::move(hz), 1, kBaseRowsPerFamily);
  return base;
}

struct StructureReport {
  bool shape_ok = false;
  bool x_row_weights_ok = false;
  bool z_row_weights_ok = false;
  bool x_column_weights_ok = false;
  bool z_column_weights_ok = false;
  bool orthogonal = false;
  bool cross_intersections_0_or_2 = false;
  bool same_side_at_most_one = false;
  // (x_row, z_row) pairs whose supports meet in an odd number of qubits.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> odd_pairs;
  std::map<std::size_t, std::size_t> cross_intersection_histogram;  // size -> pair count (size > 0)

  bool passed() const {
    return shape_ok && x_row_weights_ok && z_row_weights_ok && x_column_weights_ok && z_column_weights_ok &&
           orthogonal && cross_intersections_0_or_2 && same_side_at_most_one;
  }
};

// Regularity, CSS orthogonality and the intersection pattern, computed from the
// sparse structure (the dense product is never formed).
inline StructureReport verify_regularity_orthogonality(const CssCode& code, std::size_t row_weight = kBaseRowWeight,
                                                       std::size_t column_weight = kBaseColumnWeight) {
  StructureReport rep;
  const auto& gx = code.x_graph;
  const auto& gz = code.z_graph;
  rep.shape_ok = code.hx.cols() == code.hz.cols() && code.hx.rows() == code.hz.rows();

  auto rows_ok = [&](const TannerGraph& g) {
    for (std::size_t c = 0; c < g.num_checks(); ++c) {
      if (g.check_neighbors(c).size() != row_weight) return false;
    }
    return true;
  };
  auto cols_ok = [&](const TannerGraph& g) {
    for (std::size_t q = 0; q < g.num_qubits(); ++q) {
      if (g.qubit_neighbors(q).size() != column_weight) return false;
    }
    return true;
  };
  rep.x_row_weights_ok = rows_ok(gx);
  rep.z_row_weights_ok = rows_ok(gz);
  rep.x_column_weights_ok = cols_ok(gx);
  rep.z_column_weights_ok = cols_ok(gz);

  rep.cross_intersections_0_or_2 = true;
  std::vector<std::uint32_t> count(gz.num_checks(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < gx.num_checks(); ++r) {
    touched.clear();
    for (auto q : gx.check_neighbors(r)) {
      for (auto s : gz.qubit_neighbors(q)) {
        if (count[s]++ == 0) touched.push_back(s);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto s : touched) {
      ++rep.cross_intersection_histogram[count[s]];
      if (count[s] % 2 == 1) rep.odd_pairs.emplace_back(static_cast<std::uint32_t>(r), s);
      if (count[s] != 2) rep.cross_intersections_0_or_2 = false;
      count[s] = 0;
    }
  }
  rep.orthogonal = rep.odd_pairs.empty();

  auto same_side_ok = [&](const TannerGraph& g) {
    std::vector<std::uint32_t> c(g.num_checks(), 0);
    std::vector<std::uint32_t> hit;
    for (std::size_t r = 0; r < g.num_checks(); ++r) {
      hit.clear();
      bool ok = true;
      for (auto q : g.check_neighbors(r)) {
        for (auto s : g.qubit_neighbors(q)) {
          if (s == r) continue;
          if (c[s]++ == 0) hit.push_back(s);
          if (c[s] > 1) ok = false;
        }
      }
      for (auto s : hit) c[s] = 0;
      if (!ok) return false;
    }
    return true;
  };
  rep.same_side_at_most_one = same_side_ok(gx) && same_side_ok(gz);
  return rep;
}

inline CodeDimension base_dimension(const BaseCode& base) { return code_dimension(base.code); }

struct Spc3Report {
  bool x_families_match = false;
  bool z_families_match = false;
  // Supports agree with no qubit relabeling at all.
  bool identical_without_permutation = false;
  // qubit_map[p] = T(p): where the product-code qubit with coordinates p lands.
  std::vector<std::uint16_t> qubit_map;

  bool passed() const { return x_families_match && z_families_match; }
};

namespace detail {

using SupportSet = std::set<std::vector<std::uint16_t>>;

inline SupportSet supports_of(const TannerGraph& g) {
  SupportSet out;
  for (std::size_t c = 0; c < g.num_checks(); ++c) {
    const auto adj = g.check_neighbors(c);
    out.emplace(adj.begin(), adj.end());
  }
  return out;
}

// Product-code checks in coordinate space: group all 512 coordinate vectors by
// their values outside `vary_mask`.
inline std::vector<std::vector<std::uint16_t>> product_checks(std::uint16_t vary_mask) {
  std::map<std::uint16_t, std::vector<std::uint16_t>> groups;
  for (std::uint16_t p = 0; p < kBaseQubits; ++p) groups[p & static_cast<std::uint16_t>(~vary_mask)].push_back(p);
  std::vector<std::vector<std::uint16_t>> out;
  for (auto& [key, pts] : groups) out.push_back(std::move(pts));
  return out;
}

}  // namespace detail

// Builds the SPC(3) product-code checks directly (X: fix two of the three
// coordinate blocks; Z: vary one aligned position across the blocks), maps
// them through T and compares with the affine-coset supports as sets.
inline Spc3Report verify_spc3_equivalence(const BasisChoice& basis) {
  if (!basis.independent()) throw DegenerateBasis("verify_spc3_equivalence: dependent basis");
  const BaseCode base = build_base(basis);
  Spc3Report rep;
  rep.qubit_map.resize(kBaseQubits);
  for (std::uint16_t p = 0; p < kBaseQubits; ++p) rep.qubit_map[p] = basis.point(p).index;

  constexpr std::array<std::uint16_t, 3> block_masks{0b000000111, 0b000111000, 0b111000000};
  constexpr std::array<std::uint16_t, 3> aligned_masks{0b001001001, 0b010010010, 0b100100100};

  auto mapped = [&](const std::array<std::uint16_t, 3>& masks, bool apply_map) {
    detail::SupportSet out;
    for (auto mask : masks) {
      for (auto& check : detail::product_checks(mask)) {
        std::vector<std::uint16_t> s;
        for (auto p : check) s.push_back(apply_map ? rep.qubit_map[p] : p);
        std::sort(s.begin(), s.end());
        out.insert(std::move(s));
      }
    }
    return out;
  };

  const auto affine_x = detail::supports_of(base.code.x_graph);
  const auto affine_z = detail::supports_of(base.code.z_graph);
  const auto spc_x = mapped(block_masks, true);
  const auto spc_z = mapped(aligned_masks, true);
  rep.x_families_match = spc_x.size() == kBaseRows && spc_x == affine_x;
  rep.z_families_match = spc_z.size() == kBaseRows && spc_z == affine_z;
  rep.identical_without_permutation =
      mapped(block_masks, false) == affine_x && mapped(aligned_masks, false) == affine_z;
  return rep;
}

}  // namespace affq
