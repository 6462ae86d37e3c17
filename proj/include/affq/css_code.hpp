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

#include <cstddef>
#include <stdexcept>
#include <string_view>

#include "affq/gf2.hpp"
#include "affq/tanner_graph.hpp"

namespace affq {

// Pauli component / operator type. An X-type operator is detected by Hz, a
// Z-type operator by Hx.
enum class Side { X, Z };

constexpr Side other(Side s) { return s == Side::X ? Side::Z : Side::X; }
constexpr std::string_view to_string(Side s) { return s == Side::X ? "x" : "z"; }

// A CSS code given by its two check matrices, with the sparse views every
// algorithm here walks. `lift_factor` and `family_rows` describe the block
// structure of codes derived from the affine base: row r*P+i of a lifted
// matrix is lift copy i of base row r, and base rows come in families of
// `family_rows` consecutive rows. Plain codes use lift_factor 1 and
// family_rows 0.
struct CssCode {
  BitMatrix hx;
  BitMatrix hz;
  TannerGraph x_graph;
  TannerGraph z_graph;
  std::size_t lift_factor = 1;
  std::size_t family_rows = 0;

  static CssCode from_matrices(BitMatrix hx, BitMatrix hz, std::size_t lift_factor = 1,
                               std::size_t family_rows = 0) {
    if (hx.cols() != hz.cols()) throw std::invalid_argument("CssCode: Hx and Hz column counts differ");
    CssCode code;
    code.x_graph = TannerGraph(hx);
    code.z_graph = TannerGraph(hz);
    code.hx = std::move(hx);
    code.hz = std::move(hz);
    code.lift_factor = lift_factor;
    code.family_rows = family_rows;
    return code;
  }

  std::size_t n() const { return hx.cols(); }

  // Check matrix that detects errors of the given component.
  const TannerGraph& detecting_graph(Side component) const {
    return component == Side::X ? z_graph : x_graph;
  }
  const BitMatrix& detecting_matrix(Side component) const { return component == Side::X ? hz : hx; }
  // Check matrix whose rows are stabilizers of the given type.
  const BitMatrix& stabilizer_matrix(Side type) const { return type == Side::X ? hx : hz; }
};

struct PauliError {
  BitVector x;
  BitVector z;

  explicit PauliError(std::size_t n = 0) : x(n), z(n) {}
  PauliError(BitVector x_part, BitVector z_part) : x(std::move(x_part)), z(std::move(z_part)) {}

  const BitVector& component(Side s) const { return s == Side::X ? x : z; }
  BitVector& component(Side s) { return s == Side::X ? x : z; }
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x.size(); ++i) w += (x.get(i) || z.get(i)) ? 1 : 0;
    return w;
  }
  bool operator==(const PauliError&) const = default;
};

// s_x = Hx z (X-check outcomes), s_z = Hz x.
struct Syndromes {
  BitVector s_x;
  BitVector s_z;

  // Syndrome seen by the checks that detect the given component.
  const BitVector& detecting(Side component) const { return component == Side::X ? s_z : s_x; }
};

inline Syndromes compute_syndrome(const CssCode& code, const PauliError& e) {
  if (e.x.size() != code.n() || e.z.size() != code.n()) {
    throw std::invalid_argument("compute_syndrome: error length does not match the code");
  }
  return {code.x_graph.syndrome(e.z), code.z_graph.syndrome(e.x)};
}

struct CodeDimension {
  std::size_t rank_x = 0;
  std::size_t rank_z = 0;
  std::size_t k = 0;
};

inline CodeDimension code_dimension(const CssCode& code) {
  CodeDimension d;
  d.rank_x = rank(code.hx);
  d.rank_z = rank(code.hz);
  d.k = code.n() - d.rank_x - d.rank_z;
  return d;
}

// Row spaces of Hx and Hz, built once per code and shared read-only.
struct StabilizerSpaces {
  RowEchelonCache x_rows;
  RowEchelonCache z_rows;

  StabilizerSpaces() = default;
  explicit StabilizerSpaces(const CssCode& code) : x_rows(code.hx), z_rows(code.hz) {}

  const RowEchelonCache& of(Side type) const { return type == Side::X ? x_rows : z_rows; }
};

}  // namespace affq
