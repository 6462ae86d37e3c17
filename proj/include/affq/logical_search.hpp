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

// Randomized search for low-weight logical operators (Lee-Brickell style
// information-set decoding). A hit is an explicit logical operator and so an
// upper bound on the distance; a miss proves nothing.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "affq/css_code.hpp"
#include "affq/gf2.hpp"
#include "affq/random.hpp"

namespace affq {

struct LogicalSearchOptions {
  // Largest number of information-set positions combined per candidate.
  std::size_t max_combination = 2;
};

struct LogicalSearchResult {
  std::optional<BitVector> logical;
  std::size_t iterations = 0;
};

// Searches for v of the given type with H_detect v = 0, v outside the
// stabilizer row space, and weight(v) <= weight_budget. For type Z that is
// Hx v = 0 and v not in row(Hz).
inline LogicalSearchResult search_low_weight_logical(const CssCode& code, Side type, std::size_t weight_budget,
                                                     std::size_t effort, std::uint64_t seed,
                                                     const StabilizerSpaces* spaces = nullptr,
                                                     LogicalSearchOptions opts = {}) {
  if (weight_budget < 1) throw std::invalid_argument("find_low_weight_logical: weight budget must be >= 1");
  const TannerGraph& detect = code.detecting_graph(type);
  const std::size_t n = code.n();
  std::optional<StabilizerSpaces> owned;
  if (spaces == nullptr) spaces = &owned.emplace(code);
  const RowEchelonCache& stabilizers = spaces->of(type);

  Rng rng(seed);
  std::vector<std::uint32_t> perm(n);
  std::vector<std::uint32_t> where(n);  // original column -> permuted position
  LogicalSearchResult result;
  BitMatrix permuted(detect.num_checks(), n);

  for (std::size_t it = 0; it < effort; ++it) {
    result.iterations = it + 1;
    std::iota(perm.begin(), perm.end(), 0U);
    shuffle(perm, rng);
    for (std::size_t j = 0; j < n; ++j) where[perm[j]] = static_cast<std::uint32_t>(j);

    permuted = BitMatrix(detect.num_checks(), n);
    for (std::size_t c = 0; c < detect.num_checks(); ++c) {
      for (auto q : detect.check_neighbors(c)) permuted.set(c, where[q]);
    }
    const auto pivots = detail::eliminate(permuted, nullptr, true);

    // Columns of the reduced matrix at non-pivot positions, as vectors over the
    // pivot rows, packed contiguously. Rows past the rank are zero after full
    // reduction, so a transposed row is exactly such a column.
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    const BitMatrix cols = permuted.transpose();
    const std::size_t stride = cols.stride();
    std::vector<std::uint32_t> free_cols;
    std::vector<Word> packed;
    std::vector<std::size_t> weights;
    for (std::size_t j = 0; j < n; ++j) {
      if (is_pivot[j]) continue;
      free_cols.push_back(static_cast<std::uint32_t>(j));
      const auto row = cols.row(j);
      packed.insert(packed.end(), row.begin(), row.end());
      weights.push_back(detail::popcount_words(row));
    }
    const std::size_t f = free_cols.size();

    auto try_candidate = [&](std::span<const std::size_t> picks) -> bool {
      BitVector v(n);
      BitVector pivot_part(cols.cols());
      for (auto k : picks) {
        v.set(perm[free_cols[k]]);
        detail::xor_words(pivot_part.words(), std::span<const Word>(packed.data() + k * stride, stride));
      }
      for (auto i : pivot_part.support()) v.set(perm[pivots[i]]);
      if (v.weight() > weight_budget || stabilizers.contains(v)) return false;
      result.logical = std::move(v);
      return true;
    };

    for (std::size_t a = 0; a < f; ++a) {
      const std::size_t one[1] = {a};
      if (weights[a] + 1 <= weight_budget && try_candidate(one)) return result;
    }
    if (opts.max_combination >= 2 && weight_budget >= 2) {
      const std::size_t limit = weight_budget - 2;
      for (std::size_t a = 0; a < f; ++a) {
        const Word* wa = packed.data() + a * stride;
        for (std::size_t b = a + 1; b < f; ++b) {
          // |w(a) - w(b)| bounds the weight of the sum from below.
          const std::size_t gap = weights[a] > weights[b] ? weights[a] - weights[b] : weights[b] - weights[a];
          if (gap > limit) continue;
          const Word* wb = packed.data() + b * stride;
          std::size_t w = 0;
          for (std::size_t k = 0; k < stride; ++k) w += static_cast<std::size_t>(std::popcount(wa[k] ^ wb[k]));
          if (w > limit) continue;
          const std::size_t two[2] = {a, b};
          if (try_candidate(two)) return result;
        }
      }
    }
  }
  return result;
}

inline std::optional<BitVector> find_low_weight_logical(const CssCode& code, Side type, std::size_t weight_budget,
                                                        std::size_t effort, std::uint64_t seed) {
  return search_low_weight_logical(code, type, weight_budget, effort, seed).logical;
}

}  // namespace affq
