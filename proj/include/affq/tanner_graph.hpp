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

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "affq/gf2.hpp"

namespace affq {

// Bipartite check/qubit adjacency of a parity-check matrix. Both adjacency
// lists are sorted.
class TannerGraph {
 public:
  TannerGraph() = default;

  explicit TannerGraph(const BitMatrix& h) : check_adj_(h.rows()), qubit_adj_(h.cols()) {
    for (std::size_t r = 0; r < h.rows(); ++r) {
      check_adj_[r] = h.row_support(r);
      for (auto q : check_adj_[r]) qubit_adj_[q].push_back(static_cast<std::uint32_t>(r));
    }
    edges_ = count_edges();
  }

  TannerGraph(std::size_t num_qubits, std::vector<std::vector<std::uint32_t>> check_adjacency)
      : check_adj_(std::move(check_adjacency)), qubit_adj_(num_qubits) {
    for (std::size_t c = 0; c < check_adj_.size(); ++c) {
      auto& adj = check_adj_[c];
      std::sort(adj.begin(), adj.end());
      if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
        throw std::invalid_argument("TannerGraph: repeated qubit in a check");
      }
      for (auto q : adj) {
        if (q >= num_qubits) throw std::out_of_range("TannerGraph: qubit index out of range");
        qubit_adj_[q].push_back(static_cast<std::uint32_t>(c));
      }
    }
    edges_ = count_edges();
  }

  std::size_t num_checks() const { return check_adj_.size(); }
  std::size_t num_qubits() const { return qubit_adj_.size(); }
  std::size_t num_edges() const { return edges_; }

  std::span<const std::uint32_t> check_neighbors(std::size_t c) const { return check_adj_[c]; }
  std::span<const std::uint32_t> qubit_neighbors(std::size_t q) const { return qubit_adj_[q]; }

  bool adjacent(std::size_t c, std::size_t q) const {
    return std::binary_search(check_adj_[c].begin(), check_adj_[c].end(), static_cast<std::uint32_t>(q));
  }

  BitMatrix to_matrix() const {
    BitMatrix m(num_checks(), num_qubits());
    for (std::size_t c = 0; c < num_checks(); ++c) {
      for (auto q : check_adj_[c]) m.set(c, q);
    }
    return m;
  }

  // H v over GF(2), using the sparse rows.
  BitVector syndrome(const BitVector& v) const {
    BitVector s(num_checks());
    for (std::size_t c = 0; c < num_checks(); ++c) {
      bool parity = false;
      for (auto q : check_adj_[c]) parity ^= v.get(q);
      if (parity) s.set(c);
    }
    return s;
  }

  // Column q of H as a vector over the checks.
  BitVector column(std::size_t q) const {
    BitVector col(num_checks());
    for (auto c : qubit_adj_[q]) col.set(c);
    return col;
  }

  // Submatrix keeping every check and only the listed qubit columns.
  BitMatrix columns(std::span<const std::uint32_t> qubits) const {
    BitMatrix m(num_checks(), qubits.size());
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      for (auto c : qubit_adj_[qubits[j]]) m.set(c, j);
    }
    return m;
  }

 private:
  std::size_t count_edges() const {
    std::size_t e = 0;
    for (const auto& adj : check_adj_) e += adj.size();
    return e;
  }

  std::vector<std::vector<std::uint32_t>> check_adj_;
  std::vector<std::vector<std::uint32_t>> qubit_adj_;
  std::size_t edges_ = 0;
};

}  // namespace affq
