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

// Bit-packed dense linear algebra over GF(2).
//
// Rows are stored as contiguous runs of 64-bit words, least significant bit
// first. All elimination routines share one pivot rule: columns are scanned in
// increasing order and the pivot is the lowest-indexed remaining row with a one
// in that column. Keeping the rule fixed makes every downstream result (OSD
// corrections in particular) reproducible bit for bit.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace affq {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

namespace detail {

constexpr Word tail_mask(std::size_t bits) {
  const std::size_t r = bits % kWordBits;
  return r == 0 ? ~Word{0} : (Word{1} << r) - 1;
}

inline void xor_words(std::span<Word> dst, std::span<const Word> src, std::size_t from = 0) {
  for (std::size_t i = from; i < dst.size(); ++i) dst[i] ^= src[i];
}

inline std::size_t popcount_words(std::span<const Word> w) {
  std::size_t total = 0;
  for (Word x : w) total += static_cast<std::size_t>(std::popcount(x));
  return total;
}

inline bool any_words(std::span<const Word> w) {
  return std::any_of(w.begin(), w.end(), [](Word x) { return x != 0; });
}

}  // namespace detail

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  static BitVector from_support(std::size_t size, std::span<const std::uint32_t> support) {
    BitVector v(size);
    for (std::uint32_t i : support) v.flip(i);
    return v;
  }

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const Word bit = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= bit;
    } else {
      words_[i / kWordBits] &= ~bit;
    }
  }
  void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  std::size_t weight() const { return detail::popcount_words(words_); }
  bool none() const { return !detail::any_words(words_); }
  bool any() const { return !none(); }

  // Parity of the bitwise AND.
  bool dot(const BitVector& other) const {
    assert(other.size_ == size_);
    Word acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
  }

  BitVector& operator^=(const BitVector& other) {
    assert(other.size_ == size_);
    detail::xor_words(words_, other.words_);
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector&) const = default;

  std::span<Word> words() { return words_; }
  std::span<const Word> words() const { return words_; }

  std::vector<std::uint32_t> support() const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word x = words_[w];
      while (x != 0) {
        out.push_back(static_cast<std::uint32_t>(w * kWordBits + std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }

  // Lowest set index, or size() if the vector is zero.
  std::size_t first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * kWordBits + std::countr_zero(words_[w]);
    }
    return size_;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BitMatrix from_rows(std::size_t cols, std::span<const BitVector> rows) {
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true) {
    Word& w = data_[r * stride_ + c / kWordBits];
    const Word bit = Word{1} << (c % kWordBits);
    w = value ? (w | bit) : (w & ~bit);
  }
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
  }

  std::span<Word> row(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
  std::span<const Word> row(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }

  BitVector row_vector(std::size_t r) const {
    BitVector v(cols_);
    std::copy_n(row(r).begin(), stride_, v.words().begin());
    return v;
  }
  void set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::set_row: length mismatch");
    std::copy_n(v.words().begin(), stride_, row(r).begin());
  }
  void append_row(const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::append_row: length mismatch");
    data_.insert(data_.end(), v.words().begin(), v.words().end());
    ++rows_;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }
  // Keeps the first `count` rows.
  void truncate_rows(std::size_t count) {
    rows_ = std::min(rows_, count);
    data_.resize(rows_ * stride_);
  }

  std::size_t row_weight(std::size_t r) const { return detail::popcount_words(row(r)); }
  std::vector<std::uint32_t> row_support(std::size_t r) const { return row_vector(r).support(); }

  bool is_zero() const { return !detail::any_words(data_); }
  bool operator==(const BitMatrix&) const = default;

  // Matrix-vector product M v.
  BitVector multiply(const BitVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::multiply: length mismatch");
    BitVector out(rows_);
    const auto vw = v.words();
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto rw = row(r);
      Word acc = 0;
      for (std::size_t i = 0; i < stride_; ++i) acc ^= rw[i] & vw[i];
      if (std::popcount(acc) & 1) out.set(r);
    }
    return out;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto rw = row(r);
      for (std::size_t w = 0; w < stride_; ++w) {
        Word x = rw[w];
        while (x != 0) {
          t.set(w * kWordBits + std::countr_zero(x), r);
          x &= x - 1;
        }
      }
    }
    return t;
  }

  // Product this * rhs.
  BitMatrix operator*(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("BitMatrix product: shape mismatch");
    BitMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto dst = out.row(r);
      const auto rw = row(r);
      for (std::size_t w = 0; w < stride_; ++w) {
        Word x = rw[w];
        while (x != 0) {
          detail::xor_words(dst, rhs.row(w * kWordBits + std::countr_zero(x)));
          x &= x - 1;
        }
      }
    }
    return out;
  }

  BitMatrix select_columns(std::span<const std::uint32_t> columns) const {
    BitMatrix out(rows_, columns.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < columns.size(); ++j) {
        if (get(r, columns[j])) out.set(r, j);
      }
    }
    return out;
  }

  BitMatrix permute_columns(std::span<const std::uint32_t> new_position) const {
    BitMatrix out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto rw = row(r);
      for (std::size_t w = 0; w < stride_; ++w) {
        Word x = rw[w];
        while (x != 0) {
          out.set(r, new_position[w * kWordBits + std::countr_zero(x)]);
          x &= x - 1;
        }
      }
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

namespace detail {

// Gaussian elimination in place. With `full` the result is in reduced row
// echelon form, otherwise only entries below each pivot are cleared. `rhs`,
// when given, receives the same row operations. Returns the pivot column of
// each leading row; rows [0, pivots.size()) are the nonzero rows.
inline std::vector<std::uint32_t> eliminate(BitMatrix& m, BitVector* rhs, bool full) {
  std::vector<std::uint32_t> pivots;
  const std::size_t rows = m.rows();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < rows; ++c) {
    const std::size_t word = c / kWordBits;
    const Word bit = Word{1} << (c % kWordBits);
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (m.row(r)[word] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) continue;
    m.swap_rows(rank, pivot);
    if (rhs != nullptr && rank != pivot) {
      const bool a = rhs->get(rank);
      rhs->set(rank, rhs->get(pivot));
      rhs->set(pivot, a);
    }
    const auto prow = m.row(rank);
    const bool prhs = rhs != nullptr && rhs->get(rank);
    for (std::size_t r = full ? 0 : rank + 1; r < rows; ++r) {
      if (r == rank) continue;
      auto rw = m.row(r);
      if (rw[word] & bit) {
        xor_words(rw, prow, word);
        if (prhs) rhs->flip(r);
      }
    }
    pivots.push_back(static_cast<std::uint32_t>(c));
    ++rank;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(BitMatrix m) { return detail::eliminate(m, nullptr, false).size(); }

// One solution of m x = b together with (optionally) a basis of ker m.
struct LinearSolution {
  BitVector particular;
  BitMatrix nullspace;  // rows form a basis of {x : m x = 0}; empty unless requested
};

// Free variables are set to zero in the particular solution, so the support of
// `particular` lies in the pivot columns: the earliest independent columns.
inline std::optional<LinearSolution> solve(const BitMatrix& m, const BitVector& b,
                                           bool with_nullspace = false) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs length must equal row count");
  BitMatrix work = m;
  BitVector rhs = b;
  const auto pivots = detail::eliminate(work, &rhs, true);
  const std::size_t r = pivots.size();
  for (std::size_t i = r; i < work.rows(); ++i) {
    if (rhs.get(i)) return std::nullopt;
  }
  LinearSolution out{BitVector(m.cols()), BitMatrix(0, m.cols())};
  for (std::size_t i = 0; i < r; ++i) {
    if (rhs.get(i)) out.particular.set(pivots[i]);
  }
  if (with_nullspace) {
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    out.nullspace = BitMatrix(m.cols() - r, m.cols());
    std::size_t k = 0;
    for (std::size_t f = 0; f < m.cols(); ++f) {
      if (is_pivot[f]) continue;
      out.nullspace.set(k, f);
      for (std::size_t i = 0; i < r; ++i) {
        if (work.get(i, f)) out.nullspace.set(k, pivots[i]);
      }
      ++k;
    }
  }
  return out;
}

// Reduced basis of a row space, for fast membership queries.
class RowEchelonCache {
 public:
  RowEchelonCache() = default;
  explicit RowEchelonCache(const BitMatrix& m) : basis_(m) {
    pivots_ = detail::eliminate(basis_, nullptr, true);
    basis_.truncate_rows(pivots_.size());
  }

  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return basis_.cols(); }
  const BitMatrix& basis() const { return basis_; }
  std::span<const std::uint32_t> pivots() const { return pivots_; }

  // Residue of v after clearing every pivot position; zero iff v is in the span.
  BitVector reduce(BitVector v) const {
    if (v.size() != basis_.cols()) throw std::invalid_argument("RowEchelonCache: length mismatch");
    auto vw = v.words();
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if ((vw[p / kWordBits] >> (p % kWordBits)) & 1U) {
        detail::xor_words(vw, basis_.row(i), p / kWordBits);
      }
    }
    return v;
  }

  bool contains(const BitVector& v) const { return reduce(v).none(); }

 private:
  BitMatrix basis_;
  std::vector<std::uint32_t> pivots_;
};

inline bool in_row_space(const RowEchelonCache& cache, const BitVector& v) { return cache.contains(v); }

// Incrementally grown span of vectors, kept in echelon form on the lowest set
// bit. Used to probe solvability of growing column prefixes.
class XorBasis {
 public:
  explicit XorBasis(std::size_t length) : length_(length), slot_(length, kNone) {}

  std::size_t length() const { return length_; }
  std::size_t rank() const { return vectors_.size(); }

  // Returns true if v was independent of the current span.
  bool insert(BitVector v) {
    reduce_in_place(v);
    const std::size_t lead = v.first_set();
    if (lead == length_) return false;
    slot_[lead] = static_cast<std::uint32_t>(vectors_.size());
    vectors_.push_back(std::move(v));
    return true;
  }

  bool spans(BitVector v) const {
    reduce_in_place(v);
    return v.none();
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  void reduce_in_place(BitVector& v) const {
    auto vw = v.words();
    for (std::size_t w = 0; w < vw.size(); ++w) {
      while (vw[w] != 0) {
        const std::size_t lead = w * kWordBits + std::countr_zero(vw[w]);
        const std::uint32_t s = slot_[lead];
        if (s == kNone) return;
        detail::xor_words(vw, vectors_[s].words(), w);
      }
    }
  }

  std::size_t length_;
  std::vector<std::uint32_t> slot_;
  std::vector<BitVector> vectors_;
};

}  // namespace affq
