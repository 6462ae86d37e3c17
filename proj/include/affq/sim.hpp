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

// Code-capacity depolarizing Monte Carlo.
//
// Trial t of a run draws its error from Rng(derive_seed(master_seed, t)), the
// same stream at every p, so points of one sweep are coupled. Trials are
// decoded in fixed-size batches and reduced in trial order, which makes every
// count, stop decision and ledger entry independent of the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "affq/css_code.hpp"
#include "affq/decoder.hpp"
#include "affq/random.hpp"

namespace affq {

// Each qubit: I w.p. 1-p, else X, Y, Z w.p. p/3 each. One uniform per qubit,
// u < p selecting type floor(3u/p), so the error at p is a subset of the one
// at any p' > p drawn from the same stream.
inline PauliError sample_depolarizing(std::size_t n, double p, Rng& rng) {
  PauliError e(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double u = uniform01(rng);
    if (u >= p) continue;
    const int type = std::min(2, static_cast<int>(3.0 * u / p));  // 0 X, 1 Y, 2 Z
    if (type != 2) e.x.set(v);
    if (type != 0) e.z.set(v);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Statistics.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline Interval wilson_interval(std::size_t failures, std::size_t trials, double confidence = 0.95) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (failures > trials) throw std::invalid_argument("wilson_interval: failures exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("wilson_interval: confidence in (0,1)");
  const double z = std::sqrt(2.0) * boost::math::erf_inv(confidence);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (failures == 0) w.lo = 0.0;
  if (failures == trials) w.hi = 1.0;
  return w;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Rate of the depolarizing hashing bound at p.
inline double hashing_rate(double p) { return 1.0 - binary_entropy(p) - p * std::log2(3.0); }

// p with hashing_rate(p) = rate, by bisection on [0, 3/4] where the rate is
// strictly decreasing.
inline double hashing_bound_p(double rate, double tol = 1e-12) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("hashing_bound_p: rate must be in (0,1)");
  double lo = 0.0;
  double hi = 0.75;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (hashing_rate(mid) > rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Density-evolution threshold of BP on the (3,8)-regular ensemble with the
// four-state depolarizing prior. A reference value carried as data; it is not
// recomputed here.
inline constexpr double kDeReference = 0.1009;
inline constexpr const char* kDeReferenceProvenance =
    "external reference value: density-evolution BP threshold, (3,8)-regular ensemble, "
    "four-state depolarizing prior; stored constant, not computed by this toolkit";

// ---------------------------------------------------------------------------
// Distance ledger.

struct LedgerEntry {
  Side side = Side::X;
  BitVector op;
  std::size_t weight = 0;
  double p = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
};

class LedgerRejection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Logical residuals seen while decoding; each is an explicit logical operator
// and so bounds the distance from above.
class DistanceLedger {
 public:
  DistanceLedger(const CssCode& code, const StabilizerSpaces& spaces) : code_(&code), spaces_(&spaces) {}

  // Re-verifies that v commutes with every check of the other type and is not
  // a stabilizer, then appends it.
  const LedgerEntry& record_logical(Side side, const BitVector& v, double p = 0.0, std::uint64_t trial = 0,
                                    std::uint64_t seed = 0) {
    if (v.size() != code_->n()) throw LedgerRejection("ledger: operator length does not match the code");
    if (code_->detecting_graph(side).syndrome(v).any()) {
      throw LedgerRejection("ledger: operator has nonzero syndrome, not a logical");
    }
    if (spaces_->of(side).contains(v)) throw LedgerRejection("ledger: operator is a stabilizer, not a logical");
    entries_.push_back({side, v, v.weight(), p, trial, seed});
    return entries_.back();
  }

  // Restores a previously verified entry (checkpoint resume); verified again.
  void restore(const LedgerEntry& e) { record_logical(e.side, e.op, e.p, e.trial, e.seed); }

  const std::vector<LedgerEntry>& entries() const { return entries_; }

  std::optional<std::size_t> best_bound() const {
    std::optional<std::size_t> best;
    for (const auto& e : entries_) {
      if (!best || e.weight < *best) best = e.weight;
    }
    return best;
  }

 private:
  const CssCode* code_;
  const StabilizerSpaces* spaces_;
  std::vector<LedgerEntry> entries_;
};

// ---------------------------------------------------------------------------
// Runs.

struct FerPoint {
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t fail_syndrome = 0;
  std::size_t fail_logical = 0;
  std::optional<std::size_t> min_logical_weight;
  bool done = false;

  std::size_t fail_total() const { return fail_syndrome + fail_logical; }
  double fer() const { return trials == 0 ? 0.0 : static_cast<double>(fail_total()) / static_cast<double>(trials); }
  Interval wilson(double confidence = 0.95) const { return wilson_interval(fail_total(), trials, confidence); }
};

struct TrialPlan {
  std::vector<double> ps;
  std::size_t trials = 0;           // per point; with a failure target this is the cap
  std::size_t target_failures = 0;  // 0: run exactly `trials`
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
  std::size_t batch = 1024;

  void validate() const {
    if (ps.empty()) throw std::invalid_argument("plan: no p values");
    for (double p : ps) {
      if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("plan: p must lie in (0,1), got " + std::to_string(p));
    }
    if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
    if (batch < 1) throw std::invalid_argument("plan: batch must be >= 1");
  }
};

struct TrialRecord {
  DecodeStatus status = DecodeStatus::BpConverged;
  std::optional<BitVector> logical_x;
  std::optional<BitVector> logical_z;
};

inline TrialRecord run_trial(const Decoder& decoder, double p, std::uint64_t master_seed, std::uint64_t trial) {
  const CssCode& code = decoder.code();
  Rng rng(derive_seed(master_seed, trial));
  const PauliError e = sample_depolarizing(code.n(), p, rng);
  DecodeOutcome out = decoder.decode(compute_syndrome(code, e), DepolarizingPrior{p});
  classify(out, check_sc(code, out.estimate, e, decoder.spaces()));
  return {out.status, std::move(out.logical_residual_x), std::move(out.logical_residual_z)};
}

// Progress callback, invoked after every batch with the updated point.
using BatchHook = std::function<void(const FerPoint&)>;

// Continues `point` (possibly resumed partway) until it is done.
inline void run_point(const Decoder& decoder, const TrialPlan& plan, FerPoint& point, DistanceLedger* ledger,
                      const BatchHook& hook = {}) {
  plan.validate();
  const std::size_t threads = std::max<std::size_t>(plan.threads, 1);
  std::vector<TrialRecord> records;
  auto finished = [&] {
    return point.trials >= plan.trials || (plan.target_failures > 0 && point.fail_total() >= plan.target_failures);
  };
  while (!point.done && !finished()) {
    const std::size_t first = point.trials;
    const std::size_t count = std::min(plan.batch, plan.trials - first);
    records.assign(count, {});
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < count; i = next++) {
        records[i] = run_trial(decoder, point.p, plan.master_seed, first + i);
      }
    };
    if (threads == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto& rec = records[i];
      if (rec.status == DecodeStatus::FailedResidualSyndrome) ++point.fail_syndrome;
      if (rec.status != DecodeStatus::LogicalError) continue;
      ++point.fail_logical;
      for (Side s : {Side::X, Side::Z}) {
        const auto& op = s == Side::X ? rec.logical_x : rec.logical_z;
        if (!op) continue;
        const std::size_t w = op->weight();
        if (!point.min_logical_weight || w < *point.min_logical_weight) point.min_logical_weight = w;
        if (ledger != nullptr) ledger->record_logical(s, *op, point.p, first + i, plan.master_seed);
      }
    }
    point.trials += count;
    if (finished()) point.done = true;
    if (hook) hook(point);
  }
  point.done = true;
}

}  // namespace affq
