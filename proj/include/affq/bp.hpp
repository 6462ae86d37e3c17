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

// Syndrome-based sum-product decoding on the joint X/Z Tanner graph.
//
// Variable nodes carry the four-state depolarizing prior over {I, X, Y, Z};
// check nodes are binary. X-checks constrain the z bit of their qubits and
// Z-checks constrain the x bit. Flooding schedule, no damping.
//
// Messages are kept in the probability domain: a variable-to-check message is
// t = P(0) - P(1) (= tanh of half the LLR) and a check-to-variable message is
// the ratio P(1)/P(0). Both updates are then rational, and clipping the LLR at
// +-clip is clipping |t| at tanh(clip/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "affq/css_code.hpp"
#include "affq/gf2.hpp"

namespace affq {

// Pauli index order used throughout: I, X, Y, Z.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

constexpr bool has_x(int s) { return s == 1 || s == 2; }
constexpr bool has_z(int s) { return s == 2 || s == 3; }

struct DepolarizingPrior {
  double p = 0.0;

  std::array<double, 4> probabilities() const {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("depolarizing prior needs 0 <= p < 1");
    return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
  }
};

// Optional shift of the channel prior toward a given estimate: states whose
// x bit agrees with estimate.x are weighted by exp(strength_x), likewise for z.
struct BpBias {
  const PauliError* estimate = nullptr;
  double strength_x = 0.0;
  double strength_z = 0.0;
};

struct BpState {
  std::vector<std::array<double, 4>> marginals;  // normalized, per qubit
  std::vector<double> cost_x;                    // log P(keep x) / P(flip x), clipped to [0, clip]
  std::vector<double> cost_z;
  std::size_t iterations = 0;
  bool converged = false;

  std::span<const double> costs(Side component) const { return component == Side::X ? cost_x : cost_z; }
};

struct BpResult {
  BpState state;
  PauliError estimate;
};

// Edge bookkeeping shared by every decode on a code.
class BpGraph {
 public:
  BpGraph() = default;
  explicit BpGraph(const CssCode& code) : n_(code.n()) {
    build(code.x_graph, x_);
    build(code.z_graph, z_);
  }

  std::size_t n() const { return n_; }

  struct Side_ {
    std::vector<std::uint32_t> check_offset;  // edges of check c: [offset[c], offset[c+1])
    std::vector<std::uint32_t> edge_qubit;
    std::vector<std::uint32_t> qubit_offset;  // edges of qubit q: qubit_edges[[offset[q], offset[q+1])]
    std::vector<std::uint32_t> qubit_edges;
  };
  const Side_& x_checks() const { return x_; }
  const Side_& z_checks() const { return z_; }

 private:
  void build(const TannerGraph& g, Side_& s) {
    s.check_offset.assign(g.num_checks() + 1, 0);
    for (std::size_t c = 0; c < g.num_checks(); ++c) {
      s.check_offset[c + 1] = s.check_offset[c] + static_cast<std::uint32_t>(g.check_neighbors(c).size());
      for (auto q : g.check_neighbors(c)) s.edge_qubit.push_back(q);
    }
    s.qubit_offset.assign(g.num_qubits() + 1, 0);
    for (auto q : s.edge_qubit) ++s.qubit_offset[q + 1];
    for (std::size_t q = 0; q < g.num_qubits(); ++q) s.qubit_offset[q + 1] += s.qubit_offset[q];
    s.qubit_edges.assign(s.edge_qubit.size(), 0);
    std::vector<std::uint32_t> fill(s.qubit_offset.begin(), s.qubit_offset.end() - 1);
    for (std::uint32_t e = 0; e < s.edge_qubit.size(); ++e) s.qubit_edges[fill[s.edge_qubit[e]]++] = e;
  }

  std::size_t n_ = 0;
  Side_ x_;
  Side_ z_;
};

namespace detail {

// Check-to-variable update: out[e] = P(1)/P(0) for every edge of every check.
inline void check_update(const BpGraph::Side_& g, const BitVector& syndrome, std::span<const double> t_in,
                         std::span<double> ratio_out, double t_clip) {
  std::array<double, 64> prefix{};
  const std::size_t checks = g.check_offset.size() - 1;
  for (std::size_t c = 0; c < checks; ++c) {
    const std::uint32_t b = g.check_offset[c];
    const std::uint32_t e = g.check_offset[c + 1];
    const std::size_t deg = e - b;
    const double sign = syndrome.get(c) ? -1.0 : 1.0;
    if (deg <= prefix.size()) {
      double acc = 1.0;
      for (std::size_t k = 0; k < deg; ++k) {
        prefix[k] = acc;
        acc *= t_in[b + k];
      }
      double suffix = sign;
      for (std::size_t k = deg; k-- > 0;) {
        const double t = std::clamp(prefix[k] * suffix, -t_clip, t_clip);
        ratio_out[b + k] = (1.0 - t) / (1.0 + t);
        suffix *= t_in[b + k];
      }
    } else {
      for (std::size_t k = 0; k < deg; ++k) {
        double t = sign;
        for (std::size_t j = 0; j < deg; ++j) {
          if (j != k) t *= t_in[b + j];
        }
        t = std::clamp(t, -t_clip, t_clip);
        ratio_out[b + k] = (1.0 - t) / (1.0 + t);
      }
    }
  }
}

}  // namespace detail

// Runs BP from the channel prior (optionally biased). Exits as soon as the
// hard decision satisfies both syndromes.
inline BpResult bp_decode(const CssCode& code, const BpGraph& graph, const Syndromes& syn,
                          const DepolarizingPrior& prior, std::size_t max_iter, double clip = 30.0,
                          const BpBias* bias = nullptr) {
  if (max_iter < 1) throw std::invalid_argument("bp_decode: max_iter must be >= 1");
  const std::size_t n = code.n();
  const auto base = prior.probabilities();
  const auto& gx = graph.x_checks();
  const auto& gz = graph.z_checks();
  const double t_clip = std::tanh(clip / 2.0);

  std::vector<std::array<double, 4>> pri(n, base);
  if (bias != nullptr && bias->estimate != nullptr) {
    const double fx = std::exp(bias->strength_x);
    const double fz = std::exp(bias->strength_z);
    for (std::size_t v = 0; v < n; ++v) {
      const bool ex = bias->estimate->x.get(v);
      const bool ez = bias->estimate->z.get(v);
      double sum = 0.0;
      for (int s = 0; s < 4; ++s) {
        if (has_x(s) == ex) pri[v][s] *= fx;
        if (has_z(s) == ez) pri[v][s] *= fz;
        sum += pri[v][s];
      }
      for (auto& w : pri[v]) w /= sum;
    }
  }

  // t messages (variable -> check) and ratio messages (check -> variable).
  std::vector<double> tx(gx.edge_qubit.size());
  std::vector<double> tz(gz.edge_qubit.size());
  std::vector<double> rx(tx.size(), 1.0);
  std::vector<double> rz(tz.size(), 1.0);

  auto clamp_t = [&](double t) { return std::clamp(t, -t_clip, t_clip); };
  for (std::size_t v = 0; v < n; ++v) {
    const auto& w = pri[v];
    const double tz0 = clamp_t((w[0] + w[1]) - (w[2] + w[3]));  // z bit: I,X vs Y,Z
    const double tx0 = clamp_t((w[0] + w[3]) - (w[1] + w[2]));  // x bit: I,Z vs X,Y
    for (auto k = gx.qubit_offset[v]; k < gx.qubit_offset[v + 1]; ++k) tx[gx.qubit_edges[k]] = tz0;
    for (auto k = gz.qubit_offset[v]; k < gz.qubit_offset[v + 1]; ++k) tz[gz.qubit_edges[k]] = tx0;
  }

  BpResult out{BpState{}, PauliError(n)};
  auto& st = out.state;
  st.marginals.assign(n, {});
  PauliError& est = out.estimate;

  auto satisfied = [&]() {
    return code.x_graph.syndrome(est.z) == syn.s_x && code.z_graph.syndrome(est.x) == syn.s_z;
  };

  for (std::size_t it = 1; it <= max_iter; ++it) {
    detail::check_update(gx, syn.s_x, tx, rx, t_clip);
    detail::check_update(gz, syn.s_z, tz, rz, t_clip);

    for (std::size_t v = 0; v < n; ++v) {
      const auto& pv = pri[v];
      // X-checks see the z bit, so their ratios multiply the states with z = 1.
      double prod_xc = 1.0;
      for (auto k = gx.qubit_offset[v]; k < gx.qubit_offset[v + 1]; ++k) prod_xc *= rx[gx.qubit_edges[k]];
      double prod_zc = 1.0;
      for (auto k = gz.qubit_offset[v]; k < gz.qubit_offset[v + 1]; ++k) prod_zc *= rz[gz.qubit_edges[k]];

      std::array<double, 4> w{pv[0], pv[1] * prod_zc, pv[2] * prod_xc * prod_zc, pv[3] * prod_xc};
      const double total = w[0] + w[1] + w[2] + w[3];
      int best = 0;
      for (int s = 0; s < 4; ++s) {
        st.marginals[v][s] = w[s] / total;
        if (w[s] > w[best]) best = s;
      }
      est.x.set(v, has_x(best));
      est.z.set(v, has_z(best));

      for (auto k = gx.qubit_offset[v]; k < gx.qubit_offset[v + 1]; ++k) {
        const auto e = gx.qubit_edges[k];
        const double others = prod_xc / rx[e];
        const double z0 = pv[0] + pv[1] * prod_zc;
        const double z1 = (pv[3] + pv[2] * prod_zc) * others;
        tx[e] = clamp_t((z0 - z1) / (z0 + z1));
      }
      for (auto k = gz.qubit_offset[v]; k < gz.qubit_offset[v + 1]; ++k) {
        const auto e = gz.qubit_edges[k];
        const double others = prod_zc / rz[e];
        const double x0 = pv[0] + pv[3] * prod_xc;
        const double x1 = (pv[1] + pv[2] * prod_xc) * others;
        tz[e] = clamp_t((x0 - x1) / (x0 + x1));
      }
    }
    st.iterations = it;
    if (satisfied()) {
      st.converged = true;
      break;
    }
  }

  st.cost_x.resize(n);
  st.cost_z.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& m = st.marginals[v];
    const double px1 = m[1] + m[2];
    const double pz1 = m[2] + m[3];
    auto cost = [&](double p_one, bool current) {
      const double keep = current ? p_one : 1.0 - p_one;
      const double flip = 1.0 - keep;
      if (flip <= 0.0) return clip;
      if (keep <= 0.0) return 0.0;
      return std::clamp(std::log(keep / flip), 0.0, clip);
    };
    st.cost_x[v] = cost(px1, est.x.get(v));
    st.cost_z[v] = cost(pz1, est.z.get(v));
  }
  return out;
}

inline BpResult bp_decode(const CssCode& code, const Syndromes& syn, const DepolarizingPrior& prior,
                          std::size_t max_iter, double clip = 30.0, const BpBias* bias = nullptr) {
  return bp_decode(code, BpGraph(code), syn, prior, max_iter, clip, bias);
}

}  // namespace affq
