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

// File formats: alist matrices, JSON code bundles, shift-label files, decoder
// configs and repair templates, results CSV, ledger JSONL, reference-line
// sidecar and simulation checkpoints. All writers are deterministic, and the
// whole-file ones go through a temporary file and a rename.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "affq/base_affine.hpp"
#include "affq/cpm_lift.hpp"
#include "affq/decoder.hpp"
#include "affq/sim.hpp"

namespace affq {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Malformed input or a failed read/write.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Plumbing.

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(what + ": " + e.what());
  }
}

// Shortest decimal that round-trips.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw FormatError("cannot format number");
  return std::string(buf, end);
}

// 64-bit FNV-1a over both check matrices; identifies a code in checkpoints.
inline std::string code_fingerprint(const CssCode& code) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const TannerGraph* g : {&code.x_graph, &code.z_graph}) {
    mix(g->num_checks());
    mix(g->num_qubits());
    for (std::size_t c = 0; c < g->num_checks(); ++c) {
      for (auto q : g->check_neighbors(c)) mix(q);
      mix(~0ULL);
    }
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

// ---------------------------------------------------------------------------
// alist.

inline std::string to_alist(const TannerGraph& g) {
  std::size_t max_col = 0;
  std::size_t max_row = 0;
  for (std::size_t q = 0; q < g.num_qubits(); ++q) max_col = std::max(max_col, g.qubit_neighbors(q).size());
  for (std::size_t c = 0; c < g.num_checks(); ++c) max_row = std::max(max_row, g.check_neighbors(c).size());
  std::ostringstream out;
  out << g.num_qubits() << ' ' << g.num_checks() << '\n' << max_col << ' ' << max_row << '\n';
  // Column weights, row weights, then the padded column lists and row lists (1-based).
  for (std::size_t q = 0; q < g.num_qubits(); ++q) out << g.qubit_neighbors(q).size() << (q + 1 == g.num_qubits() ? '\n' : ' ');
  for (std::size_t c = 0; c < g.num_checks(); ++c) out << g.check_neighbors(c).size() << (c + 1 == g.num_checks() ? '\n' : ' ');
  for (std::size_t q = 0; q < g.num_qubits(); ++q) {
    const auto adj = g.qubit_neighbors(q);
    for (std::size_t k = 0; k < max_col; ++k) out << (k < adj.size() ? adj[k] + 1 : 0) << (k + 1 == max_col ? '\n' : ' ');
  }
  for (std::size_t c = 0; c < g.num_checks(); ++c) {
    const auto adj = g.check_neighbors(c);
    for (std::size_t k = 0; k < max_row; ++k) out << (k < adj.size() ? adj[k] + 1 : 0) << (k + 1 == max_row ? '\n' : ' ');
  }
  return out.str();
}

inline TannerGraph from_alist(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto next = [&](const char* what) {
    long long v = 0;
    if (!(in >> v) || v < 0) throw FormatError(std::string("alist: bad or missing ") + what);
    return static_cast<std::size_t>(v);
  };
  const std::size_t n = next("column count");
  const std::size_t m = next("row count");
  const std::size_t max_col = next("max column weight");
  const std::size_t max_row = next("max row weight");
  std::vector<std::size_t> cw(n);
  std::vector<std::size_t> rw(m);
  for (auto& w : cw) w = next("column weight");
  for (auto& w : rw) w = next("row weight");
  std::set<std::pair<std::size_t, std::size_t>> from_cols;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t k = 0; k < max_col; ++k) {
      const std::size_t r = next("column entry");
      if (r == 0) continue;
      if (r > m || k >= cw[q]) throw FormatError("alist: column entry out of range");
      from_cols.insert({r - 1, q});
    }
  }
  std::vector<std::vector<std::uint32_t>> adj(m);
  std::size_t entries = 0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t k = 0; k < max_row; ++k) {
      const std::size_t q = next("row entry");
      if (q == 0) continue;
      if (q > n || k >= rw[c]) throw FormatError("alist: row entry out of range");
      adj[c].push_back(static_cast<std::uint32_t>(q - 1));
      if (!from_cols.count({c, q - 1})) throw FormatError("alist: row and column lists disagree");
      ++entries;
    }
    if (adj[c].size() != rw[c]) throw FormatError("alist: row weight mismatch");
  }
  if (entries != from_cols.size()) throw FormatError("alist: row and column lists disagree");
  try {
    return TannerGraph(n, std::move(adj));
  } catch (const std::exception& e) {
    throw FormatError(std::string("alist: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Shift labels.

class LabelError : public FormatError {
 public:
  enum class Kind { Malformed, SupportMismatch, CongruenceViolation };
  LabelError(Kind kind, const std::string& msg) : FormatError(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline Json labels_to_json(const CssCode& base, const LiftSpec& spec) {
  Json j;
  j["P"] = spec.P;
  auto side = [&](const TannerGraph& g, const std::vector<std::vector<std::uint32_t>>& labels) {
    Json arr = Json::array();
    for (std::size_t r = 0; r < g.num_checks(); ++r) {
      const auto adj = g.check_neighbors(r);
      for (std::size_t k = 0; k < adj.size(); ++k) arr.push_back({r, adj[k], labels[r][k]});
    }
    return arr;
  };
  j["x_labels"] = side(base.x_graph, spec.x_labels);
  j["z_labels"] = side(base.z_graph, spec.z_labels);
  return j;
}

// Parses and validates a label file against the base: every edge labelled
// exactly once, no labels off the support, shifts in [0, P), and every
// cross-row congruence satisfied.
inline LiftSpec labels_from_json(const CssCode& base, const Json& j) {
  using K = LabelError::Kind;
  if (!j.is_object() || !j.contains("P") || !j.contains("x_labels") || !j.contains("z_labels")) {
    throw LabelError(K::Malformed, "labels: need keys P, x_labels, z_labels");
  }
  if (!j["P"].is_number_unsigned() || j["P"].get<std::uint64_t>() < 1 || j["P"].get<std::uint64_t>() > (1U << 30)) {
    throw LabelError(K::Malformed, "labels: P must be a positive integer");
  }
  LiftSpec spec = zero_labels(base, j["P"].get<std::uint32_t>());
  auto side = [&](const char* key, const TannerGraph& g, std::vector<std::vector<std::uint32_t>>& labels) {
    const Json& arr = j[key];
    if (!arr.is_array()) throw LabelError(K::Malformed, std::string("labels: ") + key + " must be an array");
    std::vector<std::vector<bool>> seen(g.num_checks());
    for (std::size_t r = 0; r < g.num_checks(); ++r) seen[r].assign(g.check_neighbors(r).size(), false);
    for (const auto& t : arr) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned() ||
          !t[2].is_number_unsigned()) {
        throw LabelError(K::Malformed, std::string("labels: ") + key + " entries must be [row, qubit, shift]");
      }
      const auto r = t[0].get<std::uint64_t>();
      const auto q = t[1].get<std::uint64_t>();
      const auto s = t[2].get<std::uint64_t>();
      if (r >= g.num_checks() || q >= g.num_qubits() || !g.adjacent(r, q)) {
        throw LabelError(K::SupportMismatch, std::string("labels: ") + key + " entry (" + std::to_string(r) + ", " +
                                                 std::to_string(q) + ") is not an edge of the base matrix");
      }
      if (s >= spec.P) throw LabelError(K::Malformed, "labels: shift " + std::to_string(s) + " is not below P");
      const std::size_t pos = detail::edge_position(g, r, q);
      if (seen[r][pos]) {
        throw LabelError(K::Malformed, std::string("labels: ") + key + " labels edge (" + std::to_string(r) + ", " +
                                           std::to_string(q) + ") twice");
      }
      seen[r][pos] = true;
      labels[r][pos] = static_cast<std::uint32_t>(s);
    }
    for (std::size_t r = 0; r < g.num_checks(); ++r) {
      for (std::size_t k = 0; k < seen[r].size(); ++k) {
        if (!seen[r][k]) {
          throw LabelError(K::SupportMismatch, std::string("labels: ") + key + " has no label for edge (" +
                                                   std::to_string(r) + ", " +
                                                   std::to_string(g.check_neighbors(r)[k]) + ")");
        }
      }
    }
  };
  side("x_labels", base.x_graph, spec.x_labels);
  side("z_labels", base.z_graph, spec.z_labels);
  if (auto v = find_congruence_violation(base, spec)) {
    throw LabelError(K::CongruenceViolation,
                     "labels: congruence violated for X-row " + std::to_string(v->x_row) + " and Z-row " +
                         std::to_string(v->z_row) + " (common qubits " + std::to_string(v->q1) + ", " +
                         std::to_string(v->q2) + ")");
  }
  return spec;
}

inline LiftSpec load_labels(const CssCode& base, const std::filesystem::path& path) {
  return labels_from_json(base, parse_json(read_file(path), "labels " + path.string()));
}

// ---------------------------------------------------------------------------
// Code bundles.

// The stored supports are authoritative: a bundle whose supports were edited
// loads as written, and the structural checks then report what broke.
struct CodeBundle {
  BasisChoice basis;
  CssCode base;  // 192 x 512 per side, as stored
  std::vector<RowTag> x_rows;
  std::vector<RowTag> z_rows;
  std::optional<LiftSpec> lift;

  // True iff the stored supports equal build_base(basis).
  bool matches_construction() const {
    if (!basis.independent()) return false;
    const BaseCode ref = build_base(basis);
    return ref.code.hx == base.hx && ref.code.hz == base.hz;
  }

  // The code decoded and simulated: the base, or its expansion if lifted.
  CssCode code() const { return lift ? expand(base, *lift) : base; }
};

inline CodeBundle bundle_from_base(const BaseCode& b, std::optional<LiftSpec> lift = std::nullopt) {
  return {b.basis, b.code, b.x_rows, b.z_rows, std::move(lift)};
}

inline Json bundle_to_json(const CodeBundle& b) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "affq-code-bundle";
  j["n"] = b.base.n();
  j["rows_per_side"] = b.base.hx.rows();
  Json basis = Json::array();
  for (const auto& v : b.basis.vectors()) basis.push_back(v.index);
  j["basis"] = basis;
  auto rows = [&](const TannerGraph& g, const std::vector<RowTag>& tags) {
    Json arr = Json::array();
    for (std::size_t r = 0; r < g.num_checks(); ++r) {
      Json row;
      row["family"] = std::string(to_string(tags[r].family));
      row["coset"] = tags[r].coset;
      row["support"] = std::vector<std::uint32_t>(g.check_neighbors(r).begin(), g.check_neighbors(r).end());
      arr.push_back(row);
    }
    return arr;
  };
  j["x_rows"] = rows(b.base.x_graph, b.x_rows);
  j["z_rows"] = rows(b.base.z_graph, b.z_rows);
  j["lift"] = b.lift ? labels_to_json(b.base, *b.lift) : Json(nullptr);
  return j;
}

inline CodeBundle bundle_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("kind", "") != "affq-code-bundle") throw FormatError("bundle: not a code bundle");
    if (j.at("format_version").get<int>() != kFormatVersion) throw FormatError("bundle: unsupported format_version");
    const auto n = j.at("n").get<std::size_t>();
    const auto rows = j.at("rows_per_side").get<std::size_t>();
    const auto& bj = j.at("basis");
    if (!bj.is_array() || bj.size() != 9) throw FormatError("bundle: basis must list 9 vectors");
    std::array<Point9, 9> vecs{};
    for (std::size_t i = 0; i < 9; ++i) {
      const auto v = bj[i].get<std::uint32_t>();
      if (v >= kBaseQubits) throw FormatError("bundle: basis vector out of range");
      vecs[i].index = static_cast<std::uint16_t>(v);
    }
    CodeBundle b{BasisChoice(vecs), {}, {}, {}, std::nullopt};
    auto side = [&](const char* key, std::vector<RowTag>& tags) {
      const auto& arr = j.at(key);
      if (!arr.is_array() || arr.size() != rows) throw FormatError(std::string("bundle: ") + key + " row count");
      std::vector<std::vector<std::uint32_t>> adj;
      for (const auto& row : arr) {
        tags.push_back({family_from_string(row.at("family").get<std::string>()), row.at("coset").get<std::uint8_t>()});
        adj.push_back(row.at("support").get<std::vector<std::uint32_t>>());
      }
      return TannerGraph(n, std::move(adj)).to_matrix();
    };
    BitMatrix hx = side("x_rows", b.x_rows);
    BitMatrix hz = side("z_rows", b.z_rows);
    b.base = CssCode::from_matrices(std::move(hx), std::move(hz), 1, kBaseRowsPerFamily);
    if (j.contains("lift") && !j["lift"].is_null()) b.lift = labels_from_json(b.base, j["lift"]);
    return b;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("bundle: ") + e.what());
  }
}

inline CodeBundle load_bundle(const std::filesystem::path& path) {
  return bundle_from_json(parse_json(read_file(path), "bundle " + path.string()));
}

// ---------------------------------------------------------------------------
// Decoder config and repair templates.

inline std::vector<RepairTemplate> templates_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("templates") || !j["templates"].is_array()) {
    throw FormatError("templates: expected {\"templates\": [...]}");
  }
  std::vector<RepairTemplate> out;
  try {
    for (const auto& t : j["templates"]) {
      RepairTemplate r;
      const auto side = t.at("side").get<std::string>();
      if (side != "x" && side != "z") throw FormatError("templates: side must be \"x\" or \"z\"");
      r.side = side == "x" ? Side::X : Side::Z;
      r.base_checks = t.at("base_checks").get<std::vector<std::uint32_t>>();
      r.base_qubits = t.at("base_qubits").get<std::vector<std::uint32_t>>();
      out.push_back(std::move(r));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("templates: ") + e.what());
  }
  return out;
}

inline Json config_to_json(const DecoderConfig& c) {
  return Json{{"max_iter", c.max_iter},     {"re_bp_iter", c.re_bp_iter}, {"clip", c.clip},
              {"fallback_threshold", c.fallback_threshold}, {"joint_cap", c.joint_cap},
              {"re_bp_bias", c.re_bp_bias}, {"template_path", c.template_path}};
}

inline DecoderConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("config: expected a JSON object");
  static const std::set<std::string> known{"max_iter",  "re_bp_iter", "clip",         "fallback_threshold",
                                           "joint_cap", "re_bp_bias", "template_path"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw FormatError("config: unknown key '" + key + "'");
  }
  DecoderConfig c;
  try {
    c.max_iter = j.value("max_iter", c.max_iter);
    c.re_bp_iter = j.value("re_bp_iter", c.re_bp_iter);
    c.clip = j.value("clip", c.clip);
    c.fallback_threshold = j.value("fallback_threshold", c.fallback_threshold);
    c.joint_cap = j.value("joint_cap", c.joint_cap);
    c.re_bp_bias = j.value("re_bp_bias", c.re_bp_bias);
    c.template_path = j.value("template_path", c.template_path);
  } catch (const std::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (c.max_iter < 1 || c.re_bp_iter < 1) throw FormatError("config: iteration counts must be >= 1");
  if (!(c.clip > 0.0)) throw FormatError("config: clip must be positive");
  return c;
}

// Config plus its template library (path resolved relative to the config file).
struct LoadedConfig {
  DecoderConfig config;
  std::vector<RepairTemplate> templates;
};

inline LoadedConfig load_config(const std::filesystem::path& path) {
  LoadedConfig out{config_from_json(parse_json(read_file(path), "config " + path.string())), {}};
  if (!out.config.template_path.empty()) {
    std::filesystem::path t = out.config.template_path;
    if (t.is_relative()) t = path.parent_path() / t;
    out.templates = templates_from_json(parse_json(read_file(t), "templates " + t.string()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Results CSV.

inline constexpr std::string_view kCsvHeader = "p,trials,fail_total,fail_syndrome,fail_logical,fer,wilson_lo,wilson_hi";

inline std::string results_csv(const std::vector<FerPoint>& points) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& pt : points) {
    if (pt.trials == 0) continue;
    const Interval w = pt.wilson();
    out += format_double(pt.p) + ',' + std::to_string(pt.trials) + ',' + std::to_string(pt.fail_total()) + ',' +
           std::to_string(pt.fail_syndrome) + ',' + std::to_string(pt.fail_logical) + ',' + format_double(pt.fer()) +
           ',' + format_double(w.lo) + ',' + format_double(w.hi) + '\n';
  }
  return out;
}

// Reads the count columns back; derived columns are recomputed on output.
inline std::vector<FerPoint> parse_results_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw FormatError("csv: unexpected header");
  std::vector<FerPoint> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw FormatError("csv: line " + std::to_string(lineno) + " needs 8 fields");
    try {
      FerPoint pt;
      pt.p = std::stod(f[0]);
      pt.trials = std::stoull(f[1]);
      pt.fail_syndrome = std::stoull(f[3]);
      pt.fail_logical = std::stoull(f[4]);
      pt.done = true;
      if (std::stoull(f[2]) != pt.fail_total() || pt.fail_total() > pt.trials || pt.trials == 0) {
        throw FormatError("inconsistent counts");
      }
      out.push_back(pt);
    } catch (const std::exception& e) {
      throw FormatError("csv: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ledger JSONL.

inline std::string pack_hex(const BitVector& v) {
  std::ostringstream ss;
  ss << std::hex << std::setfill('0');
  for (auto w : v.words()) ss << std::setw(16) << w;
  return ss.str();
}

inline BitVector unpack_hex(std::string_view hex, std::size_t n) {
  BitVector v(n);
  auto words = v.words();
  if (hex.size() != 16 * words.size()) throw FormatError("ledger: packed operator has the wrong length");
  for (std::size_t i = 0; i < words.size(); ++i) {
    Word w = 0;
    auto [p, ec] = std::from_chars(hex.data() + 16 * i, hex.data() + 16 * (i + 1), w, 16);
    if (ec != std::errc{} || p != hex.data() + 16 * (i + 1)) throw FormatError("ledger: bad hex");
    words[i] = w;
  }
  if (n % kWordBits != 0 && !words.empty() && (words.back() >> (n % kWordBits)) != 0) {
    throw FormatError("ledger: bits set past the operator length");
  }
  return v;
}

inline Json ledger_entry_to_json(const LedgerEntry& e) {
  return Json{{"side", std::string(to_string(e.side))}, {"weight", e.weight}, {"p", e.p},
              {"trial", e.trial}, {"seed", e.seed}, {"n", e.op.size()}, {"packed", pack_hex(e.op)}};
}

inline LedgerEntry ledger_entry_from_json(const Json& j) {
  try {
    LedgerEntry e;
    const auto side = j.at("side").get<std::string>();
    if (side != "x" && side != "z") throw FormatError("ledger: side must be x or z");
    e.side = side == "x" ? Side::X : Side::Z;
    e.op = unpack_hex(j.at("packed").get<std::string>(), j.at("n").get<std::size_t>());
    e.weight = j.at("weight").get<std::size_t>();
    e.p = j.at("p").get<double>();
    e.trial = j.at("trial").get<std::uint64_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    if (e.op.weight() != e.weight) throw FormatError("ledger: weight does not match the operator");
    return e;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& ex) {
    throw FormatError(std::string("ledger: ") + ex.what());
  }
}

inline std::string ledger_jsonl(const DistanceLedger& ledger) {
  std::string out;
  for (const auto& e : ledger.entries()) out += ledger_entry_to_json(e).dump() + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Reference-line sidecar.

inline Json reference_sidecar() {
  return Json{{"format_version", kFormatVersion},
              {"de_reference", kDeReference},
              {"hashing_bound_rate_quarter", hashing_bound_p(0.25)},
              {"provenance",
               {{"de_reference", kDeReferenceProvenance},
                {"hashing_bound_rate_quarter",
                 "computed: bisection on 1 - h2(p) - p*log2(3) = 1/4 over [0, 3/4]"}}}};
}

// ---------------------------------------------------------------------------
// Simulation checkpoint.

struct SimCheckpoint {
  TrialPlan plan;  // threads is not recorded: it never affects results
  std::string code_fingerprint;
  std::vector<FerPoint> points;
  std::vector<LedgerEntry> ledger;
};

inline Json checkpoint_to_json(const SimCheckpoint& c) {
  Json points = Json::array();
  for (const auto& pt : c.points) {
    points.push_back({{"p", pt.p},
                      {"trials", pt.trials},
                      {"fail_syndrome", pt.fail_syndrome},
                      {"fail_logical", pt.fail_logical},
                      {"min_logical_weight", pt.min_logical_weight ? Json(*pt.min_logical_weight) : Json(nullptr)},
                      {"done", pt.done}});
  }
  Json ledger = Json::array();
  for (const auto& e : c.ledger) ledger.push_back(ledger_entry_to_json(e));
  return Json{{"format_version", kFormatVersion},
              {"kind", "affq-sim-checkpoint"},
              {"plan",
               {{"p", c.plan.ps},
                {"trials", c.plan.trials},
                {"target_failures", c.plan.target_failures},
                {"master_seed", c.plan.master_seed},
                {"batch", c.plan.batch}}},
              {"code_fingerprint", c.code_fingerprint},
              {"points", points},
              {"ledger", ledger}};
}

inline SimCheckpoint checkpoint_from_json(const Json& j) {
  try {
    if (j.value("kind", "") != "affq-sim-checkpoint") throw FormatError("checkpoint: wrong kind");
    if (j.at("format_version").get<int>() != kFormatVersion) throw FormatError("checkpoint: unsupported version");
    SimCheckpoint c;
    const auto& pj = j.at("plan");
    c.plan.ps = pj.at("p").get<std::vector<double>>();
    c.plan.trials = pj.at("trials").get<std::size_t>();
    c.plan.target_failures = pj.at("target_failures").get<std::size_t>();
    c.plan.master_seed = pj.at("master_seed").get<std::uint64_t>();
    c.plan.batch = pj.at("batch").get<std::size_t>();
    c.code_fingerprint = j.at("code_fingerprint").get<std::string>();
    for (const auto& p : j.at("points")) {
      FerPoint pt;
      pt.p = p.at("p").get<double>();
      pt.trials = p.at("trials").get<std::size_t>();
      pt.fail_syndrome = p.at("fail_syndrome").get<std::size_t>();
      pt.fail_logical = p.at("fail_logical").get<std::size_t>();
      if (!p.at("min_logical_weight").is_null()) pt.min_logical_weight = p["min_logical_weight"].get<std::size_t>();
      pt.done = p.at("done").get<bool>();
      c.points.push_back(pt);
    }
    for (const auto& e : j.at("ledger")) c.ledger.push_back(ledger_entry_from_json(e));
    return c;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace affq
