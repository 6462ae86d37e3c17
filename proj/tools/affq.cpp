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

// affq: generate, verify, lift, simulate and report on affine-coset CSS codes.
//
// Exit codes: 0 success, 1 a verification or decoding property failed,
// 2 usage or I/O error. Reports are JSON on stdout unless --human is given.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affq/base_affine.hpp"
#include "affq/cpm_lift.hpp"
#include "affq/decoder.hpp"
#include "affq/graph_analysis.hpp"
#include "affq/io.hpp"
#include "affq/logical_search.hpp"
#include "affq/sim.hpp"

namespace fs = std::filesystem;
using namespace affq;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Environment variable naming the decoder config used when --config is absent.
constexpr const char* kConfigEnv = "AFFQ_DECODER_CONFIG";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json structure_json(const StructureReport& r) {
  Json hist = Json::object();
  for (const auto& [size, count] : r.cross_intersection_histogram) hist[std::to_string(size)] = count;
  return Json{{"passed", r.passed()},
              {"shape", r.shape_ok},
              {"x_row_weights", r.x_row_weights_ok},
              {"z_row_weights", r.z_row_weights_ok},
              {"x_column_weights", r.x_column_weights_ok},
              {"z_column_weights", r.z_column_weights_ok},
              {"orthogonal", r.orthogonal},
              {"odd_pairs", r.odd_pairs.size()},
              {"cross_intersections_0_or_2", r.cross_intersections_0_or_2},
              {"same_side_at_most_one", r.same_side_at_most_one},
              {"cross_intersection_histogram", hist}};
}

// Names of the failed structural properties, for messages.
std::vector<std::string> structure_failures(const StructureReport& r) {
  std::vector<std::string> out;
  if (!r.shape_ok) out.emplace_back("shape");
  if (!r.x_row_weights_ok || !r.z_row_weights_ok) out.emplace_back("row-weight regularity");
  if (!r.x_column_weights_ok || !r.z_column_weights_ok) out.emplace_back("column-weight regularity");
  if (!r.orthogonal) out.emplace_back("orthogonality");
  if (!r.cross_intersections_0_or_2) out.emplace_back("cross-intersection sizes");
  if (!r.same_side_at_most_one) out.emplace_back("same-side overlap");
  return out;
}

Json dimension_json(const CodeDimension& d) { return Json{{"rank_x", d.rank_x}, {"rank_z", d.rank_z}, {"k", d.k}}; }

std::size_t lift_factor_of(const CodeBundle& b) { return b.lift ? b.lift->P : 1; }

void write_alists(const fs::path& out, const CssCode& code) {
  write_file_atomic(out.string() + ".hx.alist", to_alist(code.x_graph));
  write_file_atomic(out.string() + ".hz.alist", to_alist(code.z_graph));
}

// ---------------------------------------------------------------------------

struct GenBaseArgs {
  std::string basis = "standard";
  std::uint64_t seed = 0;
  std::string out;
  bool alist = true;
};

int cmd_gen_base(const GenBaseArgs& a, bool human) {
  BasisChoice basis;
  if (a.basis == "random") {
    Rng rng(derive_seed(a.seed, 0));
    basis = BasisChoice::random(rng);
  } else if (a.basis != "standard") {
    throw UsageError("--basis must be standard or random");
  }
  const BaseCode base = build_base(basis);
  const auto rep = verify_regularity_orthogonality(base.code);
  const CodeBundle bundle = bundle_from_base(base);
  write_file_atomic(a.out, bundle_to_json(bundle).dump(1) + "\n");
  if (a.alist) write_alists(a.out, base.code);
  Json basis_json = Json::array();
  for (const auto& v : basis.vectors()) basis_json.push_back(v.index);
  const Json report{{"out", a.out}, {"basis", basis_json}, {"n", base.code.n()}, {"structure", structure_json(rep)}};
  if (human) {
    std::cout << "wrote " << a.out << " (n=" << base.code.n() << ", structure " << (rep.passed() ? "ok" : "FAILED")
              << ")\n";
  } else {
    emit(report);
  }
  return rep.passed() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string file;
  bool girth = false;
  bool dimension = false;
  bool spc3 = false;
  std::size_t logical_budget = 0;
  std::size_t logical_effort = 2000;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a, bool human) {
  const CodeBundle bundle = load_bundle(a.file);
  const std::size_t P = lift_factor_of(bundle);
  Json checks;
  std::vector<std::string> failed;

  const auto base_rep = verify_regularity_orthogonality(bundle.base);
  checks["structure"] = structure_json(base_rep);
  for (const auto& f : structure_failures(base_rep)) failed.push_back(f);
  const bool constructed = bundle.matches_construction();
  checks["construction"] = {{"passed", constructed}};
  if (!constructed) failed.emplace_back("supports differ from the affine construction for the stored basis");

  const bool structural = base_rep.passed();
  std::optional<CssCode> lifted;
  if (bundle.lift && structural) {
    lifted = bundle.code();
    const auto rep = verify_regularity_orthogonality(*lifted);
    checks["lifted_structure"] = structure_json(rep);
    for (const auto& f : structure_failures(rep)) failed.push_back("lifted " + f);
  }
  const CssCode& code = lifted ? *lifted : bundle.base;

  if (a.girth) {
    Json g;
    bool ok = structural;
    for (Side s : {Side::X, Side::Z}) {
      const auto res = lifted ? lifted_girth(code, s) : girth(s == Side::X ? code.x_graph : code.z_graph);
      g[std::string(to_string(s))] = res.girth ? Json(*res.girth) : Json(nullptr);
      if (!res.girth || *res.girth < 8) ok = false;
      if (!lifted) {
        const auto& tg = s == Side::X ? code.x_graph : code.z_graph;
        const bool four = find_4cycle(tg).has_value();
        const bool six = !four && find_6cycle(tg).has_value();
        g[std::string(to_string(s)) + "_has_4cycle"] = four;
        g[std::string(to_string(s)) + "_has_6cycle"] = six;
        if (four || six) ok = false;
        if (constructed) {
          const bool witness = is_cycle(tg, affine_8cycle(build_base(bundle.basis), s));
          g[std::string(to_string(s)) + "_affine_8cycle"] = witness;
          if (!witness) ok = false;
        }
      }
    }
    g["passed"] = ok;
    checks["girth"] = g;
    if (!ok) failed.emplace_back("girth");
  }

  if (a.dimension) {
    const auto d = code_dimension(code);
    Json dj = dimension_json(d);
    bool ok;
    if (lifted) {
      ok = d.k >= 128 * P;
      dj["k_floor"] = 128 * P;
    } else {
      ok = d.k == 174 && d.rank_x == 169 && d.rank_z == 169;
      dj["expected_k"] = 174;
    }
    dj["passed"] = ok;
    checks["dimension"] = dj;
    if (!ok) failed.emplace_back("dimension");
  }

  if (a.spc3) {
    const auto r = verify_spc3_equivalence(bundle.basis);
    const bool ok = r.passed() && constructed;
    checks["spc3"] = {{"passed", ok},
                      {"x_families_match", r.x_families_match},
                      {"z_families_match", r.z_families_match},
                      {"identical_without_permutation", r.identical_without_permutation}};
    if (!ok) failed.emplace_back("spc3 equivalence");
  }

  if (a.logical_budget > 0) {
    // Evidence only: a hit bounds the distance, a miss proves nothing.
    Json lj;
    const StabilizerSpaces spaces(code);
    std::optional<std::size_t> best;
    for (Side s : {Side::X, Side::Z}) {
      const auto r = search_low_weight_logical(code, s, a.logical_budget, a.logical_effort, a.seed, &spaces);
      Json sj{{"iterations", r.iterations}};
      if (r.logical) {
        sj["found_weight"] = r.logical->weight();
        sj["support"] = r.logical->support();
        if (!best || r.logical->weight() < *best) best = r.logical->weight();
      } else {
        sj["found_weight"] = nullptr;
      }
      lj[std::string(to_string(s))] = sj;
    }
    lj["budget"] = a.logical_budget;
    lj["distance_upper_bound"] = best ? Json(*best) : Json(nullptr);
    checks["logical"] = lj;
  }

  const bool ok = failed.empty();
  const Json report{{"file", a.file}, {"n", code.n()}, {"P", P}, {"checks", checks}, {"passed", ok}, {"failed", failed}};
  if (human) {
    std::cout << a.file << ": n=" << code.n() << " P=" << P << "\n";
    for (auto& [name, c] : checks.items()) {
      std::cout << "  " << name << ": " << (c.contains("passed") ? (c["passed"].get<bool>() ? "ok" : "FAILED") : "info")
                << "\n";
    }
  } else {
    emit(report);
  }
  for (const auto& f : failed) std::cerr << "verify: failed: " << f << "\n";
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct LiftArgs {
  std::string file;
  std::uint32_t P = 0;
  std::optional<std::uint64_t> seed;
  std::string labels;
  std::string out;
  std::size_t girth_floor = 0;
  std::size_t max_attempts = 100;
  bool alist = false;
  std::string labels_out;
};

int cmd_lift(const LiftArgs& a, bool human) {
  CodeBundle bundle = load_bundle(a.file);
  if (bundle.lift) throw UsageError("lift: input bundle is already lifted");
  const auto rep = verify_regularity_orthogonality(bundle.base);
  if (!rep.passed()) {
    std::cerr << "lift: input base fails structural checks\n";
    return kCheckFailed;
  }
  LiftSpec spec;
  Json info;
  if (!a.labels.empty()) {
    spec = load_labels(bundle.base, a.labels);
    if (a.P != 0 && spec.P != a.P) throw UsageError("lift: --P disagrees with the label file");
    info["labels"] = a.labels;
  } else {
    if (a.P < 1) throw UsageError("lift: --P must be >= 1");
    const std::uint64_t seed = a.seed.value_or(0);
    if (a.girth_floor > 0) {
      const auto r = solve_labels_with_girth_floor(bundle.base, a.P, seed, a.girth_floor, a.max_attempts);
      if (!r.reached) {
        std::cerr << "lift: no labels reached girth " << a.girth_floor << " in " << a.max_attempts << " attempts\n";
        return kCheckFailed;
      }
      spec = r.spec;
      info["attempts"] = r.attempts;
      info["label_seed"] = r.seed;
    } else {
      spec = solve_labels(bundle.base, a.P, seed);
    }
    info["seed"] = seed;
  }
  bundle.lift = spec;
  const CssCode lifted = bundle.code();
  const auto lrep = verify_regularity_orthogonality(lifted);
  const auto d = code_dimension(lifted);
  write_file_atomic(a.out, bundle_to_json(bundle).dump(1) + "\n");
  if (a.alist) write_alists(a.out, lifted);
  if (!a.labels_out.empty()) write_file_atomic(a.labels_out, labels_to_json(bundle.base, spec).dump() + "\n");
  const bool ok = lrep.passed() && d.k >= 128 * spec.P;
  info["out"] = a.out;
  info["P"] = spec.P;
  info["n"] = lifted.n();
  info["dimension"] = dimension_json(d);
  info["k_floor"] = 128 * spec.P;
  info["structure"] = structure_json(lrep);
  info["passed"] = ok;
  if (human) {
    std::cout << "wrote " << a.out << ": [[" << lifted.n() << "," << d.k << "]] P=" << spec.P
              << " rank_x=" << d.rank_x << " rank_z=" << d.rank_z << (ok ? "" : " FAILED") << "\n";
  } else {
    emit(info);
  }
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct SimArgs {
  std::string file;
  std::vector<double> ps;
  std::size_t trials = 0;
  std::size_t target_failures = 0;
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::size_t threads = 1;
  std::size_t batch = 1024;
  bool resume = false;
  std::string checkpoint;
  std::string ledger;
  std::string sidecar;
  std::size_t max_batches = 0;
};

// Thrown from the batch hook once --max-batches is used up; state is already on disk.
struct BatchBudgetSpent {};

// A failure target without a trial count runs until the target or this cap.
constexpr std::size_t kDefaultTrialCap = 1000000000;

int cmd_sim(SimArgs a, bool human) {
  if (a.ps.empty()) throw UsageError("sim: --p is required");
  if (a.trials == 0 && a.target_failures == 0) throw UsageError("sim: give --trials and/or --target-failures");
  TrialPlan plan;
  plan.ps = a.ps;
  plan.trials = a.trials > 0 ? a.trials : kDefaultTrialCap;
  plan.target_failures = a.target_failures;
  plan.master_seed = a.seed;
  plan.threads = a.threads;
  plan.batch = a.batch;
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("sim: ") + e.what());
  }

  if (a.config.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) a.config = env;
  }
  LoadedConfig cfg;
  if (!a.config.empty()) cfg = load_config(a.config);

  const CodeBundle bundle = load_bundle(a.file);
  const auto base_rep = verify_regularity_orthogonality(bundle.base);
  if (!base_rep.passed()) {
    std::cerr << "sim: bundle fails structural checks\n";
    return kCheckFailed;
  }
  const CssCode code = bundle.code();
  const Decoder decoder(code, cfg.config, cfg.templates);
  DistanceLedger ledger(code, decoder.spaces());

  if (a.checkpoint.empty()) a.checkpoint = a.out + ".ckpt.json";
  if (a.ledger.empty()) a.ledger = a.out + ".ledger.jsonl";
  if (a.sidecar.empty()) a.sidecar = a.out + ".refs.json";

  SimCheckpoint state{plan, code_fingerprint(code), {}, {}};
  for (double p : plan.ps) {
    FerPoint pt;
    pt.p = p;
    state.points.push_back(pt);
  }
  if (a.resume && fs::exists(a.checkpoint)) {
    SimCheckpoint prev = checkpoint_from_json(parse_json(read_file(a.checkpoint), "checkpoint"));
    if (prev.code_fingerprint != state.code_fingerprint) throw UsageError("sim: checkpoint is for a different code");
    if (prev.plan.ps != plan.ps || prev.plan.trials != plan.trials ||
        prev.plan.target_failures != plan.target_failures || prev.plan.master_seed != plan.master_seed ||
        prev.plan.batch != plan.batch) {
      throw UsageError("sim: checkpoint plan differs from the requested run");
    }
    state.points = prev.points;
    for (const auto& e : prev.ledger) ledger.restore(e);
  }

  write_file_atomic(a.sidecar, reference_sidecar().dump(2) + "\n");
  auto persist = [&] {
    state.ledger = ledger.entries();
    write_file_atomic(a.checkpoint, checkpoint_to_json(state).dump() + "\n");
    write_file_atomic(a.out, results_csv(state.points));
    write_file_atomic(a.ledger, ledger_jsonl(ledger));
  };
  std::size_t batches = 0;
  bool complete = true;
  try {
    for (auto& pt : state.points) {
      run_point(decoder, plan, pt, &ledger, [&](const FerPoint&) {
        persist();
        if (a.max_batches > 0 && ++batches >= a.max_batches) throw BatchBudgetSpent{};
      });
    }
  } catch (const BatchBudgetSpent&) {
    complete = std::all_of(state.points.begin(), state.points.end(), [](const FerPoint& p) { return p.done; });
  }
  persist();

  Json points = Json::array();
  for (const auto& pt : state.points) {
    const auto w = pt.trials > 0 ? pt.wilson() : Interval{0.0, 1.0};
    points.push_back({{"p", pt.p},
                      {"trials", pt.trials},
                      {"fail_total", pt.fail_total()},
                      {"fail_syndrome", pt.fail_syndrome},
                      {"fail_logical", pt.fail_logical},
                      {"fer", pt.fer()},
                      {"wilson_lo", w.lo},
                      {"wilson_hi", w.hi},
                      {"min_logical_weight", pt.min_logical_weight ? Json(*pt.min_logical_weight) : Json(nullptr)}});
  }
  const auto bound = ledger.best_bound();
  if (human) {
    std::printf("%-10s %10s %8s %8s %8s %12s %12s %12s\n", "p", "trials", "fail", "synd", "logical", "fer", "lo",
                "hi");
    for (const auto& pt : state.points) {
      const auto w = pt.trials > 0 ? pt.wilson() : Interval{0.0, 1.0};
      std::printf("%-10g %10zu %8zu %8zu %8zu %12.4e %12.4e %12.4e\n", pt.p, pt.trials, pt.fail_total(),
                  pt.fail_syndrome, pt.fail_logical, pt.fer(), w.lo, w.hi);
    }
    if (bound) std::printf("distance upper bound from logical residuals: %zu\n", *bound);
    if (!complete) std::printf("stopped early; rerun with --resume to continue\n");
  } else {
    emit(Json{{"out", a.out},
              {"complete", complete},
              {"n", code.n()},
              {"seed", a.seed},
              {"points", points},
              {"distance_upper_bound", bound ? Json(*bound) : Json(nullptr)},
              {"ledger", a.ledger},
              {"sidecar", a.sidecar}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> csvs;
  std::string out;
};

int cmd_report(const ReportArgs& a, bool human) {
  if (a.csvs.empty()) throw UsageError("report: no input CSV files");
  std::map<double, FerPoint> merged;
  for (const auto& path : a.csvs) {
    for (const auto& pt : parse_results_csv(read_file(path))) {
      auto& m = merged[pt.p];
      m.p = pt.p;
      m.trials += pt.trials;
      m.fail_syndrome += pt.fail_syndrome;
      m.fail_logical += pt.fail_logical;
      m.done = true;
    }
  }
  if (merged.empty()) throw UsageError("report: inputs contain no data rows");
  std::vector<FerPoint> points;
  for (auto& [p, pt] : merged) points.push_back(pt);
  Json rows = Json::array();
  for (const auto& pt : points) {
    const auto w = pt.wilson();
    rows.push_back({{"p", pt.p},
                    {"trials", pt.trials},
                    {"fail_total", pt.fail_total()},
                    {"fail_syndrome", pt.fail_syndrome},
                    {"fail_logical", pt.fail_logical},
                    {"fer", pt.fer()},
                    {"wilson_lo", w.lo},
                    {"wilson_hi", w.hi}});
  }
  const Json report{{"format_version", kFormatVersion}, {"inputs", a.csvs}, {"points", rows},
                    {"references", reference_sidecar()}};
  if (!a.out.empty()) write_file_atomic(a.out, report.dump(2) + "\n");
  if (human) {
    std::cout << results_csv(points);
  } else {
    emit(report);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affq: affine-coset CSS code toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  bool human = false;
  app.add_flag("--human", human, "Print tables instead of JSON");

  GenBaseArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-base", "Build the base code and write a bundle plus alist files");
  gen_cmd->add_option("--basis", gen.basis, "standard or random")->check(CLI::IsMember({"standard", "random"}));
  gen_cmd->add_option("--seed", gen.seed, "Seed for --basis random");
  gen_cmd->add_option("--out", gen.out, "Bundle path")->required();
  gen_cmd->add_flag("!--no-alist", gen.alist, "Skip the alist files");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check structural properties of a bundle");
  ver_cmd->add_option("file", ver.file, "Bundle path")->required()->check(CLI::ExistingFile);
  ver_cmd->add_flag("--girth", ver.girth, "Girth and short-cycle checks");
  ver_cmd->add_flag("--dimension", ver.dimension, "Ranks and k");
  ver_cmd->add_flag("--spc3", ver.spc3, "Equivalence with the product of three SPC codes");
  ver_cmd->add_option("--logical-budget", ver.logical_budget, "Search for logicals up to this weight");
  ver_cmd->add_option("--logical-effort", ver.logical_effort, "Search iterations per type");
  ver_cmd->add_option("--seed", ver.seed, "Seed for the logical search");

  LiftArgs lift;
  auto* lift_cmd = app.add_subcommand("lift", "Lift a base bundle with circulant shift labels");
  lift_cmd->add_option("file", lift.file, "Base bundle")->required()->check(CLI::ExistingFile);
  lift_cmd->add_option("--P", lift.P, "Lift factor");
  auto* seed_opt = lift_cmd->add_option("--seed", lift.seed, "Seed for random labels");
  lift_cmd->add_option("--labels", lift.labels, "Label file to import")->check(CLI::ExistingFile)->excludes(seed_opt);
  lift_cmd->add_option("--out", lift.out, "Lifted bundle path")->required();
  lift_cmd->add_option("--girth-floor", lift.girth_floor, "Resample labels until the lifted girth reaches this");
  lift_cmd->add_option("--max-attempts", lift.max_attempts, "Attempts for --girth-floor");
  lift_cmd->add_flag("--alist", lift.alist, "Also write the expanded matrices as alist");
  lift_cmd->add_option("--labels-out", lift.labels_out, "Also write the labels file");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Monte Carlo FER under depolarizing noise");
  sim_cmd->add_option("file", sim.file, "Bundle path")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--p", sim.ps, "Physical error rates")->delimiter(',')->required();
  sim_cmd->add_option("--trials", sim.trials, "Trials per point (cap when a failure target is set)");
  sim_cmd->add_option("--target-failures", sim.target_failures, "Stop a point at this many failures");
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--config", sim.config, std::string("Decoder config JSON (default: $") + kConfigEnv + ")");
  sim_cmd->add_option("--out", sim.out, "Results CSV")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads");
  sim_cmd->add_option("--batch", sim.batch, "Trials per batch");
  sim_cmd->add_flag("--resume", sim.resume, "Continue from the checkpoint if present");
  sim_cmd->add_option("--checkpoint", sim.checkpoint, "Checkpoint path (default: OUT.ckpt.json)");
  sim_cmd->add_option("--ledger", sim.ledger, "Ledger JSONL path (default: OUT.ledger.jsonl)");
  sim_cmd->add_option("--sidecar", sim.sidecar, "Reference-line JSON path (default: OUT.refs.json)");
  sim_cmd->add_option("--max-batches", sim.max_batches, "Stop after this many batches (resume later)");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Merge result CSVs and attach reference lines");
  rep_cmd->add_option("csv", rep.csvs, "Result CSV files")->check(CLI::ExistingFile);
  rep_cmd->add_option("--out", rep.out, "Merged report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_base(gen, human);
    if (*ver_cmd) return cmd_verify(ver, human);
    if (*lift_cmd) return cmd_lift(lift, human);
    if (*sim_cmd) return cmd_sim(sim, human);
    if (*rep_cmd) return cmd_report(rep, human);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
