/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "leximax/errors.hpp"
#include "leximax/healthcare.hpp"
#include "leximax/milp.hpp"
#include "leximax/mps.hpp"
#include "leximax/oracle.hpp"
#include "leximax/sequential.hpp"
#include "leximax/shelter.hpp"

namespace leximax::cli {

namespace {

namespace fs = std::filesystem;

/// Bad flag values detected after CLI11 has accepted the command line.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string instance;
  std::string kind;
  double delta = 0.0;
  std::optional<double> budget;
  std::optional<double> bigM;
  std::string tieBreak = "hierarchical";
  bool cuts = false;
  std::string backend;
  std::string assembly = "terminal";
  std::string out;
  std::string log;
  double relGap = 1e-6;
  double timeLimit = 0.0;
  std::string deltas;
  unsigned threads = 0;
};

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw ParseError("cannot read '" + path + "'"); }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) { throw UsageError("cannot write '" + path + "'"); }
}

TieBreak parse_tie_break(const std::string& text)
{
  if (text == "none") { return TieBreak::none(); }
  if (text == "hierarchical") { return TieBreak::hierarchical(); }
  if (text.rfind("epsilon=", 0) == 0) {
    const std::string value = text.substr(8);
    std::size_t used = 0;
    double eps = -1.0;
    try {
      eps = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == value.size() && eps >= 0.0 && std::isfinite(eps)) { return TieBreak::weighted(eps); }
  }
  throw UsageError("--tie-break must be none, hierarchical or epsilon=<f>, got '" + text + "'");
}

AllocationInstance load_instance(const Options& o)
{
  const std::string text = read_file(o.instance);
  const std::string stem = fs::path(o.instance).stem().string();
  if (o.kind == "explicit") { return to_instance(parse_explicit_set(text), stem); }
  if (o.kind == "healthcare") {
    HealthcareInstance hw = parse_healthcare_csv(text);
    if (!o.budget && !hw.budget) { throw UsageError("healthcare instances need a B= line or --budget"); }
    AllocationInstance inst = build_healthcare_model(hw, o.budget);
    inst.name = stem;
    return inst;
  }
  if (o.kind == "shelter") {
    if (!o.budget) { throw UsageError("shelter instances need --budget"); }
    ShelterInstance sh = parse_orlib_cap(text);
    sh.name = orlib_file_name(stem);
    return build_shelter_model(sh, *o.budget);
  }
  throw UsageError("--kind must be healthcare, shelter or explicit");
}

TradeoffParams make_params(const Options& o, double delta)
{
  TradeoffParams p;
  p.delta = delta;
  p.bigM = o.bigM;
  p.tieBreak = parse_tie_break(o.tieBreak);
  if (!(delta >= 0.0)) { throw UsageError("--delta must be >= 0"); }
  if (o.bigM && !(*o.bigM > delta)) { throw UsageError("--big-m must exceed delta"); }
  return p;
}

RunOptions make_run_options(const Options& o)
{
  RunOptions run;
  run.cuts = o.cuts;
  if (o.assembly == "terminal") {
    run.assembly = FinalAssembly::TerminalSolve;
  } else if (o.assembly == "previous") {
    run.assembly = FinalAssembly::PreviousStage;
  } else {
    throw UsageError("--assembly must be terminal or previous");
  }
  std::string backend = o.backend;
  if (backend.empty()) {
    if (const char* env = std::getenv("LEXIMAX_BACKEND")) { backend = env; }
  }
  try {
    run.backend = make_backend(backend);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  run.solver.relGap = o.relGap;
  run.solver.timeLimit = o.timeLimit;
  return run;
}

std::string csv_header(int n, const AllocationInstance& inst)
{
  std::string out;
  if (inst.kind == InstanceKind::Shelter) {
    out += "# offset=" + fmt(inst.offset) + " (utilities are negative distances; model adds the offset)\n";
  }
  out += "delta,avg_utility,K,total_time_ms";
  for (int i = 1; i <= n; ++i) { out += ",u_" + std::to_string(i); }
  return out + "\n";
}

std::string csv_row(double delta, const SocialOutcome& o)
{
  std::string out = fmt(delta) + "," + fmt(o.average) + "," + std::to_string(o.K) + "," +
                    fmt(o.seconds * 1000.0);
  for (double u : o.utilities) { out += "," + fmt(u); }
  return out + "\n";
}

std::string summary(const AllocationInstance& inst, const TradeoffParams& p, const Options& o,
                    const SocialOutcome& out)
{
  std::ostringstream s;
  const double range = inst.utilityHigh - inst.utilityLow;
  s << "instance: " << inst.name << " (" << to_string(inst.kind) << ", n=" << inst.parties() << ")\n";
  s << "delta: " << fmt(p.delta) << "  big-M: " << fmt(p.bigM ? *p.bigM : compute_big_m(inst, p))
    << "  tie-break: " << o.tieBreak << "  cuts: " << (o.cuts ? "on" : "off") << "\n";
  if (inst.offset != 0.0) { s << "utility offset: " << fmt(inst.offset) << " (values below in original units)\n"; }
  if (p.delta == 0.0) {
    s << "regime: utilitarian (delta = 0)\n";
  } else if (p.delta >= range) {
    s << "regime: leximax (delta >= utility range " << fmt(range) << ")\n";
  }
  s << "stage  party  value  z  ms\n";
  for (const IterationLog& l : out.log) {
    s << l.k << "  " << l.fixedIndex + 1 << "  " << fmt(l.fixedValue) << "  " << fmt(l.z) << "  "
      << fmt(l.seconds * 1000.0) << "\n";
  }
  for (const IterationLog& l : out.log) {
    if (!l.tieBreakProven) {
      s << "note: stage " << l.k << " tie-break stopped at its node limit; the stage optimum holds, "
        << "its total utility is the best found\n";
    }
  }
  s << "K = " << out.K << ", solves = " << out.solves() << "\n";
  s << "final utilities:";
  for (std::size_t i = 0; i < out.utilities.size(); ++i) {
    s << " " << fmt(out.utilities[i]) << (out.fairMask[i] ? "*" : "");
  }
  s << "\n  (* within delta of the smallest utility)\n";
  s << "total utility: " << fmt(out.total) << "  average per capita: " << fmt(out.average) << "\n";
  return s.str();
}

void write_run_log(const std::string& path, const AllocationInstance& inst, double delta,
                   const SocialOutcome& out)
{
  std::ostringstream s;
  s << "# leximax run log: instance=" << inst.name << " delta=" << fmt(delta)
    << " offset=" << fmt(inst.offset) << "\n";
  s << "k,party,value,value_model,z,fixed\n";
  for (const IterationLog& l : out.log) {
    char model[32];
    std::snprintf(model, sizeof model, "%.17g", inst.to_model(l.fixedValue));
    s << l.k << "," << l.fixedIndex + 1 << "," << fmt(l.fixedValue) << "," << model << "," << fmt(l.z)
      << "," << (l.k <= out.K ? 1 : 0) << "\n";
  }
  write_file(path, s.str());
}

/// Fixed (party, model value) pairs from a run log, in stage order.
std::vector<std::pair<int, double>> read_run_log(const std::string& path)
{
  std::vector<std::pair<int, double>> fixed;
  std::istringstream in(read_file(path));
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line[0] == '#' || line.rfind("k,", 0) == 0) { continue; }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) { f.push_back(cell); }
    try {
      if (f.size() != 6) { throw std::invalid_argument("field count"); }
      if (std::stoi(f[5]) == 1) { fixed.emplace_back(std::stoi(f[1]) - 1, std::stod(f[3])); }
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineNo) + ": malformed run log line");
    }
  }
  return fixed;
}

void add_instance_flags(CLI::App* cmd, Options& o, bool needDelta)
{
  cmd->add_option("--instance", o.instance, "Instance file")->required();
  cmd->add_option("--kind", o.kind, "Instance kind")
      ->required()
      ->check(CLI::IsMember({"healthcare", "shelter", "explicit"}));
  if (needDelta) { cmd->add_option("--delta", o.delta, "Trade-off parameter delta (>= 0)")->required(); }
  cmd->add_option("--budget", o.budget, "Budget B (healthcare override, required for shelter)");
  cmd->add_option("--big-m", o.bigM, "Big-M override (default derived from the utility range)");
  cmd->add_option("--tie-break", o.tieBreak, "none | hierarchical | epsilon=<f>");
  cmd->add_flag("--cuts", o.cuts, "Add the valid inequalities to every stage k >= 2");
}

void add_run_flags(CLI::App* cmd, Options& o)
{
  cmd->add_option("--backend", o.backend, "embedded | external:<cmd> (default $LEXIMAX_BACKEND or embedded)");
  cmd->add_option("--assembly", o.assembly,
                  "terminal: unfixed utilities from the solve that left the fair region; "
                  "previous: from the last solve inside it");
  cmd->add_option("--out", o.out, "CSV output path");
  cmd->add_option("--rel-gap", o.relGap, "Relative optimality gap")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", o.timeLimit, "Per-solve time limit in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
}

int cmd_solve(const Options& o, std::ostream& out)
{
  const AllocationInstance inst = load_instance(o);
  const TradeoffParams p = make_params(o, o.delta);
  const SocialOutcome result = run_sequence(inst, p, make_run_options(o));
  const std::string csv = csv_header(inst.parties(), inst) + csv_row(o.delta, result);
  out << summary(inst, p, o, result);
  if (!o.log.empty()) { write_run_log(o.log, inst, o.delta, result); }
  if (o.out.empty()) {
    out << "\n" << csv;
  } else {
    write_file(o.out, csv);
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err)
{
  const AllocationInstance inst = load_instance(o);
  std::vector<double> deltas;
  try {
    deltas = parse_delta_list(o.deltas);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  for (double d : deltas) { make_params(o, d); }
  const std::vector<SweepRow> rows = sweep(inst, deltas, make_params(o, deltas.front()),
                                           make_run_options(o), o.threads);
  std::string csv = csv_header(inst.parties(), inst);
  int failures = 0;
  for (const SweepRow& row : rows) {
    if (row.outcome) {
      csv += csv_row(row.delta, *row.outcome);
    } else {
      ++failures;
      csv += "# delta=" + fmt(row.delta) + " error: " + row.error + "\n";
      err << "delta " << fmt(row.delta) << ": " << row.error << "\n";
    }
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file(o.out, csv);
    out << "wrote " << rows.size() << " rows to " << o.out << "\n";
  }
  return failures == 0 ? kOk : kSolverFailure;
}

int cmd_export(const Options& o, const std::string& stage, std::ostream& out)
{
  const AllocationInstance inst = load_instance(o);
  TradeoffParams p = make_params(o, o.delta);
  if (!p.bigM) { p.bigM = compute_big_m(inst, p); }
  int k = 0;
  if (stage == "P1") {
    k = 1;
  } else if (stage.rfind("Pk:", 0) == 0) {
    try {
      std::size_t used = 0;
      k = std::stoi(stage.substr(3), &used);
      if (used != stage.size() - 3) { k = 0; }
    } catch (const std::exception&) {
      k = 0;
    }
  }
  if (k < 1 || k > inst.parties()) {
    throw UsageError("--stage must be P1 or Pk:<k> with 2 <= k <= n, got '" + stage + "'");
  }
  LinearModel model;
  if (k == 1) {
    model = encode_P1(inst.parties(), inst.groups, p);
  } else {
    if (o.log.empty()) { throw UsageError("missing prefix: stage " + stage + " needs --log from a prior run"); }
    const auto fixed = read_run_log(o.log);
    if (static_cast<int>(fixed.size()) < k - 1) {
      throw UsageError("missing prefix: run log fixes " + std::to_string(fixed.size()) +
                       " parties, stage " + stage + " needs " + std::to_string(k - 1));
    }
    SequentialState state = SequentialState::initial(inst.parties());
    for (int j = 0; j < k - 1; ++j) { state.fix(fixed[static_cast<std::size_t>(j)].first, fixed[static_cast<std::size_t>(j)].second); }
    model = encode_Pk(state, inst.groups, p);
    model = attach_feasible_set(model, inst.feasible);
    if (o.cuts) { model = add_valid_cuts(model, state, inst.groups, p); }
  }
  if (k == 1) { model = attach_feasible_set(model, inst.feasible); }
  const std::string mps = export_mps(model, inst.name.empty() ? "LEXIMAX" : inst.name);
  if (o.out.empty()) {
    out << mps;
  } else {
    write_file(o.out, mps);
  }
  return kOk;
}

int cmd_solve_mps(const std::string& mpsPath, const std::string& solPath, double relGap)
{
  const LinearModel model = parse_mps(read_file(mpsPath));
  SolverConfig cfg;
  cfg.relGap = relGap;
  const Solution sol = solve(model, cfg);
  write_file(solPath, write_solution(model, sol));
  return sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Infeasible ||
                 sol.status == SolveStatus::Unbounded
             ? kOk
             : kSolverFailure;
}

int cmd_validate(long trials, std::uint64_t seed, bool injectFault, const std::string& reportDir,
                 std::ostream& out)
{
  const Fault fault = injectFault ? Fault::BranchFormFk : Fault::None;
  SolverConfig cfg;
  cfg.relGap = 1e-10;
  const long fidelityN = trials > 0 ? trials : 200;
  const long equivalenceN = trials > 0 ? trials : 100;
  const long cmN = trials > 0 ? trials : 1000;
  const long gapN = trials > 0 ? trials : 20;
  if (injectFault) { out << "fault injected: F_k evaluated in two-branch form\n"; }

  bool ok = true;
  const auto verdict = [&](const char* name, bool pass) {
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  };

  const CmReport cm = check_cm_property(0, cmN, seed, fault);
  out << cm.text();
  verdict("cm-property", cm.passed());

  const FidelityReport fid = check_encoding_fidelity(fidelityN, seed + 1, cfg, fault);
  out << fid.text();
  verdict("encoding-fidelity", fid.passed());

  RunOptions run;
  run.solver = cfg;
  const EquivalenceReport eq = check_oracle_equivalence(equivalenceN, seed + 2, TieBreak::hierarchical(), run);
  out << eq.text();
  verdict("oracle-equivalence", eq.passed());

  const GapReport gap = relaxation_gap_report(2, 6, gapN, seed + 3, cfg);
  out << gap.text() << "(diagnostic, no verdict)\n";

  if (!reportDir.empty()) {
    fs::create_directories(reportDir);
    write_file((fs::path(reportDir) / "fidelity.csv").string(), fid.csv());
    write_file((fs::path(reportDir) / "gap.csv").string(), gap.csv());
  }
  return ok ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Sequential leximax/utilitarian welfare optimisation over MILP feasible sets", "leximax"};
  app.require_subcommand(1);
  Options o;

  CLI::App* solveCmd = app.add_subcommand("solve", "Run the sequential procedure for one delta");
  add_instance_flags(solveCmd, o, true);
  add_run_flags(solveCmd, o);
  solveCmd->add_option("--log", o.log, "Write the per-stage run log (input to export)");

  CLI::App* sweepCmd = app.add_subcommand("sweep", "Run the procedure for a list or range of deltas");
  add_instance_flags(sweepCmd, o, false);
  add_run_flags(sweepCmd, o);
  sweepCmd->add_option("--deltas", o.deltas, "a:b:step or v1,v2,...")->required();
  sweepCmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");

  long trials = 0;
  std::uint64_t seed = 1;
  bool injectFault = false;
  std::string reportDir;
  CLI::App* validateCmd = app.add_subcommand("validate", "Run the property and cross-check suites");
  validateCmd->add_option("--trials", trials, "Trials per suite (default: the full suite sizes)")
      ->check(CLI::NonNegativeNumber);
  validateCmd->add_option("--seed", seed, "Random seed");
  validateCmd->add_flag("--inject-fault", injectFault, "Negative control: evaluate F_k in branch form");
  validateCmd->add_option("--report-dir", reportDir, "Directory for CSV reports");

  std::string stage;
  CLI::App* exportCmd = app.add_subcommand("export", "Write the MPS model of one stage");
  add_instance_flags(exportCmd, o, true);
  exportCmd->add_option("--stage", stage, "P1 or Pk:<k>")->required();
  exportCmd->add_option("--log", o.log, "Run log supplying the fixed prefix for Pk");
  exportCmd->add_option("--out", o.out, "MPS output path (default stdout)");

  std::string mpsPath, solPath;
  CLI::App* mpsCmd = app.add_subcommand("solve-mps", "Solve an MPS file with the embedded solver");
  mpsCmd->group("");
  mpsCmd->add_option("model", mpsPath, "MPS file")->required();
  mpsCmd->add_option("solution", solPath, "Listing to write")->required();
  mpsCmd->add_option("--rel-gap", o.relGap, "Relative optimality gap")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solveCmd) { return cmd_solve(o, out); }
    if (*sweepCmd) { return cmd_sweep(o, out, err); }
    if (*validateCmd) { return cmd_validate(trials, seed, injectFault, reportDir, out); }
    if (*exportCmd) { return cmd_export(o, stage, out); }
    if (*mpsCmd) { return cmd_solve_mps(mpsPath, solPath, o.relGap); }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace leximax::cli
