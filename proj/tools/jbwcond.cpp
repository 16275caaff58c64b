// Copyright 2026 The jbwcond Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// jbwcond: conditional expectations and measurement maps over Hermitian
// matrix algebras.  Subcommands: inspect | compute | verify | demo.
//
// Exit codes: 0 pass, 1 verification failure, 2 schema error / unknown name,
// 3 numeric invariant violation, 4 mathematical nonexistence result.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "jbwcond/jbwcond.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitNonexistent = 4;

struct Options {
  std::uint64_t seed = 42;
  int trials = 100;
  double tolerance_scale = 1.0;
  std::string out;
  std::string format = "json";
};

json base_report(const Options& opt, const std::string& command) {
  json j;
  j["schema_version"] = 1;
  j["tool"] = "jbwcond";
  j["tool_version"] = jbwcond::kVersion;
  j["generator_version"] = jbwcond::kGeneratorVersion;
  j["command"] = command;
  j["seed"] = opt.seed;
  return j;
}

void emit(const Options& opt, json j, double wall_ms,
          const std::vector<std::string>& text_lines) {
  j["wall_time_ms"] = wall_ms;
  const std::string payload = j.dump(2);
  if (opt.format == "text") {
    for (const std::string& line : text_lines) std::cout << line << "\n";
  } else {
    std::cout << payload << "\n";
  }
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    f << payload << "\n";
  }
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw jbwcond::SchemaError("cannot open file: " + path, "");
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw jbwcond::SchemaError(std::string("invalid JSON: ") + e.what(), "");
  }
  return j;
}

int cmd_inspect(const Options& opt, const std::string& path) {
  const auto t0 = std::chrono::steady_clock::now();
  jbwcond::ProblemFile pf = jbwcond::parse_problem(load_json_file(path));
  std::vector<std::string> lines;
  json j = base_report(opt, "inspect");
  j["file"] = path;
  j["dimension"] = pf.dimension;
  lines.push_back("dimension: " + std::to_string(pf.dimension));

  json algebras = json::object();
  for (const auto& [name, list] : pf.atoms) {
    jbwcond::AtomicAbelianSubalgebra b = pf.algebra(name);
    jbwcond::BlockSubalgebra comm = jbwcond::commutant(b);
    json entry;
    std::string ranks;
    for (const jbwcond::Event& a : b.atoms()) {
      entry["atom_ranks"].push_back(a.rank());
      ranks += (ranks.empty() ? "" : ",") + std::to_string(a.rank());
    }
    entry["commutant_block_ranks"] = entry["atom_ranks"];
    entry["commutant_hermitian_dim"] = comm.hermitian_dim();
    entry["maximal_abelian"] = jbwcond::is_abelian(comm);
    algebras[name] = entry;
    lines.push_back("algebra " + name + ": atoms [" + ranks + "], commutant hermitian dim " +
                    std::to_string(comm.hermitian_dim()) +
                    (jbwcond::is_abelian(comm) ? " (maximal abelian)" : ""));
  }
  j["algebras"] = algebras;

  json states = json::object();
  for (const auto& [name, m] : pf.states) {
    jbwcond::State s = pf.state(name);
    Eigen::SelfAdjointEigenSolver<jbwcond::Matrix> es(s.matrix(), Eigen::EigenvaluesOnly);
    int rank = 0;
    for (jbwcond::Index i = 0; i < pf.dimension; ++i)
      if (es.eigenvalues()[i] > 1e-12) ++rank;
    states[name]["rank"] = rank;
    lines.push_back("state " + name + ": rank " + std::to_string(rank));
  }
  j["states"] = states;

  json events = json::object();
  for (const auto& [name, m] : pf.events) {
    events[name]["rank"] = pf.event(name).rank();
    lines.push_back("event " + name + ": rank " + std::to_string(pf.event(name).rank()));
  }
  j["events"] = events;
  json elements = json::array();
  for (const auto& [name, m] : pf.elements) elements.push_back(name);
  j["elements"] = elements;
  j["tasks"] = pf.tasks.size();
  j["passed"] = true;

  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(opt, j, ms, lines);
  return kExitPass;
}

int cmd_compute(const Options& opt, const std::string& path, const std::string& only_task) {
  const auto t0 = std::chrono::steady_clock::now();
  jbwcond::ProblemFile pf = jbwcond::parse_problem(load_json_file(path));
  json j = base_report(opt, "compute");
  j["file"] = path;
  json reports = json::array();
  std::vector<std::string> lines;
  bool any_nonexistent = false;
  bool all_passed = true;
  for (const jbwcond::TaskSpec& task : pf.tasks) {
    if (!only_task.empty()) {
      const std::string name = task.args.value("name", task.op);
      if (name != only_task && task.op != only_task) continue;
    }
    jbwcond::TaskOutcome outcome = jbwcond::run_task(pf, task);
    any_nonexistent |= outcome.nonexistent;
    all_passed &= outcome.report.passed;
    reports.push_back(outcome.report.to_json());
    lines.push_back(outcome.report.id + ": " +
                    (outcome.nonexistent ? "nonexistent" : outcome.report.passed ? "ok" : "failed"));
  }
  j["reports"] = reports;
  j["passed"] = all_passed && !any_nonexistent;
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(opt, j, ms, lines);
  if (any_nonexistent) return kExitNonexistent;
  return all_passed ? kExitPass : kExitVerifyFailed;
}

int cmd_verify(const Options& opt, const std::string& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<jbwcond::Report> reports = jbwcond::run_suite(suite, opt.seed, opt.trials);
  json j = base_report(opt, "verify");
  j["suite"] = suite;
  j["trials"] = opt.trials;
  json arr = json::array();
  bool all = true;
  std::vector<std::string> lines;
  for (const jbwcond::Report& r : reports) {
    arr.push_back(r.to_json());
    all &= r.passed;
    lines.push_back(std::string(r.passed ? "pass " : "FAIL ") + r.id);
  }
  j["reports"] = arr;
  j["passed"] = all;
  lines.push_back(std::string("overall: ") + (all ? "pass" : "FAIL"));
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(opt, j, ms, lines);
  return all ? kExitPass : kExitVerifyFailed;
}

int cmd_demo(const Options& opt, const std::string& case_id) {
  const auto t0 = std::chrono::steady_clock::now();
  jbwcond::Report rep = jbwcond::demo(case_id);
  json j = base_report(opt, "demo");
  j["case"] = case_id;
  j["reports"] = json::array({rep.to_json()});
  j["passed"] = rep.passed;
  std::vector<std::string> lines{std::string(rep.passed ? "pass " : "FAIL ") + rep.id};
  for (const std::string& n : rep.notes) lines.push_back("  " + n);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  emit(opt, j, ms, lines);
  return rep.passed ? kExitPass : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (const char* env = std::getenv("JBWCOND_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

  CLI::App app{"numerical conditional expectations and measurement maps on matrix algebras"};
  app.require_subcommand(1);
  app.add_option("--seed", opt.seed, "random seed (default: JBWCOND_SEED or 42)");
  app.add_option("--trials", opt.trials, "instance count for verification suites");
  app.add_option("--tolerance-scale", opt.tolerance_scale, "multiply all tolerances");
  app.add_option("--out", opt.out, "also write the JSON report to this file");
  app.add_option("--format", opt.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  app.fallthrough();

  std::string file, task, suite, case_id;
  CLI::App* inspect = app.add_subcommand("inspect", "validate a problem file and list its contents");
  inspect->add_option("file", file)->required();
  CLI::App* compute = app.add_subcommand("compute", "run the tasks of a problem file");
  compute->add_option("file", file)->required();
  compute->add_option("--task", task, "run only the task with this name or op");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "lemma2.1|lemma2.2|lemma3.1|thm4.1|thm4.2|lemma5.1|traces|all")
      ->required();
  CLI::App* demo = app.add_subcommand("demo", "run a scripted demonstration");
  demo->add_option("case", case_id, "interference|repeatability|tensor-nogo|p-given-y")->required();

  CLI11_PARSE(app, argc, argv);
  jbwcond::tol::scale = opt.tolerance_scale;

  try {
    if (inspect->parsed()) return cmd_inspect(opt, file);
    if (compute->parsed()) return cmd_compute(opt, file, task);
    if (verify->parsed()) return cmd_verify(opt, suite);
    if (demo->parsed()) return cmd_demo(opt, case_id);
  } catch (const jbwcond::SchemaError& e) {
    std::cerr << "schema error" << (e.pointer.empty() ? "" : " at " + e.pointer) << ": " << e.what()
              << "\n";
    return kExitSchema;
  } catch (const jbwcond::UnknownCase& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const jbwcond::InvariantViolation& e) {
    std::cerr << "numeric invariant violation"
              << (e.offender.empty() ? "" : " in '" + e.offender + "'") << ": " << e.what() << "\n";
    return kExitInvariant;
  } catch (const jbwcond::IncompatibleError& e) {
    std::cerr << "nonexistence: " << e.what() << "\n";
    return kExitNonexistent;
  } catch (const jbwcond::ConditioningOnNull& e) {
    std::cerr << "nonexistence: " << e.what() << "\n";
    return kExitNonexistent;
  } catch (const jbwcond::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitSchema;
}
