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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Thresholds are pinned here, not configurable.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "jbwcond/jbwcond.hpp"

using namespace jbwcond;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Five-way equivalence of the compatibility conditions on 200 instances.
void criterion_1() {
  const auto t0 = Clock::now();
  Rng root(1001);
  int bad = 0;
  double min_witness = 1e9;
  for (int t = 0; t < 200; ++t) {
    const AlgebraKind kind = (t % 4 < 2) ? AlgebraKind::Atomic : AlgebraKind::Block;
    const Polarity pol = (t % 2 == 0) ? Polarity::Compatible : Polarity::Incompatible;
    Instance inst = make_instance(root.fork(), kind, pol);
    Report rep = verify_lemma_2_1(inst, 50);
    if (!rep.passed) ++bad;
    if (pol == Polarity::Incompatible && inst.witness)
      min_witness = std::min(min_witness, inst.witness->violation);
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "200 instances, disagreements " << bad << ", min witness " << min_witness << ", "
    << secs << " s";
  report(1, "compatibility conditions agree across all five routes", bad == 0 &&
             min_witness >= 1e-6 && secs <= 20.0, d.str());
}

// 2. Block criterion against a 500-sample projection/unitary oracle.
void criterion_2() {
  Rng root(2002);
  int disagreements = 0;
  for (int t = 0; t < 200; ++t) {
    const Polarity pol = (t % 2 == 0) ? Polarity::Compatible : Polarity::Incompatible;
    Instance inst = make_instance(root.fork(), AlgebraKind::Block, pol);
    const bool exact = algebra_compatible(inst.state, inst.algebra, inst.element);
    const bool sampled =
        compatibility_oracle(inst.state, inst.algebra, inst.element, 500, root.fork());
    if (exact != sampled) ++disagreements;
  }
  report(2, "block compatibility criterion matches the randomized oracle", disagreements == 0,
         "200 instances, disagreements " + std::to_string(disagreements));
}

// 3. Objective conditional expectation equals the measurement map, uniquely.
void criterion_3() {
  Rng root(3003);
  const Index dims[] = {4, 6, 8, 12, 16};
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    Report rep = verify_thm_4_1(root.fork(), dims[t % 5]);
    if (!rep.passed) ++bad;
  }
  report(3, "objective expectation over the commutant equals the measurement map", bad == 0,
         "100 instances across n=4..16, failures " + std::to_string(bad));
}

// 4. Triple identity for maximal abelian bases.
void criterion_4() {
  Rng root(4004);
  const Index dims[] = {4, 6, 8};
  double worst = 0.0;
  for (int a = 0; a < 20; ++a) {
    Rng rng(root.fork());
    const Index n = dims[rng.integer(3)];
    AtomicAbelianSubalgebra b =
        generated_abelian(HermitianElement::trusted(random_hermitian_matrix(n, rng)));
    GlobalCEReport ce = global_ce(b, rng.fork());
    for (int k = 0; k < 20; ++k) {
      HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
      ObjectiveCondExpResult obj = objective_cond_exp(x, Subalgebra(commutant(b)));
      const Matrix pi_x = ce.map.apply(x).matrix();
      const double d1 = obj.value ? fro(obj.value->matrix() - pi_x) : 1.0;
      worst = std::max(worst, d1 + fro(pi_x - M_of(x, b).matrix()));
    }
  }
  std::ostringstream d;
  d << "20 algebras x 20 elements, worst combined residual " << worst;
  report(4, "objective, global, and measurement maps coincide (maximal abelian)", worst <= 1e-8,
         d.str());
}

// 5. Measurement-map property bundle with exact partition enumeration.
void criterion_5() {
  Rng root(5005);
  double worst = 0.0;
  bool all = true;
  for (int t = 0; t < 10; ++t) {
    Rng rng(root.fork());
    const Index n = 6 + static_cast<Index>(rng.integer(3));
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(n, rng, 6);
    HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    Operator u = random_unitary_in(Subalgebra(b), rng.fork());
    Report rep = lueders_properties(b, x, u, rng.fork());
    all &= rep.passed;
    for (const auto& [name, value] : rep.residuals) worst = std::max(worst, value);
  }
  std::ostringstream d;
  d << "10 algebras (k <= 6, full enumeration), worst residual " << worst;
  report(5, "norm bound, module identity, commutant membership, idempotence, unitary invariance",
         all && worst <= 1e-9, d.str());
}

// 6. Trace-form compatibility with everything <=> membership in the commutant.
void criterion_6() {
  Rng root(6006);
  const Index dims[] = {4, 6, 8};
  bool all = true;
  int total_disagreements = 0;
  for (int a = 0; a < 5; ++a) {
    Rng rng(root.fork());
    const Index n = dims[rng.integer(3)];
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(n, rng);
    Report rep = verify_lemma_5_1(rng.fork(), n, b, 100, 20);
    all &= rep.passed;
    total_disagreements += static_cast<int>(rep.residuals.at("membership_vs_compatibility_disagreements"));
  }
  report(6, "universal compatibility happens exactly on the commutant", all,
         "5 algebras x 100 states, disagreements " + std::to_string(total_disagreements));
}

// 7. Uniqueness <-> faithfulness, and the tensor no-go with separated witnesses.
void criterion_7() {
  Report rep = verify_lemma_2_2(7007, 6, 50);
  const double disagreements = rep.residuals.at("uniqueness_faithfulness_disagreements");
  const double shortfall = rep.residuals.at("tensor_witness_separation_floor");
  std::ostringstream d;
  d << "50 full-rank + 50 rank-deficient states, disagreements " << disagreements
    << ", tensor witness shortfall " << shortfall;
  report(7, "uniqueness tracks faithfulness; tensor element has no objective expectation",
         rep.passed && disagreements == 0 && shortfall == 0, d.str());
}

// 8. Interference and repeatability fixtures.
void criterion_8() {
  Report inter = demo("interference");
  Report rep = demo("repeatability");
  const double r1 = inter.residuals.at("mu_F");
  const double r2 = inter.residuals.at("mu_P_F");
  const double r3 = rep.residuals.at("repeatability_residual");
  std::ostringstream d;
  d << "mu(F) residual " << r1 << ", mu_P(F) residual " << r2 << ", repeat residual " << r3;
  report(8, "interference demo hits (1, 1/2); measurement is repeatable",
         r1 <= 1e-12 && r2 <= 1e-12 && r3 <= 1e-12, d.str());
}

// 9. Trace identities across dimensions.
void criterion_9() {
  Rng root(9009);
  double worst = 0.0;
  bool all = true;
  for (Index n = 2; n <= 12; ++n) {
    Report rep = check_trace_identities(root.fork(), n, 100);
    all &= rep.passed;
    for (const auto& [name, value] : rep.residuals) worst = std::max(worst, value);
  }
  std::ostringstream d;
  d << "100 triples per n in 2..12, worst residual " << worst;
  report(9, "trace identities", all && worst <= 1e-9, d.str());
}

// 10. CLI determinism and runtime budget.
struct CliRun {
  int exit_code = -1;
  std::string output;
  double seconds = 0.0;
};

CliRun run_cli(const std::string& args) {
  CliRun r;
  const std::string cmd = std::string(JBWCOND_CLI_PATH) + " " + args + " 2>&1";
  const auto t0 = Clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[8192];
  while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = seconds_since(t0);
  return r;
}

std::string strip_wall_time(const std::string& s) {
  std::istringstream in(s);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("wall_time") == std::string::npos) out << line << "\n";
  return out.str();
}

void criterion_10() {
  CliRun a = run_cli("verify all --seed 42 --trials 100");
  CliRun b = run_cli("verify all --seed 42 --trials 100");
  const bool identical = strip_wall_time(a.output) == strip_wall_time(b.output);
  std::ostringstream d;
  d << "exit " << a.exit_code << "/" << b.exit_code << ", " << a.seconds << " s / " << b.seconds
    << " s, byte-identical modulo wall time: " << (identical ? "yes" : "no");
  report(10, "verify all --seed 42 --trials 100 is green, fast, and deterministic",
         a.exit_code == 0 && b.exit_code == 0 && a.seconds <= 60.0 && b.seconds <= 60.0 &&
             identical,
         d.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s (%d/10)\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              10 - failures);
  return failures;
}
