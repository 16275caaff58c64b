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

#ifndef JBWCOND_SUITES_HPP_
#define JBWCOND_SUITES_HPP_

#include <string>
#include <vector>

#include "jbwcond/verify.hpp"

namespace jbwcond {

// Named verification suites behind `jbwcond verify <suite>`.  Each runner is
// deterministic in (seed, trials); `trials` scales the instance count.

inline std::vector<Report> run_suite_lemma21(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  for (int t = 0; t < trials; ++t) {
    const AlgebraKind kind = (t % 4 < 2) ? AlgebraKind::Atomic : AlgebraKind::Block;
    const Polarity pol = (t % 2 == 0) ? Polarity::Compatible : Polarity::Incompatible;
    out.push_back(verify_lemma_2_1(make_instance(root.fork(), kind, pol), 50));
  }
  return out;
}

inline std::vector<Report> run_suite_lemma22(std::uint64_t seed, int trials) {
  return {verify_lemma_2_2(seed, 6, std::max(2, trials / 2))};
}

inline std::vector<Report> run_suite_lemma31(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  for (int t = 0; t < std::max(1, trials / 5); ++t) {
    Rng rng(root.fork());
    const Index dims[] = {4, 6, 8};
    const Index n = dims[rng.integer(3)];
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(n, rng, 6);
    HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    // U from the W*-algebra generated by B (phases on the atoms); a unitary
    // merely commuting with B conjugates the pinching instead of fixing it.
    Operator u = random_unitary_in(Subalgebra(b), rng.fork());
    Report rep = lueders_properties(b, x, u, rng.fork());
    rep.id = "lemma3.1/seed=" + std::to_string(seed) + "/t=" + std::to_string(t);

    // The atomic partition realizes the measurement map exactly, and the
    // post-measurement state is a fixed point of its own measurement.
    rep.record("atomic_partition_equals_map",
               fro(measurement_sum(Partition::atomic(b), x).value.matrix() - M_of(x, b).matrix()),
               0.0);
    Matrix rho_raw = detail::traceless(random_hermitian_matrix(n, rng));
    State mu(HermitianElement::trusted(
        Matrix(Matrix::Identity(n, n) / double(n) + rho_raw / (4.0 * double(n) * opnorm(rho_raw)))));
    Rng chain_rng(rng.fork());
    const Partition p = refinement_chain(b, chain_rng).back();
    State once = post_measurement_state(mu, p);
    State twice = post_measurement_state(once, p);
    rep.record("repeated_measurement", fro(once.matrix() - twice.matrix()), 1e-12);
    // The tracial state is unchanged by every measurement.
    State tr_after = post_measurement_state(State::tracial(n), p);
    rep.record("tracial_state_invariant",
               fro(tr_after.matrix() - Matrix::Identity(n, n) / double(n)), 1e-12);
    out.push_back(std::move(rep));
  }
  return out;
}

inline std::vector<Report> run_suite_thm41(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  const Index dims[] = {4, 6, 8, 12, 16};
  for (int t = 0; t < trials; ++t) out.push_back(verify_thm_4_1(root.fork(), dims[t % 5]));
  return out;
}

inline std::vector<Report> run_suite_thm42(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  const Index dims[] = {4, 6, 8};
  for (int t = 0; t < std::max(1, trials / 5); ++t) {
    Rng rng(root.fork());
    const Index n = dims[rng.integer(3)];
    if (t % 5 == 4) {
      // Non-maximal base: only the global/measurement identification applies.
      AtomicAbelianSubalgebra b = detail::random_atomic_algebra(n, rng);
      out.push_back(verify_thm_4_2(b, rng.fork(), false));
    } else {
      AtomicAbelianSubalgebra b =
          generated_abelian(HermitianElement::trusted(random_hermitian_matrix(n, rng)));
      out.push_back(verify_thm_4_2(b, rng.fork(), true));
    }
  }
  return out;
}

inline std::vector<Report> run_suite_lemma51(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  const Index dims[] = {4, 6, 8};
  for (int t = 0; t < std::max(1, trials / 25); ++t) {
    Rng rng(root.fork());
    const Index n = dims[rng.integer(3)];
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(n, rng);
    out.push_back(verify_lemma_5_1(rng.fork(), n, b, 100, 20));
  }
  return out;
}

inline std::vector<Report> run_suite_traces(std::uint64_t seed, int trials) {
  std::vector<Report> out;
  Rng root(seed);
  for (Index n = 2; n <= 12; ++n)
    out.push_back(check_trace_identities(root.fork(), n, std::max(10, trials)));
  return out;
}

inline std::vector<Report> run_suite(const std::string& suite, std::uint64_t seed, int trials) {
  if (suite == "lemma2.1") return run_suite_lemma21(seed, trials);
  if (suite == "lemma2.2") return run_suite_lemma22(seed, trials);
  if (suite == "lemma3.1") return run_suite_lemma31(seed, trials);
  if (suite == "thm4.1") return run_suite_thm41(seed, trials);
  if (suite == "thm4.2") return run_suite_thm42(seed, trials);
  if (suite == "lemma5.1") return run_suite_lemma51(seed, trials);
  if (suite == "traces") return run_suite_traces(seed, trials);
  if (suite == "all") {
    std::vector<Report> out;
    for (const char* name : {"lemma2.1", "lemma2.2", "lemma3.1", "thm4.1", "thm4.2", "lemma5.1",
                             "traces"}) {
      std::vector<Report> part = run_suite(name, seed, trials);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw UnknownCase("unknown verification suite: " + suite);
}

}  // namespace jbwcond

#endif  // JBWCOND_SUITES_HPP_
