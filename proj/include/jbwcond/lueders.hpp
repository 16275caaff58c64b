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

#ifndef JBWCOND_LUEDERS_HPP_
#define JBWCOND_LUEDERS_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jbwcond/condexp.hpp"

namespace jbwcond {

// ---------------------------------------------------------------------------
// Partitions of an atomic abelian subalgebra.  Cells are index sets over the
// atoms, so orthogonality and completeness are exact by construction; cell
// events are materialized on demand.
// ---------------------------------------------------------------------------
class Partition {
 public:
  Partition(AtomicAbelianSubalgebra base, std::vector<std::vector<int>> cells)
      : base_(std::move(base)), cells_(std::move(cells)) {
    std::vector<bool> seen(base_.atom_count(), false);
    for (auto& cell : cells_) {
      if (cell.empty()) throw InvariantViolation("empty partition cell");
      std::sort(cell.begin(), cell.end());
      for (int idx : cell) {
        if (idx < 0 || idx >= static_cast<int>(base_.atom_count()))
          throw InvariantViolation("cell references an unknown atom");
        if (seen[idx]) throw InvariantViolation("atom used by two cells");
        seen[idx] = true;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw InvariantViolation("cells do not cover all atoms");
    std::sort(cells_.begin(), cells_.end());
  }

  static Partition atomic(const AtomicAbelianSubalgebra& b) {
    std::vector<std::vector<int>> cells;
    for (int i = 0; i < static_cast<int>(b.atom_count()); ++i) cells.push_back({i});
    return Partition(b, std::move(cells));
  }
  static Partition coarsest(const AtomicAbelianSubalgebra& b) {
    std::vector<int> all(b.atom_count());
    std::iota(all.begin(), all.end(), 0);
    return Partition(b, {all});
  }

  const AtomicAbelianSubalgebra& base() const { return base_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  Event cell_event(std::size_t c) const {
    Matrix sum = Matrix::Zero(base_.ambient_dim(), base_.ambient_dim());
    int rank = 0;
    for (int idx : cells_[c]) {
      sum += base_.atoms()[idx].matrix();
      rank += base_.atoms()[idx].rank();
    }
    return Event::trusted(std::move(sum), rank);
  }

 private:
  AtomicAbelianSubalgebra base_;
  std::vector<std::vector<int>> cells_;
};

/// Whether p2 is finer than q: every cell of p2 sits inside some cell of q.
/// (Finer = subdivides; the atomic partition is the maximum of the order.)
inline bool refines(const Partition& p2, const Partition& q) {
  if (p2.base().atom_count() != q.base().atom_count() ||
      p2.base().ambient_dim() != q.base().ambient_dim())
    throw InvariantViolation("partitions over different bases");
  for (const auto& cell : p2.cells()) {
    bool inside = false;
    for (const auto& host : q.cells()) {
      if (std::includes(host.begin(), host.end(), cell.begin(), cell.end())) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

/// Bell numbers, saturating at the uint64 limit.
inline std::uint64_t bell_number(int k) {
  if (k > 25) return UINT64_MAX;  // Bell(26) overflows uint64
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= k; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

/// All set partitions of the atoms, enumerated via restricted growth strings.
/// Refuses (TooManyPartitions) when Bell(k) exceeds the cap; callers should
/// fall back to refinement chains then.
inline std::vector<Partition> partitions_of(const AtomicAbelianSubalgebra& b,
                                            std::uint64_t cap = 1000000) {
  const int k = static_cast<int>(b.atom_count());
  const std::uint64_t bell = bell_number(k);
  if (bell > cap)
    throw TooManyPartitions("partition count " + std::to_string(bell) + " exceeds cap " +
                                std::to_string(cap),
                            bell);
  std::vector<Partition> out;
  out.reserve(bell);
  std::vector<int> rgs(k, 0);
  while (true) {
    const int groups = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<std::vector<int>> cells(groups);
    for (int i = 0; i < k; ++i) cells[rgs[i]].push_back(i);
    out.emplace_back(b, std::move(cells));
    // next restricted growth string
    int i = k - 1;
    for (; i > 0; --i) {
      const int maxprefix = 1 + *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[i] < maxprefix) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
      rgs[i] = 0;
    }
    if (i == 0) break;
  }
  return out;
}

/// Seeded chain of partitions from the coarsest to the atomic one, each step
/// splitting one cell; used where full enumeration is capped.
inline std::vector<Partition> refinement_chain(const AtomicAbelianSubalgebra& b, Rng& rng) {
  std::vector<Partition> chain{Partition::coarsest(b)};
  std::vector<std::vector<int>> cells = chain.back().cells();
  while (cells.size() < b.atom_count()) {
    std::vector<std::size_t> splittable;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1) splittable.push_back(c);
    const std::size_t pick = splittable[rng.integer(splittable.size())];
    std::vector<int> cell = cells[pick];
    const std::size_t cut = 1 + rng.integer(cell.size() - 1);
    std::vector<int> left(cell.begin(), cell.begin() + cut);
    std::vector<int> right(cell.begin() + cut, cell.end());
    cells.erase(cells.begin() + pick);
    cells.push_back(std::move(left));
    cells.push_back(std::move(right));
    chain.emplace_back(b, cells);
  }
  return chain;
}

// ---------------------------------------------------------------------------
// The measurement sum and its limit.
// ---------------------------------------------------------------------------
struct MeasurementValue {
  HermitianElement value;
  Partition partition;
};

/// sum over cells of {E, X, E}.  Pinching contracts the operator norm, which
/// is enforced as the invariant of the result.
inline MeasurementValue measurement_sum(const Partition& p, const HermitianElement& x) {
  if (p.base().ambient_dim() != x.dim()) throw DimensionMismatch("dimension mismatch");
  Matrix sum = Matrix::Zero(x.dim(), x.dim());
  for (std::size_t c = 0; c < p.size(); ++c) {
    const Matrix e = p.cell_event(c).matrix();
    sum += e * x.matrix() * e;
  }
  HermitianElement value = HermitianElement::trusted(hermitize(sum));
  if (value.norm() > x.norm() * (1.0 + 1e-12) + 1e-12)
    throw InvariantViolation("measurement sum exceeded the norm of its argument");
  return MeasurementValue{std::move(value), p};
}

/// M(X|B): the limit of the measurement sums over ever finer partitions.  In
/// finite dimension the atomic partition is the maximum of the directed set,
/// so the limit is the pinching by the atoms; the result lies in B'.
inline HermitianElement M_of(const HermitianElement& x, const AtomicAbelianSubalgebra& b) {
  return measurement_sum(Partition::atomic(b), x).value;
}

/// The state after measuring partition P in state mu: rho_P = sum E rho E.
/// Its evaluations realize the conditional-probability sum with the
/// zero-probability convention mu(F|E) mu(E) := 0.
inline State post_measurement_state(const State& mu, const Partition& p) {
  if (p.base().ambient_dim() != mu.dim()) throw DimensionMismatch("dimension mismatch");
  Matrix rho = Matrix::Zero(mu.dim(), mu.dim());
  for (std::size_t c = 0; c < p.size(); ++c) {
    const Matrix e = p.cell_event(c).matrix();
    rho += e * mu.matrix() * e;
  }
  return State(HermitianElement::trusted(hermitize(rho)));
}

/// Conditional-probability form of mu_P(F), with the zero rule for null cells.
inline double measured_probability(const State& mu, const Partition& p, const Event& f) {
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const Event e = p.cell_event(c);
    const double pe = evaluate(mu, e);
    if (pe <= tol::cond()) continue;  // mu(F|E) mu(E) := 0
    total += cond_prob(mu, f, e) * pe;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Property bundle for the measurement map: norm bound over partitions,
// commutant membership, module identity, idempotence, unitary invariance.
// ---------------------------------------------------------------------------
inline Report lueders_properties(const AtomicAbelianSubalgebra& b, const HermitianElement& x,
                                 const Operator& u, std::uint64_t seed,
                                 std::uint64_t partition_cap = 1000000) {
  const Index n = b.ambient_dim();
  if (x.dim() != n || u.rows() != n || u.cols() != n)
    throw DimensionMismatch("dimension mismatch");
  if ((u * u.adjoint() - Matrix::Identity(n, n)).norm() > 1e-10 * n)
    throw NonCommutingUnitary("operator is not unitary");
  for (const Event& e : b.atoms())
    if (commutator(u, e.matrix()).norm() > 1e-9 * std::max(1.0, fro(u)))
      throw NonCommutingUnitary("unitary does not commute with the subalgebra");

  Rng rng(seed);
  Report rep;
  rep.id = "measurement-properties";
  const Subalgebra comm = commutant(b);
  const HermitianElement mx = M_of(x, b);

  // Norm bound over every partition (or a 50-chain sample past the cap).
  double r_norm = 0.0;
  const double nx = x.norm();
  auto check_partition = [&](const Partition& p) {
    const double v = measurement_sum(p, x).value.norm();
    r_norm = std::max(r_norm, std::max(0.0, v - nx) / std::max(1.0, nx));
  };
  if (bell_number(static_cast<int>(b.atom_count())) <= partition_cap) {
    for (const Partition& p : partitions_of(b, partition_cap)) check_partition(p);
    rep.note("norm bound checked over the full partition lattice");
  } else {
    for (int c = 0; c < 50; ++c) {
      Rng chain_rng(rng.fork());
      for (const Partition& p : refinement_chain(b, chain_rng)) check_partition(p);
    }
    rep.note("norm bound sampled over 50 refinement chains (partition count above cap)");
  }
  rep.record("norm_bound", r_norm, 1e-9);

  // Commutant membership of M(X|B).
  rep.record("commutant_membership",
             (project_onto(comm, mx).matrix() - mx.matrix()).norm() / std::max(1.0, mx.frobenius()),
             1e-9);

  // Module identity M(Y o X | B) = Y o M(X|B) for Y in B'.
  double r_mod = 0.0;
  for (int t = 0; t < 10; ++t) {
    HermitianElement y = random_member_of(comm, rng);
    const Matrix lhs = M_of(jordan_product(y, x), b).matrix();
    const Matrix rhs = jordan_product(y, mx).matrix();
    r_mod = std::max(r_mod, fro(lhs - rhs) /
                                std::max(1.0, x.frobenius() * std::max(1.0, y.frobenius())));
  }
  rep.record("module_identity", r_mod, 1e-9);

  // Idempotence.
  rep.record("idempotent", (M_of(mx, b).matrix() - mx.matrix()).norm() / std::max(1.0, mx.frobenius()),
             1e-9);

  // Unitary invariance M(U X U^-1 | B) = M(X|B) for U commuting with B.
  HermitianElement conj = HermitianElement::trusted(hermitize(u * x.matrix() * u.adjoint()));
  rep.record("unitary_invariance",
             (M_of(conj, b).matrix() - mx.matrix()).norm() / std::max(1.0, x.frobenius()), 1e-9);
  return rep;
}

}  // namespace jbwcond

#endif  // JBWCOND_LUEDERS_HPP_
