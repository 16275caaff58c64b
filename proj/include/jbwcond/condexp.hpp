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

#ifndef JBWCOND_CONDEXP_HPP_
#define JBWCOND_CONDEXP_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jbwcond/state.hpp"

namespace jbwcond {

// ---------------------------------------------------------------------------
// Witness search: given an incompatible (mu, M, X), find an event of M whose
// interference term mu({E, X, E'}) is visibly nonzero.  Candidates are
// deterministic (atom/block sub-sums, eigenvector mixtures inside blocks)
// plus a few seeded random events.
// ---------------------------------------------------------------------------
namespace detail {

inline void collect_block_mixture_events(const BlockSubalgebra& bl, const Matrix& h,
                                         std::vector<Event>* out) {
  // For each block, mix the extreme eigenvectors of h's traceless compression;
  // such rank-one projections expose a non-scalar compression.
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    const Index r = bl.blocks()[i].rank();
    if (r < 2) continue;
    Matrix comp = traceless(bl.compress(h, i, i));
    if (comp.norm() < 1e-14) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(comp);
    Eigen::VectorXcd v =
        (es.eigenvectors().col(r - 1) + es.eigenvectors().col(0)) / std::sqrt(2.0);
    Eigen::VectorXcd w = bl.range(i) * v;
    out->push_back(Event::trusted(hermitize(w * w.adjoint()), 1));
  }
}

inline std::vector<Event> witness_candidates(const State& mu, const Subalgebra& m,
                                             const HermitianElement& x, int random_samples,
                                             std::uint64_t seed) {
  std::vector<Event> cands;
  const std::vector<Event>* parts = nullptr;
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) parts = &ab->atoms();
  else parts = &std::get<BlockSubalgebra>(m).blocks();
  const std::size_t k = parts->size();
  for (std::size_t i = 0; i < k; ++i) cands.push_back((*parts)[i]);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      cands.push_back(Event::trusted((*parts)[i].matrix() + (*parts)[j].matrix(),
                                     (*parts)[i].rank() + (*parts)[j].rank()));
  if (const auto* bl = std::get_if<BlockSubalgebra>(&m)) {
    collect_block_mixture_events(*bl, x.matrix(), &cands);
    collect_block_mixture_events(*bl, mu.matrix(), &cands);
  }
  Rng rng(seed);
  for (int s = 0; s < random_samples; ++s) cands.push_back(random_event_in(m, rng));
  return cands;
}

}  // namespace detail

struct EventWitness {
  Event event;
  double violation = 0.0;  // |mu({E, X, E'})|
};

/// Best interference witness among deterministic and sampled events of M.
inline std::optional<EventWitness> find_violating_event(const State& mu, const Subalgebra& m,
                                                        const HermitianElement& x,
                                                        int random_samples = 32,
                                                        std::uint64_t seed = 0x5eedu) {
  std::optional<EventWitness> best;
  for (const Event& e : detail::witness_candidates(mu, m, x, random_samples, seed)) {
    if (e.is_zero() || e.rank() == e.dim()) continue;
    const double v = std::abs(interference_term(mu, e, x));
    if (!best || v > best->violation) best = EventWitness{e, v};
  }
  return best;
}

/// No conditional expectation exists; carries the strongest witness found.
struct IncompatibleError : Error {
  IncompatibleError(const std::string& what, std::optional<EventWitness> w)
      : Error(what), witness(std::move(w)) {}
  std::optional<EventWitness> witness;
};

// ---------------------------------------------------------------------------
// State-dependent conditional expectation mu(X|M).
//
// The canonical version: per-atom ratios (zero-filled on atoms of
// probability ~0) in the abelian case, the pinching in the block case.  The
// version space is the kernel of Z -> Pi_M(rho Z + Z rho) over a basis of M;
// it is trivial exactly when mu is faithful on M.
// ---------------------------------------------------------------------------
struct CondExpResult {
  bool exists = false;
  HermitianElement canonical = HermitianElement::zero(1);
  std::vector<HermitianElement> version_space;
  bool unique = false;
};

namespace detail {

inline std::vector<HermitianElement> version_space_of(const State& mu, const Subalgebra& m) {
  const std::vector<HermitianElement> basis = hermitian_basis(m);
  const Index d = static_cast<Index>(basis.size());
  RealMatrix map(d, d);
  for (Index c = 0; c < d; ++c) {
    Matrix pushed = mu.matrix() * basis[c].matrix() + basis[c].matrix() * mu.matrix();
    HermitianElement proj = project_onto(m, HermitianElement::trusted(hermitize(pushed)));
    for (Index r = 0; r < d; ++r)
      map(r, c) = trace_inner(basis[r].matrix(), proj.matrix());
  }
  RealMatrix kern = null_space(map, 1e-8);
  std::vector<HermitianElement> out;
  for (Index c = 0; c < kern.cols(); ++c) {
    Matrix z = Matrix::Zero(mu.dim(), mu.dim());
    for (Index r = 0; r < d; ++r) z += kern(r, c) * basis[r].matrix();
    out.push_back(HermitianElement::trusted(z));
  }
  return out;
}

inline HermitianElement canonical_cond_exp(const State& mu, const HermitianElement& x,
                                           const Subalgebra& m) {
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    Matrix y = Matrix::Zero(x.dim(), x.dim());
    for (const Event& e : ab->atoms()) {
      const double pe = evaluate(mu, e);
      if (pe > tol::cond()) {
        const double num = evaluate(mu, triple_product(e.element(), x, e.element()));
        y += (num / pe) * e.matrix();
      }
    }
    return HermitianElement::trusted(y);
  }
  return project_onto(m, x);  // the pinching sum_i E_i X E_i
}

}  // namespace detail

/// Non-throwing variant; `exists` mirrors the compatibility relation.
inline CondExpResult try_cond_exp(const State& mu, const HermitianElement& x,
                                  const Subalgebra& m) {
  CondExpResult res;
  res.exists = algebra_compatible(mu, m, x);
  if (!res.exists) return res;
  res.canonical = detail::canonical_cond_exp(mu, x, m);
  res.version_space = detail::version_space_of(mu, m);
  res.unique = res.version_space.empty();
  return res;
}

inline CondExpResult cond_exp(const State& mu, const HermitianElement& x, const Subalgebra& m) {
  CondExpResult res = try_cond_exp(mu, x, m);
  if (!res.exists)
    throw IncompatibleError("no conditional expectation: the state is incompatible with (M, X)",
                            find_violating_event(mu, m, x));
  return res;
}

// ---------------------------------------------------------------------------
// Objective conditional expectation E(X|M): one member of M serving every
// compatible state at once.  Solved as a linear least-squares system over a
// basis of M, with one equation per (slice basis element, spanning event).
// ---------------------------------------------------------------------------
struct ObjectiveCondExpResult {
  enum class Status { NONEXISTENT, UNIQUE, NONUNIQUE };
  Status status = Status::NONEXISTENT;
  std::optional<HermitianElement> value;
  std::vector<HermitianElement> freedom;  // kernel directions when NONUNIQUE
  // Two compatible states whose individual conditional expectations differ
  // (set when NONEXISTENT), with their canonical versions.
  std::optional<std::pair<State, State>> witness_states;
  std::optional<std::pair<HermitianElement, HermitianElement>> witness_canonicals;
  double residual = 0.0;
};

inline ObjectiveCondExpResult objective_cond_exp(const HermitianElement& x, const Subalgebra& m) {
  const Index n = x.dim();
  if (ambient_dim(m) != n) throw DimensionMismatch("dimension mismatch");
  const CompatibleSlice slice = compatible_slice(m, x);
  const std::vector<Event> span = spanning_events(m);
  const std::vector<HermitianElement> basis = hermitian_basis(m);
  const Index cols = static_cast<Index>(basis.size());
  const Index rows = slice.dim() * static_cast<Index>(span.size());

  RealMatrix a(rows, cols);
  RealVector rhs(rows);
  Index r = 0;
  for (const Event& e : span) {
    const Matrix exe = triple_product(e.element(), x, e.element()).matrix();
    std::vector<Matrix> eob;
    eob.reserve(basis.size());
    for (const HermitianElement& b : basis)
      eob.push_back(jordan_product(e.element(), b).matrix());
    for (const HermitianElement& rho : slice.basis) {
      for (Index c = 0; c < cols; ++c) a(r, c) = trace_inner(rho.matrix(), eob[c]);
      rhs[r] = trace_inner(rho.matrix(), exe);
      ++r;
    }
  }

  Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  RealVector y = svd.solve(rhs);
  ObjectiveCondExpResult res;
  res.residual = (a * y - rhs).lpNorm<Eigen::Infinity>();
  const double feasible_cut = tol::lsq() * std::max(1.0, x.frobenius());

  if (res.residual <= feasible_cut) {
    Matrix val = Matrix::Zero(n, n);
    for (Index c = 0; c < cols; ++c) val += y[c] * basis[c].matrix();
    res.value = HermitianElement::trusted(val);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    for (Index c = 0; c < cols; ++c) {
      const double s = c < sv.size() ? sv[c] : 0.0;
      if (s <= cut) {
        Matrix dir = Matrix::Zero(n, n);
        for (Index k = 0; k < cols; ++k) dir += svd.matrixV()(k, c) * basis[k].matrix();
        res.freedom.push_back(HermitianElement::trusted(dir));
      }
    }
    res.status = res.freedom.empty() ? ObjectiveCondExpResult::Status::UNIQUE
                                     : ObjectiveCondExpResult::Status::NONUNIQUE;
    return res;
  }

  // Infeasible: exhibit two compatible states with different conditional
  // expectations.  The tracial state versus its best slice perturbation.
  res.status = ObjectiveCondExpResult::Status::NONEXISTENT;
  const State mu1 = State::tracial(n);
  const HermitianElement y1 = detail::canonical_cond_exp(mu1, x, m);
  double best = -1.0;
  std::optional<State> mu2;
  std::optional<HermitianElement> y2;
  for (const HermitianElement& b : slice.basis) {
    Matrix dir = detail::traceless(b.matrix());
    const double dn = opnorm(dir);
    if (dn < 1e-14) continue;
    const double amp = 0.9 / (double(n) * dn);
    for (double sign : {1.0, -1.0}) {
      Matrix rho = Matrix::Identity(n, n) / double(n) + sign * amp * dir;
      State cand(HermitianElement::trusted(rho));
      HermitianElement yc = detail::canonical_cond_exp(cand, x, m);
      const double diff = opnorm(yc.matrix() - y1.matrix());
      if (diff > best) {
        best = diff;
        mu2 = cand;
        y2 = yc;
      }
    }
  }
  if (mu2) {
    res.witness_states = std::make_pair(mu1, *mu2);
    res.witness_canonicals = std::make_pair(y1, *y2);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Global conditional expectation: the pinching by the atoms of B, packaged
// as a map onto B' and verified as positive, unital, linear, idempotent, and
// a module map over B'.
// ---------------------------------------------------------------------------
class PinchingMap {
 public:
  explicit PinchingMap(AtomicAbelianSubalgebra base) : base_(std::move(base)) {}

  const AtomicAbelianSubalgebra& base() const { return base_; }

  Matrix apply(const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const Event& e : base_.atoms()) out += e.matrix() * x * e.matrix();
    return out;
  }
  HermitianElement apply(const HermitianElement& x) const {
    return HermitianElement::trusted(hermitize(apply(x.matrix())));
  }

 private:
  AtomicAbelianSubalgebra base_;
};

struct GlobalCEReport {
  PinchingMap map;
  Report checks;
};

inline GlobalCEReport global_ce(const AtomicAbelianSubalgebra& b, std::uint64_t seed = 0xce11u) {
  PinchingMap pi(b);
  const Index n = b.ambient_dim();
  const Subalgebra comm = commutant(b);
  Rng rng(seed);
  Report rep;
  rep.id = "global-ce";

  double r_lin = 0, r_pos = 0, r_fix = 0, r_mod = 0, r_idem = 0;
  for (int t = 0; t < 20; ++t) {
    Matrix x = random_hermitian_matrix(n, rng);
    Matrix y = random_hermitian_matrix(n, rng);
    const double al = rng.normal(), be = rng.normal();
    const double scale = std::max(1.0, fro(x) + fro(y));
    r_lin = std::max(r_lin,
                     fro(pi.apply(Matrix(al * x + be * y)) - al * pi.apply(x) - be * pi.apply(y)) /
                         scale);
    Matrix psd = x * x;
    Eigen::SelfAdjointEigenSolver<Matrix> es(pi.apply(psd), Eigen::EigenvaluesOnly);
    r_pos = std::max(r_pos, std::max(0.0, -es.eigenvalues()[0]) / std::max(1.0, fro(psd)));
    Matrix fixed = project_onto(comm, HermitianElement::trusted(x)).matrix();
    r_fix = std::max(r_fix, fro(pi.apply(fixed) - fixed) / std::max(1.0, fro(fixed)));
    HermitianElement yc = random_member_of(comm, rng);
    Matrix lhs = pi.apply(jordan_product(yc, HermitianElement::trusted(x)).matrix());
    Matrix rhs = jordan_product(yc, HermitianElement::trusted(pi.apply(x))).matrix();
    r_mod = std::max(r_mod, fro(lhs - rhs) / std::max(1.0, fro(x) * std::max(1.0, yc.frobenius())));
    r_idem = std::max(r_idem, fro(pi.apply(pi.apply(x)) - pi.apply(x)) / std::max(1.0, fro(x)));
  }
  rep.record("unital", fro(pi.apply(Matrix(Matrix::Identity(n, n))) - Matrix::Identity(n, n)),
             1e-12 * n);
  rep.record("linear", r_lin, 1e-9);
  rep.record("positive", r_pos, 1e-9);
  rep.record("fixes_commutant", r_fix, 1e-9);
  rep.record("module_property", r_mod, 1e-9);
  rep.record("idempotent", r_idem, 1e-10);
  return GlobalCEReport{std::move(pi), std::move(rep)};
}

}  // namespace jbwcond

#endif  // JBWCOND_CONDEXP_HPP_
