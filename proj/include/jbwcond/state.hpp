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

#ifndef JBWCOND_STATE_HPP_
#define JBWCOND_STATE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jbwcond/algebra.hpp"
#include "jbwcond/report.hpp"

namespace jbwcond {

// ---------------------------------------------------------------------------
// State: a normal state mu(X) = tr(rho X) carried by its density matrix.
//
// Eigenvalues in [-tol::psd, 0) are clamped to 0 on construction (rounding
// from serialization); anything more negative is rejected.  The trace must be
// 1 within tol::trace; after clamping the matrix is renormalized exactly.
// ---------------------------------------------------------------------------
class State {
 public:
  explicit State(const HermitianElement& rho, const std::string& name = {}) : rho_(rho) {
    const Matrix& m = rho_.matrix();
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol::trace() * 100)
      throw InvariantViolation("density matrix trace differs from 1", name);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const RealVector& ev = es.eigenvalues();
    if (ev[0] < -tol::psd())
      throw InvariantViolation("density matrix has a negative eigenvalue", name);
    if (ev[0] < 0) {
      RealVector clamped = ev.cwiseMax(0.0);
      Matrix fixed = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
      rho_ = HermitianElement::trusted(hermitize(fixed) / clamped.sum());
    } else if (tr != 1.0) {
      rho_ = HermitianElement::trusted(m / tr);
    }
  }
  explicit State(const Matrix& raw, const std::string& name = {})
      : State(HermitianElement(raw, name), name) {}

  /// The maximally mixed state 1/n; compatible with every (M, X).
  static State tracial(Index n) {
    return State(HermitianElement::trusted(Matrix::Identity(n, n) / double(n)));
  }

  const HermitianElement& density() const { return rho_; }
  const Matrix& matrix() const { return rho_.matrix(); }
  Index dim() const { return rho_.dim(); }

 private:
  HermitianElement rho_;
};

/// mu(X) = tr(rho X).  The imaginary residue (roundoff only) is discarded
/// after a sanity check.
inline double evaluate(const State& mu, const HermitianElement& x) {
  if (mu.dim() != x.dim()) throw DimensionMismatch("state and element dimensions differ");
  const Complex t = trace_of_product(mu.matrix(), x.matrix());
  if (std::abs(t.imag()) > 1e-12 * std::max(1.0, std::abs(t.real()) + x.frobenius()))
    throw InvariantViolation("trace pairing has a non-negligible imaginary part");
  return t.real();
}

inline double evaluate(const State& mu, const Event& e) { return evaluate(mu, e.element()); }

/// Conditional probability mu(F|E) = mu({E,F,E}) / mu(E), clamped to [0,1].
/// Conditioning on an event with mu(E) <= tol::cond raises ConditioningOnNull;
/// the zero-probability convention lives in the measurement map, not here.
inline double cond_prob(const State& mu, const Event& f, const Event& e) {
  const double pe = evaluate(mu, e);
  if (pe <= tol::cond()) throw ConditioningOnNull("conditioning event has probability ~0");
  const double raw = evaluate(mu, triple_product(e.element(), f.element(), e.element())) / pe;
  if (raw < -tol::obj() || raw > 1.0 + tol::obj())
    throw InvariantViolation("conditional probability escaped [0,1] beyond tolerance");
  return std::clamp(raw, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Objective (state-independent) conditional probability: exists when
// {E,F,E} = lambda E, e.g. whenever E is a minimal event.
// ---------------------------------------------------------------------------
struct ObjectiveProbabilityResult {
  bool exists = false;
  double lambda = 0.0;
};

inline ObjectiveProbabilityResult objective_prob(const Event& f, const Event& e) {
  if (e.is_zero()) throw InvariantViolation("conditioning event is zero");
  const Matrix efe = e.matrix() * f.matrix() * e.matrix();
  const double lambda = efe.trace().real() / e.rank();
  ObjectiveProbabilityResult r;
  r.exists = (efe - lambda * e.matrix()).norm() <= tol::obj() * std::max(1.0, fro(efe));
  if (r.exists) r.lambda = std::clamp(lambda, 0.0, 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// The compatibility relation.
//
// E -> X under mu means mu({E,X,E}) = mu(E o X); B -> X means that for every
// event of B.  For an atomic abelian algebra this reduces to finitely many
// exact conditions: the per-atom equality plus vanishing of the mixed terms
// mu({E_i, X, E_j}).  For a block algebra the exact test is the stronger
// unitary-invariance criterion (constancy of tr(rho U X U*) over block
// unitaries): per block, the traceless parts of rho and X cannot both be
// nonzero, and per block pair the cross compressions cannot both be nonzero.
// The block criterion is validated against a randomized projection/unitary
// oracle in the verification suite before anything relies on it.
// ---------------------------------------------------------------------------
inline bool event_compatible(const State& mu, const Event& e, const HermitianElement& x) {
  if (mu.dim() != x.dim() || e.dim() != x.dim()) throw DimensionMismatch("dimension mismatch");
  const double lhs = evaluate(mu, triple_product(e.element(), x, e.element()));
  const double rhs = evaluate(mu, jordan_product(e.element(), x));
  return std::abs(lhs - rhs) <= tol::compat() * std::max(1.0, x.frobenius());
}

/// mu({E, X, E'}): the defect of the classical total-probability identity at
/// the event E.  Zero for all events of B exactly when B -> X under mu.
inline double interference_term(const State& mu, const Event& e, const HermitianElement& x) {
  return evaluate(mu, triple_product(e.element(), x, e.complement().element()));
}

namespace detail {

/// Traceless part of a square matrix.
inline Matrix traceless(const Matrix& m) {
  return m - (m.trace() / double(m.rows())) * Matrix::Identity(m.rows(), m.cols());
}

struct BlockCompatParts {
  // Per block: Frobenius norms of the traceless diagonal compressions.
  std::vector<double> rho_diag, x_diag;
  // Per pair i<j (flattened): norms of the cross compressions.
  std::vector<double> rho_cross, x_cross;
};

inline BlockCompatParts block_compat_parts(const State& mu, const BlockSubalgebra& m,
                                           const HermitianElement& x) {
  BlockCompatParts p;
  const std::size_t k = m.block_count();
  for (std::size_t i = 0; i < k; ++i) {
    p.rho_diag.push_back(traceless(m.compress(mu.matrix(), i, i)).norm());
    p.x_diag.push_back(traceless(m.compress(x.matrix(), i, i)).norm());
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      p.rho_cross.push_back(m.compress(mu.matrix(), i, j).norm());
      p.x_cross.push_back(m.compress(x.matrix(), i, j).norm());
    }
  return p;
}

}  // namespace detail

inline bool algebra_compatible(const State& mu, const Subalgebra& m, const HermitianElement& x) {
  if (ambient_dim(m) != x.dim() || mu.dim() != x.dim())
    throw DimensionMismatch("dimension mismatch");
  const double tau_x = tol::compat() * std::max(1.0, x.frobenius());
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    const auto& atoms = ab->atoms();
    for (const Event& e : atoms)
      if (!event_compatible(mu, e, x)) return false;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const double mixed =
            evaluate(mu, triple_product(atoms[i].element(), x, atoms[j].element()));
        if (std::abs(mixed) > tau_x) return false;
      }
    return true;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  const double tau_rho = tol::compat();
  const detail::BlockCompatParts p = detail::block_compat_parts(mu, bl, x);
  for (std::size_t i = 0; i < p.rho_diag.size(); ++i)
    if (p.rho_diag[i] > tau_rho && p.x_diag[i] > tau_x) return false;
  for (std::size_t i = 0; i < p.rho_cross.size(); ++i)
    if (p.rho_cross[i] > tau_rho && p.x_cross[i] > tau_x) return false;
  return true;
}

// ---------------------------------------------------------------------------
// The compatible slice: for fixed (M, X) the compatibility constraints are
// linear in rho, so the Hermitian matrices satisfying them form a real linear
// space L.  The maximally mixed state always lies in L, which is what makes
// the compatible state family faithful in finite dimension.
// ---------------------------------------------------------------------------
struct CompatibleSlice {
  Subalgebra algebra;
  HermitianElement element;
  std::vector<HermitianElement> basis;    // orthonormal (trace inner product)
  std::vector<std::string> constraints;   // human-readable constraint list

  Index dim() const { return static_cast<Index>(basis.size()); }

  /// Frobenius projection of a Hermitian matrix onto the slice span.
  Matrix project(const Matrix& h) const {
    Matrix out = Matrix::Zero(h.rows(), h.cols());
    for (const HermitianElement& b : basis) out += trace_inner(b.matrix(), h) * b.matrix();
    return out;
  }

  bool satisfies(const Matrix& rho, double tau = 0.0) const {
    if (tau == 0.0) tau = tol::slice() * std::max(1.0, fro(rho));
    return (project(rho) - rho).norm() <= tau;
  }
};

namespace detail {

/// Rows of the constraint matrix, one per linear functional tr(rho W) = 0.
struct ConstraintSet {
  std::vector<Matrix> functionals;        // Hermitian W
  std::vector<std::string> labels;

  void add(const Matrix& w, std::string label) {
    functionals.push_back(hermitize(w));
    labels.push_back(std::move(label));
  }

  /// Also constrain the imaginary pairing: tr(rho A) = 0 as a complex
  /// equation contributes two Hermitian functionals.
  void add_complex(const Matrix& a, const std::string& label) {
    add(0.5 * (a + a.adjoint()), label + " (re)");
    add(Complex(0, 0.5) * (a.adjoint() - a), label + " (im)");
  }
};

inline ConstraintSet compatibility_constraints(const Subalgebra& m, const HermitianElement& x) {
  ConstraintSet cs;
  const double tau_x = tol::compat() * std::max(1.0, x.frobenius());
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    const auto& atoms = ab->atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Matrix w = triple_product(atoms[i].element(), x, atoms[i].element()).matrix() -
                 jordan_product(atoms[i].element(), x).matrix();
      cs.add(w, "tr(rho ({E" + std::to_string(i) + ",X,E" + std::to_string(i) + "} - E" +
                    std::to_string(i) + " o X)) = 0");
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        cs.add(triple_product(atoms[i].element(), x, atoms[j].element()).matrix(),
               "tr(rho {E" + std::to_string(i) + ",X,E" + std::to_string(j) + "}) = 0");
    }
    return cs;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  const std::size_t k = bl.block_count();
  for (std::size_t i = 0; i < k; ++i) {
    const Index r = bl.blocks()[i].rank();
    if (traceless(bl.compress(x.matrix(), i, i)).norm() > tau_x) {
      // (E_i rho E_i) must be a multiple of E_i: kill its traceless part.
      const Matrix& q = bl.range(i);
      for (Index a = 0; a < r; ++a)
        for (Index b = a; b < r; ++b) {
          Matrix unit = Matrix::Zero(r, r);
          if (a == b) {
            if (a + 1 < r) {  // differences of consecutive diagonal entries
              unit(a, a) = 1.0;
              unit(a + 1, a + 1) = -1.0;
              cs.add(q * unit * q.adjoint(),
                     "block " + std::to_string(i) + " diagonal traceless");
            }
          } else {
            unit(a, b) = 1.0;
            cs.add_complex(q * unit * q.adjoint(),
                           "block " + std::to_string(i) + " off-diagonal");
          }
        }
    }
    for (std::size_t j = i + 1; j < k; ++j)
      if (bl.compress(x.matrix(), i, j).norm() > tau_x) {
        const Matrix& qi = bl.range(i);
        const Matrix& qj = bl.range(j);
        const Index rj = bl.blocks()[j].rank();
        for (Index a = 0; a < r; ++a)
          for (Index b = 0; b < rj; ++b) {
            Matrix cross = qi.col(a) * qj.col(b).adjoint();
            cs.add_complex(cross, "cross block (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") entry");
          }
      }
  }
  return cs;
}

/// Orthonormal slice basis from a constraint set.  The basis is built by
/// projecting a deterministic candidate list (informative directions first,
/// then the canonical Hermitian units) onto the constraint null space and
/// Gram-Schmidting, so leading basis vectors carry the structure of X.
inline std::vector<HermitianElement> slice_basis(const ConstraintSet& cs, Index n,
                                                 const std::vector<Matrix>& lead_candidates) {
  RealMatrix c(static_cast<Index>(cs.functionals.size()), n * n);
  for (std::size_t r = 0; r < cs.functionals.size(); ++r)
    c.row(static_cast<Index>(r)) = vech(cs.functionals[r]).transpose();
  RealMatrix ns = null_space(c);
  // Projector onto the null space, applied to candidates.
  std::vector<RealVector> basis;
  auto try_add = [&](const RealVector& v0) {
    RealVector v = ns * (ns.transpose() * v0);
    for (const RealVector& b : basis) v -= b.dot(v) * b;
    const double norm = v.norm();
    if (norm > 1e-8 * std::max(1.0, v0.norm())) basis.push_back(v / norm);
  };
  for (const Matrix& cand : lead_candidates) try_add(vech(hermitize(cand)));
  for (Index k = 0; k < n * n && static_cast<Index>(basis.size()) < ns.cols(); ++k)
    try_add(RealVector::Unit(n * n, k));
  std::vector<HermitianElement> out;
  out.reserve(basis.size());
  for (const RealVector& v : basis) out.push_back(HermitianElement::trusted(unvech(v, n)));
  return out;
}

}  // namespace detail

inline CompatibleSlice compatible_slice(const Subalgebra& m, const HermitianElement& x) {
  if (ambient_dim(m) != x.dim()) throw DimensionMismatch("dimension mismatch");
  const Index n = x.dim();
  detail::ConstraintSet cs = detail::compatibility_constraints(m, x);
  std::vector<Matrix> lead;
  for (const Event& e : spanning_events(m))
    lead.push_back(e.matrix() * x.matrix() * e.matrix());
  CompatibleSlice slice{m, x, detail::slice_basis(cs, n, lead), cs.labels};
  // The maximally mixed state satisfies every compatibility constraint.
  if (!slice.satisfies(Matrix::Identity(n, n) / double(n), 1e-8))
    throw InvariantViolation("tracial state escaped the compatible slice");
  for (const HermitianElement& b : slice.basis)
    for (const Matrix& w : cs.functionals)
      if (std::abs(trace_inner(b.matrix(), w)) > tol::slice() * std::max(1.0, fro(w)))
        throw InvariantViolation("slice basis element violates a constraint");
  return slice;
}

// ---------------------------------------------------------------------------
// Faithfulness of the compatible state family on M.
//
// In this library's scope the tracial state lies in every slice, so the
// family is always faithful; the fast path reports that with a provenance
// note.  The general path (exercised by hand-built slices in tests) probes
// the PSD part of the slice and checks its joint support per atom/block.
// ---------------------------------------------------------------------------
inline bool is_faithful_on(const CompatibleSlice& slice, const Subalgebra& m,
                           std::string* note = nullptr) {
  const Index n = ambient_dim(m);
  const Matrix tracial = Matrix::Identity(n, n) / double(n);
  if (slice.satisfies(tracial, 1e-8)) {
    if (note)
      *note = "faithful: the tracial state lies in the compatible family "
              "(automatic in finite dimension)";
    return true;
  }
  // Probe PSD elements of the slice span and accumulate their joint support.
  std::vector<Matrix> probes;
  Matrix p0 = slice.project(tracial);
  Eigen::SelfAdjointEigenSolver<Matrix> es0(p0);
  if (es0.eigenvalues()[0] >= -tol::psd()) probes.push_back(p0);
  for (const HermitianElement& b : slice.basis) {
    for (double sign : {1.0, -1.0}) {
      Matrix cand = sign * b.matrix();
      Eigen::SelfAdjointEigenSolver<Matrix> es(cand);
      if (es.eigenvalues()[0] >= -tol::psd()) probes.push_back(cand);
      if (!probes.empty() && probes.size() > 64) break;
    }
  }
  Matrix joint = Matrix::Zero(n, n);
  for (const Matrix& p : probes) joint += p / std::max(1.0, fro(p));
  Eigen::SelfAdjointEigenSolver<Matrix> esj(joint);
  Matrix support = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    if (esj.eigenvalues()[i] > 1e-10 * std::max(1.0, esj.eigenvalues()[n - 1]))
      support += esj.eigenvectors().col(i) * esj.eigenvectors().col(i).adjoint();
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    // A positive member sum c_i E_i is annihilated by the family iff some
    // atom never receives mass.
    for (const Event& e : ab->atoms())
      if (trace_inner(support, e.matrix()) < 1e-9) {
        if (note) *note = "not faithful: an atom carries no slice support";
        return false;
      }
    return true;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    Matrix comp = bl.compress(support, i, i);
    Eigen::SelfAdjointEigenSolver<Matrix> esc(comp);
    if (esc.eigenvalues()[0] < 1e-9) {
      if (note) *note = "not faithful: a block compression of the joint support is rank-deficient";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Trace identities of the canonical trace, exercised on seeded triples.
// ---------------------------------------------------------------------------
inline Report check_trace_identities(std::uint64_t seed, Index n, int triples = 100) {
  if (n < 2) throw InvariantViolation("trace identity check needs n >= 2");
  Rng rng(seed);
  Report rep;
  rep.id = "traces/n=" + std::to_string(n);
  double r_assoc = 0, r_shift = 0, r_pos = 0, r_sym = 0;
  for (int t = 0; t < triples; ++t) {
    HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    HermitianElement y = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    HermitianElement z = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    const double scale =
        std::max(1.0, x.frobenius() * y.frobenius() * std::max(1.0, z.frobenius()));

    // tr(X o (Y o Z)) = tr((X o Y) o Z)
    const double a1 = jordan_product(x, jordan_product(y, z)).matrix().trace().real();
    const double a2 = jordan_product(jordan_product(x, y), z).matrix().trace().real();
    r_assoc = std::max(r_assoc, std::abs(a1 - a2) / scale);

    // tr(X o {Z, Y, Z}) = tr({Z, X, Z} o Y)
    const double s1 = jordan_product(x, triple_product(z, y, z)).matrix().trace().real();
    const double s2 = jordan_product(triple_product(z, x, z), y).matrix().trace().real();
    r_shift = std::max(r_shift, std::abs(s1 - s2) / std::max(scale, z.frobenius() * scale));

    // tr(P o Q) >= 0 for P, Q >= 0
    Matrix g1 = x.matrix() * x.matrix(), g2 = y.matrix() * y.matrix();
    const double pos = trace_inner(g1, g2);
    r_pos = std::max(r_pos, std::max(0.0, -pos) / scale);

    // tr(X) = tr(S X S) for a symmetry S built from a random projection
    Matrix u = haar_unitary(n, rng);
    const Index r = 1 + static_cast<Index>(rng.integer(static_cast<std::uint64_t>(n - 1)));
    Event e = Event::trusted(hermitize(u.leftCols(r) * u.leftCols(r).adjoint()), static_cast<int>(r));
    HermitianElement s = symmetry_from(e);
    const double t1 = x.matrix().trace().real();
    const double t2 = (s.matrix() * x.matrix() * s.matrix()).trace().real();
    r_sym = std::max(r_sym, std::abs(t1 - t2) / std::max(1.0, x.frobenius()));
  }
  rep.record("trace_jordan_associative", r_assoc, 1e-9);
  rep.record("trace_triple_shift", r_shift, 1e-9);
  rep.record("trace_positive_pairing", r_pos, 1e-9);
  rep.record("trace_symmetry_invariance", r_sym, 1e-9);
  return rep;
}

}  // namespace jbwcond

#endif  // JBWCOND_STATE_HPP_
