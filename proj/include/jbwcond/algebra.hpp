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

#ifndef JBWCOND_ALGEBRA_HPP_
#define JBWCOND_ALGEBRA_HPP_

#include <algorithm>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "jbwcond/core.hpp"

namespace jbwcond {

// ---------------------------------------------------------------------------
// HermitianElement: an element of the Hermitian part of M_n(C).
//
// Mildly non-Hermitian input (within tol::herm, relative) is symmetrized on
// construction; anything worse is rejected.  The stored value is always
// exactly (m + m')/2 of the input.
// ---------------------------------------------------------------------------
class HermitianElement {
 public:
  explicit HermitianElement(const Matrix& raw, const std::string& name = {}) {
    if (raw.rows() != raw.cols() || raw.rows() < 1)
      throw InvariantViolation("matrix is not square", name);
    if (!all_finite(raw)) throw InvariantViolation("matrix has non-finite entries", name);
    const double defect = herm_defect(raw);
    if (defect > tol::herm() * std::max(1.0, fro(raw)))
      throw InvariantViolation("matrix is not Hermitian within tolerance", name);
    m_ = hermitize(raw);
  }

  /// Bypasses validation for values that are Hermitian by construction.
  static HermitianElement trusted(Matrix m) { return HermitianElement(Trusted{}, std::move(m)); }

  static HermitianElement identity(Index n) { return trusted(Matrix::Identity(n, n)); }
  static HermitianElement zero(Index n) { return trusted(Matrix::Zero(n, n)); }

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double frobenius() const { return fro(m_); }
  double norm() const { return opnorm(m_); }  // operator norm

 private:
  struct Trusted {};
  HermitianElement(Trusted, Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

inline void check_same_dim(const HermitianElement& a, const HermitianElement& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operands have different dimensions");
}

/// Jordan product X o Y = (XY + YX)/2.  Commutative, non-associative.
inline HermitianElement jordan_product(const HermitianElement& x, const HermitianElement& y) {
  check_same_dim(x, y);
  Matrix p = x.matrix() * y.matrix();
  return HermitianElement::trusted(0.5 * (p + p.adjoint().eval()));
}

/// Triple product {X, Y, Z} = (XYZ + ZYX)/2.  For X == Z this is exactly XYX.
inline HermitianElement triple_product(const HermitianElement& x, const HermitianElement& y,
                                       const HermitianElement& z) {
  check_same_dim(x, y);
  check_same_dim(y, z);
  Matrix p = x.matrix() * y.matrix() * z.matrix();
  Matrix q = z.matrix() * y.matrix() * x.matrix();
  return HermitianElement::trusted(0.5 * (p + q));
}

// ---------------------------------------------------------------------------
// Event: an orthogonal projection, the lattice element of the theory.
// ---------------------------------------------------------------------------
class Event {
 public:
  explicit Event(const HermitianElement& elem, const std::string& name = {}) : e_(elem) {
    const Matrix& m = e_.matrix();
    if ((m * m - m).norm() > tol::idem() * std::max(1.0, fro(m)))
      throw InvariantViolation("element is not idempotent within tolerance", name);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    int r = 0;
    for (Index i = 0; i < m.rows(); ++i) {
      const double ev = es.eigenvalues()[i];
      if (std::abs(ev) <= 64 * tol::idem()) continue;
      if (std::abs(ev - 1.0) <= 64 * tol::idem()) {
        ++r;
        continue;
      }
      throw InvariantViolation("projection eigenvalue away from {0,1}", name);
    }
    rank_ = r;
  }
  explicit Event(const Matrix& raw, const std::string& name = {})
      : Event(HermitianElement(raw, name), name) {}

  /// For projections exact by construction (spectral output, atom sums).
  static Event trusted(Matrix m, int rank) { return Event(Trusted{}, std::move(m), rank); }

  static Event zero(Index n) { return trusted(Matrix::Zero(n, n), 0); }
  static Event one(Index n) { return trusted(Matrix::Identity(n, n), static_cast<int>(n)); }

  const HermitianElement& element() const { return e_; }
  const Matrix& matrix() const { return e_.matrix(); }
  Index dim() const { return e_.dim(); }
  int rank() const { return rank_; }
  bool is_zero() const { return rank_ == 0; }

  /// The negation E' = 1 - E.
  Event complement() const {
    return trusted(Matrix::Identity(dim(), dim()) - matrix(), static_cast<int>(dim()) - rank_);
  }

 private:
  struct Trusted {};
  Event(Trusted, Matrix m, int rank) : e_(HermitianElement::trusted(std::move(m))), rank_(rank) {}
  HermitianElement e_;
  int rank_ = 0;
};

/// S = E - E' = 2E - 1; satisfies S^2 = 1.
inline HermitianElement symmetry_from(const Event& e) {
  return HermitianElement::trusted(2.0 * e.matrix() - Matrix::Identity(e.dim(), e.dim()));
}

// ---------------------------------------------------------------------------
// Spectral decomposition with eigenvalue clustering.
// ---------------------------------------------------------------------------
struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // distinct, ascending
  std::vector<Event> projections;    // one per distinct eigenvalue

  Matrix reconstruct() const {
    Matrix r = Matrix::Zero(projections.front().dim(), projections.front().dim());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) r += eigenvalues[k] * projections[k].matrix();
    return r;
  }
};

/// Eigendecomposition with nearby eigenvalues (gap <= tol::cluster_rel * ||X||_F)
/// merged into a single spectral projection.  Ordering is ascending, so the
/// atoms derived from a given element are reproducible.
inline SpectralDecomposition spectral(const HermitianElement& x) {
  const Matrix& m = x.matrix();
  if (!all_finite(m)) throw InvariantViolation("non-finite entries in eigensolve input");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw InvariantViolation("eigensolver failed");
  const RealVector& ev = es.eigenvalues();
  const Matrix& vec = es.eigenvectors();
  const double gap = tol::cluster_rel() * fro(m);

  SpectralDecomposition out;
  const Index n = m.rows();
  Index lo = 0;
  while (lo < n) {
    Index hi = lo + 1;
    while (hi < n && ev[hi] - ev[hi - 1] <= gap) ++hi;
    Matrix block = vec.middleCols(lo, hi - lo);
    Matrix proj = block * block.adjoint();
    double lambda = ev.segment(lo, hi - lo).mean();
    out.eigenvalues.push_back(lambda);
    out.projections.push_back(Event::trusted(hermitize(proj), static_cast<int>(hi - lo)));
    lo = hi;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subalgebras.
//
// AtomicAbelianSubalgebra: the real span of finitely many mutually orthogonal
// projections summing to 1 (its atoms).
//
// BlockSubalgebra: the commutant picture, (+)_i E_i A E_i.  Membership means
// all off-block compressions vanish.  Each block keeps an orthonormal basis
// of its range for fast compression.
// ---------------------------------------------------------------------------
class AtomicAbelianSubalgebra {
 public:
  AtomicAbelianSubalgebra(Index ambient_dim, std::vector<Event> atoms)
      : n_(ambient_dim), atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InvariantViolation("subalgebra needs at least one atom");
    Matrix sum = Matrix::Zero(n_, n_);
    for (const Event& a : atoms_) {
      if (a.dim() != n_) throw DimensionMismatch("atom dimension differs from ambient");
      if (a.is_zero()) throw InvariantViolation("zero atom");
      sum += a.matrix();
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      for (std::size_t j = i + 1; j < atoms_.size(); ++j)
        if ((atoms_[i].matrix() * atoms_[j].matrix()).norm() > tol::idem() * n_)
          throw InvariantViolation("atoms are not mutually orthogonal");
    if ((sum - Matrix::Identity(n_, n_)).norm() > tol::idem() * n_)
      throw InvariantViolation("atoms do not sum to the identity");
  }

  /// The trivial subalgebra R*1.
  static AtomicAbelianSubalgebra trivial(Index n) {
    return AtomicAbelianSubalgebra(n, {Event::one(n)});
  }

  Index ambient_dim() const { return n_; }
  const std::vector<Event>& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }

 private:
  Index n_;
  std::vector<Event> atoms_;
};

class BlockSubalgebra {
 public:
  BlockSubalgebra(Index ambient_dim, std::vector<Event> blocks)
      : n_(ambient_dim), blocks_(std::move(blocks)) {
    // Same orthogonality/completeness contract as the atomic case.
    AtomicAbelianSubalgebra check(n_, blocks_);
    ranges_.reserve(blocks_.size());
    for (const Event& b : blocks_) ranges_.push_back(range_basis(b));
  }

  Index ambient_dim() const { return n_; }
  const std::vector<Event>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  /// Orthonormal basis (columns) of block i's range.
  const Matrix& range(std::size_t i) const { return ranges_[i]; }

  /// Compression of `m` to the (i, j) block, in range coordinates (r_i x r_j).
  Matrix compress(const Matrix& m, std::size_t i, std::size_t j) const {
    return ranges_[i].adjoint() * m * ranges_[j];
  }

  /// Lift an r_i x r_j coordinate matrix back into the ambient space.
  Matrix lift(const Matrix& coord, std::size_t i, std::size_t j) const {
    return ranges_[i] * coord * ranges_[j].adjoint();
  }

  /// Real dimension of the Hermitian part, sum of r_i^2.
  Index hermitian_dim() const {
    Index d = 0;
    for (const Event& b : blocks_) d += static_cast<Index>(b.rank()) * b.rank();
    return d;
  }

 private:
  static Matrix range_basis(const Event& e) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(e.matrix());
    Matrix basis(e.dim(), e.rank());
    Index k = 0;
    for (Index i = 0; i < e.dim(); ++i)
      if (es.eigenvalues()[i] > 0.5) basis.col(k++) = es.eigenvectors().col(i);
    return basis;
  }

  Index n_;
  std::vector<Event> blocks_;
  std::vector<Matrix> ranges_;
};

using Subalgebra = std::variant<AtomicAbelianSubalgebra, BlockSubalgebra>;

inline Index ambient_dim(const Subalgebra& m) {
  return std::visit([](const auto& a) { return a.ambient_dim(); }, m);
}

/// The JBW subalgebra generated by a single Hermitian element: its atoms are
/// the spectral projections.  Non-degenerate spectrum gives a maximal abelian
/// subalgebra.
inline AtomicAbelianSubalgebra generated_abelian(const HermitianElement& x) {
  SpectralDecomposition sd = spectral(x);
  return AtomicAbelianSubalgebra(x.dim(), std::move(sd.projections));
}

/// The commutant B' of an atomic abelian subalgebra: everything that
/// operator-commutes with each atom, i.e. the block algebra over the atoms.
inline BlockSubalgebra commutant(const AtomicAbelianSubalgebra& b) {
  return BlockSubalgebra(b.ambient_dim(), b.atoms());
}

/// A block algebra is abelian exactly when every block has rank one; for the
/// commutant of B this is the maximal-abelian case B = B'.
inline bool is_abelian(const BlockSubalgebra& m) {
  return std::all_of(m.blocks().begin(), m.blocks().end(),
                     [](const Event& e) { return e.rank() == 1; });
}

// --- membership and trace-orthogonal projection -----------------------------

/// Nearest member of M in Frobenius norm.  For the atomic case this is
/// sum_i tr(E_i Y)/tr(E_i) * E_i; for the block case sum_i E_i Y E_i.
inline HermitianElement project_onto(const Subalgebra& m, const HermitianElement& y) {
  if (ambient_dim(m) != y.dim()) throw DimensionMismatch("element dimension differs from algebra");
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    Matrix out = Matrix::Zero(y.dim(), y.dim());
    for (const Event& e : ab->atoms()) {
      const double c = trace_inner(e.matrix(), y.matrix()) / e.rank();
      out += c * e.matrix();
    }
    return HermitianElement::trusted(out);
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  Matrix out = Matrix::Zero(y.dim(), y.dim());
  for (std::size_t i = 0; i < bl.block_count(); ++i)
    out += bl.blocks()[i].matrix() * y.matrix() * bl.blocks()[i].matrix();
  return HermitianElement::trusted(hermitize(out));
}

inline bool member(const Subalgebra& m, const HermitianElement& y) {
  if (ambient_dim(m) != y.dim()) throw DimensionMismatch("element dimension differs from algebra");
  const double cut = tol::member() * std::max(1.0, y.frobenius());
  return (project_onto(m, y).matrix() - y.matrix()).norm() <= cut;
}

/// Real-linear basis of the Hermitian part of M, orthonormal in the trace
/// inner product.
inline std::vector<HermitianElement> hermitian_basis(const Subalgebra& m) {
  std::vector<HermitianElement> basis;
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    for (const Event& e : ab->atoms())
      basis.push_back(HermitianElement::trusted(e.matrix() / std::sqrt(double(e.rank()))));
    return basis;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    const Index r = bl.blocks()[i].rank();
    for (Index a = 0; a < r; ++a) {
      Matrix c = Matrix::Zero(r, r);
      c(a, a) = 1.0;
      basis.push_back(HermitianElement::trusted(bl.lift(c, i, i)));
      for (Index b = a + 1; b < r; ++b) {
        Matrix re = Matrix::Zero(r, r), im = Matrix::Zero(r, r);
        re(a, b) = re(b, a) = s;
        im(a, b) = Complex(0, s);
        im(b, a) = Complex(0, -s);
        basis.push_back(HermitianElement::trusted(hermitize(bl.lift(re, i, i))));
        basis.push_back(HermitianElement::trusted(hermitize(bl.lift(im, i, i))));
      }
    }
  }
  return basis;
}

/// Finite family of events of M whose real span is all of M.  Atoms for the
/// atomic case; per-block rank-one projections (diagonal, +, and +i mixtures)
/// for the block case.
inline std::vector<Event> spanning_events(const Subalgebra& m) {
  std::vector<Event> out;
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    out = ab->atoms();
    return out;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    const Index r = bl.blocks()[i].rank();
    const Matrix& q = bl.range(i);
    auto push_vec = [&](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd w = q * v;
      out.push_back(Event::trusted(hermitize(w * w.adjoint()), 1));
    };
    for (Index a = 0; a < r; ++a) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(r);
      e[a] = 1.0;
      push_vec(e);
      for (Index b = a + 1; b < r; ++b) {
        Eigen::VectorXcd p = Eigen::VectorXcd::Zero(r), q2 = Eigen::VectorXcd::Zero(r);
        p[a] = p[b] = 1.0 / std::sqrt(2.0);
        q2[a] = 1.0 / std::sqrt(2.0);
        q2[b] = Complex(0, 1.0 / std::sqrt(2.0));
        push_vec(p);
        push_vec(q2);
      }
    }
  }
  return out;
}

// --- random elements of a subalgebra ----------------------------------------

/// Unitary element of the W*-algebra generated by M: seeded uniform phases on
/// the atoms in the abelian case, per-block Haar unitaries in the block case.
inline Operator random_unitary_in(const Subalgebra& m, std::uint64_t seed) {
  Rng rng(seed);
  const Index n = ambient_dim(m);
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    Matrix u = Matrix::Zero(n, n);
    for (const Event& e : ab->atoms()) {
      const double theta = rng.uniform(0.0, 2.0 * M_PI);
      u += std::polar(1.0, theta) * e.matrix();
    }
    return u;
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  Matrix u = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    Matrix h = haar_unitary(bl.blocks()[i].rank(), rng);
    u += bl.lift(h, i, i);
  }
  return u;
}

/// Random event of M: a random sub-sum of atoms, or a random projection
/// inside each block.  May be 0 or 1.
inline Event random_event_in(const Subalgebra& m, Rng& rng) {
  const Index n = ambient_dim(m);
  if (const auto* ab = std::get_if<AtomicAbelianSubalgebra>(&m)) {
    Matrix sum = Matrix::Zero(n, n);
    int rank = 0;
    for (const Event& e : ab->atoms())
      if (rng.uniform() < 0.5) {
        sum += e.matrix();
        rank += e.rank();
      }
    return Event::trusted(sum, rank);
  }
  const auto& bl = std::get<BlockSubalgebra>(m);
  Matrix sum = Matrix::Zero(n, n);
  int rank = 0;
  for (std::size_t i = 0; i < bl.block_count(); ++i) {
    const Index r = bl.blocks()[i].rank();
    const Index k = static_cast<Index>(rng.integer(static_cast<std::uint64_t>(r) + 1));
    if (k == 0) continue;
    Matrix u = haar_unitary(r, rng);
    Matrix p = u.leftCols(k) * u.leftCols(k).adjoint();
    sum += bl.lift(p, i, i);
    rank += static_cast<int>(k);
  }
  return Event::trusted(hermitize(sum), rank);
}

/// Random Hermitian member of M.
inline HermitianElement random_member_of(const Subalgebra& m, Rng& rng) {
  std::vector<HermitianElement> basis = hermitian_basis(m);
  Matrix out = Matrix::Zero(ambient_dim(m), ambient_dim(m));
  for (const HermitianElement& b : basis) out += rng.normal() * b.matrix();
  return HermitianElement::trusted(out);
}

}  // namespace jbwcond

#endif  // JBWCOND_ALGEBRA_HPP_
