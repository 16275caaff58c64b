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

#ifndef JBWCOND_CORE_HPP_
#define JBWCOND_CORE_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace jbwcond {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;  // dense complex matrices, the common carrier
using Operator = Matrix;          // raw (not necessarily Hermitian) operators, e.g. unitaries
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical tolerances. Every threshold in the library goes through this
// table so one knob (--tolerance-scale on the CLI) widens them uniformly.
namespace tol {

inline double scale = 1.0;

inline double herm() { return 1e-9 * scale; }         // relative, Frobenius
inline double idem() { return 1e-9 * scale; }
inline double member() { return 1e-9 * scale; }
inline double spec() { return 1e-8 * scale; }
inline double cluster_rel() { return 1e-7 * scale; }  // eigenvalue gap, relative to ||X||_F
inline double psd() { return 1e-10 * scale; }
inline double trace() { return 1e-10 * scale; }
inline double cond() { return 1e-9 * scale; }
inline double obj() { return 1e-9 * scale; }
inline double compat() { return 1e-9 * scale; }       // scaled by max(1, ||X||_F) at use sites
inline double slice() { return 1e-10 * scale; }
inline double lsq() { return 1e-8 * scale; }
inline double unitary() { return 1e-12 * scale; }

}  // namespace tol

// --- error taxonomy -------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands of different dimension were combined.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A matrix failed the numeric contract of its declared role
/// (Hermitian / idempotent / density ...). `offender` names it when known.
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& what, std::string offender_name = {})
      : Error(what), offender(std::move(offender_name)) {}
  std::string offender;
};

/// A structurally malformed input file (wrong shape, missing key, bad type).
struct SchemaError : Error {
  explicit SchemaError(const std::string& what, std::string json_pointer = {})
      : Error(what), pointer(std::move(json_pointer)) {}
  std::string pointer;
};

/// Conditioning event has probability below the cutoff.
struct ConditioningOnNull : Error {
  using Error::Error;
};

/// Full partition enumeration was requested past the cap.
struct TooManyPartitions : Error {
  TooManyPartitions(const std::string& what, std::uint64_t bell_estimate)
      : Error(what), bell(bell_estimate) {}
  std::uint64_t bell;
};

struct NonCommutingUnitary : Error {
  using Error::Error;
};

struct CommutantNotAbelian : Error {
  using Error::Error;
};

struct UnknownCase : Error {
  using Error::Error;
};

// --- seeded randomness -----------------------------------------------------

/// Deterministic random source. Every randomized routine takes one of these
/// (or a seed) explicitly; there is no hidden global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return unif_(gen_); }          // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return norm_(gen_); }
  Complex cnormal() { return Complex(norm_(gen_), norm_(gen_)) / std::sqrt(2.0); }
  std::uint64_t integer(std::uint64_t n) {  // uniform in [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }
  std::uint64_t fork() { return gen_(); }  // derive a child seed

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

// --- small dense-matrix helpers ---------------------------------------------

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline double fro(const Matrix& m) { return m.norm(); }

/// Largest singular value. For Hermitian input this is the spectral radius.
inline double opnorm(const Matrix& m) { return m.operatorNorm(); }

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline double herm_defect(const Matrix& m) { return (m - m.adjoint().eval()).norm(); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Real part of tr(a * b); the trace inner product on Hermitian matrices.
inline double trace_inner(const Matrix& a, const Matrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

inline Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return (a.cwiseProduct(b.transpose())).sum();
}

// Isometric real coordinates for Hermitian matrices: n diagonal entries, then
// sqrt(2)*Re / sqrt(2)*Im of the strict upper triangle.  tr(A*B) = vech(A).vech(B).
inline RealVector vech(const Matrix& h) {
  const Index n = h.rows();
  RealVector v(n * n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) v[k++] = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      v[k++] = s * h(i, j).real();
      v[k++] = s * h(i, j).imag();
    }
  return v;
}

inline Matrix unvech(const RealVector& v, Index n) {
  Matrix h = Matrix::Zero(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) h(i, i) = v[k++];
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double re = v[k++] * s;
      const double im = v[k++] * s;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  return h;
}

/// Orthonormal basis (columns) of the null space of `a`, by SVD with a
/// relative singular-value cutoff.
inline RealMatrix null_space(const RealMatrix& a, double rtol = 1e-10) {
  if (a.rows() == 0) return RealMatrix::Identity(a.cols(), a.cols());
  Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? rtol * std::max(1.0, sv[0]) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// standard phase correction.
inline Matrix haar_unitary(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

/// Gaussian Hermitian matrix with O(1) entries.
inline Matrix random_hermitian_matrix(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  return hermitize(g);
}

}  // namespace jbwcond

#endif  // JBWCOND_CORE_HPP_
