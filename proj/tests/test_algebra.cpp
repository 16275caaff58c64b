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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace jbwcond;
using namespace testutil;

TEST_CASE("jordan product basics") {
  HermitianElement x = HermitianElement::trusted(sx());
  HermitianElement z = HermitianElement::trusted(sz());
  HermitianElement one = HermitianElement::identity(2);

  CHECK(matdiff(jordan_product(one, x).matrix(), sx()) == 0.0);
  // Pauli matrices anticommute.
  CHECK(jordan_product(x, z).frobenius() < 1e-15);

  Matrix expected(2, 2);
  expected << 0.5, 0.25, 0.25, 0.0;
  CHECK(matdiff(jordan_product(HermitianElement::trusted(e00()),
                               HermitianElement::trusted(plus_state()))
                    .matrix(),
                expected) < 1e-15);

  CHECK_THROWS_AS(jordan_product(one, HermitianElement::identity(3)), DimensionMismatch);
}

TEST_CASE("jordan product is commutative on random pairs") {
  Rng rng(11);
  for (Index n : {2, 5, 16}) {
    Matrix a = random_hermitian_matrix(n, rng), b = random_hermitian_matrix(n, rng);
    HermitianElement x = HermitianElement::trusted(a), y = HermitianElement::trusted(b);
    CHECK(matdiff(jordan_product(x, y).matrix(), jordan_product(y, x).matrix()) <= 1e-12);
  }
}

TEST_CASE("triple product basics and expansion identity") {
  HermitianElement one = HermitianElement::identity(2);
  HermitianElement y = HermitianElement::trusted(sy());
  CHECK(matdiff(triple_product(one, y, one).matrix(), sy()) == 0.0);

  HermitianElement e0 = HermitianElement::trusted(e00());
  HermitianElement fplus = HermitianElement::trusted(plus_state());
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  CHECK(matdiff(triple_product(e0, fplus, e0).matrix(), expected) < 1e-15);

  // {X,Y,Z} = X o (Y o Z) - Y o (Z o X) + Z o (X o Y)
  Rng rng(5);
  for (Index n : {2, 4, 9}) {
    HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    HermitianElement yy = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    HermitianElement z = HermitianElement::trusted(random_hermitian_matrix(n, rng));
    Matrix lhs = triple_product(x, yy, z).matrix();
    Matrix rhs = jordan_product(x, jordan_product(yy, z)).matrix() -
                 jordan_product(yy, jordan_product(z, x)).matrix() +
                 jordan_product(z, jordan_product(x, yy)).matrix();
    CHECK(matdiff(lhs, rhs) <= 1e-10 * std::max(1.0, fro(lhs)));
  }
}

TEST_CASE("compression splits along an event and its complement") {
  // {E, X, E'} = E o X - {E, X, E}
  Rng rng(17);
  const Index n = 6;
  Matrix u = haar_unitary(n, rng);
  Event e = Event::trusted(hermitize(u.leftCols(2) * u.leftCols(2).adjoint()), 2);
  HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
  Matrix lhs = triple_product(e.element(), x, e.complement().element()).matrix();
  Matrix rhs = jordan_product(e.element(), x).matrix() -
               triple_product(e.element(), x, e.element()).matrix();
  CHECK(matdiff(lhs, rhs) <= 1e-12 * std::max(1.0, x.frobenius()));
}

TEST_CASE("spectral decomposition clusters and reconstructs") {
  SECTION("diagonal with a degenerate eigenvalue") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3, 3, 5;
    SpectralDecomposition sd = spectral(HermitianElement::trusted(d));
    REQUIRE(sd.eigenvalues.size() == 2);
    CHECK(sd.eigenvalues[0] == Catch::Approx(3.0));
    CHECK(sd.eigenvalues[1] == Catch::Approx(5.0));
    Matrix p0 = Matrix::Zero(3, 3), p1 = Matrix::Zero(3, 3);
    p0(0, 0) = p0(1, 1) = 1;
    p1(2, 2) = 1;
    CHECK(matdiff(sd.projections[0].matrix(), p0) < 1e-12);
    CHECK(matdiff(sd.projections[1].matrix(), p1) < 1e-12);
  }
  SECTION("sigma_x") {
    SpectralDecomposition sd = spectral(HermitianElement::trusted(sx()));
    REQUIRE(sd.eigenvalues.size() == 2);
    CHECK(sd.eigenvalues[0] == Catch::Approx(-1.0));
    CHECK(sd.eigenvalues[1] == Catch::Approx(1.0));
    Matrix minus(2, 2), plus(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(matdiff(sd.projections[0].matrix(), minus) < 1e-12);
    CHECK(matdiff(sd.projections[1].matrix(), plus) < 1e-12);
  }
  SECTION("identity") {
    SpectralDecomposition sd = spectral(HermitianElement::identity(4));
    REQUIRE(sd.eigenvalues.size() == 1);
    CHECK(sd.projections[0].rank() == 4);
  }
  SECTION("reconstruction on random input") {
    Rng rng(23);
    for (Index n : {3, 8}) {
      HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(n, rng));
      SpectralDecomposition sd = spectral(x);
      CHECK(matdiff(sd.reconstruct(), x.matrix()) <= tol::spec() * std::max(1.0, x.frobenius()));
      // projections resolve the identity
      Matrix sum = Matrix::Zero(n, n);
      for (const Event& p : sd.projections) sum += p.matrix();
      CHECK(matdiff(sum, Matrix::Identity(n, n)) < 1e-12);
    }
  }
}

TEST_CASE("generated abelian subalgebra") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  CHECK(generated_abelian(HermitianElement::trusted(d)).atom_count() == 3);

  d.diagonal() << 1, 1, 2;
  AtomicAbelianSubalgebra degen = generated_abelian(HermitianElement::trusted(d));
  REQUIRE(degen.atom_count() == 2);
  CHECK(degen.atoms()[0].rank() == 2);

  AtomicAbelianSubalgebra from_sx = generated_abelian(HermitianElement::trusted(sx()));
  REQUIRE(from_sx.atom_count() == 2);
  CHECK(from_sx.atoms()[0].rank() == 1);
}

namespace {

// Independent oracle: the commutant as the null space of Y -> ([Y, E_i])_i
// over Hermitian Y in real coordinates.
RealMatrix commutator_map(const AtomicAbelianSubalgebra& b) {
  const Index n = b.ambient_dim();
  const Index d = n * n;
  RealMatrix map(2 * d * static_cast<Index>(b.atom_count()), d);
  Index row_block = 0;
  for (const Event& e : b.atoms()) {
    for (Index c = 0; c < d; ++c) {
      Matrix y = unvech(RealVector::Unit(d, c), n);
      Matrix comm = y * e.matrix() - e.matrix() * y;  // anti-Hermitian
      Matrix re = 0.5 * (comm + comm.adjoint());
      Matrix im = Complex(0, 0.5) * (comm.adjoint() - comm);
      map.block(row_block, c, d, 1) = vech(re);
      map.block(row_block + d, c, d, 1) = vech(im);
    }
    row_block += 2 * d;
  }
  return map;
}

}  // namespace

TEST_CASE("commutant structure and null-space oracle") {
  SECTION("diagonal atoms in n=2 give the diagonal algebra") {
    BlockSubalgebra comm = commutant(diagonal_algebra_2());
    CHECK(comm.hermitian_dim() == 2);
    CHECK(member(Subalgebra(comm), HermitianElement::trusted(sz())));
    CHECK_FALSE(member(Subalgebra(comm), HermitianElement::trusted(sx())));
  }
  SECTION("1+2 split in n=3") {
    BlockSubalgebra comm = commutant(split_algebra_3());
    CHECK(comm.hermitian_dim() == 5);
    RealMatrix ns = null_space(commutator_map(split_algebra_3()));
    CHECK(ns.cols() == 5);
    for (Index c = 0; c < ns.cols(); ++c)
      CHECK(member(Subalgebra(comm), HermitianElement::trusted(unvech(ns.col(c), 3))));
  }
  SECTION("trivial algebra has the whole algebra as commutant") {
    AtomicAbelianSubalgebra triv = AtomicAbelianSubalgebra::trivial(3);
    BlockSubalgebra comm = commutant(triv);
    CHECK(comm.hermitian_dim() == 9);
    Rng rng(3);
    CHECK(member(Subalgebra(comm), HermitianElement::trusted(random_hermitian_matrix(3, rng))));
  }
  SECTION("random algebra: commutant dimension matches the oracle") {
    Rng rng(41);
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(6, rng);
    BlockSubalgebra comm = commutant(b);
    RealMatrix ns = null_space(commutator_map(b));
    CHECK(ns.cols() == comm.hermitian_dim());
    for (Index c = 0; c < std::min<Index>(ns.cols(), 8); ++c)
      CHECK(member(Subalgebra(comm), HermitianElement::trusted(unvech(ns.col(c), 6))));
  }
}

TEST_CASE("membership and trace-orthogonal projection") {
  Subalgebra diag(diagonal_algebra_2());
  CHECK(member(diag, HermitianElement::trusted(sz())));
  CHECK_FALSE(member(diag, HermitianElement::trusted(sx())));
  CHECK(project_onto(diag, HermitianElement::trusted(sx())).frobenius() < 1e-15);

  Subalgebra split(commutant(split_algebra_3()));
  Matrix block = Matrix::Zero(3, 3);
  block(0, 0) = 5;
  block.block(1, 1, 2, 2) << 1, Complex(0, 2), Complex(0, -2), 3;
  CHECK(member(split, HermitianElement::trusted(block)));

  Matrix ones = Matrix::Ones(3, 3);
  Matrix compressed = ones;
  compressed(0, 1) = compressed(0, 2) = compressed(1, 0) = compressed(2, 0) = 0;
  CHECK(matdiff(project_onto(split, HermitianElement::trusted(ones)).matrix(), compressed) <
        1e-14);

  SECTION("projection is idempotent and trace-orthogonal") {
    Rng rng(9);
    for (const Subalgebra& m : {diag, split}) {
      HermitianElement y = HermitianElement::trusted(random_hermitian_matrix(ambient_dim(m), rng));
      HermitianElement py = project_onto(m, y);
      CHECK(matdiff(project_onto(m, py).matrix(), py.matrix()) <= 1e-10);
      for (int t = 0; t < 5; ++t) {
        HermitianElement z = random_member_of(m, rng);
        CHECK(std::abs(trace_inner(y.matrix() - py.matrix(), z.matrix())) <= 1e-10);
      }
      CHECK(matdiff(py.matrix(), y.matrix()) >= 0.0);  // projection fixes members:
      HermitianElement zm = random_member_of(m, rng);
      CHECK(matdiff(project_onto(m, zm).matrix(), zm.matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("symmetries from events") {
  CHECK(matdiff(symmetry_from(Event::one(2)).matrix(), Matrix::Identity(2, 2)) == 0.0);
  CHECK(matdiff(symmetry_from(Event::trusted(e00(), 1)).matrix(), sz()) == 0.0);
  Rng rng(31);
  Matrix u = haar_unitary(6, rng);
  Event e = Event::trusted(hermitize(u.leftCols(4) * u.leftCols(4).adjoint()), 4);
  Matrix s = symmetry_from(e).matrix();
  CHECK(matdiff(s * s, Matrix::Identity(6, 6)) <= 1e-12);
}

TEST_CASE("seeded unitaries of a subalgebra") {
  SECTION("abelian case gives atom phases") {
    Operator u = random_unitary_in(Subalgebra(diagonal_algebra_2()), 7);
    CHECK(std::abs(u(0, 1)) + std::abs(u(1, 0)) < 1e-15);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(u(1, 1)) - 1.0) < 1e-12);
  }
  SECTION("trivial algebra gives a global phase") {
    Operator u = random_unitary_in(Subalgebra(AtomicAbelianSubalgebra::trivial(3)), 7);
    CHECK(matdiff(u, u(0, 0) * Matrix::Identity(3, 3)) < 1e-12);
  }
  SECTION("single full block is Haar unitary") {
    Subalgebra whole(commutant(AtomicAbelianSubalgebra::trivial(5)));
    Operator u = random_unitary_in(whole, 7);
    CHECK(matdiff(u.adjoint() * u, Matrix::Identity(5, 5)) <= 1e-12);
    // distinct seeds give distinct unitaries
    Operator v = random_unitary_in(whole, 8);
    CHECK(matdiff(u, v) > 1e-3);
  }
  SECTION("block unitaries commute with the blocks") {
    BlockSubalgebra comm = commutant(split_algebra_3());
    Operator u = random_unitary_in(Subalgebra(comm), 19);
    CHECK(matdiff(u.adjoint() * u, Matrix::Identity(3, 3)) <= 1e-12);
    for (const Event& e : comm.blocks())
      CHECK(commutator(u, e.matrix()).norm() <= 1e-12);
  }
}

TEST_CASE("validation rejects malformed inputs") {
  Matrix bad(2, 2);
  bad << 1, 1, 0, 1;  // not Hermitian
  CHECK_THROWS_AS(HermitianElement(bad), InvariantViolation);
  CHECK_THROWS_AS(Event(HermitianElement::trusted(Matrix(0.5 * Matrix::Identity(2, 2)))),
                  InvariantViolation);
  // atoms must be orthogonal and complete
  CHECK_THROWS_AS(AtomicAbelianSubalgebra(
                      2, {Event::trusted(e00(), 1), Event::trusted(e00(), 1)}),
                  InvariantViolation);
  CHECK_THROWS_AS(AtomicAbelianSubalgebra(2, {Event::trusted(e00(), 1)}), InvariantViolation);
  // mild asymmetry is symmetrized instead of rejected
  Matrix mild = sx();
  mild(0, 1) += 1e-12;
  CHECK(herm_defect(HermitianElement(mild).matrix()) == 0.0);
}
