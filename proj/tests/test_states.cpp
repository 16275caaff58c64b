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

TEST_CASE("state construction and evaluation") {
  State pure(HermitianElement::trusted(e00()));
  CHECK(evaluate(pure, HermitianElement::identity(2)) == Catch::Approx(1.0));
  CHECK(evaluate(pure, HermitianElement::trusted(sz())) == Catch::Approx(1.0));

  State tracial = State::tracial(2);
  CHECK(evaluate(tracial, HermitianElement::trusted(plus_state())) == Catch::Approx(0.5));

  SECTION("mild negative eigenvalues are clamped, worse ones rejected") {
    Matrix nearly = e00();
    nearly(1, 1) = -5e-11;
    State fixed(HermitianElement::trusted(nearly));
    Eigen::SelfAdjointEigenSolver<Matrix> es(fixed.matrix(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] >= 0.0);
    CHECK(fixed.matrix().trace().real() == Catch::Approx(1.0));

    Matrix bad = e00();
    bad(1, 1) = -1e-3;
    bad(0, 0) = 1.0 + 1e-3;
    CHECK_THROWS_AS(State(HermitianElement::trusted(bad)), InvariantViolation);
  }
  SECTION("trace must be near one") {
    CHECK_THROWS_AS(State(HermitianElement::trusted(Matrix(2.0 * e00()))), InvariantViolation);
  }
}

TEST_CASE("conditional probability") {
  Event e0 = Event::trusted(e00(), 1);
  Event fplus{HermitianElement::trusted(plus_state())};

  SECTION("conditioning on itself gives one") {
    State mu(HermitianElement::trusted(e00()));
    CHECK(cond_prob(mu, e0, e0) == Catch::Approx(1.0));
  }
  SECTION("tracial state, interference-free pair") {
    CHECK(cond_prob(State::tracial(2), fplus, e0) == Catch::Approx(0.5));
  }
  SECTION("conditioning on the sure event is the plain expectation") {
    State plus(HermitianElement::trusted(plus_state()));
    CHECK(cond_prob(plus, Event::trusted(e11(), 1), Event::one(2)) == Catch::Approx(0.5));
  }
  SECTION("null conditioning raises") {
    State mu(HermitianElement::trusted(e00()));
    CHECK_THROWS_AS(cond_prob(mu, fplus, Event::trusted(e11(), 1)), ConditioningOnNull);
  }
  SECTION("for fixed (mu, E) the map F -> mu(F|E) is a state on the corner") {
    Rng rng(77);
    const Index n = 6;
    Matrix u = haar_unitary(n, rng);
    Event e = Event::trusted(hermitize(u.leftCols(4) * u.leftCols(4).adjoint()), 4);
    Matrix raw = detail::traceless(random_hermitian_matrix(n, rng));
    State mu(HermitianElement::trusted(
        Matrix(Matrix::Identity(n, n) / double(n) + raw / (3.0 * double(n) * opnorm(raw)))));
    CHECK(cond_prob(mu, Event::one(n), e) == Catch::Approx(1.0));
    // additivity over an orthogonal pair of events
    Matrix v = haar_unitary(n, rng);
    Event f1 = Event::trusted(hermitize(v.col(0) * v.col(0).adjoint()), 1);
    Event f2 = Event::trusted(hermitize(v.col(1) * v.col(1).adjoint()), 1);
    Event f12 = Event::trusted(f1.matrix() + f2.matrix(), 2);
    CHECK(cond_prob(mu, f12, e) ==
          Catch::Approx(cond_prob(mu, f1, e) + cond_prob(mu, f2, e)).margin(1e-9));
  }
}

TEST_CASE("objective conditional probability") {
  Event e0 = Event::trusted(e00(), 1);
  Event fplus{HermitianElement::trusted(plus_state())};

  ObjectiveProbabilityResult r = objective_prob(fplus, e0);
  CHECK(r.exists);
  CHECK(r.lambda == Catch::Approx(0.5));

  SECTION("rank-one conditioning events always admit one") {
    Rng rng(13);
    Matrix u = haar_unitary(4, rng);
    Event atom = Event::trusted(hermitize(u.col(2) * u.col(2).adjoint()), 1);
    Matrix v = haar_unitary(4, rng);
    Event f = Event::trusted(hermitize(v.leftCols(2) * v.leftCols(2).adjoint()), 2);
    ObjectiveProbabilityResult rr = objective_prob(f, atom);
    CHECK(rr.exists);
    CHECK(rr.lambda == Catch::Approx(trace_inner(atom.matrix(), f.matrix())).margin(1e-12));
  }
  SECTION("compression that is not a multiple of E") {
    Matrix f = Matrix::Zero(3, 3), e = Matrix::Zero(3, 3);
    f(0, 0) = 1;
    e(0, 0) = e(1, 1) = 1;
    ObjectiveProbabilityResult rr = objective_prob(Event::trusted(f, 1), Event::trusted(e, 2));
    CHECK_FALSE(rr.exists);
  }
}

TEST_CASE("event compatibility") {
  HermitianElement x = HermitianElement::trusted(sx());
  Event e0 = Event::trusted(e00(), 1);

  CHECK(event_compatible(State(HermitianElement::trusted(plus_state())), Event::one(2), x));
  CHECK_FALSE(event_compatible(State(HermitianElement::trusted(plus_state())), e0, x));
  // the tracial state is compatible with everything
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Matrix u = haar_unitary(4, rng);
    Event e = Event::trusted(hermitize(u.leftCols(2) * u.leftCols(2).adjoint()), 2);
    CHECK(event_compatible(State::tracial(4), e,
                           HermitianElement::trusted(random_hermitian_matrix(4, rng))));
  }
}

TEST_CASE("algebra compatibility: exact criterion") {
  SECTION("tracial state is compatible with every algebra and element") {
    Rng rng(19);
    for (int t = 0; t < 6; ++t) {
      AtomicAbelianSubalgebra b = detail::random_atomic_algebra(6, rng);
      HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(6, rng));
      CHECK(algebra_compatible(State::tracial(6), Subalgebra(b), x));
      CHECK(algebra_compatible(State::tracial(6), Subalgebra(commutant(b)), x));
    }
  }
  SECTION("qubit block cases") {
    Subalgebra blocks(commutant(diagonal_algebra_2()));
    HermitianElement x = HermitianElement::trusted(sx());
    Matrix diag_rho = Matrix::Zero(2, 2);
    diag_rho.diagonal() << 0.75, 0.25;
    CHECK(algebra_compatible(State(HermitianElement::trusted(diag_rho)), blocks, x));
    CHECK_FALSE(algebra_compatible(State(HermitianElement::trusted(plus_state())), blocks, x));
    // and the same through the atomic criterion: the cross term is 1/2
    CHECK(std::abs(interference_term(State(HermitianElement::trusted(plus_state())),
                                     Event::trusted(e00(), 1), x)) == Catch::Approx(0.5));
  }
  SECTION("block-diagonal states with scalar blocks are compatible with everything") {
    Rng rng(29);
    AtomicAbelianSubalgebra b = split_algebra_3();
    Matrix rho = Matrix::Zero(3, 3);
    rho(0, 0) = 0.4;
    rho(1, 1) = rho(2, 2) = 0.3;
    State mu(HermitianElement::trusted(rho));
    for (int t = 0; t < 5; ++t)
      CHECK(algebra_compatible(mu, Subalgebra(commutant(b)),
                               HermitianElement::trusted(random_hermitian_matrix(3, rng))));
  }
}

TEST_CASE("block criterion agrees with the projection/unitary oracle") {
  // Small seeded batch; the acceptance suite runs the full 200 x 500 version.
  Rng root(101);
  for (int t = 0; t < 24; ++t) {
    Instance inst = make_instance(root.fork(), AlgebraKind::Block,
                                  t % 2 ? Polarity::Incompatible : Polarity::Compatible);
    const bool exact = algebra_compatible(inst.state, inst.algebra, inst.element);
    double worst = 0.0;
    const bool sampled = compatibility_oracle(inst.state, inst.algebra, inst.element, 100,
                                              root.fork(), &worst);
    CHECK(exact == sampled);
    if (!exact) CHECK(worst >= 1e-6);
  }
}

TEST_CASE("atomic events-criterion versus unitary invariance at the phase corner") {
  // A state whose cross term is purely imaginary satisfies the finitely many
  // event conditions of the diagonal subalgebra but is not invariant under
  // its diagonal unitaries; the block-algebra criterion is the stronger one.
  Matrix rho = 0.5 * (Matrix::Identity(2, 2) - sy());
  State mu(HermitianElement::trusted(rho));
  HermitianElement x = HermitianElement::trusted(sx());
  AtomicAbelianSubalgebra diag = diagonal_algebra_2();

  CHECK(algebra_compatible(mu, Subalgebra(diag), x));  // all four events pass
  CHECK_FALSE(algebra_compatible(mu, Subalgebra(commutant(diag)), x));
  Operator u = Matrix::Zero(2, 2);
  u(0, 0) = 1;
  u(1, 1) = Complex(0, 1);
  const double drift =
      std::abs(trace_of_product(mu.matrix(), Matrix(u * x.matrix() * u.adjoint())).real() -
               evaluate(mu, x));
  CHECK(drift > 0.9);  // tr(rho U X U*) actually moves
}

TEST_CASE("compatible slice") {
  SECTION("no constraints for the identity element") {
    CompatibleSlice slice = compatible_slice(Subalgebra(diagonal_algebra_2()),
                                             HermitianElement::identity(2));
    CHECK(slice.dim() == 4);
  }
  SECTION("diagonal atoms against sigma_x fix Re rho_01 = 0") {
    CompatibleSlice slice =
        compatible_slice(Subalgebra(diagonal_algebra_2()), HermitianElement::trusted(sx()));
    CHECK(slice.dim() == 3);
    Matrix re_off(2, 2);
    re_off << 0, 1, 1, 0;
    CHECK(fro(slice.project(re_off)) < 1e-10);
    CHECK(slice.satisfies(0.5 * (Matrix::Identity(2, 2) - sy())));
  }
  SECTION("every slice contains the tracial state") {
    Rng rng(43);
    for (int t = 0; t < 4; ++t) {
      AtomicAbelianSubalgebra b = detail::random_atomic_algebra(6, rng);
      HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(6, rng));
      for (const Subalgebra& m : {Subalgebra(b), Subalgebra(commutant(b))}) {
        CompatibleSlice slice = compatible_slice(m, x);
        CHECK(slice.satisfies(Matrix::Identity(6, 6) / 6.0, 1e-8));
      }
    }
  }
}

TEST_CASE("faithfulness of the compatible family") {
  SECTION("in-scope slices are faithful via the tracial state") {
    Rng rng(53);
    AtomicAbelianSubalgebra b = detail::random_atomic_algebra(4, rng);
    HermitianElement x = HermitianElement::trusted(random_hermitian_matrix(4, rng));
    CompatibleSlice slice = compatible_slice(Subalgebra(b), x);
    std::string note;
    CHECK(is_faithful_on(slice, Subalgebra(b), &note));
    CHECK(note.find("tracial") != std::string::npos);
  }
  SECTION("an artificially restricted slice is caught") {
    // states supported on E0 only: Y = E1 is a positive member annihilated
    // by every such state
    Subalgebra diag(diagonal_algebra_2());
    CompatibleSlice slice{diag, HermitianElement::identity(2),
                          {HermitianElement::trusted(e00())},
                          {"rho supported on E0"}};
    CHECK_FALSE(is_faithful_on(slice, diag));
  }
  SECTION("the full state space is faithful") {
    Subalgebra diag(diagonal_algebra_2());
    CompatibleSlice full = compatible_slice(diag, HermitianElement::identity(2));
    CHECK(is_faithful_on(full, diag));
  }
}

TEST_CASE("trace identities") {
  Report rep = check_trace_identities(1, 4);
  CHECK(rep.passed);
  for (const auto& [name, value] : rep.residuals) CHECK(value <= 1e-9);

  SECTION("explicit symmetry invariance in n=2") {
    Rng rng(61);
    Matrix x = random_hermitian_matrix(2, rng);
    Matrix s = sz();
    CHECK(std::abs((s * x * s).trace().real() - x.trace().real()) <= 1e-12);
  }
  SECTION("identity triple reduces to the dimension") {
    Matrix one = Matrix::Identity(3, 3);
    CHECK(jordan_product(HermitianElement::trusted(one),
                         jordan_product(HermitianElement::trusted(one),
                                        HermitianElement::trusted(one)))
              .matrix()
              .trace()
              .real() == Catch::Approx(3.0));
  }
}
