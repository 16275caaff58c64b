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

#ifndef JBWCOND_TESTS_HELPERS_HPP_
#define JBWCOND_TESTS_HELPERS_HPP_

#include "jbwcond/jbwcond.hpp"

namespace testutil {

using jbwcond::Complex;
using jbwcond::Index;
using jbwcond::Matrix;

inline Matrix sx() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix sy() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}
inline Matrix sz() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Matrix e00() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1;
  return m;
}
inline Matrix e11() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1;
  return m;
}
/// |+><+| = (1 + sx)/2
inline Matrix plus_state() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

inline jbwcond::AtomicAbelianSubalgebra diagonal_algebra_2() {
  return jbwcond::AtomicAbelianSubalgebra(
      2, {jbwcond::Event::trusted(e00(), 1), jbwcond::Event::trusted(e11(), 1)});
}

/// 1 (+) 2 block structure on C^3.
inline jbwcond::AtomicAbelianSubalgebra split_algebra_3() {
  Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
  a(0, 0) = 1;
  b(1, 1) = b(2, 2) = 1;
  return jbwcond::AtomicAbelianSubalgebra(
      3, {jbwcond::Event::trusted(a, 1), jbwcond::Event::trusted(b, 2)});
}

inline double matdiff(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

}  // namespace testutil

#endif  // JBWCOND_TESTS_HELPERS_HPP_
