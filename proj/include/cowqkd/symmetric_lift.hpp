// Copyright 2026 The cowqkd Authors
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

#ifndef COWQKD_SYMMETRIC_LIFT_HPP
#define COWQKD_SYMMETRIC_LIFT_HPP

// The n-photon lift f(A) of a d x d matrix: the action of a mode
// transformation on the symmetric subspace, written in the basis of lines
// of weight n. For a unitary u, f(u)(k, l) is the amplitude <l| U |k> of
// the number state |k> sent through u.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cowqkd/combinatorics.hpp"

namespace cowqkd {

namespace detail {

template <typename Scalar>
Scalar integer_power(const Scalar& x, int e) {
  Scalar r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

/// sqrt(prod_i multinom(k_i; m_i.) * prod_j multinom(l_j; m_.j))
inline double lift_weight(const Square& m, const Line& k, const Line& l) {
  double w = 1.0;
  for (int i = 0; i < m.d; ++i) {
    const Line r = m.row(i);
    const Line c = m.col(i);
    w *= static_cast<double>(multinomial(k[i], r.parts));
    w *= static_cast<double>(multinomial(l[i], c.parts));
  }
  return std::sqrt(w);
}

}  // namespace detail

/// f(A) of size N x N, N = C(n + d - 1, d - 1), with rows and columns in the
/// order of enumerate_lines(n, d).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
symmetric_lift(const Eigen::MatrixBase<Derived>& a, int n) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw std::invalid_argument("lift needs a square matrix");
  if (n < 0) throw std::invalid_argument("negative photon number");
  const int d = static_cast<int>(a.rows());
  const std::vector<Line> lines = enumerate_lines(n, d);
  const Eigen::Index big_n = static_cast<Eigen::Index>(lines.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> f(big_n, big_n);
  for (Eigen::Index r = 0; r < big_n; ++r) {
    for (Eigen::Index c = 0; c < big_n; ++c) {
      const Line& k = lines[r];
      const Line& l = lines[c];
      Scalar sum(0);
      for (const Square& m : enumerate_squares(k, l)) {
        Scalar term(detail::lift_weight(m, k, l));
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            term *= detail::integer_power(Scalar(a(i, j)), m(i, j));
        sum += term;
      }
      f(r, c) = sum;
    }
  }
  return f;
}

/// sum_l |f(A)(k, l)|^2, by direct summation.
template <typename Derived>
double moment0(const Eigen::MatrixBase<Derived>& a, const Line& k) {
  const auto f = symmetric_lift(a, k.weight());
  return f.row(static_cast<Eigen::Index>(line_index(k))).squaredNorm();
}

/// sum_l l_j |f(A)(k, l)|^2, by direct summation.
template <typename Derived>
double moment1(const Eigen::MatrixBase<Derived>& a, const Line& k, int j) {
  const int n = k.weight();
  const auto f = symmetric_lift(a, n);
  const auto lines = enumerate_lines(n, static_cast<int>(a.rows()));
  const Eigen::Index r = static_cast<Eigen::Index>(line_index(k));
  double s = 0.0;
  for (std::size_t c = 0; c < lines.size(); ++c) {
    s += lines[c][j] * std::norm(std::complex<double>(f(r, static_cast<Eigen::Index>(c))));
  }
  return s;
}

/// prod_i (sum_j |a_ij|^2)^{k_i}. Equals moment0 when A A^dagger is diagonal.
template <typename Derived>
double moment0_closed_form(const Eigen::MatrixBase<Derived>& a, const Line& k) {
  double r = 1.0;
  for (int i = 0; i < k.dim(); ++i) {
    r *= std::pow(a.row(i).squaredNorm(), k[i]);
  }
  return r;
}

/// moment0 * sum_i k_i |a_ij|^2 / sum_j' |a_ij'|^2. Equals moment1 when
/// A A^dagger is diagonal.
template <typename Derived>
double moment1_closed_form(const Eigen::MatrixBase<Derived>& a, const Line& k,
                           int j) {
  double w = 0.0;
  for (int i = 0; i < k.dim(); ++i) {
    const double row = a.row(i).squaredNorm();
    if (k[i] > 0 && row > 0) w += k[i] * std::norm(std::complex<double>(a(i, j))) / row;
  }
  return moment0_closed_form(a, k) * w;
}

}  // namespace cowqkd

#endif  // COWQKD_SYMMETRIC_LIFT_HPP
