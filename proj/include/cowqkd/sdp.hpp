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

#ifndef COWQKD_SDP_HPP
#define COWQKD_SDP_HPP

// Small dense semidefinite programs over Hermitian blocks and nonnegative
// scalars:
//
//   maximize    sum_b Re Tr(C_b H_b) + c . s
//   subject to  lower_i <= sum_b Re Tr(A_ib H_b) + a_i . s <= upper_i
//               H_b Hermitian PSD, s >= 0.
//
// Solved by a primal-dual path-following method with Nesterov-Todd scaling
// on the real symmetric form of the problem.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cowqkd {

/// [[Re H, -Im H], [Im H, Re H]]. Throws on non-Hermitian input.
template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, Eigen::Dynamic>
hermitian_embed(const Eigen::MatrixBase<Derived>& h,
                typename Derived::RealScalar tol = 1e-12) {
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols()) throw std::invalid_argument("embed needs a square matrix");
  const Real scale = std::max<Real>(Real(1), h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("embed needs a Hermitian matrix");
  }
  const Eigen::Index n = h.rows();
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.bottomRightCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  return e;
}

enum class SdpStatus {
  optimal,
  infeasible,
  unbounded,
  max_iterations,
  numerical_error
};

const char* to_string(SdpStatus s);

/// One linear constraint. An empty block matrix or an empty scalar vector
/// stands for zero. lower == upper makes an equality; infinite bounds drop
/// that side.
struct SdpRow {
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::VectorXd scalars;
  double lower = 0.0;
  double upper = 0.0;
  std::string label;

  bool is_equality() const { return lower == upper; }
};

class SdpProblem {
 public:
  SdpProblem() = default;
  SdpProblem(std::vector<int> block_dims, int scalar_count);
  /// One Hermitian block of size `dim` plus `scalar_count` scalars.
  explicit SdpProblem(int dim, int scalar_count = 0);

  const std::vector<int>& block_dims() const { return block_dims_; }
  int block_count() const { return static_cast<int>(block_dims_.size()); }
  int scalar_count() const { return scalar_count_; }

  /// Objective on the first block.
  void set_objective(const Eigen::MatrixXcd& c);
  void set_objective(std::vector<Eigen::MatrixXcd> blocks,
                     Eigen::VectorXd scalars = {});
  const std::vector<Eigen::MatrixXcd>& objective() const { return objective_; }
  const Eigen::VectorXd& objective_scalars() const { return objective_scalars_; }

  /// Tr(A H_0) = target on the first block.
  SdpRow& add_equality(const Eigen::MatrixXcd& a, double target,
                       std::string label = {});
  /// lower <= Tr(A H_0) <= upper on the first block.
  SdpRow& add_inequality(const Eigen::MatrixXcd& a, double lower, double upper,
                         std::string label = {});
  SdpRow& add_row(SdpRow row);

  const std::vector<SdpRow>& rows() const { return rows_; }
  int row_count() const { return static_cast<int>(rows_.size()); }

  /// Throws std::invalid_argument on a malformed problem.
  void validate() const;

 private:
  std::vector<int> block_dims_;
  int scalar_count_ = 0;
  std::vector<Eigen::MatrixXcd> objective_;
  Eigen::VectorXd objective_scalars_;
  std::vector<SdpRow> rows_;
};

struct SdpOptions {
  /// Relative tolerance on infeasibilities and on the duality gap.
  double tol = 1e-8;
  int max_iterations = 150;
  bool presolve = true;
  /// Run the interior-point iteration in long double.
  bool extended_precision = true;
  /// Per-iteration log on stderr.
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_error;
  double primal_value = std::numeric_limits<double>::quiet_NaN();
  /// Lagrangian bound from dual_multipliers; an upper bound on the maximum
  /// whenever dual_residual is zero.
  double dual_value = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  /// Largest violation of a row of the original problem by the primal point.
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  /// max(0, -lambda_min) of the dual slack sum_i y_i A_i - C over all blocks
  /// and scalars. Adding dual_residual * (bound on sum_b Tr H_b + sum s) to
  /// dual_value gives a rigorous bound. When presolve restricts a block to a
  /// face (rows Tr(A H) = 0 with A semidefinite), the slack is tested on that
  /// face only, so it can be smaller than lagrangian_bound(dual_multipliers).
  double dual_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<Eigen::MatrixXcd> primal_blocks;
  Eigen::VectorXd primal_scalars;
  /// One multiplier per original row; positive on an active upper bound.
  Eigen::VectorXd dual_multipliers;
  int iterations = 0;
  std::string message;

  bool ok() const { return status == SdpStatus::optimal; }
  /// dual_value + dual_residual * trace_bound.
  double certified_bound(double trace_bound) const {
    return dual_value + dual_residual * trace_bound;
  }
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});
SdpSolution solve(const SdpProblem& problem, double tol);

/// Lagrangian upper bound and dual residual for arbitrary multipliers.
/// Multipliers whose sign points at an infinite bound are clamped to zero.
struct DualBound {
  double value;
  double residual;
};
DualBound lagrangian_bound(const SdpProblem& problem, const Eigen::VectorXd& y);

/// Largest violation of the rows of `problem` by the given point.
double primal_violation(const SdpProblem& problem,
                        const std::vector<Eigen::MatrixXcd>& blocks,
                        const Eigen::VectorXd& scalars);

}  // namespace cowqkd

#endif  // COWQKD_SDP_HPP
