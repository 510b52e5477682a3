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

#ifndef COWQKD_SECURITY_HPP
#define COWQKD_SECURITY_HPP

// Phase-error bound of the virtual qubit protocol and the resulting key rate.
//
// Joint space: Alice's register (dimension d_A = number of prepared states)
// times Bob's qutrit {|0>, |1>, |none>}. Index a * 3 + b.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cowqkd/receiver.hpp"
#include "cowqkd/sdp.hpp"
#include "cowqkd/squashing.hpp"

namespace cowqkd {

constexpr int kBobDim = 3;

struct SourceState {
  /// rho_A(i, j) = sqrt(p_i p_j) <phi_j | phi_i>.
  Eigen::MatrixXd rho_a;
  int dim() const { return static_cast<int>(rho_a.rows()); }
};

/// <gamma | delta> for products of real coherent amplitudes.
double coherent_overlap(const std::array<double, 2>& gamma,
                        const std::array<double, 2>& delta);

SourceState gram_matrix(const ProtocolConfig& config);

struct BobOperators {
  /// pi[basis][outcome] for outcome in {zero, one, none, inconclusive}.
  std::array<std::array<Eigen::Matrix3d, kSquashedOutcomes>, kBases> pi;
  const Eigen::Matrix3d& operator()(Basis b, Outcome o) const {
    return pi[static_cast<int>(b)][static_cast<int>(o)];
  }
};

BobOperators bob_operators();

/// Error and detection operators on the joint space of an Alice register of
/// dimension d_a (d_a >= 3; the phase operators live on |0>, |1>).
struct JointOperators {
  Eigen::MatrixXd det_z, det_x, det_phase;
  Eigen::MatrixXd err_z, err_x, err_phase;
};

JointOperators joint_operators(int d_a);

/// |i><i|_A (x) pi_B.
Eigen::MatrixXd alice_projector_times(int d_a, int i, const Eigen::Matrix3d& pi_b);

/// Alice-side operator (x) identity on Bob.
Eigen::MatrixXcd lift_alice(const Eigen::MatrixXcd& a_op);

struct Constraint {
  int state = 0;
  Basis basis = Basis::Z;
  Outcome outcome = Outcome::zero;
  Eigen::MatrixXd op;
  /// Bounds on Tr(rho_AB op): p_i times the squashed interval.
  double lower = 0.0;
  double upper = 0.0;
  /// Tr(rho_A op_none) - lower and - upper, evaluated without cancellation,
  /// where op_none is the no-click block of op. Present on no-click rows.
  std::optional<std::array<double, 2>> vacuum_margin;
  std::string label;
};

struct ConstraintSet {
  SourceState source;
  std::vector<double> probs;
  /// Two-sided constraints, one per prepared state and (basis, outcome).
  std::vector<Constraint> constraints;
  /// Hermitian basis B_r (x) I_B of Alice-side operators and the targets
  /// Re Tr(B_r rho_A); together they fix Tr_B(rho_AB) = rho_A.
  std::vector<Eigen::MatrixXcd> marginal_ops;
  std::vector<double> marginal_targets;
  JointOperators joint;
  /// Total click probability per prepared state (used for scaling only).
  std::vector<double> click_mass;

  int d_a() const { return source.dim(); }
  int joint_dim() const { return d_a() * kBobDim; }
  int marginal_count() const { return static_cast<int>(marginal_ops.size()); }
};

/// The marginal equalities and, for every prepared state and
/// (basis, outcome), |i><i| (x) pi_B with bounds p_i [q_low, q_up].
ConstraintSet assemble_constraints(const SquashedBounds& bounds,
                                   const SourceState& source,
                                   const ProtocolConfig& config);

enum class Formulation {
  /// One block on the full joint space.
  direct,
  /// Qubit and no-click blocks separated, the no-click block expressed
  /// through the marginal and both rescaled to unit size.
  reduced
};

/// Raised when the constraints admit no state or carry no phase statistics.
class SecurityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhaseErrorResult {
  /// Dual bound plus the residual correction; an upper bound on e_phase.
  double e_phase_certified = 1.0;
  double primal_value = 0.0;
  double dual_value = 1.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// Bound on the total trace of the SDP variables used for the correction.
  double trace_bound = 0.0;
  SdpStatus status = SdpStatus::numerical_error;
  int iterations = 0;
};

/// Builds the homogenized problem (Charnes-Cooper) for a formulation.
/// `d_hat` is the fixed value of Tr(sigma Pi_det,phase).
SdpProblem phase_error_problem(const ConstraintSet& cs, Formulation f,
                               double d_hat);

/// Maximizes Tr(rho Pi_e,phase) / Tr(rho Pi_det,phase) over states matching
/// the constraint set. Throws SecurityError on infeasibility or when the
/// denominator cannot be positive.
PhaseErrorResult max_phase_error(const ConstraintSet& cs, double tol = 1e-8,
                                 Formulation f = Formulation::reduced);

double binary_entropy(double p);

enum class ErrorMode {
  /// Upper error mass over lower detection mass.
  worst_case,
  /// Single-click error mass over single-click detection mass.
  expected
};

struct KeyRateResult {
  double e_phase_certified = 1.0;
  double e_z = 0.5;
  double p_det_z_lower = 0.0;
  double key_rate = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  SdpStatus status = SdpStatus::numerical_error;
};

/// Key rate for one configuration: statistics, squashing, SDP.
KeyRateResult key_rate(const ProtocolConfig& config, double tol = 1e-8,
                       ErrorMode mode = ErrorMode::worst_case,
                       Formulation f = Formulation::reduced);

/// max(0, p_det (1 - h(e_z) - h(e_phase))) with both rates clamped to 1/2.
double key_rate_formula(double p_det_z, double e_z, double e_phase);

/// Repeaterless bound -log2(1 - eta).
double plob_bound(double eta);

}  // namespace cowqkd

#endif  // COWQKD_SECURITY_HPP
