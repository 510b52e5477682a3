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

#include "cowqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cowqkd {
namespace {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat projector(int d, int i) {
  Mat p = Mat::Zero(d, d);
  p(i, i) = 1.0;
  return p;
}

// Alice-side |+><+| or |-><-| on the key subspace {|0>, |1>}.
Mat key_diagonal(int d, double sign) {
  Mat p = Mat::Zero(d, d);
  p(0, 0) = p(1, 1) = 0.5;
  p(0, 1) = p(1, 0) = 0.5 * sign;
  return p;
}

// Qubit block (Bob in {|0>, |1>}) and no-click block of a joint operator.
struct Split {
  CMat qubit;
  CMat none;
};

Split split_blocks(const CMat& op, int d_a) {
  Split s{CMat::Zero(2 * d_a, 2 * d_a), CMat::Zero(d_a, d_a)};
  double cross = 0.0;
  for (int a = 0; a < d_a; ++a) {
    for (int a2 = 0; a2 < d_a; ++a2) {
      for (int b = 0; b < 2; ++b) {
        for (int b2 = 0; b2 < 2; ++b2) {
          s.qubit(a * 2 + b, a2 * 2 + b2) = op(a * 3 + b, a2 * 3 + b2);
        }
        cross = std::max({cross, std::abs(op(a * 3 + b, a2 * 3 + 2)),
                          std::abs(op(a * 3 + 2, a2 * 3 + b))});
      }
      s.none(a, a2) = op(a * 3 + 2, a2 * 3 + 2);
    }
  }
  if (cross > 0.0) {
    throw std::invalid_argument("operator couples the qubit and no-click blocks");
  }
  return s;
}

bool key_state_phase_row(const Constraint& c) {
  return (c.state == 0 || c.state == 1) && c.basis == Basis::X &&
         (c.outcome == Outcome::zero || c.outcome == Outcome::one);
}

double total_click(const ConstraintSet& cs) {
  if (cs.click_mass.size() != cs.probs.size()) return 1.0;
  double c = 0.0;
  for (std::size_t i = 0; i < cs.probs.size(); ++i) c += cs.probs[i] * cs.click_mass[i];
  return c > 0.0 ? c : 1.0;
}

std::array<double, 2> margins(const Constraint& k, double g) {
  if (k.vacuum_margin) return *k.vacuum_margin;
  return {g - k.lower, g - k.upper};
}

Eigen::VectorXd scalar_row(int count, double s_coef) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(count);
  v(0) = s_coef;
  return v;
}

bool is_null(const Constraint& k) { return k.op.cwiseAbs().maxCoeff() == 0.0; }

bool two_sided(const Constraint& k) { return !is_null(k) && k.lower != k.upper; }

// Operators are POVM pieces, so Tr(sigma op) >= 0 already holds.
bool upper_only(const Constraint& k) {
  return two_sided(k) && k.lower <= 0.0 && !k.vacuum_margin;
}

int slack_count(const Constraint& k) {
  if (!two_sided(k)) return 0;
  return upper_only(k) ? 1 : 2;
}

int scalar_count(const ConstraintSet& cs) {
  int n = 1;
  for (const Constraint& k : cs.constraints) n += slack_count(k);
  return n;
}

// blocks . X + s * s_lower lies in [0, s * width], written with two slack
// scalars t, r >= 0:  blocks . X + s * s_lower - t = 0,  s * width - t - r = 0.
// With one slack only the upper side is kept.
void add_slab(SdpProblem& p, std::vector<CMat> blocks, double s_lower, double width,
              int slacks, const std::string& label, int& next) {
  const int count = p.scalar_count();
  SdpRow row;
  row.blocks = std::move(blocks);
  row.scalars = scalar_row(count, s_lower);
  row.label = label;
  if (slacks == 0) {
    p.add_row(std::move(row));
    return;
  }
  if (slacks == 1) {
    row.scalars(0) = s_lower - width;
    row.scalars(next++) = 1.0;
    p.add_row(std::move(row));
    return;
  }
  const int t = next++;
  const int r = next++;
  row.scalars(t) = -1.0;
  p.add_row(std::move(row));
  SdpRow cap;
  cap.scalars = scalar_row(count, width);
  cap.scalars(t) = -1.0;
  cap.scalars(r) = -1.0;
  cap.label = label + " width";
  p.add_row(std::move(cap));
}

Mat positive_sqrt(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-14 * std::max(1.0, ev.maxCoeff())) {
    throw SecurityError("source Gram matrix is singular");
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

double lower_phase_detection(const ConstraintSet& cs) {
  double v = 0.0;
  for (const Constraint& k : cs.constraints) if (key_state_phase_row(k)) v += k.lower;
  return v;
}

double upper_phase_detection(const ConstraintSet& cs) {
  double v = 0.0;
  for (const Constraint& k : cs.constraints) if (key_state_phase_row(k)) v += k.upper;
  return v;
}

// Bound on sum_b Tr(block_b) + s for a formulation, from s <= s_max.
double trace_bound(const ConstraintSet& cs, Formulation f, double d_hat) {
  const double lower_d = lower_phase_detection(cs);
  if (!(lower_d > 0.0)) return kInf;
  const double s_max = d_hat / lower_d;
  // Slack pairs sum to s times the width of their slab.
  double widths = 0.0;
  for (const Constraint& k : cs.constraints) if (two_sided(k)) widths += k.upper - k.lower;
  if (f == Formulation::direct) return s_max * (2.0 + widths);
  // Tr(sigma_qubit restricted to state i) <= s * margin / w for every
  // no-click row of state i with weight w on |i><i| (x) |none><none|.
  const int d_a = cs.d_a();
  std::vector<double> qmass(cs.probs.begin(), cs.probs.end());
  for (const Constraint& k : cs.constraints) {
    if (k.outcome != Outcome::none) continue;
    const double w = k.op(k.state * 3 + 2, k.state * 3 + 2);
    if (w <= 0.0) continue;
    const double g = w * cs.source.rho_a(k.state, k.state);
    qmass[k.state] = std::min(qmass[k.state], margins(k, g)[0] / w);
  }
  double q = 0.0;
  for (double v : qmass) q += std::max(v, 0.0);
  return s_max * (1.0 + (q + widths) / total_click(cs) + d_a);
}

}  // namespace

double coherent_overlap(const std::array<double, 2>& gamma,
                        const std::array<double, 2>& delta) {
  double e = 0.0;
  for (int t = 0; t < 2; ++t) {
    const double diff = gamma[t] - delta[t];
    e += diff * diff;
  }
  return std::exp(-0.5 * e);
}

SourceState gram_matrix(const ProtocolConfig& config) {
  config.validate();
  const int d = config.state_count();
  SourceState s;
  s.rho_a.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      s.rho_a(i, j) = std::sqrt(config.probs[i] * config.probs[j]) *
                      coherent_overlap(config.bin_amplitudes(j),
                                       config.bin_amplitudes(i));
    }
  }
  return s;
}

BobOperators bob_operators() {
  BobOperators ops;
  for (auto& row : ops.pi)
    for (auto& m : row) m.setZero();
  auto& z = ops.pi[static_cast<int>(Basis::Z)];
  auto& x = ops.pi[static_cast<int>(Basis::X)];
  z[0](0, 0) = 0.5;
  z[1](1, 1) = 0.5;
  z[2](2, 2) = 0.5;
  x[0] << 1, 1, 0, 1, 1, 0, 0, 0, 0;
  x[0] /= 8.0;
  x[1] << 1, -1, 0, -1, 1, 0, 0, 0, 0;
  x[1] /= 8.0;
  x[2](2, 2) = 0.5;
  x[3](0, 0) = 0.25;
  x[3](1, 1) = 0.25;
  return ops;
}

Mat alice_projector_times(int d_a, int i, const Eigen::Matrix3d& pi_b) {
  return kron(projector(d_a, i), Mat(pi_b));
}

CMat lift_alice(const CMat& a_op) {
  return kron(a_op, CMat(CMat::Identity(kBobDim, kBobDim)));
}

JointOperators joint_operators(int d_a) {
  if (d_a < 3) throw std::invalid_argument("Alice register needs dimension >= 3");
  const BobOperators b = bob_operators();
  const Mat z0 = b(Basis::Z, Outcome::zero);
  const Mat z1 = b(Basis::Z, Outcome::one);
  const Mat x0 = b(Basis::X, Outcome::zero);
  const Mat x1 = b(Basis::X, Outcome::one);
  const Mat p0 = projector(d_a, 0);
  const Mat p1 = projector(d_a, 1);
  const Mat p2 = projector(d_a, 2);
  const Mat plus = key_diagonal(d_a, 1.0);
  const Mat minus = key_diagonal(d_a, -1.0);
  JointOperators j;
  j.det_z = kron(Mat(p0 + p1), Mat(z0 + z1));
  j.det_x = kron(p2, Mat(x0 + x1));
  j.det_phase = kron(Mat(plus + minus), Mat(x0 + x1));
  j.err_z = kron(p0, z1) + kron(p1, z0);
  j.err_x = kron(p2, x1);
  j.err_phase = kron(plus, x1) + kron(minus, x0);
  return j;
}

ConstraintSet assemble_constraints(const SquashedBounds& bounds,
                                   const SourceState& source,
                                   const ProtocolConfig& config) {
  const int d_a = source.dim();
  if (bounds.state_count() != d_a || config.state_count() != d_a ||
      static_cast<int>(config.probs.size()) != d_a) {
    throw std::invalid_argument("state count mismatch between bounds, source and config");
  }
  ConstraintSet cs;
  cs.source = source;
  cs.probs = config.probs;
  cs.joint = joint_operators(d_a);
  if (static_cast<int>(bounds.click_mass.size()) == d_a) cs.click_mass = bounds.click_mass;

  // Marginal: Hermitian basis of Alice operators.
  const CMat rho = source.rho_a.cast<std::complex<double>>();
  auto add_marginal = [&](const CMat& b) {
    cs.marginal_ops.push_back(lift_alice(b));
    cs.marginal_targets.push_back((b * rho).trace().real());
  };
  for (int a = 0; a < d_a; ++a) {
    CMat b = CMat::Zero(d_a, d_a);
    b(a, a) = 1.0;
    add_marginal(b);
  }
  for (int a = 0; a < d_a; ++a) {
    for (int a2 = a + 1; a2 < d_a; ++a2) {
      CMat re = CMat::Zero(d_a, d_a);
      re(a, a2) = re(a2, a) = 0.5;
      add_marginal(re);
      CMat im = CMat::Zero(d_a, d_a);
      im(a, a2) = std::complex<double>(0.0, 0.5);
      im(a2, a) = std::complex<double>(0.0, -0.5);
      add_marginal(im);
    }
  }

  const BobOperators bob = bob_operators();
  for (int i = 0; i < d_a; ++i) {
    const double p = config.probs[i];
    for (Basis basis : {Basis::Z, Basis::X}) {
      for (int oi = 0; oi < kSquashedOutcomes; ++oi) {
        const auto o = static_cast<Outcome>(oi);
        const Interval& iv = bounds.at(i, basis, o);
        Constraint k;
        k.state = i;
        k.basis = basis;
        k.outcome = o;
        k.op = alice_projector_times(d_a, i, bob(basis, o));
        k.lower = p * iv.lower;
        k.upper = p * iv.upper;
        if (o == Outcome::none && !cs.click_mass.empty()) {
          const double m = 0.5 * p * cs.click_mass[i];
          k.vacuum_margin = std::array<double, 2>{m, m};
        }
        k.label = "state " + std::to_string(i) + " " + to_string(basis) + "," +
                  to_string(o);
        cs.constraints.push_back(std::move(k));
      }
    }
  }
  return cs;
}

SdpProblem phase_error_problem(const ConstraintSet& cs, Formulation f,
                               double d_hat) {
  const int d_a = cs.d_a();
  if (f == Formulation::direct) {
    const int n = cs.joint_dim();
    SdpProblem p(std::vector<int>{n}, scalar_count(cs));
    int next = 1;
    p.set_objective(std::vector<CMat>{CMat(cs.joint.err_phase.cast<std::complex<double>>() / d_hat)});
    SdpRow norm;
    norm.blocks = {cs.joint.det_phase.cast<std::complex<double>>()};
    norm.lower = norm.upper = d_hat;
    norm.label = "normalization";
    p.add_row(std::move(norm));
    for (int r = 0; r < cs.marginal_count(); ++r) {
      SdpRow row;
      row.blocks = {cs.marginal_ops[r]};
      row.scalars = scalar_row(p.scalar_count(), -cs.marginal_targets[r]);
      row.label = "marginal " + std::to_string(r);
      p.add_row(std::move(row));
    }
    for (const Constraint& k : cs.constraints) {
      if (is_null(k)) {
        if (k.lower > 0.0 || k.upper < 0.0) {
          throw SecurityError("nonzero bounds on a null operator: " + k.label);
        }
        continue;
      }
      add_slab(p, {k.op.cast<std::complex<double>>()}, -k.lower, k.upper - k.lower,
               slack_count(k), k.label, next);
    }
    return p;
  }

  const int nq = 2 * d_a;
  const double c = total_click(cs);
  const CMat root = positive_sqrt(cs.source.rho_a).cast<std::complex<double>>();
  const CMat id_q = CMat::Identity(2, 2);
  SdpProblem p(std::vector<int>{nq, d_a}, scalar_count(cs));
  int next = 1;

  const Split err = split_blocks(cs.joint.err_phase.cast<std::complex<double>>(), d_a);
  const Split det = split_blocks(cs.joint.det_phase.cast<std::complex<double>>(), d_a);
  p.set_objective(std::vector<CMat>{CMat((c / d_hat) * err.qubit), CMat()});
  SdpRow norm;
  norm.blocks = {det.qubit, CMat()};
  norm.lower = norm.upper = d_hat / c;
  norm.label = "normalization";
  p.add_row(std::move(norm));

  // c Tr_q(Q) + R W R = s rho_A, tested against the Alice basis.
  for (int r = 0; r < cs.marginal_count(); ++r) {
    const CMat& b_alice = split_blocks(cs.marginal_ops[r], d_a).none;
    SdpRow row;
    row.blocks = {CMat(c * kron(b_alice, id_q)), CMat(root * b_alice * root)};
    row.scalars = scalar_row(p.scalar_count(), -cs.marginal_targets[r]);
    row.label = "marginal " + std::to_string(r);
    p.add_row(std::move(row));
  }

  const CMat rho = cs.source.rho_a.cast<std::complex<double>>();
  for (const Constraint& k : cs.constraints) {
    if (is_null(k)) {
      if (k.lower > 0.0 || k.upper < 0.0) {
        throw SecurityError("nonzero bounds on a null operator: " + k.label);
      }
      continue;
    }
    const Split s = split_blocks(k.op.cast<std::complex<double>>(), d_a);
    const CMat m = s.qubit - kron(s.none, id_q);
    const double g = (rho * s.none).trace().real();
    const auto mg = margins(k, g);
    add_slab(p, {m, CMat()}, mg[0] / c, (k.upper - k.lower) / c, slack_count(k),
             k.label, next);
  }
  return p;
}

namespace {

PhaseErrorResult solve_phase_error(const ConstraintSet& cs, double tol, Formulation f,
                                   double d_hat) {
  SdpProblem problem;
  try {
    problem = phase_error_problem(cs, f, d_hat);
  } catch (const SecurityError&) {
    if (f != Formulation::reduced) throw;
    f = Formulation::direct;  // singular Gram matrix
    problem = phase_error_problem(cs, f, d_hat);
  }
  SdpOptions opt;
  opt.tol = tol;
  const SdpSolution sol = solve(problem, opt);
  if (sol.status == SdpStatus::infeasible) {
    throw SecurityError("constraints admit no state: " + sol.message);
  }
  PhaseErrorResult r;
  r.status = sol.status;
  r.iterations = sol.iterations;
  r.primal_value = sol.primal_value;
  r.dual_value = sol.dual_value;
  r.duality_gap = sol.gap;
  r.primal_residual = sol.primal_residual;
  r.dual_residual = sol.dual_residual;
  r.trace_bound = trace_bound(cs, f, d_hat);
  double certified = sol.dual_value;
  if (sol.dual_residual > 0.0) certified += sol.dual_residual * r.trace_bound;
  if (std::isnan(certified)) certified = 1.0;
  // Pi_e,phase <= Pi_det,phase, so the ratio never exceeds one.
  r.e_phase_certified = std::clamp(certified, 0.0, 1.0);
  return r;
}

}  // namespace

PhaseErrorResult max_phase_error(const ConstraintSet& cs, double tol,
                                 Formulation f) {
  const double upper_d = upper_phase_detection(cs);
  if (!(upper_d >= 1e-12)) {
    throw SecurityError("no conclusive phase statistics");
  }
  const double lower_d = std::max(lower_phase_detection(cs), 0.0);
  const double d_hat = 0.5 * (lower_d + upper_d);
  PhaseErrorResult r = solve_phase_error(cs, tol, f, d_hat);
  if (r.status == SdpStatus::optimal || f == Formulation::direct) return r;
  // Nearly dependent prepared states can stall the reduced form; both
  // forms bound the same quantity.
  PhaseErrorResult d = solve_phase_error(cs, tol, Formulation::direct, d_hat);
  if (d.status == SdpStatus::optimal || d.e_phase_certified < r.e_phase_certified) return d;
  return r;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double key_rate_formula(double p_det_z, double e_z, double e_phase) {
  const double ez = std::clamp(e_z, 0.0, 0.5);
  const double ep = std::clamp(e_phase, 0.0, 0.5);
  return std::max(0.0, p_det_z * (1.0 - binary_entropy(ez) - binary_entropy(ep)));
}

double plob_bound(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("eta must lie in (0, 1]");
  return -std::log1p(-eta) / std::numbers::ln2;
}

KeyRateResult key_rate(const ProtocolConfig& config, double tol, ErrorMode mode,
                       Formulation f) {
  config.validate();
  const StatTable stats = expected_statistics(config);
  const SquashedBounds sb = squash_bounds(stats);
  const ConstraintSet cs = assemble_constraints(sb, gram_matrix(config), config);
  const PhaseErrorResult pe = max_phase_error(cs, tol, f);

  const double p0 = config.probs[0];
  const double p1 = config.probs[1];
  const auto& z00 = sb.at(0, Basis::Z, Outcome::zero);
  const auto& z01 = sb.at(0, Basis::Z, Outcome::one);
  const auto& z10 = sb.at(1, Basis::Z, Outcome::zero);
  const auto& z11 = sb.at(1, Basis::Z, Outcome::one);
  KeyRateResult r;
  r.p_det_z_lower = p0 * (z00.lower + z01.lower) + p1 * (z10.lower + z11.lower);
  const double err = mode == ErrorMode::worst_case
                         ? p0 * z01.upper + p1 * z10.upper
                         : p0 * z01.lower + p1 * z10.lower;
  r.e_z = r.p_det_z_lower > 0.0 ? std::clamp(err / r.p_det_z_lower, 0.0, 0.5) : 0.5;
  r.e_phase_certified = pe.e_phase_certified;
  r.duality_gap = pe.duality_gap;
  r.primal_residual = pe.primal_residual;
  r.status = pe.status;
  r.key_rate = key_rate_formula(r.p_det_z_lower, r.e_z, r.e_phase_certified);
  return r;
}

}  // namespace cowqkd
