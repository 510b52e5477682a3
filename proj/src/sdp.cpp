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

#include "cowqkd/sdp.hpp"

#include "sdp_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace cowqkd {
namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_zero(const Eigen::MatrixXcd& m) {
  return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0;
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

// svec with sqrt(2) off-diagonal weight, preserving inner products.
void append_svec(const Mat& a, int n, Vec& out, Eigen::Index& pos) {
  const double r2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      out(pos++) = a.size() == 0 ? 0.0 : (i == j ? a(i, i) : r2 * a(i, j));
    }
  }
}

double min_eigenvalue(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

using StdForm = detail::StdForm<double>;

// ---------------------------------------------------------------------------
// Conversion and presolve

struct BlockInfo {
  int orig_dim = 0;
  bool complex = false;
  Mat basis;  // full internal coordinates x reduced coordinates
};

// Standard-form row -> original row and side.
struct RowOrigin {
  int orig = -1;
  int side = 0;  // 0 equality, -1 lower, +1 upper
};

struct FacialStep {
  int row;                // standard-form row
  std::vector<Mat> op;    // row operator in the coordinates before the step
  std::vector<Mat> basis; // full -> pre-step coordinates
  int sign;               // +1 operator psd, -1 nsd
};

Mat internal_block(const Eigen::MatrixXcd& a, const BlockInfo& info) {
  if (is_zero(a)) return Mat();
  if (info.complex) return 0.5 * hermitian_embed(a, 1e-9);
  return 0.5 * (a.real() + a.real().transpose()).eval();
}

Eigen::MatrixXcd external_block(const Mat& x_full, const BlockInfo& info) {
  const int n = info.orig_dim;
  if (!info.complex) return x_full.cast<std::complex<double>>();
  Eigen::MatrixXcd h(n, n);
  h.real() = 0.5 * (x_full.topLeftCorner(n, n) + x_full.bottomRightCorner(n, n));
  h.imag() = 0.5 * (x_full.bottomLeftCorner(n, n) - x_full.topRightCorner(n, n));
  return h;
}

Mat congruence(const Mat& a, const Mat& v) {
  if (a.size() == 0) return a;
  return sym(v.transpose() * a * v);
}

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iterations: return "max-iterations";
    case SdpStatus::numerical_error: return "numerical-error";
  }
  return "unknown";
}

SdpProblem::SdpProblem(std::vector<int> block_dims, int scalar_count)
    : block_dims_(std::move(block_dims)), scalar_count_(scalar_count) {
  for (int d : block_dims_) {
    if (d <= 0) throw std::invalid_argument("block dimension must be positive");
  }
  if (scalar_count_ < 0) throw std::invalid_argument("negative scalar count");
  objective_.resize(block_dims_.size());
  objective_scalars_ = Eigen::VectorXd::Zero(scalar_count_);
}

SdpProblem::SdpProblem(int dim, int scalar_count)
    : SdpProblem(std::vector<int>{dim}, scalar_count) {}

void SdpProblem::set_objective(const Eigen::MatrixXcd& c) {
  if (block_dims_.empty()) throw std::invalid_argument("problem has no block");
  objective_.assign(block_dims_.size(), Eigen::MatrixXcd());
  objective_[0] = c;
  objective_scalars_ = Eigen::VectorXd::Zero(scalar_count_);
}

void SdpProblem::set_objective(std::vector<Eigen::MatrixXcd> blocks,
                               Eigen::VectorXd scalars) {
  blocks.resize(block_dims_.size());
  objective_ = std::move(blocks);
  objective_scalars_ =
      scalars.size() == 0 ? Eigen::VectorXd::Zero(scalar_count_) : scalars;
}

SdpRow& SdpProblem::add_equality(const Eigen::MatrixXcd& a, double target,
                                 std::string label) {
  return add_inequality(a, target, target, std::move(label));
}

SdpRow& SdpProblem::add_inequality(const Eigen::MatrixXcd& a, double lower,
                                   double upper, std::string label) {
  SdpRow row;
  row.blocks.assign(block_dims_.size(), Eigen::MatrixXcd());
  if (block_dims_.empty()) throw std::invalid_argument("problem has no block");
  row.blocks[0] = a;
  row.lower = lower;
  row.upper = upper;
  row.label = std::move(label);
  return add_row(std::move(row));
}

SdpRow& SdpProblem::add_row(SdpRow row) {
  row.blocks.resize(block_dims_.size());
  rows_.push_back(std::move(row));
  return rows_.back();
}

void SdpProblem::validate() const {
  auto check_block = [&](const Eigen::MatrixXcd& a, int bk, const std::string& what) {
    if (a.size() == 0) return;
    const int n = block_dims_[bk];
    if (a.rows() != n || a.cols() != n) {
      throw std::invalid_argument(what + ": block size mismatch");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::invalid_argument(what + ": matrix is not Hermitian");
    }
  };
  if (objective_.size() != block_dims_.size()) {
    throw std::invalid_argument("objective block count mismatch");
  }
  for (int bk = 0; bk < block_count(); ++bk) check_block(objective_[bk], bk, "objective");
  if (objective_scalars_.size() != scalar_count_) {
    throw std::invalid_argument("objective scalar count mismatch");
  }
  for (const SdpRow& r : rows_) {
    const std::string what = r.label.empty() ? "row" : r.label;
    if (r.blocks.size() != block_dims_.size()) {
      throw std::invalid_argument(what + ": block count mismatch");
    }
    for (int bk = 0; bk < block_count(); ++bk) check_block(r.blocks[bk], bk, what);
    if (r.scalars.size() != 0 && r.scalars.size() != scalar_count_) {
      throw std::invalid_argument(what + ": scalar count mismatch");
    }
    if (std::isnan(r.lower) || std::isnan(r.upper) || r.lower > r.upper) {
      throw std::invalid_argument(what + ": lower bound exceeds upper bound");
    }
    if (r.lower == kInf || r.upper == -kInf) {
      throw std::invalid_argument(what + ": empty interval");
    }
  }
}

double primal_violation(const SdpProblem& problem,
                        const std::vector<Eigen::MatrixXcd>& blocks,
                        const Eigen::VectorXd& scalars) {
  double worst = 0.0;
  for (const SdpRow& r : problem.rows()) {
    double v = 0.0;
    for (int bk = 0; bk < problem.block_count(); ++bk) {
      if (!is_zero(r.blocks[bk])) {
        v += (r.blocks[bk].cwiseProduct(blocks[bk].transpose())).sum().real();
      }
    }
    if (r.scalars.size() != 0) v += r.scalars.dot(scalars);
    worst = std::max({worst, r.lower - v, v - r.upper});
  }
  for (Eigen::Index k = 0; k < scalars.size(); ++k) worst = std::max(worst, -scalars(k));
  return worst;
}

namespace {

// Lagrangian bound with the dual slack of each block tested on a face: the
// columns of faces[bk] span it in the internal real coordinates (the
// Hermitian embedding for complex blocks). An empty face means the full block.
DualBound bound_on_face(const SdpProblem& problem, const Eigen::VectorXd& y_in,
                        const std::vector<BlockInfo>* faces) {
  Eigen::VectorXd y = y_in;
  double value = 0.0;
  for (int i = 0; i < problem.row_count(); ++i) {
    const SdpRow& r = problem.rows()[i];
    if (y(i) > 0.0) {
      if (r.upper == kInf) y(i) = 0.0;
      else value += y(i) * r.upper;
    } else if (y(i) < 0.0) {
      if (r.lower == -kInf) y(i) = 0.0;
      else value += y(i) * r.lower;
    }
  }
  double residual = 0.0;
  for (int bk = 0; bk < problem.block_count(); ++bk) {
    const int n = problem.block_dims()[bk];
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    if (!is_zero(problem.objective()[bk])) s -= problem.objective()[bk];
    for (int i = 0; i < problem.row_count(); ++i) {
      const auto& a = problem.rows()[i].blocks[bk];
      if (!is_zero(a) && y(i) != 0.0) s += y(i) * a;
    }
    if (faces == nullptr) {
      residual = std::max(residual, -min_eigenvalue(s));
      continue;
    }
    const BlockInfo& f = (*faces)[bk];
    if (f.basis.cols() == 0) continue;
    const Eigen::MatrixXcd herm = 0.5 * (s + s.adjoint());
    const Mat s_int = f.complex ? hermitian_embed(herm, 1.0) : Mat(herm.real());
    residual = std::max(residual, -min_eigenvalue(Mat(f.basis.transpose() * s_int * f.basis)));
  }
  for (int k = 0; k < problem.scalar_count(); ++k) {
    double s = -problem.objective_scalars()(k);
    for (int i = 0; i < problem.row_count(); ++i) {
      const auto& a = problem.rows()[i].scalars;
      if (a.size() != 0) s += y(i) * a(k);
    }
    residual = std::max(residual, -s);
  }
  return {value, residual};
}

}  // namespace

DualBound lagrangian_bound(const SdpProblem& problem, const Eigen::VectorXd& y) {
  return bound_on_face(problem, y, nullptr);
}

SdpSolution solve(const SdpProblem& problem, double tol) {
  SdpOptions opt;
  opt.tol = tol;
  return solve(problem, opt);
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  problem.validate();
  const int nb = problem.block_count();
  const int ns = problem.scalar_count();
  const int nrow = problem.row_count();

  // Block layout: real blocks stay real, complex ones are embedded.
  std::vector<BlockInfo> info(nb);
  for (int bk = 0; bk < nb; ++bk) {
    info[bk].orig_dim = problem.block_dims()[bk];
    auto has_imag = [](const Eigen::MatrixXcd& a) {
      return a.size() != 0 && a.imag().cwiseAbs().maxCoeff() > 0.0;
    };
    bool cplx = has_imag(problem.objective()[bk]);
    for (const SdpRow& r : problem.rows()) cplx = cplx || has_imag(r.blocks[bk]);
    info[bk].complex = cplx;
    const int full = cplx ? 2 * info[bk].orig_dim : info[bk].orig_dim;
    info[bk].basis = Mat::Identity(full, full);
  }

  // Standard form with slack variables for one-sided bounds.
  std::vector<RowOrigin> origin;
  for (int i = 0; i < nrow; ++i) {
    const SdpRow& r = problem.rows()[i];
    if (r.is_equality()) {
      origin.push_back({i, 0});
      continue;
    }
    if (r.lower != -kInf) origin.push_back({i, -1});
    if (r.upper != kInf) origin.push_back({i, +1});
  }
  int slack_count = 0;
  for (const RowOrigin& o : origin) slack_count += o.side != 0;
  StdForm sf;
  for (int bk = 0; bk < nb; ++bk) sf.dims.push_back(static_cast<int>(info[bk].basis.rows()));
  const int nlp = ns + slack_count;
  sf.c_lp = Vec::Zero(nlp);
  if (ns > 0) sf.c_lp.head(ns) = -problem.objective_scalars();
  for (int bk = 0; bk < nb; ++bk) {
    Mat c = internal_block(problem.objective()[bk], info[bk]);
    sf.c.push_back(c.size() == 0 ? Mat(Mat::Zero(sf.dims[bk], sf.dims[bk])) : Mat(-c));
  }
  const int m0 = static_cast<int>(origin.size());
  sf.a.resize(m0);
  sf.a_lp = Mat::Zero(m0, nlp);
  sf.b = Vec::Zero(m0);
  {
    int slack = ns;
    for (int s = 0; s < m0; ++s) {
      const SdpRow& r = problem.rows()[origin[s].orig];
      for (int bk = 0; bk < nb; ++bk) sf.a[s].push_back(internal_block(r.blocks[bk], info[bk]));
      if (r.scalars.size() != 0) sf.a_lp.row(s).head(ns) = r.scalars.transpose();
      switch (origin[s].side) {
        case 0: sf.b(s) = r.lower; break;
        case -1: sf.b(s) = r.lower; sf.a_lp(s, slack++) = -1.0; break;
        default: sf.b(s) = r.upper; sf.a_lp(s, slack++) = 1.0; break;
      }
    }
  }
  const StdForm full_form = sf;

  SdpSolution sol;
  std::vector<bool> active(m0, true);
  std::vector<FacialStep> facial;

  auto fail = [&](SdpStatus status, std::string msg) {
    sol.status = status;
    sol.message = std::move(msg);
    return sol;
  };

  if (opt.presolve) {
    // Facial reduction on equality rows <A, X> = 0 with A semidefinite.
    bool changed = true;
    while (changed) {
      changed = false;
      for (int s = 0; s < m0; ++s) {
        if (!active[s] || origin[s].side != 0 || sf.b(s) != 0.0) continue;
        if (nlp > 0 && sf.a_lp.row(s).cwiseAbs().maxCoeff() > 0.0) continue;
        int sign = 0;
        bool definite = true;
        bool any = false;
        for (int bk = 0; bk < nb && definite; ++bk) {
          const Mat& a = sf.a[s][bk];
          if (a.size() == 0 || sf.dims[bk] == 0) continue;
          const double scale = a.cwiseAbs().maxCoeff();
          if (scale == 0.0) continue;
          Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
          const double lo = es.eigenvalues()(0);
          const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
          const double eps = 1e-12 * scale;
          int here = 0;
          if (lo >= -eps) here = +1;
          else if (hi <= eps) here = -1;
          if (here == 0 || (sign != 0 && here != sign)) definite = false;
          sign = here;
          any = true;
        }
        if (!definite) continue;
        if (!any) {  // 0 = 0
          active[s] = false;
          changed = true;
          continue;
        }
        FacialStep step;
        step.row = s;
        step.sign = sign;
        step.op = sf.a[s];
        for (int bk = 0; bk < nb; ++bk) step.basis.push_back(info[bk].basis);
        std::vector<Mat> v(nb);
        for (int bk = 0; bk < nb; ++bk) {
          const Mat& a = sf.a[s][bk];
          if (a.size() == 0 || sf.dims[bk] == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
            v[bk] = Mat::Identity(sf.dims[bk], sf.dims[bk]);
            continue;
          }
          Eigen::SelfAdjointEigenSolver<Mat> es(a);
          const double eps = 1e-12 * a.cwiseAbs().maxCoeff() * sf.dims[bk];
          std::vector<int> keep;
          for (int k = 0; k < sf.dims[bk]; ++k) {
            if (std::abs(es.eigenvalues()(k)) <= eps) keep.push_back(k);
          }
          v[bk] = Mat(sf.dims[bk], keep.size());
          for (std::size_t k = 0; k < keep.size(); ++k) {
            v[bk].col(k) = es.eigenvectors().col(keep[k]);
          }
        }
        for (int bk = 0; bk < nb; ++bk) {
          sf.c[bk] = congruence(sf.c[bk], v[bk]);
          for (int r = 0; r < m0; ++r) sf.a[r][bk] = congruence(sf.a[r][bk], v[bk]);
          info[bk].basis = info[bk].basis * v[bk];
          sf.dims[bk] = static_cast<int>(v[bk].cols());
        }
        facial.push_back(std::move(step));
        active[s] = false;
        changed = true;
      }
    }

    // Dependent rows.
    std::vector<int> act;
    for (int s = 0; s < m0; ++s) if (active[s]) act.push_back(s);
    Eigen::Index vec_len = nlp;
    for (int n : sf.dims) vec_len += n * (n + 1) / 2;
    Mat at(vec_len, act.size());
    for (std::size_t c = 0; c < act.size(); ++c) {
      Vec col(vec_len);
      Eigen::Index pos = 0;
      for (int bk = 0; bk < nb; ++bk) append_svec(sf.a[act[c]][bk], sf.dims[bk], col, pos);
      if (nlp > 0) col.tail(nlp) = sf.a_lp.row(act[c]).transpose();
      at.col(c) = col;
    }
    if (!act.empty()) {
      // Equilibrate before the rank decision.
      Vec norms(act.size());
      for (std::size_t c = 0; c < act.size(); ++c) {
        norms(c) = at.col(c).norm();
        if (norms(c) == 0.0) {
          if (std::abs(sf.b(act[c])) > 1e-12) {
            return fail(SdpStatus::infeasible, "constraint 0 = b with b != 0");
          }
          active[act[c]] = false;
          norms(c) = 1.0;
        }
        at.col(c) /= norms(c);
      }
      Eigen::ColPivHouseholderQR<Mat> qr(at);
      qr.setThreshold(1e-10);
      const Eigen::Index rank = qr.rank();
      const auto& perm = qr.colsPermutation().indices();
      if (rank < static_cast<Eigen::Index>(act.size())) {
        Mat basis_cols(vec_len, rank);
        Vec basis_b(rank);
        for (Eigen::Index k = 0; k < rank; ++k) {
          basis_cols.col(k) = at.col(perm(k));
          basis_b(k) = sf.b(act[perm(k)]) / norms(perm(k));
        }
        Eigen::ColPivHouseholderQR<Mat> sub(basis_cols);
        for (Eigen::Index k = rank; k < static_cast<Eigen::Index>(act.size()); ++k) {
          const int s = act[perm(k)];
          if (!active[s]) continue;
          const Vec w = sub.solve(Vec(at.col(perm(k))));
          const double target = sf.b(s) / norms(perm(k));
          const double implied = w.dot(basis_b);
          const double scale = 1.0 + std::abs(target) + w.cwiseAbs().dot(basis_b.cwiseAbs());
          if (std::abs(target - implied) > 1e-9 * scale) {
            return fail(SdpStatus::infeasible, "inconsistent linear equalities");
          }
          active[s] = false;
        }
      }
    }
  }

  // Reduced problem over the active rows, rows scaled to unit norm.
  StdForm red;
  red.dims = sf.dims;
  std::vector<int> map;
  for (int s = 0; s < m0; ++s) if (active[s]) map.push_back(s);
  const int m = static_cast<int>(map.size());
  red.a.resize(m);
  red.a_lp = Mat::Zero(m, nlp);
  red.b = Vec::Zero(m);
  Vec row_scale(m);
  for (int r = 0; r < m; ++r) {
    const int s = map[r];
    double nrm = nlp > 0 ? sf.a_lp.row(s).squaredNorm() : 0.0;
    for (int bk = 0; bk < nb; ++bk) {
      if (sf.a[s][bk].size() != 0) nrm += sf.a[s][bk].squaredNorm();
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) nrm = 1.0;
    row_scale(r) = nrm;
    for (int bk = 0; bk < nb; ++bk) {
      const Mat& a = sf.a[s][bk];
      red.a[r].push_back(a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0 ? Mat() : Mat(a / nrm));
    }
    if (nlp > 0) red.a_lp.row(r) = sf.a_lp.row(s) / nrm;
    red.b(r) = sf.b(s) / nrm;
  }
  double c_scale = sf.c_lp.squaredNorm();
  for (const Mat& c : sf.c) c_scale += c.squaredNorm();
  c_scale = std::sqrt(c_scale);
  if (c_scale == 0.0) c_scale = 1.0;
  red.c_lp = sf.c_lp / c_scale;
  for (const Mat& c : sf.c) red.c.push_back(c / c_scale);

  // Empty blocks are dropped for the iteration.
  StdForm run;
  std::vector<int> live;
  for (int bk = 0; bk < nb; ++bk) if (red.dims[bk] > 0) live.push_back(bk);
  for (int bk : live) {
    run.dims.push_back(red.dims[bk]);
    run.c.push_back(red.c[bk]);
  }
  run.c_lp = red.c_lp;
  run.a_lp = red.a_lp;
  run.b = red.b;
  run.a.resize(m);
  for (int r = 0; r < m; ++r)
    for (int bk : live) run.a[r].push_back(red.a[r][bk]);

  const detail::IpmResult<double> ipm =
      opt.extended_precision
          ? detail::interior_point(run.cast<long double>(), opt).cast<double>()
          : detail::interior_point(run, opt);
  sol.iterations = ipm.iterations;
  sol.status = ipm.status;
  sol.message = ipm.message;
  if (ipm.status == SdpStatus::infeasible || ipm.status == SdpStatus::unbounded) {
    return sol;
  }
  if (ipm.x.size() != live.size()) return sol;

  // Primal point in original coordinates.
  sol.primal_blocks.resize(nb);
  for (int bk = 0; bk < nb; ++bk) {
    const int n = info[bk].orig_dim;
    sol.primal_blocks[bk] = Eigen::MatrixXcd::Zero(n, n);
  }
  for (std::size_t k = 0; k < live.size(); ++k) {
    const int bk = live[k];
    const Mat full = sym(info[bk].basis * ipm.x[k] * info[bk].basis.transpose());
    sol.primal_blocks[bk] = external_block(full, info[bk]);
  }
  sol.primal_scalars = ns > 0 ? Vec(ipm.x_lp.head(ns)) : Vec();

  // Standard-form multipliers in the unscaled problem.
  Vec y_std = Vec::Zero(m0);
  for (int r = 0; r < m; ++r) y_std(map[r]) = c_scale * ipm.y(r) / row_scale(r);

  // Multipliers of rows removed by facial reduction, innermost first.
  for (auto it = facial.rbegin(); it != facial.rend(); ++it) {
    double t = 0.0;
    for (int bk = 0; bk < nb; ++bk) {
      const Mat& f_pre = it->op[bk];
      if (f_pre.size() == 0 || f_pre.cwiseAbs().maxCoeff() == 0.0) continue;
      const Mat& p = it->basis[bk];
      Mat z_full = full_form.c[bk];
      for (int s = 0; s < m0; ++s) {
        if (y_std(s) != 0.0 && full_form.a[s][bk].size() != 0) {
          z_full -= y_std(s) * full_form.a[s][bk];
        }
      }
      const Mat z = sym(p.transpose() * z_full * p);
      const Mat g = it->sign * f_pre;
      Eigen::SelfAdjointEigenSolver<Mat> es(g);
      const double eps = 1e-12 * g.cwiseAbs().maxCoeff() * g.rows();
      std::vector<int> null_idx, range_idx;
      for (int k = 0; k < g.rows(); ++k) {
        (es.eigenvalues()(k) > eps ? range_idx : null_idx).push_back(k);
      }
      Mat nv(g.rows(), null_idx.size()), uv(g.rows(), range_idx.size());
      Vec lam(range_idx.size());
      for (std::size_t k = 0; k < null_idx.size(); ++k) nv.col(k) = es.eigenvectors().col(null_idx[k]);
      for (std::size_t k = 0; k < range_idx.size(); ++k) {
        uv.col(k) = es.eigenvectors().col(range_idx[k]);
        lam(k) = es.eigenvalues()(range_idx[k]);
      }
      const Mat z_uu = sym(uv.transpose() * z * uv);
      Mat need = -z_uu;
      if (nv.cols() > 0) {
        const Mat z_nn = sym(nv.transpose() * z * nv);
        const Mat z_un = uv.transpose() * z * nv;
        Eigen::SelfAdjointEigenSolver<Mat> en(z_nn);
        const double floor = 1e-13 * std::max(1.0, en.eigenvalues().cwiseAbs().maxCoeff());
        const Vec inv = en.eigenvalues().unaryExpr(
            [&](double v) { return 1.0 / std::max(v, floor); });
        const Mat pinv = en.eigenvectors() * inv.asDiagonal() * en.eigenvectors().transpose();
        need += z_un * pinv * z_un.transpose();
      }
      const Vec li = lam.cwiseSqrt().cwiseInverse();
      const Mat scaled = sym(li.asDiagonal() * need * li.asDiagonal());
      Eigen::SelfAdjointEigenSolver<Mat> ns_es(scaled, Eigen::EigenvaluesOnly);
      const double top = ns_es.eigenvalues().size() ? ns_es.eigenvalues().maxCoeff() : 0.0;
      t = std::max(t, top);
    }
    t = std::max(0.0, t) * (1.0 + 1e-6) + 1e-12;
    // Z + t G with G = sign * A, i.e. y_std = -sign * t.
    y_std(it->row) = -it->sign * t;
  }

  // Original-row multipliers and certificates.
  sol.dual_multipliers = Vec::Zero(nrow);
  for (int s = 0; s < m0; ++s) sol.dual_multipliers(origin[s].orig) -= y_std(s);

  sol.primal_value = 0.0;
  for (int bk = 0; bk < nb; ++bk) {
    if (!is_zero(problem.objective()[bk])) {
      sol.primal_value += problem.objective()[bk]
                              .cwiseProduct(sol.primal_blocks[bk].transpose())
                              .sum()
                              .real();
    }
  }
  if (ns > 0) sol.primal_value += problem.objective_scalars().dot(sol.primal_scalars);
  // Rows removed by facial reduction force the blocks onto a face exactly;
  // the slack is certified there, where their multipliers play no role.
  Vec y_face = sol.dual_multipliers;
  for (const FacialStep& f : facial) y_face(origin[f.row].orig) = 0.0;
  const DualBound db =
      facial.empty() ? lagrangian_bound(problem, sol.dual_multipliers)
                     : bound_on_face(problem, y_face, &info);
  sol.dual_value = db.value;
  sol.dual_residual = db.residual;
  sol.gap = sol.dual_value - sol.primal_value;
  sol.primal_residual =
      primal_violation(problem, sol.primal_blocks, sol.primal_scalars);
  return sol;
}

}  // namespace cowqkd
