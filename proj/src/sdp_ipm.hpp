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

#ifndef COWQKD_SRC_SDP_IPM_HPP
#define COWQKD_SRC_SDP_IPM_HPP

// Primal-dual interior-point core for real symmetric standard form:
//
//   min <C, X> + c_lp . x   s.t.  A_i(X) + a_lp,i . x = b_i,  X psd, x >= 0.
//
// Templated on the scalar so the iteration can run in extended precision.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cowqkd/sdp.hpp"

namespace cowqkd::detail {

template <typename T>
using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
struct StdForm {
  std::vector<int> dims;
  std::vector<MatT<T>> c;
  VecT<T> c_lp;
  std::vector<std::vector<MatT<T>>> a;  // a[row][block], zero-size = zero
  MatT<T> a_lp;                         // rows x lp
  VecT<T> b;

  int rows() const { return static_cast<int>(b.size()); }
  int lp() const { return static_cast<int>(c_lp.size()); }
  int blocks() const { return static_cast<int>(dims.size()); }

  template <typename U>
  StdForm<U> cast() const {
    StdForm<U> out;
    out.dims = dims;
    for (const auto& m : c) out.c.push_back(m.template cast<U>());
    out.c_lp = c_lp.template cast<U>();
    out.a.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (const auto& m : a[i]) out.a[i].push_back(m.template cast<U>());
    out.a_lp = a_lp.template cast<U>();
    out.b = b.template cast<U>();
    return out;
  }
};

template <typename T>
struct IpmResult {
  SdpStatus status = SdpStatus::numerical_error;
  std::vector<MatT<T>> x, z;
  VecT<T> x_lp, z_lp, y;
  int iterations = 0;
  std::string message;

  template <typename U>
  IpmResult<U> cast() const {
    IpmResult<U> out;
    out.status = status;
    for (const auto& m : x) out.x.push_back(m.template cast<U>());
    for (const auto& m : z) out.z.push_back(m.template cast<U>());
    out.x_lp = x_lp.template cast<U>();
    out.z_lp = z_lp.template cast<U>();
    out.y = y.template cast<U>();
    out.iterations = iterations;
    out.message = message;
    return out;
  }
};

template <typename T>
T frob_dot(const MatT<T>& a, const MatT<T>& b) {
  return a.cwiseProduct(b).sum();
}

template <typename T>
MatT<T> sym(const MatT<T>& m) {
  return T(0.5) * (m + m.transpose());
}

template <typename T>
T min_eigenvalue(const MatT<T>& m) {
  if (m.rows() == 0) return T(0);
  Eigen::SelfAdjointEigenSolver<MatT<T>> es(sym<T>(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// svec with sqrt(2) off-diagonal weight, preserving inner products.
template <typename T>
void append_svec(const MatT<T>& a, int n, VecT<T>& out, Eigen::Index& pos) {
  const T r2 = std::sqrt(T(2));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      out(pos++) = a.size() == 0 ? T(0) : (i == j ? a(i, i) : r2 * a(i, j));
    }
  }
}

template <typename T>
VecT<T> apply_a(const StdForm<T>& p, const std::vector<MatT<T>>& x,
                const VecT<T>& x_lp) {
  VecT<T> r(p.rows());
  for (int i = 0; i < p.rows(); ++i) {
    T s = p.lp() > 0 ? T(p.a_lp.row(i).dot(x_lp)) : T(0);
    for (int bk = 0; bk < p.blocks(); ++bk) {
      if (p.a[i][bk].size() != 0) s += frob_dot<T>(p.a[i][bk], x[bk]);
    }
    r(i) = s;
  }
  return r;
}

template <typename T>
MatT<T> apply_at(const StdForm<T>& p, const VecT<T>& y, int bk) {
  MatT<T> s = MatT<T>::Zero(p.dims[bk], p.dims[bk]);
  for (int i = 0; i < p.rows(); ++i) {
    if (p.a[i][bk].size() != 0 && y(i) != T(0)) s += y(i) * p.a[i][bk];
  }
  return s;
}

// Largest step keeping chol-factored X + a * dX psd.
template <typename T>
T max_step(const Eigen::LLT<MatT<T>>& chol, const MatT<T>& d) {
  const MatT<T> l_inv_d = chol.matrixL().solve(MatT<T>(chol.matrixL().solve(d).transpose()));
  const T lam = min_eigenvalue<T>(l_inv_d);
  return lam < 0 ? T(-1) / lam : std::numeric_limits<T>::infinity();
}

template <typename T>
T max_step_lp(const VecT<T>& x, const VecT<T>& dx) {
  T a = std::numeric_limits<T>::infinity();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (dx(k) < 0) a = std::min(a, -x(k) / dx(k));
  }
  return a;
}

template <typename T>
struct Scaling {
  MatT<T> g, g_inv, w;
  VecT<T> d;
  Eigen::LLT<MatT<T>> chol_x, chol_z;
};

// Nesterov-Todd scaling W = G G^T with G^T Z G = G^{-1} X G^{-T} = diag(d).
template <typename T>
bool nt_scaling(const MatT<T>& x, const MatT<T>& z, Scaling<T>& s) {
  s.chol_x.compute(x);
  s.chol_z.compute(z);
  if (s.chol_x.info() != Eigen::Success || s.chol_z.info() != Eigen::Success) {
    return false;
  }
  const MatT<T> l = s.chol_x.matrixL();
  const MatT<T> r = s.chol_z.matrixL();
  Eigen::JacobiSVD<MatT<T>> svd(MatT<T>(r.transpose() * l),
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.d = svd.singularValues();
  if (s.d.minCoeff() <= T(0)) return false;
  const VecT<T> inv_sqrt = s.d.cwiseSqrt().cwiseInverse();
  s.g = l * svd.matrixV() * inv_sqrt.asDiagonal();
  const MatT<T> l_inv =
      s.chol_x.matrixL().solve(MatT<T>(MatT<T>::Identity(x.rows(), x.rows())));
  s.g_inv = s.d.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * l_inv;
  s.w = s.g * s.g.transpose();
  return true;
}

template <typename T>
IpmResult<T> interior_point(const StdForm<T>& p, const SdpOptions& opt) {
  using Mat = MatT<T>;
  using Vec = VecT<T>;
  const T inf = std::numeric_limits<T>::infinity();
  const T tol = T(opt.tol);

  IpmResult<T> res;
  const int m = p.rows();
  const int nb = p.blocks();
  const int nlp = p.lp();
  T nu = T(nlp);
  for (int n : p.dims) nu += T(n);

  T norm_c = p.c_lp.squaredNorm();
  for (const Mat& c : p.c) norm_c += c.squaredNorm();
  norm_c = std::sqrt(norm_c);
  const T norm_b = p.b.norm();

  // Starting point.
  res.x.resize(nb);
  res.z.resize(nb);
  for (int bk = 0; bk < nb; ++bk) {
    const int n = p.dims[bk];
    T xi = std::max(T(10), std::sqrt(T(n)));
    T zeta = std::max({T(10), std::sqrt(T(n)), T(p.c[bk].norm())});
    for (int i = 0; i < m; ++i) {
      if (p.a[i][bk].size() == 0) continue;
      const T an = p.a[i][bk].norm();
      xi = std::max(xi, T(n) * (T(1) + std::abs(p.b(i))) / (T(1) + an));
      zeta = std::max(zeta, an);
    }
    res.x[bk] = xi * Mat::Identity(n, n);
    res.z[bk] = zeta * Mat::Identity(n, n);
  }
  {
    T xi = std::max(T(10), std::sqrt(T(nlp)));
    T zeta = std::max({T(10), std::sqrt(T(nlp)), T(p.c_lp.norm())});
    for (int i = 0; i < m && nlp > 0; ++i) {
      const T an = p.a_lp.row(i).norm();
      xi = std::max(xi, std::sqrt(T(nlp)) * (T(1) + std::abs(p.b(i))) / (T(1) + an));
      zeta = std::max(zeta, an);
    }
    res.x_lp = Vec::Constant(nlp, xi);
    res.z_lp = Vec::Constant(nlp, zeta);
  }
  res.y = Vec::Zero(m);

  std::vector<std::vector<bool>> nonzero(m, std::vector<bool>(nb, false));
  for (int i = 0; i < m; ++i)
    for (int bk = 0; bk < nb; ++bk) nonzero[i][bk] = p.a[i][bk].size() != 0;

  // Gram matrix of the rows, used to put directions back on A dX = r_p.
  Mat gram = nlp > 0 ? Mat(p.a_lp * p.a_lp.transpose()) : Mat(Mat::Zero(m, m));
  for (int bk = 0; bk < nb; ++bk)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j)
        if (nonzero[i][bk] && nonzero[j][bk]) {
          const T v = frob_dot<T>(p.a[i][bk], p.a[j][bk]);
          gram(i, j) += v;
          if (i != j) gram(j, i) += v;
        }
  const Eigen::LDLT<Mat> gram_ldlt(gram);

  std::vector<Scaling<T>> sc(nb);
  std::vector<Mat> rd(nb);
  int stalled = 0;
  constexpr double kStep = 0.99;

  // Best iterate with both sides positive definite, restored when the
  // iteration breaks down.
  IpmResult<T> best;
  T best_merit = inf;
  auto finish = [&](SdpStatus status, std::string message) {
    if (best_merit < inf) {
      const int it = res.iterations;
      res = best;
      res.iterations = it;
    }
    res.status = best_merit <= tol ? SdpStatus::optimal : status;
    res.message = best_merit <= tol ? "converged" : std::move(message);
    return res;
  };

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    res.iterations = iter;
    const Vec rp = p.b - apply_a(p, res.x, res.x_lp);
    T rd_norm = 0;
    T pobj = nlp > 0 ? T(p.c_lp.dot(res.x_lp)) : T(0);
    T xz = nlp > 0 ? T(res.x_lp.dot(res.z_lp)) : T(0);
    for (int bk = 0; bk < nb; ++bk) {
      rd[bk] = p.c[bk] - apply_at(p, res.y, bk) - res.z[bk];
      rd_norm += rd[bk].squaredNorm();
      pobj += frob_dot<T>(p.c[bk], res.x[bk]);
      xz += frob_dot<T>(res.x[bk], res.z[bk]);
    }
    const Vec rd_lp =
        nlp > 0 ? Vec(p.c_lp - p.a_lp.transpose() * res.y - res.z_lp) : Vec();
    rd_norm = std::sqrt(rd_norm + rd_lp.squaredNorm());
    const T dobj = p.b.dot(res.y);
    const T mu = nu > 0 ? xz / nu : T(0);

    const T pinf = rp.norm() / (T(1) + norm_b);
    const T dinf = rd_norm / (T(1) + norm_c);
    const T relgap = std::abs(pobj - dobj) / (T(1) + std::abs(pobj) + std::abs(dobj));
    if (opt.verbose) {
      std::fprintf(stderr,
                   "%3d pobj %+.12e dobj %+.12e pinf %.2e dinf %.2e gap %.2e mu %.2e\n",
                   iter, double(pobj), double(dobj), double(pinf), double(dinf),
                   double(relgap), double(mu));
    }
    if (pinf < tol && dinf < tol && relgap < tol) {
      res.status = SdpStatus::optimal;
      res.message = "converged";
      return res;
    }
    // Certificates of infeasibility: a diverging dual (primal infeasible)
    // or primal ray (dual infeasible).
    if (dobj > 0) {
      T aty_z = 0;
      for (int bk = 0; bk < nb; ++bk) aty_z += (p.c[bk] - rd[bk]).squaredNorm();
      if (nlp > 0) aty_z += (p.c_lp - rd_lp).squaredNorm();
      if (std::sqrt(aty_z) < T(1e-8) * dobj && pinf > tol) {
        res.status = SdpStatus::infeasible;
        res.message = "dual ray certifies primal infeasibility";
        return res;
      }
    }
    if (pobj < 0 && (p.b - rp).norm() < T(1e-8) * -pobj && dinf > tol) {
      res.status = SdpStatus::unbounded;
      res.message = "primal ray certifies dual infeasibility";
      return res;
    }
    if (iter == opt.max_iterations) break;

    bool scaled = true;
    for (int bk = 0; bk < nb && scaled; ++bk) scaled = nt_scaling<T>(res.x[bk], res.z[bk], sc[bk]);
    if (scaled && nlp > 0) scaled = res.x_lp.minCoeff() > 0 && res.z_lp.minCoeff() > 0;
    if (!scaled) return finish(SdpStatus::numerical_error, "lost positive definiteness");
    if (const T merit = std::max({pinf, dinf, relgap}); merit < best_merit) {
      best_merit = merit;
      best = res;
    }

    // Schur complement M = B^T B with column i of B holding svec(G^T A_i G)
    // and the scaled LP coefficients; factored through QR of B.
    Eigen::Index b_rows = nlp;
    for (int n : p.dims) b_rows += n * (n + 1) / 2;
    Mat b_mat = Mat::Zero(b_rows, m);
    Vec ratio;
    if (nlp > 0) ratio = res.x_lp.cwiseQuotient(res.z_lp);
    for (int i = 0; i < m; ++i) {
      Vec col(b_rows);
      Eigen::Index pos = 0;
      for (int bk = 0; bk < nb; ++bk) {
        if (!nonzero[i][bk]) {
          const int n = p.dims[bk];
          col.segment(pos, n * (n + 1) / 2).setZero();
          pos += n * (n + 1) / 2;
          continue;
        }
        append_svec<T>(sym<T>(sc[bk].g.transpose() * p.a[i][bk] * sc[bk].g), p.dims[bk],
                       col, pos);
      }
      if (nlp > 0) col.tail(nlp) = p.a_lp.row(i).transpose().cwiseProduct(ratio.cwiseSqrt());
      b_mat.col(i) = col;
    }
    if (b_rows < m) return finish(SdpStatus::numerical_error, "singular Schur complement");
    Eigen::HouseholderQR<Mat> qr(b_mat);
    Mat r_fac = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
    {
      const T top = r_fac.diagonal().cwiseAbs().maxCoeff();
      const T floor = T(100) * std::numeric_limits<T>::epsilon() * top;
      for (int i = 0; i < m; ++i) {
        if (std::abs(r_fac(i, i)) < floor) r_fac(i, i) = floor;
      }
    }
    auto schur_solve = [&](const Vec& v) {
      const Vec w = r_fac.transpose().template triangularView<Eigen::Lower>().solve(v);
      return Vec(r_fac.template triangularView<Eigen::Upper>().solve(w));
    };
    auto schur_apply = [&](const Vec& v) { return Vec(b_mat.transpose() * (b_mat * v)); };

    struct Direction {
      std::vector<Mat> dx, dz;
      Vec dx_lp, dz_lp, dy;
    };
    // rc: scaled complementarity residual per block; t_lp for the LP part.
    auto direction = [&](const std::vector<Mat>& rc, const Vec& t_lp, bool project) {
      Direction d;
      d.dx.resize(nb);
      d.dz.resize(nb);
      std::vector<Mat> k(nb);
      std::vector<Mat> rhs_mat(nb);
      for (int bk = 0; bk < nb; ++bk) {
        const Vec& dd = sc[bk].d;
        const int n = p.dims[bk];
        Mat t(n, n);
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) t(a, c) = T(2) * rc[bk](a, c) / (dd(a) + dd(c));
        k[bk] = sc[bk].g * t * sc[bk].g.transpose();
        rhs_mat[bk] = k[bk] - sc[bk].w * rd[bk] * sc[bk].w;
      }
      const Vec rhs =
          rp - apply_a(p, rhs_mat, nlp > 0 ? Vec(t_lp - ratio.cwiseProduct(rd_lp)) : Vec());
      d.dy = schur_solve(rhs);
      for (int pass = 0; pass < 2; ++pass) d.dy += schur_solve(Vec(rhs - schur_apply(d.dy)));
      for (int bk = 0; bk < nb; ++bk) {
        d.dz[bk] = sym<T>(rd[bk] - apply_at(p, d.dy, bk));
        d.dx[bk] = sym<T>(k[bk] - sc[bk].w * d.dz[bk] * sc[bk].w);
      }
      if (nlp > 0) {
        d.dz_lp = rd_lp - p.a_lp.transpose() * d.dy;
        d.dx_lp = t_lp - ratio.cwiseProduct(d.dz_lp);
      }
      // Refinement of the full Newton system: M dy' = r_p - A dX.
      T last = inf;
      for (int pass = 0; pass < 3; ++pass) {
        const Vec miss = rp - apply_a(p, d.dx, d.dx_lp);
        const T size = miss.norm();
        if (!(size < T(0.5) * last) || size <= std::numeric_limits<T>::epsilon() * (T(1) + norm_b)) break;
        last = size;
        Vec dy2 = schur_solve(miss);
        dy2 += schur_solve(Vec(miss - schur_apply(dy2)));
        d.dy += dy2;
        for (int bk = 0; bk < nb; ++bk) {
          const Mat at = apply_at(p, dy2, bk);
          d.dz[bk] -= at;
          d.dx[bk] += sym<T>(sc[bk].w * at * sc[bk].w);
        }
        if (nlp > 0) {
          const Vec at = p.a_lp.transpose() * dy2;
          d.dz_lp -= at;
          d.dx_lp += ratio.cwiseProduct(at);
        }
      }
      if (project && gram_ldlt.info() == Eigen::Success) {
        const Vec miss = rp - apply_a(p, d.dx, d.dx_lp);
        if (miss.allFinite()) {
          const Vec w = gram_ldlt.solve(miss);
          for (int bk = 0; bk < nb; ++bk) d.dx[bk] += apply_at(p, w, bk);
          if (nlp > 0) d.dx_lp += p.a_lp.transpose() * w;
        }
      }
      return d;
    };
    auto step_lengths = [&](const Direction& d) {
      T ap = inf;
      T ad = inf;
      for (int bk = 0; bk < nb; ++bk) {
        ap = std::min(ap, max_step<T>(sc[bk].chol_x, d.dx[bk]));
        ad = std::min(ad, max_step<T>(sc[bk].chol_z, d.dz[bk]));
      }
      if (nlp > 0) {
        ap = std::min(ap, max_step_lp<T>(res.x_lp, d.dx_lp));
        ad = std::min(ad, max_step_lp<T>(res.z_lp, d.dz_lp));
      }
      return std::pair{ap, ad};
    };

    // Predictor.
    std::vector<Mat> rc(nb);
    for (int bk = 0; bk < nb; ++bk) {
      rc[bk] = Mat(Vec(-sc[bk].d.cwiseAbs2()).asDiagonal());
    }
    Vec t_lp = nlp > 0 ? Vec(-res.x_lp) : Vec();
    const Direction aff = direction(rc, t_lp, true);
    auto [ap_aff, ad_aff] = step_lengths(aff);
    ap_aff = std::min(T(1), ap_aff);
    ad_aff = std::min(T(1), ad_aff);
    T xz_aff = 0;
    for (int bk = 0; bk < nb; ++bk) {
      xz_aff += frob_dot<T>(Mat(res.x[bk] + ap_aff * aff.dx[bk]),
                            Mat(res.z[bk] + ad_aff * aff.dz[bk]));
    }
    if (nlp > 0) {
      xz_aff += (res.x_lp + ap_aff * aff.dx_lp).dot(res.z_lp + ad_aff * aff.dz_lp);
    }
    const T sigma =
        mu > 0 ? std::clamp(T(std::pow(std::max(xz_aff / nu, T(0)) / mu, 3)), T(0), T(1))
               : T(0);

    // Corrector.
    for (int bk = 0; bk < nb; ++bk) {
      const Mat dxt = sc[bk].g_inv * aff.dx[bk] * sc[bk].g_inv.transpose();
      const Mat dzt = sc[bk].g.transpose() * aff.dz[bk] * sc[bk].g;
      const int n = p.dims[bk];
      rc[bk] = sigma * mu * Mat::Identity(n, n) - Mat(sc[bk].d.cwiseAbs2().asDiagonal()) -
               sym<T>(dxt * dzt);
    }
    if (nlp > 0) {
      t_lp = ((sigma * mu - res.x_lp.cwiseProduct(res.z_lp).array()) -
              aff.dx_lp.cwiseProduct(aff.dz_lp).array())
                 .matrix()
                 .cwiseQuotient(res.z_lp);
    }
    // Primal infeasibility a step of length a along d would leave behind.
    auto leaves_feasible = [&](const Direction& d, T a) {
      const T miss = (rp - apply_a(p, d.dx, d.dx_lp)).norm() / (T(1) + norm_b);
      return std::min(a, T(1)) * miss <= T(0.1) * std::max(pinf, tol);
    };
    // The projected direction meets A dX = r_p to rounding but can run into
    // the cone boundary; keep the plain one when that costs most of the step
    // and its solve is accurate enough.
    Direction dir = direction(rc, t_lp, true);
    auto [ap, ad] = step_lengths(dir);
    if (ap < T(0.5)) {
      Direction plain = direction(rc, t_lp, false);
      const auto [ap2, ad2] = step_lengths(plain);
      if (ap2 > T(2) * ap && leaves_feasible(plain, ap2)) {
        dir = std::move(plain);
        ap = ap2;
        ad = ad2;
      }
    }
    // Short corrector step: try a more centred direction without the
    // second-order term.
    if (std::min(ap, ad) < T(0.3)) {
      const T sc_sigma = std::max(sigma, T(0.5));
      std::vector<Mat> rc2(nb);
      for (int bk = 0; bk < nb; ++bk) {
        const int n = p.dims[bk];
        rc2[bk] = sc_sigma * mu * Mat::Identity(n, n) - Mat(sc[bk].d.cwiseAbs2().asDiagonal());
      }
      Vec t2 = nlp > 0 ? Vec(((sc_sigma * mu - res.x_lp.cwiseProduct(res.z_lp).array()))
                                 .matrix()
                                 .cwiseQuotient(res.z_lp))
                       : Vec();
      Direction cen = direction(rc2, t2, true);
      auto [ap3, ad3] = step_lengths(cen);
      if (ap3 < T(0.5)) {
        Direction plain = direction(rc2, t2, false);
        const auto [ap4, ad4] = step_lengths(plain);
        if (ap4 > T(2) * ap3 && leaves_feasible(plain, ap4)) {
          cen = std::move(plain);
          ap3 = ap4;
          ad3 = ad4;
        }
      }
      if (std::min(ap3, ad3) > T(1.5) * std::min(ap, ad)) {
        dir = std::move(cen);
        ap = ap3;
        ad = ad3;
      }
    }
    const T gamma = std::min(T(kStep), T(0.9) + T(0.09) * std::min(ap, ad));
    ap = std::min(T(1), gamma * ap);
    ad = std::min(T(1), gamma * ad);
    if (opt.verbose) {
      std::fprintf(stderr, "    sigma %.2e ap %.2e ad %.2e\n", double(sigma), double(ap),
                   double(ad));
    }

    for (int bk = 0; bk < nb; ++bk) {
      res.x[bk] = sym<T>(res.x[bk] + ap * dir.dx[bk]);
      res.z[bk] = sym<T>(res.z[bk] + ad * dir.dz[bk]);
    }
    if (nlp > 0) {
      res.x_lp += ap * dir.dx_lp;
      res.z_lp += ad * dir.dz_lp;
    }
    res.y += ad * dir.dy;

    stalled = (ap < T(1e-10) && ad < T(1e-10)) ? stalled + 1 : 0;
    if (stalled >= 3) return finish(SdpStatus::numerical_error, "step length collapsed");
  }
  return finish(SdpStatus::max_iterations, "iteration limit reached");
}

}  // namespace cowqkd::detail

#endif  // COWQKD_SRC_SDP_IPM_HPP
