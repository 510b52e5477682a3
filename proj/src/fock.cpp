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

#include "cowqkd/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cowqkd {
namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_mode(const FockState& s, int mode) {
  if (mode < 0 || mode >= s.mode_count()) {
    throw std::out_of_range("mode index " + std::to_string(mode) +
                            " outside 0.." +
                            std::to_string(s.mode_count() - 1));
  }
}

// Expansion of prod_a (sum_b u(a,b) c_b^dagger)^{k_a} |0> / sqrt(prod k_a!)
// into normalized output number states.
using Expansion = std::vector<std::pair<std::vector<int>, Complex>>;

Expansion expand_creation_monomial(const std::vector<int>& k,
                                   const Eigen::MatrixXcd& u) {
  const int m = static_cast<int>(k.size());
  std::map<std::vector<int>, Complex> poly;
  poly.emplace(std::vector<int>(m, 0), Complex(1.0));
  for (int a = 0; a < m; ++a) {
    for (int rep = 0; rep < k[a]; ++rep) {
      std::map<std::vector<int>, Complex> next;
      for (const auto& [mono, coef] : poly) {
        for (int b = 0; b < m; ++b) {
          if (u(a, b) == Complex(0.0)) continue;
          std::vector<int> raised = mono;
          ++raised[b];
          next[raised] += coef * u(a, b);
        }
      }
      poly = std::move(next);
    }
  }
  double in_norm = 1.0;
  for (int ka : k) in_norm *= factorial(ka);
  Expansion out;
  out.reserve(poly.size());
  for (const auto& [mono, coef] : poly) {
    double out_norm = 1.0;
    for (int lb : mono) out_norm *= factorial(lb);
    out.emplace_back(mono, coef * std::sqrt(out_norm / in_norm));
  }
  return out;
}

}  // namespace

OccupationVector::OccupationVector(std::vector<int> c) : counts(std::move(c)) {
  for (int v : counts) {
    if (v < 0) throw std::invalid_argument("negative photon count");
  }
}

int OccupationVector::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

FockState::FockState(int mode_count, int n_max)
    : mode_count_(mode_count), n_max_(n_max) {
  if (mode_count <= 0) throw std::invalid_argument("mode count must be > 0");
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
}

FockState FockState::vacuum(int mode_count, int n_max) {
  FockState s(mode_count, n_max);
  s.add(OccupationVector(std::vector<int>(mode_count, 0)), 1.0);
  return s;
}

FockState FockState::number_state(const OccupationVector& k, int n_max) {
  FockState s(k.modes(), n_max);
  s.add(k, 1.0);
  return s;
}

Complex FockState::amplitude(const OccupationVector& k) const {
  auto it = amplitudes_.find(k);
  return it == amplitudes_.end() ? Complex(0.0) : it->second;
}

void FockState::add(const OccupationVector& k, Complex value) {
  if (k.modes() != mode_count_) {
    throw std::invalid_argument("occupation has wrong number of modes");
  }
  if (k.total() > n_max_) {
    throw std::invalid_argument("occupation exceeds the photon cutoff");
  }
  amplitudes_[k] += value;
}

double FockState::squared_norm() const {
  double s = 0.0;
  for (const auto& [k, a] : amplitudes_) s += std::norm(a);
  return s;
}

Complex FockState::inner(const FockState& other) const {
  Complex s = 0.0;
  for (const auto& [k, a] : amplitudes_) {
    s += std::conj(a) * other.amplitude(k);
  }
  return s;
}

std::vector<double> FockState::photon_number_distribution() const {
  std::vector<double> p(n_max_ + 1, 0.0);
  for (const auto& [k, a] : amplitudes_) p[k.total()] += std::norm(a);
  return p;
}

FockState coherent_state(std::span<const Complex> amplitudes, int n_max,
                         double max_deficit) {
  const int d = static_cast<int>(amplitudes.size());
  FockState state(d, n_max);
  double prefactor = 1.0;
  for (const Complex& g : amplitudes) prefactor *= std::exp(-std::norm(g) / 2);

  // Only modes with non-zero amplitude can be populated.
  std::vector<int> lit;
  for (int i = 0; i < d; ++i) {
    if (amplitudes[i] != Complex(0.0)) lit.push_back(i);
  }
  std::vector<int> counts(d, 0);
  auto recurse = [&](auto&& self, std::size_t pos, int budget,
                     Complex amp) -> void {
    if (pos == lit.size()) {
      state.add(OccupationVector(counts), prefactor * amp);
      return;
    }
    const int mode = lit[pos];
    Complex term = 1.0;
    for (int n = 0; n <= budget; ++n) {
      counts[mode] = n;
      self(self, pos + 1, budget - n, amp * term);
      term *= amplitudes[mode] / std::sqrt(static_cast<double>(n + 1));
    }
    counts[mode] = 0;
  };
  recurse(recurse, 0, n_max, Complex(1.0));

  const double deficit = 1.0 - state.squared_norm();
  if (deficit > max_deficit) {
    throw TruncationError("coherent state truncated at n_max=" +
                          std::to_string(n_max) + " loses norm " +
                          std::to_string(deficit));
  }
  return state;
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

FockState apply_unitary(const FockState& state, std::span<const int> modes,
                        const Eigen::MatrixXcd& u) {
  const int m = static_cast<int>(modes.size());
  if (u.rows() != m || u.cols() != m) {
    throw std::invalid_argument("unitary size does not match mode list");
  }
  if (!is_unitary(u)) throw std::invalid_argument("matrix is not unitary");
  std::vector<int> seen(modes.begin(), modes.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("repeated mode in unitary application");
  }
  for (int mode : modes) check_mode(state, mode);

  FockState out(state.mode_count(), state.n_max());
  std::map<std::vector<int>, Expansion> cache;
  for (const auto& [k, amp] : state.amplitudes()) {
    std::vector<int> local(m);
    for (int a = 0; a < m; ++a) local[a] = k.counts[modes[a]];
    auto it = cache.find(local);
    if (it == cache.end()) {
      it = cache.emplace(local, expand_creation_monomial(local, u)).first;
    }
    for (const auto& [lm, coef] : it->second) {
      OccupationVector target = k;
      for (int b = 0; b < m; ++b) target.counts[modes[b]] = lm[b];
      out.add(target, amp * coef);
    }
  }
  return out;
}

FockState apply_beamsplitter(const FockState& state, int i, int j,
                             const Eigen::Matrix2cd& u) {
  if (i == j) throw std::invalid_argument("beam splitter needs two modes");
  const int modes[2] = {i, j};
  return apply_unitary(state, modes, Eigen::MatrixXcd(u));
}

FockState apply_mode_permutation(const FockState& state,
                                 std::span<const int> perm) {
  const int d = state.mode_count();
  if (static_cast<int>(perm.size()) != d) {
    throw std::invalid_argument("permutation has wrong length");
  }
  std::vector<bool> hit(d, false);
  for (int p : perm) {
    if (p < 0 || p >= d || hit[p]) {
      throw std::invalid_argument("not a permutation of the modes");
    }
    hit[p] = true;
  }
  FockState out(d, state.n_max());
  for (const auto& [k, amp] : state.amplitudes()) {
    std::vector<int> moved(d);
    for (int i = 0; i < d; ++i) moved[perm[i]] = k.counts[i];
    out.add(OccupationVector(std::move(moved)), amp);
  }
  return out;
}

Eigen::Matrix2cd hadamard_splitter() {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

FockState receiver_circuit(const FockState& state) {
  if (state.mode_count() != 9) {
    throw std::invalid_argument("receiver circuit acts on 9 modes");
  }
  const Eigen::Matrix2cd h = hadamard_splitter();
  FockState s = state;
  // Passive basis choice: direct line a0 against the empty port b0.
  for (int t = 0; t < 3; ++t) s = apply_beamsplitter(s, 3 * t, 3 * t + 1, h);
  // First interferometer splitter: b0 against the empty port b1.
  for (int t = 0; t < 3; ++t) {
    s = apply_beamsplitter(s, 3 * t + 1, 3 * t + 2, h);
  }
  // Delay on b0: c0 -> c1 -> c2 -> c0.
  const int delay[9] = {0, 4, 2, 3, 7, 5, 6, 1, 8};
  s = apply_mode_permutation(s, delay);
  for (int t = 0; t < 3; ++t) {
    s = apply_beamsplitter(s, 3 * t + 1, 3 * t + 2, h);
  }
  return s;
}

std::vector<double> threshold_click_distribution(const FockState& state) {
  const int d = state.mode_count();
  if (d > 24) throw std::invalid_argument("too many modes for click table");
  std::vector<double> p(std::size_t{1} << d, 0.0);
  for (const auto& [k, amp] : state.amplitudes()) {
    std::size_t pattern = 0;
    for (int j = 0; j < d; ++j) {
      if (k.counts[j] > 0) pattern |= std::size_t{1} << j;
    }
    p[pattern] += std::norm(amp);
  }
  return p;
}

std::pair<std::vector<double>, std::vector<double>> situation_probs(
    const OccupationVector& k, const Eigen::MatrixXcd& u) {
  const int d = k.modes();
  const int n = k.total();
  if (n == 0) throw std::invalid_argument("no photon to squash");
  if (u.rows() != d || !is_unitary(u)) {
    throw std::invalid_argument("situation_probs needs a d x d unitary");
  }
  std::vector<double> first(d, 0.0);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      first[j] += static_cast<double>(k.counts[i]) / n * std::norm(u(i, j));
    }
  }

  std::vector<int> all(d);
  std::iota(all.begin(), all.end(), 0);
  const FockState out = apply_unitary(FockState::number_state(k, n), all, u);
  std::vector<double> second(d, 0.0);
  for (const auto& [l, amp] : out.amplitudes()) {
    const double p = std::norm(amp);
    for (int j = 0; j < d; ++j) {
      second[j] += static_cast<double>(l.counts[j]) / n * p;
    }
  }
  return {first, second};
}

Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so that Q is Haar distributed.
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace cowqkd
