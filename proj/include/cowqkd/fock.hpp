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

#ifndef COWQKD_FOCK_HPP
#define COWQKD_FOCK_HPP

// Brute-force truncated Fock-space simulator for multimode linear optics.
//
// States are stored sparsely as a map from photon-number occupations to
// complex amplitudes. All unitary operations act on creation operators,
// so they conserve the photon number of every occupation exactly; the
// truncation n_max therefore only matters when a state is prepared.
//
// Mode-transformation convention (used everywhere in this library): for a
// d x d unitary u, the creation operator of input mode i is replaced by
//   a_i^dagger -> sum_j u(i, j) a_j^dagger,
// i.e. row i of u lists the output amplitudes of input mode i. A coherent
// state with amplitudes g is mapped to the coherent state u^T g.

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cowqkd {

using Complex = std::complex<double>;

/// Photon counts per mode.
struct OccupationVector {
  std::vector<int> counts;

  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> c);

  int modes() const { return static_cast<int>(counts.size()); }
  int total() const;

  friend auto operator<=>(const OccupationVector&,
                          const OccupationVector&) = default;
};

/// Raised when a coherent state cannot be represented within the requested
/// photon-number cutoff to the requested accuracy.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FockState {
 public:
  using Map = std::map<OccupationVector, Complex>;

  FockState(int mode_count, int n_max);

  static FockState vacuum(int mode_count, int n_max);
  /// Normalized number state |k_0, ..., k_{d-1}>.
  static FockState number_state(const OccupationVector& k, int n_max);

  int mode_count() const { return mode_count_; }
  int n_max() const { return n_max_; }
  const Map& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }

  Complex amplitude(const OccupationVector& k) const;
  /// Adds `value` to the amplitude of `k`.
  void add(const OccupationVector& k, Complex value);

  double squared_norm() const;
  /// <this|other>.
  Complex inner(const FockState& other) const;
  /// Probability distribution of the total photon number.
  std::vector<double> photon_number_distribution() const;

 private:
  int mode_count_;
  int n_max_;
  Map amplitudes_;
};

/// Product coherent state prod_i |g_i>, truncated at total photon number
/// n_max. Throws TruncationError when 1 - norm^2 exceeds max_deficit.
FockState coherent_state(std::span<const Complex> amplitudes, int n_max,
                         double max_deficit = 1e-8);

/// Applies the unitary `u` to the listed modes (others untouched).
FockState apply_unitary(const FockState& state, std::span<const int> modes,
                        const Eigen::MatrixXcd& u);

FockState apply_beamsplitter(const FockState& state, int i, int j,
                             const Eigen::Matrix2cd& u);

/// perm[i] is the new label of mode i.
FockState apply_mode_permutation(const FockState& state,
                                 std::span<const int> perm);

/// The balanced beam splitter H = [[1, 1], [1, -1]] / sqrt(2).
Eigen::Matrix2cd hadamard_splitter();

/// Bob's receiver on the nine detector modes d0..d8, built gate by gate:
/// basis-choice splitters, first interferometer splitters, the delay
/// (a cyclic shift of the delayed monitoring line), second interferometer
/// splitters.
FockState receiver_circuit(const FockState& state);

/// Threshold-detector click statistics. Entry `pattern` (bit j set when
/// mode j clicks) holds the probability of that pattern.
std::vector<double> threshold_click_distribution(const FockState& state);

/// Squashing comparison for the number state |k> sent through u.
/// `first`: keep one photon at random, then detect it.
/// `second`: detect all photons with number resolution and announce
/// output j with probability l_j / n.
std::pair<std::vector<double>, std::vector<double>> situation_probs(
    const OccupationVector& k, const Eigen::MatrixXcd& u);

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& rng);

bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-12);

}  // namespace cowqkd

#endif  // COWQKD_FOCK_HPP
