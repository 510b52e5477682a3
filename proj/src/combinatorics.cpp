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

#include "cowqkd/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cowqkd {
namespace {

void lines_rec(int remaining, int pos, std::vector<int>& cur,
               std::vector<Line>& out) {
  const int d = static_cast<int>(cur.size());
  if (pos == d - 1) {
    cur[pos] = remaining;
    out.push_back(Line{cur});
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    lines_rec(remaining - v, pos + 1, cur, out);
  }
}

// Rows are chosen one at a time from the compositions of k_i, pruning on
// the running column sums.
void squares_rec(const Line& k, const Line& l, int row,
                 std::vector<int>& col_left, Square& cur,
                 std::vector<Square>& out) {
  const int d = k.dim();
  if (row == d) {
    if (std::all_of(col_left.begin(), col_left.end(),
                    [](int c) { return c == 0; })) {
      out.push_back(cur);
    }
    return;
  }
  for (const Line& r : enumerate_lines(k[row], d)) {
    bool fits = true;
    for (int j = 0; j < d; ++j) fits = fits && r[j] <= col_left[j];
    if (!fits) continue;
    for (int j = 0; j < d; ++j) {
      cur(row, j) = r[j];
      col_left[j] -= r[j];
    }
    squares_rec(k, l, row + 1, col_left, cur, out);
    for (int j = 0; j < d; ++j) col_left[j] += r[j];
  }
  for (int j = 0; j < d; ++j) cur(row, j) = 0;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("negative binomial input");
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

std::uint64_t multinomial(int n, std::span<const int> parts) {
  if (n < 0) throw std::invalid_argument("negative multinomial order");
  int sum = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("negative multinomial part");
    sum += p;
  }
  if (sum != n) return 0;
  std::uint64_t r = 1;
  int acc = 0;
  for (int p : parts) {
    acc += p;
    r *= binomial(acc, p);
  }
  return r;
}

int Line::weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int Square::weight() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

Line Square::row_sums() const {
  Line l{std::vector<int>(d, 0)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) l.parts[i] += (*this)(i, j);
  return l;
}

Line Square::col_sums() const {
  Line l{std::vector<int>(d, 0)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) l.parts[j] += (*this)(i, j);
  return l;
}

Line Square::row(int i) const {
  Line l{std::vector<int>(d)};
  for (int j = 0; j < d; ++j) l.parts[j] = (*this)(i, j);
  return l;
}

Line Square::col(int j) const {
  Line l{std::vector<int>(d)};
  for (int i = 0; i < d; ++i) l.parts[i] = (*this)(i, j);
  return l;
}

int Cube::weight() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

Square Cube::sum_k() const {
  Square s(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) s(i, j) += (*this)(i, j, k);
  return s;
}

Square Cube::sum_j() const {
  Square s(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) s(i, k) += (*this)(i, j, k);
  return s;
}

Square Cube::sum_i_transposed() const {
  Square s(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) s(k, j) += (*this)(i, j, k);
  return s;
}

std::size_t line_count(int n, int d) {
  return static_cast<std::size_t>(binomial(n + d - 1, d - 1));
}

std::vector<Line> enumerate_lines(int n, int d) {
  if (n < 0 || d <= 0) throw std::invalid_argument("bad line dimensions");
  std::vector<Line> out;
  out.reserve(line_count(n, d));
  std::vector<int> cur(d, 0);
  lines_rec(n, 0, cur, out);
  return out;
}

std::size_t line_index(const Line& l) {
  // Count the lines that precede l: for each position, all larger values
  // at that position with the same prefix come first.
  const int d = l.dim();
  int remaining = l.weight();
  std::size_t idx = 0;
  for (int pos = 0; pos + 1 < d; ++pos) {
    for (int v = remaining; v > l[pos]; --v) {
      idx += line_count(remaining - v, d - pos - 1);
    }
    remaining -= l[pos];
  }
  return idx;
}

std::vector<Square> enumerate_squares(const Line& k, const Line& l) {
  if (k.dim() != l.dim()) throw std::invalid_argument("margin size mismatch");
  std::vector<Square> out;
  if (k.weight() != l.weight()) return out;
  Square cur(k.dim());
  std::vector<int> col_left = l.parts;
  squares_rec(k, l, 0, col_left, cur, out);
  return out;
}

std::vector<Cube> enumerate_cubes(const Square& m_bar, const Square& m_tilde) {
  if (m_bar.d != m_tilde.d) throw std::invalid_argument("margin size mismatch");
  const int d = m_bar.d;
  // Slice k is a square p(., ., k) with row sums m_bar(., k) and column sums
  // m_tilde(k, .).
  std::vector<std::vector<Square>> slices(d);
  for (int k = 0; k < d; ++k) {
    slices[k] = enumerate_squares(m_bar.col(k), m_tilde.row(k));
    if (slices[k].empty()) return {};
  }
  std::vector<Cube> out;
  std::vector<std::size_t> pick(d, 0);
  while (true) {
    Cube c(d);
    for (int k = 0; k < d; ++k) {
      const Square& s = slices[k][pick[k]];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) c(i, j, k) = s(i, j);
    }
    out.push_back(std::move(c));
    int pos = 0;
    while (pos < d && ++pick[pos] == slices[pos].size()) pick[pos++] = 0;
    if (pos == d) break;
  }
  return out;
}

}  // namespace cowqkd
