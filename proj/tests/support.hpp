#pragma once

// Random generators shared by the unit tests and the acceptance runner.

#include <numeric>
#include <vector>

#include "mwc/groups.hpp"
#include "mwc/word.hpp"

namespace mwc::testing {

inline CMatrix random_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

/// Uniform-ish random element of SL2: three Gaussian entries, the fourth solved from det = 1.
inline CMatrix random_sl2(Rng& rng) {
  for (;;) {
    const Complex a = rng.complex_normal(), b = rng.complex_normal(), c = rng.complex_normal();
    if (std::abs(a) < 0.2) continue;
    CMatrix g(2, 2);
    g << a, b, c, (1.0 + b * c) / a;
    return g;
  }
}

/// Upper-triangular SL2 elements, which lie outside the image of 121.
inline std::vector<CMatrix> upper_sl2_cases() {
  const std::vector<std::pair<Complex, Complex>> entries = {
      {1.0, 0.0},  {1.0, 1.0},  {-1.0, 0.0}, {-1.0, 2.5},       {2.0, 0.0},
      {0.5, -3.0}, {3.0, 1e-3}, {-4.0, 7.0}, {Complex(0, 1), 1.0}, {Complex(1, 1), Complex(0, -2)}};
  std::vector<CMatrix> out;
  for (const auto& [lambda, mu] : entries) {
    CMatrix g(2, 2);
    g << lambda, mu, 0.0, 1.0 / lambda;
    out.push_back(g);
  }
  return out;
}

inline CMatrix permutation_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  CMatrix p = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
  return p;
}

/// Seeded random permutation other than the identity.
inline std::vector<int> random_nonidentity_permutation(Rng& rng, int n) {
  std::vector<int> perm(n);
  for (;;) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next() % (i + 1)]);
    for (int i = 0; i < n; ++i)
      if (perm[i] != i) return perm;
  }
}

/// First k (1-based) such that the leading k x k block of the permutation matrix is
/// singular, i.e. rows 1..k do not map onto columns 1..k; 0 if none.
inline int first_singular_leading_block(const std::vector<int>& perm) {
  int max_col = -1;
  for (int k = 0; k < static_cast<int>(perm.size()); ++k) {
    max_col = std::max(max_col, perm[k]);
    // Leading (k+1)-block is a permutation block iff the first k+1 rows hit columns 0..k.
    if (max_col > k) return k + 1;
  }
  return 0;
}

/// Random complex symmetric matrix.
inline CMatrix random_symmetric(Rng& rng, int n) {
  CMatrix a = random_matrix(rng, n, n);
  return (a + a.transpose()) / 2.0;
}

/// Max absolute entry of m - m^T.
inline double asymmetry(const CMatrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace mwc::testing
