#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

namespace mwc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical thresholds shared by every solver in the library.
struct Tolerances {
  double rank_tol = 1e-9;       ///< singular-value cutoff relative to the largest one
  double residual_tol = 1e-8;   ///< Frobenius residual accepted for a factorization
  double newton_tol = 1e-12;
  int max_newton_iters = 50;

  /// Throws std::invalid_argument unless all fields are positive and rank_tol < 1.
  void validate() const;
};

/// Dense integer matrix with exact (GMP) entries, row-major.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<mpz_class> data_;
};

/// Number of singular values above rank_tol times the largest one; 0 for the zero matrix.
int numerical_rank(const CMatrix& m, const Tolerances& tol = {});

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const CMatrix& m);

/// Invariant factors d1 | d2 | ... | dr of m (r = rank over Q), computed exactly.
std::vector<mpz_class> smith_normal_form(const IntMatrix& m);

/// Minimum-norm least-squares solution of a * x = b (pseudoinverse with relative cutoff).
CMatrix least_squares_solve(const CMatrix& a, const CMatrix& b, const Tolerances& tol = {});

bool all_finite(const CMatrix& m);

/// Deterministic pseudo-random source. Child generators are derived by label so that
/// independent subcomputations do not share a stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng child(std::string_view label) const;
  Rng child(std::uint64_t index) const;

  double uniform();
  double normal();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal();
  std::uint64_t next();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace mwc
