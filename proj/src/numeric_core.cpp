#include "mwc/numeric_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwc {

void Tolerances::validate() const {
  if (!(rank_tol > 0.0) || !(rank_tol < 1.0))
    throw std::invalid_argument("rank_tol must lie in (0, 1)");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
  if (max_newton_iters <= 0) throw std::invalid_argument("max_newton_iters must be positive");
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, mpz_class(0)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix dimensions must be positive");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("IntMatrix rows must have equal length");
    std::size_t j = 0;
    for (long v : row) (*this)(i, j++) = v;
    ++i;
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty integer matrix");
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw std::invalid_argument("IntMatrix rows must have equal length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("IntMatrix product shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const mpz_class& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

bool IntMatrix::operator==(const IntMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

// ---------------------------------------------------------------------------
// Floating point

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues();
}

int numerical_rank(const CMatrix& m, const Tolerances& tol) {
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol.rank_tol * sv(0);
  return static_cast<int>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; }));
}

CMatrix least_squares_solve(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
  if (a.rows() != b.rows()) throw std::invalid_argument("least_squares_solve: row count mismatch");
  if (a.size() == 0) return CMatrix::Zero(a.cols(), b.cols());
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol.rank_tol);
  if (svd.rank() == 0) return CMatrix::Zero(a.cols(), b.cols());
  return svd.solve(b);
}

// ---------------------------------------------------------------------------
// Smith normal form
//
// Row/column reduction over Z. The pivot at (t, t) is always an entry of minimal
// nonzero absolute value in the trailing block; once its row and column are clear,
// any trailing entry it does not divide is folded into row t and the step repeats.

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

bool move_min_pivot(IntMatrix& m, std::size_t t) {
  bool found = false;
  std::size_t pi = t, pj = t;
  mpz_class best;
  for (std::size_t i = t; i < m.rows(); ++i)
    for (std::size_t j = t; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      mpz_class v = abs(m(i, j));
      if (!found || v < best) {
        best = v;
        pi = i;
        pj = j;
        found = true;
      }
    }
  if (!found) return false;
  swap_rows(m, t, pi);
  swap_cols(m, t, pj);
  return true;
}

}  // namespace

std::vector<mpz_class> smith_normal_form(const IntMatrix& input) {
  IntMatrix m = input;
  const std::size_t limit = std::min(m.rows(), m.cols());
  std::vector<mpz_class> factors;

  for (std::size_t t = 0; t < limit; ++t) {
    if (!move_min_pivot(m, t)) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (m(i, t) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t j = t; j < m.cols(); ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (m(t, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t i = t; i < m.rows(); ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) dirty = true;
      }
      if (dirty) {
        move_min_pivot(m, t);
        continue;
      }
      // Row and column t are clear; enforce divisibility of the trailing block.
      bool folded = false;
      for (std::size_t i = t + 1; i < m.rows() && !folded; ++i)
        for (std::size_t j = t + 1; j < m.cols(); ++j) {
          if (m(i, j) % m(t, t) != 0) {
            for (std::size_t k = t; k < m.cols(); ++k) m(t, k) += m(i, k);
            folded = true;
            break;
          }
        }
      if (!folded) break;
    }
    factors.push_back(abs(m(t, t)));
  }
  return factors;
}

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::child(std::string_view label) const { return Rng(derive_seed(seed_, label)); }

Rng Rng::child(std::uint64_t index) const { return Rng(splitmix64(seed_ ^ splitmix64(index + 1))); }

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() {
  // 53 random bits in [0, 1); independent of the standard library's distributions.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double s = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

}  // namespace mwc
