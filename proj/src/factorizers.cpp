#include "mwc/factorizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mwc/errors.hpp"

namespace mwc {

namespace {

CVector scalar(Complex v) {
  CVector p(1);
  p(0) = v;
  return p;
}

void require_square(const CMatrix& g, int n, const char* what) {
  if (g.rows() != n || g.cols() != n || !all_finite(g))
    throw NotInGroupError(std::string(what) + ": expected a finite " + std::to_string(n) + "x" + std::to_string(n) +
                          " matrix");
}

void require_sl2(const CMatrix& g, const Tolerances& tol) {
  require_square(g, 2, "SL2 target");
  const double r = std::abs(g.determinant() - Complex(1.0));
  if (r >= tol.residual_tol) {
    std::ostringstream os;
    os << "target is not in SL2 (|det - 1| = " << r << ")";
    throw NotInGroupError(os.str());
  }
}

void require_invertible(const CMatrix& g, const Tolerances& tol) {
  if (g.rows() != g.cols() || g.rows() == 0 || !all_finite(g)) throw NotInGroupError("target must be a finite square matrix");
  if (numerical_rank(g, tol) < g.rows()) throw NotInGroupError("target is not invertible");
}


CMatrix shear2(Complex a) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 0) = a;
  return m;
}

CVector strict_entries(const CMatrix& m, bool upper) {
  const int n = static_cast<int>(m.rows());
  std::vector<Complex> v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (upper ? i < j : i > j) v.push_back(m(i, j));
  return Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Crout elimination g = L U; L keeps the pivots on its diagonal.
std::pair<CMatrix, CMatrix> crout(const CMatrix& g, const Tolerances& tol) {
  const int n = static_cast<int>(g.rows());
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  CMatrix l = CMatrix::Zero(n, n);
  CMatrix u = CMatrix::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = k; i < n; ++i) {
      Complex s = g(i, k);
      for (int p = 0; p < k; ++p) s -= l(i, p) * u(p, k);
      l(i, k) = s;
    }
    // The k-th pivot is the ratio of consecutive leading principal minors.
    if (std::abs(l(k, k)) <= tol.rank_tol * scale) {
      std::ostringstream os;
      os << "leading principal minor " << (k + 1) << " vanishes";
      throw LeadingMinorError(k + 1, os.str());
    }
    for (int j = k + 1; j < n; ++j) {
      Complex s = g(k, j);
      for (int p = 0; p < k; ++p) s -= l(k, p) * u(p, j);
      u(k, j) = s / l(k, k);
    }
  }
  return {l, u};
}

CVector l_params(const CMatrix& l) {
  const int n = static_cast<int>(l.rows());
  CVector p(n + n * (n - 1) / 2);
  p.head(n) = l.diagonal();
  p.tail(n * (n - 1) / 2) = strict_entries(l, false);
  return p;
}

CMatrix random_unit_triangular(int n, bool upper, Rng& rng) {
  CMatrix u = CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (upper ? i < j : i > j) u(i, j) = rng.complex_normal();
  return u;
}

CMatrix ones_unit_triangular(int n, bool upper) {
  CMatrix u = CMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (upper ? i < j : i > j) u(i, j) = 1.0;
  return u;
}

constexpr int kRandomRetries = 20;

}  // namespace

Factorization finish(Word word, ParamPoint params, const CMatrix& target, int retries, const Tolerances& tol) {
  Factorization f;
  f.word = std::move(word);
  f.params = std::move(params);
  f.target = target;
  f.retries = retries;
  f.residual = (evaluate(f.word, f.params) - target).norm();
  if (!(f.residual < tol.residual_tol)) {
    std::ostringstream os;
    os << "factorization along " << f.word.str() << " has residual " << f.residual << " >= " << tol.residual_tol;
    throw Error(os.str());
  }
  return f;
}

// ---------------------------------------------------------------------------
// SL2

Factorization sl2_121(const CMatrix& g, const Tolerances& tol) {
  require_sl2(g, tol);
  const Complex z = g(1, 0);
  if (std::abs(z) <= tol.rank_tol)
    throw ExcludedLocusError("g21 = 0: target is outside the image of the 121 parametrization");
  const Complex b = z;
  const Complex c = (g(1, 1) - 1.0) / z;
  const Complex a = (g(0, 0) - 1.0) / z;
  static const CatalogPtr sl2 = catalog_sl2();
  return finish(Word::parse(sl2, "121"), {scalar(a), scalar(b), scalar(c)}, g, 0, tol);
}

Factorization sl2_1212(const CMatrix& g, const Tolerances& tol) {
  require_sl2(g, tol);
  const Complex d = std::abs(g(1, 0)) > tol.rank_tol ? Complex(0.0) : Complex(1.0);
  // g x2(-d) has (2,1) entry g21 - d g22, and g22 != 0 whenever g21 = 0.
  const Factorization head = sl2_121(g * shear2(-d), tol);
  ParamPoint p = head.params;
  p.push_back(scalar(d));
  static const CatalogPtr sl2 = catalog_sl2();
  return finish(Word::parse(sl2, "1212"), std::move(p), g, 0, tol);
}

Factorization sl2_2312(const CMatrix& g, std::uint64_t seed, const Tolerances& tol) {
  require_sl2(g, tol);
  static const CatalogPtr sl2 = catalog_sl2();
  Rng rng(derive_seed(seed, "sl2_2312"));
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt <= kRandomRetries; ++attempt) {
    const Complex c = attempt == 0 ? Complex(0.0) : rng.complex_normal();
    const CMatrix h = g * shear2(-c);
    const Complex t = h(0, 0);
    if (std::abs(t) <= tol.rank_tol * scale) continue;
    const Complex a = h(1, 0) / t;
    const Complex b = h(0, 1) / t;
    return finish(Word::parse(sl2, "2312"), {scalar(a), scalar(t), scalar(b), scalar(c)}, g, attempt, tol);
  }
  throw RetriesExhaustedError("no trailing shear brings the target into the big cell");
}

// ---------------------------------------------------------------------------
// GLn

Factorization gln_lu(const CMatrix& g, const Tolerances& tol) {
  require_invertible(g, tol);
  const int n = static_cast<int>(g.rows());
  auto [l, u] = crout(g, tol);
  const CatalogPtr e = catalog_gln(n);
  if (n == 1) return finish(Word(e, {"L"}), {l_params(l)}, g, 0, tol);
  return finish(Word(e, {"L", "U"}), {l_params(l), strict_entries(u, true)}, g, 0, tol);
}

Factorization gln_ulu(const CMatrix& g, std::uint64_t seed, const Tolerances& tol) {
  require_invertible(g, tol);
  const int n = static_cast<int>(g.rows());
  if (n == 1) return gln_lu(g, tol);
  const CatalogPtr e = catalog_gln(n);
  Rng rng(derive_seed(seed, "gln_ulu"));
  for (int attempt = 0; attempt < kRandomRetries + 2; ++attempt) {
    CMatrix u = attempt == 0   ? CMatrix::Identity(n, n)
                : attempt == 1 ? ones_unit_triangular(n, true)
                               : random_unit_triangular(n, true, rng);
    const CMatrix rest = u.triangularView<Eigen::UnitUpper>().solve(g);
    try {
      auto [l, up] = crout(rest, tol);
      return finish(Word(e, {"U", "L", "U"}), {strict_entries(u, true), l_params(l), strict_entries(up, true)}, g,
                    attempt, tol);
    } catch (const LeadingMinorError&) {
      continue;
    } catch (const Error&) {
      // Residual above tolerance: an ill-conditioned split, try another u.
      continue;
    }
  }
  throw RetriesExhaustedError("no unit upper-triangular prefix gave an LU-feasible remainder");
}

LduBlocks gln_ldu(const CMatrix& g, const Tolerances& tol) {
  require_invertible(g, tol);
  auto [l, u] = crout(g, tol);
  LduBlocks out;
  out.diag = CMatrix(l.diagonal().asDiagonal());
  out.lower = l * out.diag.diagonal().cwiseInverse().asDiagonal();
  out.upper = u;
  out.residual = (out.lower * out.diag * out.upper - g).norm();
  if (!(out.residual < tol.residual_tol)) throw Error("LDU residual above tolerance");
  return out;
}

namespace {

std::vector<std::pair<int, int>> lower_order(int n) {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<int, int>> upper_order(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = n - 2; i >= 0; --i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

}  // namespace

OneParamWord one_param_word(int n) {
  if (n < 1) throw std::invalid_argument("one_param_word: n must be >= 1");
  const CatalogPtr e = catalog_gln(n);
  std::vector<std::string> ls;
  for (auto [i, j] : lower_order(n)) ls.push_back(elementary_id(n, i + 1, j + 1));
  for (int i = 0; i < n; ++i) ls.push_back(diagonal_id(i + 1));
  for (auto [i, j] : upper_order(n)) ls.push_back(elementary_id(n, i + 1, j + 1));
  for (auto [i, j] : lower_order(n)) ls.push_back(elementary_id(n, i + 1, j + 1));
  OneParamWord out{Word(e, std::move(ls)), 0};
  out.length = static_cast<int>(out.word.size());
  return out;
}

OneParamWord one_param_word_sl2() {
  OneParamWord out{Word::parse(catalog_sl2(), "2312"), 4};
  return out;
}

Factorization one_param_factor(const CMatrix& g, int n, std::uint64_t seed, const Tolerances& tol) {
  require_square(g, n, "GLn target");
  require_invertible(g, tol);
  const OneParamWord word = one_param_word(n);
  Rng rng(derive_seed(seed, "one_param_factor"));
  for (int attempt = 0; attempt <= kRandomRetries; ++attempt) {
    const CMatrix tail = attempt == 0 ? CMatrix::Identity(n, n) : random_unit_triangular(n, false, rng);
    const CMatrix rest = tail.transpose().triangularView<Eigen::UnitUpper>().solve(g.transpose()).transpose();
    LduBlocks ldu;
    try {
      ldu = gln_ldu(rest, tol);
    } catch (const ExcludedLocusError&) {
      continue;
    } catch (const NotInGroupError&) {
      continue;
    }
    ParamPoint p;
    for (auto [i, j] : lower_order(n)) p.push_back(scalar(ldu.lower(i, j)));
    for (int i = 0; i < n; ++i) p.push_back(scalar(ldu.diag(i, i)));
    for (auto [i, j] : upper_order(n)) p.push_back(scalar(ldu.upper(i, j)));
    for (auto [i, j] : lower_order(n)) p.push_back(scalar(tail(i, j)));
    try {
      return finish(word.word, std::move(p), g, attempt, tol);
    } catch (const Error&) {
      continue;
    }
  }
  throw RetriesExhaustedError("no trailing unit lower-triangular factor brings the target into the big cell");
}

// ---------------------------------------------------------------------------
// Sp2n

namespace {

void require_symplectic(const CMatrix& g, const CatalogPtr& entry, const Tolerances& tol) {
  if (!entry || entry->group.kind != GroupKind::Sp2n) throw std::invalid_argument("expected an Sp2n catalog entry");
  require_square(g, entry->group.ambient_size, "Sp2n target");
  const double r = entry->group.membership_residual(g, tol);
  if (!(r < tol.residual_tol * std::max(1.0, g.squaredNorm()))) {
    std::ostringstream os;
    os << "target is not symplectic (|g^T J g - J| = " << r << ")";
    throw NotInGroupError(os.str());
  }
}

double asymmetry(const CMatrix& m) { return (m - m.transpose()).norm(); }

CMatrix symmetrize(const CMatrix& m) { return 0.5 * (m + m.transpose()); }

CMatrix block_upper(int n, const CMatrix& b) {
  CMatrix g = CMatrix::Identity(2 * n, 2 * n);
  g.topRightCorner(n, n) = b;
  return g;
}

constexpr int kRegenerations = 5;

}  // namespace

Factorization sp2n_121_onto_Z(const CMatrix& g, const CatalogPtr& entry, const Tolerances& tol) {
  require_symplectic(g, entry, tol);
  const int n = entry->group.ambient_size / 2;
  const CMatrix c = g.topLeftCorner(n, n);
  const CMatrix d = g.topRightCorner(n, n);
  const CMatrix f = g.bottomRightCorner(n, n);
  const double scale = std::max(1.0, d.norm());
  if (asymmetry(d) >= tol.residual_tol * scale) throw NotInGroupError("upper-right block is not symmetric: target is not in Z");
  if (numerical_rank(d, tol) < n || singular_values(d).minCoeff() <= tol.rank_tol * scale)
    throw ExcludedLocusError("upper-right block is singular: target is on the excluded locus of 121");

  const Eigen::PartialPivLU<CMatrix> dlu(d);
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a_right = dlu.solve(c - id);                                     // D^-1 (C - I)
  const CMatrix a_left = CMatrix(d.transpose()).partialPivLu().solve((f - id).transpose()).transpose();  // (F - I) D^-1
  const double asym = std::max(asymmetry(a_left), asymmetry(a_right));
  if (asym >= tol.residual_tol * std::max(1.0, std::max(a_left.norm(), a_right.norm()))) {
    std::ostringstream os;
    os << "recovered blocks are not symmetric (asymmetry " << asym << ")";
    throw NotInGroupError(os.str());
  }
  ParamPoint p{pack_symmetric(symmetrize(a_left)), pack_symmetric(symmetrize(d)), pack_symmetric(symmetrize(a_right))};
  return finish(Word::parse(entry, "121"), std::move(p), g, 0, tol);
}

Factorization sp2n_1213(const CMatrix& g, const CatalogPtr& entry, const Tolerances& tol) {
  require_symplectic(g, entry, tol);
  const int n = entry->group.ambient_size / 2;
  const CMatrix c = g.topLeftCorner(n, n);
  const CMatrix d = g.topRightCorner(n, n);

  CatalogPtr current = entry;
  for (int regen = 0; regen <= kRegenerations; ++regen) {
    if (regen > 0)
      current = catalog_sp2n(n, derive_seed(entry->split->seed, "regenerate-" + std::to_string(regen)));
    const SymmetricSplit& split = *current->split;
    const int unknowns = static_cast<int>(split.s_basis.cols());
    const int equations = n * (n - 1) / 2;

    // antisym(D - C B_S) = 0, one equation per position i < j.
    CMatrix system(equations, unknowns);
    CMatrix rhs(equations, 1);
    for (int k = 0; k < unknowns; ++k) {
      CVector e = CVector::Zero(unknowns);
      e(k) = 1.0;
      const CMatrix cs = c * split.from_s(e);
      int row = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) system(row++, k) = cs(i, j) - cs(j, i);
    }
    {
      int row = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) rhs(row++, 0) = d(i, j) - d(j, i);
    }
    if (numerical_rank(system, tol) < unknowns) continue;  // S is not general enough for this target
    const CVector s = least_squares_solve(system, rhs, tol).col(0);
    const CMatrix rest = g * block_upper(n, -split.from_s(s));
    Factorization head;
    try {
      head = sp2n_121_onto_Z(rest, current, tol);
    } catch (const ExcludedLocusError&) {
      // The S-solution is unique here, so a singular block means a non-generic target for
      // this S; a regenerated S moves the excluded locus.
      continue;
    }
    ParamPoint p = head.params;
    p.push_back(s);
    return finish(Word::parse(current, "1213"), std::move(p), g, regen, tol);
  }
  throw RetriesExhaustedError("S regeneration budget exhausted for the 1213 factorization");
}

// ---------------------------------------------------------------------------
// Dispatch

std::vector<std::string> solvable_words(const CatalogPtr& entry) {
  switch (entry->group.kind) {
    case GroupKind::SL2: return {"1212", "2312", "121"};
    case GroupKind::GLn:
      if (entry->group.ambient_size == 1) return {"L"};
      return {"U.L.U", "L.U", "U-.T.U", "one-param"};
    case GroupKind::Sp2n: return {"1213", "121"};
    case GroupKind::Torus2: return {};
  }
  return {};
}

Factorization factor_named(const CatalogPtr& entry, const std::string& text, const CMatrix& g, std::uint64_t seed,
                           const Tolerances& tol) {
  switch (entry->group.kind) {
    case GroupKind::SL2:
      if (text == "121") return sl2_121(g, tol);
      if (text == "1212") return sl2_1212(g, tol);
      if (text == "2312" || text == "one-param") return sl2_2312(g, seed, tol);
      break;
    case GroupKind::GLn: {
      const int n = entry->group.ambient_size;
      require_square(g, n, "GLn target");
      if (text == "one-param") return one_param_factor(g, n, seed, tol);
      if (text == "ldu") {
        const LduBlocks b = gln_ldu(g, tol);
        if (n == 1) return finish(Word(entry, {"T"}), {b.diag.diagonal()}, g, 0, tol);
        return finish(Word(entry, {"U-", "T", "U"}),
                      {strict_entries(b.lower, false), b.diag.diagonal(), strict_entries(b.upper, true)}, g, 0, tol);
      }
      const Word w = Word::parse(entry, text);
      if (w == Word(entry, {"L", "U"}) || (n == 1 && w == Word(entry, {"L"}))) return gln_lu(g, tol);
      if (w == Word(entry, {"U", "L", "U"})) return gln_ulu(g, seed, tol);
      break;
    }
    case GroupKind::Sp2n:
      if (text == "121") return sp2n_121_onto_Z(g, entry, tol);
      if (text == "1213") return sp2n_1213(g, entry, tol);
      break;
    case GroupKind::Torus2: break;
  }
  throw std::invalid_argument("no registered factorizer for word '" + text + "' in group " + entry->group.name);
}

Factorization factor_into_word(const Word& w, const CMatrix& g, std::uint64_t seed, const Tolerances& tol) {
  for (const std::string& name : solvable_words(w.entry)) {
    if (name == "one-param") continue;
    const Word pattern = Word::parse(w.entry, name);
    auto it = std::search(w.letters.begin(), w.letters.end(), pattern.letters.begin(), pattern.letters.end());
    if (it == w.letters.end()) continue;
    const Factorization inner = factor_named(w.entry, name, g, seed, tol);
    // A regenerated Sp2n catalog has different S, T letters than w.
    if (w.entry->group.kind == GroupKind::Sp2n && !same_catalog(inner.word.entry, w.entry)) continue;
    const std::size_t start = static_cast<std::size_t>(it - w.letters.begin());
    ParamPoint p = unit_point(w);
    for (std::size_t k = 0; k < pattern.size(); ++k) p[start + k] = inner.params[k];
    return finish(w, std::move(p), g, inner.retries, tol);
  }
  throw std::invalid_argument("word " + w.str() + " contains no subword with a registered factorizer");
}

}  // namespace mwc
