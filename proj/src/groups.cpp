#include "mwc/groups.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwc {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::SL2: return "sl2";
    case GroupKind::GLn: return "gln";
    case GroupKind::Sp2n: return "sp2n";
    case GroupKind::Torus2: return "torus2";
  }
  return "?";
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::affine: return "affine";
    case DomainKind::torus: return "torus";
    case DomainKind::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(Property p) {
  switch (p) {
    case Property::dominant: return "dominant";
    case Property::surjective: return "surjective";
    case Property::open: return "open";
    case Property::birational: return "birational";
    case Property::irreducible: return "irreducible";
  }
  return "?";
}

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::holds: return "holds";
    case Polarity::fails: return "fails";
    case Polarity::unknown: return "unknown";
  }
  return "?";
}

Property parse_property(const std::string& s) {
  for (Property p : {Property::dominant, Property::surjective, Property::open, Property::birational,
                     Property::irreducible})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown property '" + s + "'");
}

CMatrix symplectic_form(int n) {
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -CMatrix::Identity(n, n);
  return j;
}

double GroupDescriptor::membership_residual(const CMatrix& m, const Tolerances& tol) const {
  if (m.rows() != ambient_size || m.cols() != ambient_size || !all_finite(m))
    return std::numeric_limits<double>::infinity();
  switch (kind) {
    case GroupKind::SL2: return std::abs(m.determinant() - Complex(1.0));
    case GroupKind::GLn: return std::abs(m.determinant()) > tol.rank_tol ? 0.0 : 1.0;
    case GroupKind::Sp2n: {
      const CMatrix j = symplectic_form(ambient_size / 2);
      return (m.transpose() * j * m - j).norm();
    }
    case GroupKind::Torus2: {
      double r = std::abs(m(0, 1)) + std::abs(m(1, 0));
      if (std::abs(m(0, 0)) <= tol.rank_tol) r += 1.0;
      if (std::abs(m(1, 1)) <= tol.rank_tol) r += 1.0;
      return r;
    }
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// ChartedSubvariety

DomainKind ChartedSubvariety::domain_kind() const {
  const bool any_torus = std::ranges::any_of(coord_kinds, [](DomainKind k) { return k == DomainKind::torus; });
  const bool any_affine = std::ranges::any_of(coord_kinds, [](DomainKind k) { return k == DomainKind::affine; });
  if (any_torus && any_affine) return DomainKind::mixed;
  return any_torus ? DomainKind::torus : DomainKind::affine;
}

CVector ChartedSubvariety::unit_params() const {
  CVector p(param_dim());
  for (int i = 0; i < param_dim(); ++i) p(i) = coord_kinds[i] == DomainKind::torus ? 1.0 : 0.0;
  return p;
}

bool ChartedSubvariety::in_domain(const CVector& p, double eps) const {
  if (p.size() != param_dim()) return false;
  for (int i = 0; i < param_dim(); ++i) {
    if (!std::isfinite(p(i).real()) || !std::isfinite(p(i).imag())) return false;
    if (coord_kinds[i] == DomainKind::torus && std::abs(p(i)) <= eps) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Symmetric matrices

int packed_symmetric_size(int n) { return n * (n + 1) / 2; }

CVector pack_symmetric(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  CVector v(packed_symmetric_size(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v(k++) = m(i, j);
  return v;
}

CMatrix unpack_symmetric(const CVector& v, int n) {
  if (v.size() != packed_symmetric_size(n)) throw std::invalid_argument("packed symmetric size mismatch");
  CMatrix m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m(i, j) = v(k);
      m(j, i) = v(k);
      ++k;
    }
  return m;
}

std::pair<CVector, CVector> SymmetricSplit::split(const CMatrix& symmetric) const {
  const CVector packed = pack_symmetric(symmetric);
  // Both bases are orthonormal and mutually orthogonal in packed coordinates.
  CVector s = s_basis.transpose().cast<Complex>() * packed;
  CVector t = t_basis.transpose().cast<Complex>() * packed;
  return {s, t};
}

CMatrix SymmetricSplit::from_s(const CVector& coords) const {
  return unpack_symmetric(s_basis.cast<Complex>() * coords, n);
}

CMatrix SymmetricSplit::from_t(const CVector& coords) const {
  return unpack_symmetric(t_basis.cast<Complex>() * coords, n);
}

// ---------------------------------------------------------------------------
// CatalogEntry

const ChartedSubvariety* CatalogEntry::find(const std::string& id) const {
  for (const auto& l : letters)
    if (l.id == id) return &l;
  return nullptr;
}

const ChartedSubvariety& CatalogEntry::letter(const std::string& id) const {
  const auto* l = find(canonical(id));
  return *l;
}

std::string CatalogEntry::canonical(const std::string& token) const {
  if (find(token)) return token;
  if (auto it = aliases.find(token); it != aliases.end()) return it->second;
  throw std::invalid_argument("unknown letter '" + token + "' for group " + group.name);
}

void CatalogEntry::check_consistency() const {
  for (const auto& l : letters)
    if (!find(l.inverse_letter))
      throw std::logic_error("letter " + l.id + " has unresolved inverse " + l.inverse_letter);
  for (const auto& f : registered)
    for (const auto& id : f.letters)
      if (!find(id)) throw std::logic_error("registered fact uses unknown letter " + id);
}

namespace {

CMatrix unit_matrix(int n, int i, int j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

/// Letter whose chart is identity + sum_k p_k * E_{pos_k}; all coordinates affine.
ChartedSubvariety additive_letter(std::string id, int size, std::vector<std::pair<int, int>> positions) {
  ChartedSubvariety l;
  l.id = id;
  l.inverse_letter = id;
  l.coord_kinds.assign(positions.size(), DomainKind::affine);
  l.chart = [size, positions](const CVector& p) {
    CMatrix m = CMatrix::Identity(size, size);
    for (std::size_t k = 0; k < positions.size(); ++k) m(positions[k].first, positions[k].second) += p(k);
    return m;
  };
  l.tangent = [size, positions](const CVector&) {
    std::vector<CMatrix> out;
    for (auto [i, j] : positions) out.push_back(unit_matrix(size, i, j));
    return out;
  };
  l.inverse_chart = [positions](const CMatrix& g) -> std::optional<CVector> {
    CVector p(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) p(k) = g(positions[k].first, positions[k].second);
    return p;
  };
  return l;
}

/// Diagonal letter: torus coordinates placed on the listed diagonal positions.
ChartedSubvariety diagonal_letter(std::string id, int size, std::vector<int> positions) {
  ChartedSubvariety l;
  l.id = id;
  l.inverse_letter = id;
  l.coord_kinds.assign(positions.size(), DomainKind::torus);
  l.chart = [size, positions](const CVector& p) {
    CMatrix m = CMatrix::Identity(size, size);
    for (std::size_t k = 0; k < positions.size(); ++k) m(positions[k], positions[k]) = p(k);
    return m;
  };
  l.tangent = [size, positions](const CVector&) {
    std::vector<CMatrix> out;
    for (int i : positions) out.push_back(unit_matrix(size, i, i));
    return out;
  };
  l.inverse_chart = [positions](const CMatrix& g) -> std::optional<CVector> {
    CVector p(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
      p(k) = g(positions[k], positions[k]);
      if (p(k) == Complex(0.0)) return std::nullopt;
    }
    return p;
  };
  return l;
}

RegisteredFact fact(std::vector<std::string> letters, Property p, Polarity pol, std::string citation) {
  RegisteredFact f;
  f.letters = std::move(letters);
  f.property = p;
  f.polarity = pol;
  f.citation = std::move(citation);
  return f;
}

std::vector<std::string> digits(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

}  // namespace

std::string elementary_id(int n, int i, int j) {
  if (n < 10) return "E" + std::to_string(i) + std::to_string(j);
  return "E" + std::to_string(i) + "_" + std::to_string(j);
}

std::string diagonal_id(int i) { return "D" + std::to_string(i); }

// ---------------------------------------------------------------------------
// Catalogs

bool same_catalog(const CatalogPtr& a, const CatalogPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->group.kind != b->group.kind || a->group.ambient_size != b->group.ambient_size) return false;
  if (a->split.has_value() != b->split.has_value()) return false;
  return !a->split || a->split->seed == b->split->seed;
}

CatalogPtr catalog_sl2() {
  auto e = std::make_shared<CatalogEntry>();
  e->group = {GroupKind::SL2, "sl2", 2, 3};
  e->letters.push_back(additive_letter("1", 2, {{0, 1}}));
  e->letters.push_back(additive_letter("2", 2, {{1, 0}}));

  ChartedSubvariety t;
  t.id = "3";
  t.inverse_letter = "3";
  t.coord_kinds = {DomainKind::torus};
  t.chart = [](const CVector& p) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = p(0);
    m(1, 1) = 1.0 / p(0);
    return m;
  };
  t.tangent = [](const CVector& p) {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0 / (p(0) * p(0));
    return std::vector<CMatrix>{d};
  };
  t.inverse_chart = [](const CMatrix& g) -> std::optional<CVector> {
    if (g(0, 0) == Complex(0.0)) return std::nullopt;
    CVector p(1);
    p(0) = g(0, 0);
    return p;
  };
  e->letters.push_back(std::move(t));

  const std::string shears = "shear subgroups of SL2: ";
  e->registered = {
      fact(digits("121"), Property::dominant, Polarity::holds, shears + "121 has a rational inverse on g21 != 0"),
      fact(digits("121"), Property::birational, Polarity::holds, shears + "b = g21, c = (g22-1)/g21, a = (g11-1)/g21"),
      fact(digits("12"), Property::dominant, Polarity::fails, shears + "12 has a two-dimensional image"),
      fact(digits("1212"), Property::surjective, Polarity::holds, shears + "right-multiply by x2(-d) to make g21 nonzero"),
      fact(digits("1212"), Property::open, Polarity::holds,
           shears + "1212 is locally solvable around the identity point"),
      fact(digits("1212"), Property::irreducible, Polarity::fails, shears + "fiber over I is two lines"),
      fact(digits("12121"), Property::irreducible, Polarity::fails, shears + "fiber over I has two components"),
      fact(digits("121212"), Property::irreducible, Polarity::holds, shears + "alternating words of length >= 6"),
      fact(digits("212"), Property::birational, Polarity::holds, shears + "212 inverts like 121"),
      fact(digits("2312"), Property::irreducible, Polarity::holds,
           "one-parameter word U- T U+ U- for SL2 with the diagonal torus"),
  };
  e->check_consistency();
  return e;
}

CatalogPtr catalog_gln(int n) {
  if (n < 1) throw std::invalid_argument("catalog_gln: n must be >= 1");
  auto e = std::make_shared<CatalogEntry>();
  e->group = {GroupKind::GLn, "gl" + std::to_string(n), n, n * n};
  e->dotted_words = true;

  std::vector<std::pair<int, int>> upper, lower;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < j) upper.emplace_back(i, j);
      if (i > j) lower.emplace_back(i, j);
    }
  std::vector<int> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = i;

  // L: torus diagonal followed by the strictly lower entries.
  ChartedSubvariety l;
  l.id = "L";
  l.inverse_letter = "L";
  l.coord_kinds.assign(n, DomainKind::torus);
  l.coord_kinds.insert(l.coord_kinds.end(), lower.size(), DomainKind::affine);
  l.chart = [n, lower](const CVector& p) {
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = p(i);
    for (std::size_t k = 0; k < lower.size(); ++k) m(lower[k].first, lower[k].second) = p(n + k);
    return m;
  };
  l.tangent = [n, lower](const CVector&) {
    std::vector<CMatrix> out;
    for (int i = 0; i < n; ++i) out.push_back(unit_matrix(n, i, i));
    for (auto [i, j] : lower) out.push_back(unit_matrix(n, i, j));
    return out;
  };
  l.inverse_chart = [n, lower](const CMatrix& g) -> std::optional<CVector> {
    CVector p(n + lower.size());
    for (int i = 0; i < n; ++i) {
      p(i) = g(i, i);
      if (p(i) == Complex(0.0)) return std::nullopt;
    }
    for (std::size_t k = 0; k < lower.size(); ++k) p(n + k) = g(lower[k].first, lower[k].second);
    return p;
  };
  e->letters.push_back(std::move(l));
  if (!upper.empty()) {
    e->letters.push_back(additive_letter("U", n, upper));
    e->letters.push_back(additive_letter("U-", n, lower));
  }
  e->letters.push_back(diagonal_letter("T", n, diag));
  for (auto [i, j] : lower) e->letters.push_back(additive_letter(elementary_id(n, i + 1, j + 1), n, {{i, j}}));
  for (auto [i, j] : upper) e->letters.push_back(additive_letter(elementary_id(n, i + 1, j + 1), n, {{i, j}}));
  for (int i = 0; i < n; ++i) e->letters.push_back(diagonal_letter(diagonal_id(i + 1), n, {i}));

  if (!upper.empty()) {
    e->aliases = {{"1", "L"}, {"2", "U"}};
    const std::string lu = "LU decomposition: ";
    e->registered = {
        fact({"L", "U"}, Property::open, Polarity::holds, lu + "L x U is isomorphic to the leading-minor-nonzero open set"),
        fact({"L", "U"}, Property::birational, Polarity::holds, lu + "unique factorization on the open set"),
        fact({"U", "L"}, Property::open, Polarity::holds, lu + "transpose of LU gives UL"),
        fact({"U", "L"}, Property::birational, Polarity::holds, lu + "transpose of LU gives UL"),
        fact({"U", "L", "U"}, Property::surjective, Polarity::holds, "ULU decomposition reaches every invertible matrix"),
        fact({"U", "L", "U"}, Property::irreducible, Polarity::holds, "ULU decomposition has irreducible preimages"),
    };
  }
  e->check_consistency();
  return e;
}

namespace {

SymmetricSplit make_split(int n, std::uint64_t seed) {
  const int m = packed_symmetric_size(n);
  Rng rng(seed);
  Eigen::MatrixXd gauss(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) gauss(i, j) = rng.normal();
  // Orthonormalize the first m - n random directions; the remaining n columns of Q
  // complete them to an orthonormal basis and span the complement T.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss.leftCols(m - n));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  SymmetricSplit s;
  s.n = n;
  s.seed = seed;
  s.s_basis = q.leftCols(m - n);
  s.t_basis = q.rightCols(n);
  return s;
}

ChartedSubvariety symmetric_block_letter(std::string id, int n, bool lower,
                                         std::function<CMatrix(const CVector&)> to_block,
                                         std::function<CVector(const CMatrix&)> from_block, int dim) {
  ChartedSubvariety l;
  l.id = id;
  l.inverse_letter = id;
  l.coord_kinds.assign(dim, DomainKind::affine);
  l.chart = [n, lower, to_block](const CVector& p) {
    CMatrix g = CMatrix::Identity(2 * n, 2 * n);
    if (lower)
      g.bottomLeftCorner(n, n) = to_block(p);
    else
      g.topRightCorner(n, n) = to_block(p);
    return g;
  };
  l.tangent = [n, lower, to_block, dim](const CVector&) {
    std::vector<CMatrix> out;
    for (int k = 0; k < dim; ++k) {
      CVector e = CVector::Zero(dim);
      e(k) = 1.0;
      CMatrix d = CMatrix::Zero(2 * n, 2 * n);
      if (lower)
        d.bottomLeftCorner(n, n) = to_block(e);
      else
        d.topRightCorner(n, n) = to_block(e);
      out.push_back(d);
    }
    return out;
  };
  l.inverse_chart = [n, lower, from_block](const CMatrix& g) -> std::optional<CVector> {
    const CMatrix block = lower ? CMatrix(g.bottomLeftCorner(n, n)) : CMatrix(g.topRightCorner(n, n));
    return from_block(block);
  };
  return l;
}

}  // namespace

CatalogPtr catalog_sp2n(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("catalog_sp2n: n must be >= 1");
  auto e = std::make_shared<CatalogEntry>();
  e->group = {GroupKind::Sp2n, "sp" + std::to_string(2 * n), 2 * n, n * (2 * n + 1)};
  e->split = make_split(n, seed);
  const SymmetricSplit split = *e->split;
  const int m = packed_symmetric_size(n);

  auto sym = [n](const CVector& p) { return unpack_symmetric(p, n); };
  auto packed = [](const CMatrix& b) { return pack_symmetric(b); };
  e->letters.push_back(symmetric_block_letter("1", n, true, sym, packed, m));
  e->letters.push_back(symmetric_block_letter("2", n, false, sym, packed, m));
  e->letters.push_back(symmetric_block_letter(
      "3", n, false, [split](const CVector& p) { return split.from_s(p); },
      [split](const CMatrix& b) { return split.split(b).first; }, m - n));
  e->letters.push_back(symmetric_block_letter(
      "4", n, false, [split](const CVector& p) { return split.from_t(p); },
      [split](const CMatrix& b) { return split.split(b).second; }, n));

  const std::string blocks = "symplectic block subgroups: ";
  RegisteredFact z = fact(digits("121"), Property::birational, Polarity::holds,
                          blocks + "121 maps birationally onto Z = {upper-right block symmetric}");
  // For n = 1 every 2x2 block is symmetric, so Z is the whole group.
  z.onto = n == 1 ? "G" : "Z";
  e->registered = {
      z,
      fact(digits("1213"), Property::birational, Polarity::holds,
           blocks + "1213 is birational onto the group for a general codimension-n subspace S"),
      fact(digits("1212"), Property::dominant, Polarity::holds, blocks + "1212 contains the birational 1213 up to X3 in X2"),
  };
  e->check_consistency();
  return e;
}

CatalogPtr catalog_torus2() {
  auto e = std::make_shared<CatalogEntry>();
  e->group = {GroupKind::Torus2, "torus2", 2, 2};
  auto monomial = [](std::string id, int p0, int p1) {
    ChartedSubvariety l;
    l.id = id;
    l.inverse_letter = id;
    l.coord_kinds = {DomainKind::torus};
    l.monomial_exponents = std::vector<int>{p0, p1};
    l.chart = [p0, p1](const CVector& p) {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = std::pow(p(0), p0);
      m(1, 1) = std::pow(p(0), p1);
      return m;
    };
    l.tangent = [p0, p1](const CVector& p) {
      CMatrix d = CMatrix::Zero(2, 2);
      d(0, 0) = static_cast<double>(p0) * std::pow(p(0), p0 - 1);
      d(1, 1) = static_cast<double>(p1) * std::pow(p(0), p1 - 1);
      return std::vector<CMatrix>{d};
    };
    // The exponent-1 coordinate recovers t.
    const int slot = p0 == 1 ? 0 : 1;
    l.inverse_chart = [slot](const CMatrix& g) -> std::optional<CVector> {
      if (g(slot, slot) == Complex(0.0)) return std::nullopt;
      CVector p(1);
      p(0) = g(slot, slot);
      return p;
    };
    return l;
  };
  e->letters.push_back(monomial("1", 1, 2));
  e->letters.push_back(monomial("2", 2, 1));
  RegisteredFact none;
  none.all_words = true;
  none.property = Property::irreducible;
  none.polarity = Polarity::fails;
  none.citation = "torus monomial curves: exponent rows span a non-saturated lattice, the kernel has 3 components";
  e->registered = {none};
  e->check_consistency();
  return e;
}

CatalogPtr catalog_by_name(const std::string& name, int n, std::uint64_t seed) {
  if (name == "sl2") return catalog_sl2();
  if (name == "gln") return catalog_gln(n);
  if (name == "sp2n") return catalog_sp2n(n, seed);
  if (name == "torus2") return catalog_torus2();
  throw std::invalid_argument("unknown group '" + name + "'");
}

}  // namespace mwc
