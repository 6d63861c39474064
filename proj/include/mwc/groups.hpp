#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mwc/numeric_core.hpp"

namespace mwc {

enum class GroupKind { SL2, GLn, Sp2n, Torus2 };

/// Parameter space of a chart coordinate: C or C^*.
enum class DomainKind { affine, torus, mixed };

enum class Property { dominant, surjective, open, birational, irreducible };
enum class Polarity { holds, fails, unknown };

std::string to_string(GroupKind kind);
std::string to_string(DomainKind kind);
std::string to_string(Property p);
std::string to_string(Polarity p);
Property parse_property(const std::string& s);

struct GroupDescriptor {
  GroupKind kind = GroupKind::SL2;
  std::string name;
  int ambient_size = 0;  ///< matrix side length
  int dim = 0;           ///< dimension of the group as a variety

  /// Distance-like measure of how far m is from the group (0 on the group).
  double membership_residual(const CMatrix& m, const Tolerances& tol = {}) const;
  CMatrix identity() const { return CMatrix::Identity(ambient_size, ambient_size); }
};

/// The standard symplectic form [[0, I], [-I, 0]] of size 2n.
CMatrix symplectic_form(int n);

/// A parametrized subvariety X_a of the group containing the identity.
struct ChartedSubvariety {
  std::string id;
  std::vector<DomainKind> coord_kinds;  ///< one entry per parameter coordinate
  std::function<CMatrix(const CVector&)> chart;
  /// Partial derivatives of the chart, one matrix per coordinate.
  std::function<std::vector<CMatrix>(const CVector&)> tangent;
  std::string inverse_letter;
  /// Reads parameters back off a matrix of X_a; empty when the letter has no closed-form inverse.
  std::function<std::optional<CVector>(const CMatrix&)> inverse_chart;
  bool subgroup = true;
  /// For one-parameter torus letters t -> diag(t^e_1, ..., t^e_k): the exponents e_i.
  std::optional<std::vector<int>> monomial_exponents;

  int param_dim() const { return static_cast<int>(coord_kinds.size()); }
  DomainKind domain_kind() const;
  /// Parameter point charting the identity: 0 on affine coordinates, 1 on torus coordinates.
  CVector unit_params() const;
  /// True when every torus coordinate of p is bounded away from zero.
  bool in_domain(const CVector& p, double eps = 0.0) const;
};

/// A fact about a word recorded from the literature when the catalog is built.
struct RegisteredFact {
  std::vector<std::string> letters;  ///< empty together with all_words = true
  bool all_words = false;
  Property property = Property::dominant;
  Polarity polarity = Polarity::holds;
  std::string citation;
  /// Target of the map when it is not the whole group (e.g. "Z" for a closed subset).
  /// Only facts with onto == "G" are consumed by the certificate rules.
  std::string onto = "G";
};

/// Seeded codimension-n subspace S of symmetric n x n matrices and its complement T.
struct SymmetricSplit {
  int n = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd s_basis;  ///< columns are packed symmetric matrices spanning S
  Eigen::MatrixXd t_basis;  ///< columns spanning T

  /// Coordinates (in S basis, in T basis) of a symmetric matrix.
  std::pair<CVector, CVector> split(const CMatrix& symmetric) const;
  CMatrix from_s(const CVector& coords) const;
  CMatrix from_t(const CVector& coords) const;
};

int packed_symmetric_size(int n);
/// Upper triangle (i <= j), row-major.
CVector pack_symmetric(const CMatrix& m);
CMatrix unpack_symmetric(const CVector& v, int n);

class CatalogEntry {
 public:
  GroupDescriptor group;
  std::vector<ChartedSubvariety> letters;
  std::map<std::string, std::string> aliases;  ///< alternate tokens, e.g. "1" -> "L"
  std::vector<RegisteredFact> registered;
  std::optional<SymmetricSplit> split;       ///< Sp(2n) only
  bool dotted_words = false;                 ///< serialize words with '.' separators

  const ChartedSubvariety& letter(const std::string& id) const;
  const ChartedSubvariety* find(const std::string& id) const;
  /// Resolves aliases; throws std::invalid_argument for unknown tokens.
  std::string canonical(const std::string& token) const;

  /// Throws std::logic_error if inverse letters or registered facts do not resolve.
  void check_consistency() const;
};

using CatalogPtr = std::shared_ptr<const CatalogEntry>;

/// True when both entries were built for the same group (and, for Sp2n, the same S seed),
/// so their letters coincide even if the entries are distinct objects.
bool same_catalog(const CatalogPtr& a, const CatalogPtr& b);

/// SL2 with upper shears (1), lower shears (2) and the diagonal torus (3).
CatalogPtr catalog_sl2();
/// GL_n with L, U, U-, T and the one-parameter letters E<i><j>, D<i>.
CatalogPtr catalog_gln(int n);
/// Sp_2n with the symmetric block letters 1..4; S and T drawn from `seed`.
CatalogPtr catalog_sp2n(int n, std::uint64_t seed);
/// (C^*)^2 embedded diagonally with the monomial curves t -> (t, t^2), (t^2, t).
CatalogPtr catalog_torus2();

/// Builds a catalog by group name ("sl2", "gln", "sp2n", "torus2").
CatalogPtr catalog_by_name(const std::string& name, int n, std::uint64_t seed);

/// Elementary letter id for position (i, j), 1-based.
std::string elementary_id(int n, int i, int j);
std::string diagonal_id(int i);

}  // namespace mwc
