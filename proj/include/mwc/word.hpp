#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/groups.hpp"

namespace mwc {

/// A finite sequence of letters of one catalog entry; determines the product map mu_w.
struct Word {
  CatalogPtr entry;
  std::vector<std::string> letters;  ///< canonical letter ids

  Word() = default;
  Word(CatalogPtr e, std::vector<std::string> ls);

  /// Digits are read one per letter; otherwise tokens are separated by '.'.
  static Word parse(CatalogPtr entry, std::string_view text);

  std::string str() const;
  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  int total_param_dim() const;
  const ChartedSubvariety& letter(std::size_t i) const { return entry->letter(letters[i]); }

  Word concat(const Word& other) const;
  Word power(int k) const;
  Word slice(std::size_t begin, std::size_t end) const;

  bool operator==(const Word& other) const { return letters == other.letters; }
};

/// One parameter block per letter.
using ParamPoint = std::vector<CVector>;

ParamPoint unit_point(const Word& w);
/// Complex Gaussian affine coordinates, exp of a complex Gaussian on torus coordinates.
/// With zero_probability > 0 each affine coordinate is independently set to 0 (to reach
/// critical loci) and each torus coordinate to 1.
ParamPoint random_point(const Word& w, Rng& rng, double zero_probability = 0.0);

CVector flatten(const ParamPoint& p);
ParamPoint unflatten(const Word& w, const CVector& flat);
/// Column-major vectorization of a matrix.
CVector vec(const CMatrix& m);

/// Throws DomainError if p does not match w or has a zero torus coordinate.
void check_point(const Word& w, const ParamPoint& p);

/// The ordered product of the chart values.
CMatrix evaluate(const Word& w, const ParamPoint& p);

/// Derivative of evaluate: ambient_size^2 rows (vec order), total_param_dim columns.
CMatrix jacobian(const Word& w, const ParamPoint& p);

bool contains_consecutive(const Word& w, const Word& u);
/// True iff u is a (not necessarily contiguous) subsequence of w.
bool contains_subsequence(const Word& w, const Word& u);

/// True iff every letter of w is a closed subgroup letter, so runs may be collapsed.
bool collapsible(const Word& w);
/// Replaces every run of a repeated letter by a single copy. Throws std::invalid_argument
/// when a repeated letter is not a subgroup letter.
Word normalize(const Word& w);
/// Collapses the word and multiplies run parameters through the subgroup chart so that
/// evaluate(result) == evaluate(w, p).
std::pair<Word, ParamPoint> normalize_point(const Word& w, const ParamPoint& p);

struct CriticalSample {
  ParamPoint point;
  int jacobian_rank = 0;
  bool is_critical = false;  ///< rank below dim G
};

struct RankSample {
  int max_rank = 0;
  std::vector<CriticalSample> samples;
};

/// Jacobian ranks at `trials` seeded random points.
RankSample sample_rank(const Word& w, int trials, std::uint64_t seed, const Tolerances& tol = {});

struct ContainmentRanks {
  int rank_u = 0;
  int rank_w = 0;
  int rank_uw = 0;
  /// (x, y) in J_uw while x or y is not critical.
  bool violates(int dim) const { return rank_uw < dim && (rank_u == dim || rank_w == dim); }
};

ContainmentRanks containment_ranks(const Word& u, const Word& w, const ParamPoint& x, const ParamPoint& y,
                                   const Tolerances& tol = {});

struct ContainmentReport {
  int trials = 0;
  int violations = 0;
  int critical_u = 0;   ///< samples with x in J_u
  int critical_w = 0;
  int critical_uw = 0;
  int full_rank_checks = 0;  ///< samples where the contrapositive had a premise to test
};

/// Property test of J_uw inside J_u x J_w on seeded points that deliberately include
/// zeroed coordinates.
ContainmentReport critical_containment_check(const Word& u, const Word& w, int trials, std::uint64_t seed,
                                             const Tolerances& tol = {});

struct RoundtripReport {
  int trials = 0;
  int recovered = 0;
  int excluded = 0;  ///< samples where the inverse reported the excluded locus
  double max_param_error = 0.0;
};

/// Pushes random parameters forward through evaluate and back through `inverse`.
RoundtripReport check_birational_roundtrip(const Word& w, const std::function<ParamPoint(const CMatrix&)>& inverse,
                                           int trials, std::uint64_t seed, double recover_tol = 1e-9);

}  // namespace mwc
