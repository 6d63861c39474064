#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mwc/word.hpp"

namespace mwc {

/// Affine-linear parametrization s -> base + directions * s of a fiber component,
/// in flattened parameter coordinates.
struct AffineComponent {
  CVector base;
  CMatrix directions;  ///< one column per free variable
  std::string equations;

  int free_variables() const { return static_cast<int>(directions.cols()); }
  CVector point(const CVector& free) const { return base + directions * free; }
  /// Euclidean distance from a flattened parameter vector to the component.
  double distance(const CVector& flat) const;
};

struct FiberComponentSpec {
  Word word;
  CMatrix target;
  std::vector<AffineComponent> components;
  std::string citation;
};

/// The documented fibers over I in SL2: 1212 (two lines) and 12121 (two planes).
std::vector<FiberComponentSpec> documented_fibers_sl2();
/// The documented spec for (w, target), if there is one.
std::optional<FiberComponentSpec> documented_spec_for(const Word& w, const CMatrix& target, double tol = 1e-12);

struct ComponentCheck {
  int samples = 0;
  double max_residual = 0.0;
  double max_membership = 0.0;
  int off_other_components = 0;  ///< samples lying on no other component
  int intersections = 0;         ///< samples lying on another component too
};

struct SpecVerification {
  std::vector<ComponentCheck> components;
  bool residuals_ok = false;
  bool distinct = false;
  bool origin_is_intersection = false;  ///< the all-zero point lies on every component
  bool passed() const { return residuals_ok && distinct; }
};

/// Samples every component at dyadic free-variable values (exactly representable, so
/// products are computed without rounding at unit scale) and checks target match to
/// 1e-12 and pairwise distinctness.
SpecVerification verify_component_spec(const FiberComponentSpec& spec, int samples_per_component, std::uint64_t seed);

struct FiberSolution {
  ParamPoint params;
  double residual = 0.0;
  int nullity = 0;
  int component = -1;              ///< index into the documented components, -1 unclassified
  std::vector<int> on_components;  ///< every component within the classification threshold
  double component_distance = 0.0;
};

struct FiberSampleReport {
  Word word;
  CMatrix target;
  int starts = 0;
  int converged = 0;
  std::vector<FiberSolution> solutions;  ///< deduplicated, sorted
  bool has_components = false;
  int unclassified() const;
};

inline constexpr double kClassifyThreshold = 1e-6;
inline constexpr double kDedupThreshold = 1e-6;

/// Gauss-Newton from seeded random starts on evaluate(w, p) - target; keeps converged
/// points, deduplicates, classifies against the documented components when known.
FiberSampleReport newton_fiber_sample(const Word& w, const CMatrix& target, int starts, std::uint64_t seed,
                                      const Tolerances& tol = {});

/// Samples {x : v mu_w(x) = v'} for row vectors v, v' (Sp2n vector fibers). Reports
/// converged points only; no component structure is asserted.
FiberSampleReport newton_vector_fiber_sample(const Word& w, const CVector& from, const CVector& to, int starts,
                                             std::uint64_t seed, const Tolerances& tol = {});

struct NewtonResult {
  CVector x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Gauss-Newton with minimum-norm steps and step halving (at most 30 halvings per step).
/// `domain_ok` rejects trial points outside the parameter domain.
NewtonResult gauss_newton(const std::function<CVector(const CVector&)>& residual,
                          const std::function<CMatrix(const CVector&)>& jac, CVector x0, const Tolerances& tol,
                          double target_norm, const std::function<bool(const CVector&)>& domain_ok = {});

/// Integer matrix whose (i, j) entry is the exponent of parameter j in target coordinate i.
IntMatrix torus_exponent_matrix(const Word& w);

/// Torsion order of Z^n / rowlattice(m): the number of components of the kernel of the
/// monomial map. Throws std::invalid_argument when m has rank below its row count.
mpz_class torus_component_count(const IntMatrix& m);

}  // namespace mwc
