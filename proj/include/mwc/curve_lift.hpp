#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mwc/word.hpp"

namespace mwc {

struct TargetCurve {
  std::function<CMatrix(double)> evaluation;  ///< t in [0, 1]
  std::string description;
  GroupDescriptor group;
};

struct LiftNode {
  double t = 0.0;
  ParamPoint params;
  double residual = 0.0;
};

struct PathLift {
  Word word;
  std::vector<LiftNode> nodes;
  double max_residual = 0.0;
  double max_tangent_norm = 0.0;
  int substeps = 0;
  /// Indices k where |p_k - p_{k-1}| exceeded 10 * dt * max tangent norm.
  std::vector<int> suspected_jumps;

  // Only meaningful for lift_between.
  bool connection_attempted = false;
  bool connected = false;
  std::string connection_note;
};

/// Tracks p(t) with evaluate(w, p(t)) = curve(t) from `start` over the grid t_k = k / steps.
/// Between grid nodes the step adapts: halved when the corrector needs more than 5
/// iterations or fails, doubled after 2 or fewer, clamped to [1e-5, 0.1].
/// Throws TrackingFailure(t) when the minimal step cannot be corrected or the
/// parameters blow up; throws std::invalid_argument on a start mismatch.
PathLift lift_curve(const Word& w, const TargetCurve& curve, const ParamPoint& start, int steps,
                    const Tolerances& tol = {});

/// lift_curve followed by a straight-line homotopy inside the fiber over curve(1) from the
/// tracked endpoint to `end`. A failed connection is reported in the result, not thrown.
PathLift lift_between(const Word& w, const TargetCurve& curve, const ParamPoint& start, const ParamPoint& end,
                      int steps, const Tolerances& tol = {});

/// Fiber-internal straight-line homotopy between two points of the same fiber.
/// Returns true iff every interpolated point corrects back onto the fiber without
/// jumping and the last one reaches `to`.
bool connect_in_fiber(const Word& w, const CMatrix& target, const ParamPoint& from, const ParamPoint& to,
                      const Tolerances& tol, std::string* note = nullptr, int steps = 50);

/// Built-in SL2 curves: "shear-path" x1(t) x2(t), "cross-locus" [[2, 1], [1 - 2t, 1 - t]]
/// whose lower-left entry vanishes at t = 1/2, and "constant" [[2, 1], [1, 1]].
TargetCurve builtin_curve(const std::string& name);
std::vector<std::string> builtin_curve_names();
/// The parameter where a builtin curve meets the 121 excluded locus (cross-locus only).
double cross_locus_crossing();

/// Piecewise-linear interpolation of (t, matrix) samples, each evaluation projected back
/// onto the group by Gauss-Newton on the membership equations (SL2: det = 1; Sp2n: M^T J M = J).
TargetCurve sampled_curve(std::vector<std::pair<double, CMatrix>> samples, const GroupDescriptor& group);

/// Nearest point of the group to m in the least-squares Newton sense (identity map for GLn).
CMatrix project_to_group(const CMatrix& m, const GroupDescriptor& group, const Tolerances& tol = {});

}  // namespace mwc
