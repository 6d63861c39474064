#include "mwc/curve_lift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mwc/errors.hpp"
#include "mwc/fiber_lab.hpp"

namespace mwc {

namespace {

constexpr double kMinStep = 1e-5;
constexpr double kMaxStep = 0.1;
constexpr double kBlowUp = 1e8;
constexpr double kDiffStep = 1e-6;
constexpr double kMaxNormalFraction = 0.5;

CVector curve_velocity(const TargetCurve& curve, double t) {
  const double lo = std::max(0.0, t - kDiffStep);
  const double hi = std::min(1.0, t + kDiffStep);
  return vec((curve.evaluation(hi) - curve.evaluation(lo)) / (hi - lo));
}

struct Tracker {
  const Word& w;
  const TargetCurve& curve;
  const Tolerances& tol;
  double max_tangent = 0.0;

  CVector tangent(double t, const CVector& p) {
    const CMatrix j = jacobian(w, unflatten(w, p));
    const CVector v = least_squares_solve(j, curve_velocity(curve, t), tol).col(0);
    max_tangent = std::max(max_tangent, v.norm());
    return v;
  }

  CVector rk4(double t, const CVector& p, double h) {
    const CVector k1 = tangent(t, p);
    const CVector k2 = tangent(t + h / 2, p + (h / 2) * k1);
    const CVector k3 = tangent(t + h / 2, p + (h / 2) * k2);
    const CVector k4 = tangent(t + h, p + h * k3);
    return p + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  NewtonResult correct(const CVector& guess, const CMatrix& target) const {
    auto residual = [&](const CVector& x) { return CVector(vec(evaluate(w, unflatten(w, x)) - target)); };
    auto jac = [&](const CVector& x) { return jacobian(w, unflatten(w, x)); };
    auto domain = [&](const CVector& x) {
      try {
        check_point(w, unflatten(w, x));
        return true;
      } catch (const DomainError&) {
        return false;
      }
    };
    return gauss_newton(residual, jac, guess, tol, target.norm(), domain);
  }
};

double node_residual(const Word& w, const ParamPoint& p, const CMatrix& target) {
  return (evaluate(w, p) - target).norm();
}

}  // namespace

PathLift lift_curve(const Word& w, const TargetCurve& curve, const ParamPoint& start, int steps,
                    const Tolerances& tol) {
  if (steps < 2) throw std::invalid_argument("lift_curve needs at least 2 steps");
  tol.validate();
  check_point(w, start);
  const CMatrix g0 = curve.evaluation(0.0);
  const double r0 = node_residual(w, start, g0);
  if (!(r0 < tol.residual_tol)) {
    std::ostringstream msg;
    msg << "start-mismatch: start parameters evaluate " << r0 << " away from curve(0)";
    throw std::invalid_argument(msg.str());
  }

  PathLift lift;
  lift.word = w;
  lift.nodes.push_back({0.0, start, r0});
  lift.max_residual = r0;

  Tracker tracker{w, curve, tol};
  CVector p = flatten(start);
  double t = 0.0;
  // Start small: a start on a singular point of the fiber leaves an O(h) offset along the
  // fiber that later steps never remove.
  double h = kMinStep;
  for (int k = 1; k <= steps; ++k) {
    const double t_node = static_cast<double>(k) / steps;
    while (t < t_node) {
      const bool last = h >= t_node - t;
      const double dt = last ? t_node - t : h;
      const double t_next = last ? t_node : t + dt;
      const CMatrix target = curve.evaluation(t_next);
      const CVector predicted = tracker.rk4(t, p, dt);
      NewtonResult corrected;
      if (all_finite(predicted)) corrected = tracker.correct(predicted, target);
      const bool ok = all_finite(predicted) && corrected.converged && corrected.x.norm() < kBlowUp;
      if (!ok) {
        if (dt <= kMinStep) {
          std::ostringstream msg;
          msg << "tracking failure near t = " << t << ": corrector diverged at the minimal step";
          throw TrackingFailure(t, msg.str());
        }
        h = std::max(kMinStep, dt / 2);
        continue;
      }
      const double bound = 10.0 * dt * std::max(tracker.max_tangent, 1e-12);
      if ((corrected.x - p).norm() > bound && dt > kMinStep) {
        // Corrector landed far from the predicted branch: retry with a smaller step.
        h = std::max(kMinStep, dt / 2);
        continue;
      }
      ++lift.substeps;
      if ((corrected.x - p).norm() > bound) lift.suspected_jumps.push_back(static_cast<int>(lift.nodes.size()));
      p = corrected.x;
      t = t_next;
      if (corrected.iterations > 5) h = std::max(kMinStep, dt / 2);
      else if (corrected.iterations <= 2) h = std::min(kMaxStep, 2 * dt);
    }
    const ParamPoint params = unflatten(w, p);
    const CMatrix target = curve.evaluation(t_node);
    const double r = node_residual(w, params, target);
    if (!(r < tol.residual_tol)) {
      std::ostringstream msg;
      msg << "tracking failure at t = " << t_node << ": node residual " << r;
      throw TrackingFailure(t_node, msg.str());
    }
    lift.nodes.push_back({t_node, params, r});
    lift.max_residual = std::max(lift.max_residual, r);
  }
  lift.max_tangent_norm = tracker.max_tangent;
  return lift;
}

bool connect_in_fiber(const Word& w, const CMatrix& target, const ParamPoint& from, const ParamPoint& to,
                      const Tolerances& tol, std::string* note, int steps) {
  const CVector a = flatten(from);
  const CVector b = flatten(to);
  const double step_len = (b - a).norm() / steps;
  const TargetCurve unused;
  Tracker tracker{w, unused, tol};
  CVector prev = a;
  for (int k = 1; k <= steps; ++k) {
    const double lambda = static_cast<double>(k) / steps;
    const CVector q = (1 - lambda) * a + lambda * b;
    const NewtonResult r = tracker.correct(q, target);
    if (!r.converged) {
      if (note) *note = "corrector failed at homotopy parameter " + std::to_string(lambda);
      return false;
    }
    const CVector d = r.x - prev;
    if (d.norm() > 10.0 * std::max(step_len, 1e-12)) {
      if (note) *note = "corrected path jumped at homotopy parameter " + std::to_string(lambda);
      return false;
    }
    // A move inside one fiber component is nearly tangent to it, i.e. close to ker J. A large
    // component normal to the kernel means the corrector switched branches.
    const CMatrix j = jacobian(w, unflatten(w, prev));
    const CVector normal_part = least_squares_solve(j, j * d, tol).col(0);
    if (d.norm() > 0 && normal_part.norm() > kMaxNormalFraction * d.norm()) {
      if (note) *note = "corrected path left the tangent space of the fiber at homotopy parameter " + std::to_string(lambda);
      return false;
    }
    if (numerical_rank(jacobian(w, unflatten(w, r.x)), tol) < w.entry->group.dim) {
      if (note) *note = "corrected path meets a singular point of the fiber at homotopy parameter " + std::to_string(lambda);
      return false;
    }
    prev = r.x;
  }
  if ((prev - b).norm() > 1e-6) {
    if (note) *note = "homotopy ended away from the requested endpoint";
    return false;
  }
  if (note) *note = "connected by a corrected straight-line homotopy";
  return true;
}

PathLift lift_between(const Word& w, const TargetCurve& curve, const ParamPoint& start, const ParamPoint& end,
                      int steps, const Tolerances& tol) {
  check_point(w, end);
  const CMatrix g1 = curve.evaluation(1.0);
  if (!(node_residual(w, end, g1) < tol.residual_tol))
    throw std::invalid_argument("end parameters do not evaluate to curve(1)");
  PathLift lift = lift_curve(w, curve, start, steps, tol);
  lift.connection_attempted = true;
  lift.connected = connect_in_fiber(w, g1, lift.nodes.back().params, end, tol, &lift.connection_note);
  if (!lift.connected)
    lift.connection_note += " (inconclusive: a connecting curve may exist that this homotopy did not find)";
  return lift;
}

// ---------------------------------------------------------------------------

TargetCurve builtin_curve(const std::string& name) {
  const GroupDescriptor sl2 = catalog_sl2()->group;
  TargetCurve c;
  c.group = sl2;
  c.description = name;
  if (name == "shear-path") {
    c.evaluation = [](double t) {
      CMatrix m(2, 2);
      m << 1 + t * t, t, t, 1;
      return m;
    };
  } else if (name == "cross-locus") {
    c.evaluation = [](double t) {
      CMatrix m(2, 2);
      m << 2, 1, 1 - 2 * t, 1 - t;
      return m;
    };
  } else if (name == "constant") {
    c.evaluation = [](double) {
      CMatrix m(2, 2);
      m << 2, 1, 1, 1;
      return m;
    };
  } else {
    throw std::invalid_argument("unknown builtin curve '" + name + "'");
  }
  return c;
}

std::vector<std::string> builtin_curve_names() { return {"shear-path", "cross-locus", "constant"}; }

double cross_locus_crossing() { return 0.5; }

CMatrix project_to_group(const CMatrix& m, const GroupDescriptor& group, const Tolerances& tol) {
  const Eigen::Index n = m.rows();
  switch (group.kind) {
    case GroupKind::GLn: return m;
    case GroupKind::Torus2: {
      CMatrix d = CMatrix::Zero(n, n);
      d.diagonal() = m.diagonal();
      return d;
    }
    case GroupKind::SL2: {
      auto residual = [&](const CVector& x) {
        CVector r(1);
        r(0) = x(0) * x(3) - x(1) * x(2) - 1.0;
        return r;
      };
      auto jac = [&](const CVector& x) {
        CMatrix j(1, 4);
        j << x(3), -x(2), -x(1), x(0);  // column-major entries g11, g21, g12, g22
        return j;
      };
      const NewtonResult r = gauss_newton(residual, jac, vec(m), tol, 1.0);
      if (!r.converged) throw NotInGroupError("could not project sample onto SL2");
      return Eigen::Map<const CMatrix>(r.x.data(), n, n);
    }
    case GroupKind::Sp2n: {
      const CMatrix j = symplectic_form(static_cast<int>(n / 2));
      auto residual = [&](const CVector& x) {
        const CMatrix g = Eigen::Map<const CMatrix>(x.data(), n, n);
        return CVector(vec(g.transpose() * j * g - j));
      };
      auto jac = [&](const CVector& x) {
        const CMatrix g = Eigen::Map<const CMatrix>(x.data(), n, n);
        CMatrix out(n * n, n * n);
        for (Eigen::Index c = 0; c < n; ++c)
          for (Eigen::Index r = 0; r < n; ++r) {
            CMatrix e = CMatrix::Zero(n, n);
            e(r, c) = 1.0;
            out.col(c * n + r) = vec(e.transpose() * j * g + g.transpose() * j * e);
          }
        return out;
      };
      const NewtonResult r = gauss_newton(residual, jac, vec(m), tol, j.norm());
      if (!r.converged) throw NotInGroupError("could not project sample onto Sp2n");
      return Eigen::Map<const CMatrix>(r.x.data(), n, n);
    }
  }
  return m;
}

TargetCurve sampled_curve(std::vector<std::pair<double, CMatrix>> samples, const GroupDescriptor& group) {
  if (samples.size() < 2) throw std::invalid_argument("a sampled curve needs at least two samples");
  std::ranges::sort(samples, {}, &std::pair<double, CMatrix>::first);
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw std::invalid_argument("curve sample times must be strictly increasing");
  if (samples.front().first != 0.0 || samples.back().first != 1.0)
    throw std::invalid_argument("curve samples must start at t = 0 and end at t = 1");
  for (const auto& [t, m] : samples)
    if (m.rows() != group.ambient_size || m.cols() != group.ambient_size)
      throw std::invalid_argument("curve sample has the wrong matrix size");

  TargetCurve c;
  c.group = group;
  c.description = "piecewise-linear through " + std::to_string(samples.size()) + " samples";
  c.evaluation = [samples = std::move(samples), group](double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto hi = std::ranges::lower_bound(samples, t, {}, &std::pair<double, CMatrix>::first);
    if (hi == samples.begin()) ++hi;
    if (hi == samples.end()) --hi;
    const auto lo = std::prev(hi);
    const double s = (t - lo->first) / (hi->first - lo->first);
    return project_to_group(((1 - s) * lo->second + s * hi->second).eval(), group);
  };
  return c;
}

}  // namespace mwc
