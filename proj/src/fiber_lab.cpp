#include "mwc/fiber_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mwc/errors.hpp"

namespace mwc {

double AffineComponent::distance(const CVector& flat) const {
  const CVector diff = flat - base;
  if (directions.cols() == 0) return diff.norm();
  // Directions of the documented components are not orthonormal; project via least squares.
  const CVector coeffs = least_squares_solve(directions, diff).col(0);
  return (diff - directions * coeffs).norm();
}

namespace {

AffineComponent component(std::vector<std::vector<double>> directions, std::string equations) {
  const int dim = static_cast<int>(directions.front().size());
  AffineComponent c;
  c.base = CVector::Zero(dim);
  c.directions = CMatrix(dim, static_cast<Eigen::Index>(directions.size()));
  for (std::size_t k = 0; k < directions.size(); ++k)
    for (int i = 0; i < dim; ++i) c.directions(i, static_cast<Eigen::Index>(k)) = directions[k][i];
  c.equations = std::move(equations);
  return c;
}

Complex dyadic(Rng& rng) {
  const Complex z = rng.complex_normal() * 2.0;
  return {std::round(z.real() * 8.0) / 8.0, std::round(z.imag() * 8.0) / 8.0};
}

}  // namespace

std::vector<FiberComponentSpec> documented_fibers_sl2() {
  const CatalogPtr sl2 = catalog_sl2();
  const CMatrix id = CMatrix::Identity(2, 2);
  FiberComponentSpec f4;
  f4.word = Word::parse(sl2, "1212");
  f4.target = id;
  f4.citation = "fiber of 1212 over I: the lines b = d = a + c = 0 and c = a = b + d = 0";
  f4.components = {
      component({{1, 0, -1, 0}}, "b = d = a + c = 0"),
      component({{0, 1, 0, -1}}, "c = a = b + d = 0"),
  };
  FiberComponentSpec f5;
  f5.word = Word::parse(sl2, "12121");
  f5.target = id;
  f5.citation = "fiber of 12121 over I: c = 0 = b + d = a + e, or d = 0 = b = a + c + e";
  f5.components = {
      component({{1, 0, 0, 0, -1}, {0, 1, 0, -1, 0}}, "c = 0, b + d = 0, a + e = 0"),
      component({{1, 0, 0, 0, -1}, {0, 0, 1, 0, -1}}, "d = 0, b = 0, a + c + e = 0"),
  };
  return {f4, f5};
}

std::optional<FiberComponentSpec> documented_spec_for(const Word& w, const CMatrix& target, double tol) {
  if (w.entry->group.kind != GroupKind::SL2 || target.rows() != 2 || target.cols() != 2) return std::nullopt;
  for (auto& spec : documented_fibers_sl2())
    if (spec.word.str() == w.str() && (spec.target - target).norm() <= tol) {
      spec.word = Word(w.entry, spec.word.letters);
      return spec;
    }
  return std::nullopt;
}

SpecVerification verify_component_spec(const FiberComponentSpec& spec, int samples_per_component, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "verify_component_spec"));
  SpecVerification out;
  out.residuals_ok = true;
  const auto& group = spec.word.entry->group;
  for (std::size_t ci = 0; ci < spec.components.size(); ++ci) {
    const AffineComponent& comp = spec.components[ci];
    ComponentCheck check;
    for (int s = 0; s < samples_per_component; ++s) {
      CVector free(comp.free_variables());
      for (int k = 0; k < free.size(); ++k) free(k) = dyadic(rng);
      const CVector flat = comp.point(free);
      const CMatrix g = evaluate(spec.word, unflatten(spec.word, flat));
      ++check.samples;
      check.max_residual = std::max(check.max_residual, (g - spec.target).norm());
      check.max_membership = std::max(check.max_membership, group.membership_residual(g));
      bool on_other = false;
      for (std::size_t cj = 0; cj < spec.components.size(); ++cj)
        if (cj != ci && spec.components[cj].distance(flat) <= kClassifyThreshold) on_other = true;
      if (on_other)
        ++check.intersections;
      else
        ++check.off_other_components;
    }
    if (check.max_residual >= 1e-12 || check.max_membership >= 1e-12) out.residuals_ok = false;
    out.components.push_back(check);
  }
  out.distinct = spec.components.size() < 2 ||
                 std::ranges::all_of(out.components, [](const ComponentCheck& c) { return c.off_other_components > 0; });
  const CVector origin = CVector::Zero(spec.word.total_param_dim());
  out.origin_is_intersection = std::ranges::all_of(
      spec.components, [&](const AffineComponent& c) { return c.distance(origin) <= kClassifyThreshold; });
  return out;
}

// ---------------------------------------------------------------------------

NewtonResult gauss_newton(const std::function<CVector(const CVector&)>& residual,
                          const std::function<CMatrix(const CVector&)>& jac, CVector x0, const Tolerances& tol,
                          double target_norm, const std::function<bool(const CVector&)>& domain_ok) {
  NewtonResult r;
  r.x = std::move(x0);
  CVector f = residual(r.x);
  r.residual = f.norm();
  const double goal = tol.newton_tol * std::max(1.0, target_norm);
  for (int it = 0; it < tol.max_newton_iters; ++it) {
    if (r.residual < goal) break;
    const CVector step = least_squares_solve(jac(r.x), f, tol).col(0);
    if (!all_finite(step)) break;
    double alpha = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= 30; ++halving, alpha *= 0.5) {
      const CVector trial = r.x - alpha * step;
      if (domain_ok && !domain_ok(trial)) continue;
      const CVector ft = residual(trial);
      if (all_finite(ft) && ft.norm() < r.residual) {
        r.x = trial;
        f = ft;
        r.residual = ft.norm();
        improved = true;
        break;
      }
    }
    r.iterations = it + 1;
    if (!improved) break;
  }
  r.converged = r.residual < goal;
  return r;
}

int FiberSampleReport::unclassified() const {
  return static_cast<int>(std::ranges::count_if(solutions, [](const FiberSolution& s) { return s.component < 0; }));
}

namespace {

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

std::function<bool(const CVector&)> domain_check(const Word& w) {
  return [w](const CVector& flat) {
    try {
      check_point(w, unflatten(w, flat));
      return true;
    } catch (const DomainError&) {
      return false;
    }
  };
}

void dedup_and_sort(FiberSampleReport& rep, std::vector<CVector>& points, const Tolerances& tol,
                    const std::optional<FiberComponentSpec>& spec,
                    const std::function<double(const CVector&)>& residual_of) {
  std::ranges::sort(points, lex_less);
  std::vector<CVector> kept;
  for (const auto& p : points) {
    const bool dup = std::ranges::any_of(kept, [&](const CVector& k) { return (k - p).norm() <= kDedupThreshold; });
    if (!dup) kept.push_back(p);
  }
  for (const auto& flat : kept) {
    FiberSolution s;
    s.params = unflatten(rep.word, flat);
    s.residual = residual_of(flat);
    s.nullity = rep.word.total_param_dim() - numerical_rank(jacobian(rep.word, s.params), tol);
    if (spec) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < spec->components.size(); ++c) {
        const double d = spec->components[c].distance(flat);
        if (d <= kClassifyThreshold) s.on_components.push_back(static_cast<int>(c));
        if (d < best) {
          best = d;
          if (d <= kClassifyThreshold) s.component = static_cast<int>(c);
        }
      }
      s.component_distance = best;
    }
    rep.solutions.push_back(std::move(s));
  }
}

}  // namespace

FiberSampleReport newton_fiber_sample(const Word& w, const CMatrix& target, int starts, std::uint64_t seed,
                                      const Tolerances& tol) {
  if (starts < 1) throw std::invalid_argument("newton_fiber_sample needs at least one start");
  FiberSampleReport rep;
  rep.word = w;
  rep.target = target;
  rep.starts = starts;
  const auto spec = documented_spec_for(w, target);
  rep.has_components = spec.has_value();

  auto residual = [&](const CVector& flat) { return CVector(vec(evaluate(w, unflatten(w, flat)) - target)); };
  auto jac = [&](const CVector& flat) { return jacobian(w, unflatten(w, flat)); };
  const auto domain_ok = domain_check(w);
  const double scale = target.norm();

  Rng root(derive_seed(seed, "newton_fiber_sample"));
  std::vector<CVector> converged;
  for (int s = 0; s < starts; ++s) {
    Rng rng = root.child(static_cast<std::uint64_t>(s));
    const NewtonResult r = gauss_newton(residual, jac, flatten(random_point(w, rng)), tol, scale, domain_ok);
    if (r.converged) converged.push_back(r.x);
  }
  rep.converged = static_cast<int>(converged.size());
  dedup_and_sort(rep, converged, tol, spec, [&](const CVector& x) { return residual(x).norm(); });
  return rep;
}

FiberSampleReport newton_vector_fiber_sample(const Word& w, const CVector& from, const CVector& to, int starts,
                                             std::uint64_t seed, const Tolerances& tol) {
  const int n = w.entry->group.ambient_size;
  if (from.size() != n || to.size() != n) throw std::invalid_argument("vector fiber: vector length mismatch");
  FiberSampleReport rep;
  rep.word = w;
  rep.target = to.transpose();
  rep.starts = starts;

  const Eigen::RowVectorXcd row = from.transpose();
  auto residual = [&](const CVector& flat) {
    return CVector((row * evaluate(w, unflatten(w, flat))).transpose() - to);
  };
  // d(v g)/dp_k = v (dg/dp_k); rows of the vec-ordered Jacobian pick out columns of g.
  auto jac = [&](const CVector& flat) {
    const CMatrix full = jacobian(w, unflatten(w, flat));
    CMatrix out(n, full.cols());
    for (Eigen::Index k = 0; k < full.cols(); ++k) {
      const CMatrix dg = Eigen::Map<const CMatrix>(full.col(k).data(), n, n);
      out.col(k) = (row * dg).transpose();
    }
    return out;
  };
  const auto domain_ok = domain_check(w);
  Rng root(derive_seed(seed, "newton_vector_fiber_sample"));
  std::vector<CVector> converged;
  for (int s = 0; s < starts; ++s) {
    Rng rng = root.child(static_cast<std::uint64_t>(s));
    const NewtonResult r = gauss_newton(residual, jac, flatten(random_point(w, rng)), tol, to.norm(), domain_ok);
    if (r.converged) converged.push_back(r.x);
  }
  rep.converged = static_cast<int>(converged.size());
  dedup_and_sort(rep, converged, tol, std::nullopt, [&](const CVector& x) { return residual(x).norm(); });
  return rep;
}

// ---------------------------------------------------------------------------

IntMatrix torus_exponent_matrix(const Word& w) {
  std::size_t rows = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w.letter(i);
    if (!l.monomial_exponents || l.param_dim() != 1)
      throw std::invalid_argument("letter " + l.id + " is not a monomial torus curve");
    rows = std::max(rows, l.monomial_exponents->size());
  }
  IntMatrix m(rows, w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const auto& e = *w.letter(j).monomial_exponents;
    for (std::size_t i = 0; i < e.size(); ++i) m(i, j) = e[i];
  }
  return m;
}

mpz_class torus_component_count(const IntMatrix& m) {
  const auto factors = smith_normal_form(m);
  if (factors.size() < m.rows())
    throw std::invalid_argument("exponent matrix is rank-deficient: the kernel does not have the expected dimension");
  mpz_class count = 1;
  for (const auto& d : factors)
    if (d > 1) count *= d;
  return count;
}

}  // namespace mwc
