// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mwc/certify.hpp"
#include "mwc/curve_lift.hpp"
#include "mwc/errors.hpp"
#include "mwc/factorizers.hpp"
#include "mwc/fiber_lab.hpp"
#include "support.hpp"

using namespace mwc;
using namespace mwc::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// 1. 121 round trip.
Outcome c1() {
  const Word w = Word::parse(catalog_sl2(), "121");
  Rng rng(derive_seed(1, "acceptance-1"));
  double worst = 0.0;
  int trials = 0;
  while (trials < 100) {
    const ParamPoint p = random_point(w, rng);
    if (std::abs(p[1](0)) <= 0.1) continue;
    ++trials;
    const Factorization f = sl2_121(evaluate(w, p));
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(f.params[k](0) - p[k](0)));
  }
  return {worst < 1e-9, "max parameter error " + fmt(worst) + " over 100 trials"};
}

// 2. 1212 reaches everything; 121 rejects g21 = 0.
Outcome c2() {
  Rng rng(derive_seed(2, "acceptance-2"));
  double worst = 0.0;
  std::vector<CMatrix> targets;
  for (int i = 0; i < 100; ++i) targets.push_back(random_sl2(rng));
  const auto upper = upper_sl2_cases();
  targets.insert(targets.end(), upper.begin(), upper.end());
  for (const auto& g : targets) worst = std::max(worst, sl2_1212(g).residual);
  int rejected = 0;
  for (const auto& g : upper) {
    try {
      sl2_121(g);
    } catch (const ExcludedLocusError&) {
      ++rejected;
    }
  }
  return {worst < 1e-10 && rejected == 10,
          "1212 max residual " + fmt(worst) + " on 110 targets; 121 rejected " + std::to_string(rejected) + "/10"};
}

// 3. 1212 fiber over I.
Outcome c3() {
  const auto spec = documented_fibers_sl2().at(0);
  const SpecVerification v = verify_component_spec(spec, 20, 3);
  const FiberSampleReport r = newton_fiber_sample(spec.word, spec.target, 200, 3);
  const bool ok = v.passed() && r.converged > 0 && r.unclassified() == 0;
  return {ok, "components " + std::string(v.passed() ? "verified" : "REJECTED") + "; " + std::to_string(r.converged) +
                  "/200 starts converged, " + std::to_string(r.solutions.size()) + " distinct, " +
                  std::to_string(r.unclassified()) + " unclassified"};
}

// 4. 12121 fiber components.
Outcome c4() {
  const auto spec = documented_fibers_sl2().at(1);
  const SpecVerification v = verify_component_spec(spec, 20, 4);
  double worst = 0.0;
  for (const auto& c : v.components) worst = std::max(worst, c.max_residual);
  return {v.passed(), "max residual " + fmt(worst) + ", components distinct: " + (v.distinct ? "yes" : "no")};
}

// 5. Torus component counts.
Outcome c5() {
  const mpz_class direct = torus_component_count(IntMatrix{{1, 2, 1, 2}, {2, 1, 2, 1}});
  const auto t2 = catalog_torus2();
  const mpz_class six = torus_component_count(torus_exponent_matrix(Word::parse(t2, "121212")));
  const mpz_class eight = torus_component_count(torus_exponent_matrix(Word::parse(t2, "12121212")));
  return {direct == 3 && six == 3 && eight == 3,
          "counts " + direct.get_str() + ", " + six.get_str() + ", " + eight.get_str()};
}

// 6. Jacobian ranks and finite-difference agreement.
Outcome c6() {
  const auto sl2 = catalog_sl2();
  bool ok = true;
  std::string detail = "identity ranks";
  for (const char* s : {"12", "121", "1212", "121212"}) {
    const Word w = Word::parse(sl2, s);
    const int r = numerical_rank(jacobian(w, unit_point(w)));
    detail += " " + std::to_string(r);
    ok &= r == 2;
  }
  const Word w121 = Word::parse(sl2, "121");
  Rng rng(derive_seed(6, "acceptance-6"));
  int generic_full = 0;
  for (int i = 0; i < 20; ++i) generic_full += numerical_rank(jacobian(w121, random_point(w121, rng))) == 3;
  ok &= generic_full == 20;
  detail += "; 121 generic rank 3 in " + std::to_string(generic_full) + "/20";

  const std::vector<Word> words = {Word::parse(sl2, "121"), Word::parse(sl2, "2312"),
                                   Word::parse(catalog_gln(3), "L.U"), Word::parse(catalog_sp2n(2, 6), "1213"),
                                   Word::parse(catalog_gln(2), "U.L.U")};
  double worst = 0.0;
  for (const Word& w : words) {
    for (int i = 0; i < 10; ++i) {
      const ParamPoint p = random_point(w, rng);
      const CMatrix j = jacobian(w, p);
      const CVector x = flatten(p);
      const double h = 1e-6;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        CVector xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const CVector fd = (vec(evaluate(w, unflatten(w, xp))) - vec(evaluate(w, unflatten(w, xm)))) / (2 * h);
        worst = std::max(worst, (fd - j.col(k)).norm() / std::max(1.0, j.col(k).norm()));
      }
    }
  }
  ok &= worst < 1e-6;
  detail += "; finite-difference error " + fmt(worst);
  return {ok, detail};
}

// 7. ULU on every matrix, LU rejects permutations.
Outcome c7() {
  Rng rng(derive_seed(7, "acceptance-7"));
  double worst = 0.0;
  int lu_rejections = 0, permutations = 0, wrong_index = 0;
  for (int n : {2, 3, 5, 8}) {
    for (int i = 0; i < 100; ++i) {
      if (i % 5 == 0) {
        const auto perm = random_nonidentity_permutation(rng, n);
        const CMatrix p = permutation_matrix(perm);
        worst = std::max(worst, gln_ulu(p, 7).residual);
        ++permutations;
        try {
          gln_lu(p);
        } catch (const LeadingMinorError& e) {
          ++lu_rejections;
          wrong_index += e.index() != first_singular_leading_block(perm);
        }
      } else {
        worst = std::max(worst, gln_ulu(random_matrix(rng, n, n), 7).residual);
      }
    }
  }
  return {worst < 1e-8 && lu_rejections == permutations && wrong_index == 0,
          "ULU max residual " + fmt(worst) + "; LU rejected " + std::to_string(lu_rejections) + "/" +
              std::to_string(permutations) + " permutations, " + std::to_string(wrong_index) + " wrong minor index"};
}

// 8. Certificate derivations.
Outcome c8() {
  const auto sl2 = catalog_sl2();
  const auto gln = catalog_gln(3);
  bool ok = true;
  std::string detail;
  std::vector<Word> irreducible_words;
  auto expect = [&](const std::string& label, const PropertyCertificate& c, Polarity want) {
    const bool hit = c.polarity == want;
    ok &= hit;
    detail += label + "=" + to_string(c.polarity) + (c.rule.empty() ? "" : "(" + c.rule + ")") + " ";
    if (hit && want == Polarity::holds && c.property == Property::irreducible) irreducible_words.push_back(c.word);
  };

  const std::vector<PropertyCertificate> reg_i = {
      registered(Word::parse(sl2, "1212"), Property::open, Polarity::holds),
      registered(Word::parse(sl2, "212"), Property::birational, Polarity::holds)};
  expect("i", certify(Word::parse(sl2, "121212"), Property::irreducible, reg_i), Polarity::holds);

  const std::vector<PropertyCertificate> reg_ii = {
      registered(Word::parse(gln, "21"), Property::open, Polarity::holds),
      registered(Word::parse(gln, "12"), Property::birational, Polarity::holds)};
  expect("ii", certify(Word::parse(gln, "212"), Property::irreducible, reg_ii), Polarity::holds);

  const Word u = Word::parse(sl2, "121");
  const std::vector<PropertyCertificate> reg_iii = {registered(u, Property::birational, Polarity::holds)};
  expect("iii-open", certify(u.power(4), Property::open, reg_iii), Polarity::holds);
  for (const std::string pad : {"", "2", "12"}) {
    const Word side = pad.empty() ? Word(sl2, {}) : Word::parse(sl2, pad);
    const Word w = side.concat(u.power(5)).concat(side);
    expect("iii[" + pad + "]", certify(w, Property::irreducible, reg_iii), Polarity::holds);
  }

  const auto t2 = catalog_torus2();
  for (const char* s : {"12", "1212", "121212"})
    expect(std::string("iv[") + s + "]", certify(Word::parse(t2, s), Property::irreducible), Polarity::fails);

  int closure = 0;
  for (const Word& w : irreducible_words) {
    const std::vector<PropertyCertificate>& reg = w.entry == gln ? reg_ii : (w.size() > 10 ? reg_iii : reg_i);
    closure += certify(w, Property::surjective, reg).polarity == Polarity::holds &&
               certify(w, Property::dominant, reg).polarity == Polarity::holds;
  }
  ok &= closure == static_cast<int>(irreducible_words.size()) && irreducible_words.size() == 5;
  detail += "v=" + std::to_string(closure) + "/" + std::to_string(irreducible_words.size());
  return {ok, detail};
}

// 9. One-parameter words.
Outcome c9() {
  bool ok = true;
  for (int n = 1; n <= 8; ++n) {
    const OneParamWord opw = one_param_word(n);
    ok &= opw.length == (3 * n * n - n) / 2 && static_cast<int>(opw.word.size()) == opw.length &&
          opw.length < 1.5 * n * n;
  }
  const std::string sl2_word = one_param_word_sl2().word.str();
  ok &= sl2_word == "2312";
  Rng rng(derive_seed(9, "acceptance-9"));
  double worst = 0.0;
  for (int n : {2, 3, 4})
    for (int i = 0; i < 50; ++i) worst = std::max(worst, one_param_factor(random_matrix(rng, n, n), n, 9).residual);
  ok &= worst < 1e-8;
  return {ok, "lengths (3n^2-n)/2 for n=1..8; SL2 word " + sl2_word + "; max residual " + fmt(worst)};
}

// 10. Sp2n factorizations.
Outcome c10() {
  Rng rng(derive_seed(10, "acceptance-10"));
  double worst_param = 0.0, worst_asym = 0.0, worst_1213 = 0.0;
  for (int n : {2, 3}) {
    const auto sp = catalog_sp2n(n, 10);
    const Word w121 = Word::parse(sp, "121");
    for (int i = 0; i < 50; ++i) {
      ParamPoint p;
      for (int k = 0; k < 3; ++k) p.push_back(pack_symmetric(random_symmetric(rng, n)));
      const Factorization f = sp2n_121_onto_Z(evaluate(w121, p), sp);
      for (int k = 0; k < 3; ++k) {
        worst_param = std::max(worst_param, (f.params[k] - p[k]).norm() / std::max(1.0, p[k].norm()));
        worst_asym = std::max(worst_asym, asymmetry(unpack_symmetric(f.params[k], n)));
      }
    }
    const Word w1212 = Word::parse(sp, "1212");
    for (int i = 0; i < 50; ++i) {
      ParamPoint p;
      for (int k = 0; k < 4; ++k) p.push_back(pack_symmetric(random_symmetric(rng, n)));
      worst_1213 = std::max(worst_1213, sp2n_1213(evaluate(w1212, p), sp).residual);
    }
  }
  return {worst_param < 1e-9 && worst_asym < 1e-9 && worst_1213 < 1e-7,
          "121 recovery error " + fmt(worst_param) + ", asymmetry " + fmt(worst_asym) + "; 1213 max residual " +
              fmt(worst_1213)};
}

// 11. Curve lifting.
Outcome c11() {
  const auto sl2 = catalog_sl2();
  bool ok = true;
  std::string detail;

  const Word w1212 = Word::parse(sl2, "1212");
  const TargetCurve shear = builtin_curve("shear-path");
  const PathLift a = lift_curve(w1212, shear, unit_point(w1212), 100);
  const PathLift b = lift_curve(w1212, shear, unit_point(w1212), 200);
  double drift = 0.0;
  for (std::size_t k = 0; k < a.nodes.size(); ++k)
    drift = std::max(drift, (flatten(a.nodes[k].params) - flatten(b.nodes[2 * k].params)).norm());
  ok &= a.max_residual < 1e-8 && drift < 1e-4;
  detail += "shear-path residual " + fmt(a.max_residual) + ", doubling drift " + fmt(drift);

  const Word w121 = Word::parse(sl2, "121");
  const TargetCurve cross = builtin_curve("cross-locus");
  try {
    lift_curve(w121, cross, sl2_121(cross.evaluation(0)).params, 100);
    ok = false;
    detail += "; cross-locus tracked without failure";
  } catch (const TrackingFailure& e) {
    const double err = std::abs(e.t() - cross_locus_crossing());
    ok &= err <= 0.05;
    detail += "; cross-locus failed at t=" + fmt(e.t());
  }

  TargetCurve at_identity{[](double) { return CMatrix(CMatrix::Identity(2, 2)); }, "constant I", sl2->group};
  ParamPoint on_first = unit_point(w1212), on_second = unit_point(w1212);
  on_first[0](0) = 1.0;
  on_first[2](0) = -1.0;
  on_second[1](0) = 1.0;
  on_second[3](0) = -1.0;
  const PathLift neg = lift_between(w1212, at_identity, on_first, on_second, 10);
  ok &= neg.connection_attempted && !neg.connected;
  detail += std::string("; two-line control ") + (neg.connected ? "CONNECTED" : "not connected");
  return {ok, detail};
}

// 12. Critical-set containment.
Outcome c12() {
  const auto sl2 = catalog_sl2();
  int violations = 0, trials = 0, tested = 0;
  for (auto [u, w] : {std::pair{"121", "121"}, std::pair{"1212", "12"}}) {
    const ContainmentReport r =
        critical_containment_check(Word::parse(sl2, u), Word::parse(sl2, w), 100, derive_seed(12, u));
    violations += r.violations;
    trials += r.trials;
    tested += r.full_rank_checks;
  }
  return {violations == 0 && trials == 200,
          std::to_string(violations) + " violations in " + std::to_string(trials) + " trials (" +
              std::to_string(tested) + " with a full-rank premise)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"121 parameter round trip", c1},
      {"1212 surjective, 121 excluded locus", c2},
      {"1212 fiber over I is two lines", c3},
      {"12121 fiber components", c4},
      {"torus component count", c5},
      {"jacobian rank facts", c6},
      {"ULU factorization and LU rejection", c7},
      {"certificate engine derivations", c8},
      {"one-parameter word length and factoring", c9},
      {"Sp2n block factorizations", c10},
      {"curve lifting", c11},
      {"critical-set containment", c12},
  };
  int failures = 0;
  const auto begin = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  std::printf("%zu/%zu criteria passed in %.1f s\n", criteria.size() - failures, criteria.size(), secs);
  return failures == 0 ? 0 : 1;
}
