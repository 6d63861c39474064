// Command-line front end. Every command prints a RunReport (JSON with --json, a short
// text summary otherwise) and maps outcomes onto fixed exit codes.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwc/certify.hpp"
#include "mwc/curve_lift.hpp"
#include "mwc/errors.hpp"
#include "mwc/factorizers.hpp"
#include "mwc/fiber_lab.hpp"
#include "mwc/serialize.hpp"

using namespace mwc;

namespace {

enum Exit : int { kOk = 0, kError = 1, kExcluded = 2, kFails = 3, kUnknown = 4, kTracking = 5 };

struct Globals {
  std::uint64_t seed = 0;
  Tolerances tol;
  bool json = false;
  std::vector<std::string> argv;
};

struct GroupArgs {
  std::string group = "sl2";
  int n = 2;
  std::string word;
};

void add_group_options(CLI::App* cmd, GroupArgs& g, bool word_required = true) {
  cmd->add_option("--group", g.group, "sl2, gln, sp2n or torus2")
      ->check(CLI::IsMember({"sl2", "gln", "sp2n", "torus2"}))
      ->capture_default_str();
  cmd->add_option("--n", g.n, "matrix size for gln, half size for sp2n")->check(CLI::PositiveNumber)->capture_default_str();
  auto* w = cmd->add_option("--word", g.word, "word, e.g. 1212 or U.L.U");
  if (word_required) w->required();
}

CatalogPtr catalog_for(const GroupArgs& g, const Globals& globals) {
  return catalog_by_name(g.group, g.n, derive_seed(globals.seed, "catalog"));
}

RunReport make_report(const std::string& command, const Globals& globals) {
  RunReport r;
  r.command = command;
  r.argv = globals.argv;
  r.seed = globals.seed;
  r.tolerances = globals.tol;
  return r;
}

void collect_citations(const PropertyCertificate& c, std::vector<std::string>& out) {
  if (!c.citation.empty() && std::find(out.begin(), out.end(), c.citation) == out.end()) out.push_back(c.citation);
  for (const auto& p : c.premises) collect_citations(*p, out);
}

int emit(const RunReport& report, const Globals& globals, const std::string& text, int code) {
  if (globals.json)
    std::cout << report.to_json().dump(2) << "\n";
  else
    std::cout << text;
  return code;
}

int emit_error(RunReport report, const Globals& globals, const std::string& status, const std::string& message,
               int code) {
  report.status = status;
  report.outcome["message"] = message;
  if (!globals.json) std::cerr << status << ": " << message << "\n";
  return emit(report, globals, "", code);
}

std::string format_params(const ParamPoint& p) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << (i ? " | " : "");
    for (Eigen::Index k = 0; k < p[i].size(); ++k) {
      const Complex z = p[i](k);
      os << (k ? ", " : "") << z.real();
      if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    }
  }
  return os.str();
}

// factor ---------------------------------------------------------------------

int cmd_factor(const GroupArgs& g, const std::string& target_file, const Globals& globals) {
  RunReport report = make_report("factor", globals);
  try {
    const auto entry = catalog_for(g, globals);
    const CMatrix target = matrix_from_json(read_json_file(target_file));
    const Factorization f = factor_named(entry, g.word, target, derive_seed(globals.seed, "factor"), globals.tol);
    report.status = "ok";
    report.outcome = to_json(f);
    std::ostringstream text;
    text << "word " << f.word.str() << "\nparams " << format_params(f.params) << "\nresidual " << f.residual
         << "\nretries " << f.retries << "\n";
    return emit(report, globals, text.str(), kOk);
  } catch (const LeadingMinorError& e) {
    report.outcome["failing_minor"] = e.index();
    return emit_error(report, globals, "excluded-locus", e.what(), kExcluded);
  } catch (const ExcludedLocusError& e) {
    return emit_error(report, globals, "excluded-locus", e.what(), kExcluded);
  } catch (const std::exception& e) {
    return emit_error(report, globals, "error", e.what(), kError);
  }
}

// check ----------------------------------------------------------------------

int cmd_check(const GroupArgs& g, const std::string& property, const Globals& globals) {
  RunReport report = make_report("check", globals);
  try {
    const auto entry = catalog_for(g, globals);
    const Word w = Word::parse(entry, g.word);
    const PropertyCertificate cert = certify(w, parse_property(property));
    report.status = to_string(cert.polarity);
    report.outcome["certificate"] = cert.to_json();
    collect_citations(cert, report.citations);
    std::string text = cert.describe();
    if (cert.evidence == EvidenceKind::registered && !cert.all_words) {
      const PropertyCertificate chain = derive(w, cert.property);
      if (chain.polarity == cert.polarity) {
        report.outcome["derivation"] = chain.to_json();
        collect_citations(chain, report.citations);
        text += "also derived from the other registered facts:\n" + chain.describe(2);
      }
    }
    if (cert.polarity == Polarity::unknown || cert.property == Property::dominant) {
      const PropertyCertificate num =
          numerical_dominance(w, 20, derive_seed(globals.seed, "numerical-dominance"), globals.tol);
      report.outcome["numerical_dominance"] = num.to_json();
      text += "numerical evidence (not a proof):\n" + num.describe(2);
    }
    const int code = cert.polarity == Polarity::holds ? kOk : cert.polarity == Polarity::fails ? kFails : kUnknown;
    return emit(report, globals, text, code);
  } catch (const std::exception& e) {
    return emit_error(report, globals, "error", e.what(), kError);
  }
}

// fiber ----------------------------------------------------------------------

int cmd_fiber(const GroupArgs& g, const std::string& target_file, bool identity, int starts, const Globals& globals) {
  RunReport report = make_report("fiber", globals);
  try {
    if (identity == !target_file.empty()) throw std::invalid_argument("give exactly one of --target and --identity");
    const auto entry = catalog_for(g, globals);
    const Word w = Word::parse(entry, g.word);
    const CMatrix target = identity ? entry->group.identity() : matrix_from_json(read_json_file(target_file));
    const FiberSampleReport r =
        newton_fiber_sample(w, target, starts, derive_seed(globals.seed, "fiber"), globals.tol);
    report.status = "ok";
    report.outcome = to_json(r);
    std::ostringstream text;
    text << r.converged << "/" << r.starts << " starts converged, " << r.solutions.size() << " distinct solutions\n";
    if (const auto spec = documented_spec_for(w, target)) {
      const SpecVerification v = verify_component_spec(*spec, 20, derive_seed(globals.seed, "fiber-spec"));
      report.outcome["component_spec"] = to_json(v);
      report.outcome["component_equations"] = json::array();
      for (const auto& c : spec->components) report.outcome["component_equations"].push_back(c.equations);
      report.citations.push_back(spec->citation);
      std::vector<int> counts(spec->components.size(), 0);
      for (const auto& s : r.solutions)
        if (s.component >= 0) ++counts[static_cast<std::size_t>(s.component)];
      for (std::size_t c = 0; c < counts.size(); ++c)
        text << "component " << c << " (" << spec->components[c].equations << "): " << counts[c] << " solutions\n";
      text << "unclassified: " << r.unclassified() << "\n";
      text << "documented components " << (v.passed() ? "verified" : "NOT verified") << "\n";
    } else if (!r.solutions.empty()) {
      text << "nullity at first solution: " << r.solutions.front().nullity << "\n";
      if (r.solutions.size() == 1) text << "params " << format_params(r.solutions.front().params) << "\n";
    }
    return emit(report, globals, text.str(), kOk);
  } catch (const std::exception& e) {
    return emit_error(report, globals, "error", e.what(), kError);
  }
}

// torus-components -----------------------------------------------------------

int cmd_torus(const std::string& matrix, const std::string& word, const Globals& globals) {
  RunReport report = make_report("torus-components", globals);
  try {
    if (matrix.empty() == word.empty()) throw std::invalid_argument("give exactly one of --matrix and --word");
    IntMatrix m = matrix.empty() ? torus_exponent_matrix(Word::parse(catalog_torus2(), word))
                                 : int_matrix_from_json(json::parse(matrix));
    const mpz_class count = torus_component_count(m);
    const auto factors = smith_normal_form(m);
    json jf = json::array();
    std::string text_factors;
    for (const auto& d : factors) {
      jf.push_back(d.fits_slong_p() ? json(d.get_si()) : json(d.get_str()));
      text_factors += (text_factors.empty() ? "" : ", ") + d.get_str();
    }
    report.status = "ok";
    report.outcome = {{"exponent_matrix", to_json(m)},
                      {"invariant_factors", jf},
                      {"components", count.fits_slong_p() ? json(count.get_si()) : json(count.get_str())}};
    return emit(report, globals, "components " + count.get_str() + "\ninvariant factors [" + text_factors + "]\n", kOk);
  } catch (const json::exception& e) {
    return emit_error(report, globals, "error", std::string("malformed --matrix: ") + e.what(), kError);
  } catch (const std::exception& e) {
    return emit_error(report, globals, "error", e.what(), kError);
  }
}

// lift -----------------------------------------------------------------------

int cmd_lift(const GroupArgs& g, const std::string& curve_file, const std::string& builtin, int steps,
             const Globals& globals) {
  RunReport report = make_report("lift", globals);
  try {
    if (curve_file.empty() == builtin.empty()) throw std::invalid_argument("give exactly one of --curve and --builtin");
    const auto entry = catalog_for(g, globals);
    const Word w = Word::parse(entry, g.word);
    TargetCurve curve;
    if (builtin.empty()) {
      curve = sampled_curve(curve_samples_from_json(read_json_file(curve_file)), entry->group);
    } else {
      if (entry->group.kind != GroupKind::SL2) throw std::invalid_argument("builtin curves live in sl2");
      curve = builtin_curve(builtin);
    }
    const Factorization start = factor_into_word(w, curve.evaluation(0.0), derive_seed(globals.seed, "lift-start"), globals.tol);
    report.outcome["curve"] = curve.description;
    report.outcome["start"] = to_json(start);
    try {
      const PathLift lift = lift_curve(w, curve, start.params, steps, globals.tol);
      report.status = "ok";
      report.outcome["lift"] = to_json(lift);
      std::ostringstream text;
      text << "tracked " << lift.nodes.size() << " nodes (" << lift.substeps << " substeps) through " << w.str()
           << "\nmax residual " << lift.max_residual << "\nsuspected jumps " << lift.suspected_jumps.size()
           << "\nend params " << format_params(lift.nodes.back().params) << "\n";
      return emit(report, globals, text.str(), kOk);
    } catch (const TrackingFailure& e) {
      report.outcome["failure_t"] = e.t();
      return emit_error(report, globals, "tracking-failure", e.what(), kTracking);
    }
  } catch (const ExcludedLocusError& e) {
    return emit_error(report, globals, "excluded-locus", e.what(), kExcluded);
  } catch (const std::exception& e) {
    return emit_error(report, globals, "error", e.what(), kError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor group elements into words of subvarieties and certify word properties"};
  app.require_subcommand(1);
  Globals globals;
  for (int i = 1; i < argc; ++i) globals.argv.emplace_back(argv[i]);
  app.add_option("--seed", globals.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--rank-tol", globals.tol.rank_tol, "relative singular-value cutoff")->capture_default_str();
  app.add_option("--residual-tol", globals.tol.residual_tol, "accepted factorization residual")->capture_default_str();
  app.add_flag("--json", globals.json, "print the full JSON report");
  app.fallthrough();

  GroupArgs fg;
  std::string target_file;
  auto* factor = app.add_subcommand("factor", "factor a target matrix along a solvable word");
  add_group_options(factor, fg);
  factor->add_option("--target", target_file, "JSON matrix file")->required();

  GroupArgs cg;
  std::string property;
  auto* check = app.add_subcommand("check", "certify a property of a word");
  add_group_options(check, cg);
  check->add_option("--property", property, "dominant, surjective, open, birational or irreducible")->required();

  GroupArgs fig;
  std::string fiber_target;
  bool identity = false;
  int starts = 50;
  auto* fiber = app.add_subcommand("fiber", "sample a fiber by multi-start Gauss-Newton");
  add_group_options(fiber, fig);
  fiber->add_option("--target", fiber_target, "JSON matrix file");
  fiber->add_flag("--identity", identity, "use the identity as target");
  fiber->add_option("--starts", starts, "number of random starts")->check(CLI::PositiveNumber)->capture_default_str();

  std::string matrix, torus_word;
  auto* torus = app.add_subcommand("torus-components", "count components of a monomial-map kernel");
  torus->add_option("--matrix", matrix, "integer exponent matrix, e.g. \"[[1,2],[2,1]]\"");
  torus->add_option("--word", torus_word, "word over torus2");

  GroupArgs lg;
  std::string curve_file, builtin;
  int steps = 100;
  auto* lift = app.add_subcommand("lift", "lift a curve of targets to a path of parameters");
  add_group_options(lift, lg);
  lift->add_option("--curve", curve_file, "JSON samples file");
  lift->add_option("--builtin", builtin, "shear-path, cross-locus or constant")
      ->check(CLI::IsMember(builtin_curve_names()));
  lift->add_option("--steps", steps, "output grid size")->check(CLI::Range(2, 1000000))->capture_default_str();

  try {
    app.parse(argc, argv);
    globals.tol.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  if (*factor) return cmd_factor(fg, target_file, globals);
  if (*check) return cmd_check(cg, property, globals);
  if (*fiber) return cmd_fiber(fig, fiber_target, identity, starts, globals);
  if (*torus) return cmd_torus(matrix, torus_word, globals);
  if (*lift) return cmd_lift(lg, curve_file, builtin, steps, globals);
  return kError;
}
