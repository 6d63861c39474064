#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwc/word.hpp"

namespace mwc {

enum class EvidenceKind { registered, rule, numerical, none };

std::string to_string(EvidenceKind kind);

/// Names of the inference rules the engine may cite.
namespace rules {
inline constexpr const char* subword = "subword-propagation";
inline constexpr const char* collapse = "repetition-collapse";
inline constexpr const char* square = "square-of-dominant";
inline constexpr const char* power_open = "power-open";
inline constexpr const char* sandwich = "sandwich-irreducible";
inline constexpr const char* main_bound = "main-theorem-bound";
inline constexpr const char* implication = "implication";
}  // namespace rules

struct PropertyCertificate;
using CertPtr = std::shared_ptr<const PropertyCertificate>;

struct PropertyCertificate {
  Word word;
  Property property = Property::dominant;
  Polarity polarity = Polarity::unknown;
  EvidenceKind evidence = EvidenceKind::none;
  std::string rule;      ///< set for rule evidence
  std::string citation;  ///< human-readable source of the fact or rule
  std::vector<CertPtr> premises;
  std::uint64_t seed = 0;  ///< numerical evidence only
  int sample_count = 0;
  int max_rank = 0;
  bool all_words = false;  ///< registered fact quantified over every word of the entry

  nlohmann::json to_json() const;
  /// Flattened, indented evidence chain.
  std::string describe(int indent = 0) const;
};

/// Registered facts of the entry (those stated onto the whole group) as certificates.
std::vector<PropertyCertificate> registered_certificates(const CatalogPtr& entry);

/// Registered certificate for a literal word, e.g. for hand-built registries in tests.
PropertyCertificate registered(const Word& w, Property p, Polarity pol, std::string citation = "registered");

/// Strongest certificate derivable for (w, property) by closing `registry` under the rules.
/// Returns polarity unknown when nothing applies.
PropertyCertificate certify(const Word& w, Property property, const std::vector<PropertyCertificate>& registry);

/// Certify against the entry's own registered facts.
PropertyCertificate certify(const Word& w, Property property);

/// Rule-only certificate: certify against the entry's facts with the fact registered for
/// (w, property) itself removed. Shows how a registered fact follows from the others.
PropertyCertificate derive(const Word& w, Property property);

/// Numerical dominance evidence from Jacobian rank sampling; never upgraded to a rule fact.
PropertyCertificate numerical_dominance(const Word& w, int trials, std::uint64_t seed, const Tolerances& tol = {});

}  // namespace mwc
