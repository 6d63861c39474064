#include "mwc/certify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace mwc {

std::string to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::registered: return "registered";
    case EvidenceKind::rule: return "rule";
    case EvidenceKind::numerical: return "numerical";
    case EvidenceKind::none: return "none";
  }
  return "?";
}

nlohmann::json PropertyCertificate::to_json() const {
  nlohmann::json j;
  j["word"] = all_words ? std::string("*") : word.str();
  j["property"] = to_string(property);
  j["polarity"] = to_string(polarity);
  nlohmann::json ev;
  ev["kind"] = to_string(evidence);
  if (!rule.empty()) ev["rule"] = rule;
  ev["citation"] = citation;
  if (evidence == EvidenceKind::numerical) {
    ev["seed"] = seed;
    ev["sample_count"] = sample_count;
    ev["max_rank"] = max_rank;
  }
  if (!premises.empty()) {
    ev["premises"] = nlohmann::json::array();
    for (const auto& p : premises) ev["premises"].push_back(p->to_json());
  }
  j["evidence"] = std::move(ev);
  return j;
}

std::string PropertyCertificate::describe(int indent) const {
  std::ostringstream os;
  os << std::string(indent, ' ') << (all_words ? std::string("every word") : word.str()) << " "
     << to_string(property) << ": " << to_string(polarity) << " [" << to_string(evidence);
  if (!rule.empty()) os << ": " << rule;
  os << "] " << citation;
  if (evidence == EvidenceKind::numerical) os << " (seed " << seed << ", " << sample_count << " samples, max rank " << max_rank << ")";
  os << "\n";
  for (const auto& p : premises) os << p->describe(indent + 2);
  return os.str();
}

PropertyCertificate registered(const Word& w, Property p, Polarity pol, std::string citation) {
  PropertyCertificate c;
  c.word = w;
  c.property = p;
  c.polarity = pol;
  c.evidence = EvidenceKind::registered;
  c.citation = std::move(citation);
  return c;
}

std::vector<PropertyCertificate> registered_certificates(const CatalogPtr& entry) {
  std::vector<PropertyCertificate> out;
  for (const auto& f : entry->registered) {
    if (f.onto != "G") continue;
    PropertyCertificate c;
    if (!f.all_words) c.word = Word(entry, f.letters);
    else c.word.entry = entry;
    c.all_words = f.all_words;
    c.property = f.property;
    c.polarity = f.polarity;
    c.evidence = EvidenceKind::registered;
    c.citation = f.citation;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

const char* rule_citation(const std::string& rule) {
  if (rule == rules::subword) return "dominance, surjectivity and openness pass to words containing the subword";
  if (rule == rules::collapse)
    return "runs of a subgroup letter collapse without changing dominance, surjectivity, openness or irreducibility";
  if (rule == rules::square) return "ww is surjective when w is dominant";
  if (rule == rules::power_open) return "u^(dim G + 1) is open when u is dominant";
  if (rule == rules::sandwich) return "s.w.u.t is irreducible when w is open and u is birational";
  if (rule == rules::main_bound) return "words containing u^(dim G + 2) are irreducible when u is birational";
  if (rule == rules::implication)
    return "irreducible => surjective => dominant; open => dominant; birational => dominant";
  return "";
}

CertPtr make_rule(const Word& w, Property p, Polarity pol, const std::string& rule, std::vector<CertPtr> premises) {
  auto c = std::make_shared<PropertyCertificate>();
  c->word = w;
  c->property = p;
  c->polarity = pol;
  c->evidence = EvidenceKind::rule;
  c->rule = rule;
  c->citation = rule_citation(rule);
  c->premises = std::move(premises);
  return c;
}

/// Closes a registry under the rules, goal-directed. Every recursive call is on a strictly
/// shorter word or on a property further down the implication order, except through
/// repetition-collapse; the in-progress set breaks the remaining cycles.
class Deriver {
 public:
  Deriver(const Word& target, const std::vector<PropertyCertificate>& registry) : dim_(target.entry->group.dim) {
    for (const auto& c : registry) {
      if (c.polarity == Polarity::unknown || c.evidence == EvidenceKind::numerical) continue;
      registry_.push_back(std::make_shared<PropertyCertificate>(c));
      if (!c.all_words && !c.word.empty() && !pool_contains(c.word)) pool_.push_back(c.word);
    }
  }

  CertPtr holds(const Word& w, Property p) { return derive(w, p, Polarity::holds); }
  CertPtr fails(const Word& w, Property p) { return derive(w, p, Polarity::fails); }

 private:
  using Key = std::tuple<std::string, Property, Polarity>;

  bool pool_contains(const Word& w) const {
    for (const auto& u : pool_)
      if (u == w) return true;
    return false;
  }

  CertPtr derive(const Word& w, Property p, Polarity pol) {
    const Key key{w.str(), p, pol};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (active_.contains(key)) {
      ++cycle_hits_;
      return nullptr;
    }
    active_.insert(key);
    const int hits_before = cycle_hits_;
    CertPtr out = pol == Polarity::holds ? derive_holds(w, p) : derive_fails(w, p);
    active_.erase(key);
    // A miss that depended on a cut cycle may not be final.
    if (out || cycle_hits_ == hits_before) memo_[key] = out;
    return out;
  }

  CertPtr lookup(const Word& w, Property p, Polarity pol) const {
    for (const auto& c : registry_)
      if (c->property == p && c->polarity == pol && (c->all_words || c->word == w)) return c;
    return nullptr;
  }

  /// Registered fact about a different word with the same collapsed form.
  CertPtr lookup_collapsed(const Word& w, Property p, Polarity pol) const {
    if (p == Property::birational || !collapsible(w)) return nullptr;
    const Word nw = normalize(w);
    for (const auto& c : registry_) {
      if (c->all_words || c->property != p || c->polarity != pol || c->word == w || !collapsible(c->word)) continue;
      if (normalize(c->word) == nw) return make_rule(w, p, pol, rules::collapse, {c});
    }
    return nullptr;
  }

  /// A word containing `pattern` consecutively and collapsing to the same word as w:
  /// w itself when the containment is literal.
  std::optional<Word> containing_witness(const Word& w, const Word& pattern) const {
    if (contains_consecutive(w, pattern)) return w;
    if (!collapsible(w) || !collapsible(pattern)) return std::nullopt;
    const Word nw = normalize(w);
    const Word np = normalize(pattern);
    auto it = std::search(nw.letters.begin(), nw.letters.end(), np.letters.begin(), np.letters.end());
    if (it == nw.letters.end()) return std::nullopt;
    const std::size_t start = static_cast<std::size_t>(it - nw.letters.begin());
    return nw.slice(0, start).concat(pattern).concat(nw.slice(start + np.size(), nw.size()));
  }

  /// Certificate for w from a certificate for the witness word (identical or collapse-related).
  CertPtr through_witness(const Word& w, Property p, const Word& witness, CertPtr cert) const {
    if (witness == w) return cert;
    return make_rule(w, p, Polarity::holds, rules::collapse, {std::move(cert)});
  }

  std::vector<Word> powers_of_pool(int k) const {
    std::vector<Word> out;
    for (const auto& u : pool_) out.push_back(u.power(k));
    return out;
  }

  CertPtr derive_holds(const Word& w, Property p) {
    if (auto c = lookup(w, p, Polarity::holds)) return c;
    if (auto c = lookup_collapsed(w, p, Polarity::holds)) return c;
    switch (p) {
      case Property::dominant: return dominant(w);
      case Property::surjective: return surjective(w);
      case Property::open: return open(w);
      case Property::birational: return nullptr;
      case Property::irreducible: return irreducible(w);
    }
    return nullptr;
  }

  CertPtr dominant(const Word& w) {
    for (Property stronger : {Property::surjective, Property::open, Property::birational})
      if (auto c = holds(w, stronger)) return make_rule(w, Property::dominant, Polarity::holds, rules::implication, {c});
    for (const auto& u : pool_) {
      if (u == w || !contains_subsequence(w, u)) continue;
      if (auto c = holds(u, Property::dominant))
        return make_rule(w, Property::dominant, Polarity::holds, rules::subword, {c});
    }
    return nullptr;
  }

  CertPtr square(const Word& w) {
    if (w.size() % 2 != 0) return nullptr;
    const Word half = w.slice(0, w.size() / 2);
    if (half.concat(half) != w) return nullptr;
    if (auto c = holds(half, Property::dominant))
      return make_rule(w, Property::surjective, Polarity::holds, rules::square, {c});
    return nullptr;
  }

  CertPtr surjective(const Word& w) {
    if (auto c = holds(w, Property::irreducible))
      return make_rule(w, Property::surjective, Polarity::holds, rules::implication, {c});
    if (auto c = square(w)) return c;
    std::vector<Word> candidates = pool_;
    for (auto& s : powers_of_pool(2)) candidates.push_back(std::move(s));
    for (const auto& u : candidates) {
      if (u == w || !contains_subsequence(w, u)) continue;
      if (auto c = holds(u, Property::surjective))
        return make_rule(w, Property::surjective, Polarity::holds, rules::subword, {c});
    }
    return nullptr;
  }

  CertPtr power_open(const Word& w) {
    const std::size_t k = static_cast<std::size_t>(dim_ + 1);
    if (w.size() % k != 0) return nullptr;
    const Word base = w.slice(0, w.size() / k);
    if (base.power(static_cast<int>(k)) != w) return nullptr;
    if (auto c = holds(base, Property::dominant))
      return make_rule(w, Property::open, Polarity::holds, rules::power_open, {c});
    return nullptr;
  }

  CertPtr open(const Word& w) {
    if (auto c = power_open(w)) return c;
    std::vector<Word> candidates = pool_;
    for (auto& s : powers_of_pool(dim_ + 1)) candidates.push_back(std::move(s));
    for (const auto& u : candidates) {
      if (u == w) continue;
      auto witness = containing_witness(w, u);
      if (!witness) continue;
      if (auto c = holds(u, Property::open)) {
        CertPtr lifted = *witness == u ? c : make_rule(*witness, Property::open, Polarity::holds, rules::subword, {c});
        return through_witness(w, Property::open, *witness, lifted);
      }
    }
    return nullptr;
  }

  CertPtr irreducible(const Word& w) {
    for (const auto& u : pool_) {
      const Word big = u.power(dim_ + 2);
      auto witness = containing_witness(w, big);
      if (!witness) continue;
      auto bir = holds(u, Property::birational);
      if (!bir) continue;
      auto opened = holds(u.power(dim_ + 1), Property::open);
      if (!opened) continue;
      auto c = make_rule(*witness, Property::irreducible, Polarity::holds, rules::main_bound, {bir, opened});
      return through_witness(w, Property::irreducible, *witness, c);
    }
    std::vector<Word> open_candidates = pool_;
    for (auto& s : powers_of_pool(dim_ + 1)) open_candidates.push_back(std::move(s));
    for (const auto& ow : open_candidates) {
      for (const auto& bu : pool_) {
        const Word pattern = ow.concat(bu);
        auto witness = containing_witness(w, pattern);
        if (!witness) continue;
        auto opened = holds(ow, Property::open);
        if (!opened) continue;
        auto bir = holds(bu, Property::birational);
        if (!bir) continue;
        auto c = make_rule(*witness, Property::irreducible, Polarity::holds, rules::sandwich, {opened, bir});
        return through_witness(w, Property::irreducible, *witness, c);
      }
    }
    return nullptr;
  }

  CertPtr derive_fails(const Word& w, Property p) {
    if (auto c = lookup(w, p, Polarity::fails)) return c;
    if (auto c = lookup_collapsed(w, p, Polarity::fails)) return c;
    if (p != Property::dominant) {
      if (auto c = fails(w, Property::dominant)) return make_rule(w, p, Polarity::fails, rules::implication, {c});
    }
    if (p == Property::irreducible) {
      if (auto c = fails(w, Property::surjective)) return make_rule(w, p, Polarity::fails, rules::implication, {c});
    }
    return nullptr;
  }

  int dim_;
  std::vector<CertPtr> registry_;
  std::vector<Word> pool_;
  std::map<Key, CertPtr> memo_;
  std::set<Key> active_;
  int cycle_hits_ = 0;
};

}  // namespace

PropertyCertificate certify(const Word& w, Property property, const std::vector<PropertyCertificate>& registry) {
  for (const auto& c : registry)
    if (c.word.entry && !same_catalog(c.word.entry, w.entry))
      throw std::invalid_argument("registry certificate belongs to a different catalog entry");
  Deriver d(w, registry);
  if (auto c = d.holds(w, property)) return *c;
  if (auto c = d.fails(w, property)) return *c;
  PropertyCertificate unknown;
  unknown.word = w;
  unknown.property = property;
  unknown.polarity = Polarity::unknown;
  unknown.evidence = EvidenceKind::none;
  unknown.citation = "no rule applies";
  return unknown;
}

PropertyCertificate certify(const Word& w, Property property) {
  return certify(w, property, registered_certificates(w.entry));
}

PropertyCertificate derive(const Word& w, Property property) {
  std::vector<PropertyCertificate> registry = registered_certificates(w.entry);
  std::erase_if(registry, [&](const PropertyCertificate& c) {
    return !c.all_words && c.property == property && c.word == w;
  });
  return certify(w, property, registry);
}

PropertyCertificate numerical_dominance(const Word& w, int trials, std::uint64_t seed, const Tolerances& tol) {
  const RankSample rs = sample_rank(w, trials, seed, tol);
  PropertyCertificate c;
  c.word = w;
  c.property = Property::dominant;
  c.polarity = rs.max_rank == w.entry->group.dim ? Polarity::holds : Polarity::fails;
  c.evidence = EvidenceKind::numerical;
  c.citation = "maximal Jacobian rank over seeded random points compared with dim G";
  c.seed = seed;
  c.sample_count = trials;
  c.max_rank = rs.max_rank;
  return c;
}

}  // namespace mwc
