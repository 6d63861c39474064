#include "mwc/word.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mwc/errors.hpp"

namespace mwc {

Word::Word(CatalogPtr e, std::vector<std::string> ls) : entry(std::move(e)), letters(std::move(ls)) {
  if (!entry) throw std::invalid_argument("word without catalog entry");
  for (auto& id : letters) id = entry->canonical(id);
}

Word Word::parse(CatalogPtr entry, std::string_view text) {
  std::vector<std::string> tokens;
  if (text.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t dot = std::min(text.find('.', start), text.size());
      if (dot == start) throw std::invalid_argument("empty letter in word '" + std::string(text) + "'");
      tokens.emplace_back(text.substr(start, dot - start));
      start = dot + 1;
    }
  } else {
    for (char c : text) tokens.emplace_back(1, c);
  }
  if (tokens.empty()) throw std::invalid_argument("empty word");
  return Word(std::move(entry), std::move(tokens));
}

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i && entry->dotted_words) out += '.';
    out += letters[i];
  }
  return out;
}

int Word::total_param_dim() const {
  int d = 0;
  for (std::size_t i = 0; i < size(); ++i) d += letter(i).param_dim();
  return d;
}

Word Word::concat(const Word& other) const {
  std::vector<std::string> ls = letters;
  ls.insert(ls.end(), other.letters.begin(), other.letters.end());
  return Word(entry, std::move(ls));
}

Word Word::power(int k) const {
  std::vector<std::string> ls;
  for (int i = 0; i < k; ++i) ls.insert(ls.end(), letters.begin(), letters.end());
  return Word(entry, std::move(ls));
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  return Word(entry, std::vector<std::string>(letters.begin() + begin, letters.begin() + end));
}

// ---------------------------------------------------------------------------

ParamPoint unit_point(const Word& w) {
  ParamPoint p;
  for (std::size_t i = 0; i < w.size(); ++i) p.push_back(w.letter(i).unit_params());
  return p;
}

ParamPoint random_point(const Word& w, Rng& rng, double zero_probability) {
  ParamPoint p;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w.letter(i);
    CVector block(l.param_dim());
    for (int k = 0; k < l.param_dim(); ++k) {
      const bool zero = zero_probability > 0.0 && rng.uniform() < zero_probability;
      if (l.coord_kinds[k] == DomainKind::torus)
        block(k) = zero ? Complex(1.0) : std::exp(rng.complex_normal());
      else
        block(k) = zero ? Complex(0.0) : rng.complex_normal();
    }
    p.push_back(std::move(block));
  }
  return p;
}

CVector flatten(const ParamPoint& p) {
  Eigen::Index n = 0;
  for (const auto& b : p) n += b.size();
  CVector out(n);
  Eigen::Index k = 0;
  for (const auto& b : p) {
    out.segment(k, b.size()) = b;
    k += b.size();
  }
  return out;
}

ParamPoint unflatten(const Word& w, const CVector& flat) {
  if (flat.size() != w.total_param_dim()) throw DomainError("parameter vector length does not match word");
  ParamPoint p;
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int d = w.letter(i).param_dim();
    p.push_back(flat.segment(k, d));
    k += d;
  }
  return p;
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

void check_point(const Word& w, const ParamPoint& p) {
  if (p.size() != w.size()) throw DomainError("parameter point has wrong number of blocks for word " + w.str());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w.letter(i);
    if (p[i].size() != l.param_dim())
      throw DomainError("parameter block " + std::to_string(i) + " has wrong size for letter " + l.id);
    if (!l.in_domain(p[i]))
      throw DomainError("parameter block " + std::to_string(i) + " leaves the chart domain of letter " + l.id);
  }
}

CMatrix evaluate(const Word& w, const ParamPoint& p) {
  check_point(w, p);
  CMatrix g = w.entry->group.identity();
  for (std::size_t i = 0; i < w.size(); ++i) g = g * w.letter(i).chart(p[i]);
  return g;
}

CMatrix jacobian(const Word& w, const ParamPoint& p) {
  check_point(w, p);
  const int n = w.entry->group.ambient_size;
  const std::size_t len = w.size();
  std::vector<CMatrix> factors;
  for (std::size_t i = 0; i < len; ++i) factors.push_back(w.letter(i).chart(p[i]));
  // prefix[i] = x_1 ... x_{i-1}, suffix[i] = x_{i+1} ... x_l
  std::vector<CMatrix> prefix(len + 1, CMatrix::Identity(n, n)), suffix(len + 1, CMatrix::Identity(n, n));
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] * factors[i];
  for (std::size_t i = len; i-- > 0;) suffix[i] = factors[i] * suffix[i + 1];

  CMatrix jac(n * n, w.total_param_dim());
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < len; ++i) {
    for (const CMatrix& t : w.letter(i).tangent(p[i])) jac.col(col++) = vec(prefix[i] * t * suffix[i + 1]);
  }
  return jac;
}

bool contains_consecutive(const Word& w, const Word& u) {
  if (u.size() > w.size()) return false;
  return std::search(w.letters.begin(), w.letters.end(), u.letters.begin(), u.letters.end()) != w.letters.end();
}

bool contains_subsequence(const Word& w, const Word& u) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < w.size() && k < u.size(); ++i)
    if (w.letters[i] == u.letters[k]) ++k;
  return k == u.size();
}

bool collapsible(const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w.letter(i).subgroup) return false;
  return true;
}

Word normalize(const Word& w) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!out.empty() && out.back() == w.letters[i]) {
      if (!w.letter(i).subgroup)
        throw std::invalid_argument("cannot collapse run of non-subgroup letter " + w.letters[i]);
      continue;
    }
    out.push_back(w.letters[i]);
  }
  return Word(w.entry, std::move(out));
}

std::pair<Word, ParamPoint> normalize_point(const Word& w, const ParamPoint& p) {
  check_point(w, p);
  std::vector<std::string> letters;
  ParamPoint out;
  CMatrix run;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& l = w.letter(i);
    if (!letters.empty() && letters.back() == w.letters[i]) {
      if (!l.subgroup || !l.inverse_chart)
        throw std::invalid_argument("cannot collapse run of letter " + l.id);
      run = run * l.chart(p[i]);
      auto q = l.inverse_chart(run);
      if (!q) throw DomainError("run product left the chart domain of letter " + l.id);
      out.back() = *q;
      continue;
    }
    letters.push_back(w.letters[i]);
    out.push_back(p[i]);
    run = l.chart(p[i]);
  }
  return {Word(w.entry, std::move(letters)), std::move(out)};
}

// ---------------------------------------------------------------------------

RankSample sample_rank(const Word& w, int trials, std::uint64_t seed, const Tolerances& tol) {
  if (trials < 1) throw std::invalid_argument("sample_rank needs at least one trial");
  Rng rng(derive_seed(seed, "sample_rank"));
  RankSample out;
  const int dim = w.entry->group.dim;
  for (int t = 0; t < trials; ++t) {
    CriticalSample s;
    s.point = random_point(w, rng);
    s.jacobian_rank = numerical_rank(jacobian(w, s.point), tol);
    s.is_critical = s.jacobian_rank < dim;
    out.max_rank = std::max(out.max_rank, s.jacobian_rank);
    out.samples.push_back(std::move(s));
  }
  return out;
}

ContainmentRanks containment_ranks(const Word& u, const Word& w, const ParamPoint& x, const ParamPoint& y,
                                   const Tolerances& tol) {
  ContainmentRanks r;
  r.rank_u = numerical_rank(jacobian(u, x), tol);
  r.rank_w = numerical_rank(jacobian(w, y), tol);
  ParamPoint xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  r.rank_uw = numerical_rank(jacobian(u.concat(w), xy), tol);
  return r;
}

ContainmentReport critical_containment_check(const Word& u, const Word& w, int trials, std::uint64_t seed,
                                             const Tolerances& tol) {
  Rng rng(derive_seed(seed, "critical_containment"));
  const int dim = u.entry->group.dim;
  ContainmentReport rep;
  for (int t = 0; t < trials; ++t) {
    // Alternate between generic points and points with zeroed coordinates.
    const double zero_probability = (t % 2 == 0) ? 0.0 : 0.5;
    const ParamPoint x = random_point(u, rng, zero_probability);
    const ParamPoint y = random_point(w, rng, zero_probability);
    const ContainmentRanks r = containment_ranks(u, w, x, y, tol);
    ++rep.trials;
    if (r.rank_u < dim) ++rep.critical_u;
    if (r.rank_w < dim) ++rep.critical_w;
    if (r.rank_uw < dim) ++rep.critical_uw;
    if (r.rank_u == dim || r.rank_w == dim) ++rep.full_rank_checks;
    if (r.violates(dim)) ++rep.violations;
  }
  return rep;
}

RoundtripReport check_birational_roundtrip(const Word& w, const std::function<ParamPoint(const CMatrix&)>& inverse,
                                           int trials, std::uint64_t seed, double recover_tol) {
  Rng rng(derive_seed(seed, "birational_roundtrip"));
  RoundtripReport rep;
  for (int t = 0; t < trials; ++t) {
    const ParamPoint p = random_point(w, rng);
    ++rep.trials;
    try {
      const ParamPoint q = inverse(evaluate(w, p));
      const CVector a = flatten(p), b = flatten(q);
      if (a.size() != b.size()) continue;
      const double err = (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
      rep.max_param_error = std::max(rep.max_param_error, err);
      if (err <= recover_tol) ++rep.recovered;
    } catch (const ExcludedLocusError&) {
      ++rep.excluded;
    }
  }
  return rep;
}

}  // namespace mwc
