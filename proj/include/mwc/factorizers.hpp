#pragma once

#include "mwc/word.hpp"

namespace mwc {

/// Parameters p with evaluate(word, p) == target.
struct Factorization {
  Word word;
  ParamPoint params;
  CMatrix target;
  double residual = 0.0;  ///< Frobenius norm of evaluate(word, params) - target
  int retries = 0;        ///< generic-position retries consumed by the solver
};

/// Fills in the residual; throws mwc::Error if it is not below tol.residual_tol.
Factorization finish(Word word, ParamPoint params, const CMatrix& target, int retries, const Tolerances& tol);

// SL2 ----------------------------------------------------------------------

/// x1(a) x2(b) x1(c) = g via b = g21, c = (g22 - 1)/g21, a = (g11 - 1)/g21.
/// Throws ExcludedLocusError when |g21| <= rank_tol.
Factorization sl2_121(const CMatrix& g, const Tolerances& tol = {});

/// x1(a) x2(b) x1(c) x2(d) = g for every g in SL2. d = 0 when g21 is away from zero,
/// otherwise d = 1 and the 121 solve is applied to g x2(-1).
Factorization sl2_1212(const CMatrix& g, const Tolerances& tol = {});

/// x2(a) x3(t) x1(b) x2(c) = g: trailing shear chosen so that g x2(-c) has a nonzero
/// (1,1) entry, then the LDU split of the remainder.
Factorization sl2_2312(const CMatrix& g, std::uint64_t seed, const Tolerances& tol = {});

// GLn ----------------------------------------------------------------------

/// g = L U with L invertible lower-triangular and U unit upper-triangular.
/// Throws LeadingMinorError naming the first vanishing leading principal minor.
Factorization gln_lu(const CMatrix& g, const Tolerances& tol = {});

/// g = u L U: identity first, then the all-ones unit upper matrix, then up to 20 seeded
/// random unit upper matrices for u until u^-1 g has nonvanishing leading minors.
Factorization gln_ulu(const CMatrix& g, std::uint64_t seed, const Tolerances& tol = {});

struct LduBlocks {
  CMatrix lower;  ///< unit lower-triangular
  CMatrix diag;
  CMatrix upper;  ///< unit upper-triangular
  double residual = 0.0;
};

/// Big-cell split g = U- T U+.
LduBlocks gln_ldu(const CMatrix& g, const Tolerances& tol = {});

struct OneParamWord {
  Word word;
  int length = 0;
};

/// Lower elementary letters (column-major), D1..Dn, upper elementary letters (rows n-1 down
/// to 1), then the lower letters again: length 3l + m with l = n(n-1)/2, m = n.
OneParamWord one_param_word(int n);
/// The same construction on the SL2 catalog: "2312".
OneParamWord one_param_word_sl2();

/// Factorization of g along one_param_word(n) in the GLn catalog.
Factorization one_param_factor(const CMatrix& g, int n, std::uint64_t seed, const Tolerances& tol = {});

// Sp2n ---------------------------------------------------------------------

/// x1(A) x2(B) x1(A') = g for g in Z (upper-right block D symmetric and invertible):
/// B = D, A' = D^-1 (C - I), A = (F - I) D^-1.
Factorization sp2n_121_onto_Z(const CMatrix& g, const CatalogPtr& entry, const Tolerances& tol = {});

/// x1(A) x2(B) x1(A') x3(B_S) = g. B_S in S makes the upper-right block of g x3(-B_S)
/// symmetric; on a singular system S is regenerated from a derived seed (bounded retries),
/// so the returned word may belong to a regenerated catalog entry.
Factorization sp2n_1213(const CMatrix& g, const CatalogPtr& entry, const Tolerances& tol = {});

// Dispatch -----------------------------------------------------------------

/// Factors g along w by running a registered solver on a consecutive subword of w and
/// setting every other letter to its unit parameters.
Factorization factor_into_word(const Word& w, const CMatrix& g, std::uint64_t seed, const Tolerances& tol = {});

/// Words with a registered solver for the entry, e.g. {"121", "1212", "2312"} for SL2.
std::vector<std::string> solvable_words(const CatalogPtr& entry);

/// Factors g along the registered word named by `text` ("ldu" and "one-param" included for GLn).
Factorization factor_named(const CatalogPtr& entry, const std::string& text, const CMatrix& g, std::uint64_t seed,
                           const Tolerances& tol = {});

}  // namespace mwc
