#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tielink/braid.hpp"
#include "tielink/poly.hpp"

namespace tielink {

// Generators of the tied BMW algebra: braid g / its inverse Gi, tangle h,
// tie e, tied tangle f. Classical BMW words use the subset {G, Gi, H}.
enum class Gen : std::uint8_t { G, Gi, H, E, F };

struct GenLetter {
  Gen kind;
  int index;  // 1-based, <= strands-1

  friend auto operator<=>(const GenLetter& a, const GenLetter& b) {
    if (auto c = a.index <=> b.index; c != 0) return c;
    return a.kind <=> b.kind;
  }
  friend bool operator==(const GenLetter&, const GenLetter&) = default;
};

using AlgWord = std::vector<GenLetter>;

/// Formal linear combination of generator words with Laurent coefficients.
/// Tied BMW elements carry coefficients over (a, z, x); classical BMW images
/// carry them over (l, m).
struct AlgebraElement {
  int strands = 1;
  std::map<AlgWord, LaurentPoly> combo;

  void add(const AlgWord& w, const LaurentPoly& c);
  bool operator==(const AlgebraElement& o) const = default;
};

AlgebraElement alg_unit(int strands, VarSetPtr coeff_vars);
AlgebraElement alg_monomial(int strands, AlgWord w, LaurentPoly coeff);
AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v);

/// CLI text form: whitespace-separated g1 G1 h2 e1 f3 (capital = inverse of g).
AlgWord parse_alg_word(const std::string& text);
std::string to_string(const AlgWord& w);
std::string to_string(const AlgebraElement& u);

/// Representation of the tied braid monoid: eta_i maps to e_i, and sigma_i
/// maps to the braid generator whose closure kink matches the diagram
/// conventions (see README notes on orientation of g).
AlgebraElement pi(const TiedBraidWord& w);

/// Oriented rewrite engine for the tied BMW algebra. reduce() brings every
/// word to at most one top-index cluster from {g, g e, g^-1, g^-1 e, h, e, f},
/// applying the relation table to a fixpoint with a step budget.
class TbmwEngine {
 public:
  explicit TbmwEngine(long step_budget = 1'000'000);

  AlgebraElement reduce(const AlgebraElement& u) const;

  /// Markov trace by descending strand induction; value over (a, z, x).
  /// mirror_strips exchanges the strip factors of g and g^-1, which is the
  /// convention under which the trace factors through the classical quotient
  /// (the two conventions differ by the mirror automorphism of the algebra).
  LaurentPoly trace(const AlgebraElement& u, bool mirror_strips = false) const;

  long step_budget() const { return budget_; }

  struct Rule {
    AlgWord lhs;  // index field holds the offset from the base index
    std::vector<std::pair<LaurentPoly, AlgWord>> rhs;
  };
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  friend class BmwEngine;
  TbmwEngine(long budget, int tag);  // classical table
  void add_rule(const std::string& lhs, const std::vector<std::pair<std::string, std::string>>& rhs,
                VarSetPtr vars, bool with_reversal = true);
  bool apply_at(const AlgWord& w, std::size_t pos, const Rule& r,
                std::vector<std::pair<LaurentPoly, AlgWord>>& out) const;
  bool sort_swap_at(AlgWord& w, std::size_t pos) const;

  std::vector<Rule> rules_;
  std::set<AlgWord> seen_lhs_;  // construction-time dedupe of reversed rules
  VarSetPtr coeff_vars_;
  long budget_ = 1'000'000;
  bool classical_ = false;
};

/// x^{1-n} a^{-exp(w)} trace(pi(w)); equals eval_L_hat of the closure.
LaurentPoly invariant_via_trace(const TiedBraidWord& w, const TbmwEngine& engine);

/// Letterwise quotient onto the classical BMW algebra over (l, m):
/// g -> G, g^-1 -> G^-1, h and f -> H, e -> 1. Coefficients must be x-free.
AlgebraElement psi(const AlgebraElement& u);

/// num / (l + 1/l - m)^dpow, the value shape of the classical trace.
struct RationalTrace {
  LaurentPoly num;  // over (l, m)
  int dpow = 0;

  bool equal(const RationalTrace& o) const;
  /// num * D^{k - dpow} for k >= dpow (exact division if k < dpow).
  LaurentPoly cleared(int k) const;
};

/// Classical BMW rewrite + Markov trace over (l, m).
class BmwEngine {
 public:
  explicit BmwEngine(long step_budget = 1'000'000);

  AlgebraElement reduce(const AlgebraElement& u) const;
  RationalTrace tau_prime(const AlgebraElement& u) const;

 private:
  TbmwEngine inner_;
  mutable std::map<AlgWord, RationalTrace> cache_;
};

/// Oriented classical Kauffman polynomial of a braid closure through the
/// classical trace, over (l, m). Rejects words with eta letters.
LaurentPoly kauffman_via_trace(const TiedBraidWord& sigma, const BmwEngine& engine);

/// Both routes of the trace-factorization check for sigma in B_n, cleared by
/// (a + 1/a - z)^{n-1}: first = classical route, second = tied route.
std::pair<LaurentPoly, LaurentPoly> trace_factorization_pair(const TiedBraidWord& sigma,
                                                             const TbmwEngine& tied,
                                                             const BmwEngine& classical);

}  // namespace tielink
