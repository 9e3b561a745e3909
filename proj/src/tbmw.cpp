#include "tielink/tbmw.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>
#include <sstream>

namespace tielink {

void AlgebraElement::add(const AlgWord& w, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto it = combo.find(w);
  if (it == combo.end()) {
    combo.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) combo.erase(it);
  }
}

AlgebraElement alg_unit(int strands, VarSetPtr coeff_vars) {
  AlgebraElement u;
  u.strands = strands;
  u.combo.emplace(AlgWord{}, LaurentPoly::one(std::move(coeff_vars)));
  return u;
}

AlgebraElement alg_monomial(int strands, AlgWord w, LaurentPoly coeff) {
  AlgebraElement u;
  u.strands = strands;
  for (const auto& l : w)
    if (l.index < 1 || l.index >= strands)
      throw structure_error("generator index out of range for strand count");
  if (!coeff.is_zero()) u.combo.emplace(std::move(w), std::move(coeff));
  return u;
}

AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v) {
  if (u.strands != v.strands) throw structure_error("multiply: strand count mismatch");
  AlgebraElement r;
  r.strands = u.strands;
  for (const auto& [wu, cu] : u.combo)
    for (const auto& [wv, cv] : v.combo) {
      AlgWord w = wu;
      w.insert(w.end(), wv.begin(), wv.end());
      r.add(w, cu * cv);
    }
  return r;
}

AlgWord parse_alg_word(const std::string& text) {
  AlgWord w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    Gen kind;
    switch (tok[0]) {
      case 'g': kind = Gen::G; break;
      case 'G': kind = Gen::Gi; break;
      case 'h': kind = Gen::H; break;
      case 'e': kind = Gen::E; break;
      case 'f': kind = Gen::F; break;
      default: throw parse_error("algebra word: bad token '" + tok + "'");
    }
    if (tok.size() < 2 ||
        !std::all_of(tok.begin() + 1, tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw parse_error("algebra word: bad index in '" + tok + "'");
    int idx = std::stoi(tok.substr(1));
    if (idx < 1) throw parse_error("algebra word: index must be >= 1 in '" + tok + "'");
    w.push_back({kind, idx});
  }
  return w;
}

std::string to_string(const AlgWord& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& l : w) {
    if (!first) os << " ";
    first = false;
    switch (l.kind) {
      case Gen::G: os << "g"; break;
      case Gen::Gi: os << "G"; break;
      case Gen::H: os << "h"; break;
      case Gen::E: os << "e"; break;
      case Gen::F: os << "f"; break;
    }
    os << l.index;
  }
  return os.str();
}

std::string to_string(const AlgebraElement& u) {
  if (u.combo.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : u.combo) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (!w.empty()) os << " * " << to_string(w);
  }
  return os.str();
}

AlgebraElement pi(const TiedBraidWord& w) {
  AlgWord out;
  for (const auto& l : w.letters) {
    switch (l.kind) {
      case BraidGen::Sigma: out.push_back({Gen::G, l.index}); break;
      case BraidGen::SigmaInv: out.push_back({Gen::Gi, l.index}); break;
      case BraidGen::Eta: out.push_back({Gen::E, l.index}); break;
    }
  }
  return alg_monomial(w.strands, std::move(out), LaurentPoly::one(varsets::lzx()));
}

// ------------------------------------------------------------ rule table

namespace {

AlgWord parse_pattern(const std::string& s) {
  // like parse_alg_word but the digit is an offset (0 or 1) from the base
  AlgWord w;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    Gen kind;
    switch (tok[0]) {
      case 'g': kind = Gen::G; break;
      case 'G': kind = Gen::Gi; break;
      case 'h': kind = Gen::H; break;
      case 'e': kind = Gen::E; break;
      case 'f': kind = Gen::F; break;
      default: throw error("rule pattern: bad token " + tok);
    }
    w.push_back({kind, tok[1] - '0'});
  }
  return w;
}

AlgWord reversed(const AlgWord& w) { return AlgWord(w.rbegin(), w.rend()); }

}  // namespace

void TbmwEngine::add_rule(const std::string& lhs,
                          const std::vector<std::pair<std::string, std::string>>& rhs,
                          VarSetPtr vars, bool with_reversal) {
  auto push = [&](AlgWord l, std::vector<std::pair<LaurentPoly, AlgWord>> r) {
    if (seen_lhs_.count(l)) return;
    seen_lhs_.insert(l);
    rules_.push_back({std::move(l), std::move(r)});
  };

  AlgWord l = parse_pattern(lhs);
  std::vector<std::pair<LaurentPoly, AlgWord>> r;
  for (const auto& [coef, word] : rhs)
    r.emplace_back(LaurentPoly::parse(coef, vars), parse_pattern(word));
  push(l, r);

  if (with_reversal) {
    AlgWord lr = reversed(l);
    if (lr != l) {
      std::vector<std::pair<LaurentPoly, AlgWord>> rr;
      for (const auto& [coef, word] : r) rr.emplace_back(coef, reversed(word));
      push(std::move(lr), std::move(rr));
    }
  }
}

TbmwEngine::TbmwEngine(long step_budget) : budget_(step_budget) {
  coeff_vars_ = varsets::lzx();
  auto vs = coeff_vars_;
  const std::string y = "(a+1/a)/z-1";

  // absorption and idempotence fire first
  add_rule("e0 e0", {{"1", "e0"}}, vs);
  add_rule("f0 e0", {{"1", "f0"}}, vs);
  add_rule("e0 h0", {{"1", "h0"}}, vs);
  add_rule("g0 G0", {{"1", ""}}, vs);
  // remaining same-index pairs
  add_rule("h0 h0", {{"1/x", "h0"}}, vs);
  add_rule("f0 f0", {{y, "f0"}}, vs);
  add_rule("f0 h0", {{y, "h0"}}, vs);
  add_rule("g0 h0", {{"1/a", "h0"}}, vs);
  add_rule("g0 f0", {{"1/a", "f0"}}, vs);
  add_rule("G0 h0", {{"a", "h0"}}, vs);
  add_rule("G0 f0", {{"a", "f0"}}, vs);
  add_rule("e0 g0", {{"1", "g0 e0"}}, vs, false);
  add_rule("e0 G0", {{"1", "G0 e0"}}, vs, false);
  add_rule("g0 g0", {{"z", "g0 e0"}, {"z/a", "f0"}, {"-1", ""}}, vs);
  add_rule("G0 G0", {{"z", "G0 e0"}, {"z a", "f0"}, {"-1", ""}}, vs);

  // braid relations
  add_rule("g1 g0 g1", {{"1", "g0 g1 g0"}}, vs);
  add_rule("G1 G0 G1", {{"1", "G0 G1 G0"}}, vs);
  add_rule("g1 g0 G1", {{"1", "G0 g1 g0"}}, vs);
  add_rule("G1 G0 g1", {{"1", "g0 G1 G0"}}, vs);

  // tangle relations
  add_rule("h1 g0 h1", {{"a", "h1"}}, vs);
  add_rule("h0 g1 h0", {{"a", "h0"}}, vs);
  add_rule("h1 G0 h1", {{"1/a", "h1"}}, vs);
  add_rule("h0 G1 h0", {{"1/a", "h0"}}, vs);
  add_rule("h1 h0 h1", {{"1", "h1"}}, vs);
  add_rule("h0 h1 h0", {{"1", "h0"}}, vs);
  add_rule("g1 g0 h1", {{"1", "h0 h1"}}, vs);
  add_rule("g0 g1 h0", {{"1", "h1 h0"}}, vs);
  add_rule("g1 h0 h1", {{"1", "G0 h1"}}, vs);
  add_rule("g0 h1 h0", {{"1", "G1 h0"}}, vs);
  add_rule("G1 G0 h1", {{"1", "h0 h1"}}, vs);
  add_rule("G0 G1 h0", {{"1", "h1 h0"}}, vs);
  add_rule("G1 h0 h1", {{"1", "g0 h1"}}, vs);
  add_rule("G0 h1 h0", {{"1", "g1 h0"}}, vs);
  add_rule("g1 h0 g1", {{"1", "G0 h1 G0"}}, vs);
  add_rule("G1 h0 G1", {{"1", "g0 h1 g0"}}, vs);

  // tie-braid relations
  add_rule("e1 g0 g1", {{"1", "g0 g1 e0"}}, vs);
  add_rule("e1 g0 G1", {{"1", "g0 G1 e0"}}, vs);
  add_rule("g1 G0 e1", {{"1", "e0 g1 G0"}}, vs);
  add_rule("e1 G0 G1", {{"1", "G0 G1 e0"}}, vs);
  add_rule("e0 g1 e1", {{"1", "e0 g1 e0"}}, vs, false);
  add_rule("g1 e0 e1", {{"1", "e0 g1 e0"}}, vs, false);
  add_rule("e0 e1 g0", {{"1", "g0 e0 e1"}}, vs, false);
  add_rule("e1 g0 e1", {{"1", "g0 e0 e1"}}, vs, false);
  add_rule("e0 G1 e1", {{"1", "e0 G1 e0"}}, vs, false);
  add_rule("G1 e0 e1", {{"1", "e0 G1 e0"}}, vs, false);
  add_rule("e0 e1 G0", {{"1", "G0 e0 e1"}}, vs, false);

  // ties against tangles
  add_rule("e1 h0 e1", {{"1", "e1 f0"}}, vs);
  add_rule("e0 h1 e0", {{"1", "f1 e0"}}, vs);
  add_rule("h1 e0 h1", {{y, "h1"}}, vs);
  add_rule("h0 e1 h0", {{y, "h0"}}, vs);
  add_rule("h1 h0 e1", {{"1", "h1 f0"}}, vs);
  add_rule("h0 h1 e0", {{"1", "h0 f1"}}, vs);
  add_rule("e0 h1 h0 e1", {{"1", "f1 f0"}}, vs);
  add_rule("f0 h1 e0", {{"1", "f0 f1"}}, vs);
  add_rule("g1 e0 h1", {{"1/a", "e0 h1"}}, vs);
  add_rule("G1 e0 h1", {{"a", "e0 h1"}}, vs);
  add_rule("g1 e0 f1", {{"1/a", "e0 f1"}}, vs);
  add_rule("G1 e0 f1", {{"a", "e0 f1"}}, vs);
  add_rule("f1 e0 h1", {{y, "e0 h1"}}, vs);
  add_rule("g1 e0 g1", {{"1", "g1 g1 G0 e1 g0"}}, vs, false);
  add_rule("e1 h0 f1", {{"1", "f0 h1 e0"}}, vs);
  add_rule("g1 h0 e1", {{"z", "e1 f0"}, {"z", "e0 h1 f0"}, {"-1", "g0 h1 f0"}}, vs);
  add_rule("G1 h0 e1", {{"1", "g0 h1 f0"}}, vs);
  add_rule("g1 h0 f1", {{"z", "f0 h1 e0"}, {"z", "f1 e0"}, {"-1", "g0 h1 e0"}}, vs);
  add_rule("G1 h0 f1", {{"1", "g0 h1 e0"}}, vs);
  add_rule("f1 h0 f1", {{"1", "f1 e0"}}, vs);
  add_rule("f0 h1 f0", {{"1", "e1 f0"}}, vs);

  // tied tangles against braids
  add_rule("g1 g0 f1", {{"1", "f0 g1 g0"}}, vs);
  add_rule("g1 f0 g1", {{"1", "G0 f1 G0"}}, vs);
  add_rule("G1 f0 G1", {{"1", "g0 f1 g0"}}, vs);
  add_rule("h1 g0 f1", {{"a", "h1 e0"}}, vs);
  add_rule("h0 g1 f0", {{"a", "h0 e1"}}, vs);
  add_rule("f1 g0 f1", {{"a", "f1 e0"}}, vs);
  add_rule("f0 g1 f0", {{"a", "e1 f0"}}, vs);
  add_rule("e1 g0 f1", {{"1", "g0 f1 e0"}}, vs);
  add_rule("f1 g0 e1", {{"1", "f1 g0 e0"}}, vs);
  add_rule("h1 g0 e1", {{"1", "h1 e0 g0"}}, vs);
  add_rule("e1 f0 g1", {{"1", "f0 g1 e1"}}, vs, false);
  add_rule("e1 f0 G1", {{"1", "f0 G1 e1"}}, vs, false);

  // cluster reductions
  add_rule("g1 e1 g0 e1", {{"1", "e0 g1 g0 e0"}}, vs);
  add_rule("g1 e1 g0 g1 e1", {{"1", "g0 g1 e1 e0 g0"}}, vs);
  add_rule("g1 e1 g0 f1", {{"1", "f0 g1 g0 e0"}}, vs);
  add_rule("h1 g0 g1 e1", {{"1", "h1 f0"}}, vs);
  add_rule("g1 e1 g0 h1", {{"1", "f0 h1"}}, vs);
  add_rule("h1 f0 g1", {{"1", "h1 e0 G0"}}, vs);
  add_rule("h1 f0 g1 e1", {{"1", "h1 e0 G0"}}, vs);
  add_rule("g1 e1 f0 g1", {{"1", "G0 e0 h1 e0 G0"}}, vs);
  add_rule("g1 f0 g1 e1", {{"1", "G0 e0 h1 e0 G0"}}, vs);
  add_rule("g1 e1 f0 g1 e1", {{"1", "G0 e0 h1 e0 G0"}}, vs);
  add_rule("f1 f0 g1", {{"1", "f1 G0 e0"}}, vs);
  add_rule("f1 f0 g1 e1", {{"1", "f1 G0 e0"}}, vs);
  add_rule("g1 e1 f0 h1", {{"1", "G0 e0 h1"}}, vs);

  // a tie one index below a tangle is absorbed through tie mobility
  add_rule("h1 e0 e1", {{"1", "h1 e0"}}, vs);
  add_rule("f1 e0 e1", {{"1", "f1 e0"}}, vs);
  add_rule("h1 g0 e0 e1", {{"1", "h1 g0 e0"}}, vs);
  add_rule("f1 g0 e0 e1", {{"1", "f1 g0 e0"}}, vs);

  // mixed tangle pairs across adjacent indices
  add_rule("h1 h0 f1", {{"1", "h1 e0"}}, vs);
  add_rule("h0 h1 f0", {{"1", "h0 e1"}}, vs);

  // middle clusters g e between top letters
  add_rule("g1 g0 e0 g1", {{"1", "g0 g1 e1 g0"}}, vs);
  add_rule("h1 g0 e0 h1", {{"a", "h1"}}, vs);
  add_rule("h1 g0 e0 f1", {{"a", "h1 e0"}}, vs);
  add_rule("h1 g0 e0 g1", {{"1", "h1 f0"}}, vs);
  add_rule("g1 g0 e0 h1", {{"1", "f0 h1"}}, vs);
  add_rule("g1 g0 e0 f1", {{"1", "f0 g1 g0 e0"}}, vs);
  add_rule("f1 g0 e0 h1", {{"a", "e0 h1"}}, vs);
  add_rule("f1 g0 e0 f1", {{"a", "f1 e0"}}, vs);
  add_rule("f1 g0 e0 g1", {{"1", "g0 g1 e1 f0"}}, vs);

  // pairs of tied tangles
  add_rule("f1 f0 f1", {{"1", "f1 e0"}}, vs);
  add_rule("f0 f1 f0", {{"1", "e1 f0"}}, vs);
  add_rule("f1 f0 h1", {{"1", "e0 h1"}}, vs);
  add_rule("f0 f1 h0", {{"1", "e1 h0"}}, vs);
  add_rule("f1 f0 e1", {{"1", "f1 f0"}}, vs);
  add_rule("f0 f1 e0", {{"1", "f0 f1"}}, vs);
  add_rule("f0 f1 g0 e0", {{"1", "f0 f1 g0"}}, vs);
  add_rule("f1 f0 g1 e1 e0", {{"1", "f1 f0 g1 e0"}}, vs);
  add_rule("e1 f0 h1", {{"1", "f0 h1"}}, vs);
  add_rule("e0 f1 h0", {{"1", "f1 h0"}}, vs);
  add_rule("h1 f0 h1", {{"1", "h1"}}, vs);
  add_rule("h0 f1 h0", {{"1", "h0"}}, vs);
}

TbmwEngine::TbmwEngine(long step_budget, int) : budget_(step_budget), classical_(true) {
  coeff_vars_ = varsets::classical();
  auto vs = coeff_vars_;
  const std::string d = "(l+1/l)/m-1";

  add_rule("g0 G0", {{"1", ""}}, vs);
  add_rule("h0 h0", {{d, "h0"}}, vs);
  add_rule("g0 h0", {{"1/l", "h0"}}, vs);
  add_rule("G0 h0", {{"l", "h0"}}, vs);
  add_rule("g0 g0", {{"m", "g0"}, {"m/l", "h0"}, {"-1", ""}}, vs);
  add_rule("G0 G0", {{"m", "G0"}, {"m l", "h0"}, {"-1", ""}}, vs);

  add_rule("g1 g0 g1", {{"1", "g0 g1 g0"}}, vs);
  add_rule("G1 G0 G1", {{"1", "G0 G1 G0"}}, vs);
  add_rule("g1 g0 G1", {{"1", "G0 g1 g0"}}, vs);
  add_rule("G1 G0 g1", {{"1", "g0 G1 G0"}}, vs);

  add_rule("h1 g0 h1", {{"l", "h1"}}, vs);
  add_rule("h0 g1 h0", {{"l", "h0"}}, vs);
  add_rule("h1 G0 h1", {{"1/l", "h1"}}, vs);
  add_rule("h0 G1 h0", {{"1/l", "h0"}}, vs);
  add_rule("h1 h0 h1", {{"1", "h1"}}, vs);
  add_rule("h0 h1 h0", {{"1", "h0"}}, vs);
  add_rule("g1 g0 h1", {{"1", "h0 h1"}}, vs);
  add_rule("g0 g1 h0", {{"1", "h1 h0"}}, vs);
  add_rule("g1 h0 h1", {{"1", "G0 h1"}}, vs);
  add_rule("g0 h1 h0", {{"1", "G1 h0"}}, vs);
  add_rule("G1 G0 h1", {{"1", "h0 h1"}}, vs);
  add_rule("G0 G1 h0", {{"1", "h1 h0"}}, vs);
  add_rule("G1 h0 h1", {{"1", "g0 h1"}}, vs);
  add_rule("G0 h1 h0", {{"1", "g1 h0"}}, vs);
  add_rule("g1 h0 g1", {{"1", "G0 h1 G0"}}, vs);
  add_rule("G1 h0 G1", {{"1", "g0 h1 g0"}}, vs);
}

// ------------------------------------------------------------- rewriting

namespace {

// exact commutation of two generators as algebra elements
bool letters_commute(const GenLetter& a, const GenLetter& b) {
  int gap = std::abs(a.index - b.index);
  if (gap != 1) return true;  // same index and far pairs always commute
  bool a_tie = a.kind == Gen::E || a.kind == Gen::F;
  bool b_tie = b.kind == Gen::E || b.kind == Gen::F;
  return a_tie && b_tie && !(a.kind == Gen::F && b.kind == Gen::F);
}

}  // namespace

bool TbmwEngine::apply_at(const AlgWord& w, std::size_t pos, const Rule& r,
                          std::vector<std::pair<LaurentPoly, AlgWord>>& out) const {
  // the pattern is matched as a subsequence; letters in between are kept
  // when they commute with every remaining pattern letter, and move out to
  // the right of the rewritten window
  if (pos + r.lhs.size() > w.size()) return false;
  int base = w[pos].index - r.lhs[0].index;
  if (base < 1) return false;
  if (w[pos].kind != r.lhs[0].kind) return false;
  std::vector<std::size_t> skipped;
  std::size_t j = 1, end = pos + 1;
  for (std::size_t q = pos + 1; q < w.size() && j < r.lhs.size(); ++q) {
    if (w[q].kind == r.lhs[j].kind && w[q].index == base + r.lhs[j].index) {
      ++j;
      end = q + 1;
      continue;
    }
    bool movable = true;
    for (std::size_t jj = j; jj < r.lhs.size() && movable; ++jj)
      movable = letters_commute(w[q], GenLetter{r.lhs[jj].kind, base + r.lhs[jj].index});
    if (!movable) return false;
    skipped.push_back(q);
  }
  if (j < r.lhs.size()) return false;
  out.clear();
  for (const auto& [coef, pat] : r.rhs) {
    AlgWord nw;
    nw.reserve(w.size() + pat.size());
    nw.insert(nw.end(), w.begin(), w.begin() + pos);
    for (const auto& p : pat) nw.push_back({p.kind, base + p.index});
    for (std::size_t q : skipped) nw.push_back(w[q]);
    nw.insert(nw.end(), w.begin() + end, w.end());
    out.emplace_back(coef, std::move(nw));
  }
  return true;
}

bool TbmwEngine::sort_swap_at(AlgWord& w, std::size_t pos) const {
  if (pos + 1 >= w.size()) return false;
  const GenLetter a = w[pos], b = w[pos + 1];
  int gap = std::abs(a.index - b.index);
  bool ef = (a.kind == Gen::E && b.kind == Gen::F) || (a.kind == Gen::F && b.kind == Gen::E);
  // tie against adjacent tied-tangle sorts descending so that g e clusters
  // stay contiguous; all other commuting pairs sort ascending
  if (gap == 1 && ef) {
    if (a.index < b.index) {
      std::swap(w[pos], w[pos + 1]);
      return true;
    }
    return false;
  }
  bool commutes = gap >= 2 || (a.kind == Gen::E && b.kind == Gen::E);
  if (commutes && a.index > b.index) {
    std::swap(w[pos], w[pos + 1]);
    return true;
  }
  return false;
}

namespace {

// at most one top-index cluster from {g, g e, g^-1, g^-1 e, h, e, f}
bool top_cluster_ok(const AlgWord& w) {
  if (w.empty()) return true;
  int t = 0;
  for (const auto& l : w) t = std::max(t, l.index);
  std::size_t first = w.size(), last = 0;
  int count = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].index == t) {
      first = std::min(first, i);
      last = i;
      ++count;
    }
  if (count == 1) return true;
  if (count == 2 && last == first + 1) {
    Gen k1 = w[first].kind, k2 = w[last].kind;
    return (k1 == Gen::G || k1 == Gen::Gi) && k2 == Gen::E;
  }
  return false;
}

}  // namespace

AlgebraElement TbmwEngine::reduce(const AlgebraElement& u) const {
  AlgebraElement result;
  result.strands = u.strands;
  std::vector<std::pair<AlgWord, LaurentPoly>> stack(u.combo.begin(), u.combo.end());
  long steps = 0;
  std::vector<std::string> trail;
  auto bump = [&](const AlgWord& w) {
    if (budget_ - steps < 40) trail.push_back(tielink::to_string(w));
    if (++steps > budget_) {
      std::string msg = "rewrite budget exceeded near word '" + tielink::to_string(w) + "'";
      for (const auto& t : trail) msg += "\n  ... " + t;
      throw rewrite_error(msg);
    }
  };

  std::vector<std::pair<LaurentPoly, AlgWord>> out;
  while (!stack.empty()) {
    auto [w, c] = std::move(stack.back());
    stack.pop_back();
    if (c.is_zero()) continue;

    bool applied = false;
    for (std::size_t pos = 0; pos < w.size() && !applied; ++pos) {
      for (const auto& r : rules_) {
        if (apply_at(w, pos, r, out)) {
          bump(w);
          for (auto& [mult, w2] : out) stack.emplace_back(std::move(w2), c * mult);
          applied = true;
          break;
        }
      }
      if (!applied) {
        AlgWord w2 = w;
        if (sort_swap_at(w2, pos)) {
          bump(w);
          stack.emplace_back(std::move(w2), std::move(c));
          applied = true;
        }
      }
    }
    if (applied) continue;

    // residual inverses in otherwise-final words are resolved through the
    // skein relation, so that reduced forms are inverse-free and canonical
    auto it = std::find_if(w.begin(), w.end(), [](const GenLetter& l) { return l.kind == Gen::Gi; });
    if (it != w.end()) {
      bump(w);
      std::size_t p = static_cast<std::size_t>(it - w.begin());
      int idx = it->index;
      if (!classical_) {
        // g^-1 = z e + z f - g
        for (auto [kind, coefstr] :
             {std::pair{Gen::E, "z"}, std::pair{Gen::F, "z"}, std::pair{Gen::G, "-1"}}) {
          AlgWord w2 = w;
          w2[p] = {kind, idx};
          stack.emplace_back(std::move(w2), c * LaurentPoly::parse(coefstr, coeff_vars_));
        }
      } else {
        // G^-1 = m + m H - G
        AlgWord w2 = w;
        w2.erase(w2.begin() + p);
        stack.emplace_back(std::move(w2), c * LaurentPoly::parse("m", coeff_vars_));
        w2 = w;
        w2[p] = {Gen::H, idx};
        stack.emplace_back(std::move(w2), c * LaurentPoly::parse("m", coeff_vars_));
        w2 = w;
        w2[p] = {Gen::G, idx};
        stack.emplace_back(std::move(w2), c * LaurentPoly::parse("-1", coeff_vars_));
      }
      continue;
    }
    result.add(w, c);
  }
  return result;
}

// ----------------------------------------------------------------- trace

namespace {

struct TraceHelper {
  const TbmwEngine& eng;
  VarSetPtr vs;
  bool mirror;
  std::map<AlgWord, std::optional<LaurentPoly>> cache;

  // Markov strip factors. The relation g h = a^-1 h pins the cap kink of g
  // to the 1/a loop, which forces the closure kink of g to be the +a loop;
  // the g strip factor is therefore x a and the g^-1 one x/a. The mirrored
  // convention (x/a for g) is the one that factors through the classical
  // quotient letterwise.
  LaurentPoly factor(Gen kind) const {
    switch (kind) {
      case Gen::G: return LaurentPoly::parse(mirror ? "x/a" : "x a", vs);
      case Gen::Gi: return LaurentPoly::parse(mirror ? "x a" : "x/a", vs);
      case Gen::H:
      case Gen::F: return LaurentPoly::parse("x", vs);
      case Gen::E: return LaurentPoly::parse("x", vs) * y_poly();
    }
    throw error("unreachable");
  }

  // top cluster [first, last] when the top-index letters are contiguous and
  // form a single strippable gamma
  std::optional<std::pair<std::size_t, std::size_t>> cluster(const AlgWord& rw) const {
    int t = 0;
    for (const auto& l : rw) t = std::max(t, l.index);
    std::size_t first = rw.size(), last = 0;
    int count = 0;
    for (std::size_t i = 0; i < rw.size(); ++i)
      if (rw[i].index == t) {
        first = std::min(first, i);
        last = i;
        ++count;
      }
    if (count == 1) return std::make_pair(first, last);
    if (count == 2 && last == first + 1 &&
        (rw[first].kind == Gen::G || rw[first].kind == Gen::Gi) && rw[last].kind == Gen::E)
      return std::make_pair(first, last);
    return std::nullopt;
  }

  LaurentPoly word_trace(const AlgWord& w) {
    if (w.empty()) return LaurentPoly::one(vs);
    if (auto it = cache.find(w); it != cache.end()) {
      if (!it->second) throw rewrite_error("trace recursion cycle at '" + to_string(w) + "'");
      return *it->second;
    }
    cache.emplace(w, std::nullopt);
    int strands = 1;
    for (const auto& l : w) strands = std::max(strands, l.index + 1);
    AlgebraElement red = eng.reduce(alg_monomial(strands, w, LaurentPoly::one(vs)));
    LaurentPoly total = LaurentPoly::zero(vs);
    for (const auto& [rw, rc] : red.combo) total += rc * reduced_word_trace(rw);
    cache[w] = total;
    return total;
  }

  LaurentPoly reduced_word_trace(const AlgWord& rw) {
    if (rw.empty()) return LaurentPoly::one(vs);
    if (auto cl = cluster(rw)) {
      auto [first, last] = *cl;
      LaurentPoly f = factor(rw[first].kind);
      AlgWord rest(rw.begin() + last + 1, rw.end());
      rest.insert(rest.end(), rw.begin(), rw.begin() + first);
      return f * word_trace(rest);
    }
    if (auto gathered = gather_strip(rw)) return *gathered;
    // the trace is central: rotate until the rewrite system can act again
    for (std::size_t r = 1; r < rw.size(); ++r) {
      AlgWord rot(rw.begin() + r, rw.end());
      rot.insert(rot.end(), rw.begin(), rw.begin() + r);
      int strands = 1;
      for (const auto& l : rot) strands = std::max(strands, l.index + 1);
      AlgebraElement red = eng.reduce(alg_monomial(strands, rot, LaurentPoly::one(vs)));
      bool progressed = !(red.combo.size() == 1 && red.combo.begin()->first == rot &&
                          red.combo.begin()->second.is_one());
      if (progressed) {
        LaurentPoly total = LaurentPoly::zero(vs);
        for (const auto& [rw2, rc2] : red.combo) total += rc2 * reduced_word_trace(rw2);
        return total;
      }
      if (auto gathered = gather_strip(rot)) return *gathered;
    }
    throw rewrite_error("no rotation unblocks the trace at '" + to_string(rw) + "'");
  }

  // strip a scattered top cluster: at most one non-tie top letter, with every
  // stray top tie able to reach it across commuting letters only
  std::optional<LaurentPoly> gather_strip(const AlgWord& rw) {
    int t = 0;
    for (const auto& l : rw) t = std::max(t, l.index);
    std::vector<std::size_t> tops;
    std::size_t anchor = rw.size();
    for (std::size_t i = 0; i < rw.size(); ++i)
      if (rw[i].index == t) {
        tops.push_back(i);
        if (rw[i].kind != Gen::E) {
          if (anchor != rw.size()) return std::nullopt;  // two non-tie top letters
          anchor = i;
        }
      }
    if (anchor == rw.size()) anchor = tops.front();
    GenLetter top_e{Gen::E, t};
    for (std::size_t q : tops) {
      if (q == anchor) continue;
      bool left_ok = true, right_ok = true;
      auto fwd = [&](std::size_t i) { return (i + 1) % rw.size(); };
      // move toward the anchor, either way around the cycle
      for (std::size_t i = fwd(q); i != anchor; i = fwd(i))
        if (rw[i].index != t && !letters_commute(top_e, rw[i])) right_ok = false;
      for (std::size_t i = fwd(anchor); i != q; i = fwd(i))
        if (rw[i].index != t && !letters_commute(top_e, rw[i])) left_ok = false;
      if (!left_ok && !right_ok) return std::nullopt;
    }
    LaurentPoly f = factor(rw[anchor].kind);
    AlgWord rest;
    for (std::size_t step = 1; step < rw.size(); ++step) {
      std::size_t i = (anchor + step) % rw.size();
      if (rw[i].index != t) rest.push_back(rw[i]);
    }
    return f * word_trace(rest);
  }
};

}  // namespace

LaurentPoly TbmwEngine::trace(const AlgebraElement& u, bool mirror_strips) const {
  if (classical_) throw error("trace: use tau_prime for classical BMW elements");
  TraceHelper helper{*this, coeff_vars_, mirror_strips, {}};
  LaurentPoly total = LaurentPoly::zero(coeff_vars_);
  for (const auto& [w, c] : u.combo) total += c * helper.word_trace(w);
  return total;
}

LaurentPoly invariant_via_trace(const TiedBraidWord& w, const TbmwEngine& engine) {
  auto vs = varsets::lzx();
  LaurentPoly norm = LaurentPoly::variable(vs, "x", 1 - w.strands) *
                     LaurentPoly::variable(vs, "a", -exponent(w));
  return norm * engine.trace(pi(w));
}

// ------------------------------------------------------- classical BMW

AlgebraElement psi(const AlgebraElement& u) {
  auto lm = varsets::classical();
  auto azx = varsets::lzx();
  AlgebraElement r;
  r.strands = u.strands;
  for (const auto& [w, c] : u.combo) {
    auto xi = c.vars()->index("x");
    if (xi && (c.min_exponent(*xi) != 0 || c.max_exponent(*xi) != 0))
      throw structure_error("psi: coefficient contains x; apply the cleared comparison instead");
    LaurentPoly cc = rename_vars(c, {{"a", "l"}, {"z", "m"}, {"x", "m"}}, lm);
    AlgWord cw;
    for (const auto& l : w) {
      switch (l.kind) {
        case Gen::G: cw.push_back({Gen::G, l.index}); break;
        case Gen::Gi: cw.push_back({Gen::Gi, l.index}); break;
        case Gen::H:
        case Gen::F: cw.push_back({Gen::H, l.index}); break;
        case Gen::E: break;
      }
    }
    r.add(cw, cc);
  }
  return r;
}

bool RationalTrace::equal(const RationalTrace& o) const {
  auto lm = varsets::classical();
  LaurentPoly D = LaurentPoly::parse("l + 1/l - m", lm);
  return num * D.pow(o.dpow) == o.num * D.pow(dpow);
}

LaurentPoly RationalTrace::cleared(int k) const {
  auto lm = varsets::classical();
  LaurentPoly D = LaurentPoly::parse("l + 1/l - m", lm);
  if (k >= dpow) return num * D.pow(k - dpow);
  return num.exact_div(D.pow(dpow - k));
}

BmwEngine::BmwEngine(long step_budget) : inner_(step_budget, 0) {}

AlgebraElement BmwEngine::reduce(const AlgebraElement& u) const { return inner_.reduce(u); }

RationalTrace BmwEngine::tau_prime(const AlgebraElement& u) const {
  auto lm = varsets::classical();
  struct Helper {
    const TbmwEngine& eng;
    VarSetPtr lm;
    std::map<AlgWord, RationalTrace>& cache;

    RationalTrace word_trace(const AlgWord& w) {
      if (w.empty()) return {LaurentPoly::one(lm), 0};
      if (auto it = cache.find(w); it != cache.end()) return it->second;
      int strands = 1;
      for (const auto& l : w) strands = std::max(strands, l.index + 1);
      AlgebraElement red = eng.reduce(alg_monomial(strands, w, LaurentPoly::one(lm)));
      RationalTrace total{LaurentPoly::zero(lm), 0};
      LaurentPoly D = LaurentPoly::parse("l + 1/l - m", lm);
      for (const auto& [rw, rc] : red.combo) {
        RationalTrace term;
        if (rw.empty()) {
          term = {rc, 0};
        } else {
          int t = 0;
          for (const auto& l : rw) t = std::max(t, l.index);
          std::size_t pos = 0;
          int count = 0;
          for (std::size_t i = 0; i < rw.size(); ++i)
            if (rw[i].index == t) {
              pos = i;
              ++count;
            }
          if (count != 1)
            throw rewrite_error("classical trace: multiple top letters in '" + to_string(rw) + "'");
          LaurentPoly fnum;
          // the strip factor of G carries +l for the same reason the tied g
          // strip carries +a: G H = l^-1 H pins the cap kink, so the closure
          // kink sits on the opposite power
          switch (rw[pos].kind) {
            case Gen::G: fnum = LaurentPoly::parse("m l", lm); break;
            case Gen::Gi: fnum = LaurentPoly::parse("m/l", lm); break;
            case Gen::H: fnum = LaurentPoly::parse("m", lm); break;
            default: throw rewrite_error("classical trace: unexpected letter kind");
          }
          AlgWord rest(rw.begin() + pos + 1, rw.end());
          rest.insert(rest.end(), rw.begin(), rw.begin() + pos);
          RationalTrace sub = word_trace(rest);
          term = {rc * fnum * sub.num, sub.dpow + 1};
        }
        // common denominator
        int dp = std::max(total.dpow, term.dpow);
        total = {total.num * D.pow(dp - total.dpow) + term.num * D.pow(dp - term.dpow), dp};
      }
      cache.emplace(w, total);
      return total;
    }
  };
  Helper helper{inner_, lm, cache_};
  RationalTrace total{LaurentPoly::zero(lm), 0};
  LaurentPoly D = LaurentPoly::parse("l + 1/l - m", lm);
  for (const auto& [w, c] : u.combo) {
    RationalTrace t = helper.word_trace(w);
    int dp = std::max(total.dpow, t.dpow);
    total = {total.num * D.pow(dp - total.dpow) + c * (t.num * D.pow(dp - t.dpow)), dp};
  }
  return total;
}

LaurentPoly kauffman_via_trace(const TiedBraidWord& sigma, const BmwEngine& engine) {
  auto lm = varsets::classical();
  for (const auto& l : sigma.letters)
    if (l.kind == BraidGen::Eta)
      throw structure_error("kauffman_via_trace: eta letters are not allowed");
  const int n = sigma.strands;
  const int w = exponent(sigma);

  AlgWord word;
  for (const auto& l : sigma.letters)
    word.push_back({l.kind == BraidGen::Sigma ? Gen::G : Gen::Gi, l.index});
  RationalTrace t = engine.tau_prime(alg_monomial(n, std::move(word), LaurentPoly::one(lm)));

  // ((l + 1/l - m)/m)^{n-1} l^{-w} tau'
  LaurentPoly cleared = t.cleared(n - 1);
  LaurentPoly mono = LaurentPoly::variable(lm, "m", -(n - 1)) * LaurentPoly::variable(lm, "l", -w);
  return cleared * mono;
}

std::pair<LaurentPoly, LaurentPoly> trace_factorization_pair(const TiedBraidWord& sigma,
                                                             const TbmwEngine& tied,
                                                             const BmwEngine& classical) {
  for (const auto& l : sigma.letters)
    if (l.kind == BraidGen::Eta)
      throw structure_error("trace_factorization_pair: input must be a classical braid word");
  const int n = sigma.strands;
  auto az = varsets::az();
  LaurentPoly D_az = LaurentPoly::parse("a + 1/a - z", az);

  AlgebraElement tied_elem = pi(all_tied(sigma));
  LaurentPoly varpi = tied.trace(tied_elem);

  // clear x = z/(a + 1/a - z): a^i z^j x^p -> a^i z^{j+p} D^{n-1-p}
  auto lzx = varsets::lzx();
  std::size_t ai = *lzx->index("a"), zi = *lzx->index("z"), xi = *lzx->index("x");
  LaurentPoly tied_cleared = LaurentPoly::zero(az);
  for (const auto& [e, c] : varpi.terms()) {
    int p = e[xi];
    if (p > n - 1) throw structure_error("trace value exceeds the expected x-degree");
    ExpVec ez(az->size(), 0);
    ez[*az->index("a")] = e[ai];
    ez[*az->index("z")] = e[zi] + p;
    tied_cleared += LaurentPoly::monomial(az, std::move(ez), c) * D_az.pow(n - 1 - p);
  }

  RationalTrace tau = classical.tau_prime(psi(tied_elem));
  LaurentPoly classical_cleared =
      rename_vars(tau.cleared(n - 1), {{"l", "a"}, {"m", "z"}}, az);
  return {classical_cleared, tied_cleared};
}

}  // namespace tielink
