#pragma once

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "tielink/diagram.hpp"
#include "tielink/poly.hpp"

namespace tielink {

struct SkeinStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
};

/// Memo table for the skein recursion, keyed by canonical diagram keys.
/// Single-owner by default; enable_sharing() switches to synchronized
/// first-writer-wins insertion so one context can be shared across threads.
class SkeinContext {
 public:
  SkeinContext() = default;

  void enable_sharing() { shared_ = true; }
  bool sharing() const { return shared_; }

  std::optional<LaurentPoly> lookup(const std::string& key);
  void store(const std::string& key, const LaurentPoly& value);

  SkeinStats stats() const;
  void note_node();

 private:
  bool shared_ = false;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, LaurentPoly> memo_;
  SkeinStats stats_;
};

/// The three-variable invariant of unoriented tied link diagrams, by
/// deciding-point recursion over (a, z, x).
LaurentPoly eval_L(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_L(const TiedDiagram& d);

/// Writhe-normalized oriented invariant a^{-w} L.
LaurentPoly eval_L_hat(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_L_hat(const TiedDiagram& d);

/// Two-variable bracket over (A, c): L at a = -A^3, z = A + 1/A, x = 1/c.
LaurentPoly eval_bracket(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_bracket(const TiedDiagram& d);

/// Oriented bracket normalization (-A)^{-3w} << D >> over (A, c).
LaurentPoly eval_J(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_J(const TiedDiagram& d);

/// J with A = t^{-1/4}; exponents are quarter-units of t, encoded as integer
/// exponents of the variable t4.
LaurentPoly eval_J_t(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_J_t(const TiedDiagram& d);

/// Classical unoriented Kauffman polynomial over (a, z): all components tied
/// together, then L; the result must be free of x.
LaurentPoly eval_classical_kauffman(const TiedDiagram& d, SkeinContext& ctx);
LaurentPoly eval_classical_kauffman(const TiedDiagram& d);

}  // namespace tielink
