#pragma once

#include <cstdint>
#include <vector>

#include "tielink/skein.hpp"
#include "tielink/tbmw.hpp"

namespace tielink {

enum class ExecutionPolicy { Serial, Parallel };

/// All tied braid words over TB_n up to the given length, shortest first.
std::vector<TiedBraidWord> enumerate_words(int strands, int max_len);
std::vector<TiedBraidWord> random_words(int strands, int max_len, int count,
                                        std::uint64_t seed);

struct RouteCheckOutcome {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::vector<std::size_t> failing;  // indices into the input word list
};

/// Cross-validates the skein and trace routes on every word. The parallel
/// kernel uses one context and engine per thread; the serial run is the
/// reference implementation the kernel is tested against.
RouteCheckOutcome route_equivalence_check(const std::vector<TiedBraidWord>& words,
                                          ExecutionPolicy policy,
                                          long step_budget = 1'000'000);

/// Batch skein evaluation of closures; order of results matches the input.
/// With `share_memo`, the parallel kernel uses one synchronized context with
/// first-writer-wins insertion instead of per-thread contexts.
std::vector<LaurentPoly> batch_eval_L(const std::vector<TiedBraidWord>& words,
                                      ExecutionPolicy policy, bool share_memo = false);

}  // namespace tielink
