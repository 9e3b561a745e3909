#include "tielink/batch.hpp"

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tielink {

std::vector<TiedBraidWord> enumerate_words(int strands, int max_len) {
  std::vector<BraidLetter> alphabet;
  for (int i = 1; i < strands; ++i) {
    alphabet.push_back({BraidGen::Sigma, i});
    alphabet.push_back({BraidGen::SigmaInv, i});
    alphabet.push_back({BraidGen::Eta, i});
  }
  std::vector<TiedBraidWord> words{TiedBraidWord{strands, {}}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (static_cast<int>(words[i].letters.size()) >= max_len) continue;
    for (const auto& l : alphabet) {
      TiedBraidWord w = words[i];
      w.letters.push_back(l);
      words.push_back(std::move(w));
    }
  }
  return words;
}

std::vector<TiedBraidWord> random_words(int strands, int max_len, int count,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TiedBraidWord> words;
  words.reserve(count);
  for (int t = 0; t < count; ++t) {
    TiedBraidWord w;
    w.strands = strands;
    int len = static_cast<int>(rng() % (max_len + 1));
    for (int i = 0; i < len; ++i) {
      int idx = 1 + static_cast<int>(rng() % (strands - 1));
      switch (rng() % 3) {
        case 0: w.letters.push_back({BraidGen::Sigma, idx}); break;
        case 1: w.letters.push_back({BraidGen::SigmaInv, idx}); break;
        default: w.letters.push_back({BraidGen::Eta, idx}); break;
      }
    }
    words.push_back(std::move(w));
  }
  return words;
}

RouteCheckOutcome route_equivalence_check(const std::vector<TiedBraidWord>& words,
                                          ExecutionPolicy policy, long step_budget) {
  const std::size_t n = words.size();
  std::vector<std::uint8_t> ok(n, 0);

  if (policy == ExecutionPolicy::Serial) {
    TbmwEngine engine(step_budget);
    SkeinContext ctx;
    for (std::size_t i = 0; i < n; ++i)
      ok[i] = invariant_via_trace(words[i], engine) ==
              eval_L_hat(TiedDiagram::closure(words[i]), ctx);
  } else {
#pragma omp parallel
    {
      TbmwEngine engine(step_budget);
      SkeinContext ctx;
#pragma omp for schedule(dynamic, 16)
      for (long i = 0; i < static_cast<long>(n); ++i)
        ok[i] = invariant_via_trace(words[i], engine) ==
                eval_L_hat(TiedDiagram::closure(words[i]), ctx);
    }
  }

  RouteCheckOutcome out;
  out.checked = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!ok[i]) {
      ++out.mismatches;
      if (out.failing.size() < 32) out.failing.push_back(i);
    }
  return out;
}

std::vector<LaurentPoly> batch_eval_L(const std::vector<TiedBraidWord>& words,
                                      ExecutionPolicy policy, bool share_memo) {
  const std::size_t n = words.size();
  std::vector<LaurentPoly> values(n);

  if (policy == ExecutionPolicy::Serial) {
    SkeinContext ctx;
    for (std::size_t i = 0; i < n; ++i) values[i] = eval_L(TiedDiagram::closure(words[i]), ctx);
    return values;
  }

  if (share_memo) {
    SkeinContext shared;
    shared.enable_sharing();
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < static_cast<long>(n); ++i)
      values[i] = eval_L(TiedDiagram::closure(words[i]), shared);
    return values;
  }

#pragma omp parallel
  {
    SkeinContext ctx;
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < static_cast<long>(n); ++i)
      values[i] = eval_L(TiedDiagram::closure(words[i]), ctx);
  }
  return values;
}

}  // namespace tielink
