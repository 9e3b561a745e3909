#pragma once

#include <vector>

#include "tielink/poly.hpp"

namespace oracle {

// Classical Kauffman bracket of a braid closure by the full 2^n state sum
// (smoothing every crossing both ways and counting loops with a union-find).
// Result lives over (A, c) with c unused. Letters are +i / -i.
tielink::LaurentPoly bracket_state_sum(const std::vector<int>& word, int strands);

// (-A)^{-3w} times the bracket, i.e. the Jones polynomial in A-form.
tielink::LaurentPoly jones_from_state_sum(const std::vector<int>& word, int strands);

// Jones polynomial with A = t^{-1/4}, over (t4, c).
tielink::LaurentPoly jones_t_from_state_sum(const std::vector<int>& word, int strands);

}  // namespace oracle
