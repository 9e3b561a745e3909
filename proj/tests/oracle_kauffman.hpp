#pragma once

#include <vector>

#include "tielink/poly.hpp"

namespace oracle {

// Classical (no ties) Kauffman polynomial L(a, z) of the closure of a braid
// word, computed by a self-contained Gauss-code skein recursion. Letters are
// +i / -i for sigma_i^{+1} / sigma_i^{-1}. Test oracle only; shares nothing
// with the diagram engine.
tielink::LaurentPoly kauffman_L(const std::vector<int>& word, int strands);

// a^{-writhe} L, the oriented normalization.
tielink::LaurentPoly kauffman_L_hat(const std::vector<int>& word, int strands);

}  // namespace oracle
