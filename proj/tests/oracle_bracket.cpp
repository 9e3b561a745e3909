#include "oracle_bracket.hpp"

#include <numeric>

namespace oracle {

using tielink::LaurentPoly;

namespace {

struct Dsu {
  std::vector<int> parent;
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
  int make() {
    parent.push_back((int)parent.size());
    return (int)parent.size() - 1;
  }
};

}  // namespace

LaurentPoly bracket_state_sum(const std::vector<int>& word, int strands) {
  auto vs = tielink::varsets::bracket();
  LaurentPoly total = LaurentPoly::zero(vs);
  LaurentPoly circ = LaurentPoly::parse("-A^2-A^-2", vs);
  const std::size_t k = word.size();

  for (std::size_t state = 0; state < (std::size_t{1} << k); ++state) {
    Dsu dsu;
    std::vector<int> start(strands), cur(strands);
    for (int j = 0; j < strands; ++j) start[j] = cur[j] = dsu.make();
    int a_pow = 0;
    for (std::size_t idx = 0; idx < k; ++idx) {
      int i = std::abs(word[idx]) - 1;
      bool cupcap = (state >> idx) & 1;
      // A-smoothing of a positive crossing is the identity tangle
      bool positive = word[idx] > 0;
      a_pow += (cupcap == positive) ? -1 : +1;
      if (cupcap) {
        dsu.join(cur[i], cur[i + 1]);
        int fresh = dsu.make();
        cur[i] = cur[i + 1] = fresh;
      }
    }
    for (int j = 0; j < strands; ++j) dsu.join(cur[j], start[j]);
    int loops = 0;
    for (int x = 0; x < (int)dsu.parent.size(); ++x)
      if (dsu.find(x) == x) ++loops;
    total += LaurentPoly::variable(vs, "A", a_pow) * circ.pow(loops - 1);
  }
  return total;
}

LaurentPoly jones_from_state_sum(const std::vector<int>& word, int strands) {
  int w = 0;
  for (int letter : word) w += letter > 0 ? 1 : -1;
  auto vs = tielink::varsets::bracket();
  tielink::ExpVec e(vs->size(), 0);
  e[*vs->index("A")] = -3 * w;
  tielink::Coef c = (w % 2 == 0) ? 1 : -1;
  return LaurentPoly::monomial(vs, std::move(e), c) * bracket_state_sum(word, strands);
}

LaurentPoly jones_t_from_state_sum(const std::vector<int>& word, int strands) {
  auto out = tielink::varsets::jones_t();
  return jones_from_state_sum(word, strands)
      .substitute("A", LaurentPoly::variable(out, "t4", -1), out);
}

}  // namespace oracle
