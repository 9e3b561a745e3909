#include "tielink/braid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tielink {

void Partition::merge(int i, int j) {
  int a = rep_[i], b = rep_[j];
  if (a == b) return;
  if (a > b) std::swap(a, b);
  for (auto& r : rep_)
    if (r == b) r = a;
}

int Partition::block_count() const {
  int n = 0;
  for (int i = 0; i < size(); ++i)
    if (rep_[i] == i) ++n;
  return n;
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < size(); ++i) {
    if (rep_[i] != i) continue;
    std::vector<int> blk;
    for (int j = i; j < size(); ++j)
      if (rep_[j] == i) blk.push_back(j);
    out.push_back(std::move(blk));
  }
  return out;
}

TiedBraidWord parse_braid(const std::string& text, int strands) {
  TiedBraidWord w;
  std::istringstream is(text);
  std::string tok;
  int max_index = 0;
  while (is >> tok) {
    bool inv = false;
    std::size_t p = 0;
    if (tok[p] == '-') {
      inv = true;
      ++p;
    }
    if (p >= tok.size() || (tok[p] != 's' && tok[p] != 'e'))
      throw parse_error("braid parse error: bad token '" + tok + "'");
    char kind = tok[p++];
    if (inv && kind == 'e')
      throw parse_error("braid parse error: eta letters have no inverse token, write e" +
                        tok.substr(p));
    if (p >= tok.size() || !std::all_of(tok.begin() + p, tok.end(),
                                        [](char c) { return c >= '0' && c <= '9'; }))
      throw parse_error("braid parse error: bad index in token '" + tok + "'");
    int idx = std::stoi(tok.substr(p));
    if (idx < 1) throw parse_error("braid parse error: index must be >= 1 in '" + tok + "'");
    max_index = std::max(max_index, idx);
    BraidGen g = kind == 'e' ? BraidGen::Eta : (inv ? BraidGen::SigmaInv : BraidGen::Sigma);
    w.letters.push_back({g, idx});
  }
  w.strands = strands > 0 ? strands : max_index + 1;
  if (max_index >= w.strands)
    throw parse_error("braid parse error: generator index " + std::to_string(max_index) +
                      " needs at least " + std::to_string(max_index + 1) + " strands");
  return w;
}

std::string to_string(const TiedBraidWord& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& l : w.letters) {
    if (!first) os << " ";
    first = false;
    switch (l.kind) {
      case BraidGen::Sigma: os << "s"; break;
      case BraidGen::SigmaInv: os << "-s"; break;
      case BraidGen::Eta: os << "e"; break;
    }
    os << l.index;
  }
  return os.str();
}

int exponent(const TiedBraidWord& w) {
  int e = 0;
  for (const auto& l : w.letters) {
    if (l.kind == BraidGen::Sigma) ++e;
    if (l.kind == BraidGen::SigmaInv) --e;
  }
  return e;
}

TiedBraidWord all_tied(TiedBraidWord w) {
  std::vector<BraidLetter> pre;
  for (int i = 1; i < w.strands; ++i) pre.push_back({BraidGen::Eta, i});
  pre.insert(pre.end(), w.letters.begin(), w.letters.end());
  w.letters = std::move(pre);
  return w;
}

TiedBraidWord inverse(const TiedBraidWord& w) {
  TiedBraidWord r;
  r.strands = w.strands;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    BraidLetter l = *it;
    if (l.kind == BraidGen::Sigma)
      l.kind = BraidGen::SigmaInv;
    else if (l.kind == BraidGen::SigmaInv)
      l.kind = BraidGen::Sigma;
    r.letters.push_back(l);
  }
  return r;
}

TiedBraidWord conjugate(const TiedBraidWord& w, const TiedBraidWord& v) {
  if (w.strands != v.strands) throw structure_error("conjugate: strand count mismatch");
  TiedBraidWord r = v;
  r.letters.insert(r.letters.end(), w.letters.begin(), w.letters.end());
  auto vi = inverse(v);
  r.letters.insert(r.letters.end(), vi.letters.begin(), vi.letters.end());
  return r;
}

TiedBraidWord stabilize(TiedBraidWord w, int sign) {
  w.letters.push_back({sign >= 0 ? BraidGen::Sigma : BraidGen::SigmaInv, w.strands});
  w.strands += 1;
  return w;
}

TiedBraidWord mirror(TiedBraidWord w) {
  for (auto& l : w.letters) {
    if (l.kind == BraidGen::Sigma)
      l.kind = BraidGen::SigmaInv;
    else if (l.kind == BraidGen::SigmaInv)
      l.kind = BraidGen::Sigma;
  }
  return w;
}

int closure_component_count(const TiedBraidWord& w) {
  std::vector<int> perm(w.strands);
  std::iota(perm.begin(), perm.end(), 0);
  for (const auto& l : w.letters)
    if (l.kind != BraidGen::Eta) std::swap(perm[l.index - 1], perm[l.index]);
  std::vector<bool> seen(w.strands, false);
  int cycles = 0;
  for (int i = 0; i < w.strands; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (int j = i; !seen[j]; j = perm[j]) seen[j] = true;
  }
  return cycles;
}

}  // namespace tielink
