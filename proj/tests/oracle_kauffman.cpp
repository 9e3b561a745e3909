#include "oracle_kauffman.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace oracle {

using tielink::LaurentPoly;
using tielink::VarSet;

namespace {

struct Passage {
  int crossing;
  bool over;
};

// Gauss-code state: components as cyclic passage sequences plus per-crossing
// signs; crossingless components are only counted.
struct State {
  std::vector<std::vector<Passage>> comps;
  std::map<int, int> sign;  // live crossings only
  int circles = 0;

  std::pair<std::pair<int, int>, std::pair<int, int>> find(int crossing) const {
    std::pair<int, int> a{-1, -1}, b{-1, -1};
    for (int c = 0; c < (int)comps.size(); ++c)
      for (int i = 0; i < (int)comps[c].size(); ++i)
        if (comps[c][i].crossing == crossing) {
          if (a.first < 0)
            a = {c, i};
          else
            b = {c, i};
        }
    return {a, b};
  }
};

auto vs() { return tielink::varsets::az(); }

LaurentPoly delta() { return LaurentPoly::parse("(a+1/a)/z - 1", vs()); }

std::vector<Passage> segment(const std::vector<Passage>& s, int from, int to) {
  // cyclic slice (from..to) exclusive of both endpoints
  std::vector<Passage> out;
  int n = (int)s.size();
  for (int i = (from + 1) % n; i != to; i = (i + 1) % n) out.push_back(s[i]);
  return out;
}

void flip_signs_for_reversal(State& st, const std::vector<Passage>& reversed_part) {
  std::map<int, int> inside;
  for (const auto& p : reversed_part) ++inside[p.crossing];
  for (const auto& [k, cnt] : inside)
    if (cnt == 1) st.sign[k] = -st.sign[k];
}

State switched(State st, int k) {
  for (auto& comp : st.comps)
    for (auto& p : comp)
      if (p.crossing == k) p.over = !p.over;
  st.sign[k] = -st.sign[k];
  return st;
}

State smoothed(const State& st, int k, bool second_variant) {
  auto [pa, pb] = st.find(k);
  State out;
  out.circles = st.circles;
  out.sign = st.sign;
  out.sign.erase(k);

  auto keep = [&](int c) { return c != pa.first && c != pb.first; };
  for (int c = 0; c < (int)st.comps.size(); ++c)
    if (keep(c)) out.comps.push_back(st.comps[c]);

  std::vector<Passage> merged;
  if (pa.first == pb.first) {
    // self-crossing: split into two cycles, or reverse the middle segment
    const auto& s = st.comps[pa.first];
    auto mid = segment(s, pa.second, pb.second);
    auto rest = segment(s, pb.second, pa.second);
    if (!second_variant) {
      if (mid.empty())
        ++out.circles;
      else
        out.comps.push_back(mid);
      if (rest.empty())
        ++out.circles;
      else
        out.comps.push_back(rest);
    } else {
      flip_signs_for_reversal(out, mid);
      std::reverse(mid.begin(), mid.end());
      merged = rest;
      merged.insert(merged.end(), mid.begin(), mid.end());
      if (merged.empty())
        ++out.circles;
      else
        out.comps.push_back(merged);
    }
  } else {
    // crossing between two components: join, optionally reversing the second
    const auto& s1 = st.comps[pa.first];
    const auto& s2 = st.comps[pb.first];
    auto part1 = segment(s1, pa.second, pa.second);  // everything but the passage
    auto part2 = segment(s2, pb.second, pb.second);
    if (second_variant) {
      flip_signs_for_reversal(out, part2);
      std::reverse(part2.begin(), part2.end());
    }
    merged = part1;
    merged.insert(merged.end(), part2.begin(), part2.end());
    if (merged.empty())
      ++out.circles;
    else
      out.comps.push_back(merged);
  }
  return out;
}

LaurentPoly evaluate(const State& st) {
  if (st.sign.empty()) {
    int c = (int)st.comps.size() + st.circles;
    return delta().pow(c - 1);
  }

  // first-met-under crossings along the component list
  std::vector<int> deciding;
  std::map<int, bool> seen;
  for (const auto& comp : st.comps)
    for (const auto& p : comp) {
      if (seen.count(p.crossing)) continue;
      seen[p.crossing] = true;
      if (!p.over) deciding.push_back(p.crossing);
    }

  if (deciding.empty()) {
    // descending unlink: a^{sum of self-crossing signs} delta^{c-1}
    int wbar = 0;
    std::map<int, int> comp_of;
    for (int c = 0; c < (int)st.comps.size(); ++c)
      for (const auto& p : st.comps[c]) {
        auto it = comp_of.find(p.crossing);
        if (it == comp_of.end())
          comp_of[p.crossing] = c;
        else if (it->second == c)
          wbar += st.sign.at(p.crossing);
      }
    int c = (int)st.comps.size() + st.circles;
    return LaurentPoly::variable(vs(), "a", wbar) * delta().pow(c - 1);
  }

  int k = deciding.front();
  auto z = LaurentPoly::variable(vs(), "z");
  return -evaluate(switched(st, k)) +
         z * (evaluate(smoothed(st, k, false)) + evaluate(smoothed(st, k, true)));
}

State closure_state(const std::vector<int>& word, int strands) {
  // wires run top to bottom; the left-to-right mover passes over at sigma_i
  std::vector<std::vector<Passage>> wire(strands);
  std::vector<int> at(strands);  // wire currently at each position
  std::iota(at.begin(), at.end(), 0);
  State st;
  int next = 0;
  for (int letter : word) {
    int i = std::abs(letter) - 1;
    int k = next++;
    bool left_over = letter > 0;
    wire[at[i]].push_back({k, left_over});
    wire[at[i + 1]].push_back({k, !left_over});
    st.sign[k] = letter > 0 ? +1 : -1;
    std::swap(at[i], at[i + 1]);
  }
  // closure: wire starting at position j ends at position p with at[p] == wire j;
  // it continues as the wire that started at p
  std::vector<int> cont(strands);
  for (int p = 0; p < strands; ++p) cont[at[p]] = p;
  std::vector<bool> used(strands, false);
  for (int j = 0; j < strands; ++j) {
    if (used[j]) continue;
    std::vector<Passage> comp;
    int w = j;
    do {
      used[w] = true;
      comp.insert(comp.end(), wire[w].begin(), wire[w].end());
      w = cont[w];
    } while (w != j);
    if (comp.empty())
      ++st.circles;
    else
      st.comps.push_back(std::move(comp));
  }
  return st;
}

}  // namespace

LaurentPoly kauffman_L(const std::vector<int>& word, int strands) {
  return evaluate(closure_state(word, strands));
}

LaurentPoly kauffman_L_hat(const std::vector<int>& word, int strands) {
  int w = 0;
  for (int letter : word) w += letter > 0 ? 1 : -1;
  return LaurentPoly::variable(vs(), "a", -w) * kauffman_L(word, strands);
}

}  // namespace oracle
