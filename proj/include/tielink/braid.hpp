#pragma once

#include <string>
#include <vector>

#include "tielink/poly.hpp"

namespace tielink {

/// Partition of {0..n-1} into blocks, kept normalized: block_of[i] is the
/// smallest member of i's block.
class Partition {
 public:
  Partition() = default;
  explicit Partition(int n) : rep_(n) {
    for (int i = 0; i < n; ++i) rep_[i] = i;
  }

  int size() const { return static_cast<int>(rep_.size()); }
  int rep(int i) const { return rep_[i]; }
  bool same_block(int i, int j) const { return rep_[i] == rep_[j]; }

  void merge(int i, int j);
  int block_count() const;

  /// Blocks as sorted lists of members, ordered by smallest member.
  std::vector<std::vector<int>> blocks() const;

  bool operator==(const Partition& o) const { return rep_ == o.rep_; }

 private:
  std::vector<int> rep_;
};

enum class BraidGen { Sigma, SigmaInv, Eta };

struct BraidLetter {
  BraidGen kind;
  int index;  // 1-based, < strands

  bool operator==(const BraidLetter& o) const = default;
};

/// A word in the tied braid monoid TB_n. The empty word is the identity.
struct TiedBraidWord {
  int strands = 1;
  std::vector<BraidLetter> letters;

  bool operator==(const TiedBraidWord& o) const = default;
};

/// Word grammar: whitespace-separated tokens s3 / -s3 / e2. Strand count
/// explicit, or inferred as 1 + max index when `strands` is 0.
TiedBraidWord parse_braid(const std::string& text, int strands = 0);
std::string to_string(const TiedBraidWord& w);

/// Sum of crossing signs; eta letters contribute 0. Equals the writhe of the
/// closure.
int exponent(const TiedBraidWord& w);

/// Prepends eta_1 ... eta_{n-1}, tying all closure components together.
TiedBraidWord all_tied(TiedBraidWord w);

/// v . w . v^-1, with eta self-inverse.
TiedBraidWord conjugate(const TiedBraidWord& w, const TiedBraidWord& v);

/// w extended by one strand and one letter sigma_n^{sign}.
TiedBraidWord stabilize(TiedBraidWord w, int sign);

TiedBraidWord inverse(const TiedBraidWord& w);

/// All sigma signs flipped (mirror image of the closure).
TiedBraidWord mirror(TiedBraidWord w);

/// Permutation cycle count of the underlying permutation (= closure
/// component count).
int closure_component_count(const TiedBraidWord& w);

}  // namespace tielink
