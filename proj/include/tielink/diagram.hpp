#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include "tielink/braid.hpp"
#include "tielink/poly.hpp"

namespace tielink {

// Crossing geometry convention:
//   each crossing has 4 ports in counterclockwise order, slots 0..3 at
//   compass points S, E, N, W; strands run along the two axes {0,2} and
//   {1,3}; over_axis 0 means the {0,2} strand passes over.
// Port encoding: port = 4*crossing + slot.

enum class Smoothing { E, F };

struct ComponentInfo {
  int id = 0;
  bool split = false;
  std::vector<int> ports;  // empty for split circles; cycle order otherwise
  int8_t dir = 0;          // +1 canonical traversal, -1 reversed, 0 unoriented
};

struct AscendingData {
  std::vector<int> deciding;  // crossing indices in traversal order
  int self_writhe = 0;        // w-bar of the associated ascending diagram
};

class TiedDiagram {
 public:
  /// Closure of a tied braid word. `extra` blocks reference components
  /// 1-based, numbered by the smallest strand passing through them at the
  /// top of the braid.
  static TiedDiagram closure(const TiedBraidWord& w,
                             const std::vector<std::vector<int>>& extra_blocks = {});

  /// PD-style JSON input; see the PD format notes in the README.
  static TiedDiagram from_pd_json(const std::string& json_text);

  int crossing_count() const { return static_cast<int>(over_.size()); }
  int split_circle_count() const { return split_count_; }
  int component_count() const { return comp_count_; }
  int essential_tie_count() const { return comp_count_ - partition_.block_count(); }

  const Partition& partition() const { return partition_; }
  const std::vector<ComponentInfo>& components() const { return comps_; }
  const std::vector<int>& mate() const { return mate_; }
  const std::vector<std::uint8_t>& over_axis() const { return over_; }

  /// Over/under exchanged at one crossing.
  TiedDiagram switch_crossing(int crossing) const;

  /// Crossing removed, ends reconnected in the E or F pattern, the two new
  /// local strands tied together.
  TiedDiagram smooth(int crossing, Smoothing which) const;

  /// Remove all Reidemeister-I kinks; returns the reduced diagram and the
  /// net exponent of the factored-out a^{+-1} per kink.
  std::pair<TiedDiagram, int> reduce_kinks() const;

  /// Deciding points of the canonical traversal plus the self-writhe sum of
  /// the associated ascending diagram.
  AscendingData ascending_data() const;

  /// (c, t, w-bar) for an ascending diagram; throws if deciding points exist.
  std::tuple<int, int, int> unlink_value_inputs() const;

  /// Sum of crossing signs; requires orientations on all components that
  /// pass through crossings.
  int writhe() const;

  bool oriented() const;

  /// Deterministic encoding, invariant under crossing/arc relabeling.
  std::string canonical_key() const;

  /// All partition blocks merged into one (the all-tied diagram).
  TiedDiagram all_tied() const;

  /// All crossings switched.
  TiedDiagram mirrored() const;

  /// Crossings renumbered by `perm` (new index of old crossing i is perm[i]).
  /// Value-preserving relabeling; used by choice-independence tests.
  TiedDiagram permute_crossings(const std::vector<int>& perm) const;

  /// Orientation of every component reversed.
  TiedDiagram reverse_orientations() const;

  bool operator==(const TiedDiagram& o) const;

 private:
  TiedDiagram() = default;
  struct Assembler;
  friend struct Assembler;

  std::vector<std::uint8_t> over_;  // per crossing
  std::vector<int> mate_;           // per port
  int split_count_ = 0;
  int comp_count_ = 0;
  Partition partition_;             // over component ids
  std::vector<int8_t> comp_dir_;    // per component id
  // derived, filled on construction
  std::vector<int> comp_of_port_;
  std::vector<ComponentInfo> comps_;
};

}  // namespace tielink
