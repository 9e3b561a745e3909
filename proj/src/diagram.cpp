#include "tielink/diagram.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tielink {

namespace {

inline int opposite(int port) { return port ^ 2; }
inline int slot_of(int port) { return port & 3; }
inline int crossing_of(int port) { return port >> 2; }

// compass unit vectors per slot: S, E, N, W
inline std::pair<int, int> slot_unit(int slot) {
  static constexpr int vx[4] = {0, 1, 0, -1};
  static constexpr int vy[4] = {-1, 0, 1, 0};
  return {vx[slot], vy[slot]};
}

inline std::pair<int, int> rot90ccw(std::pair<int, int> v) { return {-v.second, v.first}; }

// crossing sign from the two entering slots; over_pass_first says whether the
// strand entering at s_over passes over
int crossing_sign(int enter_over_slot, int enter_under_slot) {
  auto uo = slot_unit(enter_over_slot);
  auto uu = slot_unit(enter_under_slot);
  std::pair<int, int> dir_over{-uo.first, -uo.second};
  std::pair<int, int> dir_under{-uu.first, -uu.second};
  return rot90ccw(dir_under) == dir_over ? +1 : -1;
}

struct Traced {
  std::vector<int> comp_of_port;
  std::vector<std::vector<int>> cycles;  // ordered by smallest port
};

Traced trace_ports(const std::vector<int>& mate) {
  Traced t;
  t.comp_of_port.assign(mate.size(), -1);
  for (int p0 = 0; p0 < static_cast<int>(mate.size()); ++p0) {
    if (t.comp_of_port[p0] != -1) continue;
    int id = static_cast<int>(t.cycles.size());
    std::vector<int> cyc;
    int p = p0;
    do {
      if (t.comp_of_port[p] != -1) throw structure_error("arc structure is not a disjoint union of cycles");
      cyc.push_back(p);
      t.comp_of_port[p] = id;
      int q = mate[p];
      if (q < 0 || q >= static_cast<int>(mate.size()) || mate[q] != p)
        throw structure_error("mate table is not a perfect matching");
      if (t.comp_of_port[q] != -1) throw structure_error("arc structure is not a disjoint union of cycles");
      cyc.push_back(q);
      t.comp_of_port[q] = id;
      p = opposite(q);
    } while (p != p0);
    t.cycles.push_back(std::move(cyc));
  }
  return t;
}

}  // namespace

struct TiedDiagram::Assembler {
  // partition and dirs are over canonical component ids:
  // traced components ordered by smallest port, then split circles.
  static TiedDiagram build(std::vector<std::uint8_t> over, std::vector<int> mate,
                           int split_count, Partition partition,
                           std::vector<int8_t> dirs) {
    TiedDiagram d;
    d.over_ = std::move(over);
    d.mate_ = std::move(mate);
    d.split_count_ = split_count;
    if (d.mate_.size() != d.over_.size() * 4) throw structure_error("port table size mismatch");
    Traced t = trace_ports(d.mate_);
    d.comp_of_port_ = std::move(t.comp_of_port);
    int traced = static_cast<int>(t.cycles.size());
    d.comp_count_ = traced + split_count;
    if (d.comp_count_ == 0) throw structure_error("empty diagram is rejected");
    if (partition.size() == 0) partition = Partition(d.comp_count_);
    if (partition.size() != d.comp_count_) throw structure_error("partition size mismatch");
    d.partition_ = std::move(partition);
    if (dirs.empty()) dirs.assign(d.comp_count_, 0);
    if (static_cast<int>(dirs.size()) != d.comp_count_) throw structure_error("orientation size mismatch");
    d.comp_dir_ = std::move(dirs);
    d.comps_.clear();
    for (int i = 0; i < traced; ++i)
      d.comps_.push_back({i, false, std::move(t.cycles[i]), d.comp_dir_[i]});
    for (int i = 0; i < split_count; ++i)
      d.comps_.push_back({traced + i, true, {}, 0});
    return d;
  }

  static std::vector<std::uint8_t> in_canon(const TiedDiagram& d) {
    std::vector<std::uint8_t> in(d.mate_.size(), 0);
    for (const auto& comp : d.comps_)
      for (std::size_t i = 1; i < comp.ports.size(); i += 2) in[comp.ports[i]] = 1;
    return in;
  }
};

// ---------------------------------------------------------------- closure

TiedDiagram TiedDiagram::closure(const TiedBraidWord& w,
                                 const std::vector<std::vector<int>>& extra_blocks) {
  const int n = w.strands;
  constexpr int NONE = -1;
  std::vector<int> cur(n + 1, NONE), top(n + 1, NONE);
  std::vector<std::uint8_t> over;
  std::vector<int> mate;

  struct TieToken {
    bool anchor;  // true: untouched-so-far strand at `pos`; false: port `port`
    int pos = 0;
    int port = 0;
  };
  std::vector<std::pair<TieToken, TieToken>> ties;

  auto token_at = [&](int pos) -> TieToken {
    if (cur[pos] == NONE) return {true, pos, 0};
    return {false, 0, cur[pos]};
  };
  auto connect = [&](int pos, int port) {
    if (cur[pos] == NONE) {
      top[pos] = port;
    } else {
      mate[cur[pos]] = port;
      mate[port] = cur[pos];
    }
  };

  for (const auto& l : w.letters) {
    if (l.index < 1 || l.index >= n) throw structure_error("generator index out of range");
    if (l.kind == BraidGen::Eta) {
      ties.emplace_back(token_at(l.index), token_at(l.index + 1));
      continue;
    }
    int c = static_cast<int>(over.size());
    over.push_back(l.kind == BraidGen::Sigma ? 0 : 1);
    mate.resize(mate.size() + 4, NONE);
    int base = 4 * c;
    // upper-left strand enters N(2) and exits S(0) toward position i+1;
    // upper-right enters E(1) and exits W(3) toward position i
    connect(l.index, base + 2);
    connect(l.index + 1, base + 1);
    cur[l.index] = base + 3;
    cur[l.index + 1] = base + 0;
  }

  int splits = 0;
  std::vector<int> split_id_of_pos(n + 1, -1);
  for (int j = 1; j <= n; ++j) {
    if (cur[j] == NONE)
      split_id_of_pos[j] = splits++;  // offset by traced count later
    else {
      mate[cur[j]] = top[j];
      mate[top[j]] = cur[j];
    }
  }

  Traced t = trace_ports(mate);
  int traced = static_cast<int>(t.cycles.size());
  int comp_count = traced + splits;

  auto comp_for_strand = [&](int pos) {
    return cur[pos] == NONE ? traced + split_id_of_pos[pos] : t.comp_of_port[top[pos]];
  };
  auto resolve = [&](const TieToken& tok) {
    return tok.anchor ? comp_for_strand(tok.pos) : t.comp_of_port[tok.port];
  };

  Partition part(comp_count);
  for (const auto& [a, b] : ties) part.merge(resolve(a), resolve(b));

  if (!extra_blocks.empty()) {
    // user numbering: components ordered by smallest top strand
    std::vector<int> min_strand(comp_count, n + 1);
    for (int j = n; j >= 1; --j) min_strand[comp_for_strand(j)] = j;
    std::vector<int> order(comp_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return min_strand[a] < min_strand[b]; });
    for (const auto& blk : extra_blocks) {
      for (std::size_t i = 1; i < blk.size(); ++i) {
        if (blk[i] < 1 || blk[i] > comp_count || blk[0] < 1 || blk[0] > comp_count)
          throw structure_error("partition block references a nonexistent component");
        part.merge(order[blk[0] - 1], order[blk[i] - 1]);
      }
    }
  }

  // braid flow: slots 1 and 2 are strand-incoming
  std::vector<int8_t> dirs(comp_count, 0);
  for (int id = 0; id < traced; ++id) {
    int p = t.cycles[id][0];  // leaves via arc in canonical traversal
    bool flow_in = slot_of(p) == 1 || slot_of(p) == 2;
    dirs[id] = flow_in ? -1 : +1;
  }

  return Assembler::build(std::move(over), std::move(mate), splits, std::move(part),
                          std::move(dirs));
}

// ---------------------------------------------------------------- PD input

TiedDiagram TiedDiagram::from_pd_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw parse_error(std::string("PD JSON parse error: ") + e.what());
  }
  if (!j.contains("crossings") || !j["crossings"].is_array())
    throw parse_error("PD JSON: missing 'crossings' array");

  std::vector<std::array<long, 4>> tuples;
  for (const auto& row : j["crossings"]) {
    if (!row.is_array() || row.size() != 4) throw parse_error("PD JSON: crossing must have 4 arcs");
    tuples.push_back({row[0].get<long>(), row[1].get<long>(), row[2].get<long>(), row[3].get<long>()});
  }
  int splits = j.value("split_circles", 0);
  if (splits < 0) throw parse_error("PD JSON: split_circles must be >= 0");

  // arcs: each id appears exactly twice; tuple slot k -> port slot k, under
  // axis {0,2}, over axis {1,3}
  std::map<long, std::vector<int>> arc_ports;
  for (std::size_t c = 0; c < tuples.size(); ++c)
    for (int s = 0; s < 4; ++s) arc_ports[tuples[c][s]].push_back(static_cast<int>(4 * c + s));

  std::vector<int> mate(4 * tuples.size(), -1);
  for (const auto& [arc, ports] : arc_ports) {
    if (ports.size() != 2)
      throw parse_error("PD JSON: arc " + std::to_string(arc) + " appears " +
                        std::to_string(ports.size()) + " times, expected 2");
    mate[ports[0]] = ports[1];
    mate[ports[1]] = ports[0];
  }
  std::vector<std::uint8_t> over(tuples.size(), 1);

  Traced t = trace_ports(mate);
  int traced = static_cast<int>(t.cycles.size());
  int comp_count = traced + splits;

  // user component order: traced by smallest arc id, then split circles
  std::vector<long> min_arc(traced, std::numeric_limits<long>::max());
  for (std::size_t c = 0; c < tuples.size(); ++c)
    for (int s = 0; s < 4; ++s) {
      int comp = t.comp_of_port[static_cast<int>(4 * c + s)];
      min_arc[comp] = std::min(min_arc[comp], tuples[c][s]);
    }
  std::vector<int> order(comp_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.begin() + traced,
            [&](int a, int b) { return min_arc[a] < min_arc[b]; });

  Partition part(comp_count);
  if (j.contains("partition")) {
    for (const auto& blk : j["partition"]) {
      std::vector<int> ids = blk.get<std::vector<int>>();
      for (std::size_t i = 1; i < ids.size(); ++i) {
        if (ids[0] < 1 || ids[0] > comp_count || ids[i] < 1 || ids[i] > comp_count)
          throw parse_error("PD JSON: partition references a nonexistent component");
        part.merge(order[ids[0] - 1], order[ids[i] - 1]);
      }
    }
  }

  // orientation: under strand runs slot0 -> slot2 at every crossing
  std::vector<int8_t> dirs(comp_count, 0);
  bool oriented = j.value("oriented", true);
  if (oriented && !tuples.empty()) {
    auto in_canon = [&](int port) {
      const auto& cyc = t.cycles[t.comp_of_port[port]];
      for (std::size_t i = 0; i < cyc.size(); ++i)
        if (cyc[i] == port) return i % 2 == 1;
      throw structure_error("port missing from its component cycle");
    };
    for (std::size_t c = 0; c < tuples.size(); ++c) {
      int p_in = static_cast<int>(4 * c);  // incoming under
      int comp = t.comp_of_port[p_in];
      int8_t d = in_canon(p_in) ? +1 : -1;
      if (dirs[comp] == 0)
        dirs[comp] = d;
      else if (dirs[comp] != d)
        throw parse_error("PD JSON: inconsistent under-strand orientations");
    }
  }

  return Assembler::build(std::move(over), std::move(mate), splits, std::move(part),
                          std::move(dirs));
}

// ---------------------------------------------------------------- surgeries

TiedDiagram TiedDiagram::switch_crossing(int crossing) const {
  if (crossing < 0 || crossing >= crossing_count()) throw structure_error("invalid crossing site");
  TiedDiagram d = *this;
  d.over_[crossing] ^= 1;
  return d;
}

TiedDiagram TiedDiagram::smooth(int crossing, Smoothing which) const {
  if (crossing < 0 || crossing >= crossing_count()) throw structure_error("invalid crossing site");
  const int base = 4 * crossing;

  std::vector<int> m = mate_;
  std::vector<int> circle_prov;

  // marker: (is_new_circle, circle index or surviving witness port)
  auto splice = [&](int p, int q) -> std::pair<bool, int> {
    int a = m[p], b = m[q];
    std::pair<bool, int> marker;
    if (a == q) {
      marker = {true, static_cast<int>(circle_prov.size())};
      circle_prov.push_back(comp_of_port_[p]);
    } else {
      m[a] = b;
      m[b] = a;
      marker = {false, a};
    }
    m[p] = m[q] = -2;
    return marker;
  };

  int p2a = base + (which == Smoothing::E ? 2 : 1);
  int p2b = base + (which == Smoothing::E ? 3 : 2);
  auto mk1 = splice(base + 0, base + (which == Smoothing::E ? 1 : 3));
  auto mk2 = splice(p2a, p2b);
  // the first strand's witness may have been consumed by the second splice
  if (!mk1.first && (mk1.second == p2a || mk1.second == p2b)) mk1 = mk2;
  std::vector<std::pair<bool, int>> markers{mk1, mk2};

  // renumber: drop crossing `crossing`
  auto new_port = [&](int p) {
    int c = crossing_of(p);
    return c > crossing ? p - 4 : p;
  };
  std::vector<int> nmate(mate_.size() - 4, -1);
  for (int p = 0; p < static_cast<int>(mate_.size()); ++p) {
    if (crossing_of(p) == crossing || m[p] == -2) continue;
    nmate[new_port(p)] = new_port(m[p]);
  }
  std::vector<std::uint8_t> nover = over_;
  nover.erase(nover.begin() + crossing);

  Traced t = trace_ports(nmate);
  int ntraced = static_cast<int>(t.cycles.size());
  int old_traced = comp_count_ - split_count_;
  int nsplits = split_count_ + static_cast<int>(circle_prov.size());
  int ncomps = ntraced + nsplits;

  // representative old component for each new component
  std::vector<int> rep_old(ncomps, -1);
  Partition dsu = partition_;
  for (int k = 0; k < ntraced; ++k) {
    int prev = -1;
    for (int p_new : t.cycles[k]) {
      // invert renumbering
      int p_old = crossing_of(p_new) >= crossing ? p_new + 4 : p_new;
      // careful: ports of crossings > crossing were shifted by 4
      int oc = comp_of_port_[p_old];
      if (prev == -1)
        rep_old[k] = oc;
      else if (oc != prev)
        dsu.merge(oc, prev);
      prev = oc;
    }
  }
  for (int s = 0; s < split_count_; ++s) rep_old[ntraced + s] = old_traced + s;
  for (std::size_t i = 0; i < circle_prov.size(); ++i)
    rep_old[ntraced + split_count_ + static_cast<int>(i)] = circle_prov[i];

  // the smoothing tie joins the two new local strands
  auto marker_comp = [&](const std::pair<bool, int>& mk) {
    if (mk.first) return ntraced + split_count_ + mk.second;
    return t.comp_of_port[new_port(mk.second)];
  };
  dsu.merge(rep_old[marker_comp(markers[0])], rep_old[marker_comp(markers[1])]);

  Partition npart(ncomps);
  for (int i = 0; i < ncomps; ++i)
    for (int jj = i + 1; jj < ncomps; ++jj)
      if (dsu.same_block(rep_old[i], rep_old[jj])) npart.merge(i, jj);

  return Assembler::build(std::move(nover), std::move(nmate), nsplits, std::move(npart), {});
}

std::pair<TiedDiagram, int> TiedDiagram::reduce_kinks() const {
  TiedDiagram d = *this;
  int a_exp = 0;
  for (;;) {
    int kink_crossing = -1, loop_slot = -1;
    for (int c = 0; c < d.crossing_count() && kink_crossing < 0; ++c)
      for (int s = 0; s < 4; ++s)
        if (d.mate_[4 * c + s] == 4 * c + ((s + 1) & 3)) {
          kink_crossing = c;
          loop_slot = s;
          break;
        }
    if (kink_crossing < 0) return {std::move(d), a_exp};

    const int c = kink_crossing, base = 4 * c;
    // sign of a Reidemeister-I loop at slots (loop_slot, loop_slot+1):
    // the through strand enters at loop_slot+2, exits into the loop arc,
    // and re-enters at loop_slot+1
    int t1 = (loop_slot + 2) & 3, t2 = (loop_slot + 3) & 3;
    int s1 = t1, s2 = (loop_slot + 1) & 3;
    bool pass1_over = (d.over_[c] == 0) == ((s1 & 1) == 0);
    a_exp += pass1_over ? crossing_sign(s1, s2) : crossing_sign(s2, s1);

    // remove the crossing: splice the through ports
    std::vector<int> m = d.mate_;
    bool circle = false;
    int circle_prov = -1;
    {
      int p = base + t1, q = base + t2;
      int a = m[p], b = m[q];
      if (a == q) {
        circle = true;
        circle_prov = d.comp_of_port_[p];
      } else {
        m[a] = b;
        m[b] = a;
      }
      m[p] = m[q] = -2;
    }
    auto new_port = [&](int p) { return crossing_of(p) > c ? p - 4 : p; };
    std::vector<int> nmate(d.mate_.size() - 4, -1);
    for (int p = 0; p < static_cast<int>(d.mate_.size()); ++p) {
      if (crossing_of(p) == c || m[p] == -2) continue;
      nmate[new_port(p)] = new_port(m[p]);
    }
    std::vector<std::uint8_t> nover = d.over_;
    nover.erase(nover.begin() + c);

    Traced t = trace_ports(nmate);
    int ntraced = static_cast<int>(t.cycles.size());
    int old_traced = d.comp_count_ - d.split_count_;
    int nsplits = d.split_count_ + (circle ? 1 : 0);
    int ncomps = ntraced + nsplits;

    std::vector<int> rep_old(ncomps, -1);
    std::vector<int8_t> ndirs(ncomps, 0);
    auto in_canon_old = Assembler::in_canon(d);
    for (int k = 0; k < ntraced; ++k) {
      int p_new = t.cycles[k][0];
      int p_old = crossing_of(p_new) >= c ? p_new + 4 : p_new;
      rep_old[k] = d.comp_of_port_[p_old];
      int8_t odir = d.comp_dir_[rep_old[k]];
      if (odir != 0) {
        // physical flow at the surviving port is unchanged
        bool phys_in = (in_canon_old[p_old] != 0) == (odir > 0);
        bool new_in = false;  // p_new = cycles[k][0] leaves via arc in canonical order
        ndirs[k] = (phys_in == new_in) ? +1 : -1;
      }
    }
    for (int s = 0; s < d.split_count_; ++s) rep_old[ntraced + s] = old_traced + s;
    if (circle) rep_old[ncomps - 1] = circle_prov;

    Partition npart(ncomps);
    for (int i = 0; i < ncomps; ++i)
      for (int jj = i + 1; jj < ncomps; ++jj)
        if (d.partition_.same_block(rep_old[i], rep_old[jj])) npart.merge(i, jj);

    d = Assembler::build(std::move(nover), std::move(nmate), nsplits, std::move(npart),
                         std::move(ndirs));
  }
}

// ------------------------------------------------------------- traversal

AscendingData TiedDiagram::ascending_data() const {
  AscendingData out;
  std::vector<int> first_slot(crossing_count(), -1);
  std::vector<int> first_comp(crossing_count(), -1);
  std::vector<std::uint8_t> is_deciding(crossing_count(), 0);

  for (const auto& comp : comps_) {
    if (comp.split) continue;
    const auto& cyc = comp.ports;
    std::vector<int> entries;
    int dir = comp_dir_[comp.id] == 0 ? +1 : comp_dir_[comp.id];
    if (dir > 0) {
      for (std::size_t i = 1; i < cyc.size(); i += 2) entries.push_back(cyc[i]);
    } else {
      entries.push_back(cyc[0]);
      for (std::size_t i = cyc.size() - 2; i >= 2; i -= 2) entries.push_back(cyc[i]);
    }
    for (int q : entries) {
      int c = crossing_of(q), s = slot_of(q);
      if (first_slot[c] < 0) {
        bool over_entering = ((s & 1) == 0) == (over_[c] == 0);
        if (!over_entering) {
          is_deciding[c] = 1;
          out.deciding.push_back(c);
        }
        first_slot[c] = s;
        first_comp[c] = comp.id;
      } else if (first_comp[c] == comp.id) {
        // self-crossing: sign within the ascending diagram
        int eff_over = over_[c] ^ is_deciding[c];
        int s1 = first_slot[c], s2 = s;
        bool pass1_axis_a = (s1 & 1) == 0;
        bool over_is_pass1 = (eff_over == 0) == pass1_axis_a;
        int sign = over_is_pass1 ? crossing_sign(s1, s2) : crossing_sign(s2, s1);
        out.self_writhe += sign;
      }
    }
  }
  return out;
}

std::tuple<int, int, int> TiedDiagram::unlink_value_inputs() const {
  AscendingData a = ascending_data();
  if (!a.deciding.empty())
    throw structure_error("unlink_value_inputs called on a non-ascending diagram");
  return {component_count(), essential_tie_count(), a.self_writhe};
}

bool TiedDiagram::oriented() const {
  for (const auto& comp : comps_)
    if (!comp.split && comp_dir_[comp.id] == 0) return false;
  return true;
}

int TiedDiagram::writhe() const {
  auto in_canon = Assembler::in_canon(*this);
  int w = 0;
  for (int c = 0; c < crossing_count(); ++c) {
    int enter[2] = {-1, -1};  // per axis: entering port slot
    for (int s = 0; s < 4; ++s) {
      int p = 4 * c + s;
      int8_t dir = comp_dir_[comp_of_port_[p]];
      if (dir == 0) throw structure_error("writhe requires orientations on all strands");
      bool real_in = (in_canon[p] != 0) == (dir > 0);
      if (real_in) enter[s & 1] = s;
    }
    if (enter[0] < 0 || enter[1] < 0) throw structure_error("incoherent orientation data");
    int over_slot = over_[c] == 0 ? enter[0] : enter[1];
    int under_slot = over_[c] == 0 ? enter[1] : enter[0];
    w += crossing_sign(over_slot, under_slot);
  }
  return w;
}

// ------------------------------------------------------------ relabelings

TiedDiagram TiedDiagram::all_tied() const {
  Partition p(comp_count_);
  for (int i = 1; i < comp_count_; ++i) p.merge(0, i);
  return Assembler::build(over_, mate_, split_count_, std::move(p), comp_dir_);
}

TiedDiagram TiedDiagram::mirrored() const {
  auto over = over_;
  for (auto& o : over) o ^= 1;
  return Assembler::build(std::move(over), mate_, split_count_, partition_, comp_dir_);
}

TiedDiagram TiedDiagram::reverse_orientations() const {
  auto dirs = comp_dir_;
  for (auto& d : dirs) d = -d;
  return Assembler::build(over_, mate_, split_count_, partition_, std::move(dirs));
}

TiedDiagram TiedDiagram::permute_crossings(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != crossing_count())
    throw structure_error("permutation size mismatch");
  auto new_port = [&](int p) { return 4 * perm[crossing_of(p)] + slot_of(p); };
  std::vector<std::uint8_t> nover(over_.size());
  std::vector<int> nmate(mate_.size());
  for (int c = 0; c < crossing_count(); ++c) nover[perm[c]] = over_[c];
  for (int p = 0; p < static_cast<int>(mate_.size()); ++p) nmate[new_port(p)] = new_port(mate_[p]);

  Traced t = trace_ports(nmate);
  int ntraced = static_cast<int>(t.cycles.size());
  int old_traced = comp_count_ - split_count_;
  int ncomps = ntraced + split_count_;
  auto in_canon_old = Assembler::in_canon(*this);

  std::vector<int> rep_old(ncomps);
  std::vector<int8_t> ndirs(ncomps, 0);
  auto old_port = [&](int p_new) {
    int c_new = crossing_of(p_new);
    int c_old = static_cast<int>(std::find(perm.begin(), perm.end(), c_new) - perm.begin());
    return 4 * c_old + slot_of(p_new);
  };
  for (int k = 0; k < ntraced; ++k) {
    int p_new = t.cycles[k][0];
    int p_old = old_port(p_new);
    rep_old[k] = comp_of_port_[p_old];
    int8_t odir = comp_dir_[rep_old[k]];
    if (odir != 0) {
      bool phys_in = (in_canon_old[p_old] != 0) == (odir > 0);
      ndirs[k] = (phys_in == false) ? +1 : -1;
    }
  }
  for (int s = 0; s < split_count_; ++s) rep_old[ntraced + s] = old_traced + s;

  Partition npart(ncomps);
  for (int i = 0; i < ncomps; ++i)
    for (int jj = i + 1; jj < ncomps; ++jj)
      if (partition_.same_block(rep_old[i], rep_old[jj])) npart.merge(i, jj);

  return Assembler::build(std::move(nover), std::move(nmate), split_count_, std::move(npart),
                          std::move(ndirs));
}

bool TiedDiagram::operator==(const TiedDiagram& o) const {
  return over_ == o.over_ && mate_ == o.mate_ && split_count_ == o.split_count_ &&
         partition_ == o.partition_ && comp_dir_ == o.comp_dir_;
}

// ---------------------------------------------------------- canonical key

namespace {

struct PieceEncoder {
  const TiedDiagram& d;
  const std::vector<int>& piece;  // crossing ids in this piece

  std::vector<int> best_tokens;
  std::vector<int> best_comps;

  explicit PieceEncoder(const TiedDiagram& dd, const std::vector<int>& pc) : d(dd), piece(pc) {}

  struct State {
    std::vector<int> num;            // crossing -> assigned number, -1 unset
    std::vector<int> first_slot;     // crossing -> slot of first entry
    std::vector<std::uint8_t> axis_seen;  // crossing -> bitmask of visited axes
    int next_num = 0;
    std::vector<int> tokens;
    std::vector<int> comps;
  };

  void run() {
    for (int c : piece)
      for (int s = 0; s < 4; ++s) try_start(4 * c + s);
  }

  void try_start(int start) {
    State st;
    st.num.assign(d.crossing_count(), -1);
    st.first_slot.assign(d.crossing_count(), -1);
    st.axis_seen.assign(d.crossing_count(), 0);
    walk_component(st, start);
    continue_or_finish(st);
  }

  void walk_component(State& st, int enter0) {
    st.comps.push_back(component_of(enter0));
    int q = enter0;
    do {
      int c = q >> 2, s = q & 3;
      bool over_entering = ((s & 1) == 0) == (d.over_axis()[c] == 0);
      if (st.num[c] < 0) {
        st.num[c] = st.next_num++;
        st.first_slot[c] = s;
        st.tokens.push_back(0);
        st.tokens.push_back(over_entering ? 1 : 0);
      } else {
        int handed = ((s - st.first_slot[c]) & 3) == 1 ? 1 : 0;
        st.tokens.push_back(1);
        st.tokens.push_back(st.num[c]);
        st.tokens.push_back(over_entering ? 1 : 0);
        st.tokens.push_back(handed);
      }
      st.axis_seen[c] |= (s & 1) ? 2 : 1;
      q = d.mate()[q ^ 2];
    } while (q != enter0);
    st.tokens.push_back(2);
  }

  int component_of(int port) const {
    // internal component id; the diagram caches it
    return comp_lookup_[port];
  }
  std::vector<int> comp_lookup_;

  void continue_or_finish(State& st) {
    // next start: lowest-numbered crossing with an unvisited axis
    int best_c = -1;
    for (int c : piece) {
      if (st.num[c] < 0 || st.axis_seen[c] == 3) continue;
      if (best_c < 0 || st.num[c] < st.num[best_c]) best_c = c;
    }
    if (best_c < 0) {
      // done: all crossings of the piece must be numbered
      for (int c : piece)
        if (st.num[c] < 0) throw structure_error("disconnected piece traversal");
      offer(st);
      return;
    }
    int axis = (st.axis_seen[best_c] & 1) ? 1 : 0;
    for (int k = 0; k < 2; ++k) {
      State branch = st;
      walk_component(branch, 4 * best_c + axis + 2 * k);
      continue_or_finish(branch);
    }
  }

  void offer(const State& st) {
    if (best_tokens.empty() || st.tokens < best_tokens) {
      best_tokens = st.tokens;
      best_comps = st.comps;
    }
  }
};

}  // namespace

std::string TiedDiagram::canonical_key() const {
  // pieces: connected groups of crossings
  int C = crossing_count();
  std::vector<int> piece_of(C, -1);
  std::vector<std::vector<int>> pieces;
  for (int c0 = 0; c0 < C; ++c0) {
    if (piece_of[c0] != -1) continue;
    std::vector<int> stack{c0}, members;
    piece_of[c0] = static_cast<int>(pieces.size());
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      members.push_back(c);
      for (int s = 0; s < 4; ++s) {
        int c2 = crossing_of(mate_[4 * c + s]);
        if (piece_of[c2] == -1) {
          piece_of[c2] = piece_of[c0];
          stack.push_back(c2);
        }
      }
    }
    std::sort(members.begin(), members.end());
    pieces.push_back(std::move(members));
  }

  struct Encoded {
    std::vector<int> tokens;
    std::vector<int> comps;
  };
  std::vector<Encoded> enc;
  for (const auto& pc : pieces) {
    PieceEncoder pe(*this, pc);
    pe.comp_lookup_ = comp_of_port_;
    pe.run();
    enc.push_back({std::move(pe.best_tokens), std::move(pe.best_comps)});
  }

  std::vector<int> order(enc.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return enc[a].tokens < enc[b].tokens; });

  // groups of equal piece encodings: permute within groups to canonicalize
  // the partition encoding
  std::vector<std::pair<int, int>> groups;  // [begin, end)
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && enc[order[i]].tokens == enc[order[j]].tokens) ++j;
    groups.emplace_back(static_cast<int>(i), static_cast<int>(j));
    i = j;
  }

  auto partition_bytes = [&](const std::vector<int>& piece_order) {
    std::vector<int> comp_seq;  // internal ids of non-split comps, canonical order
    for (int pi : piece_order)
      for (int cid : enc[pi].comps) comp_seq.push_back(cid);
    std::vector<int> bytes;
    int g = 0;
    std::map<int, int> block_leader;  // internal block rep -> global index
    for (int cid : comp_seq) {
      int rep = partition_.rep(cid);
      auto it = block_leader.find(rep);
      if (it == block_leader.end()) {
        block_leader[rep] = g;
        bytes.push_back(g);
      } else {
        bytes.push_back(it->second);
      }
      ++g;
    }
    // split circles per block led by a traced component
    int traced = comp_count_ - split_count_;
    std::vector<int> leader_splits(comp_seq.size(), 0);
    std::vector<int> orphan_blocks;  // splits-only blocks, by size
    std::map<int, int> orphan;
    for (int s = 0; s < split_count_; ++s) {
      int rep = partition_.rep(traced + s);
      auto it = block_leader.find(rep);
      if (it != block_leader.end())
        ++leader_splits[it->second];
      else
        ++orphan[rep];
    }
    for (int v : leader_splits) bytes.push_back(v);
    for (const auto& [rep, n] : orphan) orphan_blocks.push_back(n);
    std::sort(orphan_blocks.begin(), orphan_blocks.end());
    bytes.push_back(-1);
    for (int v : orphan_blocks) bytes.push_back(v);
    return bytes;
  };

  std::vector<int> best_order = order;
  std::vector<int> best_part = partition_bytes(order);
  bool any_group = false;
  for (auto [b, e] : groups)
    if (e - b > 1 && e - b <= 5) any_group = true;
  if (any_group) {
    // enumerate permutations within small equal groups
    std::vector<int> work = order;
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (gi == groups.size()) {
        auto pb = partition_bytes(work);
        if (pb < best_part) {
          best_part = pb;
          best_order = work;
        }
        return;
      }
      auto [b, e] = groups[gi];
      if (e - b <= 1 || e - b > 5) {
        rec(gi + 1);
        return;
      }
      std::vector<int> seg(work.begin() + b, work.begin() + e);
      std::sort(seg.begin(), seg.end());
      do {
        std::copy(seg.begin(), seg.end(), work.begin() + b);
        rec(gi + 1);
      } while (std::next_permutation(seg.begin(), seg.end()));
      std::copy(order.begin() + b, order.begin() + e, work.begin() + b);
    };
    rec(0);
  }

  std::ostringstream os;
  os << "P" << pieces.size() << "|S" << split_count_ << "|";
  for (int pi : best_order) {
    for (int tok : enc[pi].tokens) os << tok << ",";
    os << ";";
  }
  os << "@";
  for (int v : best_part) os << v << ",";
  return os.str();
}

}  // namespace tielink
