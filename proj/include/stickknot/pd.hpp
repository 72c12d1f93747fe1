#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stickknot/error.hpp"

namespace stickknot {

/// Planar-diagram code. Each crossing lists four edge labels in 1..2c:
/// the incoming under-edge first, then the remaining three edges
/// counterclockwise around the crossing. Labels increase by one along the
/// oriented traversal and 2c wraps to 1. The empty code is the unknot.
struct PDCode {
  std::vector<std::array<int, 4>> crossings;

  std::size_t size() const { return crossings.size(); }
  bool empty() const { return crossings.empty(); }
  int edge_count() const { return 2 * static_cast<int>(crossings.size()); }

  friend bool operator==(const PDCode&, const PDCode&) = default;
};

namespace pd_detail {

inline int wrap_next(int label, int edges) { return label == edges ? 1 : label + 1; }

}  // namespace pd_detail

/// True when the over-strand of crossing `x` runs from slot 3 (d) to slot 1 (b),
/// i.e. when b follows d along the traversal. For a one-crossing code both
/// readings are possible; there the over-strand enters on the edge that left
/// as the under-out edge.
inline bool over_enters_at_d(const std::array<int, 4>& x, int edges) {
  const int b = x[1], d = x[3];
  if (edges == 2) return d == x[2];
  return pd_detail::wrap_next(d, edges) == b;
}

/// +1 for a positive (right-handed) crossing, -1 otherwise.
inline int crossing_sign(const std::array<int, 4>& x, int edges) {
  return over_enters_at_d(x, edges) ? +1 : -1;
}

inline int writhe(const PDCode& pd) {
  int w = 0;
  for (const auto& x : pd.crossings) w += crossing_sign(x, pd.edge_count());
  return w;
}

/// Validates label multiplicity and consecutive orientation. Throws InvalidPD.
inline void validate(const PDCode& pd) {
  const int edges = pd.edge_count();
  std::vector<int> seen(edges + 1, 0);
  for (const auto& x : pd.crossings) {
    for (int label : x) {
      if (label < 1 || label > edges)
        throw Error(ErrorCode::InvalidPD, "edge label " + std::to_string(label) + " out of range");
      ++seen[label];
    }
  }
  for (int l = 1; l <= edges; ++l)
    if (seen[l] != 2)
      throw Error(ErrorCode::InvalidPD,
                  "edge label " + std::to_string(l) + " appears " + std::to_string(seen[l]) + " times");
  for (const auto& x : pd.crossings) {
    if (pd_detail::wrap_next(x[0], edges) != x[2])
      throw Error(ErrorCode::InvalidPD, "under-strand labels are not consecutive");
    const bool d_to_b = pd_detail::wrap_next(x[3], edges) == x[1];
    const bool b_to_d = pd_detail::wrap_next(x[1], edges) == x[3];
    if (!d_to_b && !b_to_d)
      throw Error(ErrorCode::InvalidPD, "over-strand labels are not consecutive");
  }
}

// ---------------------------------------------------------------------------
// Text forms

inline std::string to_string(const PDCode& pd) {
  std::string out;
  for (std::size_t i = 0; i < pd.crossings.size(); ++i) {
    const auto& x = pd.crossings[i];
    if (i) out += ',';
    out += "X[" + std::to_string(x[0]) + ',' + std::to_string(x[1]) + ',' +
           std::to_string(x[2]) + ',' + std::to_string(x[3]) + ']';
  }
  return out;
}

/// Parses `X[a,b,c,d],X[...]`, optionally wrapped in `PD[...]`. Also accepts
/// the bracket-list form `[[a,b,c,d],...]`. Whitespace is ignored.
inline PDCode parse_pd(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.rfind("PD[", 0) == 0 && s.size() >= 4 && s.back() == ']') s = s.substr(3, s.size() - 4);
  PDCode pd;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, "PD code: " + why + " at offset " + std::to_string(i));
  };
  // Bracket-list form.
  if (!s.empty() && s[0] == '[' && s.size() > 1 && s[1] == '[') s = s.substr(1, s.size() - 2);
  while (i < s.size()) {
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == 'X') ++i;
    if (i >= s.size() || s[i] != '[') fail("expected '['");
    ++i;
    std::array<int, 4> x{};
    for (int k = 0; k < 4; ++k) {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '-')) ++j;
      if (j == i) fail("expected integer");
      x[k] = std::stoi(s.substr(i, j - i));
      i = j;
      if (k < 3) {
        if (i >= s.size() || s[i] != ',') fail("expected ','");
        ++i;
      }
    }
    if (i >= s.size() || s[i] != ']') fail("expected ']'");
    ++i;
    pd.crossings.push_back(x);
  }
  return pd;
}

// ---------------------------------------------------------------------------
// Oriented working form. Edge ids are arbitrary integers; slot 0 is the
// incoming under-edge, slot 2 the outgoing under-edge, and `over_in` is 1 or 3.
// Used for all code surgery; `relabel` turns it back into a PDCode.

struct OrientedCrossing {
  std::array<int, 4> e;
  int over_in = 3;
  int over_out() const { return over_in == 3 ? 1 : 3; }
};

using OrientedDiagram = std::vector<OrientedCrossing>;

inline OrientedDiagram orient(const PDCode& pd) {
  OrientedDiagram out;
  out.reserve(pd.size());
  for (const auto& x : pd.crossings)
    out.push_back({x, over_enters_at_d(x, pd.edge_count()) ? 3 : 1});
  return out;
}

/// Relabels consecutively along the traversal, starting with `start_edge`
/// (default: the smallest id present) as label 1.
inline PDCode relabel(const OrientedDiagram& diagram, std::optional<int> start_edge = std::nullopt) {
  if (diagram.empty()) return {};
  // successor[edge] = edge leaving the crossing that `edge` enters.
  std::map<int, int> successor;
  for (const auto& x : diagram) {
    successor[x.e[0]] = x.e[2];
    successor[x.e[x.over_in]] = x.e[x.over_out()];
  }
  int start = start_edge.value_or(successor.begin()->first);
  std::map<int, int> label;
  int cur = start;
  int next_label = 1;
  while (!label.count(cur)) {
    label[cur] = next_label++;
    auto it = successor.find(cur);
    if (it == successor.end()) throw Error(ErrorCode::InvalidPD, "dangling edge");
    cur = it->second;
  }
  if (cur != start || label.size() != 2 * diagram.size())
    throw Error(ErrorCode::InvalidPD, "diagram has more than one component");
  PDCode pd;
  for (const auto& x : diagram) {
    std::array<int, 4> t{label[x.e[0]], label[x.e[1]], label[x.e[2]], label[x.e[3]]};
    pd.crossings.push_back(t);
  }
  return pd;
}

/// Same diagram, labels shifted so that old label `k` becomes label 1.
inline PDCode shift_labels(const PDCode& pd, int k) {
  if (pd.empty()) return pd;
  return relabel(orient(pd), k);
}

/// Reverses the traversal direction.
inline PDCode reverse_orientation(const PDCode& pd) {
  OrientedDiagram d = orient(pd);
  for (auto& x : d) {
    // New under-in is the old under-out; keep counterclockwise order.
    std::array<int, 4> e{x.e[2], x.e[3], x.e[0], x.e[1]};
    int over_in = x.over_out() == 3 ? 1 : 3;  // slots rotate by two
    x.e = e;
    x.over_in = over_in;
  }
  return relabel(d, pd.empty() ? std::nullopt : std::optional<int>(pd.crossings[0][0]));
}

/// Mirror image: every crossing switches over and under.
inline PDCode mirror_pd(const PDCode& pd) {
  OrientedDiagram d = orient(pd);
  for (auto& x : d) {
    const auto old = x.e;
    if (x.over_in == 3) {
      // New under-in is the old over-in; the old under-in lands in slot 1.
      x.e = {old[3], old[0], old[1], old[2]};
      x.over_in = 1;
    } else {
      x.e = {old[1], old[2], old[3], old[0]};
      x.over_in = 3;
    }
  }
  return relabel(d, 1);
}

// Which slots of a crossing carry incoming edges.
inline bool slot_is_incoming(const OrientedCrossing& x, int slot) {
  return slot == 0 || slot == x.over_in;
}

/// Connected sum: edge 1 of `a` is cut and spliced into edge 1 of `b`.
inline PDCode connected_sum_pd(const PDCode& a, const PDCode& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  OrientedDiagram da = orient(a), db = orient(b);
  const int shift = 1000000;
  // In a: head of edge 1 keeps id 1, its tail becomes id T. In b: all ids
  // shifted; head of b's edge 1 becomes T, its tail becomes id 1.
  const int tail_a_to_head_b = 2 * shift + 1;
  for (auto& x : da)
    for (int s = 0; s < 4; ++s)
      if (x.e[s] == 1 && !slot_is_incoming(x, s)) x.e[s] = tail_a_to_head_b;
  for (auto& x : db)
    for (int s = 0; s < 4; ++s) {
      if (x.e[s] == 1)
        x.e[s] = slot_is_incoming(x, s) ? tail_a_to_head_b : 1;
      else
        x.e[s] += shift;
    }
  OrientedDiagram all = da;
  all.insert(all.end(), db.begin(), db.end());
  return relabel(all, 1);
}

/// Adds a Reidemeister I kink on edge `edge`. `over_first` selects whether
/// the strand meets the new crossing first as over-strand; `flip` selects the
/// side of the loop (and so the sign of the kink).
inline PDCode insert_r1(const PDCode& pd, int edge, bool over_first, bool flip) {
  OrientedDiagram d = orient(pd);
  const int big = 4 * (pd.edge_count() + 10);
  const int head = big + 1, loop = big + 2;  // edge keeps its tail id
  if (pd.empty()) {
    // Kink on the unknot: a one-crossing code.
    OrientedCrossing x;
    const int e1 = 1, e2 = 2;
    if (!over_first) {
      x.e = flip ? std::array<int, 4>{e1, e2, e2, e1} : std::array<int, 4>{e1, e1, e2, e2};
      x.over_in = flip ? 1 : 3;
    } else {
      x.e = flip ? std::array<int, 4>{e2, e2, e1, e1} : std::array<int, 4>{e2, e1, e1, e2};
      x.over_in = flip ? 3 : 1;
    }
    return relabel({x}, 1);
  }
  for (auto& x : d)
    for (int s = 0; s < 4; ++s)
      if (x.e[s] == edge && slot_is_incoming(x, s)) x.e[s] = head;
  OrientedCrossing k;
  if (!over_first) {
    // under-in = edge, under-out = loop, over-in = loop, over-out = head.
    // Over-in sits next to under-out either at slot 1 or slot 3.
    if (flip) {
      k.e = {edge, loop, loop, head};
      k.over_in = 1;
    } else {
      k.e = {edge, head, loop, loop};
      k.over_in = 3;
    }
  } else {
    // over-in = edge, over-out = loop, under-in = loop, under-out = head.
    if (flip) {
      k.e = {loop, loop, head, edge};
      k.over_in = 3;
    } else {
      k.e = {loop, edge, head, loop};
      k.over_in = 1;
    }
  }
  d.push_back(k);
  return relabel(d, 1);
}

/// Faces of the diagram as cycles of (edge id, walked-with-orientation). The
/// face lies to the right of the walking direction.
struct FaceSide {
  int edge;
  bool with_orientation;
};

inline std::vector<std::vector<FaceSide>> faces(const OrientedDiagram& d) {
  // Map each edge to its two slot occurrences.
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (int c = 0; c < static_cast<int>(d.size()); ++c)
    for (int s = 0; s < 4; ++s) occ[d[c].e[s]].push_back({c, s});
  std::set<std::pair<int, int>> used;  // darts (crossing, slot) leaving along the slot
  std::vector<std::vector<FaceSide>> out;
  for (int c0 = 0; c0 < static_cast<int>(d.size()); ++c0)
    for (int s0 = 0; s0 < 4; ++s0) {
      if (used.count({c0, s0})) continue;
      std::vector<FaceSide> face;
      int c = c0, s = s0;
      while (!used.count({c, s})) {
        used.insert({c, s});
        const int edge = d[c].e[s];
        const bool outgoing = !slot_is_incoming(d[c], s);
        face.push_back({edge, outgoing});
        const auto& o = occ[edge];
        std::pair<int, int> other = (o[0] == std::make_pair(c, s)) ? o[1] : o[0];
        c = other.first;
        s = (other.second + 1) % 4;
      }
      out.push_back(std::move(face));
    }
  return out;
}

/// A connected diagram on the sphere has c + 2 faces.
inline bool is_planar(const PDCode& pd) {
  if (pd.empty()) return true;
  return faces(orient(pd)).size() == pd.size() + 2;
}

/// Reidemeister II: pushes a finger of edge `over_edge` across edge
/// `under_edge`, through the face they both bound. Both edges must appear
/// exactly once on face `face_index`.
inline PDCode insert_r2(const PDCode& pd, std::size_t face_index, int over_edge, int under_edge) {
  OrientedDiagram d = orient(pd);
  auto fs = faces(d);
  if (face_index >= fs.size()) throw Error(ErrorCode::InvalidParams, "no such face");
  std::optional<bool> e_with, f_with;
  int e_count = 0, f_count = 0;
  for (const auto& side : fs[face_index]) {
    if (side.edge == over_edge) {
      e_with = side.with_orientation;
      ++e_count;
    }
    if (side.edge == under_edge) {
      f_with = side.with_orientation;
      ++f_count;
    }
  }
  if (e_count != 1 || f_count != 1 || over_edge == under_edge)
    throw Error(ErrorCode::InvalidParams, "edges must each bound the face exactly once");
  const int base = 4 * (pd.edge_count() + 10);
  const int e2 = base + 1, e3 = base + 2, f2 = base + 3, f3 = base + 4;
  const int e1 = over_edge, f1 = under_edge;
  for (auto& x : d)
    for (int s = 0; s < 4; ++s) {
      if (x.e[s] == over_edge && slot_is_incoming(x, s)) x.e[s] = e3;
      else if (x.e[s] == under_edge && slot_is_incoming(x, s)) x.e[s] = f3;
    }
  // Local model: the face lies between the over-edge (top) and under-edge
  // (bottom). Walking with orientation keeps the face on the right, so the
  // over-edge runs left-to-right iff it is walked with orientation, and the
  // under-edge runs left-to-right iff it is walked against orientation.
  const bool e_ltr = *e_with;
  const bool f_ltr = !*f_with;
  OrientedCrossing left, right;
  if (e_ltr && f_ltr) {
    left.e = {f1, e2, f2, e1};
    left.over_in = 3;
    right.e = {f2, e2, f3, e3};
    right.over_in = 1;
  } else if (e_ltr && !f_ltr) {
    right.e = {f1, e3, f2, e2};
    right.over_in = 3;
    left.e = {f2, e1, f3, e2};
    left.over_in = 1;
  } else if (!e_ltr && f_ltr) {
    left.e = {f1, e2, f2, e3};
    left.over_in = 1;
    right.e = {f2, e2, f3, e1};
    right.over_in = 3;
  } else {
    right.e = {f1, e1, f2, e2};
    right.over_in = 1;
    left.e = {f2, e3, f3, e2};
    left.over_in = 3;
  }
  d.push_back(left);
  d.push_back(right);
  return relabel(d, 1);
}

// ---------------------------------------------------------------------------
// Gauss code

struct GaussEntry {
  int crossing = 0;  // 1-based crossing index
  bool over = false;
  int sign = +1;
  friend bool operator==(const GaussEntry&, const GaussEntry&) = default;
};

struct GaussCode {
  std::vector<GaussEntry> entries;
  friend bool operator==(const GaussCode&, const GaussCode&) = default;
};

/// Gauss sequence along the traversal starting at edge 1.
inline GaussCode to_gauss(const PDCode& pd) {
  GaussCode g;
  const int edges = pd.edge_count();
  // Passage through a crossing is identified by its incoming edge label.
  std::vector<GaussEntry> by_in(edges + 1);
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const auto& x = pd.crossings[i];
    const int sign = crossing_sign(x, edges);
    const int over_in = over_enters_at_d(x, edges) ? x[3] : x[1];
    by_in[x[0]] = {static_cast<int>(i) + 1, false, sign};
    by_in[over_in] = {static_cast<int>(i) + 1, true, sign};
  }
  for (int l = 1; l <= edges; ++l) g.entries.push_back(by_in[l]);
  return g;
}

/// Tokens `O3` / `U-2`: O/U prefix, then the crossing number carrying the
/// crossing sign. Comma separated.
inline std::string to_string(const GaussCode& g) {
  std::string out;
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    const auto& e = g.entries[i];
    if (i) out += ',';
    out += e.over ? 'O' : 'U';
    out += std::to_string(e.sign * e.crossing);
  }
  return out;
}

inline GaussCode parse_gauss(std::string_view text) {
  GaussCode g;
  std::string token;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, token, ',')) {
    std::string t;
    for (char ch : token)
      if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) continue;
    if (t[0] != 'O' && t[0] != 'U') throw Error(ErrorCode::ParseError, "Gauss token must start with O or U");
    int v = 0;
    try {
      v = std::stoi(t.substr(1));
    } catch (...) {
      throw Error(ErrorCode::ParseError, "bad Gauss token '" + t + "'");
    }
    if (v == 0) throw Error(ErrorCode::ParseError, "crossing number 0");
    g.entries.push_back({std::abs(v), t[0] == 'O', v > 0 ? 1 : -1});
  }
  std::map<int, int> overs, unders;
  for (const auto& e : g.entries) (e.over ? overs : unders)[e.crossing]++;
  for (const auto& [c, n] : overs)
    if (n != 1 || unders[c] != 1) throw Error(ErrorCode::ParseError, "crossing " + std::to_string(c) + " malformed");
  if (overs.size() != unders.size()) throw Error(ErrorCode::ParseError, "unpaired crossing");
  return g;
}

/// Rebuilds a PD code from a signed Gauss code. The sign fixes the
/// counterclockwise slot order at each crossing.
inline PDCode from_gauss(const GaussCode& g) {
  const int edges = static_cast<int>(g.entries.size());
  std::map<int, std::array<int, 4>> under, over;  // crossing -> {in, out}
  std::map<int, int> sign;
  for (int i = 0; i < edges; ++i) {
    const auto& e = g.entries[i];
    const int in = i + 1, out = pd_detail::wrap_next(i + 1, edges);
    (e.over ? over : under)[e.crossing] = {in, out, 0, 0};
    sign[e.crossing] = e.sign;
  }
  PDCode pd;
  for (const auto& [c, u] : under) {
    const auto& o = over.at(c);
    if (sign[c] > 0)
      pd.crossings.push_back({u[0], o[1], u[1], o[0]});
    else
      pd.crossings.push_back({u[0], o[0], u[1], o[1]});
  }
  return pd;
}

// ---------------------------------------------------------------------------
// Braid closures

/// Closure of a braid on `strands` strands. Positive generator i (1-based)
/// crosses strand positions i and i+1 with a positive crossing; negative
/// values give the inverse generator.
inline PDCode braid_closure(int strands, const std::vector<int>& word) {
  std::vector<int> top(strands), cur(strands);
  int next_id = 1;
  for (int k = 0; k < strands; ++k) top[k] = cur[k] = next_id++;
  OrientedDiagram d;
  for (int g : word) {
    const int i = std::abs(g) - 1;
    if (i < 0 || i + 1 >= strands) throw Error(ErrorCode::InvalidParams, "generator out of range");
    const int x = cur[i], y = cur[i + 1];
    const int xo = next_id++, yo = next_id++;
    OrientedCrossing c;
    if (g > 0) {
      // Right-to-left strand is over: under x -> yo, over y -> xo.
      c.e = {x, xo, yo, y};
      c.over_in = 3;
    } else {
      // Left-to-right strand is over: under y -> xo, over x -> yo.
      c.e = {y, x, xo, yo};
      c.over_in = 1;
    }
    d.push_back(c);
    cur[i] = xo;
    cur[i + 1] = yo;
  }
  // Close up: bottom id at position k is identified with the top id.
  std::map<int, int> alias;
  for (int k = 0; k < strands; ++k) alias[cur[k]] = top[k];
  for (auto& c : d)
    for (auto& e : c.e)
      if (auto it = alias.find(e); it != alias.end()) e = it->second;
  return relabel(d, 1);
}

inline PDCode torus_knot_pd(int p, int q) {
  std::vector<int> word;
  for (int r = 0; r < q; ++r)
    for (int i = 1; i < p; ++i) word.push_back(i);
  return braid_closure(p, word);
}

}  // namespace stickknot
