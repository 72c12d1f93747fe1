#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "stickknot/bracket.hpp"
#include "stickknot/error.hpp"
#include "stickknot/knot_table_data.hpp"
#include "stickknot/pd.hpp"

namespace stickknot {

struct KnotRecord {
  std::string name;
  int crossing_number = 0;
  bool amphichiral = false;
  PDCode pd;
  BracketPoly fingerprint;
};

/// Prime knot table with fingerprints. Lines are `name;crossing_number;chirality;PD`,
/// chirality being `chiral` or `amphichiral`; `#` starts a comment.
class KnotTable {
 public:
  KnotTable() = default;

  static KnotTable parse(std::istream& in) {
    KnotTable t;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::ParseError, "knot table line " + std::to_string(line_no) + ": " + why);
      };
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string part; std::getline(ss, part, ';');) f.push_back(part);
      if (f.size() != 4) fail("expected 4 ';'-separated fields");
      KnotRecord r;
      r.name = f[0];
      try {
        r.crossing_number = std::stoi(f[1]);
      } catch (const std::exception&) {
        fail("bad crossing number");
      }
      if (f[2] == "amphichiral")
        r.amphichiral = true;
      else if (f[2] != "chiral")
        fail("chirality must be 'chiral' or 'amphichiral'");
      try {
        r.pd = parse_pd(f[3]);
        validate(r.pd);
      } catch (const Error& e) {
        fail(e.what());
      }
      if (static_cast<int>(r.pd.size()) != r.crossing_number) fail("PD code size differs from crossing number");
      if (r.crossing_number > 8) fail("table is limited to eight crossings");
      if (r.name.rfind(std::to_string(r.crossing_number) + "_", 0) != 0) fail("name does not match crossing number");
      r.fingerprint = normalized_invariant(r.pd);
      if (r.amphichiral && r.fingerprint != mirror(r.fingerprint))
        fail("amphichiral knot with a chiral fingerprint");
      t.records_.push_back(std::move(r));
    }
    t.audit();
    return t;
  }

  static KnotTable parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static KnotTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    return parse(in);
  }

  /// The table compiled into the library.
  static const KnotTable& bundled() {
    static const KnotTable t = parse(std::string(kBundledKnotTable));
    return t;
  }

  const std::vector<KnotRecord>& records() const { return records_; }
  const KnotRecord* find(const std::string& name) const {
    for (const auto& r : records_)
      if (r.name == name) return &r;
    return nullptr;
  }
  const KnotRecord& at(const std::string& name) const {
    if (auto* r = find(name)) return *r;
    throw Error(ErrorCode::UnknownKnot, "no table entry " + name);
  }

 private:
  /// {X, mirror X} must be pairwise distinct across records.
  void audit() const {
    std::map<BracketPoly, std::string> seen;
    for (const auto& r : records_) {
      for (const BracketPoly& x : {r.fingerprint, mirror(r.fingerprint)}) {
        auto [it, fresh] = seen.emplace(x, r.name);
        if (!fresh && it->second != r.name)
          throw Error(ErrorCode::FingerprintCollision, it->second + " and " + r.name);
        if (!fresh && it->second == r.name && !r.amphichiral && x == mirror(x))
          throw Error(ErrorCode::FingerprintCollision, r.name + " and its mirror");
      }
      if (std::count_if(records_.begin(), records_.end(), [&](const KnotRecord& o) { return o.name == r.name; }) > 1)
        throw Error(ErrorCode::FingerprintCollision, r.name + " and " + r.name + " (duplicate record)");
    }
  }

  std::vector<KnotRecord> records_;
};

// ---------------------------------------------------------------------------
// Knot descriptors and the closed-form invariant values known for them.

/// Either a torus knot T(p,q) or a sum of `left` left-handed and `right`
/// right-handed trefoils.
struct KnotDescriptor {
  enum class Kind { Torus, Trefoils };
  Kind kind = Kind::Torus;
  int p = 0, q = 0;
  int left = 0, right = 0;

  static KnotDescriptor torus(int p, int q) { return {Kind::Torus, p, q, 0, 0}; }
  static KnotDescriptor trefoils(int left, int right) { return {Kind::Trefoils, 0, 0, left, right}; }

  int trefoil_count() const { return left + right; }
  bool is_single_trefoil() const {
    return (kind == Kind::Trefoils && trefoil_count() == 1) || (kind == Kind::Torus && p == 2 && q == 3);
  }

  std::string to_string() const {
    if (kind == Kind::Torus) return "T(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return std::to_string(left) + "TL#" + std::to_string(right) + "TR";
  }

  friend bool operator==(const KnotDescriptor&, const KnotDescriptor&) = default;
};

/// Accepts `T(p,q)`, `aTL#bTR`, `square`, `granny`, `trefoil`, and `nT`
/// (n left trefoils; `n` supplied separately).
inline KnotDescriptor parse_descriptor(const std::string& text, std::optional<int> n = std::nullopt) {
  std::smatch m;
  static const std::regex torus(R"(T\(?_?\{?(\d+),(\d+)\}?\)?)");
  static const std::regex mixed(R"((\d+)TL#(\d+)TR)");
  static const std::regex count(R"((\d+)T)");
  if (std::regex_match(text, m, torus)) return KnotDescriptor::torus(std::stoi(m[1]), std::stoi(m[2]));
  if (std::regex_match(text, m, mixed)) return KnotDescriptor::trefoils(std::stoi(m[1]), std::stoi(m[2]));
  if (std::regex_match(text, m, count)) return KnotDescriptor::trefoils(std::stoi(m[1]), 0);
  if (text == "square") return KnotDescriptor::trefoils(1, 1);
  if (text == "granny") return KnotDescriptor::trefoils(2, 0);
  if (text == "trefoil") return KnotDescriptor::trefoils(1, 0);
  if (text == "nT") {
    if (!n) throw Error(ErrorCode::InvalidParams, "descriptor nT needs n");
    return KnotDescriptor::trefoils(*n, 0);
  }
  throw Error(ErrorCode::ParseError, "unrecognized knot descriptor '" + text + "'");
}

struct KnownValues {
  std::optional<int> stick;
  std::optional<int> bridge;
  std::optional<int> superbridge;
  std::optional<int> crossing;
};

inline void check_descriptor(const KnotDescriptor& d) {
  if (d.kind == KnotDescriptor::Kind::Torus) {
    if (d.p < 2 || d.q <= d.p || std::gcd(d.p, d.q) != 1)
      throw Error(ErrorCode::UnknownKnot, d.to_string() + " is not a torus knot with 2 <= p < q, gcd 1");
  } else if (d.left < 0 || d.right < 0 || d.trefoil_count() < 1) {
    throw Error(ErrorCode::UnknownKnot, "a trefoil sum needs at least one trefoil");
  }
}

/// Closed-form values only; anything else stays empty.
inline KnownValues known_values(const KnotDescriptor& d) {
  check_descriptor(d);
  KnownValues v;
  if (d.kind == KnotDescriptor::Kind::Torus) {
    v.bridge = d.p;
    v.crossing = (d.p - 1) * d.q;
    v.superbridge = std::min(2 * d.p, d.q);
    if (d.q < 2 * d.p) v.stick = 2 * d.q;
    return v;
  }
  const int n = d.trefoil_count();
  v.stick = 2 * n + 4;
  // Bridge index is additive minus one under connected sum; br(trefoil) = 2.
  v.bridge = n + 1;
  if (n == 1) {
    KnownValues t = known_values(KnotDescriptor::torus(2, 3));
    v.superbridge = t.superbridge;
    v.crossing = t.crossing;
  }
  return v;
}

}  // namespace stickknot
