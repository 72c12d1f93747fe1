#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stickknot/bracket.hpp"
#include "stickknot/error.hpp"
#include "stickknot/knotbase.hpp"
#include "stickknot/pd.hpp"

namespace stickknot {

/// Handedness relative to the reference diagram. Torus knots T(p,q) built
/// from positive braids count as "as tabled".
enum class Chirality { AsTabled, Mirrored, Amphichiral, NotApplicable };

inline std::string to_string(Chirality c) {
  switch (c) {
    case Chirality::AsTabled: return "as-tabled";
    case Chirality::Mirrored: return "mirrored";
    case Chirality::Amphichiral: return "amphichiral";
    case Chirality::NotApplicable: return "not-applicable";
  }
  return "?";
}

inline Chirality flip(Chirality c) {
  if (c == Chirality::AsTabled) return Chirality::Mirrored;
  if (c == Chirality::Mirrored) return Chirality::AsTabled;
  return c;
}

struct KnotFactor {
  std::string name;
  Chirality chirality = Chirality::Amphichiral;
  friend bool operator==(const KnotFactor&, const KnotFactor&) = default;
  friend auto operator<=>(const KnotFactor&, const KnotFactor&) = default;
};

/// Result of identification. `factors` lists the prime summands (a single
/// entry for a prime knot, none for the unknot).
struct KnotId {
  std::string name;
  Chirality chirality = Chirality::NotApplicable;
  std::vector<KnotFactor> factors;
  /// The type differs from its mirror, so the reported handedness depends on
  /// the side the diagram is viewed from.
  bool mirror_ambiguous = false;

  bool is_unknot() const { return factors.empty(); }
  bool is_composite() const { return factors.size() > 1; }

  /// Name with mirrored factors starred, chosen between the knot and its
  /// mirror so that mirror images share a label: "3_1#3_1*" is the square
  /// knot, "3_1#3_1" the granny.
  std::string label() const {
    if (factors.size() <= 1) return name;
    auto render = [](const std::vector<KnotFactor>& fs) {
      std::string s;
      for (const auto& f : fs) {
        if (!s.empty()) s += '#';
        s += f.name + (f.chirality == Chirality::Mirrored ? "*" : "");
      }
      return s;
    };
    std::vector<KnotFactor> m = factors;
    for (auto& f : m) f.chirality = flip(f.chirality);
    std::sort(m.begin(), m.end(), factor_order);
    std::string a = render(factors), b = render(m);
    return std::count(a.begin(), a.end(), '*') <= std::count(b.begin(), b.end(), '*') ? a : b;
  }

  /// (left, right) trefoil counts when every factor is a trefoil. The tabled
  /// trefoil is right-handed.
  std::optional<std::pair<int, int>> trefoil_counts() const {
    if (factors.empty()) return std::nullopt;
    int l = 0, r = 0;
    for (const auto& f : factors) {
      if (f.name != "3_1") return std::nullopt;
      (f.chirality == Chirality::Mirrored ? l : r)++;
    }
    return std::pair{l, r};
  }

  static bool factor_order(const KnotFactor& a, const KnotFactor& b) {
    auto key = [](const KnotFactor& f) {
      const auto us = f.name.find('_');
      const int c = us == std::string::npos ? 99 : std::stoi(f.name.substr(0, us));
      const int idx = us == std::string::npos ? 0 : std::stoi(f.name.substr(us + 1));
      return std::tuple{c, idx, f.name, static_cast<int>(f.chirality)};
    };
    return key(a) < key(b);
  }

  friend bool operator==(const KnotId& a, const KnotId& b) {
    return a.name == b.name && a.chirality == b.chirality && a.factors == b.factors;
  }
};

inline KnotId make_composite(std::vector<KnotFactor> factors) {
  std::sort(factors.begin(), factors.end(), KnotId::factor_order);
  KnotId id;
  if (factors.empty()) {
    id.name = "0_1";
    id.chirality = Chirality::Amphichiral;
    return id;
  }
  if (factors.size() == 1) {
    id.name = factors[0].name;
    id.chirality = factors[0].chirality;
    id.factors = factors;
    return id;
  }
  for (const auto& f : factors) id.name += (id.name.empty() ? "" : "#") + f.name;
  id.factors = std::move(factors);
  return id;
}

struct UniverseOptions {
  /// Composites of table knots up to this total crossing number.
  int composite_crossings = 9;
  /// Trefoil sums with up to this many summands, any handedness mix.
  int trefoil_summands = 6;
  /// Torus knots T(p,q) with (p-1)q up to this many crossings.
  int torus_crossings = 20;
  /// Pairs whose fingerprints are known to coincide. Identification reports
  /// such a fingerprint as ambiguous instead of picking one.
  std::vector<std::pair<std::string, std::string>> known_coincidences{{"8_9", "4_1#4_1"}};
};

/// All knot types that identification can name, keyed by fingerprint. The
/// constructor audits injectivity and throws FingerprintCollision on any
/// coincidence that is not declared in the options.
class KnotUniverse {
 public:
  explicit KnotUniverse(const KnotTable& table = KnotTable::bundled(), UniverseOptions opt = {})
      : table_(&table), opt_(std::move(opt)) {
    add(BracketPoly::one(), make_composite({}));
    struct Prime {
      KnotFactor f;
      int crossings;
      BracketPoly x;
    };
    std::vector<Prime> primes;
    for (const auto& r : table.records()) {
      if (r.amphichiral) {
        primes.push_back({{r.name, Chirality::Amphichiral}, r.crossing_number, r.fingerprint});
      } else {
        primes.push_back({{r.name, Chirality::AsTabled}, r.crossing_number, r.fingerprint});
        primes.push_back({{r.name, Chirality::Mirrored}, r.crossing_number, mirror(r.fingerprint)});
      }
    }
    for (const auto& p : primes) add(p.x, make_composite({p.f}));

    // Multisets of at least two primes within the crossing budget.
    std::vector<int> pick;
    auto rec = [&](auto&& self, std::size_t from, int crossings, const BracketPoly& x) -> void {
      if (pick.size() >= 2) {
        std::vector<KnotFactor> fs;
        for (int i : pick) fs.push_back(primes[i].f);
        add(x, make_composite(fs));
      }
      for (std::size_t i = from; i < primes.size(); ++i) {
        if (crossings + primes[i].crossings > opt_.composite_crossings) continue;
        pick.push_back(static_cast<int>(i));
        self(self, i, crossings + primes[i].crossings, x * primes[i].x);
        pick.pop_back();
      }
    };
    rec(rec, 0, 0, BracketPoly::one());

    if (const KnotRecord* tref = table.find("3_1")) {
      const BracketPoly right = tref->fingerprint, left = mirror(right);
      for (int n = 2; n <= opt_.trefoil_summands; ++n)
        for (int l = 0; l <= n; ++l) {
          std::vector<KnotFactor> fs(l, {"3_1", Chirality::Mirrored});
          fs.insert(fs.end(), n - l, {"3_1", Chirality::AsTabled});
          add(left.pow(l) * right.pow(n - l), make_composite(fs));
        }
    }
    check_declared();
  }

  KnotUniverse(const KnotUniverse&) = delete;
  KnotUniverse& operator=(const KnotUniverse&) = delete;

  /// Shared universe over the bundled table.
  static const KnotUniverse& standard() {
    static const KnotUniverse u;
    return u;
  }

  const KnotTable& table() const { return *table_; }
  std::size_t size() const { return by_fingerprint_.size(); }

  /// Identification by fingerprint; nullopt when not in the universe.
  std::optional<KnotId> lookup(const BracketPoly& x) const {
    if (auto a = ambiguous_.find(x); a != ambiguous_.end())
      throw Error(ErrorCode::Unidentified, "fingerprint shared by " + a->second);
    if (auto it = by_fingerprint_.find(x); it != by_fingerprint_.end()) return it->second;
    ensure_torus();
    if (auto it = torus_.find(x); it != torus_.end()) return it->second;
    return std::nullopt;
  }

  KnotId identify_fingerprint(const BracketPoly& x) const {
    if (auto id = lookup(x)) return *id;
    throw Error(ErrorCode::Unidentified, "invariant " + to_string(x) + " is outside the identification universe");
  }

  /// Names the knot type of a PD code. Throws Unidentified when the
  /// invariant is outside the universe.
  KnotId identify(const PDCode& pd, const BracketOptions& opt = {}) const {
    return identify_fingerprint(normalized_invariant(pd, opt));
  }

  /// Fingerprint of the positive torus knot T(p,q), via its braid closure.
  static BracketPoly torus_fingerprint(int p, int q, const BracketOptions& opt = {}) {
    return normalized_invariant(torus_knot_pd(p, q), opt);
  }

  /// X of `l` left and `r` right trefoils summed.
  BracketPoly trefoil_fingerprint(int l, int r) const {
    const BracketPoly right = table_->at("3_1").fingerprint;
    return mirror(right).pow(l) * right.pow(r);
  }

  /// Name used for T(p,q): the table name when the two coincide.
  std::string torus_name(int p, int q) const {
    if ((p - 1) * q <= opt_.torus_crossings) {
      auto x = torus_fingerprint(p, q);
      if (auto it = by_fingerprint_.find(x); it != by_fingerprint_.end()) return it->second.name;
    }
    return "T(" + std::to_string(p) + "," + std::to_string(q) + ")";
  }

  /// Every entry, sorted by label, for dumping.
  std::vector<std::pair<KnotId, BracketPoly>> entries() const {
    std::vector<std::pair<KnotId, BracketPoly>> out;
    for (const auto& [x, id] : by_fingerprint_) out.push_back({id, x});
    ensure_torus();
    for (const auto& [x, id] : torus_) out.push_back({id, x});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::pair{a.first.name, a.second} < std::pair{b.first.name, b.second};
    });
    return out;
  }

 private:
  void add(const BracketPoly& x, KnotId id) {
    id.mirror_ambiguous = x != mirror(x);
    if (id.factors.size() > 1) id.chirality = id.mirror_ambiguous ? Chirality::NotApplicable : Chirality::Amphichiral;
    if (ambiguous_.count(x)) {
      ambiguous_[x] += " and " + id.name;
      return;
    }
    auto [it, fresh] = by_fingerprint_.emplace(x, id);
    if (fresh || it->second == id) return;
    if (declared(it->second.name, id.name)) {
      ambiguous_[x] = it->second.name + " and " + id.name;
      seen_coincidences_.insert({it->second.name, id.name});
      by_fingerprint_.erase(it);
      return;
    }
    throw Error(ErrorCode::FingerprintCollision, it->second.name + " and " + id.name);
  }

  bool declared(const std::string& a, const std::string& b) const {
    for (const auto& [x, y] : opt_.known_coincidences)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  }

  /// A declared coincidence inside the universe must actually occur.
  void check_declared() const {
    for (const auto& [a, b] : opt_.known_coincidences) {
      const bool a_in = mentions(a), b_in = mentions(b);
      if (a_in && b_in && !seen_coincidences_.count({a, b}) && !seen_coincidences_.count({b, a}))
        throw Error(ErrorCode::FingerprintCollision, "declared coincidence " + a + " / " + b + " not observed");
    }
  }

  bool mentions(const std::string& name) const {
    for (const auto& [x, id] : by_fingerprint_)
      if (id.name == name) return true;
    for (const auto& [x, names] : ambiguous_)
      if (names.find(name) != std::string::npos) return true;
    return false;
  }

  void ensure_torus() const {
    std::call_once(torus_once_, [this] {
      for (int p = 2; p < opt_.torus_crossings; ++p)
        for (int q = p + 1; (p - 1) * q <= opt_.torus_crossings; ++q) {
          if (std::gcd(p, q) != 1) continue;
          const BracketPoly x = torus_fingerprint(p, q);
          KnotId pos = make_composite({{"T(" + std::to_string(p) + "," + std::to_string(q) + ")", Chirality::AsTabled}});
          pos.mirror_ambiguous = true;
          KnotId neg = pos;
          neg.chirality = neg.factors[0].chirality = Chirality::Mirrored;
          for (auto [fx, id] : {std::pair{x, pos}, std::pair{mirror(x), neg}}) {
            if (by_fingerprint_.count(fx)) continue;  // same type as a table knot
            if (ambiguous_.count(fx) || torus_.count(fx))
              throw Error(ErrorCode::FingerprintCollision, id.name + " collides with another entry");
            torus_.emplace(fx, id);
          }
        }
    });
  }

  const KnotTable* table_;
  UniverseOptions opt_;
  std::map<BracketPoly, KnotId> by_fingerprint_;
  std::map<BracketPoly, std::string> ambiguous_;
  std::set<std::pair<std::string, std::string>> seen_coincidences_;
  mutable std::once_flag torus_once_;
  mutable std::map<BracketPoly, KnotId> torus_;
};

/// identify() against the standard universe.
inline KnotId identify(const PDCode& pd, const BracketOptions& opt = {}) {
  return KnotUniverse::standard().identify(pd, opt);
}

}  // namespace stickknot
