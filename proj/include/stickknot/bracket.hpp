#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "stickknot/error.hpp"
#include "stickknot/pd.hpp"

namespace stickknot {

/// Integer Laurent polynomial in A. Zero coefficients are never stored.
class BracketPoly {
 public:
  BracketPoly() = default;
  static BracketPoly monomial(long long coeff, int exponent) {
    BracketPoly p;
    p.add_term(coeff, exponent);
    return p;
  }
  static BracketPoly one() { return monomial(1, 0); }

  const std::map<int, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1; }
  long long coeff(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0 : it->second;
  }
  int min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  void add_term(long long coeff, int exponent) {
    if (coeff == 0) return;
    long long& c = terms_[exponent];
    c += coeff;
    if (c == 0) terms_.erase(exponent);
  }

  BracketPoly& operator+=(const BracketPoly& o) {
    for (auto [e, c] : o.terms_) add_term(c, e);
    return *this;
  }
  friend BracketPoly operator+(BracketPoly a, const BracketPoly& b) { return a += b; }
  friend BracketPoly operator*(const BracketPoly& a, const BracketPoly& b) {
    BracketPoly r;
    for (auto [ea, ca] : a.terms_)
      for (auto [eb, cb] : b.terms_) r.add_term(ca * cb, ea + eb);
    return r;
  }
  friend bool operator==(const BracketPoly&, const BracketPoly&) = default;
  friend bool operator<(const BracketPoly& a, const BracketPoly& b) { return a.terms_ < b.terms_; }

  /// A -> A^-1.
  BracketPoly mirrored() const {
    BracketPoly r;
    for (auto [e, c] : terms_) r.terms_[-e] = c;
    return r;
  }

  BracketPoly pow(int n) const {
    BracketPoly r = one();
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
  }

 private:
  std::map<int, long long> terms_;
};

inline BracketPoly mirror(const BracketPoly& p) { return p.mirrored(); }

/// `c*A^e` terms joined by `+`, exponents descending; "0" for zero.
inline std::string to_string(const BracketPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    if (!out.empty()) out += '+';
    out += std::to_string(it->second) + "*A^" + std::to_string(it->first);
  }
  return out;
}

inline BracketPoly parse_bracket(const std::string& text) {
  BracketPoly p;
  if (text == "0") return p;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t star = text.find("*A^", i);
    if (star == std::string::npos) throw Error(ErrorCode::ParseError, "bracket term missing '*A^'");
    std::size_t end = star + 3;
    if (end < text.size() && text[end] == '-') ++end;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    try {
      p.add_term(std::stoll(text.substr(i, star - i)), std::stoi(text.substr(star + 3, end - star - 3)));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad bracket term");
    }
    if (end < text.size() && text[end] != '+') throw Error(ErrorCode::ParseError, "expected '+'");
    i = end + 1;
  }
  return p;
}

struct BracketOptions {
  int max_crossings = 20;
  unsigned threads = 1;
};

namespace bracket_detail {

/// Counts states by (number of A-smoothings, loop count) over masks in [lo, hi).
inline void count_states(const PDCode& pd, std::uint64_t lo, std::uint64_t hi,
                         std::vector<std::uint64_t>& hist) {
  const int c = static_cast<int>(pd.size());
  const int n = 2 * c;
  std::vector<int> parent(n);
  std::vector<std::array<int, 4>> x(pd.crossings);
  for (auto& t : x)
    for (auto& l : t) --l;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::uint64_t mask = lo; mask < hi; ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    int loops = n;
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[a] = b;
        --loops;
      }
    };
    int a_count = 0;
    for (int k = 0; k < c; ++k) {
      const auto& t = x[k];
      if ((mask >> k) & 1u) {
        // B-smoothing joins (a,d) and (b,c).
        unite(t[0], t[3]);
        unite(t[1], t[2]);
      } else {
        // A-smoothing joins (a,b) and (c,d).
        ++a_count;
        unite(t[0], t[1]);
        unite(t[2], t[3]);
      }
    }
    ++hist[a_count * (n + 1) + loops];
  }
}

}  // namespace bracket_detail

/// Kauffman bracket <K> by the full state sum over 2^c smoothings, with
/// <O> = 1 and each extra loop contributing d = -A^2 - A^-2.
inline BracketPoly kauffman_bracket(const PDCode& pd, const BracketOptions& opt = {}) {
  const int c = static_cast<int>(pd.size());
  if (c == 0) return BracketPoly::one();
  if (c > opt.max_crossings)
    throw Error(ErrorCode::TooManyCrossings,
                std::to_string(c) + " crossings exceeds cap " + std::to_string(opt.max_crossings));
  validate(pd);
  const int n = 2 * c;
  const std::uint64_t total = std::uint64_t{1} << c;
  const unsigned workers = c >= 12 ? std::max(1u, opt.threads) : 1u;
  std::vector<std::vector<std::uint64_t>> hists(workers, std::vector<std::uint64_t>((c + 1) * (n + 1), 0));
  if (workers == 1) {
    bracket_detail::count_states(pd, 0, total, hists[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
      pool.emplace_back([&, lo, hi, w] { bracket_detail::count_states(pd, lo, hi, hists[w]); });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> hist((c + 1) * (n + 1), 0);
  for (const auto& h : hists)
    for (std::size_t i = 0; i < h.size(); ++i) hist[i] += h[i];

  const BracketPoly d = BracketPoly::monomial(-1, 2) + BracketPoly::monomial(-1, -2);
  std::vector<BracketPoly> d_pow(n + 1);
  d_pow[0] = BracketPoly::one();
  for (int i = 1; i <= n; ++i) d_pow[i] = d_pow[i - 1] * d;
  BracketPoly result;
  for (int a = 0; a <= c; ++a)
    for (int loops = 1; loops <= n; ++loops) {
      const auto count = hist[a * (n + 1) + loops];
      if (!count) continue;
      BracketPoly term = BracketPoly::monomial(static_cast<long long>(count), a - (c - a)) * d_pow[loops - 1];
      result += term;
    }
  return result;
}

/// X(K) = (-A^3)^(-w) <K>. Invariant of the oriented knot type; equals the
/// Jones polynomial under t = A^-4.
inline BracketPoly normalized_invariant(const PDCode& pd, const BracketOptions& opt = {}) {
  BracketPoly b = kauffman_bracket(pd, opt);
  const int w = writhe(pd);
  return BracketPoly::monomial(w % 2 == 0 ? 1 : -1, -3 * w) * b;
}

}  // namespace stickknot
