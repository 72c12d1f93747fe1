#pragma once
// Reference values computed independently of the library's diagram code.

#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <string>
#include <vector>

#include "stickknot/bracket.hpp"

namespace oracle {

using stickknot::BracketPoly;

/// Jones polynomial text in t (KnotInfo style) to the bracket variable via t = A^-4.
inline BracketPoly jones_to_bracket(const std::string& text) {
  static const std::regex term(R"(([+-]?)(\d*)\*?(t(\^\(?(-?\d+)\)?)?)?)");
  BracketPoly p;
  auto it = std::sregex_iterator(text.begin(), text.end(), term);
  for (; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m.length(0) == 0) continue;
    long long c = m[2].length() ? std::stoll(m[2]) : 1;
    if (m[1] == "-") c = -c;
    int e = 0;
    if (m[3].length()) e = m[5].length() ? std::stoi(m[5]) : 1;
    p.add_term(c, -4 * e);
  }
  return p;
}

inline std::map<std::string, BracketPoly> tabled_jones() {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/knotinfo_jones.txt");
  std::map<std::string, BracketPoly> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto semi = line.find(';');
    out[line.substr(0, semi)] = jones_to_bracket(line.substr(semi + 1));
  }
  return out;
}

/// Jones polynomial of the positive torus knot T(p,q):
/// t^((p-1)(q-1)/2) (1 - t^(p+1) - t^(q+1) + t^(p+q)) / (1 - t^2).
inline BracketPoly torus_jones(int p, int q) {
  // Numerator coefficients in t, then exact division by 1 - t^2.
  std::vector<long long> num(p + q + 1, 0);
  num[0] += 1;
  num[p + 1] -= 1;
  num[q + 1] -= 1;
  num[p + q] += 1;
  std::vector<long long> quot(p + q - 1, 0);
  for (int k = 0; k < p + q - 1; ++k) {
    quot[k] = num[k] + (k >= 2 ? quot[k - 2] : 0);
  }
  const int shift = (p - 1) * (q - 1) / 2;
  BracketPoly out;
  for (int k = 0; k < p + q - 1; ++k) out.add_term(quot[k], -4 * (k + shift));
  return out;
}

inline BracketPoly right_trefoil() { return torus_jones(2, 3); }
inline BracketPoly left_trefoil() { return right_trefoil().mirrored(); }

}  // namespace oracle
