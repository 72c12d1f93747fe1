#pragma once

#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stickknot/bounds.hpp"
#include "stickknot/classifier.hpp"
#include "stickknot/identify.hpp"

namespace stickknot {

inline nlohmann::json to_json(const KnotId& id) {
  nlohmann::json j;
  j["name"] = id.name;
  j["label"] = id.label();
  j["chirality"] = std::string(to_string(id.chirality));
  j["mirror_ambiguous"] = id.mirror_ambiguous;
  j["factors"] = nlohmann::json::array();
  for (const auto& f : id.factors)
    j["factors"].push_back({{"name", f.name}, {"chirality", std::string(to_string(f.chirality))}});
  if (auto t = id.trefoil_counts()) j["trefoils"] = {{"left", t->first}, {"right", t->second}};
  return j;
}

inline nlohmann::json to_json(const BoundInterval& b) {
  nlohmann::json j;
  j["lower"] = b.lower ? nlohmann::json(*b.lower) : nlohmann::json(nullptr);
  j["upper"] = b.upper ? nlohmann::json(*b.upper) : nlohmann::json(nullptr);
  j["exact"] = b.exact();
  j["provenance"] = nlohmann::json::array();
  for (const auto& e : b.provenance)
    j["provenance"].push_back({{"side", e.side == BoundEntry::Side::Lower ? "lower" : "upper"},
                               {"value", e.value},
                               {"source", e.source},
                               {"strict", e.strict},
                               {"detail", e.detail}});
  return j;
}

inline nlohmann::json to_json(const BoundReport& r) {
  return {{"knot", r.knot.to_string()},
          {"planar", to_json(r.planar)},
          {"spherical", to_json(r.spherical)},
          {"missing", r.missing}};
}

/// Aligned plain-text rendering of a bound report.
inline std::string to_text(const BoundReport& r) {
  std::ostringstream out;
  auto end = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("?"); };
  out << r.knot.to_string() << "\n";
  for (auto [title, iv] : {std::pair{"planar", &r.planar}, {"spherical", &r.spherical}}) {
    out << "  " << std::left << std::setw(10) << title << end(iv->lower) << " .. " << end(iv->upper)
        << (iv->exact() ? "  (exact)" : "") << "\n";
    for (const auto& e : iv->provenance)
      out << "    " << std::setw(6) << (e.side == BoundEntry::Side::Lower ? ">=" : "<=") << std::setw(4) << e.value
          << std::setw(20) << e.source << e.detail << "\n";
  }
  for (const auto& m : r.missing) out << "  missing: " << m << "\n";
  return out.str();
}

inline nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json j;
  j["circles"] = r.circles;
  j["loops"] = r.loops;
  j["diagrams"] = r.diagrams;
  j["unknots"] = r.unknots;
  j["unidentified"] = r.unidentified;
  j["max_crossings"] = r.max_crossings;
  j["crossing_bound_violations"] = r.crossing_bound_violations;
  j["complement_failures"] = r.complement_failures;
  j["complement_histogram"] = nlohmann::json::object();
  for (auto [n, c] : r.complement_histogram) j["complement_histogram"][std::to_string(n)] = c;
  j["crossing_histogram"] = nlohmann::json::object();
  for (auto [n, c] : r.crossing_histogram) j["crossing_histogram"][std::to_string(n)] = c;
  j["knots"] = nlohmann::json::array();
  for (const auto& [name, k] : r.knots) {
    nlohmann::json kj = to_json(k.id);
    kj["label"] = k.label;
    kj["diagrams"] = k.diagrams;
    kj["chiralities_seen"] = nlohmann::json::array();
    for (auto c : k.chiralities) kj["chiralities_seen"].push_back(std::string(to_string(c)));
    kj["witness"] = {{"loop", k.witness_loop}, {"mask", k.witness_mask}, {"pd", to_string(k.witness_pd)}};
    j["knots"].push_back(kj);
  }
  return j;
}

}  // namespace stickknot
