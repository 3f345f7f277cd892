#pragma once

#include <map>
#include <string>
#include <vector>

#include "mobiles/aux_poly.hpp"
#include "mobiles/gseries.hpp"
#include "mobiles/planar_map.hpp"

namespace mobiles {

enum class Occupancy { any, required, forbidden };

inline std::string to_string(Occupancy o) {
  switch (o) {
    case Occupancy::any: return "any";
    case Occupancy::required: return "required";
    case Occupancy::forbidden: return "forbidden";
  }
  return "any";
}

inline Occupancy parse_occupancy(const std::string& s) {
  if (s == "any") return Occupancy::any;
  if (s == "required") return Occupancy::required;
  if (s == "forbidden") return Occupancy::forbidden;
  fail(ErrorCode::invalid_input, "unknown occupancy constraint '" + s + "'");
}

/// A face type entering the equations: valence, particle charge and total weight g_k z_i.
struct FaceClass {
  int valence = 0;
  int charge = 0;
  AuxPoly weight;
};

/// Face weights, blocking weight, exclusion parameter and occupancy weights of a model.
struct ModelSpec {
  std::map<int, AuxPoly> white;  // valence -> g_k
  std::map<int, AuxPoly> black;  // valence -> g~_k
  AuxPoly y = AuxPoly::var("y");
  int p = 0;
  std::vector<AuxPoly> z;        // z_1..z_p
  BlockMode mode = BlockMode::directed;
  std::map<int, Occupancy> constraints;

  AuxPoly occupancy(int i) const {
    if (i == 0) return AuxPoly(1);
    if (i > int(z.size())) return AuxPoly::var("z" + std::to_string(i));
    return z[std::size_t(i - 1)];
  }

  void validate() const {
    if (p < 0) fail(ErrorCode::invalid_input, "exclusion parameter p must be non-negative");
    if (int(z.size()) > p) fail(ErrorCode::invalid_input, "more occupancy weights than p");
    for (const auto* side : {&white, &black})
      for (const auto& [k, w] : *side)
        if (k < 1) fail(ErrorCode::invalid_input, "face valence must be positive");
    if (mode == BlockMode::pairs && p != 0) fail(ErrorCode::invalid_input, "pairs blocking is only supported without particles");
  }

  /// Face classes of one color after applying occupancy constraints.
  std::vector<FaceClass> classes(Color c) const {
    const auto& side = c == Color::white ? white : black;
    std::vector<FaceClass> out;
    for (const auto& [k, w] : side) {
      if (w.is_zero()) continue;
      auto it = constraints.find(k);
      Occupancy occ = it == constraints.end() ? Occupancy::any : it->second;
      for (int i = 0; i <= p; ++i) {
        if (occ == Occupancy::required && i == 0) continue;
        if (occ == Occupancy::forbidden && i > 0) continue;
        out.push_back(FaceClass{k, i, w * occupancy(i)});
      }
    }
    return out;
  }

  int max_valence() const {
    int m = 1;
    for (const auto* side : {&white, &black})
      for (const auto& [k, w] : *side)
        if (!w.is_zero()) m = std::max(m, k);
    return m;
  }

  /// Marked edges between a white node of charge i and a black node of charge j.
  bool marking_allowed(int i, int j) const { return p == 0 || i + j > p; }
};

/// Grading of a solve: either the total face count or the exponent of one variable.
class Grading {
 public:
  explicit Grading(std::string var = "faces") : var_(std::move(var)) {}

  const std::string& var() const { return var_; }
  bool by_faces() const { return var_ == "faces"; }

  GSeries weight(const AuxPoly& w, int order) const {
    if (by_faces()) return GSeries::monomial(order, 1, w, var_);
    GSeries s(order, var_);
    unsigned d = w.degree(var_);
    for (unsigned e = 0; e <= d && int(e) <= order; ++e) s[int(e)] = w.coefficient(var_, e);
    return s;
  }

  /// Least grading carried by a weight.
  int increment(const AuxPoly& w) const {
    if (by_faces()) return 1;
    unsigned d = w.degree(var_);
    for (unsigned e = 0; e <= d; ++e)
      if (!w.coefficient(var_, e).is_zero()) return int(e);
    return 1 << 20;
  }

 private:
  std::string var_;
};

/// Grades by g when every white face carries g, which keeps the system contractive; faces otherwise.
inline Grading default_grading(const ModelSpec& spec) {
  Grading g("g");
  for (const auto& c : spec.classes(Color::white))
    if (g.increment(c.weight) < 1) return Grading("faces");
  return g;
}

}  // namespace mobiles
