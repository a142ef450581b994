#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ndg/distributions.hpp"
#include "ndg/error.hpp"

// Text format:
//   {"components": [
//     {"kind": "segment", "p0": [x, y], "p1": [x, y], "weight": w},
//     {"kind": "arc", "center": [x, y], "radius": r, "angle_start": deg, "angle_end": deg, "weight": w},
//     {"kind": "multiarc", "arcs": [{"center": .., "radius": .., "angle_start": .., "angle_end": ..}, ..], "weight": w},
//     {"kind": "box", "x": [x0, x1], "y": [y0, y1], "weight": w},
//     {"kind": "cantor_product", "depth": k, "weight": w},
//     {"kind": "shifted_gaussian_line", "shift": s, "weight": w}
//   ]}
// Every component may carry an optional "label" string. Unknown kinds are rejected.
namespace ndg {

namespace detail {

using nlohmann::json;

inline json point_json(const Point& p) { return json::array({p.x, p.y}); }

inline json arc_json(const Arc& a) {
  return json{{"center", point_json(a.center)}, {"radius", a.radius}, {"angle_start", a.angle_start},
              {"angle_end", a.angle_end}};
}

inline Point point_from(const json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::ParseError, std::string(field) + " must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline Arc arc_from(const json& j) {
  return Arc{point_from(j, "center"), j.at("radius").get<double>(), j.at("angle_start").get<double>(),
             j.at("angle_end").get<double>()};
}

}  // namespace detail

inline nlohmann::json spec_to_json(const DistributionSpec& spec) {
  using nlohmann::json;
  json comps = json::array();
  for (const auto& wc : spec.components()) {
    json c = std::visit(
        [](const auto& comp) -> json {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, Segment>) {
            return {{"kind", "segment"}, {"p0", detail::point_json(comp.p0)}, {"p1", detail::point_json(comp.p1)}};
          } else if constexpr (std::is_same_v<T, Arc>) {
            json a = detail::arc_json(comp);
            a["kind"] = "arc";
            return a;
          } else if constexpr (std::is_same_v<T, MultiArc>) {
            json arcs = json::array();
            for (const auto& a : comp.arcs) arcs.push_back(detail::arc_json(a));
            return {{"kind", "multiarc"}, {"arcs", arcs}};
          } else if constexpr (std::is_same_v<T, Box>) {
            return {{"kind", "box"}, {"x", {comp.x0, comp.x1}}, {"y", {comp.y0, comp.y1}}};
          } else if constexpr (std::is_same_v<T, CantorProduct>) {
            return {{"kind", "cantor_product"}, {"depth", comp.depth}};
          } else {
            return {{"kind", "shifted_gaussian_line"}, {"shift", comp.shift}};
          }
        },
        wc.component);
    c["weight"] = wc.weight;
    if (!wc.label.empty()) c["label"] = wc.label;
    comps.push_back(std::move(c));
  }
  return json{{"components", comps}};
}

inline DistributionSpec spec_from_json(const nlohmann::json& j) {
  std::vector<WeightedComponent> comps;
  try {
    if (!j.is_object() || !j.contains("components") || !j.at("components").is_array())
      throw Error(ErrorCode::ParseError, "spec needs a \"components\" array");
    for (const auto& c : j.at("components")) {
      const auto kind = c.at("kind").get<std::string>();
      WeightedComponent wc;
      if (kind == "segment") {
        wc.component = Segment{detail::point_from(c, "p0"), detail::point_from(c, "p1")};
      } else if (kind == "arc") {
        wc.component = detail::arc_from(c);
      } else if (kind == "multiarc") {
        MultiArc m;
        for (const auto& a : c.at("arcs")) m.arcs.push_back(detail::arc_from(a));
        wc.component = std::move(m);
      } else if (kind == "box") {
        const auto x = c.at("x").get<std::vector<double>>();
        const auto y = c.at("y").get<std::vector<double>>();
        if (x.size() != 2 || y.size() != 2) throw Error(ErrorCode::ParseError, "box needs x and y intervals");
        wc.component = Box{x[0], x[1], y[0], y[1]};
      } else if (kind == "cantor_product") {
        wc.component = make_cantor_product(c.at("depth").get<int>());
      } else if (kind == "shifted_gaussian_line") {
        wc.component = ShiftedGaussianLine{c.at("shift").get<double>()};
      } else {
        throw Error(ErrorCode::ParseError, "unknown component kind \"" + kind + "\"");
      }
      wc.weight = c.at("weight").get<double>();
      if (c.contains("label")) wc.label = c.at("label").get<std::string>();
      comps.push_back(std::move(wc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return DistributionSpec(std::move(comps));
}

inline DistributionSpec spec_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return spec_from_json(j);
}

}  // namespace ndg
