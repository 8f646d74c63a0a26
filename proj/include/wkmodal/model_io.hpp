#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "kripke.hpp"
#include "truth.hpp"

namespace wkmodal {

inline std::optional<Semantics> parse_semantics(std::string_view s) {
  if (s == "bochvar") return Semantics::bochvar;
  if (s == "pwk") return Semantics::pwk;
  return std::nullopt;
}

// {"worlds": [...], "edges": [[a, b], ...],
//  "valuation": {world: {var: "0"|"e"|"1"}}, "semantics": "bochvar"|"pwk"}
inline nlohmann::ordered_json model_to_json(const KripkeModel& m) {
  nlohmann::ordered_json j;
  j["worlds"] = m.frame().worlds();
  auto edges = nlohmann::ordered_json::array();
  for (auto [a, b] : m.frame().edges()) edges.push_back({m.frame().world(a), m.frame().world(b)});
  j["edges"] = std::move(edges);
  auto val = nlohmann::ordered_json::object();
  for (std::size_t w = 0; w < m.size(); ++w) {
    auto row = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < m.variables().size(); ++v)
      row[m.variables()[v]] = std::string(to_string(m.value(w, v)));
    val[m.frame().world(w)] = std::move(row);
  }
  j["valuation"] = std::move(val);
  j["semantics"] = std::string(to_string(m.semantics()));
  return j;
}

/// Reads a model. The declared variables are those mentioned anywhere in the
/// valuation; each must have a value at every world. `semantics` is
/// optional in the document and defaults to `fallback`.
inline KripkeModel model_from_json(const nlohmann::json& j, Semantics fallback = Semantics::bochvar) {
  try {
    if (!j.is_object()) throw FormatError("model must be an object");
    std::vector<std::string> worlds = j.at("worlds").get<std::vector<std::string>>();
    KripkeFrame frame(worlds);
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a pair of world ids");
        try {
          frame.relate(frame.index_of(e[0].get<std::string>()), frame.index_of(e[1].get<std::string>()));
        } catch (const EvalError& err) {
          throw FormatError(err.what());
        }
      }
    }
    Semantics sem = fallback;
    if (j.contains("semantics")) {
      auto s = parse_semantics(j.at("semantics").get<std::string>());
      if (!s) throw FormatError("semantics must be \"bochvar\" or \"pwk\"");
      sem = *s;
    }
    const auto& val = j.contains("valuation") ? j.at("valuation") : nlohmann::json::object();
    if (!val.is_object()) throw FormatError("valuation must be an object");
    std::set<std::string> vars;
    for (const auto& [world, row] : val.items()) {
      if (std::find(worlds.begin(), worlds.end(), world) == worlds.end())
        throw FormatError("valuation names unknown world '" + world + "'");
      if (!row.is_object()) throw FormatError("valuation of '" + world + "' must be an object");
      for (const auto& [var, value] : row.items()) vars.insert(var);
    }
    KripkeModel m(std::move(frame), {vars.begin(), vars.end()}, sem);
    for (std::size_t w = 0; w < worlds.size(); ++w) {
      for (std::size_t v = 0; v < m.variables().size(); ++v) {
        const auto& var = m.variables()[v];
        if (!val.contains(worlds[w]) || !val.at(worlds[w]).contains(var))
          throw FormatError("no value for '" + var + "' at world '" + worlds[w] + "'");
        auto t = parse_truth(val.at(worlds[w]).at(var).get<std::string>());
        if (!t) throw FormatError("bad truth value for '" + var + "' at world '" + worlds[w] + "'");
        m.set(w, v, *t);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  }
}

inline KripkeModel model_from_string(const std::string& text, Semantics fallback = Semantics::bochvar) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  }
  return model_from_json(j, fallback);
}

namespace detail {
inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + '"';
}
}  // namespace detail

/// Graphviz digraph. Worlds in frame order, edges in (source, target)
/// order; `highlight` gets a double border.
inline std::string export_dot(const KripkeModel& m, std::optional<std::size_t> highlight = std::nullopt) {
  std::ostringstream os;
  os << "digraph kripke {\n";
  os << "  node [shape=box];\n";
  for (std::size_t w = 0; w < m.size(); ++w) {
    std::string label = m.frame().world(w);
    for (std::size_t v = 0; v < m.variables().size(); ++v)
      label += (v == 0 ? "\\n" : ", ") + m.variables()[v] + "=" + std::string(to_string(m.value(w, v)));
    os << "  " << detail::dot_quote(m.frame().world(w)) << " [label=" << detail::dot_quote(label);
    if (highlight && *highlight == w) os << ", peripheries=2";
    os << "];\n";
  }
  for (auto [a, b] : m.frame().edges())
    os << "  " << detail::dot_quote(m.frame().world(a)) << " -> " << detail::dot_quote(m.frame().world(b)) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace wkmodal
