#include "metachain/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "metachain/errors.hpp"

namespace metachain {

using ojson = nlohmann::ordered_json;

namespace {

Rational rational_field(const ojson& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  throw Error(ErrorCode::kParse, where + ": expected an exact rational string such as \"3/2\"");
}

std::string state_field(const ojson& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  throw Error(ErrorCode::kParse, where + ": state identifiers must be strings or integers");
}

const ojson& member(const ojson& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::kParse, where + ": missing \"" + key + "\"");
  return *it;
}

ojson quantity_json(const ScaledQuantity& q) {
  ojson j;
  j["coeff"] = format_rational(q.coeff());
  j["order"] = format_rational(q.order());
  return j;
}

ojson names_json(const Chain& chain, const std::vector<int>& set) {
  ojson a = ojson::array();
  for (int x : set) a.push_back(chain.name(x));
  return a;
}

ojson matrix_json(const std::vector<std::vector<Rational>>& m) {
  ojson a = ojson::array();
  for (const auto& row : m) {
    ojson r = ojson::array();
    for (const auto& v : row) r.push_back(format_rational(v));
    a.push_back(std::move(r));
  }
  return a;
}

const char* cross_check_name(CrossCheck c) {
  switch (c) {
    case CrossCheck::kExact: return "exact";
    case CrossCheck::kDisabled: return "disabled";
    case CrossCheck::kSkipped: return "skipped";
  }
  return "unknown";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string set_text(const Chain& chain, const std::vector<int>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i == 6 && set.size() > 7) {
      s += ",... (" + std::to_string(set.size()) + " states)";
      break;
    }
    s += (i ? "," : "") + chain.name(set[i]);
  }
  return s + "}";
}

std::string rational_text(const Rational& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

}  // namespace

ModelSpec parse_model(std::string_view json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("model is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "model must be a JSON object");
  ModelSpec spec;
  const auto& scales = member(j, "scales", "model");
  if (!scales.is_array()) throw Error(ErrorCode::kParse, "\"scales\" must be an array");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const std::string where = "scale " + std::to_string(i);
    const auto& s = scales[i];
    if (!s.is_object()) throw Error(ErrorCode::kParse, where + " must be an object");
    const auto& name = member(s, "name", where);
    if (!name.is_string()) throw Error(ErrorCode::kParse, where + ": name must be a string");
    spec.scales.push_back({name.get<std::string>(), rational_field(member(s, "exponent", where), where)});
  }
  const auto& states = member(j, "states", "model");
  if (!states.is_array()) throw Error(ErrorCode::kParse, "\"states\" must be an array");
  for (std::size_t i = 0; i < states.size(); ++i)
    spec.states.push_back(state_field(states[i], "state " + std::to_string(i)));
  const auto& edges = member(j, "edges", "model");
  if (!edges.is_array()) throw Error(ErrorCode::kParse, "\"edges\" must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    std::string where = "edge " + std::to_string(i);
    if (!e.is_object()) throw Error(ErrorCode::kParse, where + " must be an object");
    EdgeSpec es;
    es.from = state_field(member(e, "from", where), where);
    es.to = state_field(member(e, "to", where), where);
    where = "edge " + es.from + " -> " + es.to;
    es.coeff = rational_field(member(e, "coeff", where), where);
    const bool has_order = e.contains("order");
    const bool has_exp = e.contains("exponents");
    if (has_order == has_exp) throw Error(ErrorCode::kParse, where + ": give exactly one of \"order\" or \"exponents\"");
    if (has_order) {
      es.order = rational_field(e["order"], where);
    } else {
      const auto& ex = e["exponents"];
      if (!ex.is_array()) throw Error(ErrorCode::kParse, where + ": \"exponents\" must be an array");
      for (const auto& k : ex) {
        if (!k.is_number_integer()) throw Error(ErrorCode::kParse, where + ": exponents must be integers");
        es.exponents.push_back(rational_field(k, where));
      }
    }
    spec.edges.push_back(std::move(es));
  }
  return spec;
}

std::string serialize_model(const ModelSpec& spec) {
  ojson j;
  j["scales"] = ojson::array();
  for (const auto& s : spec.scales) {
    ojson o;
    o["name"] = s.name;
    o["exponent"] = format_rational(s.exponent);
    j["scales"].push_back(std::move(o));
  }
  j["states"] = spec.states;
  j["edges"] = ojson::array();
  for (const auto& e : spec.edges) {
    ojson o;
    o["from"] = e.from;
    o["to"] = e.to;
    o["coeff"] = format_rational(e.coeff);
    if (e.order) {
      o["order"] = format_rational(*e.order);
    } else {
      ojson ex = ojson::array();
      for (const auto& k : e.exponents) ex.push_back(ojson::parse(k.get_num().get_str()));
      o["exponents"] = std::move(ex);
    }
    j["edges"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::string fingerprint_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string report_json(const Chain& chain, const HierarchyReport& rep) {
  ojson j;
  j["format"] = "metachain-report";
  j["version"] = kReportVersion;
  j["fingerprint"] = fingerprint_hex(rep.fingerprint);
  j["states"] = chain.size();
  j["anchor"] = chain.name(rep.anchor);
  j["measure"] = "unnormalized, anchor has measure 1; only ratios are meaningful";
  j["harmonic_method"] = rep.method == HarmonicMethod::kTrace ? "trace" : "network";
  j["depth_count"] = rep.depth_count;
  j["levels"] = ojson::array();
  for (const auto& lv : rep.levels) {
    ojson l;
    l["level"] = lv.level;
    l["theta"] = quantity_json(lv.depths.theta);
    l["metastates"] = ojson::array();
    for (const auto& m : lv.metastates) l["metastates"].push_back(names_json(chain, m));
    l["delta"] = names_json(chain, lv.delta);
    if (!lv.parents.empty()) l["parents"] = lv.parents;
    l["measures"] = ojson::array();
    l["capacities"] = ojson::array();
    l["depths"] = ojson::array();
    for (std::size_t i = 0; i < lv.metastates.size(); ++i) {
      l["measures"].push_back(quantity_json(lv.depths.measure[i]));
      l["capacities"].push_back(quantity_json(lv.depths.capacity[i]));
      l["depths"].push_back(quantity_json(lv.depths.depths[i]));
    }
    l["active"] = lv.depths.active;
    l["lambda"] = ojson::array();
    for (const auto& v : lv.depths.lambda) l["lambda"].push_back(format_rational(v));
    l["p"] = matrix_json(lv.rates.p);
    l["rates"] = matrix_json(lv.rates.rates);
    l["cross_check"] = cross_check_name(lv.cross_check);
    j["levels"].push_back(std::move(l));
  }
  j["terminal"] = names_json(chain, rep.terminal);
  if (!rep.note.empty()) j["note"] = rep.note;
  return j.dump(2) + "\n";
}

std::string report_dot(const Chain& chain, const HierarchyReport& rep) {
  std::ostringstream o;
  for (const auto& lv : rep.levels) {
    o << "digraph level" << lv.level << " {\n";
    o << "  label=\"level " << lv.level << ": θ = " << dot_escape(to_label(lv.depths.theta)) << "\";\n";
    o << "  labelloc=t;\n  node [shape=ellipse];\n";
    for (std::size_t i = 0; i < lv.metastates.size(); ++i) {
      const bool active = std::find(lv.depths.active.begin(), lv.depths.active.end(), static_cast<int>(i)) !=
                          lv.depths.active.end();
      o << "  m" << i << " [label=\"E" << (i + 1) << " = " << dot_escape(set_text(chain, lv.metastates[i]))
        << "\\nμ = " << dot_escape(to_label(lv.depths.measure[i])) << "\\ndepth = "
        << dot_escape(to_label(lv.depths.depths[i])) << "\"" << (active ? ", penwidth=2" : "") << "];\n";
    }
    for (std::size_t i = 0; i < lv.metastates.size(); ++i)
      for (std::size_t j = 0; j < lv.metastates.size(); ++j)
        if (sgn(lv.rates.rates[i][j]) > 0)
          o << "  m" << i << " -> m" << j << " [label=\"" << rational_text(lv.rates.rates[i][j]) << "\"];\n";
    o << "}\n";
  }

  o << "digraph hierarchy {\n  rankdir=BT;\n  node [shape=box];\n";
  o << "  terminal [label=\"terminal " << dot_escape(set_text(chain, rep.terminal)) << "\", shape=doubleoctagon];\n";
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    const auto& lv = rep.levels[k];
    for (std::size_t i = 0; i < lv.metastates.size(); ++i)
      o << "  L" << lv.level << "_" << i << " [label=\"level " << lv.level << " E" << (i + 1) << "\\n"
        << dot_escape(set_text(chain, lv.metastates[i])) << "\"];\n";
  }
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    const auto& lv = rep.levels[k];
    for (std::size_t i = 0; i < lv.metastates.size(); ++i) {
      std::string parent;
      if (k + 1 < rep.levels.size()) {
        const auto& up = rep.levels[k + 1];
        for (std::size_t j = 0; j < up.parents.size(); ++j)
          if (std::find(up.parents[j].begin(), up.parents[j].end(), static_cast<int>(i)) != up.parents[j].end())
            parent = "L" + std::to_string(up.level) + "_" + std::to_string(j);
      } else if (std::includes(rep.terminal.begin(), rep.terminal.end(), lv.metastates[i].begin(),
                               lv.metastates[i].end())) {
        parent = "terminal";
      }
      if (parent.empty())
        o << "  L" << lv.level << "_" << i << " [style=dashed];\n";
      else
        o << "  L" << lv.level << "_" << i << " -> " << parent << ";\n";
    }
  }
  o << "}\n";
  return o.str();
}

}  // namespace metachain
