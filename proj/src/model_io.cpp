#include "nsem/model_io.hpp"

#include <algorithm>
#include <fstream>

#include "json_read.hpp"

namespace nsem {

namespace detail {

std::string json_label(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw FormatError(where + ": value labels must be strings or integers");
}

const json& require_member(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object()) throw FormatError(where + ": expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(where + ": missing key '" + key + "'");
  return *it;
}

namespace {

std::vector<Variable> read_variables(const json& doc, const char* key) {
  std::vector<Variable> out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  if (!it->is_object()) throw FormatError(std::string(key) + ": expected an object of name -> values");
  for (const auto& [name, values] : it->items()) {
    if (!values.is_array()) throw FormatError(std::string(key) + "." + name + ": expected a list of values");
    Variable var;
    var.name = name;
    for (const auto& v : values) var.range.push_back(json_label(v, std::string(key) + "." + name));
    out.push_back(std::move(var));
  }
  return out;
}

}  // namespace

std::shared_ptr<const Signature> read_signature(const json& doc, ValidationReport& report) {
  if (!doc.is_object()) throw FormatError("model document must be a JSON object");
  auto exo = read_variables(doc, "exogenous");
  auto endo = read_variables(doc, "endogenous");
  for (const auto& u : exo) {
    for (const auto& v : endo) {
      if (u.name == v.name) {
        report.violations.push_back("variable " + u.name + " is both exogenous and endogenous");
        return nullptr;
      }
    }
  }
  try {
    return std::make_shared<const Signature>(std::move(exo), std::move(endo));
  } catch (const SignatureError& e) {
    report.violations.emplace_back(e.what());
    return nullptr;
  }
}

CausalGraph read_edges(const json& doc, const Signature& sig, ValidationReport& report) {
  CausalGraph graph(sig.size());
  auto it = doc.find("edges");
  if (it == doc.end()) return graph;
  if (!it->is_array()) throw FormatError("edges: expected a list of [parent, child] pairs");
  for (const auto& edge : *it) {
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() || !edge[1].is_string()) {
      throw FormatError("edges: each edge must be a [parent, child] pair of names");
    }
    auto p = sig.find(edge[0].get<std::string>());
    auto c = sig.find(edge[1].get<std::string>());
    if (!p || !c) {
      report.violations.push_back("edge mentions unknown variable " +
                                  (p ? edge[1] : edge[0]).get<std::string>());
      continue;
    }
    graph.add_edge(*p, *c);
  }
  return graph;
}

std::optional<std::size_t> read_when(const json& when, const Signature& sig,
                                     const std::vector<VarId>& parents, const std::string& child,
                                     ValidationReport& report) {
  if (!when.is_object()) throw FormatError(child + ": 'when' must be an object or \"default\"");
  std::vector<ValueId> key(parents.size(), kNone);
  bool ok = true;
  for (const auto& [name, label_json] : when.items()) {
    auto label = json_label(label_json, child + ".when." + name);
    auto var = sig.find(name);
    auto pos = var ? std::find(parents.begin(), parents.end(), *var) : parents.end();
    if (pos == parents.end()) {
      report.violations.push_back("row of " + child + " assigns " + name + ", which is not a parent");
      ok = false;
      continue;
    }
    auto value = sig.find_value(*var, label);
    if (!value) {
      report.violations.push_back("row of " + child + " uses value " + label + " outside the range of " + name);
      ok = false;
      continue;
    }
    key[pos - parents.begin()] = *value;
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (key[i] == kNone) {
      report.violations.push_back("row of " + child + " does not assign parent " + sig.name(parents[i]));
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  std::size_t row = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) row = row * sig.range_size(parents[i]) + key[i];
  return row;
}

void write_signature(const Signature& sig, json& doc) {
  json exo = json::object();
  json endo = json::object();
  for (VarId v = 0; v < sig.size(); ++v) {
    json range = json::array();
    for (const auto& label : sig.variable(v).range) range.push_back(label_to_json(label));
    (sig.is_exogenous(v) ? exo : endo)[sig.name(v)] = std::move(range);
  }
  doc["exogenous"] = std::move(exo);
  doc["endogenous"] = std::move(endo);
}

void write_edges(const CausalGraph& graph, const Signature& sig, json& doc) {
  json edges = json::array();
  for (auto [p, c] : graph.edges()) edges.push_back({sig.name(p), sig.name(c)});
  doc["edges"] = std::move(edges);
}

json when_to_json(const Signature& sig, const std::vector<VarId>& parents, std::size_t row) {
  json when = json::object();
  auto key = row_key(sig, parents, row);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    when[sig.name(parents[i])] = label_to_json(sig.label(parents[i], key[i]));
  }
  return when;
}

}  // namespace detail

using detail::json;

json label_to_json(const std::string& label) {
  if (!label.empty() && label.size() < 18 && format_label(label) == label) {
    long long n = std::stoll(label);
    if (std::to_string(n) == label) return n;
  }
  return label;
}

ValidationReport validate_model(const ModelParts& parts) {
  return check_model(*parts.signature, parts.graph, parts.equations);
}

ModelDocument read_model_document(const json& doc) {
  ModelDocument out;
  auto sig = detail::read_signature(doc, out.report);
  if (!sig) return out;
  ModelParts parts{sig, detail::read_edges(doc, *sig, out.report), {}};

  auto eq_it = doc.find("equations");
  if (eq_it != doc.end() && !eq_it->is_object()) {
    throw FormatError("equations: expected an object of variable -> rows");
  }
  if (eq_it != doc.end()) {
    for (const auto& [name, rows_json] : eq_it->items()) {
      auto child = sig->find(name);
      if (!child) {
        out.report.violations.push_back("equation for unknown variable " + name);
        continue;
      }
      if (sig->is_exogenous(*child)) {
        out.report.violations.push_back("equation given for exogenous variable " + name);
        continue;
      }
      if (!rows_json.is_array()) throw FormatError("equations." + name + ": expected a list of rows");
      EquationTable eq{*child, parts.graph.parents(*child), {}};
      std::size_t n = row_count(*sig, eq.parents);
      eq.rows.assign(n, {});
      std::vector<bool> given(n, false);
      std::optional<ValueSet> fallback;
      for (const auto& entry : rows_json) {
        const auto& when = detail::require_member(entry, "when", "equations." + name);
        const auto& values = detail::require_member(entry, "values", "equations." + name);
        if (!values.is_array()) throw FormatError("equations." + name + ": 'values' must be a list");
        ValueSet set;
        for (const auto& v : values) {
          auto label = detail::json_label(v, "equations." + name);
          auto id = sig->find_value(*child, label);
          if (!id) {
            out.report.violations.push_back("range mismatch in equation for " + name + ": value " +
                                            label + " is not in its range");
            continue;
          }
          set.push_back(*id);
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (when.is_string() && when.get<std::string>() == "default") {
          if (fallback) out.report.violations.push_back("equation for " + name + " has two default rows");
          fallback = std::move(set);
          continue;
        }
        auto row = detail::read_when(when, *sig, eq.parents, name, out.report);
        if (!row) continue;
        if (given[*row]) {
          out.report.violations.push_back("duplicate row in equation for " + name + " at " +
                                          format_row(*sig, eq.parents, *row));
          continue;
        }
        given[*row] = true;
        eq.rows[*row] = std::move(set);
      }
      if (fallback) {
        for (std::size_t r = 0; r < n; ++r) {
          if (!given[r]) eq.rows[r] = *fallback;
        }
      }
      parts.equations.push_back(std::move(eq));
    }
  }
  auto structural = validate_model(parts);
  out.report.violations.insert(out.report.violations.end(), structural.violations.begin(),
                               structural.violations.end());
  out.parts = std::move(parts);
  return out;
}

Model model_from_json(const json& doc) {
  auto loaded = read_model_document(doc);
  if (!loaded.report.valid()) throw ValidationError(std::move(loaded.report));
  auto& parts = *loaded.parts;
  return Model(parts.signature, std::move(parts.graph), std::move(parts.equations));
}

json model_to_json(const Model& m) {
  const auto& sig = m.signature();
  json doc = json::object();
  detail::write_signature(sig, doc);
  detail::write_edges(m.graph(), sig, doc);
  json equations = json::object();
  for (VarId x : sig.endogenous()) {
    const auto& eq = m.equation(x);
    json rows = json::array();
    for (std::size_t r = 0; r < eq.rows.size(); ++r) {
      json values = json::array();
      for (ValueId v : eq.rows[r]) values.push_back(label_to_json(sig.label(x, v)));
      rows.push_back({{"when", detail::when_to_json(sig, eq.parents, r)}, {"values", std::move(values)}});
    }
    equations[sig.name(x)] = std::move(rows);
  }
  doc["equations"] = std::move(equations);
  return doc;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

Model load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

}  // namespace nsem
