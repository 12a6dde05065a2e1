#include <algorithm>

#include "json_read.hpp"
#include "nsem/probabilistic.hpp"

namespace nsem {

using nlohmann::json;

namespace {

struct PModelDocument {
  std::shared_ptr<const Signature> signature;
  CausalGraph graph;
  std::vector<ConditionalTable> tables;
  ValidationReport report;
};

// Numbers are read from their JSON text so that 0.1 means 1/10, not the
// nearest double.
Rational read_prob(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
  throw FormatError(where + ": 'prob' must be a number or a string like \"3/5\"");
}

json prob_to_json(const Rational& p) {
  if (denominator(p) == 1) return static_cast<long long>(numerator(p));
  return format_rational(p);
}

PModelDocument read_document(const json& doc) {
  PModelDocument out;
  if (!doc.is_object()) throw FormatError("expected a JSON object");
  out.signature = detail::read_signature(doc, out.report);
  if (!out.signature) return out;
  const auto& sig = *out.signature;
  out.graph = detail::read_edges(doc, sig, out.report);

  const auto& cpt = detail::require_member(doc, "cpt", "model");
  if (!cpt.is_object()) throw FormatError("cpt: expected an object of variable -> rows");
  for (const auto& [name, rows_json] : cpt.items()) {
    auto child = sig.find(name);
    if (!child) {
      out.report.violations.push_back("table for unknown variable " + name);
      continue;
    }
    std::string where = "cpt." + name;
    if (!rows_json.is_array()) throw FormatError(where + ": expected a list of rows");
    ConditionalTable t{*child, out.graph.parents(*child), {}};
    std::size_t n = row_count(sig, t.parents);
    std::size_t range = sig.range_size(*child);
    t.rows.assign(n, {});
    std::optional<Distribution> fallback;
    for (const auto& entry : rows_json) {
      const auto& when = detail::require_member(entry, "when", where);
      const auto& dist = detail::require_member(entry, "dist", where);
      if (!dist.is_array()) throw FormatError(where + ": 'dist' must be a list");
      Distribution d(range, Rational(0));
      std::vector<bool> set(range, false);
      for (const auto& item : dist) {
        auto label = detail::json_label(detail::require_member(item, "value", where), where);
        auto p = read_prob(detail::require_member(item, "prob", where), where);
        auto id = sig.find_value(*child, label);
        if (!id) {
          out.report.violations.push_back("range mismatch in table for " + name + ": value " + label +
                                          " is not in its range");
          continue;
        }
        if (set[*id]) out.report.violations.push_back("value " + label + " listed twice in table for " + name);
        set[*id] = true;
        d[*id] = p;
      }
      if (when.is_string() && when.get<std::string>() == "default") {
        if (fallback) out.report.violations.push_back("table for " + name + " has two default rows");
        fallback = std::move(d);
        continue;
      }
      auto row = detail::read_when(when, sig, t.parents, name, out.report);
      if (!row) continue;
      if (!t.rows[*row].empty()) {
        out.report.violations.push_back("duplicate row in table for " + name + " at " +
                                        format_row(sig, t.parents, *row));
        continue;
      }
      t.rows[*row] = std::move(d);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (!t.rows[r].empty()) continue;
      if (fallback) {
        t.rows[r] = *fallback;
      } else {
        out.report.violations.push_back("missing row in table for " + name + " at " +
                                        format_row(sig, t.parents, r));
      }
    }
    out.tables.push_back(std::move(t));
  }
  if (out.report.valid()) {
    auto structural = check_pmodel(sig, out.graph, out.tables);
    out.report.violations = std::move(structural.violations);
  }
  return out;
}

}  // namespace

ValidationReport validate_pmodel_json(const json& doc) { return read_document(doc).report; }

PModel pmodel_from_json(const json& doc) {
  auto loaded = read_document(doc);
  if (!loaded.report.valid()) throw ValidationError(std::move(loaded.report));
  return PModel(loaded.signature, std::move(loaded.graph), std::move(loaded.tables));
}

json pmodel_to_json(const PModel& m) {
  const auto& sig = m.signature();
  json doc = json::object();
  detail::write_signature(sig, doc);
  detail::write_edges(m.graph(), sig, doc);
  json cpt = json::object();
  for (VarId x = 0; x < sig.size(); ++x) {
    const auto& t = m.table(x);
    json rows = json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      json dist = json::array();
      for (ValueId v = 0; v < t.rows[r].size(); ++v) {
        if (t.rows[r][v] == 0) continue;
        dist.push_back({{"value", label_to_json(sig.label(x, v))}, {"prob", prob_to_json(t.rows[r][v])}});
      }
      rows.push_back({{"when", detail::when_to_json(sig, t.parents, r)}, {"dist", std::move(dist)}});
    }
    cpt[sig.name(x)] = std::move(rows);
  }
  doc["cpt"] = std::move(cpt);
  return doc;
}

PModel load_pmodel(const std::string& path) { return pmodel_from_json(read_json_file(path)); }

json distribution_to_json(const Signature& sig, const CounterfactualDistribution& d) {
  json out = json::array();
  for (const auto& [state, p] : d) {
    json s = json::object();
    for (const auto& [var, value] : state.entries()) s[sig.name(var)] = label_to_json(sig.label(var, value));
    out.push_back({{"state", std::move(s)}, {"p", format_rational(p)}});
  }
  return out;
}

}  // namespace nsem
