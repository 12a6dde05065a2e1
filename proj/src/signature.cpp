#include "nsem/signature.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace nsem {

Signature::Signature(std::vector<Variable> exogenous, std::vector<Variable> endogenous) {
  for (auto& v : exogenous) v.kind = VarKind::Exogenous;
  for (auto& v : endogenous) v.kind = VarKind::Endogenous;
  vars_ = std::move(exogenous);
  vars_.insert(vars_.end(), std::make_move_iterator(endogenous.begin()),
               std::make_move_iterator(endogenous.end()));
  std::sort(vars_.begin(), vars_.end(),
            [](const Variable& a, const Variable& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& var = vars_[i];
    if (var.name.empty()) throw SignatureError("variable with empty name");
    if (i > 0 && vars_[i - 1].name == var.name) {
      throw SignatureError("variable " + var.name + " declared twice");
    }
    if (var.range.empty()) throw SignatureError("variable " + var.name + " has an empty range");
    std::set<std::string_view> seen;
    for (const auto& label : var.range) {
      if (!seen.insert(label).second) {
        throw SignatureError("variable " + var.name + " repeats value " + label);
      }
    }
    (var.kind == VarKind::Exogenous ? exogenous_ : endogenous_).push_back(i);
  }
}

std::optional<VarId> Signature::find(std::string_view name) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), name,
                             [](const Variable& v, std::string_view n) { return v.name < n; });
  if (it == vars_.end() || it->name != name) return std::nullopt;
  return static_cast<VarId>(it - vars_.begin());
}

std::optional<ValueId> Signature::find_value(VarId v, std::string_view label) const {
  const auto& range = vars_.at(v).range;
  auto it = std::find(range.begin(), range.end(), label);
  if (it == range.end()) return std::nullopt;
  return static_cast<ValueId>(it - range.begin());
}

Signature Signature::endogenous_only() const {
  std::vector<Variable> endo;
  for (VarId v : endogenous_) endo.push_back(vars_[v]);
  return Signature({}, std::move(endo));
}

bool operator==(const Signature& a, const Signature& b) {
  if (a.vars_.size() != b.vars_.size()) return false;
  for (std::size_t i = 0; i < a.vars_.size(); ++i) {
    const auto& x = a.vars_[i];
    const auto& y = b.vars_[i];
    if (x.name != y.name || x.kind != y.kind || x.range != y.range) return false;
  }
  return true;
}

Assignment::Assignment(std::vector<VarValue> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].var == entries_[i - 1].var) {
      throw MalformedAssignment("variable assigned twice");
    }
  }
}

std::optional<ValueId> Assignment::get(VarId v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const VarValue& e, VarId id) { return e.var < id; });
  if (it == entries_.end() || it->var != v) return std::nullopt;
  return it->value;
}

bool Assignment::agrees_with(const World& w) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](const VarValue& e) { return e.var < w.size() && w[e.var] == e.value; });
}

namespace {

Assignment restrict(const World& w, std::span<const VarId> vars) {
  std::vector<VarValue> out;
  out.reserve(vars.size());
  for (VarId v : vars) out.push_back({v, w[v]});
  return Assignment(std::move(out));
}

bool is_integer_label(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Assignment context_of(const Signature& sig, const World& w) { return restrict(w, sig.exogenous()); }
Assignment state_of(const Signature& sig, const World& w) { return restrict(w, sig.endogenous()); }

void check_world(const Signature& sig, const World& w) {
  if (w.size() != sig.size()) throw MalformedAssignment("world does not cover every variable");
  for (VarId v = 0; v < sig.size(); ++v) {
    if (w[v] >= sig.range_size(v)) {
      throw MalformedAssignment("value out of range for " + sig.name(v));
    }
  }
}

void check_assignment(const Signature& sig, const Assignment& a, std::span<const VarId> vars,
                      std::string_view what) {
  if (a.size() != vars.size()) {
    throw MalformedAssignment(std::string(what) + " must assign exactly " +
                              std::to_string(vars.size()) + " variable(s)");
  }
  for (VarId v : vars) {
    auto x = a.get(v);
    if (!x) throw MalformedAssignment(std::string(what) + " does not assign " + sig.name(v));
    if (*x >= sig.range_size(v)) throw MalformedAssignment("value out of range for " + sig.name(v));
  }
}

World make_world(const Signature& sig, const Assignment& context, const Assignment& state) {
  check_assignment(sig, context, sig.exogenous(), "context");
  check_assignment(sig, state, sig.endogenous(), "state");
  std::vector<ValueId> values(sig.size());
  for (const auto& e : context.entries()) values[e.var] = e.value;
  for (const auto& e : state.entries()) values[e.var] = e.value;
  return World(std::move(values));
}

std::string format_label(std::string_view label) {
  if (is_integer_label(label)) return std::string(label);
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_assignment(const Signature& sig, const Assignment& a) {
  std::string out;
  for (const auto& e : a.entries()) {
    if (!out.empty()) out += ',';
    out += sig.name(e.var);
    out += '=';
    out += format_label(sig.label(e.var, e.value));
  }
  return out;
}

std::string format_world(const Signature& sig, const World& w) {
  std::string out;
  for (VarId v = 0; v < w.size(); ++v) {
    if (v > 0) out += ',';
    out += sig.name(v);
    out += '=';
    out += format_label(sig.label(v, w[v]));
  }
  return out;
}

Assignment parse_assignment(const Signature& sig, std::string_view text) {
  std::vector<VarValue> entries;
  text = trim(text);
  if (text.empty()) return Assignment{};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = trim(text.substr(pos, comma - pos));
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw MalformedAssignment("expected Var=value, got '" + std::string(item) + "'");
    }
    std::string_view name = trim(item.substr(0, eq));
    std::string_view label = trim(item.substr(eq + 1));
    if (label.size() >= 2 && label.front() == '"' && label.back() == '"') {
      label = label.substr(1, label.size() - 2);
    }
    auto var = sig.find(name);
    if (!var) throw MalformedAssignment("unknown variable " + std::string(name));
    auto value = sig.find_value(*var, label);
    if (!value) {
      throw MalformedAssignment("value " + std::string(label) + " not in range of " +
                                std::string(name));
    }
    entries.push_back({*var, *value});
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return Assignment(std::move(entries));
}

}  // namespace nsem
