#include "nsem/formula.hpp"

#include <algorithm>
#include <unordered_map>

#include "nsem/model_io.hpp"

namespace nsem {

using nlohmann::json;

bool Modal::is_point() const {
  return std::all_of(targets.begin(), targets.end(),
                     [](const Target& t) { return !t.is_set && t.values.size() == 1; });
}

Intervention Modal::intervention() const {
  if (!is_point()) throw Error("set intervention where a point intervention is required");
  std::vector<VarValue> out;
  for (const auto& t : targets) out.push_back({t.var, t.values.front()});
  return Intervention(std::move(out));
}

namespace {

std::vector<Target> point_targets(const Intervention& iv) {
  std::vector<Target> out;
  for (const auto& e : iv.entries()) out.push_back({e.var, {e.value}, false});
  return out;
}

CausalFormula modal(ModalKind kind, std::vector<Target> targets, BasicFormula body) {
  std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) { return a.var < b.var; });
  for (std::size_t i = 1; i < targets.size(); ++i) {
    if (targets[i].var == targets[i - 1].var) throw Error("variable intervened on twice");
  }
  for (auto& t : targets) {
    std::sort(t.values.begin(), t.values.end());
    t.values.erase(std::unique(t.values.begin(), t.values.end()), t.values.end());
  }
  return make_leaf(Modal{kind, std::move(targets), std::move(body)});
}

}  // namespace

CausalFormula plain(BasicFormula body) { return make_leaf(Modal{ModalKind::Plain, {}, std::move(body)}); }
CausalFormula box(const Intervention& iv, BasicFormula body) {
  return modal(ModalKind::Box, point_targets(iv), std::move(body));
}
CausalFormula diamond(const Intervention& iv, BasicFormula body) {
  return modal(ModalKind::Diamond, point_targets(iv), std::move(body));
}
CausalFormula box_sets(std::vector<Target> targets, BasicFormula body) {
  return modal(ModalKind::Box, std::move(targets), std::move(body));
}
CausalFormula diamond_sets(std::vector<Target> targets, BasicFormula body) {
  return modal(ModalKind::Diamond, std::move(targets), std::move(body));
}

bool eval_basic(const BasicFormula& f, std::span<const ValueId> world) {
  switch (f->op) {
    case Op::Leaf:
      return world[f->leaf.var] == f->leaf.value;
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Not:
      return !eval_basic(f->kids[0], world);
    case Op::And:
      for (const auto& k : f->kids) {
        if (!eval_basic(k, world)) return false;
      }
      return true;
    case Op::Or:
      for (const auto& k : f->kids) {
        if (eval_basic(k, world)) return true;
      }
      return false;
    case Op::Implies:
      return !eval_basic(f->kids[0], world) || eval_basic(f->kids[1], world);
  }
  return false;
}

bool eval_basic(const Assignment& state, const BasicFormula& f) {
  switch (f->op) {
    case Op::Leaf: {
      auto v = state.get(f->leaf.var);
      if (!v) throw MalformedAssignment("state does not assign a variable used in the formula");
      return *v == f->leaf.value;
    }
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Not:
      return !eval_basic(state, f->kids[0]);
    case Op::And:
      return std::all_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval_basic(state, k); });
    case Op::Or:
      return std::any_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval_basic(state, k); });
    case Op::Implies:
      return !eval_basic(state, f->kids[0]) || eval_basic(state, f->kids[1]);
  }
  return false;
}

bool is_core(const CausalFormula& f) {
  if (f->op == Op::Leaf) return f->leaf.kind != ModalKind::Diamond && f->leaf.is_point();
  return std::all_of(f->kids.begin(), f->kids.end(), [](const auto& k) { return is_core(k); });
}

namespace {

/// Rebuilds a causal formula bottom-up, rewriting leaves and sharing
/// rewritten subterms between identical input nodes.
template <class Rewrite>
class LeafRewriter {
 public:
  explicit LeafRewriter(Rewrite rewrite) : rewrite_(std::move(rewrite)) {}

  CausalFormula operator()(const CausalFormula& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    CausalFormula out;
    if (f->op == Op::Leaf) {
      out = rewrite_(f);
    } else if (f->kids.empty()) {
      out = f;
    } else {
      bool changed = false;
      std::vector<CausalFormula> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) {
        kids.push_back((*this)(k));
        changed = changed || kids.back() != k;
      }
      out = changed ? std::make_shared<const Node<Modal>>(Node<Modal>{f->op, {}, std::move(kids)}) : f;
    }
    memo_.emplace(f.get(), out);
    return out;
  }

 private:
  Rewrite rewrite_;
  std::unordered_map<const Node<Modal>*, CausalFormula> memo_;
};

}  // namespace

CausalFormula desugar_diamond(const CausalFormula& f) {
  LeafRewriter rewriter([](const CausalFormula& leaf) -> CausalFormula {
    const auto& m = leaf->leaf;
    if (m.kind != ModalKind::Diamond) return leaf;
    return make_not(box_sets(m.targets, make_not(m.body)));
  });
  return rewriter(f);
}

CausalFormula desugar_disjunctive(const CausalFormula& f) {
  LeafRewriter rewriter([](const CausalFormula& leaf) -> CausalFormula {
    const auto& m = leaf->leaf;
    if (m.kind == ModalKind::Plain || m.is_point()) return leaf;
    for (const auto& t : m.targets) {
      if (t.values.empty()) throw Error("empty set in a disjunctive intervention");
    }
    std::vector<CausalFormula> parts;
    std::vector<std::size_t> index(m.targets.size(), 0);
    while (true) {
      std::vector<VarValue> point;
      for (std::size_t i = 0; i < m.targets.size(); ++i) point.push_back({m.targets[i].var, m.targets[i].values[index[i]]});
      parts.push_back(modal(m.kind, point_targets(Intervention(std::move(point))), m.body));
      std::size_t i = m.targets.size();
      while (i > 0 && ++index[i - 1] == m.targets[i - 1].values.size()) index[--i] = 0;
      if (i == 0) break;
    }
    return m.kind == ModalKind::Box ? make_and(std::move(parts)) : make_or(std::move(parts));
  });
  return rewriter(f);
}

CausalFormula desugar(const CausalFormula& f) {
  if (is_core(f)) return f;
  return desugar_diamond(desugar_disjunctive(f));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kTop = 0;
constexpr int kUnary = 4;

int precedence(Op op) {
  switch (op) {
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    default:
      return kUnary;
  }
}

bool is_simple(Op op) { return op == Op::Leaf || op == Op::True || op == Op::False; }

std::string atom_text(const Signature& sig, VarValue a) {
  return sig.name(a.var) + "=" + format_label(sig.label(a.var, a.value));
}

template <class L, class LeafPrinter>
std::string print(const Formula<L>& f, int context, const LeafPrinter& leaf) {
  std::string out;
  switch (f->op) {
    case Op::Leaf:
      return leaf(f->leaf, context);
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Not:
      out = "!" + print(f->kids[0], kUnary, leaf);
      break;
    case Op::And:
    case Op::Or: {
      const char* sep = f->op == Op::And ? " & " : " | ";
      int inner = precedence(f->op) + 1;
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i > 0) out += sep;
        out += print(f->kids[i], inner, leaf);
      }
      break;
    }
    case Op::Implies:
      out = print(f->kids[0], 2, leaf) + " -> " + print(f->kids[1], 1, leaf);
      break;
  }
  if (precedence(f->op) < context) return "(" + out + ")";
  return out;
}

std::string print_basic(const Signature& sig, const BasicFormula& f, int context) {
  return print(f, context, [&](VarValue a, int) { return atom_text(sig, a); });
}

std::string print_targets(const Signature& sig, const std::vector<Target>& targets) {
  std::string out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& t = targets[i];
    if (i > 0) out += ", ";
    out += sig.name(t.var) + "<-";
    if (t.is_set) {
      out += "{";
      for (std::size_t j = 0; j < t.values.size(); ++j) {
        if (j > 0) out += ",";
        out += format_label(sig.label(t.var, t.values[j]));
      }
      out += "}";
    } else {
      out += format_label(sig.label(t.var, t.values.front()));
    }
  }
  return out;
}

std::string print_modal(const Signature& sig, const Modal& m, int context) {
  if (m.kind == ModalKind::Plain) {
    if (context == kTop || is_simple(m.body->op)) return print_basic(sig, m.body, context);
    return "(" + print_basic(sig, m.body, kTop) + ")";
  }
  bool is_box = m.kind == ModalKind::Box;
  return (is_box ? "[" : "<") + print_targets(sig, m.targets) + (is_box ? "] " : "> ") +
         print_basic(sig, m.body, kUnary);
}

}  // namespace

std::string to_string(const Signature& sig, const BasicFormula& f) { return print_basic(sig, f, kTop); }

std::string to_string(const Signature& sig, const CausalFormula& f) {
  return print(f, kTop, [&](const Modal& m, int context) { return print_modal(sig, m, context); });
}

std::string to_string(const Signature& sig, const Intervention& iv) {
  std::string out;
  for (const auto& e : iv.entries()) {
    if (!out.empty()) out += ", ";
    out += sig.name(e.var) + "<-" + format_label(sig.label(e.var, e.value));
  }
  return out;
}

std::string to_string(const Signature& sig, const ProbFormula& f) {
  return print(f, kTop, [&](const ProbAssertion& a, int context) {
    std::string out;
    if (a.counterfactual) out = "[" + to_string(sig, a.iv) + "] ";
    out += print_basic(sig, a.body, kUnary) + " = " + format_rational(a.p);
    return context >= kUnary ? "(" + out + ")" : out;
  });
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::Leaf:
      return "leaf";
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Not:
      return "not";
    case Op::And:
      return "and";
    case Op::Or:
      return "or";
    case Op::Implies:
      return "implies";
  }
  return "?";
}

template <class L, class LeafWriter>
json write(const Formula<L>& f, const LeafWriter& leaf) {
  if (f->op == Op::Leaf) return leaf(f->leaf);
  json j = {{"op", op_name(f->op)}};
  if (f->op == Op::Not) {
    j["arg"] = write(f->kids[0], leaf);
  } else if (!f->kids.empty()) {
    json args = json::array();
    for (const auto& k : f->kids) args.push_back(write(k, leaf));
    j["args"] = std::move(args);
  }
  return j;
}

json label_json(const Signature& sig, VarId var, ValueId value) {
  return label_to_json(sig.label(var, value));
}

json intervention_json(const Signature& sig, const std::vector<Target>& targets) {
  json out = json::array();
  for (const auto& t : targets) {
    json item = {{"var", sig.name(t.var)}};
    if (t.is_set) {
      json values = json::array();
      for (ValueId v : t.values) values.push_back(label_json(sig, t.var, v));
      item["values"] = std::move(values);
    } else {
      item["value"] = label_json(sig, t.var, t.values.front());
    }
    out.push_back(std::move(item));
  }
  return out;
}

[[noreturn]] void bad_json(const std::string& what) { throw Error("malformed formula JSON: " + what); }

VarId json_var(const Signature& sig, const json& j) {
  if (!j.is_string()) bad_json("variable names must be strings");
  auto v = sig.find(j.get<std::string>());
  if (!v) bad_json("unknown variable " + j.get<std::string>());
  if (sig.is_exogenous(*v)) bad_json("exogenous variable " + j.get<std::string>());
  return *v;
}

ValueId json_value(const Signature& sig, VarId var, const json& j) {
  std::string label;
  if (j.is_string()) {
    label = j.get<std::string>();
  } else if (j.is_number_integer()) {
    label = std::to_string(j.get<long long>());
  } else {
    bad_json("values must be strings or integers");
  }
  auto v = sig.find_value(var, label);
  if (!v) bad_json("value " + label + " outside the range of " + sig.name(var));
  return *v;
}

std::vector<Target> json_targets(const Signature& sig, const json& j) {
  if (!j.is_array()) bad_json("intervention must be a list");
  std::vector<Target> out;
  for (const auto& item : j) {
    Target t;
    t.var = json_var(sig, item.at("var"));
    if (item.contains("values")) {
      t.is_set = true;
      for (const auto& v : item["values"]) t.values.push_back(json_value(sig, t.var, v));
      if (t.values.empty()) bad_json("empty value set");
    } else {
      t.values.push_back(json_value(sig, t.var, item.at("value")));
    }
    out.push_back(std::move(t));
  }
  return out;
}

template <class L, class LeafReader>
Formula<L> read(const json& j, const LeafReader& leaf) {
  if (!j.is_object() || !j.contains("op")) bad_json("expected an object with 'op'");
  auto op = j["op"].get<std::string>();
  if (op == "true") return make_true<L>();
  if (op == "false") return make_false<L>();
  if (op == "not") return make_not(read<L>(j.at("arg"), leaf));
  if (op == "and" || op == "or" || op == "implies") {
    std::vector<Formula<L>> kids;
    for (const auto& k : j.at("args")) kids.push_back(read<L>(k, leaf));
    if (op == "implies") {
      if (kids.size() != 2) bad_json("implies takes two arguments");
      return make_implies(kids[0], kids[1]);
    }
    if (kids.size() < 2) bad_json(op + " takes at least two arguments");
    return std::make_shared<const Node<L>>(Node<L>{op == "and" ? Op::And : Op::Or, {}, std::move(kids)});
  }
  return leaf(j, op);
}

}  // namespace

json to_json(const Signature& sig, const BasicFormula& f) {
  return write(f, [&](VarValue a) {
    return json{{"op", "atom"}, {"var", sig.name(a.var)}, {"value", label_json(sig, a.var, a.value)}};
  });
}

json to_json(const Signature& sig, const CausalFormula& f) {
  return write(f, [&](const Modal& m) {
    if (m.kind == ModalKind::Plain) return json{{"op", "plain"}, {"body", to_json(sig, m.body)}};
    return json{{"op", m.kind == ModalKind::Box ? "box" : "diamond"},
                {"intervention", intervention_json(sig, m.targets)},
                {"body", to_json(sig, m.body)}};
  });
}

json to_json(const Signature& sig, const ProbFormula& f) {
  return write(f, [&](const ProbAssertion& a) {
    json j = {{"op", "prob"}, {"body", to_json(sig, a.body)}, {"p", format_rational(a.p)}};
    if (a.counterfactual) j["intervention"] = intervention_json(sig, point_targets(a.iv));
    return j;
  });
}

BasicFormula basic_from_json(const Signature& sig, const json& j) {
  return read<VarValue>(j, [&](const json& node, const std::string& op) {
    if (op != "atom") bad_json("unexpected op " + op + " in a basic formula");
    VarId var = json_var(sig, node.at("var"));
    return atom(var, json_value(sig, var, node.at("value")));
  });
}

CausalFormula causal_from_json(const Signature& sig, const json& j) {
  return read<Modal>(j, [&](const json& node, const std::string& op) {
    if (op == "plain") return plain(basic_from_json(sig, node.at("body")));
    if (op != "box" && op != "diamond") bad_json("unexpected op " + op + " in a causal formula");
    auto kind = op == "box" ? ModalKind::Box : ModalKind::Diamond;
    return modal(kind, json_targets(sig, node.at("intervention")), basic_from_json(sig, node.at("body")));
  });
}

ProbFormula prob_from_json(const Signature& sig, const json& j) {
  return read<ProbAssertion>(j, [&](const json& node, const std::string& op) {
    if (op != "prob") bad_json("unexpected op " + op + " in a probabilistic formula");
    ProbAssertion a;
    a.body = basic_from_json(sig, node.at("body"));
    a.p = parse_rational(node.at("p").get<std::string>());
    if (node.contains("intervention")) {
      a.counterfactual = true;
      std::vector<VarValue> iv;
      for (const auto& t : json_targets(sig, node["intervention"])) {
        if (t.is_set) bad_json("set interventions are not allowed in probability assertions");
        iv.push_back({t.var, t.values.front()});
      }
      a.iv = Intervention(std::move(iv));
    }
    return make_leaf(std::move(a));
  });
}

}  // namespace nsem
