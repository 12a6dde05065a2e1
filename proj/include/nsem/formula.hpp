#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nsem/rational.hpp"
#include "nsem/signature.hpp"

namespace nsem {

enum class Op { Leaf, True, False, Not, And, Or, Implies };

/// Immutable Boolean expression over leaves of type L. And/Or are n-ary
/// with at least two children; Implies has exactly two.
template <class L>
struct Node {
  Op op = Op::True;
  L leaf{};
  std::vector<std::shared_ptr<const Node>> kids;
};

template <class L>
using Formula = std::shared_ptr<const Node<L>>;

template <class L>
Formula<L> make_leaf(L leaf) {
  return std::make_shared<const Node<L>>(Node<L>{Op::Leaf, std::move(leaf), {}});
}
template <class L>
Formula<L> make_true() {
  return std::make_shared<const Node<L>>(Node<L>{Op::True, {}, {}});
}
template <class L>
Formula<L> make_false() {
  return std::make_shared<const Node<L>>(Node<L>{Op::False, {}, {}});
}
template <class L>
Formula<L> make_not(Formula<L> f) {
  return std::make_shared<const Node<L>>(Node<L>{Op::Not, {}, {std::move(f)}});
}
/// Conjunction; the empty conjunction is true and a single conjunct is returned as is.
template <class L>
Formula<L> make_and(std::vector<Formula<L>> kids) {
  if (kids.empty()) return make_true<L>();
  if (kids.size() == 1) return kids.front();
  return std::make_shared<const Node<L>>(Node<L>{Op::And, {}, std::move(kids)});
}
/// Disjunction; the empty disjunction is false.
template <class L>
Formula<L> make_or(std::vector<Formula<L>> kids) {
  if (kids.empty()) return make_false<L>();
  if (kids.size() == 1) return kids.front();
  return std::make_shared<const Node<L>>(Node<L>{Op::Or, {}, std::move(kids)});
}
template <class L>
Formula<L> make_implies(Formula<L> a, Formula<L> b) {
  return std::make_shared<const Node<L>>(Node<L>{Op::Implies, {}, {std::move(a), std::move(b)}});
}

/// Structural equality.
template <class L>
bool same(const Formula<L>& a, const Formula<L>& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op || a->kids.size() != b->kids.size()) return false;
  if (a->op == Op::Leaf && !(a->leaf == b->leaf)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!same(a->kids[i], b->kids[i])) return false;
  }
  return true;
}

/// Basic formulas: Boolean combinations of atoms X=x over endogenous variables.
using BasicFormula = Formula<VarValue>;

inline BasicFormula atom(VarId var, ValueId value) { return make_leaf(VarValue{var, value}); }

/// Point interventions Y1<-y1,...,Yk<-yk, kept sorted by variable. The empty
/// intervention is [].
using Intervention = Assignment;

/// One component of a possibly disjunctive intervention: Y<-y or Y<-{y1,...}.
struct Target {
  VarId var = 0;
  std::vector<ValueId> values;  // sorted, nonempty
  bool is_set = false;          // written with braces, even if a singleton
  friend bool operator==(const Target&, const Target&) = default;
};

enum class ModalKind { Plain, Box, Diamond };

/// Leaf of a causal formula. Plain holds a basic formula written without a
/// modality; it is evaluated like [] applied to the whole basic formula.
struct Modal {
  ModalKind kind = ModalKind::Plain;
  std::vector<Target> targets;  // sorted by variable; empty for Plain
  BasicFormula body;

  [[nodiscard]] bool is_point() const;
  /// The point intervention; throws Error for set interventions.
  [[nodiscard]] Intervention intervention() const;
  friend bool operator==(const Modal& a, const Modal& b) {
    return a.kind == b.kind && a.targets == b.targets && same(a.body, b.body);
  }
};

using CausalFormula = Formula<Modal>;

CausalFormula plain(BasicFormula body);
CausalFormula box(const Intervention& iv, BasicFormula body);
CausalFormula diamond(const Intervention& iv, BasicFormula body);
CausalFormula box_sets(std::vector<Target> targets, BasicFormula body);
CausalFormula diamond_sets(std::vector<Target> targets, BasicFormula body);

/// psi = p where psi is [iv]phi (counterfactual) or a basic formula phi.
struct ProbAssertion {
  bool counterfactual = false;
  Intervention iv;
  BasicFormula body;
  Rational p;
  friend bool operator==(const ProbAssertion& a, const ProbAssertion& b) {
    return a.counterfactual == b.counterfactual && a.iv == b.iv && same(a.body, b.body) && a.p == b.p;
  }
};

using ProbFormula = Formula<ProbAssertion>;

/// Evaluates a basic formula against a full world (only endogenous entries are read).
bool eval_basic(const BasicFormula& f, std::span<const ValueId> world);
/// Evaluates against a state over V. Throws MalformedAssignment if an atom's
/// variable is unassigned.
bool eval_basic(const Assignment& state, const BasicFormula& f);

/// True when the formula contains neither diamonds nor set interventions.
bool is_core(const CausalFormula& f);

/// <iv>phi becomes !([iv]!phi), everywhere.
CausalFormula desugar_diamond(const CausalFormula& f);
/// [Y<-S]phi becomes the conjunction over all point combinations, <Y<-S>phi
/// the disjunction. Throws Error on an empty set.
CausalFormula desugar_disjunctive(const CausalFormula& f);
/// Both passes: the result is core.
CausalFormula desugar(const CausalFormula& f);

std::string to_string(const Signature& sig, const BasicFormula& f);
std::string to_string(const Signature& sig, const CausalFormula& f);
std::string to_string(const Signature& sig, const ProbFormula& f);
std::string to_string(const Signature& sig, const Intervention& iv);

nlohmann::json to_json(const Signature& sig, const BasicFormula& f);
nlohmann::json to_json(const Signature& sig, const CausalFormula& f);
nlohmann::json to_json(const Signature& sig, const ProbFormula& f);
BasicFormula basic_from_json(const Signature& sig, const nlohmann::json& j);
CausalFormula causal_from_json(const Signature& sig, const nlohmann::json& j);
ProbFormula prob_from_json(const Signature& sig, const nlohmann::json& j);

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a causal formula, or a probabilistic one if it contains "= p".
std::variant<CausalFormula, ProbFormula> parse(std::string_view text, const Signature& sig);
CausalFormula parse_causal(std::string_view text, const Signature& sig);
ProbFormula parse_probabilistic(std::string_view text, const Signature& sig);
BasicFormula parse_basic(std::string_view text, const Signature& sig);
Intervention parse_intervention(std::string_view text, const Signature& sig);

}  // namespace nsem
