#include "nsem/semantics.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "walker.hpp"

namespace nsem {

namespace {

void check_intervention(const Signature& sig, std::span<const VarValue> iv) {
  for (const auto& [var, value] : iv) {
    if (var >= sig.size()) throw Error("intervention on an unknown variable");
    if (sig.is_exogenous(var)) throw Error("cannot intervene on exogenous variable " + sig.name(var));
    if (value >= sig.range_size(var)) {
      throw Error("value " + std::to_string(value) + " is not in the range of " + sig.name(var));
    }
  }
}

// Dedupe for formula validation: a short list for the common small formula,
// a hash set once it grows.
class Seen {
 public:
  bool insert(const void* p) {
    if (many_.empty()) {
      if (std::find(few_.begin(), few_.begin() + count_, p) != few_.begin() + count_) return false;
      if (count_ < few_.size()) {
        few_[count_++] = p;
        return true;
      }
      many_.insert(few_.begin(), few_.end());
    }
    return many_.insert(p).second;
  }

 private:
  std::array<const void*, 32> few_;
  std::size_t count_ = 0;
  std::unordered_set<const void*> many_;
};

// Shared subformulas are checked once. Only inner nodes are remembered.
void check_basic(const Signature& sig, const BasicFormula& f, Seen& seen) {
  if (!f->kids.empty() && !seen.insert(f.get())) return;
  if (f->op == Op::Leaf) {
    const auto& [var, value] = f->leaf;
    if (var >= sig.size()) throw Error("atom mentions an unknown variable");
    if (sig.is_exogenous(var)) throw Error("exogenous variable " + sig.name(var) + " cannot appear in formulas");
    if (value >= sig.range_size(var)) {
      throw Error("value " + std::to_string(value) + " is not in the range of " + sig.name(var));
    }
  }
  for (const auto& k : f->kids) check_basic(sig, k, seen);
}

void check_causal(const Signature& sig, const CausalFormula& f, Seen& seen) {
  if (!f->kids.empty() && !seen.insert(f.get())) return;
  if (f->op == Op::Leaf) {
    const auto& m = f->leaf;
    for (const auto& t : m.targets) {
      if (t.values.empty()) throw Error("empty value set for " + sig.name(t.var));
      for (ValueId x : t.values) {
        VarValue point{t.var, x};
        check_intervention(sig, std::span<const VarValue>(&point, 1));
      }
    }
    check_basic(sig, m.body, seen);
  }
  for (const auto& k : f->kids) check_causal(sig, k, seen);
}

// A walk of M_iv restricted to a context. The buffers are reused by later
// walks on the same thread.
struct Walk {
  detail::Overlay overlay{0};
  std::vector<ValueId> fixed;

  static Walk& prepare(const Signature& sig, const Intervention& iv, const std::optional<Assignment>& context) {
    check_intervention(sig, iv.entries());
    thread_local Walk walk;
    walk.overlay.reset(sig.size());
    for (const auto& [var, value] : iv.entries()) walk.overlay.forced[var] = value;
    walk.fixed.assign(sig.size(), kNone);
    if (context) {
      check_assignment(sig, *context, sig.exogenous(), "context");
      for (const auto& [var, value] : context->entries()) walk.fixed[var] = value;
    }
    return walk;
  }
};

}  // namespace

std::string describe(const Signature& sig, const Level& level) {
  struct {
    const Signature& sig;
    std::string operator()(const WorldLevel& l) const { return "world " + format_world(sig, l.world); }
    std::string operator()(const ContextLevel& l) const { return "context " + format_assignment(sig, l.context); }
    std::string operator()(const StateLevel& l) const { return "state " + format_assignment(sig, l.state); }
    std::string operator()(const ModelLevel&) const { return "model"; }
  } visitor{sig};
  return std::visit(visitor, level);
}

Model actualized_refinement(const Model& m, const World& w) {
  const auto& sig = m.signature();
  check_world(sig, w);
  if (!is_solution(m, w)) throw SettingError("world " + format_world(sig, w) + " is not a solution");
  auto equations = m.equations();
  for (auto& eq : equations) eq.rows[m.row_of(eq.child, w.values())] = {w[eq.child]};
  return Model(m.signature_ptr(), m.graph(), std::move(equations));
}

Model intervene(const Model& m, const Intervention& iv) {
  const auto& sig = m.signature();
  check_intervention(sig, iv.entries());
  CausalGraph graph = m.graph();
  auto equations = m.equations();
  for (const auto& [var, value] : iv.entries()) {
    graph.remove_incoming(var);
    for (auto& eq : equations) {
      if (eq.child == var) eq = EquationTable{var, {}, {{value}}};
    }
  }
  return Model(m.signature_ptr(), std::move(graph), std::move(equations));
}

std::vector<World> solutions_under(const Model& m, const Intervention& iv,
                                   const std::optional<Assignment>& context) {
  const auto& sig = m.signature();
  auto& walk = Walk::prepare(sig, iv, context);
  std::vector<World> out;
  detail::walk_solutions(m, &walk.overlay, walk.fixed.data(), [&](std::span<const ValueId> w) {
    out.emplace_back(std::vector<ValueId>(w.begin(), w.end()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool interventionist_oracle(const Model& m, const Intervention& iv, const BasicFormula& phi,
                            const std::optional<Assignment>& context) {
  const auto& sig = m.signature();
  auto& walk = Walk::prepare(sig, iv, context);
  bool holds = true;
  detail::walk_solutions(m, &walk.overlay, walk.fixed.data(), [&](std::span<const ValueId> w) {
    holds = eval_basic(phi, w);
    return holds;
  });
  return holds;
}

void check_formula(const Signature& sig, const CausalFormula& f) {
  Seen seen;
  check_causal(sig, f, seen);
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(Model m)
    : model_(std::move(m)),
      codec_(&model_.codec()),
      solutions_(enumerate_solutions(model_)),
      overlay_(std::make_unique<detail::Overlay>(model_.signature().size())),
      fixed_(model_.signature().size(), kNone) {
  const auto& sig = model_.signature();
  codes_.reserve(solutions_.size());
  for (const auto& w : solutions_) codes_.push_back(codec_->encode(w.values()));

  // Partial interventions pack into one integer: digit value+1, 0 for absent.
  key_mult_.assign(sig.size(), 0);
  std::uint64_t mult = 1;
  for (VarId v = 0; v < sig.size(); ++v) {
    key_mult_[v] = mult;
    std::uint64_t radix = sig.range_size(v) + 1;
    if (mult > std::numeric_limits<std::uint64_t>::max() / radix) {
      packable_ = false;
      break;
    }
    mult *= radix;
  }

  auto group = [&](std::unordered_map<std::uint64_t, std::size_t>& index, std::span<const VarId> vars) {
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
      std::uint64_t code = 0;
      for (VarId v : vars) code += solutions_[i][v] * codec_->stride(v);
      auto [it, fresh] = index.try_emplace(code, groups_.size());
      if (fresh) groups_.emplace_back();
      groups_[it->second].push_back(i);
    }
  };
  group(context_group_, sig.exogenous());
  group(state_group_, sig.endogenous());
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

std::optional<std::size_t> Evaluator::solution_index(const World& w) const {
  auto it = std::lower_bound(solutions_.begin(), solutions_.end(), w);
  if (it == solutions_.end() || *it != w) return std::nullopt;
  return static_cast<std::size_t>(it - solutions_.begin());
}

Evaluator::Scope Evaluator::scope_of(const Level& level) {
  const auto& sig = model_.signature();
  Scope scope;
  if (const auto* l = std::get_if<WorldLevel>(&level)) {
    check_world(sig, l->world);
    auto index = solution_index(l->world);
    if (!index) throw SettingError("world " + format_world(sig, l->world) + " is not a solution");
    scope.is_world = true;
    scope.single = *index;
    scope.key = *index * 4;
  } else if (const auto* l = std::get_if<ContextLevel>(&level)) {
    check_assignment(sig, l->context, sig.exogenous(), "context");
    std::uint64_t code = 0;
    for (const auto& [var, value] : l->context.entries()) code += value * codec_->stride(var);
    // Every context of a total acyclic model has a solution.
    std::size_t g = context_group_.at(code);
    scope.indices = &groups_[g];
    scope.key = g * 4 + 1;
  } else if (const auto* l = std::get_if<StateLevel>(&level)) {
    check_assignment(sig, l->state, sig.endogenous(), "state");
    std::uint64_t code = 0;
    for (const auto& [var, value] : l->state.entries()) code += value * codec_->stride(var);
    auto it = state_group_.find(code);
    if (it == state_group_.end()) {
      throw SettingError("state " + format_assignment(sig, l->state) + " belongs to no solution");
    }
    scope.indices = &groups_[it->second];
    scope.key = it->second * 4 + 2;
  } else {
    scope.key = 3;
  }
  return scope;
}

bool Evaluator::satisfies(const Level& level, const CausalFormula& f) {
  check_formula(model_.signature(), f);
  return eval(f, scope_of(level));
}

bool Evaluator::eval(const CausalFormula& f, const Scope& scope) {
  constexpr std::size_t kWide = 16;
  std::pair<const void*, std::uint64_t> memo_key{f.get(), scope.key};
  if (f->kids.size() >= kWide) {
    auto it = wide_memo_.find(memo_key);
    if (it != wide_memo_.end()) return it->second;
  }
  bool result = false;
  switch (f->op) {
    case Op::True:
      result = true;
      break;
    case Op::False:
      result = false;
      break;
    case Op::Leaf:
      result = eval_leaf(f->leaf, scope);
      break;
    case Op::Not:
      result = !eval(f->kids[0], scope);
      break;
    case Op::And:
      result = std::all_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval(k, scope); });
      break;
    case Op::Or:
      result = std::any_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval(k, scope); });
      break;
    case Op::Implies:
      result = !eval(f->kids[0], scope) || eval(f->kids[1], scope);
      break;
  }
  if (f->kids.size() >= kWide) {
    wide_memo_.emplace(memo_key, result);
    keep_alive_.push_back(f);
  }
  return result;
}

bool Evaluator::eval_leaf(const Modal& m, const Scope& scope) {
  if (m.kind == ModalKind::Plain) {
    auto holds = [&](std::size_t s) { return eval_code(m.body, codes_[s]); };
    if (scope.is_world) return holds(scope.single);
    if (scope.indices != nullptr) return std::all_of(scope.indices->begin(), scope.indices->end(), holds);
    for (std::size_t s = 0; s < codes_.size(); ++s) {
      if (!holds(s)) return false;
    }
    return true;
  }
  // A set intervention stands for the conjunction (box) or disjunction
  // (diamond) of its point instances.
  bool want = m.kind == ModalKind::Box;
  detail::Small<std::size_t> index(m.targets.size(), 0);
  detail::Small<VarValue> point(m.targets.size());
  while (true) {
    for (std::size_t i = 0; i < m.targets.size(); ++i) point[i] = {m.targets[i].var, m.targets[i].values[index[i]]};
    if (eval_point(m.kind, {point.data(), point.size()}, m.body, scope) != want) return !want;
    std::size_t i = m.targets.size();
    while (i > 0 && ++index[i - 1] == m.targets[i - 1].values.size()) index[--i] = 0;
    if (i == 0) break;
  }
  return want;
}

bool Evaluator::eval_point(ModalKind kind, std::span<const VarValue> iv, const BasicFormula& body,
                           const Scope& scope) {
  Entry& entry = entry_for(iv);
  // Box: every scope world, every counterfactual world. Diamond, as the
  // negated box of the negation: some scope world, some counterfactual world.
  bool box = kind == ModalKind::Box;
  auto at = [&](std::size_t s) {
    const auto& worlds = worlds_for(entry, s);
    if (box) return std::all_of(worlds.begin(), worlds.end(), [&](auto c) { return eval_code(body, c); });
    return std::any_of(worlds.begin(), worlds.end(), [&](auto c) { return eval_code(body, c); });
  };
  if (scope.is_world) return at(scope.single);
  if (scope.indices != nullptr) {
    return box ? std::all_of(scope.indices->begin(), scope.indices->end(), at)
               : std::any_of(scope.indices->begin(), scope.indices->end(), at);
  }
  for (std::size_t s = 0; s < codes_.size(); ++s) {
    if (at(s) != box) return !box;
  }
  return box;
}

Evaluator::Entry& Evaluator::entry_for(std::span<const VarValue> iv) {
  Entry* entry = nullptr;
  if (packable_) {
    std::uint64_t key = 0;
    for (const auto& [var, value] : iv) key += (value + 1) * key_mult_[var];
    entry = &entries_[key];
  } else {
    entry = &wide_entries_[std::vector<VarValue>(iv.begin(), iv.end())];
  }
  if (entry->done.empty() && !solutions_.empty()) {
    entry->iv.assign(iv.begin(), iv.end());
    entry->worlds.resize(solutions_.size());
    entry->done.assign(solutions_.size(), 0);
  }
  return *entry;
}

const std::vector<std::uint64_t>& Evaluator::worlds_for(Entry& entry, std::size_t solution) {
  if (entry.done[solution] != 0) return entry.worlds[solution];
  const auto& sig = model_.signature();
  const World& w = solutions_[solution];
  auto& overlay = *overlay_;
  for (const auto& [var, value] : entry.iv) overlay.forced[var] = value;
  for (VarId x : sig.endogenous()) {
    overlay.pinned_row[x] = model_.row_of(x, w.values());
    overlay.pinned_value[x] = w[x];
  }
  for (VarId u : sig.exogenous()) fixed_[u] = w[u];

  auto& out = entry.worlds[solution];
  detail::walk_solutions(model_, &overlay, fixed_.data(),
                         [&](std::span<const ValueId> v) { out.push_back(codec_->encode(v)); });
  std::sort(out.begin(), out.end());

  for (const auto& [var, value] : entry.iv) overlay.forced[var] = kNone;
  entry.done[solution] = 1;
  return out;
}

bool Evaluator::eval_code(const BasicFormula& f, std::uint64_t code) const {
  switch (f->op) {
    case Op::Leaf:
      return codec_->value(code, f->leaf.var) == f->leaf.value;
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Not:
      return !eval_code(f->kids[0], code);
    case Op::And:
      return std::all_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval_code(k, code); });
    case Op::Or:
      return std::any_of(f->kids.begin(), f->kids.end(), [&](const auto& k) { return eval_code(k, code); });
    case Op::Implies:
      return !eval_code(f->kids[0], code) || eval_code(f->kids[1], code);
  }
  return false;
}

std::vector<World> Evaluator::counterfactual_worlds(const World& w, const Intervention& iv) {
  const auto& sig = model_.signature();
  check_world(sig, w);
  check_intervention(sig, iv.entries());
  auto index = solution_index(w);
  if (!index) throw SettingError("world " + format_world(sig, w) + " is not a solution");
  std::vector<VarValue> point(iv.entries().begin(), iv.entries().end());
  std::vector<World> out;
  for (auto code : worlds_for(entry_for(point), *index)) out.push_back(codec_->decode(code));
  return out;
}

bool satisfies(const Model& m, const Level& level, const CausalFormula& f) {
  check_formula(m.signature(), f);
  Evaluator evaluator(m);
  return evaluator.satisfies(level, f);
}

}  // namespace nsem
