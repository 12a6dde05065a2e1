#include "nsem/probabilistic.hpp"

#include <algorithm>
#include <functional>

#include "checks.hpp"

namespace nsem {

namespace {

Distribution point(std::size_t range, ValueId value) {
  Distribution d(range, Rational(0));
  d[value] = 1;
  return d;
}

void check_point_intervention(const Signature& sig, const Intervention& iv) {
  for (const auto& [var, value] : iv.entries()) {
    if (var >= sig.size()) throw Error("intervention on an unknown variable");
    if (sig.is_exogenous(var)) throw Error("cannot intervene on exogenous variable " + sig.name(var));
    if (value >= sig.range_size(var)) {
      throw Error("value " + std::to_string(value) + " is not in the range of " + sig.name(var));
    }
  }
}

void require_solution(const PModel& m, const World& w) {
  if (!is_solution_p(m, w)) {
    throw SettingError("world " + format_world(m.signature(), w) + " has probability 0");
  }
}

}  // namespace

ValidationReport check_pmodel(const Signature& sig, const CausalGraph& graph,
                              const std::vector<ConditionalTable>& tables, bool exogenous_support) {
  ValidationReport report;
  auto& out = report.violations;
  if (!detail::check_graph(sig, graph, out)) return report;
  std::vector<int> seen(sig.size(), 0);
  for (const auto& t : tables) {
    if (t.child >= sig.size()) {
      out.push_back("table for unknown variable id " + std::to_string(t.child));
      continue;
    }
    const auto& name = sig.name(t.child);
    if (seen[t.child]++ > 0) {
      out.push_back("duplicate table for " + name);
      continue;
    }
    if (t.parents != graph.parents(t.child)) {
      out.push_back("parents of the table for " + name + " do not match the graph");
      continue;
    }
    std::size_t expected = row_count(sig, t.parents);
    if (t.rows.size() != expected) {
      out.push_back("table for " + name + " has " + std::to_string(t.rows.size()) + " rows, expected " +
                    std::to_string(expected));
      continue;
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      std::string where = name + " at " + format_row(sig, t.parents, r);
      if (row.size() != sig.range_size(t.child)) {
        out.push_back("distribution for " + where + " does not cover the range");
        continue;
      }
      Rational total = 0;
      bool bad = false;
      for (const auto& p : row) {
        if (p < 0 || p > 1) bad = true;
        total += p;
      }
      if (bad) out.push_back("probability outside [0,1] in the distribution for " + where);
      if (total != 1) out.push_back("distribution for " + where + " sums to " + format_rational(total) + ", expected 1");
      if (exogenous_support && sig.is_exogenous(t.child) &&
          std::any_of(row.begin(), row.end(), [](const Rational& p) { return p <= 0; })) {
        out.push_back("exogenous variable " + name + " must give every value positive probability");
      }
    }
  }
  for (VarId v = 0; v < sig.size(); ++v) {
    if (seen[v] == 0) out.push_back("missing table for " + sig.name(v));
  }
  return report;
}

PModel::PModel(std::shared_ptr<const Signature> sig, CausalGraph graph, std::vector<ConditionalTable> tables,
               bool exogenous_support)
    : sig_(std::move(sig)), graph_(std::move(graph)) {
  auto report = check_pmodel(*sig_, graph_, tables, exogenous_support);
  if (!report.valid()) throw ValidationError(std::move(report));
  tables_.resize(sig_->size());
  for (auto& t : tables) tables_[t.child] = std::move(t);
  order_ = *graph_.topological_order();
}

std::size_t PModel::row_of(VarId x, std::span<const ValueId> world) const {
  const auto& t = tables_[x];
  std::size_t row = 0;
  for (VarId p : t.parents) row = row * sig_->range_size(p) + world[p];
  return row;
}

bool operator==(const PModel& a, const PModel& b) {
  return *a.sig_ == *b.sig_ && a.graph_ == b.graph_ && a.tables_ == b.tables_;
}

CBN::CBN(PModel model) : model_(std::move(model)) {
  if (!model_.signature().exogenous().empty()) throw StructureError("a causal Bayesian network has no exogenous variables");
}

Rational joint_probability(const PModel& m, const World& w) {
  check_world(m.signature(), w);
  Rational p = 1;
  for (VarId x : m.order()) {
    p *= m.probability(x, w.values());
    if (p == 0) break;
  }
  return p;
}

bool is_solution_p(const PModel& m, const World& w) { return joint_probability(m, w) > 0; }

WorldDistribution joint_distribution(const PModel& m) {
  const auto& sig = m.signature();
  auto order = m.order();
  WorldDistribution out;
  std::vector<ValueId> world(sig.size(), 0);
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t i, const Rational& mass) {
    if (i == order.size()) {
      out.emplace_back(World(world), mass);
      return;
    }
    VarId x = order[i];
    const auto& row = m.table(x).rows[m.row_of(x, world)];
    for (ValueId v = 0; v < row.size(); ++v) {
      if (row[v] == 0) continue;
      world[x] = v;
      walk(i + 1, mass * row[v]);
    }
  };
  walk(0, Rational(1));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

CounterfactualDistribution state_marginal(const PModel& m) {
  CounterfactualDistribution out;
  for (const auto& [w, p] : joint_distribution(m)) out[state_of(m.signature(), w)] += p;
  return out;
}

Verdict consistent(const PModel& pm, const Model& m) {
  const auto& sig = pm.signature();
  if (!(sig == m.signature())) return {false, "the signatures differ"};
  if (!(pm.graph() == m.graph())) return {false, "the graphs differ"};
  for (VarId x : sig.endogenous()) {
    const auto& rows = pm.table(x).rows;
    const auto& eq = m.equation(x);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (ValueId v = 0; v < rows[r].size(); ++v) {
        bool positive = rows[r][v] > 0;
        bool allowed = std::binary_search(eq.rows[r].begin(), eq.rows[r].end(), v);
        if (positive != allowed) {
          return {false, "support mismatch for " + sig.name(x) + "=" + format_label(sig.label(x, v)) + " at " +
                             format_row(sig, eq.parents, r)};
        }
      }
    }
  }
  return {true, {}};
}

Model support_nsem(const PModel& pm) {
  const auto& sig = pm.signature();
  std::vector<EquationTable> equations;
  for (VarId x : sig.endogenous()) {
    const auto& t = pm.table(x);
    EquationTable eq{x, t.parents, {}};
    for (const auto& row : t.rows) {
      ValueSet support;
      for (ValueId v = 0; v < row.size(); ++v) {
        if (row[v] > 0) support.push_back(v);
      }
      eq.rows.push_back(std::move(support));
    }
    equations.push_back(std::move(eq));
  }
  return Model(pm.signature_ptr(), pm.graph(), std::move(equations));
}

PModel actualized_refinement_p(const PModel& m, const World& w) {
  require_solution(m, w);
  const auto& sig = m.signature();
  auto tables = m.tables();
  for (auto& t : tables) t.rows[m.row_of(t.child, w.values())] = point(sig.range_size(t.child), w[t.child]);
  return PModel(m.signature_ptr(), m.graph(), std::move(tables), false);
}

PModel intervene_p(const PModel& m, const Intervention& iv) {
  const auto& sig = m.signature();
  check_point_intervention(sig, iv);
  auto graph = m.graph();
  auto tables = m.tables();
  for (const auto& [var, value] : iv.entries()) {
    graph.remove_incoming(var);
    tables[var] = ConditionalTable{var, {}, {point(sig.range_size(var), value)}};
  }
  return PModel(m.signature_ptr(), std::move(graph), std::move(tables), false);
}

CounterfactualDistribution counterfactual_distribution(const PModel& m, const World& w, const Intervention& iv) {
  check_point_intervention(m.signature(), iv);
  auto target = intervene_p(actualized_refinement_p(m, w), iv);
  CounterfactualDistribution out;
  for (const auto& [world, p] : joint_distribution(target)) out[state_of(m.signature(), world)] += p;
  return out;
}

Rational counterfactual_probability(const PModel& m, const World& w, const Intervention& iv,
                                    const BasicFormula& phi) {
  Rational total = 0;
  for (const auto& [state, p] : counterfactual_distribution(m, w, iv)) {
    if (eval_basic(state, phi)) total += p;
  }
  return total;
}

bool satisfies_p(const PModel& m, const World& w, const ProbFormula& f) {
  require_solution(m, w);
  std::map<Intervention, CounterfactualDistribution> cache;
  std::function<bool(const ProbFormula&)> eval = [&](const ProbFormula& g) -> bool {
    switch (g->op) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::Not:
        return !eval(g->kids[0]);
      case Op::And:
        return std::all_of(g->kids.begin(), g->kids.end(), eval);
      case Op::Or:
        return std::any_of(g->kids.begin(), g->kids.end(), eval);
      case Op::Implies:
        return !eval(g->kids[0]) || eval(g->kids[1]);
      case Op::Leaf:
        break;
    }
    const auto& a = g->leaf;
    if (!a.counterfactual) {
      bool holds = eval_basic(a.body, w.values());
      return (a.p == 1 && holds) || (a.p == 0 && !holds);
    }
    auto it = cache.find(a.iv);
    if (it == cache.end()) it = cache.emplace(a.iv, counterfactual_distribution(m, w, a.iv)).first;
    Rational total = 0;
    for (const auto& [state, p] : it->second) {
      if (eval_basic(state, a.body)) total += p;
    }
    return total == a.p;
  };
  return eval(f);
}

CBN induce_cbn(const PModel& m) {
  const auto& sig = m.signature();
  for (VarId u : sig.exogenous()) {
    std::vector<VarId> endo_children;
    for (VarId c : m.graph().children(u)) {
      if (sig.is_endogenous(c)) endo_children.push_back(c);
    }
    if (endo_children.size() > 1) {
      throw StructureError("exogenous variable " + sig.name(u) + " is a parent of both " +
                           sig.name(endo_children[0]) + " and " + sig.name(endo_children[1]));
    }
  }
  auto endo_sig = std::make_shared<const Signature>(sig.endogenous_only());
  auto new_id = [&](VarId old) { return *endo_sig->find(sig.name(old)); };

  CausalGraph graph(endo_sig->size());
  std::vector<ConditionalTable> tables;
  std::vector<ValueId> world(sig.size(), 0);
  for (VarId x : sig.endogenous()) {
    std::vector<VarId> endo_parents;
    std::vector<VarId> exo_parents;
    for (VarId p : m.graph().parents(x)) (sig.is_exogenous(p) ? exo_parents : endo_parents).push_back(p);
    ConditionalTable t{new_id(x), {}, {}};
    for (VarId p : endo_parents) {
      graph.add_edge(new_id(p), t.child);
      t.parents.push_back(new_id(p));
    }
    std::sort(t.parents.begin(), t.parents.end());
    // Rows follow the new parent order; fill the old world accordingly.
    std::vector<VarId> old_parents;
    for (VarId np : t.parents) old_parents.push_back(*sig.find(endo_sig->name(np)));
    std::size_t rows = row_count(*endo_sig, t.parents);
    for (std::size_t r = 0; r < rows; ++r) {
      auto key = row_key(*endo_sig, t.parents, r);
      for (std::size_t i = 0; i < old_parents.size(); ++i) world[old_parents[i]] = key[i];
      Distribution d(sig.range_size(x), Rational(0));
      std::size_t combos = row_count(sig, exo_parents);
      for (std::size_t c = 0; c < combos; ++c) {
        auto exo_key = row_key(sig, exo_parents, c);
        Rational weight = 1;
        for (std::size_t i = 0; i < exo_parents.size(); ++i) {
          world[exo_parents[i]] = exo_key[i];
          weight *= m.probability(exo_parents[i], world);
        }
        if (weight == 0) continue;
        const auto& row = m.table(x).rows[m.row_of(x, world)];
        for (ValueId v = 0; v < row.size(); ++v) d[v] += weight * row[v];
      }
      t.rows.push_back(std::move(d));
    }
    tables.push_back(std::move(t));
  }
  return CBN(PModel(endo_sig, std::move(graph), std::move(tables)));
}

CounterfactualDistribution cbn_counterfactual(const CBN& c, const Assignment& state, const Intervention& iv) {
  const auto& m = c.model();
  const auto& sig = m.signature();
  check_assignment(sig, state, sig.endogenous(), "state");
  check_point_intervention(sig, iv);
  std::vector<ValueId> actual(sig.size(), 0);
  for (const auto& [var, value] : state.entries()) actual[var] = value;
  if (joint_probability(m, World(actual)) == 0) {
    throw SettingError("state " + format_assignment(sig, state) + " is outside the support");
  }
  std::vector<std::size_t> actual_row(sig.size());
  for (VarId x = 0; x < sig.size(); ++x) actual_row[x] = m.row_of(x, actual);

  // Enumerate every state and multiply the factors of the product formula.
  CounterfactualDistribution out;
  std::vector<ValueId> v(sig.size(), 0);
  while (true) {
    Rational p = 1;
    for (VarId x = 0; x < sig.size() && p != 0; ++x) {
      if (auto forced = iv.get(x)) {
        p *= (v[x] == *forced) ? 1 : 0;
      } else if (m.row_of(x, v) == actual_row[x]) {
        p *= (v[x] == actual[x]) ? 1 : 0;
      } else {
        p *= m.probability(x, v);
      }
    }
    if (p != 0) {
      std::vector<VarValue> entries;
      for (VarId x = 0; x < sig.size(); ++x) entries.push_back({x, v[x]});
      out.emplace(Assignment(std::move(entries)), p);
    }
    std::size_t i = sig.size();
    while (i > 0 && ++v[i - 1] == sig.range_size(i - 1)) v[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

PModel random_pmodel(std::uint64_t seed, const RandomPModelConfig& config) {
  Rng rng(seed);
  auto [sig, drawn] = random_structure(rng, config.structure);
  CausalGraph graph(sig->size());
  std::vector<bool> used(sig->size(), false);
  for (auto [p, c] : drawn.edges()) {
    if (config.exclusive_exogenous && sig->is_exogenous(p)) {
      if (used[p]) continue;
      used[p] = true;
    }
    graph.add_edge(p, c);
  }
  auto weights = [&](const std::vector<ValueId>& support, std::size_t range) {
    Distribution d(range, Rational(0));
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      w.push_back(rng.between(1, config.max_weight));
      total += w.back();
    }
    for (std::size_t i = 0; i < support.size(); ++i) d[support[i]] = Rational(w[i], total);
    return d;
  };
  std::vector<ConditionalTable> tables;
  for (VarId x = 0; x < sig->size(); ++x) {
    ConditionalTable t{x, graph.parents(x), {}};
    std::size_t range = sig->range_size(x);
    std::size_t rows = row_count(*sig, t.parents);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<ValueId> support;
      if (sig->is_exogenous(x)) {
        for (ValueId v = 0; v < range; ++v) support.push_back(v);
      } else if (range >= 2 && rng.chance(config.structure.nondeterminism)) {
        while (support.size() < 2) {
          support.clear();
          for (ValueId v = 0; v < range; ++v) {
            if (rng.chance(0.5)) support.push_back(v);
          }
        }
      } else {
        support.push_back(rng.below(range));
      }
      t.rows.push_back(weights(support, range));
    }
    tables.push_back(std::move(t));
  }
  return PModel(sig, std::move(graph), std::move(tables));
}

}  // namespace nsem
