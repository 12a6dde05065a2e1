#include "nsem/model.hpp"

#include <algorithm>
#include <limits>

#include "checks.hpp"
#include "walker.hpp"

namespace nsem {

std::size_t row_count(const Signature& sig, std::span<const VarId> parents) {
  std::size_t n = 1;
  for (VarId p : parents) n *= sig.range_size(p);
  return n;
}

std::vector<ValueId> row_key(const Signature& sig, std::span<const VarId> parents, std::size_t row) {
  std::vector<ValueId> key(parents.size());
  for (std::size_t i = parents.size(); i-- > 0;) {
    std::size_t r = sig.range_size(parents[i]);
    key[i] = row % r;
    row /= r;
  }
  return key;
}

std::string format_row(const Signature& sig, std::span<const VarId> parents, std::size_t row) {
  if (parents.empty()) return "()";
  auto key = row_key(sig, parents, row);
  std::string out;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (i > 0) out += ',';
    out += sig.name(parents[i]) + "=" + format_label(sig.label(parents[i], key[i]));
  }
  return out;
}

namespace {

std::string join_report(const ValidationReport& report) {
  std::string out = "invalid model";
  for (const auto& v : report.violations) out += "; " + v;
  return out;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(join_report(report)), report_(std::move(report)) {}

WorldCodec::WorldCodec(const Signature& sig) : stride_(sig.size()), radix_(sig.size()) {
  constexpr std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 2;
  for (std::size_t i = sig.size(); i-- > 0;) {
    radix_[i] = sig.range_size(i);
    stride_[i] = count_;
    if (count_ > limit / radix_[i]) throw Error("world space too large to encode");
    count_ *= radix_[i];
  }
}

std::uint64_t WorldCodec::encode(std::span<const ValueId> world) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < world.size(); ++i) code += world[i] * stride_[i];
  return code;
}

World WorldCodec::decode(std::uint64_t code) const {
  std::vector<ValueId> values(stride_.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = value(code, i);
  return World(std::move(values));
}

namespace detail {

bool check_graph(const Signature& sig, const CausalGraph& graph, std::vector<std::string>& out) {
  if (graph.size() != sig.size()) {
    out.push_back("graph has " + std::to_string(graph.size()) + " nodes but the signature has " +
                  std::to_string(sig.size()) + " variables");
    return false;
  }
  for (VarId u : sig.exogenous()) {
    for (VarId p : graph.parents(u)) {
      out.push_back("exogenous variable " + sig.name(u) + " has parent " + sig.name(p));
    }
  }
  if (auto cycle = graph.find_cycle(); !cycle.empty()) {
    std::string text = "cycle ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i > 0) text += " -> ";
      text += sig.name(cycle[i]);
    }
    out.push_back(text);
  }
  return true;
}

}  // namespace detail

ValidationReport check_model(const Signature& sig, const CausalGraph& graph,
                             const std::vector<EquationTable>& equations) {
  ValidationReport report;
  auto& out = report.violations;
  if (!detail::check_graph(sig, graph, out)) return report;

  std::vector<int> seen(sig.size(), 0);
  for (const auto& eq : equations) {
    if (eq.child >= sig.size()) {
      out.push_back("equation for unknown variable id " + std::to_string(eq.child));
      continue;
    }
    const auto& name = sig.name(eq.child);
    if (sig.is_exogenous(eq.child)) {
      out.push_back("equation given for exogenous variable " + name);
      continue;
    }
    if (seen[eq.child]++ > 0) {
      out.push_back("duplicate equation for " + name);
      continue;
    }
    if (eq.parents != graph.parents(eq.child)) {
      out.push_back("parents of the equation for " + name + " do not match the graph");
      continue;
    }
    std::size_t expected = row_count(sig, eq.parents);
    if (eq.rows.size() != expected) {
      out.push_back("equation for " + name + " has " + std::to_string(eq.rows.size()) +
                    " rows, expected " + std::to_string(expected));
      continue;
    }
    for (std::size_t r = 0; r < eq.rows.size(); ++r) {
      const auto& row = eq.rows[r];
      if (row.empty()) {
        out.push_back("non-total equation for " + name + " at " + format_row(sig, eq.parents, r));
      }
      for (ValueId x : row) {
        if (x >= sig.range_size(eq.child)) {
          out.push_back("range mismatch in equation for " + name + " at " +
                        format_row(sig, eq.parents, r));
          break;
        }
      }
    }
  }
  for (VarId x : sig.endogenous()) {
    if (seen[x] == 0) out.push_back("missing equation for " + sig.name(x));
  }
  return report;
}

Model::Model(std::shared_ptr<const Signature> sig, CausalGraph graph,
             std::vector<EquationTable> equations)
    : sig_(std::move(sig)), graph_(std::move(graph)) {
  for (auto& eq : equations) {
    for (auto& row : eq.rows) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
  }
  auto report = check_model(*sig_, graph_, equations);
  if (!report.valid()) throw ValidationError(std::move(report));

  tables_.resize(sig_->size());
  strides_.resize(sig_->size());
  for (auto& eq : equations) {
    auto& strides = strides_[eq.child];
    strides.assign(eq.parents.size(), 1);
    for (std::size_t i = eq.parents.size(); i-- > 1;) {
      strides[i - 1] = strides[i] * sig_->range_size(eq.parents[i]);
    }
    VarId child = eq.child;
    tables_[child] = std::move(eq);
  }
  auto topo = graph_.topological_order();
  for (VarId v : *topo) {
    if (sig_->is_endogenous(v)) order_.push_back(v);
  }
  try {
    codec_.emplace(*sig_);
  } catch (const Error&) {
    codec_.reset();
  }
}

const EquationTable& Model::equation(VarId x) const {
  if (x >= sig_->size() || sig_->is_exogenous(x)) {
    throw Error("no equation for variable id " + std::to_string(x));
  }
  return tables_[x];
}

std::vector<EquationTable> Model::equations() const {
  std::vector<EquationTable> out;
  for (VarId x : sig_->endogenous()) out.push_back(tables_[x]);
  return out;
}

const WorldCodec& Model::codec() const {
  if (!codec_) throw Error("world space too large to encode");
  return *codec_;
}

bool operator==(const Model& a, const Model& b) {
  return *a.sig_ == *b.sig_ && a.graph_ == b.graph_ && a.tables_ == b.tables_;
}

bool is_solution(const Model& m, const World& w) {
  check_world(m.signature(), w);
  for (VarId x : m.signature().endogenous()) {
    const auto& row = m.possible_values(x, w.values());
    if (!std::binary_search(row.begin(), row.end(), w[x])) return false;
  }
  return true;
}

std::vector<World> enumerate_solutions(const Model& m, const std::optional<Assignment>& context) {
  std::vector<ValueId> fixed;
  if (context) {
    check_assignment(m.signature(), *context, m.signature().exogenous(), "context");
    fixed.assign(m.signature().size(), kNone);
    for (const auto& e : context->entries()) fixed[e.var] = e.value;
  }
  std::vector<World> out;
  detail::walk_solutions(m, nullptr, context ? fixed.data() : nullptr, [&](std::span<const ValueId> w) {
    out.emplace_back(std::vector<ValueId>(w.begin(), w.end()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Assignment> enumerate_contexts(const Signature& sig) {
  std::vector<Assignment> out;
  auto exo = sig.exogenous();
  std::vector<VarValue> current;
  for (VarId u : exo) current.push_back({u, 0});
  while (true) {
    out.emplace_back(current);
    std::size_t i = current.size();
    while (i > 0) {
      --i;
      if (++current[i].value < sig.range_size(current[i].var)) break;
      current[i].value = 0;
      if (i == 0) return out;
    }
    if (current.empty()) return out;
  }
}

Verdict is_refinement(const Model& m2, const Model& m1) {
  if (!(m2.signature() == m1.signature())) return {false, "signatures differ"};
  if (!(m2.graph() == m1.graph())) return {false, "graphs differ"};
  const auto& sig = m1.signature();
  for (VarId x : sig.endogenous()) {
    const auto& a = m2.equation(x);
    const auto& b = m1.equation(x);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      if (!std::includes(b.rows[r].begin(), b.rows[r].end(), a.rows[r].begin(), a.rows[r].end())) {
        return {false, "row " + format_row(sig, a.parents, r) + " of " + sig.name(x) +
                           " is not a subset"};
      }
    }
  }
  return {true, {}};
}

bool is_deterministic(const Model& m) {
  for (VarId x : m.signature().endogenous()) {
    for (const auto& row : m.equation(x).rows) {
      if (row.size() != 1) return false;
    }
  }
  return true;
}

CausalGraph dependence_graph(const Model& m) {
  const auto& sig = m.signature();
  CausalGraph out(sig.size());
  for (VarId y : sig.endogenous()) {
    const auto& eq = m.equation(y);
    std::size_t stride = 1;
    for (std::size_t i = eq.parents.size(); i-- > 0;) {
      VarId x = eq.parents[i];
      std::size_t range = sig.range_size(x);
      bool depends = false;
      for (std::size_t r = 0; r < eq.rows.size() && !depends; ++r) {
        std::size_t xv = (r / stride) % range;
        if (xv != 0) continue;  // compare every value against the row with x = first value
        for (std::size_t v = 1; v < range; ++v) {
          if (eq.rows[r] != eq.rows[r + v * stride]) {
            depends = true;
            break;
          }
        }
      }
      if (depends) out.add_edge(x, y);
      stride *= range;
    }
  }
  return out;
}

}  // namespace nsem
