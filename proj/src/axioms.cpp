#include "nsem/axioms.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "nsem/model_io.hpp"

namespace nsem {

namespace {

constexpr std::array kAll{AxiomId::D0,  AxiomId::D1,  AxiomId::D2,    AxiomId::D3a,  AxiomId::D3b,
                          AxiomId::D4,  AxiomId::D5,  AxiomId::D6,    AxiomId::D6Box, AxiomId::D7,
                          AxiomId::D8,  AxiomId::D9,  AxiomId::D10a, AxiomId::D10b, AxiomId::D10c};
constexpr std::array kListed{AxiomId::D0, AxiomId::D1, AxiomId::D2, AxiomId::D3a, AxiomId::D3b, AxiomId::D4,
                             AxiomId::D5, AxiomId::D6, AxiomId::D7, AxiomId::D8,  AxiomId::D10a};

// ~> is expanded only for small signatures.
constexpr std::size_t kLeadsToMaxVars = 4;
constexpr std::size_t kLeadsToMaxRange = 3;
// Parts drawn for the propositional tautology schemas.
constexpr std::size_t kTautologyPool = 12;

std::string truncate(std::string s, std::size_t limit) {
  if (s.size() > limit) s = s.substr(0, limit) + " ...";
  return s;
}

bool contains(const Intervention& iv, VarId v) { return iv.get(v).has_value(); }

Intervention extend(const Intervention& iv, VarValue extra) {
  std::vector<VarValue> out(iv.entries().begin(), iv.entries().end());
  out.push_back(extra);
  std::sort(out.begin(), out.end());
  return Intervention(std::move(out));
}

BasicFormula conjunction(std::span<const VarValue> atoms) {
  std::vector<BasicFormula> kids;
  for (const auto& a : atoms) kids.push_back(atom(a.var, a.value));
  return make_and(std::move(kids));
}

// Every partial assignment over the endogenous variables allowed by `keep`,
// in canonical order (absent before every value, earlier variables vary slowest).
std::vector<Intervention> interventions(const Signature& sig, const std::vector<bool>& keep) {
  std::vector<VarId> vars;
  for (VarId v : sig.endogenous()) {
    if (keep[v]) vars.push_back(v);
  }
  std::vector<Intervention> out;
  std::vector<std::size_t> digit(vars.size(), 0);  // 0: absent, d: value d-1
  while (true) {
    std::vector<VarValue> entries;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (digit[i] > 0) entries.push_back({vars[i], digit[i] - 1});
    }
    out.emplace_back(std::move(entries));
    std::size_t i = vars.size();
    while (i > 0 && ++digit[i - 1] == sig.range_size(vars[i - 1]) + 1) digit[--i] = 0;
    if (i == 0) return out;
  }
}

std::vector<Intervention> interventions(const Signature& sig) {
  return interventions(sig, std::vector<bool>(sig.size(), true));
}

// Full assignments over `vars`, in lexicographic order.
std::vector<Assignment> assignments(const Signature& sig, const std::vector<VarId>& vars) {
  std::vector<Assignment> out;
  std::vector<ValueId> digit(vars.size(), 0);
  while (true) {
    std::vector<VarValue> entries;
    for (std::size_t i = 0; i < vars.size(); ++i) entries.push_back({vars[i], digit[i]});
    out.emplace_back(std::move(entries));
    std::size_t i = vars.size();
    while (i > 0 && ++digit[i - 1] == sig.range_size(vars[i - 1])) digit[--i] = 0;
    if (i == 0) return out;
  }
}

std::vector<BasicFormula> literal_pool(const Signature& sig) {
  std::vector<BasicFormula> out;
  for (VarId v : sig.endogenous()) {
    for (ValueId x = 0; x < sig.range_size(v); ++x) out.push_back(atom(v, x));
  }
  for (VarId v : sig.endogenous()) {
    for (ValueId x = 0; x < sig.range_size(v); ++x) out.push_back(make_not(atom(v, x)));
  }
  return out;
}

// true, literals, and conjunctions and disjunctions of two atoms over distinct variables.
std::vector<BasicFormula> phi_pool(const Signature& sig) {
  std::vector<BasicFormula> out{make_true<VarValue>()};
  auto literals = literal_pool(sig);
  out.insert(out.end(), literals.begin(), literals.end());
  auto endo = sig.endogenous();
  for (Op op : {Op::And, Op::Or}) {
    for (std::size_t i = 0; i < endo.size(); ++i) {
      for (std::size_t j = i + 1; j < endo.size(); ++j) {
        for (ValueId x = 0; x < sig.range_size(endo[i]); ++x) {
          for (ValueId y = 0; y < sig.range_size(endo[j]); ++y) {
            std::vector<BasicFormula> kids{atom(endo[i], x), atom(endo[j], y)};
            out.push_back(op == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids)));
          }
        }
      }
    }
  }
  return out;
}

template <class T>
std::vector<T> spread(const std::vector<T>& pool, std::size_t limit) {
  if (pool.size() <= limit) return pool;
  std::vector<T> out;
  for (std::size_t i = 0; i < limit; ++i) out.push_back(pool[i * pool.size() / limit]);
  return out;
}

// Causal parts for D0: boxes and diamonds of atoms under interventions on
// at most one variable.
std::vector<CausalFormula> causal_pool(const Signature& sig) {
  std::vector<CausalFormula> out;
  std::vector<Intervention> small;
  for (auto& iv : interventions(sig)) {
    if (iv.size() <= 1) small.push_back(std::move(iv));
  }
  for (VarId v : sig.endogenous()) {
    for (ValueId x = 0; x < sig.range_size(v); ++x) {
      for (const auto& iv : small) {
        out.push_back(box(iv, atom(v, x)));
        out.push_back(diamond(iv, atom(v, x)));
      }
    }
  }
  return spread(out, kTautologyPool);
}

bool small_enough_for_leads_to(const Signature& sig) {
  if (sig.endogenous().size() > kLeadsToMaxVars) return false;
  return std::all_of(sig.endogenous().begin(), sig.endogenous().end(),
                     [&](VarId v) { return sig.range_size(v) <= kLeadsToMaxRange; });
}

void require(bool condition, const std::string& message) {
  if (!condition) throw AxiomError(message);
}

void require_endogenous(const Signature& sig, VarId v, ValueId x) {
  require(v < sig.size() && sig.is_endogenous(v), "axiom parameter is not an endogenous variable");
  require(x < sig.range_size(v), "value " + std::to_string(x) + " is not in the range of " + sig.name(v));
}

void require_parts(std::size_t have, const char* what) {
  require(have == 3, std::string(what) + " needs three parts p, q, r");
}

}  // namespace

std::string axiom_name(AxiomId id) {
  switch (id) {
    case AxiomId::D0: return "D0";
    case AxiomId::D1: return "D1";
    case AxiomId::D2: return "D2";
    case AxiomId::D3a: return "D3a";
    case AxiomId::D3b: return "D3b";
    case AxiomId::D4: return "D4";
    case AxiomId::D5: return "D5";
    case AxiomId::D6: return "D6";
    case AxiomId::D6Box: return "D6box";
    case AxiomId::D7: return "D7";
    case AxiomId::D8: return "D8";
    case AxiomId::D9: return "D9";
    case AxiomId::D10a: return "D10a";
    case AxiomId::D10b: return "D10b";
    case AxiomId::D10c: return "D10c";
  }
  return "?";
}

std::optional<AxiomId> parse_axiom_id(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '(' || c == ')') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (AxiomId id : kAll) {
    std::string name = axiom_name(id);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == key) return id;
  }
  return std::nullopt;
}

std::span<const AxiomId> all_axioms() { return kAll; }
std::span<const AxiomId> listed_sound_axioms() { return kListed; }

std::string mode_name(Mode mode) { return mode == Mode::Counterfactual ? "counterfactual" : "interventionist"; }

bool claimed_sound(AxiomId id, Mode mode) {
  switch (id) {
    case AxiomId::D9:
    case AxiomId::D10b:
      return false;
    case AxiomId::D10c:
      return mode == Mode::Counterfactual;
    default:
      return true;
  }
}

std::string describe_params(const Signature& sig, AxiomId id, const AxiomParams& p) {
  std::ostringstream out;
  auto iv = [&] { out << "iv=" << to_string(sig, p.iv); };
  auto atom_text = [&](VarValue a) { return sig.name(a.var) + "=" + format_label(sig.label(a.var, a.value)); };
  switch (id) {
    case AxiomId::D0:
    case AxiomId::D8: {
      out << "template=" << p.tautology;
      if (id == AxiomId::D8) {
        out << " ";
        iv();
        for (const auto& part : p.basic_parts) out << " | " << to_string(sig, part);
      } else {
        for (const auto& part : p.parts) out << " | " << to_string(sig, part);
      }
      break;
    }
    case AxiomId::D1:
      iv();
      out << " x=" << atom_text(p.atoms.at(0)) << " x'=" << atom_text(p.atoms.at(1));
      break;
    case AxiomId::D2:
      iv();
      out << " X=" << sig.name(p.atoms.at(0).var);
      break;
    case AxiomId::D3a:
    case AxiomId::D3b:
      iv();
      out << " W=" << atom_text(p.atoms.at(0)) << " phi=" << to_string(sig, p.phi);
      break;
    case AxiomId::D5:
      iv();
      out << " W=" << atom_text(p.atoms.at(0)) << " Y=" << atom_text(p.atoms.at(1))
          << " Z=" << (p.rest.empty() ? "()" : format_assignment(sig, p.rest));
      break;
    case AxiomId::D6:
    case AxiomId::D6Box: {
      out << "chain=";
      for (std::size_t i = 0; i < p.chain.size(); ++i) out << (i ? " ~> " : "") << sig.name(p.chain[i]);
      break;
    }
    case AxiomId::D7:
      iv();
      out << " phi=" << to_string(sig, p.phi) << " psi=" << to_string(sig, p.psi);
      break;
    case AxiomId::D4:
    case AxiomId::D10a:
      iv();
      break;
    case AxiomId::D9:
    case AxiomId::D10b:
      iv();
      out << " phi=" << to_string(sig, p.phi);
      break;
    case AxiomId::D10c:
      out << "phi=" << to_string(sig, p.phi);
      break;
  }
  return out.str();
}

CausalFormula leads_to(const Signature& sig, VarId y, VarId z, bool boxes) {
  require_endogenous(sig, y, 0);
  require_endogenous(sig, z, 0);
  // Interventions on Y or Z cannot witness a change in Z: those disjuncts
  // are either ill-formed (Y twice) or contradictory (Z pinned), so they are left out.
  std::vector<bool> keep(sig.size(), true);
  keep[y] = false;
  keep[z] = false;
  auto modal = [&](const Intervention& iv, BasicFormula body) {
    return boxes ? box(iv, std::move(body)) : diamond(iv, std::move(body));
  };
  std::vector<CausalFormula> disjuncts;
  for (const auto& iv : interventions(sig, keep)) {
    for (ValueId yv = 0; yv < sig.range_size(y); ++yv) {
      auto with_y = extend(iv, {y, yv});
      for (ValueId a = 0; a < sig.range_size(z); ++a) {
        for (ValueId b = 0; b < sig.range_size(z); ++b) {
          if (a == b) continue;
          disjuncts.push_back(make_and<Modal>({modal(iv, atom(z, a)), modal(with_y, atom(z, b))}));
        }
      }
    }
  }
  return make_or(std::move(disjuncts));
}

CausalFormula instantiate(AxiomId id, const Signature& sig, const AxiomParams& p) {
  for (const auto& e : p.iv.entries()) require_endogenous(sig, e.var, e.value);
  for (const auto& e : p.atoms) require_endogenous(sig, e.var, e.value);
  const auto& iv = p.iv;
  auto need_phi = [&] { require(p.phi != nullptr, axiom_name(id) + " needs phi"); };
  switch (id) {
    case AxiomId::D0:
      require_parts(p.parts.size(), "D0");
      return tautology<Modal>(p.tautology, p.parts[0], p.parts[1], p.parts[2]);
    case AxiomId::D1: {
      require(p.atoms.size() == 2 && p.atoms[0].var == p.atoms[1].var, "D1 needs X=x and X=x' for one variable X");
      require(p.atoms[0].value != p.atoms[1].value, "D1 needs x != x'");
      auto x = p.atoms[0];
      auto x2 = p.atoms[1];
      return box(iv, make_implies(atom(x.var, x.value), make_not(atom(x2.var, x2.value))));
    }
    case AxiomId::D2: {
      require(p.atoms.size() == 1, "D2 needs one variable X");
      VarId x = p.atoms[0].var;
      std::vector<BasicFormula> kids;
      for (ValueId v = 0; v < sig.range_size(x); ++v) kids.push_back(atom(x, v));
      return box(iv, make_or(std::move(kids)));
    }
    case AxiomId::D3a:
    case AxiomId::D3b: {
      require(p.atoms.size() == 1, axiom_name(id) + " needs W=w");
      need_phi();
      auto w = p.atoms[0];
      require(!contains(iv, w.var), axiom_name(id) + " needs W not among the intervened variables");
      auto body = make_and<VarValue>({atom(w.var, w.value), p.phi});
      if (id == AxiomId::D3a) return make_implies(diamond(iv, body), diamond(extend(iv, w), p.phi));
      return make_implies(box(iv, body), box(extend(iv, w), p.phi));
    }
    case AxiomId::D4:
      return box(iv, conjunction(iv.entries()));
    case AxiomId::D5: {
      require(p.atoms.size() == 2, "D5 needs W=w and Y=y");
      auto w = p.atoms[0];
      auto y = p.atoms[1];
      require(w.var != y.var, "D5 needs W != Y");
      require(!contains(iv, w.var) && !contains(iv, y.var), "D5 needs W and Y outside the intervened variables");
      for (const auto& e : p.rest.entries()) require_endogenous(sig, e.var, e.value);
      for (VarId v : sig.endogenous()) {
        bool covered = contains(iv, v) || v == w.var || v == y.var;
        require(covered != p.rest.get(v).has_value(), "D5 needs Z = V - (X u {W,Y})");
      }
      auto z = conjunction(p.rest.entries());
      auto first = diamond(extend(iv, y), make_and<VarValue>({atom(w.var, w.value), z}));
      auto second = diamond(extend(iv, w), make_and<VarValue>({atom(y.var, y.value), z}));
      auto goal = diamond(iv, make_and<VarValue>({atom(w.var, w.value), atom(y.var, y.value), z}));
      return make_implies(make_and<Modal>({first, second}), goal);
    }
    case AxiomId::D6:
    case AxiomId::D6Box: {
      require(p.chain.size() >= 2, "D6 needs a chain X0, ..., Xk with k >= 1");
      for (VarId v : p.chain) require_endogenous(sig, v, 0);
      auto sorted = p.chain;
      std::sort(sorted.begin(), sorted.end());
      require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "D6 needs distinct variables");
      require(small_enough_for_leads_to(sig), "~> is only expanded for at most 4 variables with ranges of at most 3");
      bool boxes = id == AxiomId::D6Box;
      std::vector<CausalFormula> links;
      for (std::size_t i = 0; i + 1 < p.chain.size(); ++i) links.push_back(leads_to(sig, p.chain[i], p.chain[i + 1], boxes));
      return make_implies(make_and(std::move(links)), make_not(leads_to(sig, p.chain.back(), p.chain.front(), boxes)));
    }
    case AxiomId::D7: {
      need_phi();
      require(p.psi != nullptr, "D7 needs psi");
      auto premise = make_and<Modal>({box(iv, p.phi), box(iv, make_implies(p.phi, p.psi))});
      return make_implies(premise, box(iv, p.psi));
    }
    case AxiomId::D8:
      require_parts(p.basic_parts.size(), "D8");
      return box(iv, tautology<VarValue>(p.tautology, p.basic_parts[0], p.basic_parts[1], p.basic_parts[2]));
    case AxiomId::D9: {
      need_phi();
      std::size_t missing = 0;
      for (VarId v : sig.endogenous()) missing += contains(iv, v) ? 0 : 1;
      require(missing <= 1, "D9 needs Y = V or Y = V - {X}");
      return make_and<Modal>({diamond(iv, make_true<VarValue>()), make_implies(diamond(iv, p.phi), box(iv, p.phi))});
    }
    case AxiomId::D10a:
      return diamond(iv, make_true<VarValue>());
    case AxiomId::D10b:
      need_phi();
      return make_implies(diamond(iv, p.phi), box(iv, p.phi));
    case AxiomId::D10c:
      need_phi();
      require(iv.empty(), "D10c has no intervention");
      return make_implies(diamond(Intervention{}, p.phi), box(Intervention{}, p.phi));
  }
  throw AxiomError("unknown axiom");
}

bool for_each_instance(AxiomId id, const Signature& sig, const std::function<bool(const AxiomParams&)>& visit) {
  auto ivs = interventions(sig);
  auto endo = sig.endogenous();
  AxiomParams p;
  switch (id) {
    case AxiomId::D0: {
      auto pool = causal_pool(sig);
      for (std::size_t t = 0; t < kTautologyCount; ++t) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
          for (std::size_t j = 0; j < pool.size(); ++j) {
            p.tautology = t;
            p.parts = {pool[i], pool[j], pool[(i + j + 1) % pool.size()]};
            if (!visit(p)) return false;
          }
        }
      }
      return true;
    }
    case AxiomId::D1:
      for (const auto& iv : ivs) {
        for (VarId x : endo) {
          for (ValueId a = 0; a < sig.range_size(x); ++a) {
            for (ValueId b = 0; b < sig.range_size(x); ++b) {
              if (a == b) continue;
              p.iv = iv;
              p.atoms = {{x, a}, {x, b}};
              if (!visit(p)) return false;
            }
          }
        }
      }
      return true;
    case AxiomId::D2:
      for (const auto& iv : ivs) {
        for (VarId x : endo) {
          p.iv = iv;
          p.atoms = {{x, 0}};
          if (!visit(p)) return false;
        }
      }
      return true;
    case AxiomId::D3a:
    case AxiomId::D3b: {
      auto pool = phi_pool(sig);
      for (const auto& iv : ivs) {
        for (VarId w : endo) {
          if (contains(iv, w)) continue;
          for (ValueId x = 0; x < sig.range_size(w); ++x) {
            for (const auto& phi : pool) {
              p.iv = iv;
              p.atoms = {{w, x}};
              p.phi = phi;
              if (!visit(p)) return false;
            }
          }
        }
      }
      return true;
    }
    case AxiomId::D4:
    case AxiomId::D10a:
      for (const auto& iv : ivs) {
        p.iv = iv;
        if (!visit(p)) return false;
      }
      return true;
    case AxiomId::D5: {
      std::vector<VarId> vars(endo.begin(), endo.end());
      for (const auto& state : assignments(sig, vars)) {
        for (VarId w : endo) {
          for (VarId y : endo) {
            if (w == y) continue;
            std::vector<VarId> others;
            for (VarId v : endo) {
              if (v != w && v != y) others.push_back(v);
            }
            // Each other variable is either intervened on (X) or constrained (Z).
            for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
              std::vector<VarValue> x;
              std::vector<VarValue> z;
              for (std::size_t i = 0; i < others.size(); ++i) {
                VarValue e{others[i], *state.get(others[i])};
                ((mask >> i) & 1U ? x : z).push_back(e);
              }
              p.iv = Intervention(std::move(x));
              p.rest = Assignment(std::move(z));
              p.atoms = {{w, *state.get(w)}, {y, *state.get(y)}};
              if (!visit(p)) return false;
            }
          }
        }
      }
      return true;
    }
    case AxiomId::D6:
    case AxiomId::D6Box: {
      if (!small_enough_for_leads_to(sig)) return false;
      std::vector<VarId> vars(endo.begin(), endo.end());
      // Ordered chains of distinct variables, shortest first.
      for (std::size_t len = 2; len <= vars.size(); ++len) {
        std::vector<VarId> chain;
        std::vector<bool> used(sig.size(), false);
        std::function<bool()> extend_chain = [&]() -> bool {
          if (chain.size() == len) {
            p.chain = chain;
            return visit(p);
          }
          for (VarId v : vars) {
            if (used[v]) continue;
            used[v] = true;
            chain.push_back(v);
            bool go = extend_chain();
            chain.pop_back();
            used[v] = false;
            if (!go) return false;
          }
          return true;
        };
        if (!extend_chain()) return false;
      }
      return true;
    }
    case AxiomId::D7: {
      auto phis = phi_pool(sig);
      auto psis = literal_pool(sig);
      for (const auto& iv : ivs) {
        for (const auto& phi : phis) {
          for (const auto& psi : psis) {
            p.iv = iv;
            p.phi = phi;
            p.psi = psi;
            if (!visit(p)) return false;
          }
        }
      }
      return true;
    }
    case AxiomId::D8: {
      auto pool = spread(literal_pool(sig), kTautologyPool);
      for (std::size_t t = 0; t < kTautologyCount; ++t) {
        for (const auto& iv : ivs) {
          for (std::size_t i = 0; i < pool.size(); ++i) {
            p.tautology = t;
            p.iv = iv;
            p.basic_parts = {pool[i], pool[(i + 1) % pool.size()], pool[(i + 2) % pool.size()]};
            if (!visit(p)) return false;
          }
        }
      }
      return true;
    }
    case AxiomId::D9: {
      auto pool = phi_pool(sig);
      for (const auto& iv : ivs) {
        if (iv.size() + 1 < endo.size()) continue;
        for (const auto& phi : pool) {
          p.iv = iv;
          p.phi = phi;
          if (!visit(p)) return false;
        }
      }
      return true;
    }
    case AxiomId::D10b: {
      auto pool = phi_pool(sig);
      for (const auto& iv : ivs) {
        for (const auto& phi : pool) {
          p.iv = iv;
          p.phi = phi;
          if (!visit(p)) return false;
        }
      }
      return true;
    }
    case AxiomId::D10c:
      for (const auto& phi : phi_pool(sig)) {
        p.phi = phi;
        if (!visit(p)) return false;
      }
      return true;
  }
  return true;
}

std::vector<std::string> explain(Evaluator& evaluator, const Level& setting, const CausalFormula& f) {
  const auto& sig = evaluator.model().signature();
  constexpr std::size_t kLimit = 240;
  constexpr std::size_t kMaxLeaves = 12;
  std::vector<std::string> out;
  auto line = [&](const CausalFormula& g, int depth) {
    out.push_back(std::string(2 * depth, ' ') + truncate(to_string(sig, g), kLimit) + ": " +
                  (evaluator.satisfies(setting, g) ? "true" : "false"));
  };
  line(f, 0);
  for (const auto& k : f->kids) {
    line(k, 1);
    for (const auto& kk : k->kids) {
      if (k->kids.size() <= 4) line(kk, 2);
    }
  }
  // Counterfactual worlds behind the first few leaves at a full setting.
  const auto* at = std::get_if<WorldLevel>(&setting);
  if (at == nullptr) return out;
  std::vector<const Modal*> leaves;
  std::vector<const void*> seen;
  std::function<void(const CausalFormula&)> collect = [&](const CausalFormula& g) {
    if (leaves.size() >= kMaxLeaves || std::find(seen.begin(), seen.end(), g.get()) != seen.end()) return;
    seen.push_back(g.get());
    if (g->op == Op::Leaf && g->leaf.kind != ModalKind::Plain && g->leaf.is_point()) leaves.push_back(&g->leaf);
    for (const auto& k : g->kids) collect(k);
  };
  collect(f);
  std::vector<Intervention> shown;
  for (const Modal* leaf : leaves) {
    auto iv = leaf->intervention();
    if (std::find(shown.begin(), shown.end(), iv) != shown.end()) continue;
    shown.push_back(iv);
    std::string worlds;
    for (const auto& w : evaluator.counterfactual_worlds(at->world, iv)) {
      worlds += (worlds.empty() ? "" : "; ") + format_world(sig, w);
    }
    out.push_back("worlds after " + to_string(sig, iv) + ": " + worlds);
  }
  return out;
}

CheckResult check_axiom(AxiomId id, Evaluator& evaluator, Mode mode, const CheckOptions& options) {
  const Model& m = evaluator.model();
  const auto& sig = m.signature();
  CheckResult result;
  result.axiom = id;
  result.mode = mode;

  std::vector<Level> settings;
  if (mode == Mode::Counterfactual) {
    for (const auto& w : evaluator.solutions()) settings.emplace_back(WorldLevel{w});
  } else {
    for (const auto& u : enumerate_contexts(sig)) settings.emplace_back(ContextLevel{u});
  }

  bool budget_hit = false;
  bool finished = for_each_instance(id, sig, [&](const AxiomParams& params) {
    if (result.instances == options.budget) {
      budget_hit = true;
      return false;
    }
    ++result.instances;
    auto f = instantiate(id, sig, params);
    for (const auto& setting : settings) {
      if (evaluator.satisfies(setting, f)) continue;
      result.counterexample =
          CounterexampleReport{id, mode, m, setting, params, f, explain(evaluator, setting, f)};
      return false;
    }
    return true;
  });
  if (!finished && !result.counterexample) {
    result.complete = false;
    if (budget_hit) {
      result.note = "budget of " + std::to_string(options.budget) + " instances reached";
    } else {
      result.note = "skipped: ~> is only expanded for at most 4 endogenous variables with ranges of at most 3";
    }
  }
  return result;
}

CheckResult check_axiom(AxiomId id, const Model& m, Mode mode, const CheckOptions& options) {
  Evaluator evaluator(m);
  return check_axiom(id, evaluator, mode, options);
}

bool replay(const CounterexampleReport& report) {
  auto f = instantiate(report.axiom, report.model.signature(), report.params);
  return !satisfies(report.model, report.setting, f);
}

std::vector<RandomModelConfig> sweep_configs() {
  return {
      {0, 2, 2, 1, 0.5}, {1, 2, 2, 2, 0.5}, {0, 3, 2, 2, 0.5}, {1, 3, 2, 2, 0.6},
      {0, 2, 3, 1, 0.5}, {0, 3, 3, 2, 0.4}, {0, 4, 2, 2, 0.5},
  };
}

Model sweep_model(std::uint64_t seed, std::size_t index) {
  auto configs = sweep_configs();
  return random_model(seed * 1000003ULL + index, configs[index % configs.size()]);
}

std::vector<Model> sweep_models(const SweepConfig& config) {
  std::vector<Model> models;
  if (config.include_witness_models) {
    // X in {0,1} if Y=1, X=0 if Y=0; and a single free binary variable.
    models.push_back(model_from_json(nlohmann::json::parse(R"({
      "endogenous": {"X": [0, 1], "Y": [0, 1]},
      "edges": [["Y", "X"]],
      "equations": {
        "Y": [{"when": {}, "values": [0, 1]}],
        "X": [{"when": {"Y": 1}, "values": [0, 1]}, {"when": {"Y": 0}, "values": [0]}]}})")));
    models.push_back(model_from_json(nlohmann::json::parse(R"({
      "endogenous": {"X": [0, 1]},
      "equations": {"X": [{"when": {}, "values": [0, 1]}]}})")));
  }
  for (std::size_t i = 0; i < config.random_models; ++i) models.push_back(sweep_model(config.seed, i));
  return models;
}

SweepSummary soundness_sweep(const SweepConfig& config) { return soundness_sweep(config, sweep_models(config)); }

SweepSummary soundness_sweep(const SweepConfig& config, const std::vector<Model>& models) {
  SweepSummary summary{config, {}};
  std::vector<AxiomId> axioms = config.axioms;
  if (axioms.empty()) axioms.assign(kAll.begin(), kAll.end());
  for (AxiomId id : axioms) {
    for (Mode mode : config.modes) summary.rows.push_back(SweepRow{id, mode, 0, 0, 0, 0, {}});
  }
  for (const auto& m : models) {
    Evaluator evaluator(m);
    for (auto& row : summary.rows) {
      auto result = check_axiom(row.axiom, evaluator, row.mode, config.options);
      ++row.models;
      row.instances += result.instances;
      if (!result.complete) ++row.incomplete;
      if (result.counterexample) {
        ++row.failed;
        if (row.counterexamples.size() < config.keep_counterexamples) {
          row.counterexamples.push_back(std::move(*result.counterexample));
        }
      }
    }
  }
  return summary;
}

std::string format_sweep(const SweepSummary& summary) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %-16s %7s %7s %10s %7s  %-8s %s\n", "axiom", "mode", "models", "failed",
                "instances", "partial", "claim", "result");
  out << buf;
  for (const auto& row : summary.rows) {
    const char* claim = claimed_sound(row.axiom, row.mode) ? "sound" : "unsound";
    const char* result = row.failed == 0 ? "no counterexample" : "counterexample";
    std::snprintf(buf, sizeof buf, "%-6s %-16s %7zu %7zu %10zu %7zu  %-8s %s\n", axiom_name(row.axiom).c_str(),
                  mode_name(row.mode).c_str(), row.models, row.failed, row.instances, row.incomplete, claim, result);
    out << buf;
  }
  for (const auto& row : summary.rows) {
    for (const auto& report : row.counterexamples) out << "\n" << format_report(report);
  }
  return out.str();
}

std::string format_report(const CounterexampleReport& r) {
  const auto& sig = r.model.signature();
  std::ostringstream out;
  out << "counterexample to " << axiom_name(r.axiom) << " (" << mode_name(r.mode) << ")\n";
  out << "setting: " << describe(sig, r.setting) << "\n";
  out << "params: " << describe_params(sig, r.axiom, r.params) << "\n";
  out << "model: " << model_to_json(r.model).dump() << "\n";
  for (const auto& line : r.trace) out << "  " << line << "\n";
  return out.str();
}

namespace {

nlohmann::json assignment_json(const Signature& sig, std::span<const VarValue> entries) {
  auto j = nlohmann::json::object();
  for (const auto& [var, value] : entries) j[sig.name(var)] = label_to_json(sig.label(var, value));
  return j;
}

nlohmann::json level_json(const Signature& sig, const Level& level) {
  if (const auto* l = std::get_if<WorldLevel>(&level)) {
    std::vector<VarValue> entries;
    for (VarId v = 0; v < sig.size(); ++v) entries.push_back({v, l->world[v]});
    return {{"level", "world"}, {"world", assignment_json(sig, entries)}};
  }
  if (const auto* l = std::get_if<ContextLevel>(&level)) {
    return {{"level", "context"}, {"context", assignment_json(sig, l->context.entries())}};
  }
  if (const auto* l = std::get_if<StateLevel>(&level)) {
    return {{"level", "state"}, {"state", assignment_json(sig, l->state.entries())}};
  }
  return {{"level", "model"}};
}

nlohmann::json params_json(const Signature& sig, AxiomId id, const AxiomParams& p) {
  nlohmann::json j;
  j["intervention"] = assignment_json(sig, p.iv.entries());
  if (!p.atoms.empty()) {
    auto atoms = nlohmann::json::array();
    for (const auto& a : p.atoms) atoms.push_back(assignment_json(sig, std::span<const VarValue>(&a, 1)));
    j["atoms"] = atoms;
  }
  if (!p.rest.empty()) j["rest"] = assignment_json(sig, p.rest.entries());
  if (p.phi) j["phi"] = to_json(sig, p.phi);
  if (p.psi) j["psi"] = to_json(sig, p.psi);
  if (!p.chain.empty()) {
    auto chain = nlohmann::json::array();
    for (VarId v : p.chain) chain.push_back(sig.name(v));
    j["chain"] = chain;
  }
  if (id == AxiomId::D0 || id == AxiomId::D8) j["tautology"] = p.tautology;
  if (!p.parts.empty()) {
    auto parts = nlohmann::json::array();
    for (const auto& part : p.parts) parts.push_back(to_json(sig, part));
    j["parts"] = parts;
  }
  if (!p.basic_parts.empty()) {
    auto parts = nlohmann::json::array();
    for (const auto& part : p.basic_parts) parts.push_back(to_json(sig, part));
    j["parts"] = parts;
  }
  return j;
}

}  // namespace

nlohmann::json report_to_json(const CounterexampleReport& r) {
  const auto& sig = r.model.signature();
  return {{"axiom", axiom_name(r.axiom)},
          {"mode", mode_name(r.mode)},
          {"setting", level_json(sig, r.setting)},
          {"params", params_json(sig, r.axiom, r.params)},
          {"params_text", describe_params(sig, r.axiom, r.params)},
          {"instance", truncate(to_string(sig, r.formula), 2000)},
          {"model", model_to_json(r.model)},
          {"trace", r.trace}};
}

nlohmann::json sweep_to_json(const SweepSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : summary.rows) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : row.counterexamples) reports.push_back(report_to_json(r));
    rows.push_back({{"axiom", axiom_name(row.axiom)},
                    {"mode", mode_name(row.mode)},
                    {"models", row.models},
                    {"failed", row.failed},
                    {"instances", row.instances},
                    {"partial", row.incomplete},
                    {"claimed_sound", claimed_sound(row.axiom, row.mode)},
                    {"counterexamples", reports}});
  }
  return {{"seed", summary.config.seed},
          {"random_models", summary.config.random_models},
          {"budget", summary.config.options.budget},
          {"rows", rows}};
}

}  // namespace nsem
