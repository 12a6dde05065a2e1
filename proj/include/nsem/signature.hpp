#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nsem {

using VarId = std::size_t;
using ValueId = std::size_t;

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A world, context, or state that does not fit the signature it is used with.
class MalformedAssignment : public Error {
 public:
  using Error::Error;
};

enum class VarKind { Exogenous, Endogenous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Endogenous;
  std::vector<std::string> range;
};

/// A (variable, value) pair. Doubles as an atomic formula X=x and as one
/// component of a point intervention.
struct VarValue {
  VarId var = 0;
  ValueId value = 0;
  friend auto operator<=>(const VarValue&, const VarValue&) = default;
};

/// Exogenous and endogenous variables with their finite ranges.
///
/// Variables are stored sorted by name; a VarId is the position in that
/// order, so iterating ids visits variables alphabetically. Values are
/// identified by their position in the declared range.
class Signature {
 public:
  Signature() = default;

  /// Throws SignatureError when names collide or a range is empty or
  /// repeats a label.
  Signature(std::vector<Variable> exogenous, std::vector<Variable> endogenous);

  [[nodiscard]] std::size_t size() const { return vars_.size(); }
  [[nodiscard]] const Variable& variable(VarId v) const { return vars_.at(v); }
  [[nodiscard]] const std::string& name(VarId v) const { return vars_.at(v).name; }
  [[nodiscard]] std::size_t range_size(VarId v) const { return vars_.at(v).range.size(); }
  [[nodiscard]] const std::string& label(VarId v, ValueId x) const { return vars_.at(v).range.at(x); }

  [[nodiscard]] bool is_exogenous(VarId v) const { return vars_.at(v).kind == VarKind::Exogenous; }
  [[nodiscard]] bool is_endogenous(VarId v) const { return !is_exogenous(v); }
  [[nodiscard]] std::span<const VarId> exogenous() const { return exogenous_; }
  [[nodiscard]] std::span<const VarId> endogenous() const { return endogenous_; }

  [[nodiscard]] std::optional<VarId> find(std::string_view name) const;
  [[nodiscard]] std::optional<ValueId> find_value(VarId v, std::string_view label) const;

  /// Signature with only the endogenous variables (ids are renumbered).
  [[nodiscard]] Signature endogenous_only() const;

  friend bool operator==(const Signature& a, const Signature& b);

 private:
  std::vector<Variable> vars_;
  std::vector<VarId> exogenous_;
  std::vector<VarId> endogenous_;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

/// A total assignment of values to every variable of a signature (u, v).
class World {
 public:
  World() = default;
  explicit World(std::vector<ValueId> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] ValueId operator[](VarId v) const { return values_[v]; }
  ValueId& operator[](VarId v) { return values_[v]; }
  [[nodiscard]] std::span<const ValueId> values() const { return values_; }

  friend auto operator<=>(const World&, const World&) = default;

 private:
  std::vector<ValueId> values_;
};

/// A partial assignment, kept sorted by variable. Used for contexts (over U),
/// states (over V) and command-line world specifications.
class Assignment {
 public:
  Assignment() = default;
  /// Throws MalformedAssignment if a variable repeats.
  explicit Assignment(std::vector<VarValue> entries);

  [[nodiscard]] std::span<const VarValue> entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::optional<ValueId> get(VarId v) const;

  /// True when every entry agrees with `w`.
  [[nodiscard]] bool agrees_with(const World& w) const;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<VarValue> entries_;
};

/// Restrictions of a world to U and to V.
Assignment context_of(const Signature& sig, const World& w);
Assignment state_of(const Signature& sig, const World& w);

/// Throws MalformedAssignment unless `w` assigns an in-range value to every variable.
void check_world(const Signature& sig, const World& w);
/// Throws MalformedAssignment unless `a` covers exactly `vars` with in-range values.
void check_assignment(const Signature& sig, const Assignment& a, std::span<const VarId> vars,
                      std::string_view what);

/// Combines a context and a state into a world.
World make_world(const Signature& sig, const Assignment& context, const Assignment& state);

/// "X=0,Y=1" in variable order. Labels that are not plain integers are quoted.
std::string format_assignment(const Signature& sig, const Assignment& a);
std::string format_world(const Signature& sig, const World& w);
/// Label as it appears in formulas and command lines.
std::string format_label(std::string_view label);

/// Parses "X=0,Y=1" (whitespace tolerant, labels optionally double-quoted).
/// Throws MalformedAssignment on unknown variables, labels, or duplicates.
Assignment parse_assignment(const Signature& sig, std::string_view text);

}  // namespace nsem
