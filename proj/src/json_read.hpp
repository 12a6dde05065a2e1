#pragma once

// Helpers shared by the model and probabilistic model readers.

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "nsem/model_io.hpp"

namespace nsem::detail {

using nlohmann::json;

/// A value label: a JSON string, or an integer written without quotes.
std::string json_label(const json& j, const std::string& where);

const json& require_member(const json& doc, const char* key, const std::string& where);

/// Reads `exogenous` and `endogenous`. Returns null and records the problem
/// if the signature is inconsistent.
std::shared_ptr<const Signature> read_signature(const json& doc, ValidationReport& report);

/// Reads `edges`; unknown names are recorded and skipped.
CausalGraph read_edges(const json& doc, const Signature& sig, ValidationReport& report);

/// Resolves a `when` object to a row index over `parents`. Records problems
/// and returns nullopt if the assignment does not name exactly the parents.
std::optional<std::size_t> read_when(const json& when, const Signature& sig,
                                     const std::vector<VarId>& parents, const std::string& child,
                                     ValidationReport& report);

void write_signature(const Signature& sig, json& doc);
void write_edges(const CausalGraph& graph, const Signature& sig, json& doc);
json when_to_json(const Signature& sig, const std::vector<VarId>& parents, std::size_t row);

}  // namespace nsem::detail
