#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "nsem/model.hpp"

namespace nsem {

/// Input that is not shaped like the documented file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The typed pieces of a model before validation.
struct ModelParts {
  std::shared_ptr<const Signature> signature;
  CausalGraph graph;
  std::vector<EquationTable> equations;
};

/// Every violated invariant of the parts; empty means Model construction succeeds.
ValidationReport validate_model(const ModelParts& parts);

/// A model file after loading: the parts (absent if the signature itself is
/// broken) and every problem found, including label-level ones such as
/// unknown names, missing or duplicate rows.
struct ModelDocument {
  std::optional<ModelParts> parts;
  ValidationReport report;
};

/// Throws FormatError if the document is not shaped like a model file.
ModelDocument read_model_document(const nlohmann::json& doc);

/// Throws FormatError or ValidationError.
Model model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Model& m);

/// Reads and parses a JSON file; throws FormatError if unreadable.
nlohmann::json read_json_file(const std::string& path);
Model load_model(const std::string& path);

/// Labels are written as JSON integers when they look like integers.
nlohmann::json label_to_json(const std::string& label);

}  // namespace nsem
