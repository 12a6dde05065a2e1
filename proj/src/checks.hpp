#pragma once

#include <string>
#include <vector>

#include "nsem/graph.hpp"
#include "nsem/signature.hpp"

namespace nsem::detail {

/// Graph-level checks shared by NSEMs and PNSEMs: node count, parentless
/// exogenous variables, acyclicity. Returns false if the graph does not
/// even match the signature, in which case nothing else can be checked.
bool check_graph(const Signature& sig, const CausalGraph& graph, std::vector<std::string>& out);

}  // namespace nsem::detail
