#pragma once

// JSON description of a QuantumCode:
//   {"name": "...", "n_physical": 5, "complete": true,
//    "codewords": [[[re, im], ...], [[re, im], ...]],
//    "error_ops": ["X1", ..., "ZX5"]}
// Error operators are described by their single-qubit Pauli labels.

#include <nlohmann/json.hpp>

#include "qdis/qec.hpp"

namespace qdis {

nlohmann::json code_to_json(const QuantumCode& code);
/// Rebuilds a code whose error operators are single-qubit Pauli labels.
QuantumCode code_from_json(const nlohmann::json& j);

}  // namespace qdis
