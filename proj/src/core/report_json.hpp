#pragma once

#include <string>

#include "core/overlap_measures.hpp"

namespace ovl {

// Serializes a report to the versioned JSON schema ("schema": 1). Non-finite
// numbers become JSON null; the accompanying warning entry explains why.
std::string report_to_json(const OverlapReport& rep, int indent = 2);

}  // namespace ovl
