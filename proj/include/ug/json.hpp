#pragma once

#include <nlohmann/json.hpp>

namespace ug {

// Order-preserving JSON everywhere: emitted files keep a stable field
// order, which record round-trips and byte-level determinism checks rely
// on.
using Json = nlohmann::ordered_json;

}  // namespace ug
