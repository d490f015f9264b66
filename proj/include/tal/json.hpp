#pragma once

#include <json.hpp>

namespace tal {

/// JSON value with insertion-ordered keys, so emitted documents have a stable
/// field order.
using Json = nlohmann::ordered_json;

}  // namespace tal
