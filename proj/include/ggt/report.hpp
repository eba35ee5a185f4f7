#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ggt {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "ggt";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

struct ReportInput {
  std::string role;
  std::string path;
  std::string sha256;
};

/// Header (tool, version, command, params, inputs, seed) followed by `body`.
/// Contains no timestamps or host data, so equal invocations give equal bytes.
Json make_report(std::string_view command, Json params, const std::vector<ReportInput>& inputs, std::uint64_t seed,
                 Json body);

/// `key: value` lines; nested objects indent by two; scalar arrays and
/// arrays of arrays render inline as bracketed lists; arrays of objects as
/// `-` items.
std::string render_text(const Json& report);
std::string render_json(const Json& report);

}  // namespace ggt
