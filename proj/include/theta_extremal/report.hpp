#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace theta_extremal {

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become "nan" / "inf" / "-inf".
std::string format_double(double value);

/// JSON text with every floating-point number printed with 17 significant
/// digits (nlohmann's default printer uses shortest round-trip form instead).
/// Keys keep insertion order. Non-finite floats are written as null.
std::string dump_json(const Json &value, int indent = 2);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string library_version();

} // namespace theta_extremal
