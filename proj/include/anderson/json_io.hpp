/**
 * @file json_io.hpp
 * @brief Locale-independent number formatting, JSON emission and CSV quoting.
 *
 * Reports are built as nlohmann::json values and written with dump() below,
 * which renders every floating-point number with 17 significant digits so
 * byte-level output does not depend on the library's shortest-repr choice.
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace anderson::json_io {

/// %.17g-style rendering via std::to_chars; non-finite values become "nan"/"inf".
std::string format_double(double x, int significant = 17);

double parse_double(std::string_view s);
std::int64_t parse_int(std::string_view s);
std::uint64_t parse_uint64(std::string_view s);

/// Serialize with sorted keys (nlohmann's object order), 17-digit doubles,
/// and non-finite numbers written as null.
std::string dump(const nlohmann::json& j, int indent = 2);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace anderson::json_io
