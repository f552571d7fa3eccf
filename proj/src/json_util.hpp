#pragma once

// Shared helpers for the JSON file readers. Internal to the library.

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "atomgrape/errors.hpp"
#include "atomgrape/io.hpp"

namespace atomgrape::detail {

inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), io::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

// Locates element `index` of the object list at `depth` for error messages.
inline std::size_t element_line(std::string_view text, int depth, std::size_t index) {
  const auto offsets = io::object_offsets(text, depth);
  return index < offsets.size() ? io::line_of_offset(text, offsets[index]) : 1;
}

inline double number_field(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'", line);
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' is not a number", line);
  return it->get<double>();
}

}  // namespace atomgrape::detail
