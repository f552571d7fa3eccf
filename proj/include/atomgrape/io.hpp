#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace atomgrape::io {

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// RFC-4180 field quoting.
std::string csv_field(std::string_view text);
std::string csv_number(double value);

// Formats a double with 17 significant digits ("%.17g").
std::string exact_number(double value);

// 1-based line of a byte offset in `text`.
std::size_t line_of_offset(std::string_view text, std::size_t offset);

}  // namespace atomgrape::io

namespace atomgrape::io {

// Byte offsets of every '{' that opens an object at nesting `depth` (the
// outermost container is depth 1), in document order. Used to point schema
// errors at a line.
std::vector<std::size_t> object_offsets(std::string_view json_text, int depth);

}  // namespace atomgrape::io
