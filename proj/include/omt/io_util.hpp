#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace omt {

/// Shortest round-trip decimal form of a double (std::to_chars), locale
/// independent and identical on every platform.
std::string format_double(double value);

/// Locale-independent double parse of an entire token. Throws DataError with
/// the given context on failure.
double parse_double(const std::string& token, const std::string& context);

/// Integer parse of an entire token; throws DataError on failure.
std::int64_t parse_int(const std::string& token, const std::string& context);

/// Write a file atomically: produce content into a sibling temp file, then
/// rename over the destination.
void atomic_write_file(const std::string& path, const std::function<void(std::ostream&)>& writer);

}  // namespace omt
