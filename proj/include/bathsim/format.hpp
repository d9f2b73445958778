#pragma once

#include <string>

namespace bathsim {

// Locale-independent number formatting (std::to_chars never uses the C locale).

/// 17 significant digits; parses back to the identical double.
std::string format_exact(double v);

/// 6 significant digits for human-facing tables.
std::string format_short(double v);

/// Strict parse of a full string as a double; throws ConfigError on junk.
double parse_double(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);

}  // namespace bathsim
