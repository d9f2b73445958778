#include "bathsim/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "bathsim/physics.hpp"

namespace bathsim {

namespace {

std::string with_precision(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string format_exact(double v) { return with_precision(v, 17); }

std::string format_short(double v) { return with_precision(v, 6); }

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ConfigError("invalid number for " + what + ": '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  // accept "25000" and also "2.5e4"-style input as long as it is integral
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) return v;
  const double d = parse_double(text, what);
  if (!std::isfinite(d) || d != std::floor(d) || std::fabs(d) > 9.0e18)
    throw ConfigError("invalid integer for " + what + ": '" + text + "'");
  return static_cast<long long>(d);
}

}  // namespace bathsim
