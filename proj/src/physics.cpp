#include "bathsim/physics.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "bathsim/format.hpp"

namespace bathsim {

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Potential Potential::linear(double slope) {
  Potential p;
  p.kind_ = Kind::Linear;
  p.slope_ = slope;
  return p;
}

Potential Potential::custom(std::function<double(double)> value, std::function<double(double)> derivative,
                            std::string label) {
  if (!value || !derivative) throw ConfigError("custom potential needs both value and derivative");
  Potential p;
  p.kind_ = Kind::Custom;
  p.value_ = std::move(value);
  p.derivative_ = std::move(derivative);
  p.label_ = std::move(label);
  return p;
}

std::string Potential::describe() const {
  switch (kind_) {
    case Kind::Free: return "free";
    case Kind::Linear: return "linear:" + format_exact(slope_);
    case Kind::Custom: return label_;
  }
  return "free";
}

Potential Potential::parse(const std::string& text) {
  if (text == "free" || text.empty()) return free();
  const std::string prefix = "linear:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    double slope = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), slope);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || !std::isfinite(slope))
      throw ConfigError("bad linear potential slope: '" + rest + "'");
    return linear(slope);
  }
  throw ConfigError("unknown potential '" + text + "' (expected free or linear:<slope>)");
}

void PhysicsParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(gamma)) throw ConfigError("gamma must be finite and > 0");
  if (!positive(epsilon)) throw ConfigError("epsilon must be finite and > 0");
  if (!positive(length)) throw ConfigError("length must be finite and > 0");
}

double PhysicsParams::layer_width() const { return std::sqrt(epsilon) / gamma; }

void BathConditions::validate() const {
  if (!std::isfinite(c_left) || c_left < 0.0) throw ConfigError("c_left must be finite and >= 0");
  if (!std::isfinite(c_right) || c_right < 0.0) throw ConfigError("c_right must be finite and >= 0");
  if (!(c_left + c_right > 0.0)) throw ConfigError("at least one bath concentration must be positive");
  if (flux_mode.kind == FluxMode::Kind::Fixed && !std::isfinite(flux_mode.value))
    throw ConfigError("fixed flux must be finite");
}

}  // namespace bathsim
