#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace bathsim {

/// Argument outside the region where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or physically meaningless configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value produced while integrating a trajectory.
class IntegrationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phase-space point of one trajectory. Positions outside [0, L] are legal
/// transient values until the exit is classified.
struct ParticleState {
  double x = 0.0;
  double v = 0.0;
};

enum class Side { Left, Right };

inline constexpr Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline constexpr int index_of(Side s) { return s == Side::Left ? 0 : 1; }
std::string to_string(Side s);

/// Mean-field potential Phi(x). The free case is the default; a linear ramp and
/// an arbitrary callable cover the force-field cases exercised by tests.
class Potential {
 public:
  enum class Kind { Free, Linear, Custom };

  Potential() = default;

  static Potential free() { return {}; }
  static Potential linear(double slope);
  static Potential custom(std::function<double(double)> value, std::function<double(double)> derivative,
                          std::string label = "custom");

  Kind kind() const { return kind_; }
  bool is_free() const { return kind_ == Kind::Free; }
  double slope() const { return slope_; }

  double value(double x) const {
    switch (kind_) {
      case Kind::Free: return 0.0;
      case Kind::Linear: return slope_ * x;
      case Kind::Custom: return value_(x);
    }
    return 0.0;
  }

  double derivative(double x) const {
    switch (kind_) {
      case Kind::Free: return 0.0;
      case Kind::Linear: return slope_;
      case Kind::Custom: return derivative_(x);
    }
    return 0.0;
  }

  /// "free", "linear:<slope>" or the custom label.
  std::string describe() const;

  /// Inverse of describe() for the serializable kinds.
  static Potential parse(const std::string& text);

 private:
  Kind kind_ = Kind::Free;
  double slope_ = 0.0;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  std::string label_;
};

struct PhysicsParams {
  double gamma = 100.0;    // friction per unit mass
  double epsilon = 1.0;    // thermal factor, Maxwellian velocity variance
  double length = 1.0;     // domain is [0, length]
  Potential potential;

  /// Throws ConfigError unless gamma, epsilon and length are finite and positive.
  void validate() const;

  /// Width of the kinetic boundary layer, sqrt(epsilon)/gamma.
  double layer_width() const;
};

/// How the net channel flux J entering the unidirectional rates is resolved.
struct FluxMode {
  enum class Kind { Zero, Analytic, Fixed };
  Kind kind = Kind::Analytic;
  double value = 0.0;  // used by Fixed only

  static FluxMode zero() { return {Kind::Zero, 0.0}; }
  static FluxMode analytic() { return {Kind::Analytic, 0.0}; }
  static FluxMode fixed(double j) { return {Kind::Fixed, j}; }
};

struct BathConditions {
  double c_left = 1.0;
  double c_right = 0.0;
  FluxMode flux_mode = FluxMode::analytic();

  void validate() const;
  double concentration(Side s) const { return s == Side::Left ? c_left : c_right; }
};

}  // namespace bathsim
