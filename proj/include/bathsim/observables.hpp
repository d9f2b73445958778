#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bathsim/engine.hpp"
#include "bathsim/physics.hpp"

namespace bathsim {

/// Not enough data for the requested estimate or test.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concentration estimate on a uniform grid over [lo, hi].
struct ConcentrationProfile {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> bin_centers;
  std::vector<double> values;
  std::vector<double> std_errors;

  std::size_t size() const { return values.size(); }
  double bin_width() const { return values.empty() ? 0.0 : (hi - lo) / static_cast<double>(values.size()); }
};

/// Bulk profile plus the two refined zoom windows. `covariance` spans the
/// concatenation [bulk | left_zoom | right_zoom]; it may be empty, in which
/// case bins are treated as independent.
struct ProfileSet {
  ConcentrationProfile bulk;
  ConcentrationProfile left_zoom;
  ConcentrationProfile right_zoom;
  Eigen::MatrixXd covariance;
};

/// c = residence / (bin width * T). Standard errors come from the
/// between-trajectory variance (sequential) or a block bootstrap (ensemble);
/// the covariance always comes from the unit-level cross products.
/// Throws InsufficientData when T <= 0 or nothing was recorded.
ProfileSet normalize_profile(const RawStats& stats, const SimConfig& config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double at(double x) const { return intercept + slope * x; }
};

struct LayerReport {
  Side side = Side::Left;
  double layer_width = 0.0;
  LinearFit interior_fit;
  /// max over layer bins of |measured - extrapolated fit| / sigma, where sigma
  /// includes the uncertainty of the extrapolated fit.
  double layer_deviation = 0.0;
  /// Sign of the mean layer residual (-1, 0 or +1).
  int systematic_sign = 0;
  std::vector<double> layer_centers;
  std::vector<double> residuals;
  std::vector<double> sigmas;
};

/// Interior window used for the reference line.
inline constexpr double kFitLo = 0.1;
inline constexpr double kFitHi = 0.9;

/// Least-squares line through the bulk bins with centers in [0.1 L, 0.9 L],
/// compared with the zoom bins within sqrt(eps)/gamma of the chosen interface.
/// Throws DomainError with fewer than 3 layer bins or a degenerate fit.
LayerReport boundary_layer_metric(const ProfileSet& profiles, const PhysicsParams& params, Side side = Side::Left);

/// Same, on a single uniform profile with independent bins.
LayerReport boundary_layer_metric(const ConcentrationProfile& profile, const PhysicsParams& params,
                                  Side side = Side::Left);

LinearFit interior_fit(const ConcentrationProfile& bulk, double length);

// ------------------------------------------------------------ goodness of fit

struct GofResult {
  enum class Kind { KS, ChiSquare };
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_samples = 0;
  Kind kind = Kind::KS;
  int degrees_of_freedom = 0;  // chi-square only
};

std::string to_string(GofResult::Kind k);

/// Asymptotic Kolmogorov survival function Q(lambda) = P(sqrt(n) D > lambda).
double kolmogorov_survival(double lambda);

/// One-sample KS test against a continuous CDF.
GofResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS test.
GofResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square of observed counts against expected counts. Cells with
/// expectation below 5 are pooled; `fitted` parameters reduce the degrees of
/// freedom. Throws InsufficientData with fewer than 2 usable cells.
GofResult chi_square_test(std::span<const double> observed, std::span<const double> expected, int fitted = 0);

/// Chi-square on `bins` cells that are equiprobable under the hypothesised law,
/// given through its quantile function.
GofResult chi_square_1d(std::span<const double> samples, const std::function<double(double)>& quantile, int bins);

struct Grid2D {
  double x_min, x_max;
  int nx;
  double v_min, v_max;
  int nv;
};

/// Chi-square of (x, v) samples against a 2D density. Expected cell counts are
/// the density integrated over each cell by nested Gauss-Kronrod quadrature;
/// the probability outside the grid forms one more cell.
GofResult chi_square_2d(std::span<const ParticleState> samples, const std::function<double(double, double)>& density,
                        const Grid2D& grid);

/// Minimum number of strip samples for strip_velocity_gof.
inline constexpr std::size_t kMinStripSamples = 10'000;

/// KS test of the inward velocities sampled in one interface strip against the
/// first-order interface velocity law with J from the analytic flux.
GofResult strip_velocity_gof(const RawStats& stats, Side side, const BathConditions& bath,
                             const PhysicsParams& params);

}  // namespace bathsim
