#include <algorithm>
#include <cmath>
#include <limits>

#include "bathsim/observables.hpp"
#include "bathsim/random.hpp"

namespace bathsim {

namespace {

constexpr int kBootstrapResamples = 400;

ConcentrationProfile make_grid(double lo, double hi, int n) {
  ConcentrationProfile p;
  p.lo = lo;
  p.hi = hi;
  const double w = (hi - lo) / n;
  p.bin_centers.resize(n);
  for (int i = 0; i < n; ++i) p.bin_centers[i] = lo + (i + 0.5) * w;
  p.values.assign(n, 0.0);
  p.std_errors.assign(n, 0.0);
  return p;
}

// Bootstrap over ensemble blocks: resample blocks with replacement and take the
// spread of the resulting concentration estimates.
Eigen::VectorXd block_bootstrap_errors(const RawStats& stats, const Eigen::VectorXd& scale, std::uint64_t seed) {
  const auto nb = stats.blocks.size();
  const auto cells = stats.occupancy.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cells);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(cells);
  RandomStream rng(seed, 0, 7);
  std::uniform_int_distribution<std::size_t> pick(0, nb - 1);
  Eigen::VectorXd draw(cells);
  for (int r = 0; r < kBootstrapResamples; ++r) {
    draw.setZero();
    for (std::size_t b = 0; b < nb; ++b) draw += stats.blocks[pick(rng.engine())];
    draw = draw.cwiseProduct(scale);
    sum += draw;
    sum_sq += draw.cwiseProduct(draw);
  }
  const double R = kBootstrapResamples;
  Eigen::VectorXd var = (sum_sq - sum.cwiseProduct(sum) / R) / (R - 1.0);
  return var.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

ProfileSet normalize_profile(const RawStats& stats, const SimConfig& config) {
  const double T = stats.total_injection_time;
  if (!(T > 0.0)) throw InsufficientData("total injection time is zero: nothing to normalize");
  if (stats.units < 2 || stats.occupancy.size() == 0) throw InsufficientData("need at least two statistical units");
  const GridLayout& g = stats.grid;
  const int cells = g.cells();
  const int z = g.zoom_bins();

  ProfileSet out;
  out.bulk = make_grid(0.0, g.length, g.bins);
  out.left_zoom = make_grid(0.0, g.zoom_extent(), z);
  out.right_zoom = make_grid(g.length - g.zoom_extent(), g.length, z);

  // scale converts residence time into concentration, cell by cell
  Eigen::VectorXd scale(cells);
  for (int c = 0; c < cells; ++c) scale[c] = 1.0 / ((c < g.bins ? g.bulk_width() : g.zoom_width()) * T);

  const double U = static_cast<double>(stats.units);
  Eigen::MatrixXd cov_sum = stats.occupancy_cross - stats.occupancy * stats.occupancy.transpose() / U;
  cov_sum *= U / (U - 1.0);
  out.covariance = scale.asDiagonal() * cov_sum * scale.asDiagonal();

  Eigen::VectorXd values = stats.occupancy.cwiseProduct(scale);
  Eigen::VectorXd errors;
  if (config.mode == SimConfig::Mode::Ensemble && stats.blocks.size() >= 2) {
    errors = block_bootstrap_errors(stats, scale, config.seed);
  } else {
    errors = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  }

  for (int c = 0; c < cells; ++c) {
    ConcentrationProfile* target = &out.bulk;
    int i = c;
    if (c >= g.bins + z) {
      target = &out.right_zoom;
      i = c - g.bins - z;
    } else if (c >= g.bins) {
      target = &out.left_zoom;
      i = c - g.bins;
    }
    target->values[i] = values[c];
    target->std_errors[i] = errors[c];
  }
  return out;
}

LinearFit interior_fit(const ConcentrationProfile& bulk, double length) {
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const double x = bulk.bin_centers[i];
    if (x < kFitLo * length || x > kFitHi * length) continue;
    sx += x;
    sy += bulk.values[i];
    ++n;
  }
  if (n < 2) throw DomainError("degenerate interior fit: fewer than two bins in [0.1L, 0.9L]");
  const double xm = sx / n, ym = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const double x = bulk.bin_centers[i];
    if (x < kFitLo * length || x > kFitHi * length) continue;
    sxx += (x - xm) * (x - xm);
    sxy += (x - xm) * (bulk.values[i] - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("degenerate interior fit: zero spread in positions");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  return fit;
}

namespace {

// Layer comparison on a concatenated set of bins. `bulk` indexes the bins used
// for the interior line, `layer` those compared with its extrapolation.
LayerReport layer_report(const std::vector<double>& centers, const std::vector<double>& values,
                         const Eigen::MatrixXd& cov, const std::vector<int>& bulk, const std::vector<int>& layer,
                         const PhysicsParams& params, Side side) {
  LayerReport rep;
  rep.side = side;
  rep.layer_width = params.layer_width();
  if (layer.size() < 3) throw DomainError("fewer than 3 bins inside the boundary layer region");

  std::vector<int> fit;
  for (int i : bulk)
    if (centers[i] >= kFitLo * params.length && centers[i] <= kFitHi * params.length) fit.push_back(i);
  if (fit.size() < 2) throw DomainError("degenerate interior fit: fewer than two bins in [0.1L, 0.9L]");
  double xm = 0.0, ym = 0.0;
  for (int i : fit) {
    xm += centers[i];
    ym += values[i];
  }
  xm /= fit.size();
  ym /= fit.size();
  double sxx = 0.0, sxy = 0.0;
  for (int i : fit) {
    sxx += (centers[i] - xm) * (centers[i] - xm);
    sxy += (centers[i] - xm) * (values[i] - ym);
  }
  if (!(sxx > 0.0)) throw DomainError("degenerate interior fit: zero spread in positions");
  rep.interior_fit.slope = sxy / sxx;
  rep.interior_fit.intercept = ym - rep.interior_fit.slope * xm;

  double mean_residual = 0.0;
  const auto nf = static_cast<double>(fit.size());
  for (int z : layer) {
    const double x = centers[z];
    const double r = values[z] - rep.interior_fit.at(x);
    // residual = c_z - sum_i w_i c_i, with w_i the OLS extrapolation weights
    Eigen::VectorXd w(fit.size());
    for (std::size_t k = 0; k < fit.size(); ++k) w[k] = 1.0 / nf + (x - xm) * (centers[fit[k]] - xm) / sxx;
    double var = cov(z, z);
    for (std::size_t a = 0; a < fit.size(); ++a) {
      var -= 2.0 * w[a] * cov(fit[a], z);
      for (std::size_t b = 0; b < fit.size(); ++b) var += w[a] * w[b] * cov(fit[a], fit[b]);
    }
    const double sigma = std::sqrt(std::max(var, 0.0));
    double dev = 0.0;
    if (sigma > 0.0) {
      dev = std::fabs(r) / sigma;
    } else if (r != 0.0) {
      dev = std::numeric_limits<double>::infinity();
    }
    rep.layer_deviation = std::max(rep.layer_deviation, dev);
    rep.layer_centers.push_back(x);
    rep.residuals.push_back(r);
    rep.sigmas.push_back(sigma);
    mean_residual += r;
  }
  mean_residual /= static_cast<double>(layer.size());
  rep.systematic_sign = mean_residual > 0.0 ? 1 : (mean_residual < 0.0 ? -1 : 0);
  return rep;
}

bool in_layer(double x, const PhysicsParams& params, Side side) {
  const double w = params.layer_width();
  return side == Side::Left ? x < w : x > params.length - w;
}

}  // namespace

LayerReport boundary_layer_metric(const ProfileSet& profiles, const PhysicsParams& params, Side side) {
  std::vector<double> centers, values, errors;
  for (const auto* p : {&profiles.bulk, &profiles.left_zoom, &profiles.right_zoom}) {
    centers.insert(centers.end(), p->bin_centers.begin(), p->bin_centers.end());
    values.insert(values.end(), p->values.begin(), p->values.end());
    errors.insert(errors.end(), p->std_errors.begin(), p->std_errors.end());
  }
  const int nb = static_cast<int>(profiles.bulk.size());
  const int nz = static_cast<int>(profiles.left_zoom.size());

  Eigen::MatrixXd cov;
  if (profiles.covariance.rows() == static_cast<Eigen::Index>(centers.size())) {
    cov = profiles.covariance;
  } else {
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(errors.data(), errors.size());
    cov = e.cwiseProduct(e).asDiagonal();
  }

  std::vector<int> bulk(nb);
  for (int i = 0; i < nb; ++i) bulk[i] = i;
  std::vector<int> layer;
  const int offset = side == Side::Left ? nb : nb + nz;
  const auto& zoom = side == Side::Left ? profiles.left_zoom : profiles.right_zoom;
  for (int i = 0; i < static_cast<int>(zoom.size()); ++i)
    if (in_layer(zoom.bin_centers[i], params, side)) layer.push_back(offset + i);
  return layer_report(centers, values, cov, bulk, layer, params, side);
}

LayerReport boundary_layer_metric(const ConcentrationProfile& profile, const PhysicsParams& params, Side side) {
  const int n = static_cast<int>(profile.size());
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(profile.std_errors.data(), n);
  Eigen::MatrixXd cov = e.cwiseProduct(e).asDiagonal();
  std::vector<int> bulk(n), layer;
  for (int i = 0; i < n; ++i) {
    bulk[i] = i;
    if (in_layer(profile.bin_centers[i], params, side)) layer.push_back(i);
  }
  return layer_report(profile.bin_centers, profile.values, cov, bulk, layer, params, side);
}

}  // namespace bathsim
