#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "bathsim/injection.hpp"
#include "bathsim/physics.hpp"

namespace bathsim {

/// Histogram layout: `bins` uniform bulk bins over [0, L] plus, at each end, a
/// zoom grid ten times finer covering 5% of the domain. Cells are indexed
/// [bulk | left zoom | right zoom].
struct GridLayout {
  double length = 1.0;
  int bins = 100;

  static constexpr int kZoomRefinement = 10;
  static constexpr double kZoomFraction = 0.05;

  int zoom_bins() const;
  double bulk_width() const { return length / bins; }
  double zoom_width() const { return length / (bins * kZoomRefinement); }
  double zoom_extent() const { return zoom_bins() * zoom_width(); }
  int cells() const { return bins + 2 * zoom_bins(); }

  int bulk_cell(double x) const;
  /// -1 when x is outside the left/right zoom window.
  int left_zoom_cell(double x) const;
  int right_zoom_cell(double x) const;

  bool operator==(const GridLayout&) const = default;
};

struct SimConfig {
  enum class Mode { Sequential, Ensemble };

  PhysicsParams params;
  BathConditions bath;
  double dt = 1e-4;
  InjectionProtocol protocol = InjectionProtocol::Residual;
  RateModel rate_model = RateModel::Influx;
  Mode mode = Mode::Sequential;
  std::uint64_t trajectories = 25000;  // sequential
  double total_time = 0.0;             // ensemble, includes warmup
  double warmup_time = -1.0;           // ensemble; negative selects 10 L^2 gamma / eps
  std::uint64_t seed = 1;
  int bins = 100;
  double strip_width = -1.0;             // negative selects sqrt(eps)/gamma / 2
  double strip_sample_fraction = 0.01;   // Bernoulli thinning of strip velocity samples
  std::uint64_t max_steps_per_trajectory = 100'000'000;
  int blocks = 32;                       // ensemble measurement blocks
  int threads = 1;

  void validate() const;

  double resolved_warmup() const;
  double resolved_strip_width() const;
  GridLayout grid() const { return {params.length, bins}; }
};

std::string to_string(SimConfig::Mode m);
SimConfig::Mode parse_mode(const std::string& name);

/// Raw accumulators of a run. All members are additive, so partial results
/// merge by component-wise addition.
struct RawStats {
  GridLayout grid;
  double dt = 0.0;

  /// Residence time per cell.
  Eigen::VectorXd occupancy;
  /// Sum over statistical units (trajectories or blocks) of u u^T, where u is
  /// the unit's per-cell residence time.
  Eigen::MatrixXd occupancy_cross;
  std::uint64_t units = 0;
  /// Per-block residence vectors (ensemble mode only).
  std::vector<Eigen::VectorXd> blocks;

  std::array<std::uint64_t, 2> injected{0, 0};  // indexed by index_of(Side)
  std::array<std::uint64_t, 2> absorbed{0, 0};  // exits through each side
  std::uint64_t in_flight = 0;
  std::uint64_t capped = 0;
  std::int64_t midplane_crossings = 0;  // rightward minus leftward through x = L/2
  std::uint64_t steps = 0;

  /// Physical time base T used to turn residence time into concentration.
  double total_injection_time = 0.0;

  /// Inward velocities sampled in the interface strips, per side.
  std::array<std::vector<double>, 2> strip_velocities;

  RawStats() = default;
  RawStats(const GridLayout& g, double dt_);

  void merge(const RawStats& other);

  std::uint64_t injected_total() const { return injected[0] + injected[1]; }
  std::uint64_t absorbed_total() const { return absorbed[0] + absorbed[1]; }
  bool mass_balanced() const { return injected_total() == absorbed_total() + in_flight + capped; }
  double capped_fraction() const;
  /// False when capped trajectories reach 1% of injections.
  bool valid() const { return capped_fraction() < 0.01; }

  /// Net rightward midplane flux, crossings / T.
  double measured_flux() const;
  /// Time-averaged number of particles in [0, L].
  double mean_population() const;

  /// Sub-run made of ensemble blocks [first, last).
  RawStats slice_blocks(std::size_t first, std::size_t last) const;
};

/// Independent trajectories, each injected on a side chosen with probability
/// J_side/(J_L+J_R) and followed to exit or cap. Trajectory i draws from streams
/// keyed by (seed, i), so the result does not depend on config.threads.
RawStats run_sequential(const SimConfig& config);

/// Concurrent particle pool with Poisson injections each step. Statistics
/// accumulate after the warmup only.
RawStats run_ensemble(const SimConfig& config);

/// Dispatches on config.mode.
RawStats run(const SimConfig& config);

struct FluxIteration {
  SimConfig config;  // final config, with FixedFlux set to the last estimate
  RawStats stats;
  std::vector<double> flux_history;
};

/// Self-consistent rates: run, measure J at the midplane, re-run with
/// FixedFlux(J). Not needed for free particles, where J is known in closed form.
FluxIteration iterate_flux(SimConfig config, int rounds);

}  // namespace bathsim
