#include "bathsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bathsim/analytic.hpp"
#include "bathsim/dynamics.hpp"

namespace bathsim {

// ---------------------------------------------------------------- GridLayout

int GridLayout::zoom_bins() const {
  return std::max(1, static_cast<int>(std::ceil(kZoomFraction * kZoomRefinement * bins - 1e-9)));
}

int GridLayout::bulk_cell(double x) const {
  const int b = static_cast<int>(x / length * bins);
  return std::clamp(b, 0, bins - 1);
}

int GridLayout::left_zoom_cell(double x) const {
  if (x < 0.0 || x >= zoom_extent()) return -1;
  return bins + std::min(static_cast<int>(x / zoom_width()), zoom_bins() - 1);
}

int GridLayout::right_zoom_cell(double x) const {
  const double from_right = length - x;
  if (from_right < 0.0 || from_right > zoom_extent()) return -1;
  // right zoom bins are ordered by increasing x, like every other grid
  const int k = std::min(static_cast<int>(from_right / zoom_width()), zoom_bins() - 1);
  return bins + zoom_bins() + (zoom_bins() - 1 - k);
}

// ----------------------------------------------------------------- SimConfig

std::string to_string(SimConfig::Mode m) { return m == SimConfig::Mode::Sequential ? "sequential" : "ensemble"; }

SimConfig::Mode parse_mode(const std::string& name) {
  if (name == "sequential") return SimConfig::Mode::Sequential;
  if (name == "ensemble") return SimConfig::Mode::Ensemble;
  throw ConfigError("unknown mode '" + name + "' (expected sequential or ensemble)");
}

void SimConfig::validate() const {
  params.validate();
  bath.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(params.gamma * dt < 1.0)) throw ConfigError("gamma * dt must be < 1");
  if (bins < 10) throw ConfigError("bins must be >= 10");
  if (!(strip_sample_fraction > 0.0 && strip_sample_fraction <= 1.0))
    throw ConfigError("strip_sample_fraction must be in (0, 1]");
  if (strip_width >= 0.0 && !(strip_width > 0.0 && strip_width <= params.length))
    throw ConfigError("strip_width must be in (0, L]");
  if (max_steps_per_trajectory == 0) throw ConfigError("max_steps_per_trajectory must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (mode == Mode::Ensemble) {
    if (!(total_time > 0.0) || !std::isfinite(total_time)) throw ConfigError("ensemble total_time must be positive");
    if (!(resolved_warmup() >= 0.0 && resolved_warmup() < total_time))
      throw ConfigError("ensemble warmup_time must lie in [0, total_time)");
    if (blocks < 2) throw ConfigError("ensemble mode needs at least 2 blocks");
    const auto measured = std::llround((total_time - resolved_warmup()) / dt);
    if (measured < blocks) throw ConfigError("ensemble measurement window shorter than one step per block");
  }
}

double SimConfig::resolved_warmup() const {
  if (warmup_time >= 0.0) return warmup_time;
  return 10.0 * params.length * params.length * params.gamma / params.epsilon;
}

double SimConfig::resolved_strip_width() const {
  if (strip_width > 0.0) return strip_width;
  return 0.5 * params.layer_width();
}

// ------------------------------------------------------------------ RawStats

RawStats::RawStats(const GridLayout& g, double dt_)
    : grid(g),
      dt(dt_),
      occupancy(Eigen::VectorXd::Zero(g.cells())),
      occupancy_cross(Eigen::MatrixXd::Zero(g.cells(), g.cells())) {}

void RawStats::merge(const RawStats& other) {
  if (occupancy.size() == 0) {
    const auto t = total_injection_time;
    *this = RawStats(other.grid, other.dt);
    total_injection_time = t;
  }
  if (!(other.grid == grid)) throw ConfigError("cannot merge statistics on different grids");
  occupancy += other.occupancy;
  occupancy_cross += other.occupancy_cross;
  units += other.units;
  blocks.insert(blocks.end(), other.blocks.begin(), other.blocks.end());
  for (int s = 0; s < 2; ++s) {
    injected[s] += other.injected[s];
    absorbed[s] += other.absorbed[s];
    strip_velocities[s].insert(strip_velocities[s].end(), other.strip_velocities[s].begin(),
                               other.strip_velocities[s].end());
  }
  in_flight += other.in_flight;
  capped += other.capped;
  midplane_crossings += other.midplane_crossings;
  steps += other.steps;
  total_injection_time += other.total_injection_time;
}

double RawStats::capped_fraction() const {
  const auto n = injected_total();
  return n == 0 ? 0.0 : static_cast<double>(capped) / static_cast<double>(n);
}

double RawStats::measured_flux() const {
  if (!(total_injection_time > 0.0)) return 0.0;
  return static_cast<double>(midplane_crossings) / total_injection_time;
}

double RawStats::mean_population() const {
  if (!(total_injection_time > 0.0)) return 0.0;
  return occupancy.head(grid.bins).sum() / total_injection_time;
}

RawStats RawStats::slice_blocks(std::size_t first, std::size_t last) const {
  if (blocks.empty() || first >= last || last > blocks.size())
    throw ConfigError("invalid block slice");
  RawStats out(grid, dt);
  const double block_time = total_injection_time / static_cast<double>(blocks.size());
  for (std::size_t b = first; b < last; ++b) {
    out.occupancy += blocks[b];
    out.occupancy_cross += blocks[b] * blocks[b].transpose();
    out.blocks.push_back(blocks[b]);
  }
  out.units = last - first;
  out.total_injection_time = block_time * static_cast<double>(last - first);
  return out;
}

// -------------------------------------------------------------------- common

namespace {

struct Rates {
  std::array<double, 2> side{0.0, 0.0};
  double total() const { return side[0] + side[1]; }
};

Rates resolve_rates(const SimConfig& config) {
  Rates r;
  r.side[0] = injection_rate(Side::Left, config.bath, config.params, config.rate_model);
  r.side[1] = injection_rate(Side::Right, config.bath, config.params, config.rate_model);
  return r;
}

// Records the in-domain phase point at one lattice time: residence in bulk
// and zoom cells, midplane crossings, and thinned strip velocities.
class Recorder {
 public:
  Recorder(const SimConfig& config)
      : grid_(config.grid()),
        zoom_extent_(grid_.zoom_extent()),
        length_(config.params.length),
        half_(0.5 * config.params.length),
        strip_(config.resolved_strip_width()),
        sample_fraction_(config.strip_sample_fraction) {}

  template <class AddFn, class SampleFn>
  void record(const ParticleState& s, double weight, RandomStream& aux, AddFn&& add, SampleFn&& sample) const {
    add(grid_.bulk_cell(s.x), weight);
    if (s.x < zoom_extent_) {
      add(grid_.left_zoom_cell(s.x), weight);
    } else if (length_ - s.x <= zoom_extent_) {
      add(grid_.right_zoom_cell(s.x), weight);
    }
    if (s.x <= strip_ && s.v > 0.0) {
      if (aux.uniform() < sample_fraction_) sample(Side::Left, s.v);
    } else if (length_ - s.x <= strip_ && s.v < 0.0) {
      if (aux.uniform() < sample_fraction_) sample(Side::Right, s.v);
    }
  }

  int crossing(double x_old, double x_new) const {
    const bool was_left = x_old < half_;
    const bool is_left = x_new < half_;
    if (was_left == is_left) return 0;
    return is_left ? -1 : 1;
  }

  const GridLayout& grid() const { return grid_; }

 private:
  GridLayout grid_;
  double zoom_extent_;
  double length_;
  double half_;
  double strip_;
  double sample_fraction_;
};

// Per-trajectory residence times over the cells it actually visited.
class Tally {
 public:
  explicit Tally(int cells) : time_(cells, 0.0), seen_(cells, 0) {}

  void add(int cell, double w) {
    if (!seen_[cell]) {
      seen_[cell] = 1;
      touched_.push_back(cell);
    }
    time_[cell] += w;
  }

  void commit(RawStats& stats) {
    for (int i : touched_) {
      const double ti = time_[i];
      stats.occupancy[i] += ti;
      for (int j : touched_) stats.occupancy_cross(i, j) += ti * time_[j];
    }
    clear();
  }

  void clear() {
    for (int i : touched_) {
      time_[i] = 0.0;
      seen_[i] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<double> time_;
  std::vector<char> seen_;
  std::vector<int> touched_;
};

double first_weight(InjectionProtocol protocol, double dt, RandomStream& rng) {
  // A residual entry is already the state at a lattice time; a boundary entry is
  // inserted at a random instant and is only present for the residual sub-time.
  if (protocol == InjectionProtocol::Residual) return dt;
  return rng.uniform_open() * dt;
}

constexpr std::uint64_t kChunk = 256;

void run_chunk(const SimConfig& config, const Rates& rates, std::uint64_t begin, std::uint64_t end, RawStats& out) {
  const auto& params = config.params;
  const StepCoefficients coeffs(params, config.dt);
  const Recorder recorder(config);
  Tally tally(recorder.grid().cells());
  const double p_left = rates.side[0] / rates.total();
  std::array<std::vector<double>, 2> samples;

  for (std::uint64_t i = begin; i < end; ++i) {
    RandomStream rng(config.seed, i, 0);
    RandomStream aux(config.seed, i, 1);

    const Side side = rng.uniform() < p_left ? Side::Left : Side::Right;
    const InjectionEvent entry = sample_entry(config.protocol, side, params, config.dt, rng);
    double weight = first_weight(config.protocol, config.dt, rng);
    ++out.injected[index_of(side)];
    ++out.units;

    ParticleState state = entry.state;
    std::int64_t crossings = 0;
    std::uint64_t steps = 0;
    bool capped = false;
    samples[0].clear();
    samples[1].clear();

    while (true) {
      recorder.record(
          state, weight, aux, [&](int cell, double w) { tally.add(cell, w); },
          [&](Side s, double v) { samples[index_of(s)].push_back(v); });
      weight = config.dt;

      const StepOutcome next = step(state, params, coeffs, rng);
      crossings += recorder.crossing(state.x, next.state.x);
      ++steps;
      if (next.kind == StepOutcome::Kind::ExitLeft) {
        ++out.absorbed[0];
        break;
      }
      if (next.kind == StepOutcome::Kind::ExitRight) {
        ++out.absorbed[1];
        break;
      }
      if (steps >= config.max_steps_per_trajectory) {
        capped = true;
        break;
      }
      state = next.state;
    }

    out.steps += steps;
    if (capped) {
      ++out.capped;
      tally.clear();
      continue;
    }
    tally.commit(out);
    out.midplane_crossings += crossings;
    for (int s = 0; s < 2; ++s)
      out.strip_velocities[s].insert(out.strip_velocities[s].end(), samples[s].begin(), samples[s].end());
  }
}

}  // namespace

// ---------------------------------------------------------------- sequential

RawStats run_sequential(const SimConfig& config) {
  config.validate();
  if (config.mode != SimConfig::Mode::Sequential) throw ConfigError("run_sequential needs sequential mode");
  const Rates rates = resolve_rates(config);
  const std::uint64_t n = config.trajectories;
  const GridLayout grid = config.grid();

  RawStats total(grid, config.dt);
  if (n == 0) return total;
  if (!(rates.total() > 0.0)) throw ConfigError("both injection rates are zero");

  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<RawStats> partial;
  partial.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) partial.emplace_back(grid, config.dt);

  auto work = [&](std::uint64_t c) { run_chunk(config, rates, c * kChunk, std::min(n, (c + 1) * kChunk), partial[c]); };

  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(config.threads, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t c = next++; c < chunks; c = next++) work(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // fixed merge order keeps the floating-point sums independent of scheduling
  for (auto& p : partial) total.merge(p);
  total.total_injection_time = static_cast<double>(n) / rates.total();
  return total;
}

// ------------------------------------------------------------------ ensemble

RawStats run_ensemble(const SimConfig& config) {
  config.validate();
  if (config.mode != SimConfig::Mode::Ensemble) throw ConfigError("run_ensemble needs ensemble mode");
  const Rates rates = resolve_rates(config);
  const auto& params = config.params;
  const GridLayout grid = config.grid();
  const StepCoefficients coeffs(params, config.dt);
  const Recorder recorder(config);

  const auto total_steps = static_cast<std::uint64_t>(std::llround(config.total_time / config.dt));
  const auto warm_steps = static_cast<std::uint64_t>(std::llround(config.resolved_warmup() / config.dt));
  const std::uint64_t measured_steps = total_steps - warm_steps;
  const auto n_blocks = static_cast<std::uint64_t>(config.blocks);

  RawStats stats(grid, config.dt);
  RandomStream rng(config.seed, 0, 2);
  RandomStream aux(config.seed, 0, 3);

  struct Particle {
    ParticleState state;
    std::uint64_t age;
    double weight;  // weight of the next recorded lattice point
  };
  std::vector<Particle> pool;
  Eigen::VectorXd block = Eigen::VectorXd::Zero(grid.cells());
  std::uint64_t block_index = 0;
  auto block_end = [&](std::uint64_t b) { return warm_steps + (b + 1) * measured_steps / n_blocks; };

  for (std::uint64_t k = 0; k < total_steps; ++k) {
    const bool measuring = k >= warm_steps;

    for (const Side side : {Side::Left, Side::Right}) {
      const InjectionBatch batch = schedule_injections(rates.side[index_of(side)], config.dt, rng);
      for (std::uint64_t p = 0; p < batch.count; ++p) {
        const InjectionEvent entry = sample_entry(config.protocol, side, params, config.dt, rng);
        const double w = config.protocol == InjectionProtocol::Residual ? config.dt : batch.sub_times[p];
        pool.push_back({entry.state, 0, w});
        ++stats.injected[index_of(side)];
      }
    }

    if (measuring) {
      for (auto& p : pool) {
        recorder.record(
            p.state, p.weight, aux, [&](int cell, double w) { block[cell] += w; },
            [&](Side s, double v) { stats.strip_velocities[index_of(s)].push_back(v); });
      }
    }

    for (std::size_t i = 0; i < pool.size();) {
      Particle& p = pool[i];
      p.weight = config.dt;
      const StepOutcome next = step(p.state, params, coeffs, rng);
      if (measuring) stats.midplane_crossings += recorder.crossing(p.state.x, next.state.x);
      ++stats.steps;
      ++p.age;
      bool remove = false;
      if (next.kind == StepOutcome::Kind::ExitLeft) {
        ++stats.absorbed[0];
        remove = true;
      } else if (next.kind == StepOutcome::Kind::ExitRight) {
        ++stats.absorbed[1];
        remove = true;
      } else if (p.age >= config.max_steps_per_trajectory) {
        ++stats.capped;
        remove = true;
      }
      if (remove) {
        p = pool.back();
        pool.pop_back();
      } else {
        p.state = next.state;
        ++i;
      }
    }

    if (measuring && k + 1 == block_end(block_index)) {
      stats.occupancy += block;
      stats.occupancy_cross += block * block.transpose();
      stats.blocks.push_back(block);
      ++stats.units;
      block.setZero();
      ++block_index;
    }
  }

  stats.in_flight = pool.size();
  stats.total_injection_time = static_cast<double>(measured_steps) * config.dt;
  return stats;
}

RawStats run(const SimConfig& config) {
  return config.mode == SimConfig::Mode::Sequential ? run_sequential(config) : run_ensemble(config);
}

FluxIteration iterate_flux(SimConfig config, int rounds) {
  if (rounds < 1) throw ConfigError("flux iteration needs at least one round");
  FluxIteration result;
  for (int r = 0; r < rounds; ++r) {
    result.stats = run(config);
    const double j = result.stats.measured_flux();
    result.flux_history.push_back(j);
    config.bath.flux_mode = FluxMode::fixed(j);
  }
  result.config = config;
  return result;
}

}  // namespace bathsim
