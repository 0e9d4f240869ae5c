#pragma once

// Reference engines used to validate the closed forms: exhaustive enumeration
// of the attack/failure event space, and Monte-Carlo simulation of the
// Poisson demand / Bernoulli layer hazard process.

#include <clopa/core.hpp>
#include <clopa/engine.hpp>
#include <clopa/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

namespace clopa::oracle {

namespace detail {

struct SecurityOutcome {
  bool a_b, a_s, a_bs, a_sb;
  bool bpcs_compromised() const { return a_b || (a_s && a_sb); }
  bool sis_compromised() const { return a_s || (a_b && a_bs); }
};

inline double bernoulli_weight(bool on, double p) { return on ? p : 1.0 - p; }

}  // namespace detail

/// Exact P[B_c], P[S_c], P[S_c, B_c] from the 16 outcomes of the independent
/// events A_B, A_S, A_BS, A_SB.
inline CyberFailureProbs enumerate_cyber_events(const SecurityPosture& posture) {
  const double p[4] = {posture.p_ab.value(), posture.p_as.value(), posture.p_abs.value(),
                       posture.p_asb.value()};
  double bc = 0.0, sc = 0.0, joint = 0.0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    const detail::SecurityOutcome o{(mask & 1U) != 0, (mask & 2U) != 0, (mask & 4U) != 0,
                                    (mask & 8U) != 0};
    const double w = detail::bernoulli_weight(o.a_b, p[0]) * detail::bernoulli_weight(o.a_s, p[1]) *
                     detail::bernoulli_weight(o.a_bs, p[2]) * detail::bernoulli_weight(o.a_sb, p[3]);
    const bool b = o.bpcs_compromised();
    const bool s = o.sis_compromised();
    if (b) bc += w;
    if (s) sc += w;
    if (b && s) joint += w;
  }
  auto clamp01 = [](double x) { return Probability(std::clamp(x, 0.0, 1.0)); };
  return {clamp01(bc), clamp01(sc), clamp01(joint)};
}

/// Exact P[(S_p or S_c) and (B_p or B_c)] over the 64 outcomes of
/// S_p, B_p, A_B, A_S, A_BS, A_SB.
inline Probability enumerate_joint_failure(Probability p_sp, Probability p_bp,
                                           const SecurityPosture& posture) {
  const double p[6] = {p_sp.value(),         p_bp.value(),          posture.p_ab.value(),
                       posture.p_as.value(), posture.p_abs.value(), posture.p_asb.value()};
  double total = 0.0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    bool on[6];
    double w = 1.0;
    for (unsigned k = 0; k < 6; ++k) {
      on[k] = ((mask >> k) & 1U) != 0;
      w *= detail::bernoulli_weight(on[k], p[k]);
    }
    const detail::SecurityOutcome o{on[2], on[3], on[4], on[5]};
    if ((on[0] || o.sis_compromised()) && (on[1] || o.bpcs_compromised())) total += w;
  }
  return Probability(std::clamp(total, 0.0, 1.0));
}

// ---------------------------------------------------------------------------
// Monte-Carlo simulation
// ---------------------------------------------------------------------------

/// SplitMix64 stream addressed by (seed, stream index). The same pair always
/// yields the same sequence, independent of which thread consumes it.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate by sequential inversion in pieces of mean <= 30.
  std::uint64_t poisson(double mean) {
    std::uint64_t count = 0;
    while (mean > 0.0) {
      const double piece = std::min(mean, 30.0);
      mean -= piece;
      double p = std::exp(-piece);
      double cdf = p;
      const double u = uniform();
      std::uint64_t k = 0;
      while (u > cdf && p > 0.0) {
        ++k;
        p *= piece / static_cast<double>(k);
        cdf += p;
      }
      count += k;
    }
    return count;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  double horizon_years = 1.0;
  unsigned threads = 1;  // 0 = hardware concurrency; results do not depend on it
};

struct SimResult {
  double mean_per_year = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hazards = 0;
};

namespace detail {

struct HazardModel {
  std::vector<double> event_means;  // lambda_i * horizon
  std::vector<double> event_layers;
  double physical_mean = 0.0;
  double cyber_mean = 0.0;
  double bpcs_layers = 1.0;
  double p_sp = 0.0;
  double p_bp = 0.0;
  double p_ab = 0.0, p_as = 0.0, p_abs = 0.0, p_asb = 0.0;

  SecurityOutcome draw_security(StreamRng& rng) const {
    return {rng.bernoulli(p_ab), rng.bernoulli(p_as), rng.bernoulli(p_abs), rng.bernoulli(p_asb)};
  }

  // One demand on the BPCS and SIS: returns {BPCS failed, SIS failed}.
  std::pair<bool, bool> demand(StreamRng& rng) const {
    const SecurityOutcome o = draw_security(rng);
    const bool s = rng.bernoulli(p_sp) || o.sis_compromised();
    const bool b = rng.bernoulli(p_bp) || o.bpcs_compromised();
    return {b, s};
  }

  std::uint64_t trial(StreamRng& rng) const {
    std::uint64_t hazards = 0;
    for (std::size_t i = 0; i < event_means.size(); ++i) {
      const auto n = rng.poisson(event_means[i]);
      for (std::uint64_t k = 0; k < n; ++k) {
        if (!rng.bernoulli(event_layers[i])) continue;
        const auto [b, s] = demand(rng);
        if (b && s) ++hazards;
      }
    }
    // Physical BPCS failures: BPCS layers, then the SIS alone.
    const auto n_physical = rng.poisson(physical_mean);
    for (std::uint64_t k = 0; k < n_physical; ++k) {
      if (!rng.bernoulli(bpcs_layers)) continue;
      const auto [b, s] = demand(rng);
      (void)b;
      if (s) ++hazards;
    }
    const auto n_cyber = rng.poisson(cyber_mean);
    for (std::uint64_t k = 0; k < n_cyber; ++k) {
      if (!rng.bernoulli(bpcs_layers)) continue;
      const auto [b, s] = demand(rng);
      if (b && s) ++hazards;
    }
    return hazards;
  }
};

}  // namespace detail

/// Simulates `config.trials` independent horizons and returns the sample mean
/// and standard error of hazards per year.
inline SimResult simulate_hazards(const LopaScenario& scenario, Probability p_sp,
                                  const SecurityPosture& posture, const SimConfig& config) {
  if (config.trials < 2 || !(config.horizon_years > 0.0) ||
      !std::isfinite(config.horizon_years)) {
    throw Error(ErrorCode::DegenerateConfig,
                "simulation needs at least 2 trials and a finite positive horizon");
  }
  detail::HazardModel model;
  const double t = config.horizon_years;
  for (const auto& e : scenario.initiating_events()) {
    model.event_means.push_back(e.likelihood.value() * t);
    model.event_layers.push_back(e.layer_pfd_product.value());
  }
  const auto& b = scenario.bpcs();
  model.physical_mean = b.lambda_physical.value() * t;
  model.cyber_mean = b.lambda_cyber.value() * t;
  model.bpcs_layers = b.layer_pfd_product.value();
  model.p_sp = p_sp.value();
  model.p_bp = b.pfd_physical.value();
  model.p_ab = posture.p_ab.value();
  model.p_as = posture.p_as.value();
  model.p_abs = posture.p_abs.value();
  model.p_asb = posture.p_asb.value();

  constexpr std::uint64_t kChunk = 8192;
  const std::uint64_t n_chunks = (config.trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> chunk_sum(n_chunks, 0);
  std::vector<std::uint64_t> chunk_sq(n_chunks, 0);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      const std::uint64_t begin = c * kChunk;
      const std::uint64_t end = std::min(config.trials, begin + kChunk);
      std::uint64_t sum = 0, sq = 0;
      for (std::uint64_t trial = begin; trial < end; ++trial) {
        StreamRng rng(config.seed, trial);
        const std::uint64_t h = model.trial(rng);
        sum += h;
        sq += h * h;
      }
      chunk_sum[c] = sum;
      chunk_sq[c] = sq;
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                         : config.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  std::uint64_t sum = 0, sq = 0;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    sum += chunk_sum[c];
    sq += chunk_sq[c];
  }
  const double n = static_cast<double>(config.trials);
  const double mean = static_cast<double>(sum) / n;
  const double var = std::max(0.0, (static_cast<double>(sq) - mean * static_cast<double>(sum)) / (n - 1.0));
  SimResult r;
  r.trials = config.trials;
  r.hazards = sum;
  r.mean_per_year = mean / t;
  r.standard_error = std::sqrt(var / n) / t;
  return r;
}

}  // namespace clopa::oracle
