#pragma once

// Independent reference model for the tests: hazard rate by brute-force
// enumeration over every physical and cyber failure combination, and the SIS
// PFD bound obtained by solving E[H](p) = TMEL for the linear function p.

#include <cmath>
#include <random>
#include <vector>

namespace ref {

struct Event {
  double lambda;
  double layers;
};

struct Model {
  std::vector<Event> events;
  double tmel;
  double p_bp;
  double lambda_p;
  double lambda_c;
  double bpcs_layers;
  double p_ab, p_as, p_abs, p_asb;
};

struct Joint {
  double sis;       // P[S]
  double sis_bpcs;  // P[S and B]
};

inline Joint enumerate(const Model& m, double p_sp) {
  Joint j{0.0, 0.0};
  const double p[6] = {p_sp, m.p_bp, m.p_ab, m.p_as, m.p_abs, m.p_asb};
  for (int mask = 0; mask < 64; ++mask) {
    double w = 1.0;
    bool x[6];
    for (int k = 0; k < 6; ++k) {
      x[k] = (mask >> k) & 1;
      w *= x[k] ? p[k] : 1.0 - p[k];
    }
    const bool bpcs_cyber = x[2] || (x[3] && x[5]);
    const bool sis_cyber = x[3] || (x[2] && x[4]);
    const bool s = x[0] || sis_cyber;
    const bool b = x[1] || bpcs_cyber;
    if (s) j.sis += w;
    if (s && b) j.sis_bpcs += w;
  }
  return j;
}

inline double hazard_rate(const Model& m, double p_sp) {
  const Joint j = enumerate(m, p_sp);
  double demand = m.lambda_c * m.bpcs_layers;
  for (const auto& e : m.events) demand += e.lambda * e.layers;
  return demand * j.sis_bpcs + m.lambda_p * m.bpcs_layers * j.sis;
}

/// (TMEL - E[H](0)) / (E[H](1) - E[H](0)), unclamped.
inline double pfd_ratio(const Model& m) {
  const double h0 = hazard_rate(m, 0.0);
  const double h1 = hazard_rate(m, 1.0);
  return (m.tmel - h0) / (h1 - h0);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

/// Random model with probabilities drawn from [lo, hi].
template <class Rng>
Model random_model(Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> prob(lo, hi);
  std::uniform_real_distribution<double> rate(0.0, 2.0);
  std::uniform_int_distribution<int> count(0, 4);
  Model m{};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) m.events.push_back({rate(rng), prob(rng)});
  m.tmel = std::pow(10.0, std::uniform_real_distribution<double>(-7.0, -1.0)(rng));
  m.p_bp = prob(rng);
  m.lambda_p = rate(rng);
  m.lambda_c = rate(rng);
  m.bpcs_layers = prob(rng);
  m.p_ab = prob(rng);
  m.p_as = prob(rng);
  m.p_abs = prob(rng);
  m.p_asb = prob(rng);
  return m;
}

}  // namespace ref
