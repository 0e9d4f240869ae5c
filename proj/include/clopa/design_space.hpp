#pragma once

// Geometry of the SIS design region over (P[A_S], P[A_BS]).
//
// A point is realizable when the required SIS PFD is non-negative:
//   gamma1*a + gamma2*b - gamma2*a*b <= beta.
// The boundary of that region is the locus PFD = 0 (RRF -> infinity); the
// RRF contours are the loci PFD = 1/C.

#include <clopa/core.hpp>
#include <clopa/engine.hpp>
#include <clopa/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace clopa {

struct RegionLimits {
  Probability max_pas;   // beta / gamma1, capped at 1
  Probability max_pabs;  // beta / gamma2, capped at 1
  double rrf_min = 0.0;  // gamma3 / beta
};

struct CurveSample {
  Probability p_as;
  Probability p_abs;
};

struct RrfGradient {
  double d_pas = 0.0;
  double d_pabs = 0.0;
};

/// Slack of the realizability constraint; negative outside the region.
inline double region_slack(const ClopaCoefficients& c, double p_as, double p_abs) {
  return c.beta - (c.gamma1 * p_as + c.gamma2 * p_abs - c.gamma2 * p_as * p_abs);
}

inline bool in_design_region(const ClopaCoefficients& c, Probability p_as, Probability p_abs) {
  return region_slack(c, p_as.value(), p_abs.value()) >= 0.0;
}

inline RegionLimits region_limits(const ClopaCoefficients& c) {
  if (!(c.gamma1 > 0.0 && c.gamma2 > 0.0 && c.gamma3 > 0.0 && c.beta > 0.0)) {
    throw Error(ErrorCode::DegenerateCoefficients,
                "region limits need positive gamma1, gamma2, gamma3 and beta");
  }
  return RegionLimits{Probability(std::min(1.0, c.beta / c.gamma1)),
                      Probability(std::min(1.0, c.beta / c.gamma2)), c.gamma3 / c.beta};
}

namespace detail {

// Values within rounding of an end of [0, 1] are snapped onto it.
inline std::optional<Probability> as_probability(double x) {
  constexpr double kSnap = 1e-12;
  if (!(x >= -kSnap && x <= 1.0 + kSnap)) return std::nullopt;
  return Probability(std::clamp(x, 0.0, 1.0));
}

}  // namespace detail

/// P[A_BS] on the design boundary for a given P[A_S]; empty outside the
/// domain of the curve.
inline std::optional<Probability> boundary_pabs(const ClopaCoefficients& c, Probability p_as) {
  const double a = p_as.value();
  if (!(a < 1.0) || !(c.gamma2 > 0.0) || !(c.beta > 0.0)) return std::nullopt;
  if (a * c.gamma1 > c.beta * (1.0 + 1e-12)) return std::nullopt;
  const double b = (c.beta / c.gamma2) * (1.0 - (c.gamma1 / c.beta) * a) / (1.0 - a);
  return detail::as_probability(b);
}

/// Contour of constant SIS PFD, parameterized directly by the PFD. A PFD of
/// zero reproduces the design boundary.
inline std::optional<Probability> contour_pabs_at_pfd(const ClopaCoefficients& c, double pfd,
                                                      Probability p_as) {
  const double a = p_as.value();
  if (!(a < 1.0) || !(c.gamma2 > 0.0) || !(pfd >= 0.0 && pfd < 1.0)) return std::nullopt;
  const double lead = pfd * c.gamma3 - c.beta;
  if (lead == 0.0) return std::nullopt;
  const double b = lead / (c.gamma2 * (pfd - 1.0)) *
                   (1.0 - ((pfd * c.gamma3 - c.gamma1) / lead) * a) / (1.0 - a);
  return detail::as_probability(b);
}

/// P[A_BS] at which the required RRF equals `rrf_target` for a given P[A_S].
inline std::optional<Probability> contour_pabs(const ClopaCoefficients& c, double rrf_target,
                                               Probability p_as) {
  if (rrf_target == 1.0) {
    throw Error(ErrorCode::Degenerate, "contour undefined for RRF = 1");
  }
  if (!(c.beta > 0.0) || !(rrf_target > c.gamma3 / c.beta)) {
    throw Error(ErrorCode::RrfBelowMinimum,
                "RRF " + std::to_string(rrf_target) + " does not exceed the minimum " +
                    std::to_string(c.gamma3 / c.beta));
  }
  const double a = p_as.value();
  if (!(a < 1.0) || !(c.gamma2 > 0.0)) return std::nullopt;
  const double lead = rrf_target * c.beta - c.gamma3;
  const double b = lead / (c.gamma2 * (rrf_target - 1.0)) *
                   (1.0 - ((rrf_target * c.gamma1 - c.gamma3) / lead) * a) / (1.0 - a);
  return detail::as_probability(b);
}

/// Constants of the contour family written in the form
///   P[A_BS] = (k / (C - 1)) * ((C - c0) - (C - c1) P[A_S]) / (1 - P[A_S])
/// with C the SIS PFD: k = gamma3/gamma2, c0 = beta/gamma3, c1 = gamma1/gamma3.
struct ContourConstants {
  double prefactor = 0.0;
  double offset = 0.0;
  double slope = 0.0;
};

inline ContourConstants contour_constants(const ClopaCoefficients& c) {
  return {c.gamma3 / c.gamma2, c.beta / c.gamma3, c.gamma1 / c.gamma3};
}

namespace detail {

// Largest sampled P[A_S]: the curve's own intercept, kept strictly below 1.
inline double grid_upper(double intercept) {
  constexpr double kOpenEnd = 1.0 - 1e-9;
  return std::min(intercept, kOpenEnd);
}

template <class PointFn>
std::vector<CurveSample> sample_curve(double upper, std::size_t n_samples, PointFn&& point) {
  if (n_samples < 2) throw Error(ErrorCode::Degenerate, "need at least two samples");
  std::vector<CurveSample> out;
  out.reserve(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double a = k + 1 == n_samples
                         ? upper
                         : upper * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    const Probability p_as(a);
    if (auto b = point(p_as)) out.push_back({p_as, *b});
  }
  return out;
}

}  // namespace detail

/// Uniform P[A_S] grid from 0 to the boundary's P[A_S] intercept.
inline std::vector<CurveSample> sample_boundary(const ClopaCoefficients& c, std::size_t n_samples) {
  const double upper = detail::grid_upper(c.gamma1 > 0.0 ? c.beta / c.gamma1 : 1.0);
  return detail::sample_curve(upper, n_samples,
                              [&](Probability a) { return boundary_pabs(c, a); });
}

/// Uniform P[A_S] grid from 0 to where the RRF = C contour meets P[A_BS] = 0.
inline std::vector<CurveSample> sample_contour(const ClopaCoefficients& c, double rrf_target,
                                               std::size_t n_samples) {
  // Validates rrf_target before the grid is built.
  (void)contour_pabs(c, rrf_target, Probability(0.0));
  const double lead = rrf_target * c.beta - c.gamma3;
  const double intercept = lead / (rrf_target * c.gamma1 - c.gamma3);
  return detail::sample_curve(detail::grid_upper(intercept), n_samples,
                              [&](Probability a) { return contour_pabs(c, rrf_target, a); });
}

/// Analytic partial derivatives of the required RRF.
inline RrfGradient rrf_gradient(const ClopaCoefficients& c, Probability p_as, Probability p_abs) {
  const double a = p_as.value();
  const double b = p_abs.value();
  const double num = c.beta - c.gamma1 * a - c.gamma2 * b * (1.0 - a);
  const double den = (1.0 - a) * (c.gamma3 - c.gamma2 * b);
  if (!(num > 0.0) || !(den > 0.0)) {
    throw Error(ErrorCode::InfeasiblePoint, "gradient requested outside the design region");
  }
  const double dnum_da = -c.gamma1 + c.gamma2 * b;
  const double dnum_db = -c.gamma2 * (1.0 - a);
  const double dden_da = -c.gamma3 + c.gamma2 * b;
  const double dden_db = -c.gamma2 * (1.0 - a);
  const double inv = 1.0 / (num * num);
  return {(dden_da * num - den * dnum_da) * inv, (dden_db * num - den * dnum_db) * inv};
}

}  // namespace clopa
