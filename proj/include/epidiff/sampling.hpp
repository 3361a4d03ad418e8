// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/rng.hpp"
#include "epidiff/types.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace epidiff {

/// Rate-lambda Poisson cloud on [-L, L]^d conditioned to contain the origin.
/// Column 0 is the origin; the count of the others is Poisson(lambda (2L)^d)
/// and their positions are i.i.d. uniform.
PointCloud sample_poisson_cloud(double lambda, double half_width, int dim, Stream& stream);

/// Superposes an independent rate-`lambda` cloud (without origin) onto `cloud`.
void append_poisson_points(PointCloud& cloud, double lambda, double half_width, Stream& stream);

/// Exp(alpha) lifetime as E / alpha with E the stream's first standard
/// exponential. alpha == 0 gives +inf.
double sample_lifetime(double alpha, const Stream& stream);

inline double lifetime_from_exponential(double standard_exponential, double alpha) {
  return alpha == 0.0 ? kInf : standard_exponential / alpha;
}

class ThinningBoundError : public std::runtime_error {
 public:
  ThinningBoundError(double time, double rate, double bound)
      : std::runtime_error("thinning bound violated: rate " + std::to_string(rate) + " > bound " +
                           std::to_string(bound) + " at t=" + std::to_string(time)) {}
};

/// First point of an inhomogeneous Poisson process with intensity `rate(s)`
/// on [0, window], by thinning a homogeneous rate-`rate_bound` process.
template <typename RateFn>
std::optional<double> sample_first_contact_thinned(RateFn&& rate, double rate_bound, double window, Stream& stream) {
  if (!(rate_bound > 0.0)) return std::nullopt;
  double t = 0.0;
  while (true) {
    t += stream.exponential() / rate_bound;
    if (!(t <= window)) return std::nullopt;
    const double r = rate(t);
    if (r > rate_bound * (1.0 + 1e-12)) throw ThinningBoundError(t, r, rate_bound);
    if (stream.uniform() * rate_bound < r) return t;
  }
}

/// Banded thinning: the dominating process is a unit-intensity planar Poisson
/// process on [0, inf) x [0, rate_bound), generated in horizontal bands of
/// height `band_height`, band b drawn from `band_stream(b)`. A proposal (t, y)
/// is accepted iff y < rate(t). Because the planar process does not depend on
/// the rate, raising the rate pointwise can only make the first contact earlier.
template <typename RateFn, typename BandStreamFn>
std::optional<double> sample_first_contact_banded(RateFn&& rate, double rate_bound, double band_height,
                                                  double window, BandStreamFn&& band_stream) {
  if (!(rate_bound > 0.0) || !(band_height > 0.0)) return std::nullopt;
  const auto bands = static_cast<std::uint64_t>(std::ceil(rate_bound / band_height - 1e-12));
  double best = kInf;
  for (std::uint64_t b = 0; b < bands; ++b) {
    Stream stream = band_stream(b);
    const double floor_height = static_cast<double>(b) * band_height;
    double t = 0.0;
    while (true) {
      t += stream.exponential() / band_height;
      const double y = floor_height + stream.uniform() * band_height;
      if (!(t <= window) || !(t < best)) break;
      if (y >= rate_bound) continue;
      const double r = rate(t);
      if (r > rate_bound * (1.0 + 1e-12)) throw ThinningBoundError(t, r, rate_bound);
      if (y < r) {
        best = t;
        break;
      }
    }
  }
  if (best == kInf) return std::nullopt;
  return best;
}

}  // namespace epidiff
