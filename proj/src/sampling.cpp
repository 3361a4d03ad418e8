// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/sampling.hpp"

#include <random>

namespace epidiff {

PointCloud sample_poisson_cloud(double lambda, double half_width, int dim, Stream& stream) {
  PointCloud cloud = PointCloud::Zero(dim, 1);
  append_poisson_points(cloud, lambda, half_width, stream);
  return cloud;
}

void append_poisson_points(PointCloud& cloud, double lambda, double half_width, Stream& stream) {
  const auto dim = cloud.rows();
  const double mean = lambda * std::pow(2.0 * half_width, static_cast<double>(dim));
  Index count = 0;
  if (mean > 0.0) count = std::poisson_distribution<Index>(mean)(stream);
  const Index start = cloud.cols();
  cloud.conservativeResize(Eigen::NoChange, start + count);
  for (Index c = start; c < start + count; ++c) {
    for (Index k = 0; k < dim; ++k) cloud(k, c) = half_width * (2.0 * stream.uniform() - 1.0);
  }
}

double sample_lifetime(double alpha, const Stream& stream) {
  return lifetime_from_exponential(stream.exponential_at(0), alpha);
}

}  // namespace epidiff
