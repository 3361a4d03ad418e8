// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace epidiff {
namespace {

// Normals at indices [first, first + count), sharing Box-Muller blocks.
void fill_normals(const Stream& stream, std::uint64_t first, int count, double* out) {
  int i = 0;
  while (i < count) {
    const std::uint64_t index = first + static_cast<std::uint64_t>(i);
    if ((index & 1u) == 0 && i + 1 < count) {
      const auto b = stream.block(index >> 1);
      const double radius = std::sqrt(-2.0 * std::log(1.0 - Stream::to_unit(b[0])));
      const double angle = 2.0 * std::numbers::pi * Stream::to_unit(b[1]);
      out[i] = radius * std::cos(angle);
      out[i + 1] = radius * std::sin(angle);
      i += 2;
    } else {
      out[i] = stream.normal_at(index);
      ++i;
    }
  }
}

}  // namespace

SampledPath::SampledPath(int dim, double dt, double max_time, Index granularity)
    : dim_(dim), dt_(dt), max_time_(max_time), granularity_(std::max<Index>(granularity, 1)) {
  if (!(dt > 0.0)) throw std::invalid_argument("path time step must be positive");
  const double raw = std::ceil(max_time / dt - 1e-9);
  const Index steps = raw > 4e15 ? Index{4'000'000'000'000'000} : std::max<Index>(static_cast<Index>(raw), 1);
  max_steps_ = ((steps + granularity_ - 1) / granularity_) * granularity_;
  points_ = PointCloud::Zero(dim, 64);
}

void SampledPath::ensure_steps(Index steps) {
  steps = std::min(steps, max_steps_);
  if (steps <= this->steps()) return;
  steps = ((steps + granularity_ - 1) / granularity_) * granularity_;
  const Index new_size = steps + 1;
  if (new_size > points_.cols()) {
    const Index capacity = std::max<Index>(new_size, 2 * points_.cols());
    points_.conservativeResize(Eigen::NoChange, capacity);
  }
  const Index from = size_;
  generate(from, new_size);
  size_ = new_size;
  update_boxes(from);
}

void SampledPath::ensure_time(double t) {
  if (!(t > horizon())) return;
  const double raw = std::ceil(t / dt_ - 1e-9);
  ensure_steps(raw >= static_cast<double>(max_steps_) ? max_steps_ : static_cast<Index>(raw));
}

void SampledPath::update_boxes(Index first_new_point) {
  const Index chunks = chunk_count();
  const Index first_chunk = std::max<Index>((first_new_point - 1) / kPathChunk, 0);
  if (lo_.cols() < chunks) {
    const Index capacity = std::max<Index>(chunks, 2 * lo_.cols());
    lo_.conservativeResize(dim_, capacity);
    hi_.conservativeResize(dim_, capacity);
  }
  for (Index c = first_chunk; c < chunks; ++c) {
    const Index begin = c * kPathChunk;
    const Index end = std::min((c + 1) * kPathChunk, steps());
    const auto block = points_.middleCols(begin, end - begin + 1);
    lo_.col(c) = block.rowwise().minCoeff();
    hi_.col(c) = block.rowwise().maxCoeff();
  }
}

Point SampledPath::interpolate(double t) const {
  if (t <= 0.0) return points_.col(0);
  const double pos = t / dt_;
  const Index k = std::min<Index>(static_cast<Index>(pos), steps());
  if (k >= steps()) return points_.col(steps());
  const double frac = pos - static_cast<double>(k);
  return (1.0 - frac) * points_.col(k) + frac * points_.col(k + 1);
}

DiscretizedPath::DiscretizedPath(const DiffusionSpec& spec, int dim, double coarse_dt, int refine_levels,
                                 double max_time, std::uint64_t master_seed, const StreamKey& key)
    : SampledPath(dim, coarse_dt / static_cast<double>(Index{1} << refine_levels), max_time,
                  Index{1} << refine_levels),
      spec_(std::make_shared<const DiffusionSpec>(spec)),
      exact_(has_exact_increments(spec)),
      levels_(refine_levels),
      coarse_dt_(coarse_dt),
      seed_(master_seed),
      key_(key),
      coarse_noise_(master_seed, key) {
  if (refine_levels < 0 || refine_levels > 20) throw std::invalid_argument("refine_levels must be in [0, 20]");
  for (int level = 1; level <= refine_levels + 1; ++level) {
    refine_noise_.emplace_back(master_seed, StreamKey{key.replicate, key.particle, Purpose::Refine,
                                                      key.sub * 64 + static_cast<std::uint64_t>(level)});
  }
  if (exact_) note_variance_rate(1.0);
}

void DiscretizedPath::fill_coarse_interval(Index coarse, const Point& start, PointCloud& fine) const {
  const int d = dim();
  const Index n = Index{1} << levels_;
  // Driving Wiener path relative to the interval start, at n + 1 fine nodes.
  thread_local PointCloud wiener;
  wiener.resize(d, n + 1);
  wiener.col(0).setZero();
  double noise[kMaxDim];
  fill_normals(coarse_noise_, static_cast<std::uint64_t>(coarse) * d, d, noise);
  for (int j = 0; j < d; ++j) wiener(j, n) = std::sqrt(coarse_dt_) * noise[j];
  for (int level = 1; level <= levels_; ++level) {
    const Index span = n >> (level - 1);
    const Index parents = Index{1} << (level - 1);
    const double scale = std::sqrt(coarse_dt_ / static_cast<double>(parents) / 4.0);
    const Stream& stream = refine_noise_[level - 1];
    for (Index m = 0; m < parents; ++m) {
      const Index left = m * span;
      const Index mid = left + span / 2;
      fill_normals(stream, static_cast<std::uint64_t>(coarse * parents + m) * d, d, noise);
      for (int j = 0; j < d; ++j) {
        wiener(j, mid) = 0.5 * (wiener(j, left) + wiener(j, left + span)) + scale * noise[j];
      }
    }
  }

  const double h = dt();
  fine.resize(d, n + 1);
  fine.col(0) = start;
  std::visit(
      [&](const auto& motion) {
        using T = std::decay_t<decltype(motion)>;
        for (Index f = 0; f < n; ++f) {
          const Point dw = wiener.col(f + 1) - wiener.col(f);
          const Point x = fine.col(f);
          if constexpr (std::is_same_v<T, StandardBrownian>) {
            fine.col(f + 1) = x + dw;
          } else if constexpr (std::is_same_v<T, BrownianWithDrift>) {
            fine.col(f + 1) = x + h * motion.drift + dw;
          } else if constexpr (std::is_same_v<T, OrnsteinUhlenbeck>) {
            fine.col(f + 1) = x + h * (motion.matrix * x) + dw;
          } else {
            fine.col(f + 1) = x + h * motion.drift(x) + motion.sigma(x) * dw;
          }
        }
      },
      spec_->variant);
}

void DiscretizedPath::generate(Index from, Index to) {
  const Index n = Index{1} << levels_;
  for (Index first = from; first < to; first += n) {
    const Index coarse = (first - 1) / n;
    fill_coarse_interval(coarse, point(first - 1), scratch_);
    for (Index f = 1; f <= n; ++f) mutable_point(first - 1 + f) = scratch_.col(f);
    if (!exact_) {
      for (Index f = 0; f < n; ++f) note_variance_rate(epidiff::max_variance_rate(*spec_, Point(scratch_.col(f))));
    }
  }
}

double DiscretizedPath::variance_rate(Index k, const Point& u) const {
  if (exact_) return u.squaredNorm();
  return variance_rate_along(*spec_, point(k), u);
}

Point DiscretizedPath::midpoint(Index k) {
  ensure_steps(k + 1);
  if (k + 1 > steps()) throw std::out_of_range("midpoint beyond path horizon");
  const int d = dim();
  double noise[kMaxDim];
  fill_normals(refine_noise_[levels_], static_cast<std::uint64_t>(k) * d, d, noise);
  const double scale = std::sqrt(dt() / 4.0);
  Point bridge(d);
  for (int j = 0; j < d; ++j) bridge(j) = scale * noise[j];
  const Point x = point(k);
  Point mid = 0.5 * (x + point(k + 1));
  if (exact_) return mid + bridge;
  return mid + sigma_at(*spec_, x, d) * bridge;
}

DifferencePath::DifferencePath(DiscretizedPath first, DiscretizedPath second)
    : SampledPath(first.dim(), first.dt(), std::min(first.max_time(), second.max_time())),
      first_(std::move(first)),
      second_(std::move(second)) {
  if (first_.dim() != second_.dim() || first_.dt() != second_.dt())
    throw std::invalid_argument("difference path needs matching grids");
}

void DifferencePath::generate(Index from, Index to) {
  first_.ensure_steps(to - 1);
  second_.ensure_steps(to - 1);
  for (Index k = from; k < to; ++k) {
    mutable_point(k) = first_.point(k) - second_.point(k);
    note_variance_rate(first_.max_variance_rate() + second_.max_variance_rate());
  }
}

double DifferencePath::variance_rate(Index k, const Point& u) const {
  return first_.variance_rate(k, u) + second_.variance_rate(k, u);
}

Point DifferencePath::midpoint(Index k) {
  ensure_steps(k + 1);
  return first_.midpoint(k) - second_.midpoint(k);
}

PathCursor::PathCursor(const DiffusionSpec& spec, int dim, double coarse_dt, int refine_levels,
                       std::uint64_t master_seed, const StreamKey& key)
    : path_(spec, dim, coarse_dt, refine_levels, coarse_dt, master_seed, key),
      fine_per_coarse_(Index{1} << refine_levels),
      current_(Point::Zero(dim)) {
  path_.fill_coarse_interval(0, Point::Zero(dim), buffer_);
}

const Point& PathCursor::advance_to(Index k) {
  if (k < step_) throw std::invalid_argument("path cursor cannot move backwards");
  while (k > (interval_ + 1) * fine_per_coarse_) {
    const Point start = buffer_.col(fine_per_coarse_);
    ++interval_;
    path_.fill_coarse_interval(interval_, start, buffer_);
  }
  step_ = k;
  current_ = buffer_.col(k - interval_ * fine_per_coarse_);
  return current_;
}

void write_path_csv(const SampledPath& path, std::ostream& out) {
  out << "t";
  for (int j = 0; j < path.dim(); ++j) out << ",x_" << (j + 1);
  out << '\n';
  for (Index k = 0; k <= path.steps(); ++k) {
    out << static_cast<double>(k) * path.dt();
    for (int j = 0; j < path.dim(); ++j) out << ',' << path.point(k)(j);
    out << '\n';
  }
}

}  // namespace epidiff
