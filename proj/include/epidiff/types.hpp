// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

namespace epidiff {

/// Largest spatial dimension supported by the fixed-capacity point type.
inline constexpr int kMaxDim = 8;

template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

template <typename Scalar>
using SquareT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

using Point = PointT<double>;
using Square = SquareT<double>;

/// Columns are points in R^d.
using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

using Index = std::int64_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed-ball membership |b - a| <= r, computed the same way everywhere so
/// that instantaneous contacts agree bit-for-bit across engines.
template <typename DerivedA, typename DerivedB>
inline bool within_closed_ball(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                               double radius) {
  return (b - a).squaredNorm() <= radius * radius;
}

}  // namespace epidiff
