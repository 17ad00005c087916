#pragma once

#include <optional>
#include <vector>

#include "prdim/types.hpp"

namespace prdim {

enum class LocalMetric { euclidean, local_mahalanobis };

// A metric ball for local dimensionality. With the local Mahalanobis
// metric, each center gets its own quadratic form: the pseudoinverse of
// the covariance of its k nearest Euclidean neighbors, which stretches
// the ball along the local tangent directions.
struct BallSpec {
    double radius = 1.0;
    LocalMetric metric = LocalMetric::euclidean;
    int k_neighbors = 0;  // 0 -> min(P - 1, 20)

    void validate(Index p) const;
};

struct LocalCenterEstimate {
    Index center = 0;
    Index ball_size = 0;
    DimEstimate estimate;
};

struct LocalDimResult {
    double radius = 0.0;
    double mean_gamma = 0.0;  // over valid centers only
    std::vector<LocalCenterEstimate> per_center;
    Index skipped_centers = 0;  // balls with < 4 points or invalid estimates
    Index valid_centers = 0;
};

// Weighted dimensionality on the ball around every row: weight 1 inside,
// 0 outside (ties at the boundary included), realised as the estimator on
// the in-ball row set. Balls with fewer than four points are skipped and
// counted; so are centers whose estimate is invalid.
// For a TrialPair, distances are measured on the element-wise trial mean.
LocalDimResult local_dimensionality(const SampleMatrix& phi, const BallSpec& ball,
                                    const EstimatorVariant& variant, int threads = 0);
LocalDimResult local_dimensionality(const TrialPair& pair, const BallSpec& ball,
                                    const EstimatorVariant& variant, int threads = 0);

// One result per radius, sharing the per-center distance and metric
// computation across radii. Radii must be ascending and positive.
std::vector<LocalDimResult> radius_sweep(const SampleMatrix& phi, const BallSpec& ball_template,
                                         const std::vector<double>& radii,
                                         const EstimatorVariant& variant, int threads = 0);
std::vector<LocalDimResult> radius_sweep(const TrialPair& pair, const BallSpec& ball_template,
                                         const std::vector<double>& radii,
                                         const EstimatorVariant& variant, int threads = 0);

// Two-nearest-neighbor intrinsic dimension: d = N / sum_i log(r2_i/r1_i).
// Duplicate rows make r1 = 0 and are rejected.
double twonn(const SampleMatrix& phi);

}  // namespace prdim
