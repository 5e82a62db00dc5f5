#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clusterscope/dataset.hpp"

namespace clusterscope {

// Partitions for index sweeps. This is an incremental k-means: the solution
// for k+1 is warm-started from the best k-center solution by inserting one
// k-means++ center, and competes with independent k-means++ restarts.

struct SweepConfig {
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    std::size_t restarts = 10;
    std::uint64_t seed = 1;
    std::size_t max_iters = 300;
    /// Stop when the relative objective improvement falls to this value.
    double tol = 1e-6;
};

struct ClusteringResult {
    std::size_t k = 0;
    std::vector<int> labels;
    std::vector<Point> centers;
    /// Within-cluster sum of squared distances to the centroids.
    double wcss = 0.0;
};

/// One result per k in [k_min, k_max], ascending. WCSS is non-increasing in k.
std::vector<ClusteringResult> incremental_kmeans_sweep(const PointSet& points,
                                                       const SweepConfig& config);

/// Nearest-center labels, ties to the smaller center index.
std::vector<int> assign_voronoi(const PointSet& points, std::span<const Point> centers);

}  // namespace clusterscope
