#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "clusterscope/baselines.hpp"
#include "clusterscope/clustering.hpp"
#include "clusterscope/compactness.hpp"
#include "clusterscope/dataset.hpp"
#include "clusterscope/selection.hpp"
#include "clusterscope/separability.hpp"

namespace clusterscope {

struct IndexOptions {
    EpsilonPolicy epsilon;
    double mu = NeighborGraph::kDefaultMu;
    Coordinate coordinate = Coordinate::Scaled;
};

struct FilterAnalysis {
    Filter filter = Filter::Full;
    CompactnessReport compactness;
    /// Absent for a single-cluster partition.
    std::optional<MarginMatrix> margins;
    std::optional<SeparabilityReport> separability;
};

struct AnalysisReport {
    std::size_t points = 0;
    std::size_t dims = 0;
    std::size_t k = 0;
    std::vector<std::size_t> cluster_sizes;
    std::vector<Point> centers;
    std::vector<FilterAnalysis> filters;
};

/// Compactness and separability of one given partition under each filter.
AnalysisReport analyze(const PointSet& points, const Partition& partition,
                       const std::vector<Filter>& filters, const IndexOptions& options,
                       const DirectionSet& dirs);

struct SweepRow {
    std::size_t k = 0;
    double wcss = 0.0;
    std::vector<int> labels;
    CompactnessReport compactness;
    SeparabilityReport separability;
    BaselineReport baselines;
};

struct SweepReport {
    Filter filter = Filter::MeanStd;
    Coordinate coordinate = Coordinate::Scaled;
    std::vector<SweepRow> rows;
    std::vector<DecisionPoint> points;
    Selection selection;
};

/// Index values and the selected k for each partition of a sweep.
SweepReport evaluate_sweep(const PointSet& points, const std::vector<ClusteringResult>& partitions,
                           Filter filter, const IndexOptions& options, const DirectionSet& dirs);

/// Clusters for k_min..k_max, then evaluate_sweep.
SweepReport run_sweep(const PointSet& points, const SweepConfig& config, Filter filter,
                      const IndexOptions& options, const DirectionSet& dirs);

}  // namespace clusterscope
