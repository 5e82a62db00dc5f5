#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clusterscope/compactness.hpp"
#include "clusterscope/dataset.hpp"

namespace clusterscope {

/// Z_ij: rows of cluster i within d_ij of center j, and Z_ji symmetrically.
struct AdjacentSets {
    std::vector<std::size_t> of_first;
    std::vector<std::size_t> of_second;
};

AdjacentSets adjacent_sets(const PointSet& points, std::span<const std::size_t> rows_i,
                           std::span<const std::size_t> rows_j, PointView center_i,
                           PointView center_j);

struct PairMargin {
    std::size_t i = 0;
    std::size_t j = 0;
    double center_distance = 0.0;
    double delta_ij = 0.0;  ///< max distance to center i over Z_ij, 0 if empty
    double delta_ji = 0.0;
    double margin = 0.0;         ///< d_ij - delta_ij - delta_ji
    double scaled_margin = 0.0;  ///< margin / d_ij
    AdjacentSets adjacent;
};

/// Margin between two point subsets about fixed centers.
PairMargin pair_margin(const PointSet& points, std::span<const std::size_t> rows_i,
                       std::span<const std::size_t> rows_j, PointView center_i,
                       PointView center_j);

/// Margin between clusters i and j of a partition. The filter restricts the
/// points of each cluster; centers stay the full-cluster centroids.
PairMargin pair_margin(const PointSet& points, const Partition& partition, std::size_t i,
                       std::size_t j, Filter filter = Filter::Full);

class MarginMatrix {
public:
    MarginMatrix(std::size_t k, Filter filter);

    std::size_t k() const noexcept { return k_; }
    Filter filter() const noexcept { return filter_; }
    double margin(std::size_t i, std::size_t j) const noexcept { return margin_[i * k_ + j]; }
    double scaled(std::size_t i, std::size_t j) const noexcept { return scaled_[i * k_ + j]; }
    /// Unordered pairs (i < j) in row-major order.
    const std::vector<PairMargin>& pairs() const noexcept { return pairs_; }

    void set(PairMargin pm);

private:
    std::size_t k_;
    Filter filter_;
    std::vector<double> margin_;
    std::vector<double> scaled_;
    std::vector<PairMargin> pairs_;
};

MarginMatrix margin_matrix(const Partition& partition, const PointSet& points,
                           Filter filter = Filter::Full);

/// Directed neighbor relation between cluster centers.
struct NeighborGraph {
    double mu = kDefaultMu;
    std::vector<std::vector<std::size_t>> neighbors;

    std::size_t total() const noexcept;

    static constexpr double kDefaultMu = 0.7071;
};

/// j is a neighbor of i unless some third center q, seen from center i within
/// cos >= mu of the direction to j, is no farther from i than j is.
NeighborGraph neighbor_graph(std::span<const Point> centers, double mu = NeighborGraph::kDefaultMu);
NeighborGraph neighbor_graph(const Partition& partition, double mu = NeighborGraph::kDefaultMu);

struct SeparabilityReport {
    Filter filter = Filter::Full;
    double mu = NeighborGraph::kDefaultMu;
    std::vector<std::vector<std::size_t>> neighbors;
    /// J_i: neighbors j of i with positive margin.
    std::vector<std::vector<std::size_t>> separated;
    std::size_t n_total = 0;
    std::size_t n_separated = 0;
    double ratio = 0.0;
    /// Smallest positive neighbor margin per cluster (0 when there is none).
    std::vector<double> cluster_margins;
    double distribution_margin = 0.0;
    double total_margin_raw = 0.0;
    double total_margin_scaled = 0.0;
};

SeparabilityReport separability_report(const MarginMatrix& margins, const NeighborGraph& graph);

/// Margin matrix, neighbor graph and report in one call.
SeparabilityReport separability(const Partition& partition, const PointSet& points,
                                Filter filter = Filter::Full,
                                double mu = NeighborGraph::kDefaultMu);

}  // namespace clusterscope
