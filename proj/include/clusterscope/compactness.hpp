#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clusterscope/dataset.hpp"

namespace clusterscope {

/// Outlier filters applied to a cluster before indices are computed.
///   Full   - every point
///   MeanStd - points with d <= R_av + 2 s_d
///   Median - points with d <= median of the distinct distances
enum class Filter { Full, MeanStd, Median };

std::string_view to_string(Filter f);
std::optional<Filter> parse_filter(std::string_view s);

/// Sorted distinct center distances of one cluster ("rungs"), with rung 0 fixed at 0.
///
/// Distances closer than 1e-9 * max(1, R_A) share a rung whose value is the
/// largest distance in the group, so the top rung equals R_A exactly. Points
/// at distance ~0 from the center sit on rung 0.
struct DistanceLadder {
    Point center;
    /// Surviving point rows (global indices into the PointSet), in input order.
    std::vector<std::size_t> rows;
    /// Center distance of each surviving row.
    std::vector<double> distances;
    /// Rung index of each surviving row.
    std::vector<std::size_t> rung_of;
    /// rungs[0] == 0 < rungs[1] < ... < rungs[p].
    std::vector<double> rungs;
    double radius = 0.0;
    double mean_radius = 0.0;
    /// Population standard deviation of the distinct distances.
    double distinct_sd = 0.0;
    Filter filter = Filter::Full;
    std::size_t dropped = 0;

    std::size_t p() const noexcept { return rungs.size() - 1; }
    double gap(std::size_t i) const noexcept { return rungs[i] - rungs[i - 1]; }
};

DistanceLadder build_ladder(const PointSet& points, std::span<const std::size_t> rows,
                            PointView center, Filter filter = Filter::Full);

/// Mean center distance over points whose rung lies within t; 0 when none does.
double compactness_function(const DistanceLadder& ladder, double t);

struct GapPartition {
    double epsilon = 0.0;
    /// Rung indices i in 1..p with gap <= epsilon.
    std::vector<std::size_t> dense;
    /// Rung indices i in 1..p with gap > epsilon.
    std::vector<std::size_t> sparse;
    double min_gap = 0.0;
    double max_gap = 0.0;
};

GapPartition partition_gaps(const DistanceLadder& ladder, double epsilon);

struct Shell {
    std::size_t first_rung = 0;  ///< first dense index of the merged run
    std::size_t last_rung = 0;   ///< last dense index of the merged run
    double inner = 0.0;          ///< r_{j-1}
    double outer = 0.0;          ///< r_j
    std::vector<std::size_t> rows;
};

struct ShellDecomposition {
    std::vector<Shell> shells;
    /// Points on the outer rung of a sparse gap; they fall in no shell.
    std::size_t unshelled = 0;
};

ShellDecomposition decompose_shells(const DistanceLadder& ladder, const GapPartition& gaps);

/// Unit probe directions forming a positive spanning set, with cosine threshold eta.
class DirectionSet {
public:
    DirectionSet(std::vector<Point> directions, double eta);

    /// {+e_1..+e_n, -e_1..-e_n}.
    static DirectionSet coordinate(std::size_t dims, double eta = kDefaultEta);
    /// One unit vector per line, comma-separated.
    static DirectionSet load(const std::filesystem::path& path, double eta = kDefaultEta);

    std::size_t size() const noexcept { return directions_.size(); }
    std::size_t dims() const noexcept { return directions_.front().size(); }
    double eta() const noexcept { return eta_; }
    const Point& operator[](std::size_t i) const noexcept { return directions_[i]; }

    static constexpr double kDefaultEta = 0.7071;

private:
    std::vector<Point> directions_;
    double eta_;
};

/// Fraction of directions u with max over shell points of cos(a - x, u) >= eta.
/// Rows must be distinct from the center.
double direction_coverage(const PointSet& points, std::span<const std::size_t> rows,
                          PointView center, const DirectionSet& dirs);

struct ShellSummary {
    double inner = 0.0;
    double outer = 0.0;
    std::size_t size = 0;
    double coverage = 0.0;
};

struct ClusterCompactness {
    /// Empty when the ladder has no gaps and no epsilon was needed.
    std::optional<double> epsilon;
    Filter filter = Filter::Full;
    std::size_t size = 0;      ///< points in the cluster before filtering
    std::size_t retained = 0;  ///< points that survived the filter
    std::size_t rungs = 0;     ///< p
    double radius = 0.0;
    double mean_radius = 0.0;
    std::size_t dense = 0;
    std::size_t sparse = 0;
    std::size_t unshelled = 0;
    std::vector<ShellSummary> shells;
    double value = 1.0;
};

/// Epsilon-compactness index of one cluster from its (filtered) ladder.
/// A ladder with p == 0 has index 1.
ClusterCompactness cluster_compactness(const PointSet& points, const DistanceLadder& ladder,
                                       double epsilon, const DirectionSet& dirs);

ClusterCompactness cluster_compactness(const PointSet& points, std::span<const std::size_t> rows,
                                       PointView center, double epsilon,
                                       const DirectionSet& dirs, Filter filter = Filter::Full);

enum class EpsilonRule { RadiusOverP, MedianGap };
enum class EpsilonScope { Cluster, Dataset };

std::string_view to_string(EpsilonRule r);
std::string_view to_string(EpsilonScope s);
std::optional<EpsilonRule> parse_epsilon_rule(std::string_view s);
std::optional<EpsilonScope> parse_epsilon_scope(std::string_view s);

double default_epsilon(const DistanceLadder& ladder, EpsilonRule rule);

/// How epsilon is chosen for a partition. A fixed value overrides rule and scope.
struct EpsilonPolicy {
    EpsilonRule rule = EpsilonRule::RadiusOverP;
    EpsilonScope scope = EpsilonScope::Cluster;
    std::optional<double> fixed;
};

struct CompactnessReport {
    std::vector<ClusterCompactness> clusters;
    EpsilonPolicy policy;
    /// Epsilon shared by every cluster (fixed value or dataset scope).
    std::optional<double> global_epsilon;
    double value = 0.0;
};

/// Size-weighted mean of the cluster indices.
CompactnessReport partition_compactness(const Partition& partition, const PointSet& points,
                                        const EpsilonPolicy& policy, const DirectionSet& dirs,
                                        Filter filter);

/// Rows of cluster j that survive `filter` about the cluster's centroid.
std::vector<std::size_t> filtered_members(const PointSet& points, const Partition& partition,
                                          std::size_t j, Filter filter);

}  // namespace clusterscope
