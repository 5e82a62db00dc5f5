#include "clusterscope/pipeline.hpp"

namespace clusterscope {

AnalysisReport analyze(const PointSet& points, const Partition& partition,
                       const std::vector<Filter>& filters, const IndexOptions& options,
                       const DirectionSet& dirs) {
    AnalysisReport r;
    r.points = points.size();
    r.dims = points.dims();
    r.k = partition.k();
    for (std::size_t j = 0; j < partition.k(); ++j) {
        r.cluster_sizes.push_back(partition.cluster_size(j));
        const auto c = partition.center(j);
        r.centers.emplace_back(c.begin(), c.end());
    }
    std::optional<NeighborGraph> graph;
    if (partition.k() >= 2) graph = neighbor_graph(partition, options.mu);
    for (Filter f : filters) {
        FilterAnalysis fa;
        fa.filter = f;
        fa.compactness = partition_compactness(partition, points, options.epsilon, dirs, f);
        if (graph) {
            fa.margins = margin_matrix(partition, points, f);
            fa.separability = separability_report(*fa.margins, *graph);
        }
        r.filters.push_back(std::move(fa));
    }
    return r;
}

SweepReport evaluate_sweep(const PointSet& points, const std::vector<ClusteringResult>& partitions,
                           Filter filter, const IndexOptions& options, const DirectionSet& dirs) {
    SweepReport report;
    report.filter = filter;
    report.coordinate = options.coordinate;
    std::vector<SweepEntry> entries;
    for (const auto& res : partitions) {
        const Partition partition(points, res.labels);
        SweepRow row;
        row.k = res.k;
        row.wcss = res.wcss;
        row.labels = res.labels;
        row.compactness = partition_compactness(partition, points, options.epsilon, dirs, filter);
        row.separability = separability(partition, points, filter, options.mu);
        row.baselines = baseline_indices(partition, points);
        entries.push_back({row.k, row.compactness, row.separability});
        report.rows.push_back(std::move(row));
    }
    report.points = build_decision_points(entries, options.coordinate);
    report.selection = select_k(report.points);
    return report;
}

SweepReport run_sweep(const PointSet& points, const SweepConfig& config, Filter filter,
                      const IndexOptions& options, const DirectionSet& dirs) {
    return evaluate_sweep(points, incremental_kmeans_sweep(points, config), filter, options, dirs);
}

}  // namespace clusterscope
