#include "clusterscope/separability.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

#include "clusterscope/errors.hpp"

namespace clusterscope {

AdjacentSets adjacent_sets(const PointSet& points, std::span<const std::size_t> rows_i,
                           std::span<const std::size_t> rows_j, PointView center_i,
                           PointView center_j) {
    if (rows_i.empty() || rows_j.empty()) throw EmptyInput("adjacent sets of an empty cluster");
    const double d = distance(center_i, center_j);
    if (d == 0.0) throw CoincidentCenters(0, 1);
    AdjacentSets z;
    for (std::size_t r : rows_i)
        if (distance(center_j, points.row(r)) <= d) z.of_first.push_back(r);
    for (std::size_t r : rows_j)
        if (distance(center_i, points.row(r)) <= d) z.of_second.push_back(r);
    return z;
}

PairMargin pair_margin(const PointSet& points, std::span<const std::size_t> rows_i,
                       std::span<const std::size_t> rows_j, PointView center_i,
                       PointView center_j) {
    PairMargin pm;
    pm.adjacent = adjacent_sets(points, rows_i, rows_j, center_i, center_j);
    pm.center_distance = distance(center_i, center_j);
    for (std::size_t r : pm.adjacent.of_first)
        pm.delta_ij = std::max(pm.delta_ij, distance(center_i, points.row(r)));
    for (std::size_t r : pm.adjacent.of_second)
        pm.delta_ji = std::max(pm.delta_ji, distance(center_j, points.row(r)));
    pm.margin = pm.center_distance - pm.delta_ij - pm.delta_ji;
    pm.scaled_margin = pm.margin / pm.center_distance;
    return pm;
}

PairMargin pair_margin(const PointSet& points, const Partition& partition, std::size_t i,
                       std::size_t j, Filter filter) {
    const auto rows_i = filtered_members(points, partition, i, filter);
    const auto rows_j = filtered_members(points, partition, j, filter);
    try {
        PairMargin pm =
            pair_margin(points, rows_i, rows_j, partition.center(i), partition.center(j));
        pm.i = i;
        pm.j = j;
        return pm;
    } catch (const CoincidentCenters&) {
        throw CoincidentCenters(i, j);
    }
}

MarginMatrix::MarginMatrix(std::size_t k, Filter filter)
    : k_(k), filter_(filter), margin_(k * k, 0.0), scaled_(k * k, 0.0) {}

void MarginMatrix::set(PairMargin pm) {
    margin_[pm.i * k_ + pm.j] = margin_[pm.j * k_ + pm.i] = pm.margin;
    scaled_[pm.i * k_ + pm.j] = scaled_[pm.j * k_ + pm.i] = pm.scaled_margin;
    pairs_.push_back(std::move(pm));
}

MarginMatrix margin_matrix(const Partition& partition, const PointSet& points, Filter filter) {
    const std::size_t k = partition.k();
    if (k < 2) throw SingleCluster("margin matrix needs at least two clusters");
    std::vector<std::vector<std::size_t>> rows(k);
    for (std::size_t j = 0; j < k; ++j) rows[j] = filtered_members(points, partition, j, filter);
    MarginMatrix m(k, filter);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            if (distance(partition.center(i), partition.center(j)) == 0.0)
                throw CoincidentCenters(i, j);
            PairMargin pm =
                pair_margin(points, rows[i], rows[j], partition.center(i), partition.center(j));
            pm.i = i;
            pm.j = j;
            m.set(std::move(pm));
        }
    return m;
}

std::size_t NeighborGraph::total() const noexcept {
    std::size_t n = 0;
    for (const auto& s : neighbors) n += s.size();
    return n;
}

NeighborGraph neighbor_graph(std::span<const Point> centers, double mu) {
    const std::size_t k = centers.size();
    if (k < 2) throw SingleCluster("neighbor graph needs at least two clusters");
    if (!(mu > 0.0 && mu <= 1.0)) throw InvalidSpec("mu must lie in (0, 1]");
    std::vector<double> w(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double d = distance(centers[i], centers[j]);
            if (d == 0.0) throw CoincidentCenters(i, j);
            w[i * k + j] = w[j * k + i] = d;
        }
    NeighborGraph g;
    g.mu = mu;
    g.neighbors.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            bool occluded = false;
            for (std::size_t q = 0; q < k && !occluded; ++q) {
                if (q == i || q == j) continue;
                if (cosine_at(centers[i], centers[j], centers[q]) >= mu &&
                    !(w[i * k + q] > w[i * k + j]))
                    occluded = true;
            }
            if (!occluded) g.neighbors[i].push_back(j);
        }
    return g;
}

NeighborGraph neighbor_graph(const Partition& partition, double mu) {
    std::vector<Point> centers;
    for (std::size_t j = 0; j < partition.k(); ++j) {
        const auto c = partition.center(j);
        centers.emplace_back(c.begin(), c.end());
    }
    return neighbor_graph(centers, mu);
}

SeparabilityReport separability_report(const MarginMatrix& margins, const NeighborGraph& graph) {
    const std::size_t k = margins.k();
    if (graph.neighbors.size() != k)
        throw InvalidSpec(fmt::format("neighbor graph has {} clusters, margin matrix {}",
                                      graph.neighbors.size(), k));
    SeparabilityReport r;
    r.filter = margins.filter();
    r.mu = graph.mu;
    r.neighbors = graph.neighbors;
    r.separated.resize(k);
    r.cluster_margins.assign(k, 0.0);
    r.n_total = graph.total();
    if (r.n_total == 0) throw NoNeighbors("no neighboring cluster pairs");

    double raw = 0.0, scaled = 0.0, per_cluster = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t j : graph.neighbors[i]) {
            raw += margins.margin(i, j);
            scaled += margins.scaled(i, j);
            if (margins.margin(i, j) > 0.0) {
                r.separated[i].push_back(j);
                smallest = std::min(smallest, margins.margin(i, j));
            }
        }
        if (!r.separated[i].empty()) r.cluster_margins[i] = smallest;
        r.n_separated += r.separated[i].size();
        per_cluster += r.cluster_margins[i];
    }
    const auto n = static_cast<double>(r.n_total);
    r.ratio = static_cast<double>(r.n_separated) / n;
    r.distribution_margin = per_cluster / static_cast<double>(k);
    r.total_margin_raw = raw / n;
    r.total_margin_scaled = scaled / n;
    return r;
}

SeparabilityReport separability(const Partition& partition, const PointSet& points, Filter filter,
                                double mu) {
    return separability_report(margin_matrix(partition, points, filter),
                               neighbor_graph(partition, mu));
}

}  // namespace clusterscope
