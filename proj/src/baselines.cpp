#include "clusterscope/baselines.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "clusterscope/errors.hpp"

namespace clusterscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_two_clusters(const Partition& partition, const char* index) {
    if (partition.k() < 2)
        throw SingleCluster(std::string(index) + " needs at least two clusters");
}

std::vector<double> mean_center_distance(const Partition& partition, const PointSet& points) {
    std::vector<double> s(partition.k(), 0.0);
    for (std::size_t j = 0; j < partition.k(); ++j) {
        for (std::size_t r : partition.members(j)) s[j] += distance(points.row(r), partition.center(j));
        s[j] /= static_cast<double>(partition.cluster_size(j));
    }
    return s;
}

double within_sum_of_squares(const Partition& partition, const PointSet& points) {
    double w = 0.0;
    for (std::size_t j = 0; j < partition.k(); ++j)
        for (std::size_t r : partition.members(j))
            w += squared_distance(points.row(r), partition.center(j));
    return w;
}

}  // namespace

double silhouette_avg(const Partition& partition, const PointSet& points) {
    require_two_clusters(partition, "silhouette");
    const std::size_t m = points.size();
    const std::size_t k = partition.k();
    const auto labels = partition.labels();
    std::vector<double> sums(k);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        if (partition.cluster_size(own) == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t q = 0; q < m; ++q)
            if (q != i) sums[static_cast<std::size_t>(labels[q])] += distance(points.row(i), points.row(q));
        const double a = sums[own] / static_cast<double>(partition.cluster_size(own) - 1);
        double b = kInf;
        for (std::size_t j = 0; j < k; ++j)
            if (j != own) b = std::min(b, sums[j] / static_cast<double>(partition.cluster_size(j)));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(m);
}

double davies_bouldin(const Partition& partition, const PointSet& points) {
    require_two_clusters(partition, "Davies-Bouldin");
    const std::size_t k = partition.k();
    const auto s = mean_center_distance(partition, points);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            const double d = distance(partition.center(i), partition.center(j));
            if (d == 0.0) throw CoincidentCenters(std::min(i, j), std::max(i, j));
            worst = std::max(worst, (s[i] + s[j]) / d);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

double calinski_harabasz(const Partition& partition, const PointSet& points) {
    require_two_clusters(partition, "Calinski-Harabasz");
    const std::size_t m = points.size();
    const std::size_t k = partition.k();
    if (k >= m) throw TooFewPoints("Calinski-Harabasz needs k < m");
    const Point mean = centroid(points);
    double between = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        between += static_cast<double>(partition.cluster_size(j)) *
                   squared_distance(partition.center(j), mean);
    const double within = within_sum_of_squares(partition, points);
    if (within == 0.0) return kInf;
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(m - k));
}

double dunn(const Partition& partition, const PointSet& points) {
    require_two_clusters(partition, "Dunn");
    const std::size_t m = points.size();
    const auto labels = partition.labels();
    double min_between = kInf;
    double max_diameter = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t q = i + 1; q < m; ++q) {
            const double d = distance(points.row(i), points.row(q));
            if (labels[i] == labels[q])
                max_diameter = std::max(max_diameter, d);
            else
                min_between = std::min(min_between, d);
        }
    if (max_diameter == 0.0) return kInf;
    return min_between / max_diameter;
}

double xie_beni(const Partition& partition, const PointSet& points) {
    require_two_clusters(partition, "Xie-Beni");
    const std::size_t k = partition.k();
    double min_sep = kInf;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double d2 = squared_distance(partition.center(i), partition.center(j));
            if (d2 == 0.0) throw CoincidentCenters(i, j);
            min_sep = std::min(min_sep, d2);
        }
    return within_sum_of_squares(partition, points) /
           (static_cast<double>(points.size()) * min_sep);
}

BaselineReport baseline_indices(const Partition& partition, const PointSet& points) {
    BaselineReport r;
    r.silhouette_avg = silhouette_avg(partition, points);
    r.davies_bouldin = davies_bouldin(partition, points);
    r.calinski_harabasz = calinski_harabasz(partition, points);
    r.dunn = dunn(partition, points);
    r.xie_beni = xie_beni(partition, points);
    return r;
}

}  // namespace clusterscope
