#pragma once

#include "clusterscope/dataset.hpp"

namespace clusterscope {

// Reference cluster validity indices used for comparison tables. Values that
// are unbounded for a partition (zero within-cluster spread) are returned as
// +infinity and written as the token "inf".

/// Mean silhouette; points alone in their cluster score 0.
double silhouette_avg(const Partition& partition, const PointSet& points);

/// Mean over clusters of the worst (S_i + S_j) / d(x_i, x_j), S = mean center distance.
double davies_bouldin(const Partition& partition, const PointSet& points);

/// [B / (k - 1)] / [W / (m - k)] from between- and within-cluster sums of squares.
double calinski_harabasz(const Partition& partition, const PointSet& points);

/// Smallest inter-cluster point distance over the largest cluster diameter.
double dunn(const Partition& partition, const PointSet& points);

/// Crisp Xie-Beni: within sum of squares / (m * min squared center distance).
double xie_beni(const Partition& partition, const PointSet& points);

struct BaselineReport {
    double silhouette_avg = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
    double dunn = 0.0;
    double xie_beni = 0.0;
};

BaselineReport baseline_indices(const Partition& partition, const PointSet& points);

}  // namespace clusterscope
