#include "clusterscope/clustering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "clusterscope/errors.hpp"

namespace clusterscope {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t k, std::size_t run) {
    return splitmix64(splitmix64(splitmix64(seed) ^ k) ^ run);
}

struct State {
    std::vector<int> labels;
    std::vector<Point> centers;
    double wcss = std::numeric_limits<double>::infinity();
};

std::pair<int, double> nearest(PointView a, const std::vector<Point>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const double d = squared_distance(a, centers[j]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return {best, best_d};
}

// Nearest-center assignment; an empty cluster takes the point farthest from
// its center among clusters that can spare one.
std::vector<int> assign(const PointSet& points, const std::vector<Point>& centers) {
    const std::size_t m = points.size();
    const std::size_t k = centers.size();
    std::vector<int> labels(m);
    std::vector<double> dist(m);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto [l, d] = nearest(points.row(i), centers);
        labels[i] = l;
        dist[i] = d;
        ++counts[static_cast<std::size_t>(l)];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] > 0) continue;
        std::size_t pick = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (counts[static_cast<std::size_t>(labels[i])] < 2) continue;
            if (pick == m || dist[i] > dist[pick]) pick = i;
        }
        if (pick == m) throw TooFewPoints("cannot fill every cluster");
        --counts[static_cast<std::size_t>(labels[pick])];
        labels[pick] = static_cast<int>(j);
        dist[pick] = 0.0;
        ++counts[j];
    }
    return labels;
}

std::vector<Point> means(const PointSet& points, const std::vector<int>& labels, std::size_t k) {
    std::vector<Point> c(k, Point(points.dims(), 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        const auto p = points.row(i);
        for (std::size_t d = 0; d < p.size(); ++d) c[l][d] += p[d];
        ++counts[l];
    }
    for (std::size_t j = 0; j < k; ++j)
        for (double& v : c[j]) v /= static_cast<double>(counts[j]);
    return c;
}

double objective(const PointSet& points, const std::vector<int>& labels,
                 const std::vector<Point>& centers) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        s += squared_distance(points.row(i), centers[static_cast<std::size_t>(labels[i])]);
    return s;
}

State lloyd(const PointSet& points, std::vector<Point> init, const SweepConfig& cfg) {
    const std::size_t k = init.size();
    State s;
    s.labels = assign(points, init);
    s.centers = means(points, s.labels, k);
    s.wcss = objective(points, s.labels, s.centers);
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        auto labels = assign(points, s.centers);
        if (labels == s.labels) break;
        auto centers = means(points, labels, k);
        const double wcss = objective(points, labels, centers);
        const double previous = s.wcss;
        s = {std::move(labels), std::move(centers), wcss};
        if (previous - wcss <= cfg.tol * previous) break;
    }
    return s;
}

// Appends one center drawn with probability proportional to squared distance
// from the existing centers (uniform when every point sits on a center).
void add_plus_plus_center(const PointSet& points, std::vector<Point>& centers,
                          std::mt19937_64& rng) {
    const std::size_t m = points.size();
    std::size_t pick = 0;
    if (centers.empty()) {
        pick = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    } else {
        std::vector<double> w(m);
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = nearest(points.row(i), centers).second;
            total += w[i];
        }
        if (total > 0.0) {
            double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = m - 1;
            for (std::size_t i = 0; i < m; ++i) {
                if (u < w[i]) {
                    pick = i;
                    break;
                }
                u -= w[i];
            }
        } else {
            pick = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        }
    }
    const auto p = points.row(pick);
    centers.emplace_back(p.begin(), p.end());
}

// Starting centers for k+1 from the k-center solution: candidate points ranked
// by how much they would lower the objective if added as a new center.
std::vector<std::vector<Point>> insertion_starts(const PointSet& points,
                                                 const std::vector<Point>& centers,
                                                 std::mt19937_64& rng) {
    constexpr std::size_t kMaxCandidates = 1000;
    constexpr std::size_t kStarts = 5;
    const std::size_t m = points.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = nearest(points.row(i), centers).second;

    std::vector<std::size_t> candidates;
    if (m <= kMaxCandidates) {
        candidates.resize(m);
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    } else {
        std::discrete_distribution<std::size_t> pick(d.begin(), d.end());
        for (std::size_t c = 0; c < kMaxCandidates; ++c) candidates.push_back(pick(rng));
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    }

    std::vector<std::pair<double, std::size_t>> gain;
    for (std::size_t c : candidates) {
        const auto x = points.row(c);
        double g = 0.0;
        for (std::size_t i = 0; i < m; ++i) g += std::max(0.0, d[i] - squared_distance(points.row(i), x));
        gain.emplace_back(-g, c);
    }
    const std::size_t keep = std::min(kStarts, gain.size());
    std::partial_sort(gain.begin(), gain.begin() + static_cast<std::ptrdiff_t>(keep), gain.end());

    std::vector<std::vector<Point>> starts;
    for (std::size_t t = 0; t < keep; ++t) {
        if (gain[t].first == 0.0 && t > 0) break;
        std::vector<Point> c = centers;
        const auto x = points.row(gain[t].second);
        c.emplace_back(x.begin(), x.end());
        starts.push_back(std::move(c));
    }
    return starts;
}

std::vector<Point> plus_plus_init(const PointSet& points, std::size_t k, std::mt19937_64& rng) {
    std::vector<Point> centers;
    while (centers.size() < k) add_plus_plus_center(points, centers, rng);
    return centers;
}

}  // namespace

std::vector<int> assign_voronoi(const PointSet& points, std::span<const Point> centers) {
    if (centers.empty()) throw InvalidSpec("no centers");
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (centers[i].size() != points.dims())
            throw InvalidSpec(fmt::format("center {} has the wrong dimension", i));
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            if (squared_distance(centers[i], centers[j]) == 0.0) throw CoincidentCenters(i, j);
    }
    const std::vector<Point> c(centers.begin(), centers.end());
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels[i] = nearest(points.row(i), c).first;
    return labels;
}

std::vector<ClusteringResult> incremental_kmeans_sweep(const PointSet& points,
                                                       const SweepConfig& config) {
    if (config.k_min < 2 || config.k_min > config.k_max)
        throw InvalidSpec(fmt::format("invalid k range [{}, {}]", config.k_min, config.k_max));
    if (config.restarts < 1) throw InvalidSpec("restarts must be at least 1");
    if (points.size() <= config.k_max)
        throw TooFewPoints(fmt::format("{} points cannot form {} clusters with k < m",
                                       points.size(), config.k_max));

    std::vector<ClusteringResult> out;
    State best;
    best.centers = {centroid(points)};
    best.labels.assign(points.size(), 0);
    best.wcss = objective(points, best.labels, best.centers);
    for (std::size_t k = 1; k <= config.k_max; ++k) {
        if (k > 1) {
            std::mt19937_64 rng(stream_seed(config.seed, k, 0));
            State candidate;
            for (auto& start : insertion_starts(points, best.centers, rng)) {
                State s = lloyd(points, std::move(start), config);
                if (s.wcss < candidate.wcss) candidate = std::move(s);
            }
            if (k >= config.k_min) {
                for (std::size_t r = 1; r <= config.restarts; ++r) {
                    std::mt19937_64 restart_rng(stream_seed(config.seed, k, r));
                    State s = lloyd(points, plus_plus_init(points, k, restart_rng), config);
                    if (s.wcss < candidate.wcss) candidate = std::move(s);
                }
            }
            best = std::move(candidate);
        }
        if (k >= config.k_min)
            out.push_back({k, best.labels, best.centers, best.wcss});
    }
    return out;
}

}  // namespace clusterscope
