#include "clusterscope/compactness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "clusterscope/errors.hpp"

namespace clusterscope {

std::string_view to_string(Filter f) {
    switch (f) {
        case Filter::Full: return "full";
        case Filter::MeanStd: return "ms";
        case Filter::Median: return "med";
    }
    return "?";
}

std::optional<Filter> parse_filter(std::string_view s) {
    if (s == "full") return Filter::Full;
    if (s == "ms") return Filter::MeanStd;
    if (s == "med") return Filter::Median;
    return std::nullopt;
}

std::string_view to_string(EpsilonRule r) {
    return r == EpsilonRule::RadiusOverP ? "radius-over-p" : "median-gap";
}

std::string_view to_string(EpsilonScope s) {
    return s == EpsilonScope::Cluster ? "cluster" : "dataset";
}

std::optional<EpsilonRule> parse_epsilon_rule(std::string_view s) {
    if (s == "radius-over-p") return EpsilonRule::RadiusOverP;
    if (s == "median-gap") return EpsilonRule::MedianGap;
    return std::nullopt;
}

std::optional<EpsilonScope> parse_epsilon_scope(std::string_view s) {
    if (s == "cluster") return EpsilonScope::Cluster;
    if (s == "dataset") return EpsilonScope::Dataset;
    return std::nullopt;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Fills rungs / rung_of / radius / mean_radius / distinct_sd from rows+distances.
void assign_rungs(DistanceLadder& ladder) {
    const std::size_t m = ladder.distances.size();
    ladder.radius = *std::max_element(ladder.distances.begin(), ladder.distances.end());
    double sum = 0.0;
    for (double d : ladder.distances) sum += d;
    ladder.mean_radius = sum / static_cast<double>(m);

    const double tol = 1e-9 * std::max(1.0, ladder.radius);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ladder.distances[a] < ladder.distances[b];
    });

    ladder.rungs.assign(1, 0.0);
    ladder.rung_of.assign(m, 0);
    bool zero_occupied = false;
    double group_start = 0.0;
    for (std::size_t idx : order) {
        const double d = ladder.distances[idx];
        if (d <= tol) {
            zero_occupied = true;
            ladder.rung_of[idx] = 0;
            continue;
        }
        if (ladder.rungs.size() == 1 || d - group_start > tol) {
            ladder.rungs.push_back(d);
            group_start = d;
        } else {
            ladder.rungs.back() = d;
        }
        ladder.rung_of[idx] = ladder.rungs.size() - 1;
    }

    std::vector<double> distinct(ladder.rungs.begin() + (zero_occupied ? 0 : 1),
                                 ladder.rungs.end());
    double mean = 0.0;
    for (double d : distinct) mean += d;
    mean /= static_cast<double>(distinct.size());
    double var = 0.0;
    for (double d : distinct) var += (d - mean) * (d - mean);
    ladder.distinct_sd = std::sqrt(var / static_cast<double>(distinct.size()));
}

// Distinct distances actually taken by points (rung 0 only if occupied).
std::vector<double> occupied_rungs(const DistanceLadder& ladder) {
    std::vector<bool> used(ladder.rungs.size(), false);
    for (std::size_t r : ladder.rung_of) used[r] = true;
    std::vector<double> out;
    for (std::size_t i = 0; i < ladder.rungs.size(); ++i)
        if (used[i]) out.push_back(ladder.rungs[i]);
    return out;
}

}  // namespace

DistanceLadder build_ladder(const PointSet& points, std::span<const std::size_t> rows,
                            PointView center, Filter filter) {
    if (rows.empty()) throw EmptyInput("distance ladder of an empty cluster");
    DistanceLadder ladder;
    ladder.center.assign(center.begin(), center.end());
    ladder.filter = filter;
    ladder.rows.assign(rows.begin(), rows.end());
    ladder.distances.reserve(rows.size());
    for (std::size_t r : rows) ladder.distances.push_back(distance(points.row(r), center));
    assign_rungs(ladder);
    if (filter == Filter::Full) return ladder;

    const std::vector<double> distinct = occupied_rungs(ladder);
    const double threshold = filter == Filter::MeanStd
                                 ? ladder.mean_radius + 2.0 * ladder.distinct_sd
                                 : median_of(distinct);

    DistanceLadder kept;
    kept.center = ladder.center;
    kept.filter = filter;
    for (std::size_t i = 0; i < ladder.rows.size(); ++i) {
        if (ladder.rungs[ladder.rung_of[i]] <= threshold) {
            kept.rows.push_back(ladder.rows[i]);
            kept.distances.push_back(ladder.distances[i]);
        }
    }
    if (kept.rows.empty())
        throw EmptyAfterFilter(fmt::format("filter '{}' removed every point", to_string(filter)));
    kept.dropped = ladder.rows.size() - kept.rows.size();
    assign_rungs(kept);
    return kept;
}

double compactness_function(const DistanceLadder& ladder, double t) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ladder.distances.size(); ++i) {
        if (ladder.rungs[ladder.rung_of[i]] <= t) {
            sum += ladder.distances[i];
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

GapPartition partition_gaps(const DistanceLadder& ladder, double epsilon) {
    if (ladder.p() == 0) throw DegenerateLadder("ladder has no gaps (p = 0)");
    GapPartition g;
    g.epsilon = epsilon;
    g.min_gap = ladder.gap(1);
    g.max_gap = ladder.gap(1);
    for (std::size_t i = 1; i <= ladder.p(); ++i) {
        const double gap = ladder.gap(i);
        g.min_gap = std::min(g.min_gap, gap);
        g.max_gap = std::max(g.max_gap, gap);
        (gap <= epsilon ? g.dense : g.sparse).push_back(i);
    }
    return g;
}

ShellDecomposition decompose_shells(const DistanceLadder& ladder, const GapPartition& gaps) {
    ShellDecomposition out;
    // Map each rung to its shell (runs of consecutive dense indices).
    std::vector<std::ptrdiff_t> shell_of(ladder.rungs.size(), -1);
    for (std::size_t idx = 0; idx < gaps.dense.size(); ++idx) {
        const std::size_t i = gaps.dense[idx];
        if (out.shells.empty() || out.shells.back().last_rung + 1 != i) {
            Shell s;
            s.first_rung = i;
            s.inner = ladder.rungs[i - 1];
            out.shells.push_back(std::move(s));
        }
        out.shells.back().last_rung = i;
        out.shells.back().outer = ladder.rungs[i];
        shell_of[i] = static_cast<std::ptrdiff_t>(out.shells.size() - 1);
    }
    for (std::size_t i = 0; i < ladder.rows.size(); ++i) {
        const std::size_t rung = ladder.rung_of[i];
        if (rung == 0) continue;
        if (shell_of[rung] >= 0)
            out.shells[static_cast<std::size_t>(shell_of[rung])].rows.push_back(ladder.rows[i]);
        else
            ++out.unshelled;
    }
    return out;
}

DirectionSet::DirectionSet(std::vector<Point> directions, double eta)
    : directions_(std::move(directions)), eta_(eta) {
    if (directions_.empty()) throw InvalidSpec("direction set is empty");
    if (!(eta_ > 0.0 && eta_ <= 1.0)) throw InvalidSpec("eta must lie in (0, 1]");
    const std::size_t n = directions_.front().size();
    if (n == 0) throw InvalidSpec("direction vectors are empty");
    for (std::size_t i = 0; i < directions_.size(); ++i) {
        if (directions_[i].size() != n)
            throw InvalidSpec(fmt::format("direction {} has dimension {}, expected {}", i + 1,
                                          directions_[i].size(), n));
        const double len = norm(directions_[i]);
        if (std::abs(len - 1.0) > 1e-12)
            throw InvalidSpec(fmt::format("direction {} has norm {:.17g}, expected 1", i + 1, len));
    }
    if (directions_.size() <= n)
        throw InvalidSpec(fmt::format("{} directions cannot positively span R^{}; need more than {}",
                                      directions_.size(), n, n));
    // A positive spanning set has, for every nonzero v, some u with <u, v> > 0.
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss;
    Point probe(n);
    for (int t = 0; t < 4000; ++t) {
        for (double& v : probe) v = gauss(rng);
        double best = -2.0;
        for (const auto& u : directions_) best = std::max(best, dot(u, probe));
        if (best <= 1e-12 * norm(probe)) {
            std::string coords;
            for (double v : probe) coords += fmt::format("{}{:.4g}", coords.empty() ? "" : ",", v);
            throw InvalidSpec(fmt::format(
                "directions are not a positive spanning set: probe ({}) has no direction "
                "within 90 degrees",
                coords));
        }
    }
}

DirectionSet DirectionSet::coordinate(std::size_t dims, double eta) {
    std::vector<Point> dirs;
    for (double sign : {1.0, -1.0})
        for (std::size_t i = 0; i < dims; ++i) {
            Point u(dims, 0.0);
            u[i] = sign;
            dirs.push_back(std::move(u));
        }
    return DirectionSet(std::move(dirs), eta);
}

DirectionSet DirectionSet::load(const std::filesystem::path& path, double eta) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const PointSet rows = parse_points(text, path.string());
    std::vector<Point> dirs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = rows.row(i);
        dirs.emplace_back(r.begin(), r.end());
    }
    return DirectionSet(std::move(dirs), eta);
}

double direction_coverage(const PointSet& points, std::span<const std::size_t> rows,
                          PointView center, const DirectionSet& dirs) {
    const std::size_t n = center.size();
    std::vector<double> best(dirs.size(), -2.0);
    Point unit(n);
    for (std::size_t r : rows) {
        const auto a = points.row(r);
        double len = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            unit[d] = a[d] - center[d];
            len += unit[d] * unit[d];
        }
        len = std::sqrt(len);
        if (len == 0.0) continue;
        for (double& v : unit) v /= len;
        for (std::size_t i = 0; i < dirs.size(); ++i) best[i] = std::max(best[i], dot(unit, dirs[i]));
    }
    const auto covered = std::count_if(best.begin(), best.end(),
                                       [&](double c) { return c >= dirs.eta(); });
    return static_cast<double>(covered) / static_cast<double>(dirs.size());
}

ClusterCompactness cluster_compactness(const PointSet& points, const DistanceLadder& ladder,
                                       double epsilon, const DirectionSet& dirs) {
    ClusterCompactness out;
    out.filter = ladder.filter;
    out.size = ladder.rows.size() + ladder.dropped;
    out.retained = ladder.rows.size();
    out.rungs = ladder.p();
    out.radius = ladder.radius;
    out.mean_radius = ladder.mean_radius;
    if (ladder.p() == 0) {
        out.value = 1.0;
        return out;
    }
    out.epsilon = epsilon;
    const GapPartition gaps = partition_gaps(ladder, epsilon);
    const ShellDecomposition shells = decompose_shells(ladder, gaps);
    out.dense = gaps.dense.size();
    out.sparse = gaps.sparse.size();
    out.unshelled = shells.unshelled;

    // 1 - (1/R)[sum (1-a_j) w_j + sum_{sparse} (g_i - eps)] rewritten with
    // sum w_j + sum_{sparse} g_i = R, which keeps the value inside [0, 1].
    double covered = 0.0;
    for (const Shell& s : shells.shells) {
        const double alpha = direction_coverage(points, s.rows, ladder.center, dirs);
        covered += alpha * (s.outer - s.inner);
        out.shells.push_back({s.inner, s.outer, s.rows.size(), alpha});
    }
    covered += static_cast<double>(gaps.sparse.size()) * epsilon;
    out.value = covered / ladder.radius;
    return out;
}

ClusterCompactness cluster_compactness(const PointSet& points, std::span<const std::size_t> rows,
                                       PointView center, double epsilon,
                                       const DirectionSet& dirs, Filter filter) {
    return cluster_compactness(points, build_ladder(points, rows, center, filter), epsilon, dirs);
}

double default_epsilon(const DistanceLadder& ladder, EpsilonRule rule) {
    const std::size_t p = ladder.p();
    if (p == 0) throw DegenerateLadder("epsilon undefined for a ladder with p = 0");
    if (rule == EpsilonRule::RadiusOverP) return ladder.radius / static_cast<double>(p);
    std::vector<double> gaps;
    gaps.reserve(p);
    for (std::size_t i = 1; i <= p; ++i) gaps.push_back(ladder.gap(i));
    return median_of(std::move(gaps));
}

std::vector<std::size_t> filtered_members(const PointSet& points, const Partition& partition,
                                          std::size_t j, Filter filter) {
    const auto members = partition.members(j);
    if (filter == Filter::Full) return {members.begin(), members.end()};
    return build_ladder(points, members, partition.center(j), filter).rows;
}

CompactnessReport partition_compactness(const Partition& partition, const PointSet& points,
                                        const EpsilonPolicy& policy, const DirectionSet& dirs,
                                        Filter filter) {
    if (dirs.dims() != points.dims())
        throw InvalidSpec(fmt::format("direction set has dimension {}, data has {}", dirs.dims(),
                                      points.dims()));
    CompactnessReport report;
    report.policy = policy;
    if (policy.fixed) {
        if (!(*policy.fixed >= 0.0)) throw InvalidSpec("epsilon must be nonnegative");
        report.global_epsilon = *policy.fixed;
    } else if (policy.scope == EpsilonScope::Dataset) {
        std::vector<std::size_t> all(points.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        const Point c = centroid(points);
        const DistanceLadder whole = build_ladder(points, all, c, filter);
        report.global_epsilon = whole.p() ? default_epsilon(whole, policy.rule) : 0.0;
    }

    double weighted = 0.0;
    for (std::size_t j = 0; j < partition.k(); ++j) {
        const DistanceLadder ladder =
            build_ladder(points, partition.members(j), partition.center(j), filter);
        double eps = 0.0;
        if (report.global_epsilon)
            eps = *report.global_epsilon;
        else if (ladder.p() > 0)
            eps = default_epsilon(ladder, policy.rule);
        ClusterCompactness c = cluster_compactness(points, ladder, eps, dirs);
        weighted += static_cast<double>(partition.cluster_size(j)) * c.value;
        report.clusters.push_back(std::move(c));
    }
    report.value = weighted / static_cast<double>(points.size());
    return report;
}

}  // namespace clusterscope
