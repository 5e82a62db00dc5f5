#include "clusterscope/selection.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "clusterscope/errors.hpp"

namespace clusterscope {

std::string_view to_string(Coordinate c) { return c == Coordinate::Scaled ? "scaled" : "raw"; }

std::optional<Coordinate> parse_coordinate(std::string_view s) {
    if (s == "scaled") return Coordinate::Scaled;
    if (s == "raw") return Coordinate::Raw;
    return std::nullopt;
}

std::vector<DecisionPoint> build_decision_points(const std::vector<SweepEntry>& entries,
                                                 Coordinate coordinate) {
    if (entries.empty()) throw InvalidSpec("no sweep entries");
    std::set<std::size_t> seen;
    std::vector<DecisionPoint> points;
    for (const auto& e : entries) {
        if (e.k < 2) throw SingleCluster("decision points need k >= 2");
        if (!seen.insert(e.k).second) throw DuplicateK(fmt::format("k = {} appears twice", e.k));
        DecisionPoint p;
        p.k = e.k;
        p.coordinate = coordinate;
        p.compactness = e.compactness.value;
        p.separability_raw = e.separability.total_margin_raw;
        p.separability_scaled = e.separability.total_margin_scaled;
        p.t_raw = p.compactness + p.separability_raw;
        p.t_scaled = p.compactness + p.separability_scaled;
        p.separability = coordinate == Coordinate::Scaled ? p.separability_scaled
                                                          : p.separability_raw;
        p.t_value = coordinate == Coordinate::Scaled ? p.t_scaled : p.t_raw;
        points.push_back(p);
    }
    std::sort(points.begin(), points.end(), [](auto& a, auto& b) { return a.k < b.k; });
    return points;
}

namespace {

bool dominates(const DecisionPoint& q, const DecisionPoint& p) {
    return q.compactness >= p.compactness && q.separability >= p.separability &&
           (q.compactness > p.compactness || q.separability > p.separability);
}

}  // namespace

std::vector<DecisionPoint> non_dominated(const std::vector<DecisionPoint>& points) {
    std::vector<DecisionPoint> front;
    for (const auto& p : points) {
        const bool dominated =
            std::any_of(points.begin(), points.end(), [&](auto& q) { return dominates(q, p); });
        if (!dominated) front.push_back(p);
    }
    std::stable_sort(front.begin(), front.end(), [](auto& a, auto& b) { return a.k < b.k; });
    return front;
}

Selection select_k(const std::vector<DecisionPoint>& points) {
    if (points.empty()) throw InvalidSpec("no decision points to select from");
    Selection s;
    const auto better = [](const DecisionPoint& a, const DecisionPoint& b) {
        return a.t_value > b.t_value || (a.t_value == b.t_value && a.k < b.k);
    };
    s.ranking = points;
    std::sort(s.ranking.begin(), s.ranking.end(), better);

    const auto front = non_dominated(points);
    for (const auto& p : front) s.front.push_back(p.k);
    const auto best = std::min_element(front.begin(), front.end(), better);
    s.k_star = best->k;

    for (const auto& p : s.ranking) {
        if (p.k == s.k_star) continue;
        if (best->t_value - p.t_value < Selection::kAmbiguityGap) s.runner_up = p.k;
        break;
    }
    return s;
}

}  // namespace clusterscope
