#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clusterscope/compactness.hpp"
#include "clusterscope/separability.hpp"

namespace clusterscope {

/// Which total margin feeds the separability axis and T_k.
enum class Coordinate { Scaled, Raw };

std::string_view to_string(Coordinate c);
std::optional<Coordinate> parse_coordinate(std::string_view s);

struct SweepEntry {
    std::size_t k = 0;
    CompactnessReport compactness;
    SeparabilityReport separability;
};

struct DecisionPoint {
    std::size_t k = 0;
    double compactness = 0.0;
    double separability = 0.0;  ///< the selected coordinate
    double separability_raw = 0.0;
    double separability_scaled = 0.0;
    double t_value = 0.0;  ///< compactness + separability
    double t_raw = 0.0;
    double t_scaled = 0.0;
    Coordinate coordinate = Coordinate::Scaled;
};

std::vector<DecisionPoint> build_decision_points(const std::vector<SweepEntry>& entries,
                                                 Coordinate coordinate = Coordinate::Scaled);

/// Points not dominated in (compactness, separability), ordered by k.
std::vector<DecisionPoint> non_dominated(const std::vector<DecisionPoint>& points);

struct Selection {
    std::size_t k_star = 0;
    /// All points by T descending, ties toward smaller k.
    std::vector<DecisionPoint> ranking;
    /// k values of the non-dominated front, ascending.
    std::vector<std::size_t> front;
    /// Set when the runner-up T is within kAmbiguityGap of the winner.
    std::optional<std::size_t> runner_up;

    static constexpr double kAmbiguityGap = 1e-3;
};

/// argmax T over the non-dominated points; ties go to the smaller k.
Selection select_k(const std::vector<DecisionPoint>& points);

}  // namespace clusterscope
