#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clusterscope/geometry.hpp"

namespace clusterscope {

/// Immutable m x n matrix of finite coordinates, stored row-major.
class PointSet {
public:
    PointSet(std::vector<double> coords, std::size_t dims);

    std::size_t size() const noexcept { return rows_; }
    std::size_t dims() const noexcept { return dims_; }

    PointView row(std::size_t i) const noexcept {
        return PointView(coords_).subspan(i * dims_, dims_);
    }
    std::span<const double> data() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
    std::size_t rows_;
    std::size_t dims_;
};

/// Hard partition of a PointSet into k nonempty clusters with centroid centers.
class Partition {
public:
    /// Labels must cover exactly 0..k-1 with every cluster nonempty.
    Partition(const PointSet& points, std::vector<int> labels);

    std::size_t k() const noexcept { return members_.size(); }
    std::span<const int> labels() const noexcept { return labels_; }
    PointView center(std::size_t j) const noexcept {
        return PointView(centers_).subspan(j * dims_, dims_);
    }
    std::span<const std::size_t> members(std::size_t j) const noexcept { return members_[j]; }
    std::size_t cluster_size(std::size_t j) const noexcept { return members_[j].size(); }

private:
    std::vector<int> labels_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<double> centers_;
    std::size_t dims_;
};

struct LabelSet {
    std::vector<int> labels;
    std::size_t k = 0;
};

struct MixtureComponent {
    Point center;
    double sigma = 1.0;
    std::size_t count = 0;
};

/// Isotropic Gaussian mixture; components are emitted in order.
struct MixtureSpec {
    std::vector<MixtureComponent> components;
    std::uint64_t seed = 0;
};

struct Mixture {
    PointSet points;
    std::vector<int> labels;
};

/// Reads comma- or whitespace-separated numeric rows. A first row containing a
/// non-numeric field is treated as a header when data rows follow it.
PointSet load_points(const std::filesystem::path& path);
PointSet parse_points(std::string_view text, const std::string& source = "<memory>");

/// One integer per line; ids are remapped densely in first-occurrence order.
/// With k_hint, fewer than k_hint distinct ids is an EmptyClusterError.
LabelSet load_labels(const std::filesystem::path& path,
                     std::optional<std::size_t> k_hint = std::nullopt);
LabelSet parse_labels(std::string_view text, const std::string& source = "<memory>",
                      std::optional<std::size_t> k_hint = std::nullopt);

/// Writes rows with 17 significant digits so values round-trip exactly.
void write_points(const std::filesystem::path& path, const PointSet& points);
std::string format_points(const PointSet& points);
void write_labels(const std::filesystem::path& path, std::span<const int> labels);

Point centroid(const PointSet& points, std::span<const std::size_t> rows);
Point centroid(const PointSet& points);

/// Rows of `points` restricted to `rows`, in the given order.
PointSet subset(const PointSet& points, std::span<const std::size_t> rows);

Mixture generate_mixture(const MixtureSpec& spec);

std::vector<std::string> mixture_preset_names();
/// Throws InvalidSpec listing the known presets for an unknown name.
MixtureSpec mixture_preset(std::string_view name, std::uint64_t seed);

/// Per-attribute rescaling offered as a preprocessing pass.
enum class Normalization { MinMax, ZScore };
PointSet normalize(const PointSet& points, Normalization mode);

}  // namespace clusterscope
