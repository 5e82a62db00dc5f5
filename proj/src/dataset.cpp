#include "clusterscope/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "clusterscope/errors.hpp"

namespace clusterscope {

PointSet::PointSet(std::vector<double> coords, std::size_t dims)
    : coords_(std::move(coords)), rows_(0), dims_(dims) {
    if (dims_ == 0) throw EmptyInput("point set needs at least one attribute");
    if (coords_.size() % dims_ != 0)
        throw InvalidSpec("coordinate count is not a multiple of the dimension");
    rows_ = coords_.size() / dims_;
    if (rows_ == 0) throw EmptyInput("point set has no rows");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i]))
            throw InvalidSpec(fmt::format("non-finite coordinate at row {}, column {}",
                                          i / dims_ + 1, i % dims_ + 1));
    }
}

Partition::Partition(const PointSet& points, std::vector<int> labels)
    : labels_(std::move(labels)), dims_(points.dims()) {
    if (labels_.size() != points.size())
        throw InvalidSpec(fmt::format("{} labels for {} points", labels_.size(), points.size()));
    int max_label = -1;
    for (int l : labels_) {
        if (l < 0) throw InvalidSpec("negative cluster label");
        max_label = std::max(max_label, l);
    }
    const auto k = static_cast<std::size_t>(max_label + 1);
    members_.resize(k);
    for (std::size_t i = 0; i < labels_.size(); ++i)
        members_[static_cast<std::size_t>(labels_[i])].push_back(i);
    centers_.reserve(k * dims_);
    for (std::size_t j = 0; j < k; ++j) {
        if (members_[j].empty())
            throw EmptyClusterError(fmt::format("cluster {} has no members", j));
        const Point c = centroid(points, members_[j]);
        centers_.insert(centers_.end(), c.begin(), c.end());
    }
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(',', start);
            fields.push_back(trim(line.substr(start, pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (i > start) fields.push_back(line.substr(start, i - start));
        }
    }
    return fields;
}

std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> nonblank_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find('\n', start);
        const auto raw = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
        ++number;
        if (!trim(raw).empty()) lines.push_back({number, trim(raw)});
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return ss.str();
}

}  // namespace

PointSet parse_points(std::string_view text, const std::string& source) {
    const auto lines = nonblank_lines(text);
    std::size_t first = 0;
    if (lines.size() > 1) {
        const auto fields = split_fields(lines[0].text);
        const bool header = std::any_of(fields.begin(), fields.end(),
                                        [](auto f) { return !parse_double(f).has_value(); });
        if (header) first = 1;
    }
    if (first >= lines.size()) throw EmptyInput(source + ": no data rows");

    std::vector<double> coords;
    std::size_t dims = 0;
    for (std::size_t li = first; li < lines.size(); ++li) {
        const auto& line = lines[li];
        const auto fields = split_fields(line.text);
        if (dims == 0) dims = fields.size();
        if (fields.size() != dims)
            throw ParseError(source, line.number, 0,
                             fmt::format("expected {} fields, found {}", dims, fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_double(fields[c]);
            if (!v)
                throw ParseError(source, line.number, c + 1,
                                 fmt::format("not a number: '{}'", fields[c]));
            if (!std::isfinite(*v))
                throw ParseError(source, line.number, c + 1, "non-finite value");
            coords.push_back(*v);
        }
    }
    return PointSet(std::move(coords), dims);
}

PointSet load_points(const std::filesystem::path& path) {
    return parse_points(read_file(path), path.string());
}

LabelSet parse_labels(std::string_view text, const std::string& source,
                      std::optional<std::size_t> k_hint) {
    LabelSet out;
    std::unordered_map<long long, int> remap;
    for (const auto& line : nonblank_lines(text)) {
        long long raw = 0;
        const auto [ptr, ec] =
            std::from_chars(line.text.data(), line.text.data() + line.text.size(), raw);
        if (ec != std::errc{} || ptr != line.text.data() + line.text.size())
            throw ParseError(source, line.number, 1,
                             fmt::format("not an integer label: '{}'", line.text));
        auto [it, inserted] = remap.try_emplace(raw, static_cast<int>(remap.size()));
        out.labels.push_back(it->second);
    }
    if (out.labels.empty()) throw EmptyInput(source + ": no labels");
    out.k = remap.size();
    if (k_hint && *k_hint > out.k)
        throw EmptyClusterError(fmt::format("{}: expected {} clusters but only {} ids are used",
                                            source, *k_hint, out.k));
    return out;
}

LabelSet load_labels(const std::filesystem::path& path, std::optional<std::size_t> k_hint) {
    return parse_labels(read_file(path), path.string(), k_hint);
}

std::string format_points(const PointSet& points) {
    std::string out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto r = points.row(i);
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) out += ',';
            out += fmt::format("{:.17g}", r[c]);
        }
        out += '\n';
    }
    return out;
}

void write_points(const std::filesystem::path& path, const PointSet& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << format_points(points);
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (int l : labels) out << l << '\n';
}

Point centroid(const PointSet& points, std::span<const std::size_t> rows) {
    if (rows.empty()) throw EmptyInput("centroid of an empty set");
    Point c(points.dims(), 0.0);
    for (std::size_t r : rows) {
        const auto p = points.row(r);
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += p[d];
    }
    for (double& v : c) v /= static_cast<double>(rows.size());
    return c;
}

Point centroid(const PointSet& points) {
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return centroid(points, all);
}

PointSet subset(const PointSet& points, std::span<const std::size_t> rows) {
    std::vector<double> coords;
    coords.reserve(rows.size() * points.dims());
    for (std::size_t r : rows) {
        const auto p = points.row(r);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return PointSet(std::move(coords), points.dims());
}

Mixture generate_mixture(const MixtureSpec& spec) {
    if (spec.components.empty()) throw InvalidSpec("mixture has no components");
    const std::size_t dims = spec.components.front().center.size();
    if (dims == 0) throw InvalidSpec("mixture component center is empty");
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const auto& c = spec.components[j];
        if (c.center.size() != dims)
            throw InvalidSpec(fmt::format("component {} has dimension {}, expected {}", j,
                                          c.center.size(), dims));
        if (c.count == 0) throw InvalidSpec(fmt::format("component {} has count 0", j));
        if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma))
            throw InvalidSpec(fmt::format("component {} has invalid sigma", j));
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> coords;
    std::vector<int> labels;
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const auto& c = spec.components[j];
        for (std::size_t i = 0; i < c.count; ++i) {
            for (std::size_t d = 0; d < dims; ++d)
                coords.push_back(c.sigma > 0.0 ? c.center[d] + c.sigma * gauss(rng) : c.center[d]);
            labels.push_back(static_cast<int>(j));
        }
    }
    return {PointSet(std::move(coords), dims), std::move(labels)};
}

namespace {

// Three clusters on a circle around a central one; the central cluster is last.
MixtureSpec four_cluster_layout(double radius, std::uint64_t seed) {
    constexpr double kPi = 3.14159265358979323846;
    MixtureSpec spec;
    spec.seed = seed;
    for (double deg : {90.0, 210.0, 330.0}) {
        const double a = deg * kPi / 180.0;
        spec.components.push_back({{radius * std::cos(a), radius * std::sin(a)}, 1.0, 350});
    }
    spec.components.push_back({{0.0, 0.0}, 1.0, 400});
    return spec;
}

MixtureSpec grid_layout(std::size_t cols, std::size_t rows, std::uint64_t seed) {
    MixtureSpec spec;
    spec.seed = seed;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jitter(-1.5, 1.5);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = 10.0 * static_cast<double>(c) + jitter(rng);
            const double y = 10.0 * static_cast<double>(r) + jitter(rng);
            spec.components.push_back({{x, y}, 1.3, 150});
        }
    return spec;
}

}  // namespace

std::vector<std::string> mixture_preset_names() {
    return {"ds1-like", "ds2-like", "ds3-like", "grid-a1-like", "grid-a2-like", "grid-a3-like"};
}

MixtureSpec mixture_preset(std::string_view name, std::uint64_t seed) {
    if (name == "ds1-like") return four_cluster_layout(10.0, seed);
    if (name == "ds2-like") return four_cluster_layout(6.5, seed);
    if (name == "ds3-like") return four_cluster_layout(4.5, seed);
    if (name == "grid-a1-like") return grid_layout(5, 4, seed);
    if (name == "grid-a2-like") return grid_layout(7, 5, seed);
    if (name == "grid-a3-like") return grid_layout(10, 5, seed);
    std::string known;
    for (const auto& n : mixture_preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidSpec(fmt::format("unknown preset '{}'; known presets: {}", name, known));
}

PointSet normalize(const PointSet& points, Normalization mode) {
    const std::size_t m = points.size();
    const std::size_t n = points.dims();
    std::vector<double> coords(points.data().begin(), points.data().end());
    for (std::size_t d = 0; d < n; ++d) {
        double shift = 0.0, scale = 1.0;
        if (mode == Normalization::MinMax) {
            double lo = coords[d], hi = coords[d];
            for (std::size_t i = 0; i < m; ++i) {
                lo = std::min(lo, coords[i * n + d]);
                hi = std::max(hi, coords[i * n + d]);
            }
            shift = lo;
            scale = hi > lo ? hi - lo : 1.0;
        } else {
            double mean = 0.0;
            for (std::size_t i = 0; i < m; ++i) mean += coords[i * n + d];
            mean /= static_cast<double>(m);
            double var = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double e = coords[i * n + d] - mean;
                var += e * e;
            }
            const double sd = std::sqrt(var / static_cast<double>(m));
            shift = mean;
            scale = sd > 0.0 ? sd : 1.0;
        }
        for (std::size_t i = 0; i < m; ++i) coords[i * n + d] = (coords[i * n + d] - shift) / scale;
    }
    return PointSet(std::move(coords), n);
}

}  // namespace clusterscope
