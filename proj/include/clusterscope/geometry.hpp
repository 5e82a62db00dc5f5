#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace clusterscope {

using Point = std::vector<double>;
using PointView = std::span<const double>;

inline double squared_distance(PointView a, PointView b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Euclidean distance. Symmetric bit-for-bit: (a-b)^2 == (b-a)^2.
inline double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

inline double dot(PointView a, PointView b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(PointView a) { return std::sqrt(dot(a, a)); }

/// Cosine of the angle between (a - origin) and (b - origin).
/// Both vectors must be nonzero.
inline double cosine_at(PointView origin, PointView a, PointView b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < origin.size(); ++i) {
        const double u = a[i] - origin[i];
        const double v = b[i] - origin[i];
        ab += u * v;
        aa += u * u;
        bb += v * v;
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

}  // namespace clusterscope
