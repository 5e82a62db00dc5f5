#pragma once

// Hand-rolled random generators for property tests. Every case is driven by
// its own 64-bit seed so a failure can be replayed from the printed value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "clusterscope/dataset.hpp"
#include "oracles.hpp"

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    bool coin() { return index(0, 1) == 1; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// m points in n dims. Half the time coordinates are small integers, which
/// produces repeated distances and points on the centroid.
inline oracle::Cloud cloud(Rng& r, std::size_t m, std::size_t n) {
    const bool lattice = r.coin();
    oracle::Cloud pts(m, oracle::Vec(n));
    for (auto& p : pts)
        for (double& v : p) v = lattice ? r.integer(-3, 3) : r.uniform(-5.0, 5.0);
    return pts;
}

/// Labels in 0..k-1 with every cluster nonempty.
inline std::vector<int> labels(Rng& r, std::size_t m, std::size_t k) {
    std::vector<int> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = i < k ? static_cast<int>(i) : r.integer(0, static_cast<int>(k) - 1);
    std::shuffle(out.begin(), out.end(), r.engine());
    return out;
}

inline clusterscope::PointSet to_pointset(const oracle::Cloud& pts) {
    std::vector<double> flat;
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    return clusterscope::PointSet(std::move(flat), pts.front().size());
}

inline oracle::Cloud to_cloud(const clusterscope::PointSet& ps) {
    oracle::Cloud out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto row = ps.row(i);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

inline oracle::Cloud coordinate_directions(std::size_t n) {
    oracle::Cloud dirs;
    for (int sign : {1, -1})
        for (std::size_t t = 0; t < n; ++t) {
            oracle::Vec u(n, 0.0);
            u[t] = sign;
            dirs.push_back(u);
        }
    return dirs;
}

/// Random orthogonal matrix (Gram-Schmidt on Gaussian columns).
inline std::vector<oracle::Vec> rotation(Rng& r, std::size_t n) {
    std::vector<oracle::Vec> q;
    while (q.size() < n) {
        oracle::Vec v(n);
        for (double& x : v) x = r.normal();
        for (const auto& b : q) {
            double d = 0.0;
            for (std::size_t t = 0; t < n; ++t) d += v[t] * b[t];
            for (std::size_t t = 0; t < n; ++t) v[t] -= d * b[t];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (double& x : v) x /= norm;
        q.push_back(v);
    }
    return q;
}

inline oracle::Cloud rigid_motion(const oracle::Cloud& pts, const std::vector<oracle::Vec>& q,
                                  const oracle::Vec& shift) {
    oracle::Cloud out;
    for (const auto& p : pts) {
        oracle::Vec y(p.size(), 0.0);
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b) y[a] += q[a][b] * p[b];
        for (std::size_t a = 0; a < p.size(); ++a) y[a] += shift[a];
        out.push_back(y);
    }
    return out;
}

inline oracle::Cloud scaled(const oracle::Cloud& pts, double factor) {
    oracle::Cloud out = pts;
    for (auto& p : out)
        for (double& v : p) v *= factor;
    return out;
}

}  // namespace gen
