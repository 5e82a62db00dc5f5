// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>

#include "clusterscope/baselines.hpp"
#include "clusterscope/clustering.hpp"
#include "clusterscope/pipeline.hpp"
#include "support/generators.hpp"

using namespace clusterscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    fmt::print("{} [{}] {}: {} ({:.2f} s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
    std::fflush(stdout);
}

std::vector<std::size_t> all_rows(std::size_t m) {
    std::vector<std::size_t> r(m);
    std::iota(r.begin(), r.end(), std::size_t{0});
    return r;
}

oracle::Cloud continuous_cloud(gen::Rng& r, std::size_t m, std::size_t n) {
    oracle::Cloud pts(m, oracle::Vec(n));
    for (auto& p : pts)
        for (double& v : p) v = r.uniform(-5.0, 5.0);
    return pts;
}

double pick_epsilon(gen::Rng& r, const oracle::Vec& ladder) {
    const std::size_t p = ladder.size() - 1;
    switch (r.index(0, 4)) {
        case 0: return 0.0;
        case 1: return ladder[p];
        case 2: return ladder[p] / static_cast<double>(p);
        case 3: {
            const std::size_t i = r.index(1, p);
            return ladder[i] - ladder[i - 1];
        }
        default: return r.uniform(0.0, ladder[p]);
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Labels of a Lloyd fixed point: every point is nearest to its own centroid.
std::vector<int> lloyd_fixed_point(const PointSet& ps, std::vector<Point> centers) {
    std::vector<int> labels;
    for (int it = 0; it < 200; ++it) {
        std::vector<int> next = assign_voronoi(ps, centers);
        if (next == labels) break;
        labels = std::move(next);
        const std::size_t k = centers.size();
        std::vector<std::vector<std::size_t>> rows(k);
        for (std::size_t i = 0; i < labels.size(); ++i) rows[static_cast<std::size_t>(labels[i])].push_back(i);
        std::vector<Point> kept;
        for (std::size_t j = 0; j < k; ++j)
            if (!rows[j].empty()) kept.push_back(centroid(ps, rows[j]));
        centers = std::move(kept);
    }
    return labels;
}

// ---- 1 --------------------------------------------------------------------

Outcome oracle_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t c_cases = 0, c_bad = 0, m_cases = 0, m_bad = 0, n_bad = 0;
    double c_err = 0.0, m_err = 0.0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        gen::Rng r(0xC0FFEE + seed);
        const std::size_t n = r.index(1, 3);
        const auto pts = gen::cloud(r, r.index(1, 12), n);
        const auto center = oracle::mean(pts);
        const auto ladder = oracle::ladder(pts, center);
        const double eps = ladder.size() > 1 ? pick_epsilon(r, ladder) : r.uniform(0.0, 1.0);
        const double eta = r.coin() ? DirectionSet::kDefaultEta : r.uniform(0.2, 1.0);
        const double want = oracle::compactness(pts, center, eps, gen::coordinate_directions(n), eta);
        const double got = cluster_compactness(gen::to_pointset(pts), all_rows(pts.size()), center, eps,
                                               DirectionSet::coordinate(n, eta))
                               .value;
        ++c_cases;
        c_err = std::max(c_err, std::abs(got - want));
        if (!(std::abs(got - want) <= 1e-12)) ++c_bad;
    }
    for (std::uint64_t seed = 0; m_cases < 200; ++seed) {
        gen::Rng r(0xBEEF + seed);
        const std::size_t k = r.index(2, 4);
        const std::size_t m = r.index(k, 20);
        const auto pts = gen::cloud(r, m, r.index(1, 3));
        const auto labels = gen::labels(r, m, k);
        const PointSet ps = gen::to_pointset(pts);
        const Partition part(ps, labels);
        oracle::Cloud centers;
        for (std::size_t j = 0; j < k; ++j)
            centers.push_back(oracle::mean(oracle::members(pts, labels, static_cast<int>(j))));
        bool distinct = true;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (oracle::dist(centers[i], centers[j]) == 0.0) distinct = false;
        if (!distinct) continue;
        ++m_cases;
        const MarginMatrix mm = margin_matrix(part, ps);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) continue;
                const auto o = oracle::margin(oracle::members(pts, labels, static_cast<int>(i)),
                                              oracle::members(pts, labels, static_cast<int>(j)),
                                              centers[i], centers[j]);
                const double e = std::max(std::abs(mm.margin(i, j) - o.beta),
                                          std::abs(mm.scaled(i, j) - o.scaled));
                m_err = std::max(m_err, e);
                if (!(e <= 1e-12)) ++m_bad;
            }
        const double mu = r.coin() ? NeighborGraph::kDefaultMu : r.uniform(0.05, 1.0);
        if (neighbor_graph(part, mu).neighbors != oracle::neighbors(centers, mu)) ++n_bad;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c_cases >= 200 && m_cases >= 200 && c_bad == 0 && m_bad == 0 && n_bad == 0 && secs < 10.0;
    return {ok, fmt::format("c: {} instances, {} mismatches, max |err| {:.2e}; beta/beta_bar/N: {} partitions, "
                            "{} margin mismatches (max |err| {:.2e}), {} neighbor mismatches; {:.2f} s < 10 s",
                            c_cases, c_bad, c_err, m_cases, m_bad, m_err, n_bad, secs)};
}

// ---- 2 --------------------------------------------------------------------

Outcome step_property() {
    std::size_t violations = 0, samples = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        gen::Rng r(0x5715 + seed);
        const PointSet ps = gen::to_pointset(gen::cloud(r, r.index(2, 40), r.index(1, 3)));
        const DistanceLadder l = build_ladder(ps, all_rows(ps.size()), centroid(ps));
        std::vector<double> ts;
        for (int s = 0; s < 200; ++s) ts.push_back(r.uniform(0.0, 1.25 * l.radius));
        ts.insert(ts.end(), l.rungs.begin(), l.rungs.end());
        std::sort(ts.begin(), ts.end());
        double prev = -1.0;
        for (double t : ts) {
            const double v = compactness_function(l, t);
            if (v < prev) ++violations;
            prev = v;
            ++samples;
        }
        for (std::size_t i = 1; i <= l.p(); ++i) {
            const double base = compactness_function(l, l.rungs[i - 1]);
            for (int s = 0; s < 5; ++s) {
                double t = r.uniform(l.rungs[i - 1], l.rungs[i]);
                if (t <= l.rungs[i - 1] || t >= l.rungs[i]) continue;
                if (compactness_function(l, t) != base) ++violations;
                ++samples;
            }
        }
        for (int s = 0; s < 5; ++s) {
            if (compactness_function(l, l.radius * (1.0 + r.uniform(0.0, 2.0))) != l.mean_radius) ++violations;
            ++samples;
        }
    }
    return {violations == 0,
            fmt::format("100 clusters, {} exact comparisons, {} violations", samples, violations)};
}

// ---- 3 --------------------------------------------------------------------

Outcome anchors() {
    std::size_t bad_zero = 0, bad_alpha = 0, bad_mean = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        gen::Rng r(0xA11 + seed);
        const std::size_t n = r.index(1, 3);
        const PointSet ps = gen::to_pointset(gen::cloud(r, r.index(2, 30), n));
        const DistanceLadder l = build_ladder(ps, all_rows(ps.size()), centroid(ps));
        if (l.p() == 0) continue;
        ++checked;
        const auto dirs = DirectionSet::coordinate(n);
        if (cluster_compactness(ps, l, 0.0, dirs).value != 0.0) ++bad_zero;
        std::vector<std::size_t> shell;
        for (std::size_t i = 0; i < l.rows.size(); ++i)
            if (l.rung_of[i] > 0) shell.push_back(l.rows[i]);
        const double alpha = direction_coverage(ps, shell, l.center, dirs);
        if (cluster_compactness(ps, l, l.radius, dirs).value != alpha) ++bad_alpha;
        if (compactness_function(l, l.radius) != l.mean_radius) ++bad_mean;
    }
    const PointSet line = parse_points("0\n1\n4\n");
    const DistanceLadder l = build_ladder(line, all_rows(3), centroid(line));
    const double c = cluster_compactness(line, l, 7.0 / 9.0, DirectionSet::coordinate(1)).value;
    const double err = std::abs(c - 13.0 / 21.0);
    const bool ok = bad_zero == 0 && bad_alpha == 0 && bad_mean == 0 && err <= 1e-15;
    return {ok, fmt::format("{} clusters: c(0)=0 failures {}, c(R_A)=alpha failures {}, f(R_A)=R_av "
                            "failures {} (all exact); {{0,1,4}} at 7/9: c = {:.17g}, |c - 13/21| = {:.1e}",
                            checked, bad_zero, bad_alpha, bad_mean, c, err)};
}

// ---- 4 --------------------------------------------------------------------

Outcome scale_invariance() {
    double worst_fixed = 0.0, worst_rule = 0.0, worst_pipeline = 0.0;
    std::size_t selection_changes = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        gen::Rng r(0x5CA1E + seed);
        const std::size_t n = r.index(1, 3);
        const auto pts = continuous_cloud(r, r.index(2, 40), n);
        const double b = r.uniform(0.1, 10.0);
        const auto small = gen::scaled(pts, 1.0 / b);
        const PointSet a = gen::to_pointset(pts), s = gen::to_pointset(small);
        const auto dirs = DirectionSet::coordinate(n);
        const DistanceLadder la = build_ladder(a, all_rows(a.size()), centroid(a));
        const DistanceLadder ls = build_ladder(s, all_rows(s.size()), centroid(s));
        const double eps = r.uniform(0.0, la.radius);
        worst_fixed = std::max(worst_fixed, std::abs(cluster_compactness(a, la, eps, dirs).value -
                                                     cluster_compactness(s, ls, eps / b, dirs).value));
        const double ca = cluster_compactness(a, la, default_epsilon(la, EpsilonRule::RadiusOverP), dirs).value;
        const double cs = cluster_compactness(s, ls, default_epsilon(ls, EpsilonRule::RadiusOverP), dirs).value;
        worst_rule = std::max(worst_rule, std::abs(ca - cs));
    }
    // Whole pipeline on labelled mixtures: every index and the selected k.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Mixture mix = generate_mixture(mixture_preset(seed % 2 ? "ds2-like" : "ds1-like", seed));
        gen::Rng r(seed);
        const double b = r.uniform(0.1, 10.0);
        const PointSet s = gen::to_pointset(gen::scaled(gen::to_cloud(mix.points), 1.0 / b));
        SweepConfig cfg;
        cfg.k_max = 7;
        cfg.seed = seed;
        cfg.restarts = 3;
        const auto parts = incremental_kmeans_sweep(mix.points, cfg);
        const auto dirs = DirectionSet::coordinate(2);
        for (Filter f : {Filter::Full, Filter::MeanStd, Filter::Median}) {
            const SweepReport ra = evaluate_sweep(mix.points, parts, f, IndexOptions{}, dirs);
            const SweepReport rs = evaluate_sweep(s, parts, f, IndexOptions{}, dirs);
            if (ra.selection.k_star != rs.selection.k_star) ++selection_changes;
            for (std::size_t i = 0; i < ra.points.size(); ++i) {
                const auto& p = ra.points[i];
                const auto& q = rs.points[i];
                worst_pipeline = std::max({worst_pipeline, std::abs(p.compactness - q.compactness),
                                           std::abs(p.separability_scaled - q.separability_scaled),
                                           std::abs(p.t_scaled - q.t_scaled),
                                           std::abs(ra.rows[i].separability.ratio - rs.rows[i].separability.ratio)});
            }
        }
    }
    const bool ok = worst_fixed <= 1e-9 && worst_rule <= 1e-9 && worst_pipeline <= 1e-9 && selection_changes == 0;
    return {ok, fmt::format("50 clusters, b in [0.1,10]: max |c_A(eps) - c_A/b(eps/b)| = {:.1e}, R_A/p rule "
                            "{:.1e}; 30 sweeps (C_k, scaled margin, T_k, s_k) max diff {:.1e}, {} selection changes",
                            worst_fixed, worst_rule, worst_pipeline, selection_changes)};
}

// ---- 5 --------------------------------------------------------------------

Outcome margin_bound() {
    std::size_t partitions = 0, out_of_range = 0, margins = 0;
    double lo = 1.0, hi = -1.0;
    for (std::uint64_t seed = 0; partitions < 100; ++seed) {
        gen::Rng r(0xB0B + seed);
        const std::size_t n = r.index(1, 3), k = r.index(2, 6);
        const PointSet ps = gen::to_pointset(continuous_cloud(r, r.index(k + 5, 60), n));
        const auto init = continuous_cloud(r, k, n);
        const auto labels = lloyd_fixed_point(ps, std::vector<Point>(init.begin(), init.end()));
        const std::size_t used = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
        if (used < 2) continue;
        const Partition part(ps, labels);
        const MarginMatrix mm = margin_matrix(part, ps);
        ++partitions;
        for (std::size_t i = 0; i < part.k(); ++i)
            for (std::size_t j = i + 1; j < part.k(); ++j) {
                ++margins;
                lo = std::min(lo, mm.scaled(i, j));
                hi = std::max(hi, mm.scaled(i, j));
                if (!(mm.scaled(i, j) >= -1.0 && mm.scaled(i, j) <= 1.0)) ++out_of_range;
            }
    }
    std::size_t singleton_bad = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        gen::Rng r(0x51 + seed);
        const auto pts = continuous_cloud(r, 2, r.index(1, 3));
        const PointSet ps = gen::to_pointset(pts);
        if (margin_matrix(Partition(ps, {0, 1}), ps).scaled(0, 1) != 1.0) ++singleton_bad;
    }
    const bool ok = out_of_range == 0 && singleton_bad == 0;
    return {ok, fmt::format("100 Voronoi (Lloyd fixed point) partitions, {} scaled margins in [{:.4f}, {:.4f}], "
                            "{} outside [-1,1]; 100 singleton pairs, {} with beta_bar != 1",
                            margins, lo, hi, out_of_range, singleton_bad)};
}

// ---- 7 --------------------------------------------------------------------

Outcome generated_analogs() {
    int ds1_ok = 0, ds3_ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Mixture d1 = generate_mixture(mixture_preset("ds1-like", seed));
        const Partition p1(d1.points, d1.labels);
        const MarginMatrix full1 = margin_matrix(p1, d1.points, Filter::Full);
        bool all_pos = true;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) all_pos = all_pos && full1.margin(i, j) > 0.0;
        ds1_ok += all_pos;

        const Mixture d3 = generate_mixture(mixture_preset("ds3-like", seed));
        const Partition p3(d3.points, d3.labels);
        const MarginMatrix full3 = margin_matrix(p3, d3.points, Filter::Full);
        const MarginMatrix med3 = margin_matrix(p3, d3.points, Filter::Median);
        const NeighborGraph g = neighbor_graph(p3);
        constexpr std::size_t central = 3;
        bool overlap = false;
        for (std::size_t j : g.neighbors[central]) overlap = overlap || full3.margin(central, j) < 0.0;
        bool med_pos = true;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) med_pos = med_pos && med3.margin(i, j) > 0.0;
        ds3_ok += overlap && med_pos;
    }
    return {ds1_ok >= 8 && ds3_ok >= 8,
            fmt::format("ds1-like all FULL margins positive in {}/10 seeds; ds3-like central cluster "
                        "overlaps a neighbor under FULL with all MED margins positive in {}/10 seeds (need 8)",
                        ds1_ok, ds3_ok)};
}

// ---- 8 --------------------------------------------------------------------

Outcome baseline_oracles() {
    std::size_t cases = 0, bad = 0;
    double worst = 0.0;
    const auto cmp = [&](double got, double want) {
        if (std::isinf(want) || std::isinf(got)) {
            if (got != want) ++bad;
            return;
        }
        const double e = std::abs(got - want);
        worst = std::max(worst, e);
        if (!(e <= 1e-10)) ++bad;
    };
    for (std::uint64_t seed = 0; cases < 200; ++seed) {
        gen::Rng r(0xBA5E + seed);
        const std::size_t k = r.index(2, 4);
        const std::size_t m = r.index(k + 1, 15);
        const auto pts = gen::cloud(r, m, r.index(1, 3));
        const auto labels = gen::labels(r, m, k);
        oracle::Cloud centers;
        for (std::size_t j = 0; j < k; ++j)
            centers.push_back(oracle::mean(oracle::members(pts, labels, static_cast<int>(j))));
        bool distinct = true;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (oracle::dist(centers[i], centers[j]) == 0.0) distinct = false;
        if (!distinct) continue;
        ++cases;
        const PointSet ps = gen::to_pointset(pts);
        const Partition part(ps, labels);
        const int ki = static_cast<int>(k);
        cmp(silhouette_avg(part, ps), oracle::silhouette(pts, labels, ki));
        cmp(davies_bouldin(part, ps), oracle::davies_bouldin(pts, labels, ki));
        cmp(calinski_harabasz(part, ps), oracle::calinski_harabasz(pts, labels, ki));
        cmp(dunn(part, ps), oracle::dunn(pts, labels));
        cmp(xie_beni(part, ps), oracle::xie_beni(pts, labels, ki));
    }
    return {bad == 0, fmt::format("{} instances x 5 indices, {} mismatches, max |err| {:.1e} (tol 1e-10)",
                                  cases, bad, worst)};
}

// ---- 9 --------------------------------------------------------------------

Outcome determinism() {
    const fs::path root = fs::current_path() / "acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cli = CLUSTERSCOPE_CLI;
    const auto run = [&](const std::string& args) {
        const std::string cmd = fmt::format("cd '{}' && '{}' {} > /dev/null", root.string(), cli, args);
        return std::system(cmd.c_str()) == 0;
    };
    if (!run("generate --preset ds2-like --seed 5 --out data.csv"))
        return {false, "generate failed"};
    const std::string common =
        "sweep data.csv --kmin 2 --kmax 7 --seed 11 --restarts 4 --filter ms";
    const std::vector<std::string> files{"out.json", "decision.csv", "table.csv", "plot.svg"};
    for (const char* dir : {"run1", "run2"}) {
        if (!run(fmt::format("{0} --json {1}/out.json --csv {1}/decision.csv --table {1}/table.csv --svg {1}/plot.svg",
                             common, dir)))
            return {false, fmt::format("sweep into {} failed", dir)};
    }
    // run2 wrote a manifest naming run2 paths; replay the run1 manifest elsewhere.
    if (!run("replay run1/out.json --out-dir run3")) return {false, "replay failed"};
    std::size_t compared = 0;
    for (const auto& f : files) {
        const std::string a = slurp(root / "run1" / f);
        if (a.empty()) return {false, "missing " + f};
        if (slurp(root / "run3" / f) != a) return {false, f + " differs after manifest replay"};
        ++compared;
    }
    // Two direct runs differ only in the recorded output paths; strip them.
    const auto strip = [](std::string s, const std::string& dir) {
        for (std::size_t at; (at = s.find(dir + "/")) != std::string::npos;) s.erase(at, dir.size() + 1);
        return s;
    };
    for (const auto& f : files)
        if (strip(slurp(root / "run1" / f), "run1") != strip(slurp(root / "run2" / f), "run2"))
            return {false, f + " differs between two runs"};
    if (slurp(root / "run1" / "decision.csv") != slurp(root / "run2" / "decision.csv") ||
        slurp(root / "run1" / "table.csv") != slurp(root / "run2" / "table.csv"))
        return {false, "CSV bytes differ between two runs"};
    return {true, fmt::format("sweep manifest replay reproduced {} files byte for byte; two direct runs give "
                              "identical CSV bytes and JSON/SVG equal up to recorded output paths",
                              compared)};
}

}  // namespace

int main() {
    report(1, "definitional oracle suite", oracle_suite);
    report(2, "compactness function monotone step property", step_property);
    report(3, "closed-form anchors", anchors);
    report(4, "scale invariance", scale_invariance);
    report(5, "scaled margin bound", margin_bound);
    fmt::print("SKIP [6] benchmark reproduction: separate test acceptance_benchmarks\n");
    report(7, "generated DS1/DS3 analogs", generated_analogs);
    report(8, "baseline index oracles", baseline_oracles);
    report(9, "sweep determinism", determinism);
    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
