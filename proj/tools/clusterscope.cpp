// clusterscope: cluster validity indices and number-of-clusters selection.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clusterscope/dataset.hpp"
#include "clusterscope/errors.hpp"
#include "clusterscope/pipeline.hpp"
#include "clusterscope/report_io.hpp"

namespace fs = std::filesystem;
using namespace clusterscope;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const char* kCsvHelp = R"(Output files:
  analyze --csv DIR writes
    summary.csv          filter,k,C_k,s_k,distribution_margin,total_margin_raw,
                         total_margin_scaled,N_k,N_bar_k
    clusters.csv         filter,cluster,size,retained,epsilon,rungs,radius,
                         mean_radius,unshelled,compactness
    margins-F.csv        raw margin matrix for filter F (row/column = cluster id)
    margins-scaled-F.csv scaled margin matrix for filter F
    adjacent-F.csv       point,label,adjacent,adjacent_to (';'-separated ids)
    manifest.json        run manifest
  sweep --csv FILE       k,compactness,separability_raw,separability_scaled,
                         t_raw,t_scaled
  sweep --table FILE     k,T_k,S_av,DB,XB,Dn,CH (CH is not rescaled)
  Every CSV file written by sweep gets a FILE.manifest.json sidecar; JSON and
  SVG outputs embed the manifest. Unbounded values are written as "inf".

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.)";

// ---- resolved parameters ---------------------------------------------------

struct IndexFlags {
    std::string epsilon = "auto";
    std::string epsilon_rule = "radius-over-p";
    std::string epsilon_scope = "cluster";
    double eta = DirectionSet::kDefaultEta;
    double mu = NeighborGraph::kDefaultMu;
    std::string coordinate = "scaled";
    std::string directions;
};

void add_index_flags(CLI::App* cmd, IndexFlags& f) {
    cmd->add_option("--epsilon", f.epsilon, "auto or a positive value shared by all clusters")
        ->check([](const std::string& s) -> std::string {
            if (s == "auto") return {};
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v))
                return "expected 'auto' or a positive number";
            return {};
        })
        ->capture_default_str();
    cmd->add_option("--epsilon-rule", f.epsilon_rule, "rule for automatic epsilon")
        ->check(CLI::IsMember({"radius-over-p", "median-gap"}))
        ->capture_default_str();
    cmd->add_option("--epsilon-scope", f.epsilon_scope,
                    "automatic epsilon per cluster or from the whole data set")
        ->check(CLI::IsMember({"cluster", "dataset"}))
        ->capture_default_str();
    cmd->add_option("--eta", f.eta, "direction coverage cosine threshold in (0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--mu", f.mu, "neighbor occlusion cosine threshold in (0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--coordinate", f.coordinate, "total margin used as separability")
        ->check(CLI::IsMember({"scaled", "raw"}))
        ->capture_default_str();
    cmd->add_option("--directions", f.directions,
                    "file of unit probe directions, one per line (default: +-e_i)");
}

Json index_params(const IndexFlags& f) {
    return Json{{"epsilon", f.epsilon},
                {"epsilon_rule", f.epsilon_rule},
                {"epsilon_scope", f.epsilon_scope},
                {"eta", f.eta},
                {"mu", f.mu},
                {"coordinate", f.coordinate},
                {"directions", f.directions.empty() ? Json(nullptr) : Json(f.directions)}};
}

IndexOptions index_options(const Json& p) {
    IndexOptions o;
    o.epsilon.rule = *parse_epsilon_rule(p.at("epsilon_rule").get<std::string>());
    o.epsilon.scope = *parse_epsilon_scope(p.at("epsilon_scope").get<std::string>());
    const auto eps = p.at("epsilon").get<std::string>();
    if (eps != "auto") o.epsilon.fixed = std::stod(eps);
    o.mu = p.at("mu").get<double>();
    o.coordinate = *parse_coordinate(p.at("coordinate").get<std::string>());
    return o;
}

DirectionSet directions(const Json& p, std::size_t dims) {
    const double eta = p.at("eta").get<double>();
    if (p.at("directions").is_null()) return DirectionSet::coordinate(dims, eta);
    return DirectionSet::load(p.at("directions").get<std::string>(), eta);
}

InputRecord input(std::string role, const std::string& path) {
    return {std::move(role), path, sha256_hex(path)};
}

// ---- output handling -------------------------------------------------------

/// Where an output recorded in the manifest is written; replay may redirect it.
fs::path output_path(const RunManifest& m, const char* role, const std::optional<fs::path>& out_dir) {
    fs::path p = m.outputs.at(role).get<std::string>();
    return out_dir ? *out_dir / p.filename() : p;
}

bool has_output(const RunManifest& m, const char* role) {
    return m.outputs.contains(role) && !m.outputs.at(role).is_null();
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_with_sidecar(const fs::path& path, const std::string& text, const RunManifest& m) {
    ensure_parent(path);
    write_text(path, text);
    write_text(fs::path(path.string() + ".manifest.json"), dump(to_json(m)));
}

// ---- analyze ---------------------------------------------------------------

void run_analyze(const RunManifest& m, const std::optional<fs::path>& out_dir) {
    const Json& p = m.parameters;
    const auto points_path = p.at("points").get<std::string>();
    const auto labels_path = p.at("labels").get<std::string>();
    const PointSet points = load_points(points_path);
    const LabelSet labels = load_labels(labels_path);
    if (labels.labels.size() != points.size())
        throw DataError(fmt::format("{} has {} rows but {} has {} labels", points_path,
                                    points.size(), labels_path, labels.labels.size()));
    const Partition partition(points, labels.labels);

    std::vector<Filter> filters;
    for (const auto& f : p.at("filters")) filters.push_back(*parse_filter(f.get<std::string>()));
    const AnalysisReport report =
        analyze(points, partition, filters, index_options(p), directions(p, points.dims()));

    fmt::print("{} points, {} dims, k = {}\n", report.points, report.dims, report.k);
    for (const auto& fa : report.filters) {
        fmt::print("filter {}: C_k = {:.6f}", to_string(fa.filter), fa.compactness.value);
        if (fa.separability) {
            const auto& s = *fa.separability;
            fmt::print(", s_k = {:.6f} ({}/{}), s_bar = {:.6f}, total margin raw = {:.6f}, "
                       "scaled = {:.6f}\n",
                       s.ratio, s.n_separated, s.n_total, s.distribution_margin,
                       s.total_margin_raw, s.total_margin_scaled);
        } else {
            fmt::print(", separability not applicable (single cluster)\n");
        }
        for (std::size_t j = 0; j < fa.compactness.clusters.size(); ++j)
            fmt::print("  cluster {}: size {}, c = {:.6f}\n", j, fa.compactness.clusters[j].size,
                       fa.compactness.clusters[j].value);
    }

    if (has_output(m, "json")) {
        const auto path = output_path(m, "json", out_dir);
        ensure_parent(path);
        write_text(path, dump(analysis_json(report, m)));
    }
    if (has_output(m, "csv")) {
        const auto dir = output_path(m, "csv", out_dir);
        fs::create_directories(dir);
        write_text(dir / "summary.csv", summary_csv(report));
        write_text(dir / "clusters.csv", clusters_csv(report));
        for (const auto& fa : report.filters) {
            if (!fa.margins) continue;
            const std::string f(to_string(fa.filter));
            write_text(dir / ("margins-" + f + ".csv"), margin_csv(*fa.margins, false));
            write_text(dir / ("margins-scaled-" + f + ".csv"), margin_csv(*fa.margins, true));
            write_text(dir / ("adjacent-" + f + ".csv"), adjacency_csv(partition, *fa.margins));
        }
        write_text(dir / "manifest.json", dump(to_json(m)));
    }
}

// ---- sweep -----------------------------------------------------------------

void run_sweep_command(const RunManifest& m, const std::optional<fs::path>& out_dir) {
    const Json& p = m.parameters;
    const PointSet points = load_points(p.at("points").get<std::string>());
    SweepConfig config;
    config.k_min = p.at("kmin").get<std::size_t>();
    config.k_max = p.at("kmax").get<std::size_t>();
    config.restarts = p.at("restarts").get<std::size_t>();
    config.seed = p.at("seed").get<std::uint64_t>();
    config.max_iters = p.at("max_iters").get<std::size_t>();
    config.tol = p.at("tol").get<double>();
    const Filter filter = *parse_filter(p.at("filter").get<std::string>());

    const SweepReport report =
        run_sweep(points, config, filter, index_options(p), directions(p, points.dims()));

    fmt::print("{:>4} {:>10} {:>10} {:>10} {:>10}\n", "k", "C_k", "sep", "T_k", "wcss");
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& d = report.points[i];
        fmt::print("{:>4} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.4g}\n", d.k, d.compactness,
                   d.separability, d.t_value, report.rows[i].wcss);
    }
    fmt::print("selected k = {}", report.selection.k_star);
    if (report.selection.runner_up)
        fmt::print(" (ambiguous: k = {} within {})", *report.selection.runner_up,
                   Selection::kAmbiguityGap);
    fmt::print("\n");

    if (has_output(m, "json")) {
        const auto path = output_path(m, "json", out_dir);
        ensure_parent(path);
        write_text(path, dump(sweep_json(report, m)));
    }
    if (has_output(m, "csv")) write_with_sidecar(output_path(m, "csv", out_dir), decision_csv(report), m);
    if (has_output(m, "table")) write_with_sidecar(output_path(m, "table", out_dir), table_csv(report), m);
    if (has_output(m, "svg")) {
        const auto path = output_path(m, "svg", out_dir);
        ensure_parent(path);
        write_text(path, decision_svg(report, m));
    }
    if (has_output(m, "labels")) {
        const auto dir = output_path(m, "labels", out_dir);
        fs::create_directories(dir);
        for (const auto& row : report.rows) write_labels(dir / fmt::format("labels-k{}.txt", row.k), row.labels);
        write_text(dir / "manifest.json", dump(to_json(m)));
    }
}

// ---- generate / normalize --------------------------------------------------

MixtureSpec load_mixture_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        const Json j = Json::parse(in);
        MixtureSpec spec;
        spec.seed = j.value("seed", std::uint64_t{0});
        for (const auto& c : j.at("components"))
            spec.components.push_back({c.at("center").get<Point>(), c.at("sigma").get<double>(),
                                       c.at("count").get<std::size_t>()});
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void run_generate(const RunManifest& m, const std::optional<fs::path>& out_dir) {
    const Json& p = m.parameters;
    MixtureSpec spec = p.at("preset").is_null()
                           ? load_mixture_spec(p.at("spec").get<std::string>())
                           : mixture_preset(p.at("preset").get<std::string>(), 0);
    if (!p.at("seed").is_null()) spec.seed = p.at("seed").get<std::uint64_t>();
    const Mixture mix = generate_mixture(spec);

    const auto out = output_path(m, "points", out_dir);
    write_with_sidecar(out, format_points(mix.points), m);
    if (has_output(m, "labels")) {
        const auto labels = output_path(m, "labels", out_dir);
        ensure_parent(labels);
        write_labels(labels, mix.labels);
    }
    fmt::print("{} points in {} clusters written to {}\n", mix.points.size(),
               spec.components.size(), out.string());
}

void run_normalize(const RunManifest& m, const std::optional<fs::path>& out_dir) {
    const Json& p = m.parameters;
    const PointSet points = load_points(p.at("points").get<std::string>());
    const auto mode = p.at("mode").get<std::string>() == "zscore" ? Normalization::ZScore
                                                                   : Normalization::MinMax;
    write_with_sidecar(output_path(m, "points", out_dir), format_points(normalize(points, mode)), m);
}

void execute(const RunManifest& m, const std::optional<fs::path>& out_dir) {
    if (m.command == "analyze") return run_analyze(m, out_dir);
    if (m.command == "sweep") return run_sweep_command(m, out_dir);
    if (m.command == "generate") return run_generate(m, out_dir);
    if (m.command == "normalize") return run_normalize(m, out_dir);
    throw InvalidSpec("manifest names unknown command '" + m.command + "'");
}

void verify_inputs(const RunManifest& m) {
    for (const auto& in : m.inputs) {
        const auto now = sha256_hex(in.path);
        if (now != in.sha256)
            throw DataError(fmt::format("input {} ({}) changed since the manifest was written",
                                        in.path, in.role));
    }
}

Json optional_path(const std::string& s) { return s.empty() ? Json(nullptr) : Json(s); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Absolute cluster validity indices and decision-space selection of k"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "indices of a labelled partition");
    std::string a_points, a_labels, a_json, a_csv;
    std::vector<std::string> a_filters{"full"};
    IndexFlags a_flags;
    analyze_cmd->add_option("points", a_points, "point file")->required();
    analyze_cmd->add_option("labels", a_labels, "label file, one id per line")
        ->required();
    analyze_cmd->add_option("--filter", a_filters, "one or more of full, ms, med")
        ->check(CLI::IsMember({"full", "ms", "med"}))
        ->delimiter(',')
        ->capture_default_str();
    analyze_cmd->add_option("--json", a_json, "JSON report path");
    analyze_cmd->add_option("--csv", a_csv, "directory for CSV tables");
    add_index_flags(analyze_cmd, a_flags);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "cluster for a range of k and select k");
    std::string s_points, s_json, s_csv, s_table, s_svg, s_labels, s_filter = "ms";
    std::size_t kmin = 2, kmax = 10, restarts = 10, max_iters = 300;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    IndexFlags s_flags;
    sweep_cmd->add_option("points", s_points, "point file")->required();
    sweep_cmd->add_option("--kmin", kmin, "smallest k (>= 2)")->capture_default_str();
    sweep_cmd->add_option("--kmax", kmax, "largest k")->capture_default_str();
    sweep_cmd->add_option("--restarts", restarts, "k-means++ restarts per k")->capture_default_str();
    sweep_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    sweep_cmd->add_option("--max-iters", max_iters, "Lloyd iterations per run")->capture_default_str();
    sweep_cmd->add_option("--tol", tol, "relative WCSS improvement stop")->capture_default_str();
    sweep_cmd->add_option("--filter", s_filter, "full, ms or med")
        ->check(CLI::IsMember({"full", "ms", "med"}))
        ->capture_default_str();
    sweep_cmd->add_option("--json", s_json, "JSON report path");
    sweep_cmd->add_option("--csv", s_csv, "decision point CSV path");
    sweep_cmd->add_option("--table", s_table, "comparison table CSV path");
    sweep_cmd->add_option("--svg", s_svg, "decision space SVG path");
    sweep_cmd->add_option("--save-labels", s_labels, "directory for labels-k<k>.txt files");
    add_index_flags(sweep_cmd, s_flags);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "synthetic Gaussian mixture data");
    std::string g_preset, g_spec, g_out, g_labels;
    std::optional<std::uint64_t> g_seed;
    auto* preset_opt = gen_cmd->add_option("--preset", g_preset, "preset name");
    auto* spec_opt = gen_cmd->add_option("--spec", g_spec, "JSON mixture spec");
    preset_opt->excludes(spec_opt);
    gen_cmd->add_option("--seed", g_seed, "random seed (overrides the spec file)");
    gen_cmd->add_option("--out", g_out, "point file to write")->required();
    gen_cmd->add_option("--labels-out", g_labels, "label file to write");

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "rescale every attribute");
    std::string n_points, n_out, n_mode = "minmax";
    norm_cmd->add_option("points", n_points, "point file")->required();
    norm_cmd->add_option("--mode", n_mode, "minmax or zscore")
        ->check(CLI::IsMember({"minmax", "zscore"}))
        ->capture_default_str();
    norm_cmd->add_option("--out", n_out, "output point file")->required();

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    std::string r_manifest, r_out_dir;
    replay_cmd->add_option("manifest", r_manifest, "manifest, or a JSON report embedding one")
        ->required();
    replay_cmd->add_option("--out-dir", r_out_dir, "write outputs here instead of the recorded paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        RunManifest m;
        std::optional<fs::path> out_dir;
        if (*analyze_cmd) {
            m.command = "analyze";
            m.inputs = {input("points", a_points), input("labels", a_labels)};
            m.parameters = index_params(a_flags);
            m.parameters["points"] = a_points;
            m.parameters["labels"] = a_labels;
            m.parameters["filters"] = a_filters;
            m.outputs = {{"json", optional_path(a_json)}, {"csv", optional_path(a_csv)}};
            if (!a_flags.directions.empty()) m.inputs.push_back(input("directions", a_flags.directions));
        } else if (*sweep_cmd) {
            if (kmin < 2) throw UsageError("--kmin must be at least 2");
            if (kmin > kmax) throw UsageError("--kmin must not exceed --kmax");
            if (restarts < 1) throw UsageError("--restarts must be at least 1");
            m.command = "sweep";
            m.inputs = {input("points", s_points)};
            m.parameters = index_params(s_flags);
            m.parameters["points"] = s_points;
            m.parameters["kmin"] = kmin;
            m.parameters["kmax"] = kmax;
            m.parameters["restarts"] = restarts;
            m.parameters["seed"] = seed;
            m.parameters["max_iters"] = max_iters;
            m.parameters["tol"] = tol;
            m.parameters["filter"] = s_filter;
            m.parameters["clusterer"] = kClustererName;
            m.outputs = {{"json", optional_path(s_json)},   {"csv", optional_path(s_csv)},
                         {"table", optional_path(s_table)}, {"svg", optional_path(s_svg)},
                         {"labels", optional_path(s_labels)}};
            if (!s_flags.directions.empty()) m.inputs.push_back(input("directions", s_flags.directions));
        } else if (*gen_cmd) {
            if (g_preset.empty() == g_spec.empty())
                throw UsageError("give exactly one of --preset and --spec");
            m.command = "generate";
            if (!g_spec.empty()) m.inputs = {input("spec", g_spec)};
            m.parameters = {{"preset", optional_path(g_preset)},
                            {"spec", optional_path(g_spec)},
                            {"seed", g_seed ? Json(*g_seed) : Json(nullptr)}};
            m.outputs = {{"points", g_out}, {"labels", optional_path(g_labels)}};
        } else if (*norm_cmd) {
            m.command = "normalize";
            m.inputs = {input("points", n_points)};
            m.parameters = {{"points", n_points}, {"mode", n_mode}};
            m.outputs = {{"points", n_out}};
        } else {
            std::ifstream in(r_manifest);
            if (!in) throw IoError("cannot open " + r_manifest);
            Json j;
            try {
                j = Json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw InvalidSpec(fmt::format("{}: {}", r_manifest, e.what()));
            }
            m = manifest_from_json(j);
            verify_inputs(m);
            if (!r_out_dir.empty()) out_dir = fs::path(r_out_dir);
        }
        execute(m, out_dir);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed manifest: " << e.what() << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
