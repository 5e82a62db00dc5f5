#include "clusterscope/report_io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "clusterscope/errors.hpp"

namespace clusterscope {

std::string sha256_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("sha256 initialisation failed");
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

Json to_json(const RunManifest& m) {
    Json inputs = Json::array();
    for (const auto& in : m.inputs)
        inputs.push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
    return Json{{"command", m.command},
                {"tool_version", m.tool_version},
                {"inputs", inputs},
                {"parameters", m.parameters},
                {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const Json& j) {
    const Json& src = j.contains("manifest") ? j.at("manifest") : j;
    try {
        RunManifest m;
        m.command = src.at("command").get<std::string>();
        m.tool_version = src.at("tool_version").get<std::string>();
        for (const auto& in : src.at("inputs"))
            m.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                                in.at("sha256").get<std::string>()});
        m.parameters = src.at("parameters");
        m.outputs = src.value("outputs", Json::object());
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("malformed manifest: ") + e.what());
    }
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

Json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

Json index_lists(const std::vector<std::vector<std::size_t>>& lists) {
    Json out = Json::array();
    for (const auto& l : lists) out.push_back(l);
    return out;
}

Json compactness_json(const CompactnessReport& c) {
    Json clusters = Json::array();
    for (std::size_t j = 0; j < c.clusters.size(); ++j) {
        const auto& cc = c.clusters[j];
        Json shells = Json::array();
        for (const auto& s : cc.shells)
            shells.push_back({{"inner", s.inner},
                              {"outer", s.outer},
                              {"size", s.size},
                              {"coverage", s.coverage}});
        clusters.push_back({{"cluster", j},
                            {"size", cc.size},
                            {"retained", cc.retained},
                            {"epsilon", optional_number(cc.epsilon)},
                            {"rungs", cc.rungs},
                            {"radius", cc.radius},
                            {"mean_radius", cc.mean_radius},
                            {"dense_gaps", cc.dense},
                            {"sparse_gaps", cc.sparse},
                            {"unshelled_points", cc.unshelled},
                            {"shells", shells},
                            {"compactness", cc.value}});
    }
    return Json{{"value", c.value},
                {"epsilon_rule", to_string(c.policy.rule)},
                {"epsilon_scope", c.policy.fixed ? "fixed" : std::string(to_string(c.policy.scope))},
                {"global_epsilon", optional_number(c.global_epsilon)},
                {"clusters", clusters}};
}

Json separability_json(const SeparabilityReport& s) {
    return Json{{"mu", s.mu},
                {"neighbors", index_lists(s.neighbors)},
                {"separated_neighbors", index_lists(s.separated)},
                {"n_total", s.n_total},
                {"n_separated", s.n_separated},
                {"ratio", s.ratio},
                {"cluster_margins", s.cluster_margins},
                {"distribution_margin", s.distribution_margin},
                {"total_margin_raw", s.total_margin_raw},
                {"total_margin_scaled", s.total_margin_scaled}};
}

Json matrix_json(const MarginMatrix& m, bool scaled) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.k(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.k(); ++j) row.push_back(scaled ? m.scaled(i, j) : m.margin(i, j));
        rows.push_back(row);
    }
    return rows;
}

Json pairs_json(const MarginMatrix& m) {
    Json out = Json::array();
    for (const auto& p : m.pairs())
        out.push_back({{"i", p.i},
                       {"j", p.j},
                       {"center_distance", p.center_distance},
                       {"delta_ij", p.delta_ij},
                       {"delta_ji", p.delta_ji},
                       {"margin", p.margin},
                       {"scaled_margin", p.scaled_margin},
                       {"adjacent_i", p.adjacent.of_first.size()},
                       {"adjacent_j", p.adjacent.of_second.size()}});
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

Json analysis_json(const AnalysisReport& report, const RunManifest& manifest) {
    Json centers = Json::array();
    for (const auto& c : report.centers) centers.push_back(c);
    Json analyses = Json::array();
    for (const auto& fa : report.filters) {
        Json a{{"filter", to_string(fa.filter)}, {"compactness", compactness_json(fa.compactness)}};
        if (fa.separability) {
            Json sep = separability_json(*fa.separability);
            sep["margins"] = matrix_json(*fa.margins, false);
            sep["scaled_margins"] = matrix_json(*fa.margins, true);
            sep["pairs"] = pairs_json(*fa.margins);
            a["separability"] = sep;
        } else {
            a["separability"] = "not applicable: single cluster";
        }
        analyses.push_back(a);
    }
    return Json{{"schema", kSchema},
                {"manifest", to_json(manifest)},
                {"points", report.points},
                {"dims", report.dims},
                {"k", report.k},
                {"cluster_sizes", report.cluster_sizes},
                {"centers", centers},
                {"analyses", analyses}};
}

Json sweep_json(const SweepReport& report, const RunManifest& manifest) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        const auto& p = report.points[i];
        rows.push_back({{"k", r.k},
                        {"wcss", r.wcss},
                        {"compactness", compactness_json(r.compactness)},
                        {"separability", separability_json(r.separability)},
                        {"t_raw", p.t_raw},
                        {"t_scaled", p.t_scaled},
                        {"baselines",
                         {{"silhouette_avg", json_number(r.baselines.silhouette_avg)},
                          {"davies_bouldin", json_number(r.baselines.davies_bouldin)},
                          {"xie_beni", json_number(r.baselines.xie_beni)},
                          {"dunn", json_number(r.baselines.dunn)},
                          {"calinski_harabasz", json_number(r.baselines.calinski_harabasz)}}}});
    }
    Json points = Json::array();
    for (const auto& p : report.points)
        points.push_back({{"k", p.k},
                          {"compactness", p.compactness},
                          {"separability", p.separability},
                          {"t_value", p.t_value}});
    Json ranking = Json::array();
    for (const auto& p : report.selection.ranking) ranking.push_back(p.k);
    return Json{{"schema", kSchema},
                {"manifest", to_json(manifest)},
                {"clusterer", kClustererName},
                {"filter", to_string(report.filter)},
                {"coordinate", to_string(report.coordinate)},
                {"rows", rows},
                {"decision_points", points},
                {"non_dominated", report.selection.front},
                {"selected_k", report.selection.k_star},
                {"ranking", ranking},
                {"ambiguous_with", report.selection.runner_up ? Json(*report.selection.runner_up)
                                                              : Json(nullptr)}};
}

std::string decision_csv(const SweepReport& report) {
    std::string out = "k,compactness,separability_raw,separability_scaled,t_raw,t_scaled\n";
    for (const auto& p : report.points)
        out += fmt::format("{},{},{},{},{},{}\n", p.k, format_number(p.compactness),
                           format_number(p.separability_raw), format_number(p.separability_scaled),
                           format_number(p.t_raw), format_number(p.t_scaled));
    return out;
}

std::string table_csv(const SweepReport& report) {
    std::string out = "k,T_k,S_av,DB,XB,Dn,CH\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& b = report.rows[i].baselines;
        out += fmt::format("{},{},{},{},{},{},{}\n", report.rows[i].k,
                           format_number(report.points[i].t_value), format_number(b.silhouette_avg),
                           format_number(b.davies_bouldin), format_number(b.xie_beni),
                           format_number(b.dunn), format_number(b.calinski_harabasz));
    }
    return out;
}

std::string margin_csv(const MarginMatrix& m, bool scaled) {
    std::string out = "cluster";
    for (std::size_t j = 0; j < m.k(); ++j) out += fmt::format(",{}", j);
    out += '\n';
    for (std::size_t i = 0; i < m.k(); ++i) {
        out += fmt::format("{}", i);
        for (std::size_t j = 0; j < m.k(); ++j)
            out += "," + format_number(scaled ? m.scaled(i, j) : m.margin(i, j));
        out += '\n';
    }
    return out;
}

std::string clusters_csv(const AnalysisReport& report) {
    std::string out =
        "filter,cluster,size,retained,epsilon,rungs,radius,mean_radius,unshelled,compactness\n";
    for (const auto& fa : report.filters)
        for (std::size_t j = 0; j < fa.compactness.clusters.size(); ++j) {
            const auto& c = fa.compactness.clusters[j];
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(fa.filter), j, c.size,
                               c.retained, c.epsilon ? format_number(*c.epsilon) : "",
                               c.rungs, format_number(c.radius), format_number(c.mean_radius),
                               c.unshelled, format_number(c.value));
        }
    return out;
}

std::string summary_csv(const AnalysisReport& report) {
    std::string out =
        "filter,k,C_k,s_k,distribution_margin,total_margin_raw,total_margin_scaled,N_k,N_bar_k\n";
    for (const auto& fa : report.filters) {
        out += fmt::format("{},{},{}", to_string(fa.filter), report.k,
                           format_number(fa.compactness.value));
        if (fa.separability) {
            const auto& s = *fa.separability;
            out += fmt::format(",{},{},{},{},{},{}\n", format_number(s.ratio),
                               format_number(s.distribution_margin),
                               format_number(s.total_margin_raw),
                               format_number(s.total_margin_scaled), s.n_total, s.n_separated);
        } else {
            out += ",,,,,,\n";
        }
    }
    return out;
}

std::string adjacency_csv(const Partition& partition, const MarginMatrix& margins) {
    const auto labels = partition.labels();
    std::vector<std::vector<std::size_t>> adjacent_to(labels.size());
    for (const auto& p : margins.pairs()) {
        for (std::size_t r : p.adjacent.of_first) adjacent_to[r].push_back(p.j);
        for (std::size_t r : p.adjacent.of_second) adjacent_to[r].push_back(p.i);
    }
    std::string out = "point,label,adjacent,adjacent_to\n";
    for (std::size_t r = 0; r < labels.size(); ++r) {
        auto& ids = adjacent_to[r];
        std::sort(ids.begin(), ids.end());
        std::string list;
        for (std::size_t id : ids) list += (list.empty() ? "" : ";") + std::to_string(id);
        out += fmt::format("{},{},{},{}\n", r, labels[r], ids.empty() ? 0 : 1, list);
    }
    return out;
}

std::string decision_svg(const SweepReport& report, const RunManifest& manifest) {
    constexpr double kLeft = 70, kRight = 490, kTop = 40, kBottom = 460;
    double y_lo = -1.0, y_hi = 1.0;
    for (const auto& p : report.points) {
        y_lo = std::min(y_lo, std::floor(p.separability));
        y_hi = std::max(y_hi, std::ceil(p.separability));
    }
    const auto px = [&](double c) { return kLeft + c * (kRight - kLeft); };
    const auto py = [&](double s) { return kBottom - (s - y_lo) / (y_hi - y_lo) * (kBottom - kTop); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"540\" height=\"520\" "
           "viewBox=\"0 0 540 520\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<metadata>" + xml_escape(to_json(manifest).dump()) + "</metadata>\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"540\" height=\"520\" fill=\"white\"/>\n";
    svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
                       "fill=\"none\" stroke=\"black\"/>\n",
                       kLeft, kTop, kRight - kLeft, kBottom - kTop);
    for (int t = 0; t <= 4; ++t) {
        const double c = t / 4.0;
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                           "stroke=\"black\"/><text x=\"{0:.2f}\" y=\"{3:.2f}\" "
                           "text-anchor=\"middle\">{4:.2f}</text>\n",
                           px(c), kBottom, kBottom + 5, kBottom + 18, c);
    }
    const int y_steps = static_cast<int>(std::lround((y_hi - y_lo) / 0.5));
    for (int t = 0; t <= y_steps; ++t) {
        const double s = y_lo + 0.5 * t;
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                           "stroke=\"black\"/><text x=\"{3:.2f}\" y=\"{4:.2f}\" "
                           "text-anchor=\"end\">{5:.1f}</text>\n",
                           kLeft - 5, py(s), kLeft, kLeft - 8, py(s) + 4, s);
    }
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                       "stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                       kLeft, py(0.0), kRight, py(0.0));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"505\" text-anchor=\"middle\">compactness C_k</text>\n",
                       (kLeft + kRight) / 2);
    svg += fmt::format("<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 18 {:.2f})\">separability ({} total margin)</text>\n",
                       (kTop + kBottom) / 2, (kTop + kBottom) / 2, to_string(report.coordinate));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"13\">"
                       "Decision space (filter {}, selected k = {})</text>\n",
                       (kLeft + kRight) / 2, to_string(report.filter), report.selection.k_star);

    const auto& front = report.selection.front;
    for (const auto& p : report.points) {
        const double x = px(p.compactness), y = py(p.separability);
        const bool on_front = std::find(front.begin(), front.end(), p.k) != front.end();
        if (p.k == report.selection.k_star) {
            std::string pts;
            for (int v = 0; v < 10; ++v) {
                const double r = v % 2 ? 4.0 : 10.0;
                const double a = -M_PI / 2 + v * M_PI / 5;
                pts += fmt::format("{}{:.2f},{:.2f}", v ? " " : "", x + r * std::cos(a),
                                   y + r * std::sin(a));
            }
            svg += fmt::format("<polygon points=\"{}\" fill=\"#d62728\" stroke=\"black\"/>\n", pts);
        } else {
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4.5\" fill=\"{}\" "
                               "stroke=\"black\"/>\n",
                               x, y, on_front ? "#ff7f0e" : "#1f77b4");
        }
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", x + 8, y - 6, p.k);
    }
    svg += "</svg>\n";
    return svg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace clusterscope
