/// Spec-file parsing, JSON report builders, CSV cell dumps and SVG
/// rendering. All numeric output uses shortest round-trip formatting so
/// equal inputs give byte-identical artifacts.
#pragma once

#include "morphism.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dendrite {

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

inline Point point_at(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [x, y]");
    Point p{number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
    if (!is_finite(p)) throw ParseError(path + ": coordinates must be finite");
    return p;
}

}  // namespace detail

/// Spec-file schema:
///   { "name": string (optional),
///     "polygon": [[x,y], ...],              counterclockwise, n >= 3
///     "maps": [{"a":[re,im], "b":[re,im], "conjugate":bool (optional)}, ...],
///     "epsilon_rel": number (optional, default 1e-9) }
inline PolygonalTreeSystem parse_system(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document: expected an object");
    PolygonalTreeSystem sys;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ParseError("name: expected a string");
        sys.name = j["name"].get<std::string>();
    }
    if (j.contains("epsilon_rel"))
        sys.epsilon_rel = detail::number_at(j["epsilon_rel"], "epsilon_rel");
    if (sys.epsilon_rel <= 0.0 || !std::isfinite(sys.epsilon_rel))
        throw ParseError("epsilon_rel: must be a positive finite number");

    if (!j.contains("polygon")) throw ParseError("polygon: missing field");
    if (!j["polygon"].is_array() || j["polygon"].size() < 3)
        throw ParseError("polygon: expected an array of at least 3 vertices");
    std::vector<Point> verts;
    for (size_t k = 0; k < j["polygon"].size(); ++k)
        verts.push_back(detail::point_at(j["polygon"][k], "polygon[" + std::to_string(k) + "]"));
    double scale = 0.0;
    for (size_t a = 0; a < verts.size(); ++a)
        for (size_t b = a + 1; b < verts.size(); ++b) scale = std::max(scale, dist(verts[a], verts[b]));
    try {
        sys.polygon = make_polygon(std::move(verts), sys.epsilon_rel * scale);
    } catch (const GeometryError& e) {
        throw ParseError(std::string("polygon: ") + e.what());
    }

    if (!j.contains("maps")) throw ParseError("maps: missing field");
    if (!j["maps"].is_array()) throw ParseError("maps: expected an array");
    for (size_t k = 0; k < j["maps"].size(); ++k) {
        const auto& jm = j["maps"][k];
        std::string path = "maps[" + std::to_string(k) + "]";
        if (!jm.is_object()) throw ParseError(path + ": expected an object");
        if (!jm.contains("a")) throw ParseError(path + ".a: missing field");
        if (!jm.contains("b")) throw ParseError(path + ".b: missing field");
        Point a = detail::point_at(jm["a"], path + ".a");
        Point b = detail::point_at(jm["b"], path + ".b");
        bool conj = false;
        if (jm.contains("conjugate")) {
            if (!jm["conjugate"].is_boolean()) throw ParseError(path + ".conjugate: expected a boolean");
            conj = jm["conjugate"].get<bool>();
        }
        sys.maps.emplace_back(a.as_complex(), b.as_complex(), conj);
    }
    try {
        check_system_invariants(sys);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    return sys;
}

inline PolygonalTreeSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

inline nlohmann::json json_point(Point p) { return nlohmann::json::array({p.x, p.y}); }

inline nlohmann::json validation_json(const PolygonalTreeSystem& sys,
                                      const ValidationReport& rep) {
    nlohmann::json j;
    j["name"] = sys.name;
    j["accepted"] = rep.accepted();
    j["d1_ok"] = rep.d1_ok;
    j["d2_ok"] = rep.d2_ok;
    j["d3_ok"] = rep.d3_ok;
    j["d4_ok"] = rep.d4_ok;
    j["osc_ok"] = rep.osc_ok;
    j["one_point_ok"] = rep.one_point_ok;
    j["violations"] = nlohmann::json::array();
    for (const Violation& v : rep.violations) {
        nlohmann::json jv;
        jv["axiom"] = v.axiom;
        if (v.i >= 0) jv["i"] = v.i + 1;
        if (v.j >= 0) jv["j"] = v.j + 1;
        jv["detail"] = v.detail;
        if (v.witness) jv["witness"] = json_point(*v.witness);
        j["violations"].push_back(jv);
    }
    return j;
}

inline nlohmann::json metrics_json(const PolygonalTreeSystem& sys, const MetricConstants& mc,
                                   const OrderCaps& caps, const BtSample* bt, int depth,
                                   int samples, uint64_t seed) {
    nlohmann::json j;
    j["name"] = sys.name;
    j["rho"] = mc.rho;
    j["alpha_rad"] = mc.alpha;
    j["theta_min_rad"] = mc.theta_min;
    j["theta_max_rad"] = mc.theta_max;
    j["q"] = mc.q;
    j["diam_p"] = mc.diam_p;
    j["bt_constant"] = mc.bt;
    j["caps"] = {{"single", caps.single}, {"vertex", caps.vertex}, {"cutpoint", caps.cutpoint}};
    if (bt) {
        j["empirical"] = {{"depth", depth},
                          {"samples", samples},
                          {"seed", seed},
                          {"max_ratio", bt->max_ratio},
                          {"witness", nlohmann::json::array(
                                          {json_point(bt->witness_a), json_point(bt->witness_b)})}};
    }
    return j;
}

inline nlohmann::json tree_json(const PolygonalTreeSystem& sys, const SkeletonTree& sk,
                                const SkeletonTree& finer,
                                const std::vector<RamificationPoint>& rams) {
    nlohmann::json j;
    j["name"] = sys.name;
    j["depth"] = sk.depth;
    j["nodes"] = nlohmann::json::array();
    j["kinds"] = nlohmann::json::array();
    j["degrees"] = nlohmann::json::array();
    j["provisional"] = nlohmann::json::array();
    const double eps = sys.eps();
    for (const auto& nd : sk.nodes) {
        j["nodes"].push_back(json_point(nd.pos));
        j["kinds"].push_back(nd.kind == SkeletonTree::NodeKind::Vertex    ? "vertex"
                             : nd.kind == SkeletonTree::NodeKind::Contact ? "contact"
                                                                          : "cell");
        j["degrees"].push_back(nd.degree);
        // degree not yet reproduced at depth+1 -> provisional
        bool stable = false;
        for (const auto& fn : finer.nodes)
            if (dist(fn.pos, nd.pos) <= eps && fn.degree == nd.degree) {
                stable = true;
                break;
            }
        j["provisional"].push_back(!stable);
    }
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : sk.edges) j["edges"].push_back(nlohmann::json::array({a, b}));
    j["ramification"] = nlohmann::json::array();
    for (const auto& r : rams)
        j["ramification"].push_back({{"point", json_point(r.p)},
                                     {"degree", r.degree},
                                     {"interior", r.interior},
                                     {"provisional", r.provisional}});
    return j;
}

inline nlohmann::json orders_json(const PolygonalTreeSystem& sys, const OrderReport& rep) {
    nlohmann::json j;
    j["name"] = sys.name;
    j["depth"] = rep.depth;
    j["caps"] = {{"single", rep.caps.single},
                 {"vertex", rep.caps.vertex},
                 {"cutpoint", rep.caps.cutpoint}};
    j["max_node_degree"] = rep.max_node_degree;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : rep.vertices)
        j["vertices"].push_back({{"vertex", v.vertex + 1},
                                 {"fiber_count", v.fiber_count},
                                 {"branch_degree", v.branch_degree},
                                 {"cap", v.cap}});
    return j;
}

inline nlohmann::json morphism_json(const EquivalenceResult& eq, const HolderCertificate* h,
                                    const nlohmann::json* residuals) {
    nlohmann::json j;
    j["equivalent"] = eq.equivalent;
    if (!eq.diagnostic.empty()) j["diagnostic"] = eq.diagnostic;
    auto tuples3 = [](const std::vector<std::array<int, 3>>& ts) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& t : ts) a.push_back({t[0] + 1, t[1] + 1, t[2] + 1});
        return a;
    };
    auto tuples4 = [](const std::vector<std::array<int, 4>>& ts) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& t : ts) a.push_back({t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1});
        return a;
    };
    if (!eq.missing_vertex_maps.empty()) j["missing_vertex_maps"] = tuples3(eq.missing_vertex_maps);
    if (!eq.extra_vertex_maps.empty()) j["extra_vertex_maps"] = tuples3(eq.extra_vertex_maps);
    if (!eq.missing_contacts.empty()) j["missing_contacts"] = tuples4(eq.missing_contacts);
    if (!eq.extra_contacts.empty()) j["extra_contacts"] = tuples4(eq.extra_contacts);
    if (eq.permutation) {
        nlohmann::json p = nlohmann::json::array();
        for (int v : *eq.permutation) p.push_back(v + 1);
        j["permutation"] = p;
    }
    if (h) {
        j["beta"] = h->beta;
        j["beta_prime"] = h->beta_prime;
        j["forward_constant"] = h->forward_constant;
        j["backward_constant"] = h->backward_constant;
    }
    if (residuals) j["residuals"] = *residuals;
    return j;
}

/// address,x0,y0,...,x{n-1},y{n-1} per cell, lexicographic order.
inline std::string cells_csv(const std::vector<Cell>& cells, int map_count) {
    std::string out;
    for (const Cell& c : cells) {
        out += address_string(c.address, map_count);
        for (const Point& v : c.polygon.verts) {
            out += ',';
            out += fmt_double(v.x);
            out += ',';
            out += fmt_double(v.y);
        }
        out += '\n';
    }
    return out;
}

struct RenderOptions {
    int depth = 6;
    int width = 1024;
    int height = 768;
    bool cells = true;
    bool tree = false;
    bool marks = false;
};

/// Deterministic SVG: viewBox fitted to P with a 5% margin, y axis flipped
/// so figures read the usual way up.
inline std::string render_svg(const PolygonalTreeSystem& sys, const RenderOptions& opt) {
    if (opt.width < 64 || opt.height < 64) throw Error("render: width and height must be >= 64");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Point& v : sys.polygon.verts) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    double mx = 0.05 * (xmax - xmin), my = 0.05 * (ymax - ymin);
    xmin -= mx;
    xmax += mx;
    ymin -= my;
    ymax += my;
    double sx = opt.width / (xmax - xmin), sy = opt.height / (ymax - ymin);
    double scale = std::min(sx, sy);
    double ox = (opt.width - scale * (xmax - xmin)) / 2.0;
    double oy = (opt.height - scale * (ymax - ymin)) / 2.0;
    auto px = [&](Point p) {
        return Point(ox + scale * (p.x - xmin), oy + scale * (ymax - p.y));
    };
    auto poly_points = [&](const std::vector<Point>& vs) {
        std::string s;
        for (size_t k = 0; k < vs.size(); ++k) {
            Point q = px(vs[k]);
            if (k) s += ' ';
            s += fmt_double(q.x) + "," + fmt_double(q.y);
        }
        return s;
    };
    static const char* kPalette[] = {"#4c78a8", "#f58518", "#54a24b", "#e45756",
                                     "#72b7b2", "#eeca3b", "#b279a2", "#9d755d"};
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
           "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " +
           std::to_string(opt.width) + " " + std::to_string(opt.height) + "\">\n";
    if (opt.cells) {
        std::vector<Cell> cells = refine(sys, opt.depth);
        svg += "<g id=\"cells\" stroke=\"#333333\" stroke-width=\"0.4\" fill-opacity=\"0.35\">\n";
        for (const Cell& c : cells) {
            int tone = c.address.empty() ? 0 : c.address.front() % 8;
            svg += "<polygon fill=\"" + std::string(kPalette[tone]) + "\" points=\"" +
                   poly_points(c.polygon.verts) + "\"/>\n";
        }
        svg += "</g>\n";
    }
    svg += "<polygon fill=\"none\" stroke=\"#aa0000\" stroke-width=\"1.2\" points=\"" +
           poly_points(sys.polygon.verts) + "\"/>\n";
    if (opt.tree || opt.marks) {
        Multizipper mz = build_multizipper(sys);
        if (opt.tree) {
            svg += "<g id=\"tree\" stroke=\"#111111\" stroke-width=\"1.0\" fill=\"none\">\n";
            for (int i = 0; i < sys.vertex_count(); ++i)
                for (int j = i + 1; j < sys.vertex_count(); ++j)
                    svg += "<polyline points=\"" +
                           poly_points(arc_polyline(mz, i, j, opt.depth)) + "\"/>\n";
            svg += "</g>\n";
        }
        if (opt.marks) {
            svg += "<g id=\"marks\">\n";
            for (const RamificationPoint& r : main_ramification_points(mz, std::max(1, opt.depth))) {
                Point q = px(r.p);
                svg += "<circle cx=\"" + fmt_double(q.x) + "\" cy=\"" + fmt_double(q.y) +
                       "\" r=\"4\" fill=\"" + std::string(r.interior ? "none" : "#d62728") +
                       "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
            }
            svg += "</g>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace dendrite
