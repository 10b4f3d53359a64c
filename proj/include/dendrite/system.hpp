/// Polygonal tree systems: the configuration object, validation of the four
/// axioms, the contact structure between subpolygons, and composition.
///
/// Axioms checked by `validate`:
///   D1  every image polygon S_k(P) is contained in P
///   D2  distinct images meet in at most a common vertex
///   D3  every vertex of P lies on some image polygon
///   D4  the union of the images is contractible, decided on the contact
///       graph: connected and acyclic
#pragma once

#include "geometry.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dendrite {

struct PolygonalTreeSystem {
    std::string name;
    ConvexPolygon polygon;           // vertices A_0..A_{n-1}, counterclockwise
    std::vector<Similarity> maps;    // S_0..S_{m-1}, all contractions
    double epsilon_rel = 1e-9;

    int vertex_count() const { return polygon.count(); }
    int map_count() const { return static_cast<int>(maps.size()); }
    const Point& vertex(int i) const { return polygon.vertex(i); }

    double diameter() const { return polygon.diameter(); }
    double eps() const { return epsilon_rel * polygon.diameter(); }

    double max_ratio() const {
        double q = 0.0;
        for (const Similarity& s : maps) q = std::max(q, s.ratio());
        return q;
    }

    ConvexPolygon image(int k) const { return map_polygon(maps[static_cast<size_t>(k)], polygon); }
};

/// Basic shape checks shared by the parser and the in-code builders.
/// Throws on violation; field names match the spec-file schema.
inline void check_system_invariants(const PolygonalTreeSystem& sys) {
    if (sys.map_count() < 2) throw Error("maps: m >= 2 required");
    if (sys.epsilon_rel <= 0.0 || !std::isfinite(sys.epsilon_rel))
        throw Error("epsilon_rel: must be a positive finite number");
    for (int k = 0; k < sys.map_count(); ++k) {
        const Similarity& s = sys.maps[static_cast<size_t>(k)];
        if (!std::isfinite(s.a.real()) || !std::isfinite(s.a.imag()) ||
            !std::isfinite(s.b.real()) || !std::isfinite(s.b.imag()))
            throw Error("maps[" + std::to_string(k) + "]: coefficients must be finite");
        double r = s.ratio();
        if (!(r > 0.0) || !(r < 1.0))
            throw Error("maps[" + std::to_string(k) + "]: not a contraction (ratio " +
                        std::to_string(r) + ")");
    }
}

struct Violation {
    std::string axiom;   // "D1".."D4"
    int i = -1, j = -1;  // offending map pair (D1/D2), vertex (D3), 0-based
    std::string detail;
    std::optional<Point> witness;
};

struct ValidationReport {
    bool d1_ok = false, d2_ok = false, d3_ok = false, d4_ok = false;
    bool osc_ok = false, one_point_ok = false;
    std::vector<Violation> violations;

    bool accepted() const { return d1_ok && d2_ok && d3_ok && d4_ok; }
};

/// Bipartite contact structure: polygon nodes 0..m-1 and the distinct
/// contact points (shared vertices of >= 2 subpolygons). Vertex incidence
/// lists are kept alongside for chain searches.
struct ContactGraph {
    struct ContactNode {
        Point p;
        std::vector<int> polygons;    // images sharing this point
        std::vector<int> vertex_ids;  // indices of vertices A_i coinciding with p
    };

    int polygon_count = 0;
    std::vector<ContactNode> contacts;
    std::vector<std::vector<int>> vertex_polygons;  // per vertex A_i: images containing it

    int edge_count() const {
        int e = 0;
        for (const ContactNode& c : contacts) e += static_cast<int>(c.polygons.size());
        return e;
    }
};

namespace detail {

struct PairTable {
    std::vector<ConvexPolygon> images;
    std::vector<std::vector<IntersectionClass>> cls;  // upper triangle i<j
};

inline PairTable pair_table(const PolygonalTreeSystem& sys) {
    PairTable t;
    const int m = sys.map_count();
    const double eps = sys.eps();
    t.images.reserve(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) t.images.push_back(sys.image(k));
    t.cls.assign(static_cast<size_t>(m), {});
    for (int i = 0; i < m; ++i) {
        t.cls[static_cast<size_t>(i)].resize(static_cast<size_t>(m));
        for (int j = i + 1; j < m; ++j)
            t.cls[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                intersection_class(t.images[static_cast<size_t>(i)],
                                   t.images[static_cast<size_t>(j)], eps);
    }
    return t;
}

inline ContactGraph contact_graph_from(const PolygonalTreeSystem& sys, const PairTable& table,
                                       bool throw_on_overlap) {
    const int m = sys.map_count();
    const int n = sys.vertex_count();
    const double eps = sys.eps();
    ContactGraph g;
    g.polygon_count = m;
    g.vertex_polygons.assign(static_cast<size_t>(n), {});
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k)
            if (table.images[static_cast<size_t>(k)].vertex_near(sys.vertex(i), eps) >= 0)
                g.vertex_polygons[static_cast<size_t>(i)].push_back(k);

    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const IntersectionClass& c = table.cls[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (c.kind == IntersectionKind::Overlap && throw_on_overlap)
                throw Error("contact graph undefined: images " + std::to_string(i) + " and " +
                            std::to_string(j) + " overlap (D2 fails)");
            if (c.kind != IntersectionKind::SharedVertex) continue;
            int node = -1;
            for (size_t t = 0; t < g.contacts.size(); ++t)
                if (dist(g.contacts[t].p, c.point) <= eps) {
                    node = static_cast<int>(t);
                    break;
                }
            if (node < 0) {
                node = static_cast<int>(g.contacts.size());
                ContactGraph::ContactNode cn;
                cn.p = c.point;
                g.contacts.push_back(cn);
            }
            auto& polys = g.contacts[static_cast<size_t>(node)].polygons;
            for (int k : {i, j})
                if (std::find(polys.begin(), polys.end(), k) == polys.end()) polys.push_back(k);
        }
    for (ContactGraph::ContactNode& c : g.contacts) {
        std::sort(c.polygons.begin(), c.polygons.end());
        for (int i = 0; i < n; ++i)
            if (dist(sys.vertex(i), c.p) <= eps) c.vertex_ids.push_back(i);
    }
    std::sort(g.contacts.begin(), g.contacts.end(),
              [](const ContactGraph::ContactNode& a, const ContactGraph::ContactNode& b) {
                  return a.p < b.p;
              });
    return g;
}

/// Connectivity + acyclicity of the bipartite contact graph.
inline std::pair<bool, std::string> contact_tree_check(const ContactGraph& g) {
    const int m = g.polygon_count;
    const int total = m + static_cast<int>(g.contacts.size());
    std::vector<int> parent(static_cast<size_t>(total));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    int edges = 0;
    for (size_t t = 0; t < g.contacts.size(); ++t)
        for (int k : g.contacts[t].polygons) {
            ++edges;
            int a = find(k), b = find(m + static_cast<int>(t));
            if (a == b) return {false, "contact graph has a cycle through contact point " +
                                           std::to_string(t)};
            parent[static_cast<size_t>(a)] = b;
        }
    int root = find(0);
    for (int k = 1; k < m; ++k)
        if (find(k) != root) return {false, "contact graph is disconnected (image " +
                                               std::to_string(k) + " unreachable)"};
    if (edges != total - 1) return {false, "contact graph is not a tree"};
    return {true, ""};
}

}  // namespace detail

inline ValidationReport validate(const PolygonalTreeSystem& sys) {
    const int m = sys.map_count();
    const int n = sys.vertex_count();
    const double eps = sys.eps();
    ValidationReport rep;
    detail::PairTable table = detail::pair_table(sys);

    rep.d1_ok = true;
    for (int k = 0; k < m; ++k) {
        const ConvexPolygon& img = table.images[static_cast<size_t>(k)];
        if (!polygon_contains(sys.polygon, img, eps)) {
            rep.d1_ok = false;
            Point w;
            for (const Point& v : img.verts)
                if (!sys.polygon.contains_point(v, eps)) {
                    w = v;
                    break;
                }
            rep.violations.push_back({"D1", k, -1, "image not contained in P", w});
        }
    }

    rep.d2_ok = true;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const IntersectionClass& c = table.cls[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (c.kind == IntersectionKind::Overlap) {
                rep.d2_ok = false;
                rep.violations.push_back(
                    {"D2", i, j, "images intersect in more than a common vertex", c.point});
            }
        }

    rep.d3_ok = true;
    for (int i = 0; i < n; ++i) {
        bool covered = false;
        for (int k = 0; k < m && !covered; ++k)
            covered = table.images[static_cast<size_t>(k)].vertex_near(sys.vertex(i), eps) >= 0;
        if (!covered) {
            rep.d3_ok = false;
            rep.violations.push_back({"D3", -1, i, "vertex lies on no image polygon",
                                      sys.vertex(i)});
        }
    }

    if (rep.d2_ok) {
        ContactGraph g = detail::contact_graph_from(sys, table, false);
        auto [ok, why] = detail::contact_tree_check(g);
        rep.d4_ok = ok;
        if (!ok) rep.violations.push_back({"D4", -1, -1, why, std::nullopt});
    } else {
        rep.d4_ok = false;
        rep.violations.push_back({"D4", -1, -1, "not evaluated: D2 failed", std::nullopt});
    }

    // Prop: D1 and D2 already give the open set condition (interior of P)
    // and the one point intersection property.
    rep.osc_ok = rep.d1_ok && rep.d2_ok;
    rep.one_point_ok = rep.d2_ok;
    return rep;
}

/// Requires D1-D2; throws if some pair overlaps.
inline ContactGraph contact_graph(const PolygonalTreeSystem& sys) {
    detail::PairTable table = detail::pair_table(sys);
    return detail::contact_graph_from(sys, table, true);
}

/// The system {S_i o S'_j} in lexicographic (i, j) order. Both inputs must
/// share the polygon P.
inline PolygonalTreeSystem compose_systems(const PolygonalTreeSystem& a,
                                           const PolygonalTreeSystem& b) {
    if (a.vertex_count() != b.vertex_count())
        throw Error("compose_systems: polygons differ (vertex count)");
    double eps = std::max(a.eps(), b.eps());
    for (int i = 0; i < a.vertex_count(); ++i)
        if (dist(a.vertex(i), b.vertex(i)) > eps)
            throw Error("compose_systems: polygons differ at vertex " + std::to_string(i));
    PolygonalTreeSystem out;
    out.name = a.name.empty() || b.name.empty() ? a.name + b.name : a.name + "*" + b.name;
    out.polygon = a.polygon;
    out.epsilon_rel = std::max(a.epsilon_rel, b.epsilon_rel);
    out.maps.reserve(static_cast<size_t>(a.map_count()) * static_cast<size_t>(b.map_count()));
    for (const Similarity& s : a.maps)
        for (const Similarity& t : b.maps) out.maps.push_back(compose(s, t));
    check_system_invariants(out);
    return out;
}

}  // namespace dendrite
