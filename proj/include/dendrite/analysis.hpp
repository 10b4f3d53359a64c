/// Metric constants of a polygonal tree system (separation rho, contact
/// angle alpha, vertex-angle extremes), the bounded-turning certificate,
/// empirical verification over the skeleton, and Menger-Urysohn order caps.
#pragma once

#include "maintree.hpp"

#include <numbers>
#include <random>

namespace dendrite {

/// Ceiling with a snap window so that quotients of angles that are exact in
/// real arithmetic (2*pi / (pi/6) = 12) do not tip over to the next integer.
inline int ceil_snapped(double x) {
    double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
    return static_cast<int>(std::ceil(x));
}

/// rho: every vertex neighbourhood of this radius meets only images that
/// contain the vertex, and disjoint images are at least this far apart.
inline double point_polygon_distance(Point p, const ConvexPolygon& poly) {
    if (poly.contains_point(p, 0.0)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    const int n = poly.count();
    for (int k = 0; k < n; ++k)
        d = std::min(d, detail::point_segment_distance(p, poly.vertex(k),
                                                       poly.vertex((k + 1) % n)));
    return d;
}

inline double compute_rho(const PolygonalTreeSystem& sys) {
    detail::PairTable table = detail::pair_table(sys);
    const int m = sys.map_count();
    const int n = sys.vertex_count();
    const double eps = sys.eps();
    double rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) {
            if (table.images[static_cast<size_t>(k)].vertex_near(sys.vertex(i), eps) >= 0)
                continue;  // image contains the vertex
            rho = std::min(rho,
                           point_polygon_distance(sys.vertex(i), table.images[static_cast<size_t>(k)]));
        }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (table.cls[static_cast<size_t>(i)][static_cast<size_t>(j)].kind ==
                IntersectionKind::Empty)
                rho = std::min(rho, polygon_distance(table.images[static_cast<size_t>(i)],
                                                     table.images[static_cast<size_t>(j)]));
    return rho;
}

/// Minimal angle between sides of two images meeting at a shared vertex.
inline double compute_alpha(const PolygonalTreeSystem& sys) {
    detail::PairTable table = detail::pair_table(sys);
    const int m = sys.map_count();
    const double eps = sys.eps();
    double alpha = std::numeric_limits<double>::infinity();
    auto side_dirs = [&](const ConvexPolygon& poly, int k) {
        const int nv = poly.count();
        Point v = poly.vertex(k);
        Point u1 = poly.vertex((k + 1) % nv) - v;
        Point u2 = poly.vertex((k + nv - 1) % nv) - v;
        return std::array<Point, 2>{u1 * (1.0 / norm(u1)), u2 * (1.0 / norm(u2))};
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const IntersectionClass& c = table.cls[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (c.kind != IntersectionKind::SharedVertex) continue;
            auto di = side_dirs(table.images[static_cast<size_t>(i)], c.vertex1);
            auto dj = side_dirs(table.images[static_cast<size_t>(j)], c.vertex2);
            for (Point a : di)
                for (Point b : dj)
                    alpha = std::min(alpha, std::atan2(std::abs(cross(a, b)),
                                                       dot(a, b)) );
        }
    if (!std::isfinite(alpha))
        throw Error("compute_alpha: system has no shared-vertex contacts");
    return alpha;
}

struct MetricConstants {
    double rho = 0.0;
    double alpha = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    double q = 0.0;
    double diam_p = 0.0;
    double bt = 0.0;  // diam P / (rho * sin(alpha / 2))
};

inline double bt_constant(double diam_p, double rho, double alpha) {
    return diam_p / (rho * std::sin(alpha / 2.0));
}

inline MetricConstants metric_constants(const PolygonalTreeSystem& sys) {
    MetricConstants mc;
    mc.rho = compute_rho(sys);
    mc.alpha = compute_alpha(sys);
    mc.diam_p = sys.diameter();
    mc.q = sys.max_ratio();
    mc.theta_min = std::numeric_limits<double>::infinity();
    mc.theta_max = 0.0;
    for (int k = 0; k < sys.vertex_count(); ++k) {
        double a = vertex_angle(sys.polygon, k);
        mc.theta_min = std::min(mc.theta_min, a);
        mc.theta_max = std::max(mc.theta_max, a);
    }
    mc.bt = bt_constant(mc.diam_p, mc.rho, mc.alpha);
    return mc;
}

namespace detail {

inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull;
    for (int pass = 0; pass < 2; ++pass) {
        size_t base = hull.size();
        for (const Point& p : pts) {
            while (hull.size() >= base + 2 &&
                   cross(hull.back() - hull[hull.size() - 2], p - hull.back()) <= 0.0)
                hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    return hull;
}

/// Max pairwise distance; convex-hull shortcut for long point lists.
inline double diameter_of(const std::vector<Point>& pts) {
    if (pts.size() > 512) return points_diameter(convex_hull(pts));
    return points_diameter(pts);
}

}  // namespace detail

struct BtSample {
    double max_ratio = 0.0;
    Point witness_a, witness_b;
    int samples_used = 0;
};

/// Seeded sampling of point-node pairs of the skeleton; for each pair the
/// unique tree path is taken and diam(path points) / dist(endpoints)
/// recorded. Hub nodes route the path but do not enter the diameter: only
/// points of the attractor itself are measured.
inline BtSample empirical_bt(const SkeletonTree& sk, int samples, uint64_t seed, double eps) {
    std::vector<int> pool;
    for (size_t s = 0; s < sk.nodes.size(); ++s)
        if (sk.nodes[s].kind != SkeletonTree::NodeKind::CellHub) pool.push_back(static_cast<int>(s));
    if (pool.size() < 2) throw Error("empirical_bt: not enough skeleton points");
    std::mt19937_64 rng(seed);
    auto draw = [&]() { return pool[static_cast<size_t>(rng() % pool.size())]; };

    BtSample best;
    int done = 0, guard = 0;
    std::vector<int> parent(sk.nodes.size());
    while (done < samples) {
        if (++guard > 20 * samples + 100) throw Error("empirical_bt: sampling stalled");
        int a = draw(), b = draw();
        if (a == b) continue;
        double d = dist(sk.nodes[static_cast<size_t>(a)].pos, sk.nodes[static_cast<size_t>(b)].pos);
        if (d <= eps) continue;
        // BFS path a -> b in the tree.
        std::fill(parent.begin(), parent.end(), -2);
        std::deque<int> queue{a};
        parent[static_cast<size_t>(a)] = -1;
        while (!queue.empty() && parent[static_cast<size_t>(b)] == -2) {
            int v = queue.front();
            queue.pop_front();
            for (int w : sk.adjacency[static_cast<size_t>(v)])
                if (parent[static_cast<size_t>(w)] == -2) {
                    parent[static_cast<size_t>(w)] = v;
                    queue.push_back(w);
                }
        }
        std::vector<Point> path;
        for (int v = b; v != -1; v = parent[static_cast<size_t>(v)])
            if (sk.nodes[static_cast<size_t>(v)].kind != SkeletonTree::NodeKind::CellHub)
                path.push_back(sk.nodes[static_cast<size_t>(v)].pos);
        double ratio = detail::diameter_of(path) / d;
        if (ratio > best.max_ratio) {
            best.max_ratio = ratio;
            best.witness_a = sk.nodes[static_cast<size_t>(a)].pos;
            best.witness_b = sk.nodes[static_cast<size_t>(b)].pos;
        }
        ++done;
    }
    best.samples_used = done;
    return best;
}

struct OrderCaps {
    int single = 0;    // n - 1, applies to vertices with a one-point fiber
    int vertex = 0;    // (n-1) * (ceil(theta_max / theta_min) - 1)
    int cutpoint = 0;  // (n-1) * (ceil(2 pi / theta_min) - 1)
};

inline OrderCaps order_caps(int n, double theta_min, double theta_max) {
    OrderCaps c;
    c.single = n - 1;
    c.vertex = (n - 1) * (ceil_snapped(theta_max / theta_min) - 1);
    c.cutpoint = (n - 1) * (ceil_snapped(2.0 * std::numbers::pi / theta_min) - 1);
    return c;
}

struct VertexOrderInfo {
    int vertex = -1;
    int fiber_count = 0;
    int branch_degree = 0;  // germ-resolved Ord(A_i, main tree)
    int cap = 0;            // applicable theoretical cap
};

struct OrderReport {
    int depth = 0;
    OrderCaps caps;
    std::vector<VertexOrderInfo> vertices;
    int max_node_degree = 0;  // over all skeleton nodes at `depth`
};

inline OrderReport order_bounds(const PolygonalTreeSystem& sys, const Multizipper& mz, int depth) {
    OrderReport rep;
    rep.depth = depth;
    MetricConstants mc = metric_constants(sys);
    rep.caps = order_caps(sys.vertex_count(), mc.theta_min, mc.theta_max);
    SkeletonTree sk = skeleton_tree(mz, depth);
    for (const auto& nd : sk.nodes) rep.max_node_degree = std::max(rep.max_node_degree, nd.degree);
    for (int i = 0; i < sys.vertex_count(); ++i) {
        VertexOrderInfo info;
        info.vertex = i;
        info.fiber_count = vertex_fiber(sys, i, depth).count();
        info.branch_degree = vertex_branch_count(mz, i);
        info.cap = info.fiber_count <= 1 ? rep.caps.single : rep.caps.vertex;
        rep.vertices.push_back(info);
    }
    return rep;
}

}  // namespace dendrite
