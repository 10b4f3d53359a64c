/// Chains, the multizipper, arc polylines, skeletons, ramification points.

#include <doctest.h>

#include "fixtures.hpp"

using namespace dendrite;

namespace {

void check_chain_axioms(const PolygonalTreeSystem& sys, const Chain& chain) {
    const double eps = sys.eps();
    REQUIRE(chain.contacts.size() == chain.links.size() + 1);
    CHECK(chain.contacts.front() == sys.vertex(chain.i));
    CHECK(chain.contacts.back() == sys.vertex(chain.j));
    for (size_t a = 0; a < chain.links.size(); ++a)
        for (size_t b = a + 1; b < chain.links.size(); ++b) {
            IntersectionClass c = intersection_class(sys.image(chain.links[a]),
                                                     sys.image(chain.links[b]), eps);
            if (b == a + 1) {
                REQUIRE(c.kind == IntersectionKind::SharedVertex);
                CHECK(dist(c.point, chain.contacts[b]) <= eps);
            } else {
                CHECK(c.kind == IntersectionKind::Empty);
            }
        }
}

}  // namespace

TEST_CASE("find_chain on the Zeller system") {
    PolygonalTreeSystem sys = fixtures::ex22();
    ContactGraph g = contact_graph(sys);

    Chain c13 = find_chain(sys, g, 0, 2);
    CHECK(c13.links == std::vector<int>{0, 1});
    REQUIRE(c13.contacts.size() == 3);
    CHECK(dist(c13.contacts[1], {0.5, 1.0 / (2.0 * std::numbers::sqrt2)}) <= sys.eps());

    Chain c23 = find_chain(sys, g, 1, 2);
    CHECK(c23.links == std::vector<int>{1});

    CHECK_THROWS_AS(find_chain(sys, g, 1, 1), Error);
}

TEST_CASE("chain axioms hold for every vertex pair") {
    for (const auto& sys : {fixtures::ex22(), fixtures::hata(), fixtures::koch(),
                            fixtures::kite5(), fixtures::ex24()}) {
        ContactGraph g = contact_graph(sys);
        for (int i = 0; i < sys.vertex_count(); ++i)
            for (int j = i + 1; j < sys.vertex_count(); ++j) {
                INFO(sys.name << " pair " << i << "," << j);
                check_chain_axioms(sys, find_chain(sys, g, i, j));
            }
    }
}

TEST_CASE("multizipper of the Zeller system matches the worked entries") {
    PolygonalTreeSystem sys = fixtures::ex22();
    Multizipper mz = build_multizipper(sys);
    CHECK(mz.nodes.size() <= static_cast<size_t>(4 * 3 / 2));

    const Multizipper::Node& n13 = mz.node(0, 2);
    REQUIRE(n13.entries.size() == 2);
    CHECK(n13.entries[0].map == 0);
    CHECK(n13.entries[0].sub_u == 0);  // S1(A1) = A1
    CHECK(n13.entries[0].sub_v == 2);  // S1(A3) = contact
    CHECK(n13.entries[1].map == 1);
    CHECK(n13.entries[1].sub_u == 3);  // S2(A4) = contact
    CHECK(n13.entries[1].sub_v == 1);  // S2(A2) = A3
}

TEST_CASE("multizipper node equations hold within eps") {
    for (const auto& sys : {fixtures::ex22(), fixtures::hata(), fixtures::koch(),
                            fixtures::kite5(), fixtures::ex24()}) {
        Multizipper mz = build_multizipper(sys);
        const double eps = sys.eps();
        for (const auto& [key, node] : mz.nodes) {
            CHECK(node.entries.front().z_from == sys.vertex(key.first));
            CHECK(node.entries.back().z_to == sys.vertex(key.second));
            for (const auto& e : node.entries) {
                const Similarity& s = sys.maps[static_cast<size_t>(e.map)];
                CHECK(dist(s(sys.vertex(e.sub_u)), e.z_from) <= eps);
                CHECK(dist(s(sys.vertex(e.sub_v)), e.z_to) <= eps);
                // Recursion closure: the referenced sub-node exists.
                CHECK_NOTHROW(mz.node(e.sub_u, e.sub_v));
            }
        }
    }
}

TEST_CASE("arc_polyline: depth zero and endpoint pinning") {
    PolygonalTreeSystem sys = fixtures::ex22();
    Multizipper mz = build_multizipper(sys);
    std::vector<Point> p = arc_polyline(mz, 0, 2, 0);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == sys.vertex(0));
    CHECK(dist(p[1], {0.5, 1.0 / (2.0 * std::numbers::sqrt2)}) <= sys.eps());
    CHECK(p[2] == sys.vertex(2));

    for (int d = 0; d <= 6; ++d)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                std::vector<Point> poly = arc_polyline(mz, i, j, d);
                CHECK(poly.front() == sys.vertex(i));
                CHECK(poly.back() == sys.vertex(j));
            }
}

TEST_CASE("arc_polyline: reversal symmetry and gap bound") {
    for (const auto& sys : {fixtures::ex22(), fixtures::hata()}) {
        Multizipper mz = build_multizipper(sys);
        double q = sys.max_ratio();
        for (int d : {1, 3, 5}) {
            double gap_cap = std::pow(q, d) * sys.diameter();
            for (int i = 0; i < sys.vertex_count(); ++i)
                for (int j = i + 1; j < sys.vertex_count(); ++j) {
                    std::vector<Point> fwd = arc_polyline(mz, i, j, d);
                    std::vector<Point> bwd = arc_polyline(mz, j, i, d);
                    REQUIRE(fwd.size() == bwd.size());
                    for (size_t t = 0; t < fwd.size(); ++t)
                        CHECK(fwd[t] == bwd[bwd.size() - 1 - t]);
                    for (size_t t = 1; t < fwd.size(); ++t)
                        CHECK(dist(fwd[t - 1], fwd[t]) <= gap_cap * (1.0 + 1e-9));
                }
        }
    }
}

TEST_CASE("non-adjacent sub-arcs of a chain stay apart") {
    // kite5 and ex24 have chains of length >= 3.
    for (const auto& sys : {fixtures::kite5(), fixtures::ex24()}) {
        Multizipper mz = build_multizipper(sys);
        for (const auto& [key, node] : mz.nodes) {
            if (node.entries.size() < 3) continue;
            std::vector<std::vector<Point>> pieces;
            std::vector<Point> whole = arc_polyline(mz, key.first, key.second, 4);
            // Split the polyline back at the chain contacts.
            size_t start = 0;
            for (const auto& e : node.entries) {
                std::vector<Point> piece;
                for (size_t t = start; t < whole.size(); ++t) {
                    piece.push_back(whole[t]);
                    if (t > start && dist(whole[t], e.z_to) <= sys.eps()) {
                        start = t;
                        break;
                    }
                }
                pieces.push_back(std::move(piece));
            }
            for (size_t a = 0; a < pieces.size(); ++a)
                for (size_t b = a + 2; b < pieces.size(); ++b) {
                    double best = std::numeric_limits<double>::infinity();
                    for (const Point& p : pieces[a])
                        for (const Point& q : pieces[b]) best = std::min(best, dist(p, q));
                    INFO(sys.name << " node " << key.first << "," << key.second);
                    CHECK(best > sys.eps());
                }
        }
    }
}

TEST_CASE("skeletons are trees across depths") {
    for (const auto& sys : {fixtures::ex22(), fixtures::hata(), fixtures::koch(),
                            fixtures::kite5(), fixtures::ex24()}) {
        Multizipper mz = build_multizipper(sys);
        for (int d = 0; d <= 6; ++d) {
            SkeletonTree sk = skeleton_tree(mz, d);
            INFO(sys.name << " depth " << d);
            CHECK(sk.edges.size() == sk.nodes.size() - 1);
        }
    }
}

TEST_CASE("skeleton leaves are vertices; depth-0 star") {
    for (const auto& sys : {fixtures::ex22(), fixtures::koch()}) {
        Multizipper mz = build_multizipper(sys);
        SkeletonTree sk0 = skeleton_tree(mz, 0);
        int leaves = 0;
        for (const auto& nd : sk0.nodes) leaves += nd.degree == 1;
        CHECK(leaves <= sys.vertex_count());
        for (int d : {2, 4}) {
            SkeletonTree sk = skeleton_tree(mz, d);
            for (const auto& nd : sk.nodes)
                if (nd.degree == 1) CHECK(nd.kind == SkeletonTree::NodeKind::Vertex);
        }
    }
}

TEST_CASE("Zeller skeleton: the contact node has degree 2") {
    PolygonalTreeSystem sys = fixtures::ex22();
    Multizipper mz = build_multizipper(sys);
    SkeletonTree sk = skeleton_tree(mz, 2);
    Point c{0.5, 1.0 / (2.0 * std::numbers::sqrt2)};
    int found = -1;
    for (size_t s = 0; s < sk.nodes.size(); ++s)
        if (sk.nodes[s].kind != SkeletonTree::NodeKind::CellHub &&
            dist(sk.nodes[s].pos, c) <= sys.eps())
            found = static_cast<int>(s);
    REQUIRE(found >= 0);
    CHECK(sk.nodes[static_cast<size_t>(found)].degree >= 2);
}

TEST_CASE("skeleton nodes refine monotonically") {
    PolygonalTreeSystem sys = fixtures::hata();
    Multizipper mz = build_multizipper(sys);
    SkeletonTree coarse = skeleton_tree(mz, 3);
    SkeletonTree fine = skeleton_tree(mz, 4);
    std::set<std::pair<double, double>> fine_pts;
    for (const auto& nd : fine.nodes)
        if (nd.kind != SkeletonTree::NodeKind::CellHub) fine_pts.insert({nd.pos.x, nd.pos.y});
    for (const auto& nd : coarse.nodes)
        if (nd.kind != SkeletonTree::NodeKind::CellHub)
            CHECK(fine_pts.count({nd.pos.x, nd.pos.y}) == 1);
}

TEST_CASE("main tree covers every edge from any node (arc decomposition)") {
    PolygonalTreeSystem sys = fixtures::ex22();
    Multizipper mz = build_multizipper(sys);
    SkeletonTree sk = skeleton_tree(mz, 3);
    // Union of tree paths from node x to all vertices covers all edges.
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
        int x = static_cast<int>(rng() % sk.nodes.size());
        std::set<std::pair<int, int>> covered;
        std::vector<int> parent(sk.nodes.size(), -2);
        std::deque<int> queue{x};
        parent[static_cast<size_t>(x)] = -1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : sk.adjacency[static_cast<size_t>(v)])
                if (parent[static_cast<size_t>(w)] == -2) {
                    parent[static_cast<size_t>(w)] = v;
                    queue.push_back(w);
                }
        }
        for (int vn : sk.vertex_node)
            for (int v = vn; parent[static_cast<size_t>(v)] != -1;
                 v = parent[static_cast<size_t>(v)]) {
                int p = parent[static_cast<size_t>(v)];
                covered.insert({std::min(v, p), std::max(v, p)});
            }
        CHECK(covered.size() == sk.edges.size());
    }
}

TEST_CASE("germ classes: the kite5 arcs leave A together, ex24 arcs split") {
    PolygonalTreeSystem k5 = fixtures::kite5();
    Multizipper mz5 = build_multizipper(k5);
    CHECK(germ_equal(mz5, 0, 1, 2));
    CHECK(germ_equal(mz5, 0, 1, 3));
    CHECK(vertex_branch_count(mz5, 0) == 1);

    PolygonalTreeSystem e = fixtures::ex24();
    Multizipper mze = build_multizipper(e);
    CHECK_FALSE(germ_equal(mze, 0, 1, 2));
    CHECK_FALSE(germ_equal(mze, 0, 1, 3));
    CHECK_FALSE(germ_equal(mze, 0, 2, 3));
    CHECK(vertex_branch_count(mze, 0) == 3);  // Ord(A, main tree) = 3
    CHECK(vertex_branch_count(mze, 1) == 1);  // B and D are end points
    CHECK(vertex_branch_count(mze, 3) == 1);
    CHECK(vertex_branch_count(mze, 2) == 1);  // C: order 1 in the tree
}

TEST_CASE("ramification points") {
    // ex24: the vertex A is a main ramification point of exact degree 3.
    PolygonalTreeSystem e = fixtures::ex24();
    Multizipper mze = build_multizipper(e);
    auto rams = main_ramification_points(mze, 3);
    bool found_a = false;
    for (const auto& r : rams)
        if (!r.interior && dist(r.p, e.vertex(0)) <= e.eps()) {
            found_a = true;
            CHECK(r.degree == 3);
            CHECK_FALSE(r.provisional);
        }
    CHECK(found_a);

    // The Koch arc has no ramification at all.
    Multizipper mzk = build_multizipper(fixtures::koch());
    CHECK(main_ramification_points(mzk, 3).empty());

    // Hata has a main ramification point of degree 3 already at depth 1.
    Multizipper mzh = build_multizipper(fixtures::hata());
    auto hr = main_ramification_points(mzh, 1);
    bool deg3 = false;
    for (const auto& r : hr) deg3 |= r.degree >= 3;
    CHECK(deg3);

    // kite5: all four arcs funnel through an interior branch point.
    auto kr = main_ramification_points(build_multizipper(fixtures::kite5()), 4);
    bool interior4 = false;
    for (const auto& r : kr) interior4 |= r.interior && r.degree == 4;
    CHECK(interior4);
}

TEST_CASE("ramification degrees respect the order cap") {
    for (const auto& sys : {fixtures::ex22(), fixtures::hata(), fixtures::ex24()}) {
        MetricConstants mc = metric_constants(sys);
        OrderCaps caps = order_caps(sys.vertex_count(), mc.theta_min, mc.theta_max);
        Multizipper mz = build_multizipper(sys);
        for (const auto& r : main_ramification_points(mz, 4)) CHECK(r.degree <= caps.cutpoint);
    }
}

TEST_CASE("a coarse tolerance makes welding fail loudly") {
    PolygonalTreeSystem sys = fixtures::ex22();
    sys.epsilon_rel = 0.2;
    Multizipper mz = build_multizipper(sys);
    CHECK_THROWS_WITH_AS(skeleton_tree(mz, 8), doctest::Contains("cycle"), Error);
}
