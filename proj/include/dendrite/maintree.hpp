/// Chains between vertices, the multizipper generating the arcs between
/// them, polyline approximations, and the finite skeleton of the main tree.
///
/// The skeleton is the contact tree of the depth-d refinement restricted to
/// the main tree: its nodes are vertices of P, contact points of refinement
/// levels <= d that lie on the tree, and one interior hub per traversed
/// depth-d cell. Every arc contributes an alternating point/hub walk, so the
/// union is a subgraph of the composed system's contact tree and stays
/// acyclic at every depth. Branchings that happen at a sampled point are
/// resolved exactly through germ comparison; branchings hidden inside a cell
/// surface as hub nodes of degree >= 3 and are reported as provisional.
#pragma once

#include "attractor.hpp"

#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace dendrite {

/// Chain of image polygons connecting A_i to A_j, oriented from i to j.
/// contacts.front() == A_i and contacts.back() == A_j; interior contacts are
/// the single points where consecutive links meet.
struct Chain {
    int i = -1, j = -1;
    std::vector<int> links;
    std::vector<Point> contacts;  // links.size() + 1 entries
};

struct Multizipper {
    struct Entry {
        int map = -1;          // link polygon / similarity index
        int sub_u = -1;        // S_map(A_sub_u) = z_from
        int sub_v = -1;        // S_map(A_sub_v) = z_to
        Point z_from, z_to;
    };
    struct Node {
        int i = -1, j = -1;  // canonical, i < j
        std::vector<Entry> entries;
    };

    PolygonalTreeSystem sys;
    ContactGraph graph;
    std::map<std::pair<int, int>, Node> nodes;

    const Node& node(int i, int j) const {
        auto it = nodes.find({std::min(i, j), std::max(i, j)});
        if (it == nodes.end()) throw Error("multizipper: missing node");
        return it->second;
    }
};

namespace detail {

/// Bipartite search structure: polygon nodes plus point nodes (contact
/// points and vertices of P, merged when they coincide).
struct AugmentedTree {
    struct PointNode {
        Point p;
        std::vector<int> polygons;
        int vertex = -1;  // index of A_i when this point is a vertex of P
    };
    std::vector<PointNode> points;
    std::vector<int> vertex_point;  // per vertex of P: index into points
};

inline AugmentedTree augmented_tree(const PolygonalTreeSystem& sys, const ContactGraph& g) {
    AugmentedTree t;
    const double eps = sys.eps();
    for (const ContactGraph::ContactNode& c : g.contacts)
        t.points.push_back({c.p, c.polygons, c.vertex_ids.empty() ? -1 : c.vertex_ids.front()});
    t.vertex_point.assign(static_cast<size_t>(sys.vertex_count()), -1);
    for (int i = 0; i < sys.vertex_count(); ++i) {
        int found = -1;
        for (size_t k = 0; k < t.points.size(); ++k)
            if (dist(t.points[k].p, sys.vertex(i)) <= eps) {
                found = static_cast<int>(k);
                break;
            }
        if (found < 0) {
            found = static_cast<int>(t.points.size());
            t.points.push_back({sys.vertex(i), g.vertex_polygons[static_cast<size_t>(i)], i});
        } else {
            t.points[static_cast<size_t>(found)].vertex = i;
            for (int k : g.vertex_polygons[static_cast<size_t>(i)]) {
                auto& ps = t.points[static_cast<size_t>(found)].polygons;
                if (std::find(ps.begin(), ps.end(), k) == ps.end()) ps.push_back(k);
            }
            std::sort(t.points[static_cast<size_t>(found)].polygons.begin(),
                      t.points[static_cast<size_t>(found)].polygons.end());
        }
        t.vertex_point[static_cast<size_t>(i)] = found;
    }
    return t;
}

}  // namespace detail

/// The unique chain connecting A_i and A_j. Uniqueness comes from D4: the
/// contact structure is a tree, so there is exactly one path.
inline Chain find_chain(const PolygonalTreeSystem& sys, const ContactGraph& g, int i, int j) {
    if (i == j) throw Error("find_chain: endpoints must differ");
    if (i < 0 || j < 0 || i >= sys.vertex_count() || j >= sys.vertex_count())
        throw Error("find_chain: vertex index out of range");
    detail::AugmentedTree t = detail::augmented_tree(sys, g);
    // BFS over the bipartite graph. Node ids: points 0..P-1, polygons P..P+m-1.
    const int np = static_cast<int>(t.points.size());
    const int total = np + g.polygon_count;
    std::vector<int> prev(static_cast<size_t>(total), -2);
    int src = t.vertex_point[static_cast<size_t>(i)];
    int dst = t.vertex_point[static_cast<size_t>(j)];
    std::deque<int> queue{src};
    prev[static_cast<size_t>(src)] = -1;
    while (!queue.empty() && prev[static_cast<size_t>(dst)] == -2) {
        int v = queue.front();
        queue.pop_front();
        if (v < np) {
            for (int k : t.points[static_cast<size_t>(v)].polygons) {
                int w = np + k;
                if (prev[static_cast<size_t>(w)] == -2) {
                    prev[static_cast<size_t>(w)] = v;
                    queue.push_back(w);
                }
            }
        } else {
            int k = v - np;
            for (int pt = 0; pt < np; ++pt) {
                const auto& ps = t.points[static_cast<size_t>(pt)].polygons;
                if (prev[static_cast<size_t>(pt)] == -2 &&
                    std::find(ps.begin(), ps.end(), k) != ps.end()) {
                    prev[static_cast<size_t>(pt)] = v;
                    queue.push_back(pt);
                }
            }
        }
    }
    if (prev[static_cast<size_t>(dst)] == -2)
        throw Error("find_chain: no chain between vertices " + std::to_string(i) + " and " +
                    std::to_string(j) + " (D4 must hold)");
    std::vector<int> path;  // dst back to src
    for (int v = dst; v != -1; v = prev[static_cast<size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    Chain chain;
    chain.i = i;
    chain.j = j;
    for (size_t s = 0; s < path.size(); ++s) {
        if (s % 2 == 0)
            chain.contacts.push_back(t.points[static_cast<size_t>(path[s])].p);
        else
            chain.links.push_back(path[s] - np);
    }
    // Endpoints bitwise from the system polygon.
    chain.contacts.front() = sys.vertex(i);
    chain.contacts.back() = sys.vertex(j);
    return chain;
}

inline Multizipper build_multizipper(const PolygonalTreeSystem& sys) {
    Multizipper mz;
    mz.sys = sys;
    mz.graph = contact_graph(sys);
    const int n = sys.vertex_count();
    const double eps = sys.eps();

    auto vertex_image_index = [&](int map, Point target) {
        for (int u = 0; u < n; ++u)
            if (dist(sys.maps[static_cast<size_t>(map)](sys.vertex(u)), target) <= eps) return u;
        throw Error("multizipper: node point is not a vertex image of map " + std::to_string(map));
    };

    std::deque<std::pair<int, int>> work;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) work.emplace_back(i, j);
    while (!work.empty()) {
        auto key = work.front();
        work.pop_front();
        if (mz.nodes.count(key)) continue;
        Chain chain = find_chain(sys, mz.graph, key.first, key.second);
        Multizipper::Node node;
        node.i = key.first;
        node.j = key.second;
        for (size_t k = 0; k < chain.links.size(); ++k) {
            Multizipper::Entry e;
            e.map = chain.links[k];
            e.z_from = chain.contacts[k];
            e.z_to = chain.contacts[k + 1];
            e.sub_u = vertex_image_index(e.map, e.z_from);
            e.sub_v = vertex_image_index(e.map, e.z_to);
            node.entries.push_back(e);
        }
        mz.nodes[key] = node;
        for (const auto& e : mz.nodes[key].entries) {
            auto sub = std::make_pair(std::min(e.sub_u, e.sub_v), std::max(e.sub_u, e.sub_v));
            if (sub.first != sub.second && !mz.nodes.count(sub)) work.push_back(sub);
        }
    }
    return mz;
}

namespace detail {

/// Alternating walk of an arc through the depth-r refinement:
/// pts[0], cell[0], pts[1], cell[1], ..., pts[T]. Cells carry the vertex
/// pair (u, v) of the sub-arc traversing them, oriented along the walk.
struct Walk {
    std::vector<Point> pts;
    std::vector<int> cells;  // ids into the address table
    std::vector<std::pair<int, int>> passage;
};

struct AddressTable {
    std::map<Address, int> ids;
    std::vector<Address> words;
    int intern(const Address& w) {
        auto [it, fresh] = ids.try_emplace(w, static_cast<int>(words.size()));
        if (fresh) words.push_back(w);
        return it->second;
    }
};

struct WalkSet {
    std::map<std::pair<int, int>, Walk> walks;  // canonical (i < j)
    AddressTable cells;
    int level = 0;
};

inline Walk reversed(const Walk& w) {
    Walk r;
    r.pts.assign(w.pts.rbegin(), w.pts.rend());
    r.cells.assign(w.cells.rbegin(), w.cells.rend());
    for (auto it = w.passage.rbegin(); it != w.passage.rend(); ++it)
        r.passage.emplace_back(it->second, it->first);
    return r;
}

/// Level-1 walks come straight from the chains; level r+1 substitutes every
/// cell by the image of its sub-arc's level-r walk. Segment boundary points
/// are snapped to the stored node points, which keeps coincident samples of
/// overlapping arcs bitwise equal.
inline WalkSet build_walks(const Multizipper& mz, int level) {
    if (level < 1) throw Error("walks: level must be >= 1");
    WalkSet prev;
    prev.level = 1;
    for (const auto& [key, node] : mz.nodes) {
        Walk w;
        for (size_t k = 0; k < node.entries.size(); ++k) {
            const auto& e = node.entries[k];
            if (k == 0) w.pts.push_back(e.z_from);
            w.cells.push_back(prev.cells.intern({e.map}));
            w.passage.emplace_back(e.sub_u, e.sub_v);
            w.pts.push_back(e.z_to);
        }
        prev.walks[key] = std::move(w);
    }
    for (int r = 2; r <= level; ++r) {
        WalkSet next;
        next.level = r;
        for (const auto& [key, node] : mz.nodes) {
            Walk out;
            out.pts.push_back(node.entries.front().z_from);
            for (const auto& e : node.entries) {
                auto subkey = std::make_pair(std::min(e.sub_u, e.sub_v),
                                             std::max(e.sub_u, e.sub_v));
                Walk sub = e.sub_u <= e.sub_v ? prev.walks[subkey]
                                              : reversed(prev.walks[subkey]);
                const Similarity& s = mz.sys.maps[static_cast<size_t>(e.map)];
                for (size_t t = 0; t < sub.cells.size(); ++t) {
                    Address w = prev.cells.words[static_cast<size_t>(sub.cells[t])];
                    w.insert(w.begin(), e.map);
                    next.cells.intern(w);  // keep id allocation order deterministic
                    out.cells.push_back(next.cells.intern(w));
                    out.passage.push_back(sub.passage[t]);
                    Point p = t + 1 < sub.cells.size() ? s(sub.pts[t + 1]) : e.z_to;
                    out.pts.push_back(p);
                }
            }
            next.walks[key] = std::move(out);
        }
        prev = std::move(next);
    }
    return prev;
}

}  // namespace detail

/// Depth-d polyline of the arc from A_i to A_j; points ordered along the
/// arc, endpoints exactly the stored vertices.
inline std::vector<Point> arc_polyline(const Multizipper& mz, int i, int j, int depth) {
    if (depth < 0) throw Error("arc_polyline: depth must be >= 0");
    detail::WalkSet ws = detail::build_walks(mz, depth + 1);
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    if (!mz.nodes.count(key)) throw Error("arc_polyline: no such arc");
    detail::Walk w = i <= j ? ws.walks[key] : detail::reversed(ws.walks[key]);
    return w.pts;
}

struct SkeletonTree {
    enum class NodeKind { Vertex, Contact, CellHub };
    struct Node {
        Point pos;
        NodeKind kind = NodeKind::Contact;
        int vertex = -1;   // for Vertex nodes (a Contact may coincide: then both set)
        Address cell;      // for CellHub nodes
        int degree = 0;
    };
    int depth = 0;
    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adjacency;
    std::vector<int> vertex_node;  // node id per vertex of P
    // Germ passages per (point node, hub node) edge: sub-arc vertex pairs
    // oriented away from the point.
    std::map<std::pair<int, int>, std::set<std::pair<int, int>>> passages;

    int point_node_count() const {
        int c = 0;
        for (const Node& n : nodes) c += n.kind != NodeKind::CellHub;
        return c;
    }
};

/// Decides whether the arcs to A_x and A_y leave A_u in the same direction,
/// i.e. share an initial sub-arc. Two arcs share a germ iff their chain
/// first-steps eventually coincide; a cycle without coincidence means the
/// arcs split at A_u itself.
inline bool germ_equal(const Multizipper& mz, int u, int x, int y) {
    auto first_step = [&](int from, int to) {
        const Multizipper::Node& node = mz.node(from, to);
        if (from < to) {
            const auto& e = node.entries.front();
            return std::tuple<int, int, int>(e.map, e.sub_u, e.sub_v);
        }
        const auto& e = node.entries.back();
        return std::tuple<int, int, int>(e.map, e.sub_v, e.sub_u);
    };
    if (x == y) return true;
    std::set<std::tuple<int, int, int>> seen;
    while (true) {
        auto [lx, fx, tx] = first_step(u, x);
        auto [ly, fy, ty] = first_step(u, y);
        if (lx != ly) return false;  // different first cells: split at A_u
        if (tx == ty) return true;   // identical first sub-arc: shared germ
        u = fx;
        x = std::min(tx, ty);
        y = std::max(tx, ty);
        if (!seen.insert({u, x, y}).second) return false;
    }
}

/// Number of branches of the main tree at vertex A_i: germ classes of the
/// arcs from A_i to the other vertices. Exact, independent of depth.
inline int vertex_branch_count(const Multizipper& mz, int vertex) {
    const int n = mz.sys.vertex_count();
    std::vector<int> cls;
    int classes = 0;
    for (int j = 0; j < n; ++j) {
        if (j == vertex) continue;
        bool matched = false;
        for (int rep : cls)
            if (germ_equal(mz, vertex, rep, j)) {
                matched = true;
                break;
            }
        if (!matched) {
            cls.push_back(j);
            ++classes;
        }
    }
    return classes;
}

/// Welded union of all arc walks at the given depth. Throws if the result
/// is not a tree (signals a tolerance or validity problem).
inline SkeletonTree skeleton_tree(const Multizipper& mz, int depth) {
    const PolygonalTreeSystem& sys = mz.sys;
    const double eps = sys.eps();
    const int n = sys.vertex_count();
    SkeletonTree sk;
    sk.depth = depth;

    if (depth == 0) {
        // Unresolved star: every arc runs through the single depth-0 cell.
        SkeletonTree::Node hub;
        hub.kind = SkeletonTree::NodeKind::CellHub;
        hub.pos = sys.polygon.centroid();
        for (int i = 0; i < n; ++i) {
            SkeletonTree::Node v;
            v.kind = SkeletonTree::NodeKind::Vertex;
            v.vertex = i;
            v.pos = sys.vertex(i);
            sk.nodes.push_back(v);
            sk.vertex_node.push_back(i);
        }
        int hub_id = n;
        sk.nodes.push_back(hub);
        for (int i = 0; i < n; ++i) sk.edges.emplace_back(i, hub_id);
        sk.adjacency.assign(sk.nodes.size(), {});
        for (auto [a, b] : sk.edges) {
            sk.adjacency[static_cast<size_t>(a)].push_back(b);
            sk.adjacency[static_cast<size_t>(b)].push_back(a);
            ++sk.nodes[static_cast<size_t>(a)].degree;
            ++sk.nodes[static_cast<size_t>(b)].degree;
        }
        return sk;
    }

    detail::WalkSet ws = detail::build_walks(mz, depth);

    // Weld sample points; coincident samples of overlapping arcs are bitwise
    // equal by construction, so exact matching comes first and an eps pass
    // catches anything left.
    std::map<std::pair<double, double>, int> point_ids;
    std::vector<Point> point_pos;
    auto point_id = [&](Point p) {
        auto [it, fresh] = point_ids.try_emplace({p.x, p.y}, static_cast<int>(point_pos.size()));
        if (fresh) point_pos.push_back(p);
        return it->second;
    };
    for (int i = 0; i < n; ++i) point_id(sys.vertex(i));
    for (const auto& [key, walk] : ws.walks)
        for (const Point& p : walk.pts) point_id(p);

    // eps-weld distinct representatives that fall together.
    std::vector<int> alias(point_pos.size());
    std::iota(alias.begin(), alias.end(), 0);
    {
        std::vector<int> order(point_pos.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return point_pos[static_cast<size_t>(a)] < point_pos[static_cast<size_t>(b)]; });
        for (size_t s = 0; s < order.size(); ++s)
            for (size_t t = s + 1; t < order.size(); ++t) {
                Point a = point_pos[static_cast<size_t>(order[s])];
                Point b = point_pos[static_cast<size_t>(order[t])];
                if (b.x - a.x > eps) break;
                if (dist(a, b) <= eps)
                    alias[static_cast<size_t>(std::max(order[s], order[t]))] =
                        std::min(order[s], order[t]);
            }
        for (size_t s = 0; s < alias.size(); ++s) {
            int r = static_cast<int>(s);
            while (alias[static_cast<size_t>(r)] != r) r = alias[static_cast<size_t>(r)];
            alias[s] = r;
        }
    }

    // Node list: vertices, then surviving contact points, then cell hubs.
    std::vector<int> point_node(point_pos.size(), -1);
    for (int i = 0; i < n; ++i) {
        SkeletonTree::Node v;
        v.kind = SkeletonTree::NodeKind::Vertex;
        v.vertex = i;
        v.pos = sys.vertex(i);
        sk.vertex_node.push_back(static_cast<int>(sk.nodes.size()));
        point_node[static_cast<size_t>(alias[static_cast<size_t>(i)])] =
            static_cast<int>(sk.nodes.size());
        sk.nodes.push_back(v);
    }
    for (size_t p = 0; p < point_pos.size(); ++p) {
        int rep = alias[p];
        if (point_node[static_cast<size_t>(rep)] >= 0) continue;
        SkeletonTree::Node c;
        c.kind = SkeletonTree::NodeKind::Contact;
        c.pos = point_pos[static_cast<size_t>(rep)];
        point_node[static_cast<size_t>(rep)] = static_cast<int>(sk.nodes.size());
        sk.nodes.push_back(c);
    }
    std::vector<int> hub_node(ws.cells.words.size(), -1);
    std::map<Address, int> cell_order;
    for (const auto& [key, walk] : ws.walks)
        for (int c : walk.cells)
            cell_order.try_emplace(ws.cells.words[static_cast<size_t>(c)], c);
    for (const auto& [word, cid] : cell_order) {
        SkeletonTree::Node h;
        h.kind = SkeletonTree::NodeKind::CellHub;
        h.cell = word;
        Similarity acc = Similarity::identity();
        for (int letter : word) acc = compose(acc, sys.maps[static_cast<size_t>(letter)]);
        h.pos = acc(sys.polygon.centroid());
        hub_node[static_cast<size_t>(cid)] = static_cast<int>(sk.nodes.size());
        sk.nodes.push_back(h);
    }

    std::set<std::pair<int, int>> edge_set;
    for (const auto& [key, walk] : ws.walks)
        for (size_t t = 0; t < walk.cells.size(); ++t) {
            int hub = hub_node[static_cast<size_t>(walk.cells[t])];
            auto [u, v] = walk.passage[t];
            int a = point_node[static_cast<size_t>(alias[static_cast<size_t>(point_id(walk.pts[t]))])];
            int b = point_node[static_cast<size_t>(alias[static_cast<size_t>(point_id(walk.pts[t + 1]))])];
            edge_set.insert({a, hub});
            edge_set.insert({b, hub});
            sk.passages[{a, hub}].insert({u, v});
            sk.passages[{b, hub}].insert({v, u});
        }
    sk.edges.assign(edge_set.begin(), edge_set.end());
    sk.adjacency.assign(sk.nodes.size(), {});
    for (auto [a, b] : sk.edges) {
        sk.adjacency[static_cast<size_t>(a)].push_back(b);
        sk.adjacency[static_cast<size_t>(b)].push_back(a);
        ++sk.nodes[static_cast<size_t>(a)].degree;
        ++sk.nodes[static_cast<size_t>(b)].degree;
    }

    // Drop isolated nodes (weld aliases), then require a tree.
    std::vector<int> remap(sk.nodes.size(), -1);
    {
        SkeletonTree packed;
        packed.depth = depth;
        for (size_t s = 0; s < sk.nodes.size(); ++s) {
            if (sk.nodes[s].degree == 0 && sk.nodes[s].kind != SkeletonTree::NodeKind::Vertex)
                continue;
            remap[s] = static_cast<int>(packed.nodes.size());
            packed.nodes.push_back(sk.nodes[s]);
        }
        for (auto [a, b] : sk.edges)
            packed.edges.emplace_back(remap[static_cast<size_t>(a)], remap[static_cast<size_t>(b)]);
        for (const auto& [e, ps] : sk.passages)
            packed.passages[{remap[static_cast<size_t>(e.first)], remap[static_cast<size_t>(e.second)]}] = ps;
        for (int id : sk.vertex_node) packed.vertex_node.push_back(remap[static_cast<size_t>(id)]);
        packed.adjacency.assign(packed.nodes.size(), {});
        for (auto [a, b] : packed.edges) {
            packed.adjacency[static_cast<size_t>(a)].push_back(b);
            packed.adjacency[static_cast<size_t>(b)].push_back(a);
        }
        sk = std::move(packed);
    }

    // Tree check: connected with |E| = |V| - 1.
    if (!sk.nodes.empty()) {
        std::vector<char> seen(sk.nodes.size(), 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : sk.adjacency[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    ++reached;
                    queue.push_back(w);
                }
        }
        if (reached != sk.nodes.size())
            throw Error("skeleton: welded graph is disconnected");
        if (sk.edges.size() != sk.nodes.size() - 1)
            throw Error("skeleton: welded graph has a cycle (tolerance too coarse or system invalid)");
    }
    return sk;
}

/// Branches of the main tree at a sampled point node: germ classes of the
/// incident sub-arcs, summed over the adjacent cells. Exact for vertices
/// and contact points.
inline int point_branch_count(const Multizipper& mz, const SkeletonTree& sk, int node) {
    const SkeletonTree::Node& nd = sk.nodes[static_cast<size_t>(node)];
    if (nd.kind == SkeletonTree::NodeKind::CellHub) return nd.degree;
    int total = 0;
    for (int hub : sk.adjacency[static_cast<size_t>(node)]) {
        auto it = sk.passages.find({node, hub});
        if (it == sk.passages.end()) continue;
        std::vector<std::pair<int, int>> reps;
        for (auto [u, v] : it->second) {
            bool matched = false;
            for (auto [ru, rv] : reps)
                if (ru == u && germ_equal(mz, u, rv, v)) {
                    matched = true;
                    break;
                }
            if (!matched) reps.emplace_back(u, v);
        }
        total += static_cast<int>(reps.size());
    }
    return total;
}

struct RamificationPoint {
    Point p;
    int degree = 0;
    bool interior = false;     // branch point hidden inside a cell (hub node)
    bool provisional = false;  // degree not yet stable between depths d, d+1
};

/// Ramification points of the depth-d skeleton. Point nodes carry exact
/// germ-resolved degrees; hub nodes are compared against the depth-(d+1)
/// skeleton and flagged provisional unless their degree persists.
inline std::vector<RamificationPoint> main_ramification_points(const Multizipper& mz, int depth) {
    SkeletonTree sk = skeleton_tree(mz, depth);
    SkeletonTree finer = skeleton_tree(mz, depth + 1);
    std::vector<RamificationPoint> out;
    for (size_t s = 0; s < sk.nodes.size(); ++s) {
        const SkeletonTree::Node& nd = sk.nodes[s];
        if (nd.kind == SkeletonTree::NodeKind::CellHub) {
            if (nd.degree < 3) continue;
            RamificationPoint rp;
            rp.p = nd.pos;
            rp.degree = nd.degree;
            rp.interior = true;
            rp.provisional = true;
            // Stable if the refined skeleton shows exactly one equal-degree
            // branch node inside this cell.
            Similarity acc = Similarity::identity();
            for (int letter : nd.cell) acc = compose(acc, mz.sys.maps[static_cast<size_t>(letter)]);
            ConvexPolygon cell = map_polygon(acc, mz.sys.polygon);
            int matches = 0;
            for (const auto& fn : finer.nodes)
                if (fn.degree >= 3 && cell.contains_point(fn.pos, mz.sys.eps()) &&
                    fn.degree == nd.degree)
                    ++matches;
            rp.provisional = matches != 1;
            out.push_back(rp);
        } else {
            int branches = point_branch_count(mz, sk, static_cast<int>(s));
            if (branches < 3) continue;
            out.push_back({nd.pos, branches, false, false});
        }
    }
    return out;
}

}  // namespace dendrite
