/// Hutchinson refinement of P into address-labeled cells, the finite
/// address map, vertex fibers, and the Kigami connectivity criterion.
#pragma once

#include "system.hpp"

#include <array>
#include <cstdint>
#include <numeric>

namespace dendrite {

/// Finite word over the map alphabet, letters 0..m-1.
using Address = std::vector<int>;

inline std::string address_string(const Address& w, int map_count) {
    // 1-based digits; dot-separated once the alphabet outgrows one digit.
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (map_count > 9 && i > 0) s += '.';
        s += std::to_string(w[i] + 1);
    }
    return s;
}

struct Cell {
    Address address;
    ConvexPolygon polygon;  // S_w(P)
    double ratio;           // contraction ratio of the composed map
    Similarity map;         // the composed map S_w
};

constexpr size_t kDefaultCellBudget = 2'000'000;

/// All m^depth cells in lexicographic address order.
inline std::vector<Cell> refine(const PolygonalTreeSystem& sys, int depth,
                                size_t budget = kDefaultCellBudget) {
    if (depth < 0) throw Error("refine: depth must be >= 0");
    const int m = sys.map_count();
    double total = std::pow(static_cast<double>(m), depth);
    if (total > static_cast<double>(budget))
        throw Error("refine: cell budget exceeded (" + std::to_string(total) + " > " +
                    std::to_string(budget) + ")");
    std::vector<Cell> cells;
    cells.reserve(static_cast<size_t>(total));
    Address word;
    auto rec = [&](auto&& self, const Similarity& acc, int level) -> void {
        if (level == depth) {
            cells.push_back({word, map_polygon(acc, sys.polygon), acc.ratio(), acc});
            return;
        }
        for (int k = 0; k < m; ++k) {
            word.push_back(k);
            self(self, compose(acc, sys.maps[static_cast<size_t>(k)]), level + 1);
            word.pop_back();
        }
    };
    rec(rec, Similarity::identity(), 0);
    return cells;
}

/// All depth-k addresses whose cells contain p (closed, eps slack).
/// Empty result means p is provably outside the depth-k refinement.
inline std::vector<Address> address_of(const PolygonalTreeSystem& sys, Point p, int depth) {
    const int m = sys.map_count();
    const double eps = sys.eps();
    std::vector<Address> found;
    Address word;
    auto rec = [&](auto&& self, const Similarity& acc, int level) -> void {
        if (!map_polygon(acc, sys.polygon).contains_point(p, eps)) return;
        if (level == depth) {
            found.push_back(word);
            return;
        }
        for (int k = 0; k < m; ++k) {
            word.push_back(k);
            self(self, compose(acc, sys.maps[static_cast<size_t>(k)]), level + 1);
            word.pop_back();
        }
    };
    rec(rec, Similarity::identity(), 0);
    return found;
}

/// One nested chain of cells P_{w_1} > P_{w_1 w_2} > ... converging to a
/// vertex. The word is eventually periodic; the detected cycle is recorded.
struct FiberBranch {
    Address word;
    int period_start = -1;
    int period_len = 0;
};

struct VertexFiber {
    int vertex = -1;
    std::vector<FiberBranch> branches;
    int count() const { return static_cast<int>(branches.size()); }
};

/// Triples (k, i, j) with S_k(A_i) = A_j, the incidence data D3 quantifies
/// over. Shared with the morphism module.
inline std::vector<std::array<int, 3>> vertex_map_triples(const PolygonalTreeSystem& sys) {
    std::vector<std::array<int, 3>> out;
    const double eps = sys.eps();
    for (int k = 0; k < sys.map_count(); ++k)
        for (int i = 0; i < sys.vertex_count(); ++i) {
            Point img = sys.maps[static_cast<size_t>(k)](sys.vertex(i));
            for (int j = 0; j < sys.vertex_count(); ++j)
                if (dist(img, sys.vertex(j)) <= eps) out.push_back({k, i, j});
        }
    return out;
}

/// Enumerates the distinct nested cell chains containing A_i down to `depth`.
/// A cell S_w(P) contains a vertex of P only as a vertex image, so branches
/// follow the reversed vertex-map relation exactly.
inline VertexFiber vertex_fiber(const PolygonalTreeSystem& sys, int vertex, int depth) {
    if (vertex < 0 || vertex >= sys.vertex_count()) throw Error("vertex_fiber: index out of range");
    auto triples = vertex_map_triples(sys);
    struct State {
        Address word;
        std::vector<int> preimages;  // vertex whose image under S_word is A_vertex, per step
    };
    std::vector<State> frontier{{{}, {vertex}}};
    for (int level = 0; level < depth; ++level) {
        std::vector<State> next;
        for (const State& st : frontier) {
            int target = st.preimages.back();
            for (const auto& t : triples)
                if (t[2] == target) {
                    State ns = st;
                    ns.word.push_back(t[0]);
                    ns.preimages.push_back(t[1]);
                    next.push_back(std::move(ns));
                }
        }
        frontier = std::move(next);
    }
    VertexFiber fiber;
    fiber.vertex = vertex;
    for (const State& st : frontier) {
        FiberBranch br;
        br.word = st.word;
        // Periodicity: repetition of (map letter, preimage vertex) pairs.
        std::map<std::pair<int, int>, int> seen;
        for (size_t t = 0; t < st.word.size(); ++t) {
            auto key = std::make_pair(st.word[t], st.preimages[t + 1]);
            auto it = seen.find(key);
            if (it != seen.end()) {
                br.period_start = it->second;
                br.period_len = static_cast<int>(t) - it->second;
                break;
            }
            seen[key] = static_cast<int>(t);
        }
        fiber.branches.push_back(std::move(br));
    }
    return fiber;
}

/// Kigami criterion at the polygon level: the family {S_i(K)} is connected
/// iff the images form one component under shared-vertex contact.
inline bool connectivity_check(const PolygonalTreeSystem& sys) {
    detail::PairTable table = detail::pair_table(sys);
    const int m = sys.map_count();
    std::vector<int> parent(static_cast<size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)] =
                                                            parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
        return v;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (table.cls[static_cast<size_t>(i)][static_cast<size_t>(j)].kind ==
                IntersectionKind::SharedVertex)
                parent[static_cast<size_t>(find(i))] = find(j);
    int root = find(0);
    for (int k = 1; k < m; ++k)
        if (find(k) != root) return false;
    return true;
}

}  // namespace dendrite
