/// Combinatorial equivalence of polygonal tree systems, the induced
/// conjugating map evaluated through finite addresses, and its Holder
/// exponents. Equivalence is decided on the incidence signature alone;
/// geometry enters only when each tuple is extracted.
#pragma once

#include "analysis.hpp"

namespace dendrite {

struct IncidenceSignature {
    std::set<std::array<int, 3>> vertex_maps;        // (k, i, j): S_k(A_i) = A_j
    std::set<std::array<int, 4>> contacts;           // (k1, i, k2, j), k1 < k2

    bool operator==(const IncidenceSignature& o) const {
        return vertex_maps == o.vertex_maps && contacts == o.contacts;
    }
};

inline IncidenceSignature signature(const PolygonalTreeSystem& sys) {
    IncidenceSignature sig;
    for (const auto& t : vertex_map_triples(sys)) sig.vertex_maps.insert(t);
    const double eps = sys.eps();
    const int m = sys.map_count();
    const int n = sys.vertex_count();
    for (int k1 = 0; k1 < m; ++k1)
        for (int k2 = k1 + 1; k2 < m; ++k2)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (dist(sys.maps[static_cast<size_t>(k1)](sys.vertex(i)),
                             sys.maps[static_cast<size_t>(k2)](sys.vertex(j))) <= eps)
                        sig.contacts.insert({k1, i, k2, j});
    return sig;
}

struct EquivalenceResult {
    bool equivalent = false;
    std::string diagnostic;
    std::vector<std::array<int, 3>> missing_vertex_maps, extra_vertex_maps;
    std::vector<std::array<int, 4>> missing_contacts, extra_contacts;
    std::optional<std::vector<int>> permutation;  // relabeling of sys2's vertices, when searched
};

namespace detail {

inline IncidenceSignature permuted(const IncidenceSignature& sig, const std::vector<int>& perm) {
    // perm maps new label -> old label; tuples are rewritten to new labels.
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
    IncidenceSignature out;
    for (const auto& t : sig.vertex_maps)
        out.vertex_maps.insert({t[0], inv[static_cast<size_t>(t[1])], inv[static_cast<size_t>(t[2])]});
    for (const auto& t : sig.contacts)
        out.contacts.insert({t[0], inv[static_cast<size_t>(t[1])], t[2], inv[static_cast<size_t>(t[3])]});
    return out;
}

template <typename T>
void set_difference_into(const std::set<T>& a, const std::set<T>& b, std::vector<T>& out) {
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
}

}  // namespace detail

/// Signatures compared as tuple sets; systems must agree in n and m.
inline EquivalenceResult check_equivalence(const PolygonalTreeSystem& a,
                                           const PolygonalTreeSystem& b) {
    EquivalenceResult r;
    if (a.vertex_count() != b.vertex_count() || a.map_count() != b.map_count()) {
        r.diagnostic = "size mismatch: n " + std::to_string(a.vertex_count()) + " vs " +
                       std::to_string(b.vertex_count()) + ", m " + std::to_string(a.map_count()) +
                       " vs " + std::to_string(b.map_count());
        return r;
    }
    IncidenceSignature sa = signature(a), sb = signature(b);
    detail::set_difference_into(sa.vertex_maps, sb.vertex_maps, r.missing_vertex_maps);
    detail::set_difference_into(sb.vertex_maps, sa.vertex_maps, r.extra_vertex_maps);
    detail::set_difference_into(sa.contacts, sb.contacts, r.missing_contacts);
    detail::set_difference_into(sb.contacts, sa.contacts, r.extra_contacts);
    r.equivalent = sa == sb;
    if (!r.equivalent) r.diagnostic = "signatures differ";
    return r;
}

/// Brute-force search over vertex relabelings of the second system
/// (n <= 9). The lexicographically smallest matching permutation wins.
inline EquivalenceResult check_equivalence_permuted(const PolygonalTreeSystem& a,
                                                    const PolygonalTreeSystem& b) {
    EquivalenceResult direct = check_equivalence(a, b);
    if (direct.equivalent || a.vertex_count() != b.vertex_count() ||
        a.map_count() != b.map_count())
        return direct;
    const int n = a.vertex_count();
    if (n > 9) throw Error("permutation search limited to n <= 9");
    IncidenceSignature sa = signature(a), sb = signature(b);
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (detail::permuted(sb, perm) == sa) {
            EquivalenceResult r;
            r.equivalent = true;
            r.permutation = perm;
            return r;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    direct.diagnostic = "signatures differ under every vertex relabeling";
    return direct;
}

struct ConjugatePoint {
    Point image;
    double error_bound = 0.0;
    Address address;
};

/// Evaluates the conjugating map through a depth-d address of p. Vertex
/// images are carried over exactly; other points go to the image cell's
/// centroid with the guaranteed bound (q')^d diam(P').
inline ConjugatePoint conjugate_point(const PolygonalTreeSystem& a, const PolygonalTreeSystem& b,
                                      Point p, int depth) {
    std::vector<Address> addrs = address_of(a, p, depth);
    if (addrs.empty())
        throw Error("conjugate_point: point lies outside the depth-" + std::to_string(depth) +
                    " refinement");
    const Address& w = addrs.front();  // lexicographically smallest
    Similarity sa = Similarity::identity(), sb = Similarity::identity();
    for (int letter : w) {
        sa = compose(sa, a.maps[static_cast<size_t>(letter)]);
        sb = compose(sb, b.maps[static_cast<size_t>(letter)]);
    }
    ConjugatePoint out;
    out.address = w;
    out.error_bound = std::pow(b.max_ratio(), depth) * b.diameter();
    const double eps = a.eps();
    for (int k = 0; k < a.vertex_count(); ++k)
        if (dist(sa(a.vertex(k)), p) <= eps) {
            out.image = sb(b.vertex(k));
            return out;
        }
    out.image = sb(b.polygon.centroid());
    return out;
}

struct HolderCertificate {
    double beta = 0.0;        // min_i log r'_i / log r_i
    double beta_prime = 0.0;  // min_i log r_i / log r'_i
    double forward_constant = 0.0;   // d(x',y') <= fwd * d(x,y)^beta
    double backward_constant = 0.0;
};

inline HolderCertificate holder_certificate(const PolygonalTreeSystem& a,
                                            const PolygonalTreeSystem& b) {
    if (a.map_count() != b.map_count())
        throw Error("holder_certificate: map counts differ");
    HolderCertificate h;
    h.beta = std::numeric_limits<double>::infinity();
    h.beta_prime = std::numeric_limits<double>::infinity();
    for (int k = 0; k < a.map_count(); ++k) {
        double ra = a.maps[static_cast<size_t>(k)].ratio();
        double rb = b.maps[static_cast<size_t>(k)].ratio();
        h.beta = std::min(h.beta, std::log(rb) / std::log(ra));
        h.beta_prime = std::min(h.beta_prime, std::log(ra) / std::log(rb));
    }
    MetricConstants ma = metric_constants(a);
    MetricConstants mb = metric_constants(b);
    h.forward_constant =
        2.0 * mb.diam_p * std::pow(1.0 / (ma.rho * std::sin(ma.alpha / 2.0)), h.beta);
    h.backward_constant =
        2.0 * ma.diam_p * std::pow(1.0 / (mb.rho * std::sin(mb.alpha / 2.0)), h.beta_prime);
    return h;
}

}  // namespace dendrite
