/// Reference systems used across the test suites and shipped as data files.
/// Everything is constructed from closed-form constants; contact identities
/// hold exactly by derivation, not by rounding.
#pragma once

#include <dendrite/io.hpp>

#include <numbers>

namespace fixtures {

using dendrite::ConvexPolygon;
using dendrite::Point;
using dendrite::PolygonalTreeSystem;
using dendrite::Similarity;

inline ConvexPolygon quad(Point a, Point b, Point c, Point d) {
    ConvexPolygon p;
    p.verts = {a, b, c, d};
    return p;
}

/// One-parameter family around the Zeller dendrite: trapezoid
/// [0, 1, 1+it, 1-t^2+it] with S1 = (1-t^2) z and S2 = i t z + 1.
/// All members share one incidence signature; t = 1/sqrt(2) is the
/// classical instance.
inline PolygonalTreeSystem zeller_variant(double t, const std::string& name) {
    PolygonalTreeSystem sys;
    sys.name = name;
    sys.polygon = quad({0.0, 0.0}, {1.0, 0.0}, {1.0, t}, {1.0 - t * t, t});
    sys.maps.emplace_back(std::complex<double>{1.0 - t * t, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.0, t}, std::complex<double>{1.0, 0.0});
    return sys;
}

inline PolygonalTreeSystem ex22() { return zeller_variant(1.0 / std::numbers::sqrt2, "ex22"); }

/// Same signature as ex22 with ratios {1/4, sqrt(3)/2}.
inline PolygonalTreeSystem ex22_variant() {
    return zeller_variant(std::sqrt(3.0) / 2.0, "ex22-variant");
}

/// ex22 with the second map replaced by z/2 + 2/5: the images overlap in a
/// strip, D2 must fail with witness pair (1, 2).
inline PolygonalTreeSystem ex22_overlap() {
    PolygonalTreeSystem sys = ex22();
    sys.name = "ex22-overlap";
    sys.maps[1] = Similarity({0.5, 0.0}, {0.4, 0.0});
    return sys;
}

/// Hata's tree-like set: S1 = (1+i) conj(z) / 2, S2 = (conj(z)+1) / 2 on a
/// 7-gon whose vertices solve the fixed-point labels
///   A1=S1(A1) A2=S2(A6) A3=S2(A5) A4=S2(A4) A5=S1(A4) A6=S1(A3) A7=S1(A2).
inline PolygonalTreeSystem hata() {
    PolygonalTreeSystem sys;
    sys.name = "hata";
    ConvexPolygon p;
    p.verts = {{0.0, 0.0},      {0.625, -0.25}, {0.75, -0.25},  {1.0, 0.0},
               {0.5, 0.5},      {0.25, 0.5},    {0.1875, 0.4375}};
    sys.polygon = p;
    sys.maps.emplace_back(std::complex<double>{0.5, 0.5}, std::complex<double>{0.0, 0.0}, true);
    sys.maps.emplace_back(std::complex<double>{0.5, 0.0}, std::complex<double>{0.5, 0.0}, true);
    return sys;
}

/// Koch curve as a polygonal tree system on its hull triangle. The main
/// tree is a single arc; the apex has a two-point fiber.
inline PolygonalTreeSystem koch() {
    PolygonalTreeSystem sys;
    sys.name = "koch";
    double h = std::sqrt(3.0) / 6.0;
    ConvexPolygon p;
    p.verts = {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}};
    sys.polygon = p;
    std::complex<double> rot{0.5, std::sqrt(3.0) / 2.0};  // e^{i pi/3}
    std::complex<double> third{1.0 / 3.0, 0.0};
    sys.maps.emplace_back(third, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(rot * third, third);
    sys.maps.emplace_back(std::conj(rot) * third, std::complex<double>{0.5, h});
    sys.maps.emplace_back(third, std::complex<double>{2.0 / 3.0, 0.0});
    return sys;
}

/// Kite with vertex angles 30-110-110-110, shared by the two figure systems.
inline ConvexPolygon kite30() {
    double d2r = std::numbers::pi / 180.0;
    double r = std::sin(125.0 * d2r) / std::sin(110.0 * d2r);
    Point d{r * std::cos(15.0 * d2r), r * std::sin(15.0 * d2r)};
    return quad({0.0, 0.0}, {d.x, -d.y}, {1.0, 0.0}, d);
}

/// Five maps on the kite: a large copy at A, a small axis copy, and three
/// copies hanging off it toward B, C, D. The B/D copies sit flush along the
/// edges of P; their rotation is -70/+70 degrees exactly, which pins the
/// axis copy's scale.
inline PolygonalTreeSystem kite5() {
    PolygonalTreeSystem sys;
    sys.name = "kite5";
    sys.polygon = kite30();
    std::complex<double> b = sys.polygon.vertex(1).as_complex();  // lower wing tip
    double h = 0.16;
    std::complex<double> bq = (1.0 - h) * b;
    double q1 = bq.real() - bq.imag() / std::tan(-70.0 * std::numbers::pi / 180.0);
    std::complex<double> a2 = bq - q1;  // arg(a2) = -70 degrees
    sys.maps.emplace_back(std::complex<double>{q1, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(a2, b - a2);
    sys.maps.emplace_back(std::complex<double>{1.0 - q1 - h, 0.0},
                          std::complex<double>{q1 + h, 0.0});
    sys.maps.emplace_back(std::conj(a2), std::conj(b - a2));
    sys.maps.emplace_back(std::complex<double>{h, 0.0}, std::complex<double>{q1, 0.0});
    return sys;
}

/// Nine maps on the kite reconstructing the classic order-bound example:
/// the main tree is the union of the straight segments AB, AC, AD, the
/// vertex A has branch degree 3, C carries a three-point fiber.
inline PolygonalTreeSystem ex24() {
    PolygonalTreeSystem sys;
    sys.name = "ex24";
    sys.polygon = kite30();
    std::complex<double> b = sys.polygon.vertex(1).as_complex();
    std::complex<double> d = sys.polygon.vertex(3).as_complex();
    double d2r = std::numbers::pi / 180.0;
    double q = 0.698, h = 0.112, g = (1.0 - h) - q;
    auto cis = [&](double deg) {
        return std::complex<double>{std::cos(deg * d2r), std::sin(deg * d2r)};
    };
    sys.maps.emplace_back(std::complex<double>{q, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{1.0 - q, 0.0}, q * d);
    sys.maps.emplace_back(std::complex<double>{1.0 - q, 0.0}, q * b);
    sys.maps.emplace_back(0.13 * cis(142.0), std::complex<double>{1.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{-h, 0.0}, std::complex<double>{1.0, 0.0});
    sys.maps.emplace_back(0.139 * cis(-142.0), std::complex<double>{1.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{-g, 0.0}, std::complex<double>{1.0 - h, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.0, 0.096}, std::complex<double>{q, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.0, -0.101}, std::complex<double>{q, 0.0});
    return sys;
}

/// Two far-apart corner copies of the square: D1/D2 hold, the family is
/// disconnected.
inline PolygonalTreeSystem disjoint_pair() {
    PolygonalTreeSystem sys;
    sys.name = "disjoint";
    sys.polygon = quad({0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0});
    sys.maps.emplace_back(std::complex<double>{0.25, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.25, 0.0}, std::complex<double>{0.75, 0.75});
    return sys;
}

/// Diagonal square zipper: D1, D2, D4 hold but the off-diagonal vertices
/// are not covered, so D3 fails.
inline PolygonalTreeSystem square_zipper_d3() {
    PolygonalTreeSystem sys;
    sys.name = "square-zipper";
    sys.polygon = quad({0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0});
    sys.maps.emplace_back(std::complex<double>{0.5, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.5, 0.0}, std::complex<double>{0.5, 0.5});
    return sys;
}

/// Three rotated quarter-scale squares meeting only at the origin: the
/// contact graph is a 3-edge star.
inline PolygonalTreeSystem pinwheel3() {
    PolygonalTreeSystem sys;
    sys.name = "pinwheel3";
    sys.polygon = quad({-2.0, -2.0}, {2.0, -2.0}, {2.0, 2.0}, {-2.0, 2.0});
    for (double deg : {0.0, 120.0, 240.0}) {
        double rad = deg * std::numbers::pi / 180.0;
        std::complex<double> a = std::polar(0.25, rad);
        sys.maps.emplace_back(a, a * std::complex<double>{2.0, 2.0});
    }
    return sys;
}

/// Three small squares where the closest pair of disjoint images is nearer
/// than any uncovered vertex: rho is the gap between images 2 and 3.
inline PolygonalTreeSystem gap3() {
    PolygonalTreeSystem sys;
    sys.name = "gap3";
    sys.polygon = quad({0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0});
    sys.maps.emplace_back(std::complex<double>{0.2, 0.0}, std::complex<double>{0.0, 0.0});
    sys.maps.emplace_back(std::complex<double>{0.2, 0.0}, std::complex<double>{0.8, 0.8});
    sys.maps.emplace_back(std::complex<double>{0.2, 0.0}, std::complex<double>{0.4, 0.5});
    return sys;
}

/// Copy of `sys` with the vertex list rotated by `r` (labels permuted, the
/// geometry untouched).
inline PolygonalTreeSystem rotate_labels(const PolygonalTreeSystem& sys, int r,
                                         const std::string& name) {
    PolygonalTreeSystem out = sys;
    out.name = name;
    const int n = sys.vertex_count();
    out.polygon.verts.clear();
    for (int i = 0; i < n; ++i) out.polygon.verts.push_back(sys.vertex((i + r) % n));
    return out;
}

}  // namespace fixtures
