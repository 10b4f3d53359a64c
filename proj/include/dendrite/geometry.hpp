/// Exact-leaning 2D primitives: points, plane similarities in complex form,
/// strictly convex polygons, and the contact predicates everything else
/// relies on. All coincidence tests take an absolute tolerance `eps`
/// derived by the caller from the owning system (eps_rel * diam P).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dendrite {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& msg) : Error(msg) {}
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point() = default;
    Point(double px, double py) : x(px), y(py) {}
    explicit Point(std::complex<double> z) : x(z.real()), y(z.imag()) {}

    std::complex<double> as_complex() const { return {x, y}; }

    Point operator+(Point o) const { return {x + o.x, y + o.y}; }
    Point operator-(Point o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator<(const Point& o) const { return x < o.x || (x == o.x && y < o.y); }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Contracting plane similarity, z -> a*z + b, or z -> a*conj(z) + b when
/// `conjugate` is set. The contraction ratio is |a|.
struct Similarity {
    std::complex<double> a{1.0, 0.0};
    std::complex<double> b{0.0, 0.0};
    bool conjugate = false;

    Similarity() = default;
    Similarity(std::complex<double> coeff, std::complex<double> shift, bool conj = false)
        : a(coeff), b(shift), conjugate(conj) {}

    double ratio() const { return std::abs(a); }

    Point operator()(Point p) const {
        std::complex<double> z = p.as_complex();
        if (conjugate) z = std::conj(z);
        return Point(a * z + b);
    }

    Similarity inverse() const {
        // direct: w = az+b  => z = (w-b)/a
        // conj:   w = a conj(z)+b => z = conj(w-b)/conj(a) = (1/conj(a)) conj(w) - conj(b)/conj(a)
        if (!conjugate) return Similarity(1.0 / a, -b / a, false);
        std::complex<double> ac = std::conj(a);
        return Similarity(1.0 / ac, -std::conj(b) / ac, true);
    }

    static Similarity identity() { return Similarity(); }
};

/// Composition s after t: apply(compose(s,t), p) == s(t(p)).
inline Similarity compose(const Similarity& s, const Similarity& t) {
    Similarity r;
    r.conjugate = s.conjugate != t.conjugate;
    if (!s.conjugate) {
        r.a = s.a * t.a;
        r.b = s.a * t.b + s.b;
    } else {
        r.a = s.a * std::conj(t.a);
        r.b = s.a * std::conj(t.b) + s.b;
    }
    return r;
}

/// Strictly convex polygon, vertices in counterclockwise order.
struct ConvexPolygon {
    std::vector<Point> verts;

    int count() const { return static_cast<int>(verts.size()); }
    const Point& vertex(int k) const { return verts[static_cast<size_t>(k)]; }

    double diameter() const {
        double d = 0.0;
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j)
                d = std::max(d, dist(verts[i], verts[j]));
        return d;
    }

    Point centroid() const {
        Point c{0.0, 0.0};
        for (const Point& v : verts) c = c + v;
        return c * (1.0 / static_cast<double>(verts.size()));
    }

    /// Closed containment with slack: signed distance to every edge >= -eps.
    bool contains_point(Point p, double eps) const {
        const int n = count();
        for (int k = 0; k < n; ++k) {
            Point a = verts[static_cast<size_t>(k)];
            Point b = verts[static_cast<size_t>((k + 1) % n)];
            Point e = b - a;
            double len = norm(e);
            if (cross(e, p - a) < -eps * len) return false;
        }
        return true;
    }

    /// Index of the vertex within eps of p, or -1.
    int vertex_near(Point p, double eps) const {
        for (int k = 0; k < count(); ++k)
            if (dist(verts[static_cast<size_t>(k)], p) <= eps) return k;
        return -1;
    }
};

/// Validates invariants (n >= 3, finite, strictly convex, CCW, no repeats).
inline ConvexPolygon make_polygon(std::vector<Point> verts, double eps) {
    if (verts.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (const Point& v : verts)
        if (!is_finite(v)) throw GeometryError("polygon vertex is not finite");
    const int n = static_cast<int>(verts.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist(verts[static_cast<size_t>(i)], verts[static_cast<size_t>(j)]) <= eps)
                throw GeometryError("polygon has repeated vertices (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
    double area2 = 0.0;
    for (int k = 0; k < n; ++k)
        area2 += cross(verts[static_cast<size_t>(k)], verts[static_cast<size_t>((k + 1) % n)]);
    if (area2 <= 0.0) throw GeometryError("polygon must be counterclockwise");
    for (int k = 0; k < n; ++k) {
        Point a = verts[static_cast<size_t>(k)];
        Point b = verts[static_cast<size_t>((k + 1) % n)];
        Point c = verts[static_cast<size_t>((k + 2) % n)];
        double turn = cross(b - a, c - b);
        if (turn <= eps * std::max(norm(b - a), norm(c - b)))
            throw GeometryError("polygon is not strictly convex at vertex " +
                                std::to_string((k + 1) % n));
    }
    ConvexPolygon p;
    p.verts = std::move(verts);
    return p;
}

/// Image polygon with vertex order renormalized to counterclockwise.
/// Conjugate maps reverse orientation; the image of vertex 0 stays first.
inline ConvexPolygon map_polygon(const Similarity& s, const ConvexPolygon& poly) {
    const int n = poly.count();
    std::vector<Point> out(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = s(poly.vertex(k));
    if (s.conjugate) std::reverse(out.begin() + 1, out.end());
    ConvexPolygon p;
    p.verts = std::move(out);
    return p;
}

/// True iff every vertex of inner lies in outer (closed region, eps slack).
inline bool polygon_contains(const ConvexPolygon& outer, const ConvexPolygon& inner, double eps) {
    for (const Point& v : inner.verts)
        if (!outer.contains_point(v, eps)) return false;
    return true;
}

/// Interior angle at vertex k, in (0, pi).
inline double vertex_angle(const ConvexPolygon& poly, int k) {
    const int n = poly.count();
    if (k < 0 || k >= n) throw GeometryError("vertex index out of range");
    Point v = poly.vertex(k);
    Point u = poly.vertex((k + 1) % n) - v;
    Point w = poly.vertex((k + n - 1) % n) - v;
    return std::atan2(cross(u, w), dot(u, w));
}

namespace detail {

/// Sutherland-Hodgman clip of `subject` against the half-planes of `clip`
/// (keep side: signed distance >= -slack). Convex inputs only.
inline std::vector<Point> clip_convex(const ConvexPolygon& clip, const ConvexPolygon& subject,
                                      double slack) {
    std::vector<Point> poly = subject.verts;
    const int n = clip.count();
    for (int k = 0; k < n && !poly.empty(); ++k) {
        Point a = clip.vertex(k);
        Point b = clip.vertex((k + 1) % n);
        Point e = b - a;
        double len = norm(e);
        std::vector<Point> next;
        next.reserve(poly.size() + 2);
        for (size_t i = 0; i < poly.size(); ++i) {
            Point p = poly[i];
            Point q = poly[(i + 1) % poly.size()];
            double dp = cross(e, p - a) / len;
            double dq = cross(e, q - a) / len;
            bool inp = dp >= -slack;
            bool inq = dq >= -slack;
            if (inp) next.push_back(p);
            if (inp != inq) {
                double t = dp / (dp - dq);  // dp != dq here
                next.push_back(p + (q - p) * t);
            }
        }
        poly = std::move(next);
    }
    return poly;
}

inline double points_diameter(const std::vector<Point>& pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, dist(pts[i], pts[j]));
    return d;
}

inline double point_segment_distance(Point p, Point a, Point b) {
    Point e = b - a;
    double len2 = dot(e, e);
    if (len2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
    return dist(p, a + e * t);
}

inline bool segments_cross(Point a, Point b, Point c, Point d) {
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    int s1 = sgn(cross(b - a, c - a));
    int s2 = sgn(cross(b - a, d - a));
    int s3 = sgn(cross(d - c, a - c));
    int s4 = sgn(cross(d - c, b - c));
    return s1 * s2 < 0 && s3 * s4 < 0;
}

}  // namespace detail

/// Euclidean distance between closed convex regions; 0 iff they intersect.
inline double polygon_distance(const ConvexPolygon& p1, const ConvexPolygon& p2) {
    for (const Point& v : p1.verts)
        if (p2.contains_point(v, 0.0)) return 0.0;
    for (const Point& v : p2.verts)
        if (p1.contains_point(v, 0.0)) return 0.0;
    const int n1 = p1.count(), n2 = p2.count();
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            if (detail::segments_cross(p1.vertex(i), p1.vertex((i + 1) % n1), p2.vertex(j),
                                       p2.vertex((j + 1) % n2)))
                return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            d = std::min(d, detail::point_segment_distance(p1.vertex(i), p2.vertex(j),
                                                           p2.vertex((j + 1) % n2)));
            d = std::min(d, detail::point_segment_distance(p2.vertex(j), p1.vertex(i),
                                                           p1.vertex((i + 1) % n1)));
        }
    return d;
}

enum class IntersectionKind { Empty, SharedVertex, Overlap };

struct IntersectionClass {
    IntersectionKind kind = IntersectionKind::Empty;
    Point point;       // the common vertex, valid for SharedVertex
    int vertex1 = -1;  // vertex index in p1 / p2
    int vertex2 = -1;
};

/// Classifies the intersection of two convex polygons per the D2 trichotomy.
/// A one-point contact that is not a mutual vertex counts as Overlap.
inline IntersectionClass intersection_class(const ConvexPolygon& p1, const ConvexPolygon& p2,
                                            double eps) {
    IntersectionClass out;
    std::vector<Point> region = detail::clip_convex(p1, p2, 0.0);
    if (!region.empty() && detail::points_diameter(region) > 8.0 * eps) {
        out.kind = IntersectionKind::Overlap;
        Point c{0.0, 0.0};
        for (const Point& p : region) c = c + p;
        out.point = c * (1.0 / static_cast<double>(region.size()));
        return out;
    }
    if (polygon_distance(p1, p2) > eps) {
        out.kind = IntersectionKind::Empty;
        return out;
    }
    // Touching within tolerance: a common vertex, or a non-vertex graze.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p1.count(); ++i)
        for (int j = 0; j < p2.count(); ++j) {
            double d = dist(p1.vertex(i), p2.vertex(j));
            if (d < best) {
                best = d;
                out.vertex1 = i;
                out.vertex2 = j;
            }
        }
    if (best <= eps) {
        out.kind = IntersectionKind::SharedVertex;
        out.point = p1.vertex(out.vertex1);
        return out;
    }
    out.kind = IntersectionKind::Overlap;
    out.vertex1 = out.vertex2 = -1;
    return out;
}

}  // namespace dendrite
