#include "hybrid/geometry.h"

#include "hybrid/errors.h"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace hybrid {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::Connectivity: return "connectivity";
        case ErrorKind::Lookup: return "lookup";
        case ErrorKind::IllegalSend: return "illegal-send";
        case ErrorKind::IllegalIntroduction: return "illegal-introduction";
        case ErrorKind::SimulationAbort: return "simulation-abort";
        case ErrorKind::GeometryInconsistency: return "geometry-inconsistency";
        case ErrorKind::EmbeddingCorruption: return "embedding-corruption";
        case ErrorKind::ProtocolBug: return "protocol-bug";
        case ErrorKind::AssumptionViolation: return "assumption-violation";
        case ErrorKind::NoPath: return "no-path";
        case ErrorKind::Dispatch: return "dispatch";
        case ErrorKind::Generation: return "generation";
        case ErrorKind::Io: return "io";
        case ErrorKind::NotReady: return "not-ready";
        case ErrorKind::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

double dist(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

Orientation orientation(Point a, Point b, Point c) {
    const Point ab = b - a;
    const Point ac = c - a;
    const double scale = std::hypot(ab.x, ab.y) * std::hypot(ac.x, ac.y);
    if (scale == 0.0) return Orientation::Collinear;
    const double normalized = cross(ab, ac) / scale;
    if (normalized > kGeomEpsilon) return Orientation::Left;
    if (normalized < -kGeomEpsilon) return Orientation::Right;
    return Orientation::Collinear;
}

bool in_circumcircle(Point a, Point b, Point c, Point p) {
    const Orientation o = orientation(a, b, c);
    if (o == Orientation::Collinear) {
        throw Error(ErrorKind::DegenerateInput, "in_circumcircle: collinear triangle");
    }
    if (o == Orientation::Right) std::swap(b, c);

    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    const double det = ad * (bdx * cdy - cdx * bdy) - bd * (adx * cdy - cdx * ady) +
                       cd * (adx * bdy - bdx * ady);
    const double scale = std::max({ad, bd, cd});
    return det > kGeomEpsilon * scale * scale;
}

Point circumcenter(Point a, Point b, Point c) {
    const Point ab = b - a;
    const Point ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    if (d == 0.0) throw Error(ErrorKind::DegenerateInput, "circumcenter: collinear triangle");
    const double ab2 = dot(ab, ab);
    const double ac2 = dot(ac, ac);
    return {a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
}

double circumradius(Point a, Point b, Point c) { return dist(circumcenter(a, b, c), a); }

bool gabriel_disk_empty(Point u, Point v, std::span<const Point> others) {
    const Point m = 0.5 * (u + v);
    const double r2 = 0.25 * dot(v - u, v - u);
    return std::none_of(others.begin(), others.end(), [&](Point p) {
        const Point d = p - m;
        return dot(d, d) < r2 * (1.0 - kGeomEpsilon);
    });
}

bool segments_properly_intersect(const Segment& s1, const Segment& s2) {
    const Orientation o1 = orientation(s1.a, s1.b, s2.a);
    const Orientation o2 = orientation(s1.a, s1.b, s2.b);
    const Orientation o3 = orientation(s2.a, s2.b, s1.a);
    const Orientation o4 = orientation(s2.a, s2.b, s1.b);

    if (o1 == Orientation::Collinear && o2 == Orientation::Collinear) {
        // Collinear: overlap of positive length counts.
        const Point d = s1.b - s1.a;
        const double len2 = dot(d, d);
        if (len2 == 0.0) return false;
        double t0 = dot(s2.a - s1.a, d) / len2;
        double t1 = dot(s2.b - s1.a, d) / len2;
        if (t0 > t1) std::swap(t0, t1);
        const double lo = std::max(0.0, t0);
        const double hi = std::min(1.0, t1);
        return hi - lo > kGeomEpsilon;
    }
    if (o1 == Orientation::Collinear || o2 == Orientation::Collinear ||
        o3 == Orientation::Collinear || o4 == Orientation::Collinear) {
        return false;
    }
    return o1 != o2 && o3 != o4;
}

double segment_intersection_param(const Segment& s1, const Segment& s2) {
    const Point r = s1.b - s1.a;
    const Point s = s2.b - s2.a;
    const double denom = cross(r, s);
    if (std::abs(denom) <= kGeomEpsilon * std::hypot(r.x, r.y) * std::hypot(s.x, s.y)) {
        return -1.0;
    }
    const Point qp = s2.a - s1.a;
    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return -1.0;
    return t;
}

std::vector<std::size_t> convex_hull_oracle(std::span<const Point> points) {
    if (points.size() < 3) {
        throw Error(ErrorKind::DegenerateInput, "convex hull needs at least 3 points");
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });

    std::vector<std::size_t> hull(2 * points.size());
    std::size_t k = 0;
    for (std::size_t idx : order) {
        while (k >= 2 &&
               orientation(points[hull[k - 2]], points[hull[k - 1]], points[idx]) != Orientation::Left) {
            --k;
        }
        hull[k++] = idx;
    }
    const std::size_t lower = k + 1;
    for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
        while (k >= lower &&
               orientation(points[hull[k - 2]], points[hull[k - 1]], points[*it]) != Orientation::Left) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) {
        throw Error(ErrorKind::DegenerateInput, "convex hull of collinear points");
    }
    return hull;
}

double signed_turn_angle(Point u, Point v, Point w) {
    if (u == w) return 180.0;
    const Point d1 = v - u;
    const Point d2 = w - v;
    const double left = std::atan2(cross(d1, d2), dot(d1, d2));
    return -left * 180.0 / std::numbers::pi;
}

double signed_area(std::span<const Point> ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        twice += cross(ring[i], ring[(i + 1) % ring.size()]);
    }
    return 0.5 * twice;
}

Point closest_point_on_segment(Point p, Point a, Point b) {
    const Point d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return a;
    const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return a + t * d;
}

bool point_on_polygon_boundary(Point p, std::span<const Point> polygon) {
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point a = polygon[i];
        const Point b = polygon[(i + 1) % polygon.size()];
        if (dist(closest_point_on_segment(p, a, b), p) <= 1e-9) return true;
    }
    return false;
}

bool point_in_polygon_strict(Point p, std::span<const Point> polygon) {
    if (polygon.size() < 3 || point_on_polygon_boundary(p, polygon)) return false;
    int winding = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point a = polygon[i];
        const Point b = polygon[(i + 1) % polygon.size()];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0) ++winding;
        } else if (b.y <= p.y && cross(b - a, p - a) < 0) {
            --winding;
        }
    }
    return winding != 0;
}

bool segment_crosses_polygon_interior(const Segment& s, std::span<const Point> polygon) {
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return point_in_polygon_strict(s.a, polygon);

    std::vector<double> params{0.0, 1.0};
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point a = polygon[i];
        const Point b = polygon[(i + 1) % polygon.size()];
        const double t = segment_intersection_param(s, Segment{a, b});
        if (t >= 0.0) params.push_back(t);
        // Vertices touching the segment split it as well.
        const double tv = dot(a - s.a, d) / len2;
        if (tv > 0.0 && tv < 1.0 && dist(s.a + tv * d, a) <= 1e-9) params.push_back(tv);
    }
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
        if (params[i + 1] - params[i] <= 1e-12) continue;
        const Point mid = s.a + (0.5 * (params[i] + params[i + 1])) * d;
        if (point_in_polygon_strict(mid, polygon)) return true;
    }
    return false;
}

}  // namespace hybrid
