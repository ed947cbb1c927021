#pragma once

#include <cmath>
#include <compare>
#include <span>
#include <vector>

namespace hybrid {

/// Position in the plane. One length unit equals the radio range.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

enum class Orientation { Left, Right, Collinear };

struct Segment {
    Point a;
    Point b;
};

/// Counterclockwise simple polygon.
struct Polygon {
    std::vector<Point> vertices;
};

// Determinants whose magnitude (normalized by the operand scale) falls below
// this are treated as zero.
inline constexpr double kGeomEpsilon = 1e-12;

double dist(Point p, Point q);

Orientation orientation(Point a, Point b, Point c);

/// Strictly inside the circle through a, b, c. Throws DegenerateInput when
/// a, b, c are collinear.
bool in_circumcircle(Point a, Point b, Point c, Point p);

/// Circumcenter of a non-degenerate triangle.
Point circumcenter(Point a, Point b, Point c);
double circumradius(Point a, Point b, Point c);

bool gabriel_disk_empty(Point u, Point v, std::span<const Point> others);

/// Open segments share a point; touching at shared endpoints does not count.
bool segments_properly_intersect(const Segment& s1, const Segment& s2);

/// Parameter t in [0,1] along s1 where it crosses the line through s2, or a
/// negative value when the segments do not intersect.
double segment_intersection_param(const Segment& s1, const Segment& s2);

/// Andrew's monotone chain. Counterclockwise, starting at the
/// lexicographically smallest point, collinear points dropped. Returns
/// indices into `points`.
std::vector<std::size_t> convex_hull_oracle(std::span<const Point> points);

/// Exterior turn at v walking u -> v -> w, in degrees. Right turns are
/// positive, left turns negative. An exact reversal (u == w) counts +180.
double signed_turn_angle(Point u, Point v, Point w);

/// Shoelace signed area; positive for counterclockwise vertex order.
double signed_area(std::span<const Point> ring);

/// Strictly inside a (possibly non-convex) polygon; boundary points are
/// classified outside.
bool point_in_polygon_strict(Point p, std::span<const Point> polygon);

/// Point lies on the polygon boundary within tolerance.
bool point_on_polygon_boundary(Point p, std::span<const Point> polygon);

/// The open segment passes through the interior of the polygon.
bool segment_crosses_polygon_interior(const Segment& s, std::span<const Point> polygon);

/// Point on segment ab closest to p.
Point closest_point_on_segment(Point p, Point a, Point b);

}  // namespace hybrid
