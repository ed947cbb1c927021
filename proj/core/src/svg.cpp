#include "hybrid/svg.h"

#include "hybrid/errors.h"
#include "hybrid/io.h"
#include "hybrid/ldel.h"

#include <algorithm>
#include <cstdio>

namespace hybrid {

namespace {

constexpr double kScale = 60.0;
constexpr double kMargin = 20.0;

struct Frame {
    double x0 = 0.0;
    double y1 = 0.0;
    double width = 0.0;
    double height = 0.0;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string px(const Frame& f, Point p) {
    return num(kMargin + (p.x - f.x0) * kScale) + "," + num(kMargin + (f.y1 - p.y) * kScale);
}

std::string points_attr(const Frame& f, std::span<const Point> pts, const std::vector<NodeIndex>& nodes) {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ' ';
        out += px(f, pts[nodes[i]]);
    }
    return out;
}

void line(std::string& out, const Frame& f, Point a, Point b) {
    const std::string pa = px(f, a);
    const std::string pb = px(f, b);
    const auto ca = pa.find(',');
    const auto cb = pb.find(',');
    out += "<line x1=\"" + pa.substr(0, ca) + "\" y1=\"" + pa.substr(ca + 1) + "\" x2=\"" + pb.substr(0, cb) +
           "\" y2=\"" + pb.substr(cb + 1) + "\"/>\n";
}

}  // namespace

std::string svg_document(const HybridTopology& topo, const HoleAbstraction& abs, const std::vector<RouteResult>& routes) {
    const auto& pts = topo.points;
    Frame f;
    if (!pts.empty()) {
        double x1 = pts[0].x, y0 = pts[0].y;
        f.x0 = pts[0].x;
        f.y1 = pts[0].y;
        for (const Point& p : pts) {
            f.x0 = std::min(f.x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            f.y1 = std::max(f.y1, p.y);
        }
        f.width = 2 * kMargin + (x1 - f.x0) * kScale;
        f.height = 2 * kMargin + (f.y1 - y0) * kScale;
    }
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) + "\" height=\"" + num(f.height) +
           "\" viewBox=\"0 0 " + num(f.width) + " " + num(f.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out += "<g id=\"udg\" stroke=\"#dddddd\" stroke-width=\"0.5\">\n";
    for (std::size_t a = 0; a < topo.size(); ++a) {
        for (NodeIndex b : topo.adhoc[a]) {
            if (a < b) line(out, f, pts[a], pts[b]);
        }
    }
    out += "</g>\n";

    if (topo.size() >= 2) {
        const PlanarGraph g = build_ldel2(topo);
        out += "<g id=\"ldel\" stroke=\"#7a7a7a\" stroke-width=\"1\">\n";
        for (const auto& e : g.edges()) line(out, f, pts[e.a], pts[e.b]);
        out += "</g>\n";
    }

    out += "<g id=\"bays\" fill=\"#ffe9a8\" fill-opacity=\"0.6\" stroke=\"none\">\n";
    for (const auto& h : abs.hulls) {
        for (const auto& b : h.bays) out += "<polygon points=\"" + points_attr(f, pts, b.path()) + "\"/>\n";
    }
    out += "</g>\n";

    out += "<g id=\"hulls\" fill=\"none\" stroke=\"#2b6cb0\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\">\n";
    for (const auto& h : abs.hulls) out += "<polygon points=\"" + points_attr(f, pts, h.hull_nodes) + "\"/>\n";
    out += "</g>\n";

    out += "<g id=\"rings\" fill=\"none\" stroke-width=\"2\">\n";
    for (const auto& r : abs.rings) {
        const char* colour = r.kind == RingKind::OuterBoundary ? "#4a5568" : r.kind == RingKind::OuterHole ? "#805ad5"
                                                                                                           : "#c53030";
        out += "<polygon class=\"" + std::string(to_string(r.kind)) + "\" stroke=\"" + colour + "\" points=\"" +
               points_attr(f, pts, r.members) + "\"/>\n";
    }
    out += "</g>\n";

    out += "<g id=\"nodes\" fill=\"#1a202c\">\n";
    for (const Point& p : pts) {
        const std::string c = px(f, p);
        const auto comma = c.find(',');
        out += "<circle cx=\"" + c.substr(0, comma) + "\" cy=\"" + c.substr(comma + 1) + "\" r=\"2\"/>\n";
    }
    out += "</g>\n";

    out += "<g id=\"routes\" fill=\"none\" stroke=\"#38a169\" stroke-width=\"2.5\">\n";
    for (const auto& r : routes) {
        out += "<polyline class=\"route " + std::string(to_string(r.case_taken)) + "\" points=\"" +
               points_attr(f, pts, r.path_index) + "\"/>\n";
    }
    out += "</g>\n";
    out += "</svg>\n";
    return out;
}

void render_svg(const HybridTopology& topo, const HoleAbstraction& abstraction, const std::vector<RouteResult>& routes,
                const std::filesystem::path& out) {
    write_file(out, svg_document(topo, abstraction, routes));
}

}  // namespace hybrid
