#include "planode/portrait.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace planode {

namespace {

// Classic RK4 with a velocity-limited step; plenty for short Cartesian arcs.
Vec2 rk4_step(const PlanarSystem& sys, const Vec2& p, double h) {
    const Vec2 k1 = cartesian_rhs(sys, p);
    const Vec2 k2 = cartesian_rhs(sys, p + k1 * (0.5 * h));
    const Vec2 k3 = cartesian_rhs(sys, p + k2 * (0.5 * h));
    const Vec2 k4 = cartesian_rhs(sys, p + k3 * h);
    return p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

std::vector<Vec2> streamline(const PlanarSystem& sys, Vec2 p, double sign,
                             double t_span, double escape) {
    std::vector<Vec2> pts{p};
    double t = 0.0;
    for (int i = 0; i < 20000 && t < t_span; ++i) {
        const double speed = cartesian_rhs(sys, p).norm();
        if (!std::isfinite(speed) || speed < 1e-9) {
            break;
        }
        p = rk4_step(sys, p, sign * std::min(0.02, 0.01 / speed));
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            break;
        }
        t += std::min(0.02, 0.01 / speed);
        pts.push_back(p);
        if (std::max(std::fabs(p.x), std::fabs(p.y)) > escape ||
            p.norm() < 2e-3) {
            break;
        }
    }
    return pts;
}

void append_num(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    s += buf;
}

}  // namespace

std::string render_portrait_svg(const PlanarSystem& sys,
                                const PortraitOptions& opt) {
    const double half = opt.view_half_extent;
    const double escape = 1.4 * half;
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"" << opt.size_px << "\" height=\"" << opt.size_px << "\" "
        << "viewBox=\"" << -half << " " << -half << " " << 2 * half << " "
        << 2 * half << "\">\n"
        << "<rect x=\"" << -half << "\" y=\"" << -half << "\" width=\""
        << 2 * half << "\" height=\"" << 2 * half << "\" fill=\"white\"/>\n";

    for (int i = 0; i < opt.seed_count; ++i) {
        const double angle = 2.0 * M_PI * i / opt.seed_count;
        const Vec2 seed{opt.seed_radius * std::cos(angle),
                        opt.seed_radius * std::sin(angle)};

        std::vector<Vec2> back =
            streamline(sys, seed, -1.0, opt.time_span, escape);
        const std::vector<Vec2> fwd =
            streamline(sys, seed, 1.0, opt.time_span, escape);
        // One polyline per seed: backward arc reversed, then the forward arc.
        std::vector<Vec2> pts(back.rbegin(), back.rend());
        pts.insert(pts.end(), fwd.begin() + 1, fwd.end());

        const std::size_t stride = std::max<std::size_t>(1, pts.size() / 240);
        std::string d;
        std::size_t last_emitted = 0;
        for (std::size_t j = 0; j < pts.size(); j += stride) {
            // SVG's y axis points down; flip to the usual orientation.
            d += j == 0 ? "M" : " L";
            append_num(d, pts[j].x);
            d += ",";
            append_num(d, -pts[j].y);
            last_emitted = j;
        }
        if (last_emitted + 1 != pts.size()) {
            d += " L";
            append_num(d, pts.back().x);
            d += ",";
            append_num(d, -pts.back().y);
        }
        svg << "<path d=\"" << d
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
            << 0.006 * half << "\"/>\n";

        // Arrowhead at mid-arc, aligned with the forward flow.
        const Vec2 mid = pts[pts.size() / 2];
        const Vec2 v = cartesian_rhs(sys, mid);
        const double vn = v.norm();
        if (vn > 1e-12) {
            const Vec2 u{v.x / vn, v.y / vn};
            const Vec2 n{-u.y, u.x};
            const double len = 0.035 * half;
            const Vec2 tip = mid + u * len;
            const Vec2 left = mid - u * (0.4 * len) + n * (0.55 * len);
            const Vec2 right = mid - u * (0.4 * len) - n * (0.55 * len);
            std::string tri;
            append_num(tri, tip.x);
            tri += ",";
            append_num(tri, -tip.y);
            tri += " ";
            append_num(tri, left.x);
            tri += ",";
            append_num(tri, -left.y);
            tri += " ";
            append_num(tri, right.x);
            tri += ",";
            append_num(tri, -right.y);
            svg << "<polygon points=\"" << tri << "\" fill=\"black\"/>\n";
        }
    }

    svg << "<circle cx=\"0\" cy=\"0\" r=\"" << 0.025 * half
        << "\" fill=\"black\"/>\n</svg>\n";
    return svg.str();
}

}  // namespace planode
