#pragma once

#include <string>

#include "planode/system.hpp"

namespace planode {

struct PortraitOptions {
    int seed_count = 12;          // streamline seeds on a ring
    double seed_radius = 1.0;
    double time_span = 6.0;       // integration horizon each direction
    double view_half_extent = 1.25;
    int size_px = 560;
};

/// SVG 1.1 phase portrait: one path per seeded streamline, integrated in
/// Cartesian coordinates forward and backward in time, with an arrowhead at
/// mid-arc and a dot at the equilibrium.
std::string render_portrait_svg(const PlanarSystem& sys,
                                const PortraitOptions& opt = {});

}  // namespace planode
