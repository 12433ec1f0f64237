#pragma once

#include <string>

#include "swarmlab/sim.hpp"
#include "swarmlab/sweep.hpp"

namespace swarmlab {

// Trajectory plot: one <polyline> per robot, an arrowhead <polygon> at each
// final heading, and for sweep runs the last targets (<circle>) and the
// boundary (<line>).  The viewBox is the trace bounding box plus a 5% margin.
std::string render_svg(const SimTrace& trace, const BoundaryChain& boundary = {});

}  // namespace swarmlab
