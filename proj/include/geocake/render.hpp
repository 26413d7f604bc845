#pragma once

#include <string>
#include <vector>

#include "geocake/allocation.hpp"

namespace geocake {

// SVG 1.1 drawing of an allocation: cake outline, filled pieces per agent,
// dashed usable pieces, and a legend. Output depends only on the inputs.
std::string render_svg(const Allocation& alloc, const Region& cake);

// Side-by-side panels, one partition each, with a caption above every panel.
std::string render_panels(const Region& cake, const std::vector<std::vector<Region>>& partitions,
                          const std::vector<std::string>& captions);

}  // namespace geocake
