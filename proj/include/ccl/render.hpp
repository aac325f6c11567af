#pragma once

#include <cstdint>
#include <string>

#include "ccl/labeling.hpp"

namespace ccl {

struct RenderSpec {
  int res = 400;  // pixels along the first axis
  std::uint64_t palette_seed = 0;
  bool tree_lines = true;
  bool shade_uncertain = true;
  bool contour = true;
};

/// Flat color per component label from pixel sampling, optionally overlaid
/// with leaf outlines, shaded uncertain leaves and the zero contour. 2D only.
std::string render_svg(LabelingState& st, const RenderSpec& spec);

/// "#rrggbb" for a label; label 0 (the zero set) is black.
std::string label_color(std::uint32_t label, std::uint64_t palette_seed);

}  // namespace ccl
