#pragma once

// SVG figures: level-k bodies of a spec, segment collections, and coverage
// gap plots.  Output bytes depend only on the inputs.

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/io.hpp"

namespace shadowlab {

struct RenderOptions {
  int level = 1;
  std::string style = "fill";               // "fill", "outline" or "components"
  std::optional<Vectord> view;              // projection direction for d = 3
  std::optional<Hyperplane<double>> witness;
};

std::string render_svg(const Spec& spec, const RenderOptions& opt = {});

/// Gap against direction angle over [0, pi).
std::string coverage_plot_svg(const std::vector<double>& angles, const std::vector<double>& gaps);

}  // namespace shadowlab
