#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilat/report.hpp"

namespace bilat {

struct PlotGroups {
  std::optional<std::string> group1;  // bottom row; default: first label seen
  std::optional<std::string> group2;  // top row
};

/// Two-row dot plot per (frame, score) panel, shared horizontal axis within a panel.
std::string dot_plot_svg(const std::vector<ScoreRow>& rows, const PlotGroups& groups = {});
std::string dot_plot_ascii(const std::vector<ScoreRow>& rows, const PlotGroups& groups = {}, std::size_t width = 50);

}  // namespace bilat
