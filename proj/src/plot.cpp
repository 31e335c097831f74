#include "bilat/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace bilat {

namespace {

struct Panel {
  std::string frame;
  std::string score;
  std::vector<double> top;     // group 2
  std::vector<double> bottom;  // group 1
};

struct Labels {
  std::string group1;
  std::string group2;
};

Labels resolve_groups(const std::vector<ScoreRow>& rows, const PlotGroups& groups) {
  std::vector<std::string> seen;
  for (const auto& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.group) == seen.end()) seen.push_back(r.group);
  }
  Labels out;
  if (groups.group1 && groups.group2) {
    out = {*groups.group1, *groups.group2};
  } else if (groups.group1 || groups.group2) {
    const std::string given = groups.group1 ? *groups.group1 : *groups.group2;
    std::string other;
    for (const auto& g : seen) {
      if (g != given) other = g;
    }
    out = groups.group1 ? Labels{given, other} : Labels{other, given};
  } else if (seen.size() == 2) {
    out = {seen[0], seen[1]};
  } else {
    throw Error(ErrorCode::invalid_argument,
                "dot plots need exactly two groups, found " + std::to_string(seen.size()));
  }
  for (const auto& g : seen) {
    if (g != out.group1 && g != out.group2) throw Error(ErrorCode::invalid_argument, "unexpected group '" + g + "'");
  }
  return out;
}

std::vector<Panel> make_panels(const std::vector<ScoreRow>& rows, const Labels& labels) {
  if (rows.empty()) throw Error(ErrorCode::empty_input, "score table is empty");
  std::vector<Panel> panels;
  for (const auto& r : rows) {
    auto it = std::find_if(panels.begin(), panels.end(),
                           [&](const Panel& p) { return p.frame == r.frame && p.score == r.score; });
    if (it == panels.end()) {
      panels.push_back({r.frame, r.score, {}, {}});
      it = panels.end() - 1;
    }
    (r.group == labels.group2 ? it->top : it->bottom).push_back(r.value);
  }
  return panels;
}

std::pair<double, double> range_of(const Panel& p) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : p.top) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : p.bottom) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0 ? 0.5 * std::abs(lo) : 1.0;
    lo -= pad;
    hi += pad;
  }
  return {lo, hi};
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string title_of(const Panel& p) { return p.frame.empty() ? p.score : p.score + " (" + p.frame + ")"; }

}  // namespace

std::string dot_plot_svg(const std::vector<ScoreRow>& rows, const PlotGroups& groups) {
  const Labels labels = resolve_groups(rows, groups);
  const std::vector<Panel> panels = make_panels(rows, labels);
  constexpr double width = 640, left = 110, right = 30, panel_h = 170, radius = 4;
  const double plot_w = width - left - right;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
      << num(panel_h * static_cast<double>(panels.size())) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    const auto [lo, hi] = range_of(p);
    const double y0 = panel_h * static_cast<double>(i);
    const double top_y = y0 + 65, bottom_y = y0 + 110, axis_y = y0 + 130;
    auto x_of = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
    out << "  <g>\n";
    out << "    <text x=\"" << num(left) << "\" y=\"" << num(y0 + 20) << "\">" << escape_xml(title_of(p))
        << "</text>\n";
    out << "    <text x=\"10\" y=\"" << num(top_y + 4) << "\">" << escape_xml(labels.group2) << "</text>\n";
    out << "    <text x=\"10\" y=\"" << num(bottom_y + 4) << "\">" << escape_xml(labels.group1) << "</text>\n";
    out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(left + plot_w)
        << "\" y2=\"" << num(axis_y) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double v = lo + (hi - lo) * t / 4.0;
      const double x = x_of(v);
      out << "    <line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(axis_y + 5) << "\" stroke=\"black\"/>\n";
      out << "    <text x=\"" << num(x) << "\" y=\"" << num(axis_y + 18) << "\" text-anchor=\"middle\">" << num(v)
          << "</text>\n";
    }
    auto dots = [&](std::vector<double> values, double y, const char* fill) {
      std::sort(values.begin(), values.end());
      std::map<long, int> stack;
      for (double v : values) {
        const double x = x_of(v);
        const long bin = std::lround(x / (2 * radius));
        const int level = stack[bin]++;
        out << "    <circle cx=\"" << num(x) << "\" cy=\"" << num(y - 2 * radius * level) << "\" r=\"" << num(radius)
            << "\" fill=\"" << fill << "\" stroke=\"black\"/>\n";
      }
    };
    dots(p.top, top_y, "#d95f02");
    dots(p.bottom, bottom_y, "#1b9e77");
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string dot_plot_ascii(const std::vector<ScoreRow>& rows, const PlotGroups& groups, std::size_t width) {
  if (width < 2) throw Error(ErrorCode::invalid_argument, "plot width must be at least 2");
  const Labels labels = resolve_groups(rows, groups);
  const std::vector<Panel> panels = make_panels(rows, labels);
  const std::size_t label_w = std::max(labels.group1.size(), labels.group2.size());
  std::ostringstream out;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    const auto [lo, hi] = range_of(p);
    auto line = [&](const std::vector<double>& values) {
      std::vector<int> counts(width, 0);
      for (double v : values) {
        auto bin = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(width)));
        ++counts[std::min(bin, width - 1)];
      }
      std::string s;
      for (int c : counts) s += c == 0 ? '.' : (c > 9 ? '+' : static_cast<char>('0' + c));
      return s;
    };
    if (i) out << "\n";
    out << title_of(p) << "\n";
    out << labels.group2 << std::string(label_w - labels.group2.size(), ' ') << " |" << line(p.top) << "|\n";
    out << labels.group1 << std::string(label_w - labels.group1.size(), ' ') << " |" << line(p.bottom) << "|\n";
    const std::string a = num(lo), b = num(hi);
    const std::size_t gap = width + 2 > a.size() + b.size() ? width + 2 - a.size() - b.size() : 1;
    out << std::string(label_w + 1, ' ') << a << std::string(gap, ' ') << b << "\n";
  }
  return out.str();
}

}  // namespace bilat
