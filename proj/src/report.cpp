#include "bilat/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bilat/format.hpp"

namespace bilat {

using ojson = nlohmann::ordered_json;

namespace {

ojson number(double x) { return std::isfinite(x) ? ojson(x) : ojson(format_number(x)); }

std::string fixed(double x, int digits) {
  if (!std::isfinite(x)) return format_number(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sig3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string render(const std::vector<std::vector<std::string>>& cells, std::size_t header_rows) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  std::size_t total = 0;
  for (std::size_t w : width) total += w + 3;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c) line += c == 1 ? " | " : "   ";
      line += cells[r][c] + std::string(width[c] - cells[r][c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
    if (r + 1 == header_rows) out << std::string(total > 3 ? total - 3 : total, '-') << "\n";
  }
  return out.str();
}

const char* kFootnote =
    "(*) significant at the 5% level; (**) significant at the 1% level; (***) significant at the 0.1% level.\n";

std::string sided_label(Sidedness s) { return s == Sidedness::one_sided_greater ? "One-sided" : "Two-sided"; }

std::string statistic_label(TestMethod m) {
  return (m == TestMethod::mann_whitney_exact || m == TestMethod::mann_whitney_approx) ? "U" : "t";
}

// (score, test) blocks in order of first appearance.
std::vector<std::pair<std::string, RequestedTest>> blocks(const std::vector<FrameComparison>& frames) {
  std::vector<std::pair<std::string, RequestedTest>> out;
  for (const auto& f : frames) {
    for (const auto& r : f.rows) {
      std::pair<std::string, RequestedTest> key{r.score, r.test};
      if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
    }
  }
  return out;
}

const ComparisonRow* find_row(const FrameComparison& f, const std::string& score, RequestedTest test) {
  for (const auto& r : f.rows) {
    if (r.score == score && r.test == test) return &r;
  }
  return nullptr;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string features_csv(const std::vector<SubjectRef>& subjects, const std::vector<FeatureVector>& features) {
  std::ostringstream out;
  out << "id,group";
  if (!features.empty()) {
    for (std::size_t j = 0; j < features.front().size(); ++j) out << "," << features.front().label(j).column_name();
  }
  out << "\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    out << csv_field(subjects[i].id) << "," << csv_field(subjects[i].group);
    for (double v : features[i].values()) out << "," << format_number(v);
    out << "\n";
  }
  return out.str();
}

std::string features_json(const std::vector<SubjectRef>& subjects, const std::vector<FeatureVector>& features,
                          const std::optional<std::string>& frame) {
  ojson doc;
  if (frame) doc["frame"] = *frame;
  if (!features.empty()) {
    doc["kind"] = std::string(to_string(features.front().kind()));
    doc["registration"] = std::string(to_string(features.front().registration()));
    ojson labels = ojson::array();
    for (std::size_t j = 0; j < features.front().size(); ++j) {
      labels.push_back({{"name", features.front().label(j).column_name()},
                        {"description", features.front().label(j).describe()}});
    }
    doc["features"] = labels;
  }
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < features.size(); ++i) {
    ojson values = ojson::array();
    for (double v : features[i].values()) values.push_back(number(v));
    rows.push_back({{"id", subjects[i].id}, {"group", subjects[i].group}, {"values", values}});
  }
  doc["subjects"] = rows;
  return doc.dump(2) + "\n";
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  const bool framed = std::any_of(rows.begin(), rows.end(), [](const ScoreRow& r) { return !r.frame.empty(); });
  std::ostringstream out;
  out << "id,group,score,value" << (framed ? ",frame" : "") << "\n";
  for (const auto& r : rows) {
    out << csv_field(r.id) << "," << csv_field(r.group) << "," << csv_field(r.score) << "," << format_number(r.value);
    if (framed) out << "," << csv_field(r.frame);
    out << "\n";
  }
  return out.str();
}

std::string scores_json(const std::vector<ScoreRow>& rows, const std::vector<ScoreWeights>& weights) {
  ojson doc;
  ojson list = ojson::array();
  for (const auto& r : rows) {
    ojson row = {{"id", r.id}, {"group", r.group}, {"score", r.score}, {"value", number(r.value)}};
    if (!r.frame.empty()) row["frame"] = r.frame;
    list.push_back(row);
  }
  doc["scores"] = list;
  ojson w = ojson::array();
  for (const auto& s : weights) {
    ojson entries = ojson::array();
    for (std::size_t j = 0; j < s.weights.size(); ++j) {
      entries.push_back({{"feature", s.features[j]}, {"weight", number(s.weights[j])}});
    }
    w.push_back({{"score", s.score}, {"weights", entries}});
  }
  doc["weights"] = w;
  return doc.dump(2) + "\n";
}

std::string weights_csv(const std::vector<ScoreWeights>& weights) {
  std::ostringstream out;
  out << "score,feature,weight\n";
  for (const auto& s : weights) {
    for (std::size_t j = 0; j < s.weights.size(); ++j) {
      out << csv_field(s.score) << "," << csv_field(s.features[j]) << "," << format_number(s.weights[j]) << "\n";
    }
  }
  return out.str();
}

std::vector<ScoreRow> parse_scores_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<ScoreRow> rows;
  std::size_t line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if (quoted) {
        if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (c != '\r') {
        cell += c;
      }
    }
    cells.push_back(cell);
    return cells;
  };
  auto column = [&](const char* name) -> std::ptrdiff_t {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  std::ptrdiff_t c_id = -1, c_group = -1, c_score = -1, c_value = -1, c_frame = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (header.empty()) {
      header = cells;
      c_id = column("id");
      c_group = column("group");
      c_score = column("score");
      c_value = column("value");
      c_frame = column("frame");
      if (c_id < 0 || c_group < 0 || c_score < 0 || c_value < 0) {
        throw Error(ErrorCode::parse_error, source + ":1: score table needs columns id, group, score, value");
      }
      continue;
    }
    const std::string at = source + ":" + std::to_string(line_no);
    if (cells.size() != header.size()) throw Error(ErrorCode::parse_error, at + ": wrong number of fields");
    ScoreRow row{c_frame >= 0 ? cells[static_cast<std::size_t>(c_frame)] : "", cells[static_cast<std::size_t>(c_id)],
                 cells[static_cast<std::size_t>(c_group)], cells[static_cast<std::size_t>(c_score)], 0.0};
    const std::string& v = cells[static_cast<std::size_t>(c_value)];
    try {
      std::size_t used = 0;
      row.value = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::parse_error, at + ": malformed value '" + v + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string p_with_stars(double p) {
  const std::string stars = significance_stars(p);
  return sig3(p) + (stars.empty() ? "" : "(" + stars + ")");
}

std::string comparison_csv(const std::vector<FrameComparison>& frames) {
  std::ostringstream out;
  out << "frame,score,test,method,sided,group1,n1,mean1,sd1,group2,n2,mean2,sd2,statistic,df,p_value,stars,note\n";
  for (const auto& f : frames) {
    for (const auto& r : f.rows) {
      out << csv_field(f.frame) << "," << csv_field(r.score) << "," << to_string(r.test) << ","
          << to_string(r.method) << "," << to_string(r.sidedness) << "," << csv_field(f.group1) << "," << r.n1
          << "," << format_number(r.mean1) << "," << format_number(r.sd1) << "," << csv_field(f.group2) << ","
          << r.n2 << "," << format_number(r.mean2) << "," << format_number(r.sd2) << ","
          << format_number(r.statistic) << "," << (r.df ? format_number(*r.df) : "") << ","
          << format_number(r.p_value) << "," << r.stars << "," << csv_field(r.note) << "\n";
    }
  }
  return out.str();
}

std::string comparison_json(const std::vector<FrameComparison>& frames) {
  ojson list = ojson::array();
  for (const auto& f : frames) {
    for (const auto& r : f.rows) {
      ojson row = {{"frame", f.frame},
                   {"score", r.score},
                   {"test", std::string(to_string(r.test))},
                   {"method", std::string(to_string(r.method))},
                   {"sided", std::string(to_string(r.sidedness))},
                   {"group1", {{"label", f.group1}, {"n", r.n1}, {"mean", number(r.mean1)}, {"sd", number(r.sd1)}}},
                   {"group2", {{"label", f.group2}, {"n", r.n2}, {"mean", number(r.mean2)}, {"sd", number(r.sd2)}}},
                   {"statistic", number(r.statistic)},
                   {"df", r.df ? number(*r.df) : ojson(nullptr)},
                   {"p_value", number(r.p_value)},
                   {"stars", r.stars}};
      if (!r.note.empty()) row["note"] = r.note;
      list.push_back(row);
    }
  }
  return ojson{{"comparisons", list}}.dump(2) + "\n";
}

std::string summary_table(const std::vector<FrameComparison>& frames) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [score, test] : blocks(frames)) {
    const ComparisonRow* any = nullptr;
    for (const auto& f : frames) {
      if ((any = find_row(f, score, test))) break;
    }
    if (!first) out << "\n";
    first = false;
    const std::string g1 = frames.front().group1;
    const std::string g2 = frames.front().group2;
    out << "Mean, sd, " << statistic_label(any->method) << "-values and p-values for " << score << " ("
        << to_string(test) << ")\n";
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"", g2, "", g1, "", sided_label(any->sidedness) + " test", ""});
    cells.push_back({"Frame", "mean", "sd", "mean", "sd", statistic_label(any->method) + "-values", "p-values"});
    for (const auto& f : frames) {
      const ComparisonRow* r = find_row(f, score, test);
      if (!r) continue;
      cells.push_back({f.frame, fixed(r->mean2, 2), fixed(r->sd2, 2), fixed(r->mean1, 2), fixed(r->sd1, 2),
                       fixed(r->statistic, 2), p_with_stars(r->p_value)});
    }
    out << render(cells, 2);
  }
  out << kFootnote;
  return out.str();
}

std::string pvalue_table(const std::vector<FrameComparison>& frames) {
  std::ostringstream out;
  std::vector<RequestedTest> tests;
  for (const auto& [score, test] : blocks(frames)) {
    if (std::find(tests.begin(), tests.end(), test) == tests.end()) tests.push_back(test);
  }
  bool first = true;
  for (RequestedTest test : tests) {
    if (!first) out << "\n";
    first = false;
    Sidedness sided = Sidedness::one_sided_greater;
    for (const auto& f : frames) {
      for (const auto& r : f.rows) {
        if (r.test == test) sided = r.sidedness;
      }
    }
    out << "p-values from " << (sided == Sidedness::one_sided_greater ? "one-sided" : "two-sided") << " "
        << to_string(test) << " tests\n";
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"Composite asymmetry score"};
    for (const auto& f : frames) header.push_back(f.frame);
    cells.push_back(header);
    for (const auto& [score, t] : blocks(frames)) {
      if (t != test) continue;
      std::vector<std::string> row{score};
      for (const auto& f : frames) {
        const ComparisonRow* r = find_row(f, score, test);
        row.push_back(r ? p_with_stars(r->p_value) : "");
      }
      cells.push_back(row);
    }
    out << render(cells, 1);
  }
  out << kFootnote;
  return out.str();
}

std::string uit_csv(const UitReport& report) {
  const UitResult& r = report.result;
  std::ostringstream out;
  out << "feature,name,description,v,mean_difference,pooled_sd,lower_bound,selected,V,V_crit\n";
  for (std::size_t j = 0; j < r.v.size(); ++j) {
    const FeatureLabel& label = (*r.index_map)[j];
    const bool sel = std::find(r.selected.begin(), r.selected.end(), j) != r.selected.end();
    out << j + 1 << "," << csv_field(label.column_name()) << "," << csv_field(label.describe()) << ","
        << format_number(r.v[j]) << "," << format_number(r.mean_difference[j]) << ","
        << format_number(r.pooled_sd[j]) << "," << format_number(r.lower_bounds[j]) << "," << (sel ? 1 : 0) << ","
        << format_number(r.V) << "," << format_number(r.V_crit) << "\n";
  }
  return out.str();
}

std::string uit_json(const UitReport& report) {
  const UitResult& r = report.result;
  ojson doc;
  if (report.frame) doc["frame"] = *report.frame;
  doc["group1"] = report.group1;
  doc["group2"] = report.group2;
  doc["V"] = number(r.V);
  doc["V_crit"] = number(r.V_crit);
  doc["alpha"] = number(r.alpha);
  doc["B"] = r.B;
  doc["seed"] = r.seed;
  doc["resampling"] = r.resampling == Resampling::pooled ? "pooled" : "permutation";
  ojson selected = ojson::array();
  for (std::size_t j : r.selected) {
    selected.push_back({{"feature", j + 1}, {"description", (*r.index_map)[j].describe()}});
  }
  doc["selected"] = selected;
  ojson features = ojson::array();
  for (std::size_t j = 0; j < r.v.size(); ++j) {
    ojson f = {{"feature", j + 1},
               {"name", (*r.index_map)[j].column_name()},
               {"description", (*r.index_map)[j].describe()},
               {"v", number(r.v[j])},
               {"mean_difference", number(r.mean_difference[j])},
               {"pooled_sd", number(r.pooled_sd[j])},
               {"lower_bound", number(r.lower_bounds[j])}};
    if (r.zero_variance[j]) f["note"] = "zero variance";
    features.push_back(f);
  }
  doc["features"] = features;
  return doc.dump(2) + "\n";
}

std::string uit_table(const UitReport& report) {
  const UitResult& r = report.result;
  std::ostringstream out;
  out << "Max-statistic test: " << report.group2 << " vs " << report.group1;
  if (report.frame) out << " (" << *report.frame << ")";
  out << "\n";
  out << "V = " << fixed(r.V, 4) << ", V_crit = " << fixed(r.V_crit, 4) << " (alpha " << format_number(r.alpha)
      << ", B = " << r.B << ", seed " << r.seed << ", "
      << (r.resampling == Resampling::pooled ? "pooled" : "permutation") << " resampling)\n\n";
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"j", "feature", "v", "difference", "lower bound", "selected"});
  for (std::size_t j = 0; j < r.v.size(); ++j) {
    const bool sel = std::find(r.selected.begin(), r.selected.end(), j) != r.selected.end();
    cells.push_back({std::to_string(j + 1), (*r.index_map)[j].describe(), fixed(r.v[j], 3),
                     fixed(r.mean_difference[j], 4), fixed(r.lower_bounds[j], 4), sel ? "*" : ""});
  }
  out << render(cells, 1);
  out << "\nSelected: ";
  if (r.selected.empty()) out << "none";
  for (std::size_t i = 0; i < r.selected.size(); ++i) {
    out << (i ? "; " : "") << (*r.index_map)[r.selected[i]].describe();
  }
  out << "\n";
  return out.str();
}

}  // namespace bilat
