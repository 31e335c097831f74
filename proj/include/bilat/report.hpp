#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilat/config_model.hpp"
#include "bilat/scores.hpp"
#include "bilat/stats.hpp"

namespace bilat {

std::string csv_field(const std::string& s);

struct SubjectRef {
  std::string id;
  std::string group;
};

std::string features_csv(const std::vector<SubjectRef>& subjects, const std::vector<FeatureVector>& features);
std::string features_json(const std::vector<SubjectRef>& subjects, const std::vector<FeatureVector>& features,
                          const std::optional<std::string>& frame);

struct ScoreRow {
  std::string frame;  // empty when the input carried no frame label
  std::string id;
  std::string group;
  std::string score;
  double value;
};

struct ScoreWeights {
  std::string score;
  std::vector<std::string> features;
  std::vector<double> weights;
};

/// Columns id, group, score, value (and frame when any row has one).
std::string scores_csv(const std::vector<ScoreRow>& rows);
std::string scores_json(const std::vector<ScoreRow>& rows, const std::vector<ScoreWeights>& weights);
std::string weights_csv(const std::vector<ScoreWeights>& weights);
/// Reads a table written by scores_csv.
std::vector<ScoreRow> parse_scores_csv(const std::string& text, const std::string& source = "input");

struct FrameComparison {
  std::string frame;
  std::string group1;
  std::string group2;
  std::vector<ComparisonRow> rows;
};

std::string comparison_csv(const std::vector<FrameComparison>& frames);
std::string comparison_json(const std::vector<FrameComparison>& frames);
/// Frames as rows; group 2 mean and sd, group 1 mean and sd, statistic and p. One block per score and test.
std::string summary_table(const std::vector<FrameComparison>& frames);
/// Scores as rows, frames as columns, p-values with stars. One block per test.
std::string pvalue_table(const std::vector<FrameComparison>& frames);
/// "0.0004(***)"-style cell.
std::string p_with_stars(double p);

struct UitReport {
  UitResult result;
  std::string group1;
  std::string group2;
  std::optional<std::string> frame;
};

std::string uit_csv(const UitReport& report);
std::string uit_json(const UitReport& report);
std::string uit_table(const UitReport& report);

}  // namespace bilat
