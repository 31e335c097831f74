#include "bilat/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bilat/features.hpp"
#include "bilat/format.hpp"
#include "bilat/landmark_io.hpp"
#include "bilat/plot.hpp"
#include "bilat/random.hpp"
#include "bilat/registration.hpp"
#include "bilat/report.hpp"
#include "bilat/scores.hpp"
#include "bilat/stats.hpp"
#include "bilat/synth.hpp"

namespace bilat::cli {

namespace {

namespace fs = std::filesystem;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

void warn(const Io& io, const std::string& msg) { io.err << "bilat: warning: " << msg << "\n"; }

void emit(const Io& io, const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    io.out << text;
  } else {
    write_text(output, text);
  }
}

LandmarkFile load(const Io& io, const std::string& path, const std::string& scheme_file) {
  if (path == "-") return read_landmark_stream(io.in, "stdin");
  if (!scheme_file.empty()) return read_landmark_csv(path, scheme_file);
  if (fs::path(path).extension() == ".csv") {
    throw Error(ErrorCode::invalid_argument, "CSV input '" + path + "' needs --scheme with the sidecar file");
  }
  return read_landmark_file(path);
}

std::string frame_label(const LandmarkFile& file, const std::string& path, std::size_t index) {
  if (file.frame) return *file.frame;
  if (path != "-") return fs::path(path).stem().string();
  return "frame " + std::to_string(index + 1);
}

struct GroupSplit {
  std::string label1;
  std::string label2;
  std::vector<std::size_t> rows1;
  std::vector<std::size_t> rows2;
};

GroupSplit split_groups(const LandmarkFile& file, const std::string& group1, const std::string& group2) {
  const std::vector<std::string> labels = file.group_labels();
  GroupSplit split;
  if (!group1.empty() || !group2.empty()) {
    split.label1 = group1;
    split.label2 = group2;
    if (split.label1.empty() || split.label2.empty()) {
      for (const auto& l : labels) {
        if (l == split.label1 || l == split.label2) continue;
        (split.label1.empty() ? split.label1 : split.label2) = l;
        break;
      }
    }
  } else {
    if (labels.size() != 2) {
      throw Error(ErrorCode::invalid_argument,
                  "testing needs exactly two group labels, found " + std::to_string(labels.size()) +
                      " (use --group1/--group2 to choose)");
    }
    split.label1 = labels[0];
    split.label2 = labels[1];
  }
  for (std::size_t i = 0; i < file.subjects.size(); ++i) {
    if (file.subjects[i].group == split.label1) split.rows1.push_back(i);
    if (file.subjects[i].group == split.label2) split.rows2.push_back(i);
  }
  if (split.rows1.empty() || split.rows2.empty() || split.label1 == split.label2) {
    throw Error(ErrorCode::invalid_argument, "both groups must be present: '" + split.label1 + "' has " +
                                                 std::to_string(split.rows1.size()) + " subjects, '" +
                                                 split.label2 + "' has " + std::to_string(split.rows2.size()));
  }
  return split;
}

Cohort make_cohort(const LandmarkFile& file, const GroupSplit& split) {
  Cohort c{file.scheme, {}, {}, file.registration};
  for (std::size_t i : split.rows1) c.group1.push_back(file.subjects[i].coords);
  for (std::size_t i : split.rows2) c.group2.push_back(file.subjects[i].coords);
  return c;
}

std::vector<double> read_weights_file(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<double> w;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        w.push_back(v);
      } catch (const std::logic_error&) {
        if (w.empty() && line_no == 1) break;  // header line
        throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line_no) + ": malformed weight '" + tok + "'");
      }
    }
  }
  if (w.empty()) throw Error(ErrorCode::parse_error, path + ": no weights found");
  return w;
}

struct ScoreRequest {
  ScoreName name;
  bool adaptive;
};

ScoreRequest parse_score_request(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse_score_name(text), false};
  if (text.substr(colon + 1) != "adaptive") {
    throw Error(ErrorCode::unknown_spec, "unknown score modifier in '" + text + "' (only ':adaptive')");
  }
  return {parse_score_name(text.substr(0, colon)), true};
}

// Builds the score specs for one file. `weights` is equal, adaptive or a file path.
std::vector<ScoreSpec> build_specs(const LandmarkFile& file, const std::vector<std::string>& scores,
                                   const std::string& weights, std::vector<ScoreWeights>* described) {
  std::optional<std::vector<double>> file_weights;
  if (weights != "equal" && weights != "adaptive") file_weights = read_weights_file(weights);
  std::vector<ScoreSpec> specs;
  for (const auto& text : scores) {
    const ScoreRequest req = parse_score_request(text);
    const bool star = req.name == ScoreName::star_l1 || req.name == ScoreName::star_l2;
    const bool adaptive = req.adaptive || weights == "adaptive";
    std::vector<double> w;
    WeightSource source = WeightSource::equal;
    if (adaptive) {
      if (file.registration == Registration::raw) {
        throw Error(ErrorCode::not_registered, "adaptive weights need registered data; run 'bilat register' first");
      }
      const RegisteredDataset reg = preregistered(file.configurations(), file.scheme, RegistrationMode::basis);
      w = adaptive_weights(reg, file.scheme, star ? WeightLayout::landmark : WeightLayout::coordinatewise).values();
      source = WeightSource::adaptive;
    } else if (file_weights) {
      w = *file_weights;
      source = WeightSource::user;
    }
    specs.push_back(make_score_spec(req.name, file.scheme, file.dimension, w, source));
    if (req.name == ScoreName::star_l1) {
      // The linear landmark-level score is reported raw and halved.
      std::vector<double> half = specs.back().weights.values();
      for (double& x : half) x *= 0.5;
      ScoreSpec scaled{specs.back().family, specs.back().psi, WeightVector(std::move(half), source),
                       specs.back().name + "-scaled"};
      specs.push_back(std::move(scaled));
    }
    if (described) {
      const FeatureIndexMap map = star ? axis_index_map(file.scheme) : basis_index_map(file.scheme, file.dimension);
      for (std::size_t k = described->size(); k < specs.size(); ++k) {
        ScoreWeights sw{specs[k].name, {}, specs[k].weights.values()};
        for (const auto& label : *map) sw.features.push_back(label.column_name());
        described->push_back(std::move(sw));
      }
    }
  }
  return specs;
}

std::vector<SubjectRef> subject_refs(const LandmarkFile& file) {
  std::vector<SubjectRef> refs;
  for (const auto& s : file.subjects) refs.push_back({s.id, s.group});
  return refs;
}

std::pair<std::size_t, double> parse_assignment(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  try {
    if (eq == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const long long j = std::stoll(text.substr(0, eq), &used);
    if (used != eq || j < 1) throw std::invalid_argument(text);
    const std::string v = text.substr(eq + 1);
    const double value = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(text);
    return {static_cast<std::size_t>(j - 1), value};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_argument, std::string(flag) + " expects FEATURE=VALUE with FEATURE >= 1, got '" +
                                                 text + "'");
  }
}

bool at_least(Registration have, RegistrationMode want) {
  if (want == RegistrationMode::axis) return have != Registration::raw;
  return have == Registration::basis;
}

// ---------------------------------------------------------------- options

struct Common {
  std::string input;
  std::string output;
  std::string scheme;
  std::string format = "csv";
};

struct RegisterOpts : Common {
  std::string mode = "basis";
  std::string hint;
  std::vector<std::size_t> up;
};

struct FeatureOpts : Common {
  std::string kind = "absolute";
};

struct ScoreOpts : Common {
  std::vector<std::string> scores;
  std::string weights = "equal";
  std::string weights_output;
};

struct TestOpts {
  std::vector<std::string> inputs;
  std::string output;
  std::string scheme;
  std::string format = "csv";
  std::vector<std::string> scores;
  std::string weights = "equal";
  std::vector<std::string> methods;
  std::string sided = "one";
  std::string layout = "auto";
  std::string group1, group2;
};

struct SelectOpts : Common {
  std::size_t boot_reps = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string resampling = "pooled";
  std::string group1, group2;
};

struct PlotOpts {
  std::string input;
  std::string output;
  std::string format = "svg";
  std::string group1, group2;
  std::size_t width = 50;
};

struct SimulateOpts {
  std::string output;
  std::uint64_t seed = 1;
  std::size_t pairs = 11, solos = 2, dim = 3, n1 = 12, n2 = 13;
  double sigma = 0.05;
  std::vector<std::string> offsets;
  std::vector<std::string> plants;
  std::string nuisance = "on";
  std::string layout = "sequential";
  std::string frame;
  std::string registration = "auto";
};

// ---------------------------------------------------------------- commands

void cmd_register(const RegisterOpts& o, const Io& io) {
  LandmarkFile file = load(io, o.input, o.scheme);
  const RegistrationMode mode = o.mode == "axis" ? RegistrationMode::axis : RegistrationMode::basis;
  if (at_least(file.registration, mode)) {
    warn(io, "input is already " + std::string(to_string(file.registration)) +
                 "-registered; coordinates left unchanged");
    emit(io, o.output, to_landmark_json(file));
    return;
  }
  std::optional<Configuration> hint;
  if (!o.hint.empty()) {
    const LandmarkFile h = read_landmark_file(o.hint);
    if (h.mean_shape) {
      hint = *h.mean_shape;
    } else if (!h.subjects.empty()) {
      hint = h.subjects.front().coords;
    } else {
      throw Error(ErrorCode::empty_input, "hint file '" + o.hint + "' holds no configuration");
    }
  }
  MidplaneOptions options;
  for (std::size_t k : o.up) {
    if (k < 1 || k > file.scheme.landmark_count()) {
      throw Error(ErrorCode::index_out_of_range, "--up landmark " + std::to_string(k) + " outside 1.." +
                                                     std::to_string(file.scheme.landmark_count()));
    }
    options.up_landmarks.push_back(k - 1);
  }
  const std::vector<Configuration> configs = file.configurations();
  const RegisteredDataset reg = estimate_midplane(configs, file.scheme, mode, hint, options);
  file.registration = mode == RegistrationMode::axis ? Registration::axis : Registration::basis;
  file.provenance = std::string(to_string(reg.provenance));
  file.plane = reg.plane;
  file.mean_shape = reg.mean_shape;
  for (std::size_t i = 0; i < file.subjects.size(); ++i) {
    file.subjects[i].coords = reg.configs[i];
    const Plane raw = reg.raw_plane(i);
    nlohmann::json normal = nlohmann::json::array();
    for (Eigen::Index m = 0; m < raw.normal().size(); ++m) normal.push_back(raw.normal()(m));
    file.subjects[i].extra["raw_midplane"] = {{"normal", normal}, {"offset", raw.offset()}};
  }
  emit(io, o.output, to_landmark_json(file));
}

void cmd_features(const FeatureOpts& o, const Io& io) {
  const LandmarkFile file = load(io, o.input, o.scheme);
  std::vector<FeatureVector> features;
  if (o.kind == "landmark") {
    if (file.registration == Registration::raw) {
      throw Error(ErrorCode::not_registered, "landmark features need registered data; run 'bilat register' first");
    }
    for (const auto& s : file.subjects) features.push_back(landmark_features(s.coords, file.scheme));
  } else {
    if (file.registration != Registration::basis) {
      throw Error(ErrorCode::not_registered, "coordinatewise features need basis-registered data, got " +
                                                 std::string(to_string(file.registration)));
    }
    for (const auto& s : file.subjects) {
      FeatureVector d = signed_features(s.coords, file.scheme);
      features.push_back(o.kind == "signed" ? std::move(d) : absolute_features(d));
    }
  }
  const auto refs = subject_refs(file);
  emit(io, o.output, o.format == "json" ? features_json(refs, features, file.frame) : features_csv(refs, features));
}

void cmd_score(const ScoreOpts& o, const Io& io) {
  const LandmarkFile file = load(io, o.input, o.scheme);
  std::vector<ScoreWeights> weights;
  const std::vector<std::string> names = o.scores.empty() ? std::vector<std::string>{"l1"} : o.scores;
  const std::vector<ScoreSpec> specs = build_specs(file, names, o.weights, &weights);
  const Cohort all{file.scheme, file.configurations(), {}, file.registration};
  std::vector<ScoreRow> rows;
  for (const auto& spec : specs) {
    const GroupScores scores = score_cohort(all, spec);
    for (std::size_t i = 0; i < file.subjects.size(); ++i) {
      rows.push_back({file.frame.value_or(""), file.subjects[i].id, file.subjects[i].group, spec.name,
                      scores.group1[i]});
    }
  }
  if (!o.weights_output.empty()) write_text(o.weights_output, weights_csv(weights));
  emit(io, o.output, o.format == "json" ? scores_json(rows, weights) : scores_csv(rows));
}

void cmd_test(const TestOpts& o, const Io& io) {
  if (o.inputs.empty()) throw Error(ErrorCode::invalid_argument, "--input is required");
  const std::vector<std::string> names = o.scores.empty() ? std::vector<std::string>{"l1"} : o.scores;
  std::vector<RequestedTest> tests;
  for (const auto& m : o.methods.empty() ? std::vector<std::string>{"pooled-t"} : o.methods) {
    tests.push_back(parse_requested_test(m));
  }
  const Sidedness sided = o.sided == "two" ? Sidedness::two_sided : Sidedness::one_sided_greater;
  std::vector<FrameComparison> frames;
  for (std::size_t f = 0; f < o.inputs.size(); ++f) {
    const LandmarkFile file = load(io, o.inputs[f], o.scheme);
    const GroupSplit split = split_groups(file, o.group1, o.group2);
    const std::vector<ScoreSpec> specs = build_specs(file, names, o.weights, nullptr);
    frames.push_back({frame_label(file, o.inputs[f], f), split.label1, split.label2,
                      run_comparison(make_cohort(file, split), specs, tests, sided)});
  }
  std::string text;
  if (o.format == "json") {
    text = comparison_json(frames);
  } else if (o.format == "table") {
    std::string layout = o.layout;
    if (layout == "auto") layout = names.size() > 1 ? "pvalues" : "summary";
    text = layout == "both" ? summary_table(frames) + "\n" + pvalue_table(frames)
           : layout == "pvalues" ? pvalue_table(frames)
                                 : summary_table(frames);
  } else {
    text = comparison_csv(frames);
  }
  emit(io, o.output, text);
}

void cmd_select(const SelectOpts& o, const Io& io) {
  const LandmarkFile file = load(io, o.input, o.scheme);
  const GroupSplit split = split_groups(file, o.group1, o.group2);
  const TwoGroupDataset dataset = absolute_dataset(make_cohort(file, split));
  BootstrapOptions options{o.resampling == "permutation" ? Resampling::permutation : Resampling::pooled, o.workers};
  UitReport report{bootstrap_critical(dataset, o.boot_reps, o.alpha, o.seed, options), split.label1, split.label2,
                   file.frame};
  for (std::size_t j = 0; j < report.result.zero_variance.size(); ++j) {
    if (report.result.zero_variance[j]) {
      warn(io, "feature " + (*report.result.index_map)[j].describe() + " has zero variance; v set to 0");
    }
  }
  const std::string text = o.format == "json" ? uit_json(report) : o.format == "table" ? uit_table(report)
                                                                                       : uit_csv(report);
  emit(io, o.output, text);
}

void cmd_plot(const PlotOpts& o, const Io& io) {
  std::string text;
  if (o.input == "-") {
    std::ostringstream ss;
    ss << io.in.rdbuf();
    text = ss.str();
  } else {
    text = read_text(o.input);
  }
  const std::vector<ScoreRow> rows = parse_scores_csv(text, o.input == "-" ? "stdin" : o.input);
  PlotGroups groups;
  if (!o.group1.empty()) groups.group1 = o.group1;
  if (!o.group2.empty()) groups.group2 = o.group2;
  emit(io, o.output, o.format == "ascii" ? dot_plot_ascii(rows, groups, o.width) : dot_plot_svg(rows, groups));
}

void cmd_simulate(const SimulateOpts& o, const Io& io) {
  PairingScheme scheme = o.layout == "smile" ? smile_scheme() : sequential_scheme(o.pairs, o.solos);
  if (o.layout == "smile" && (o.pairs != 11 || o.solos != 2)) {
    throw Error(ErrorCode::invalid_argument, "the smile layout has 11 pairs and 2 solos");
  }
  if (o.n1 < 1 || o.n2 < 1) throw Error(ErrorCode::invalid_argument, "group sizes must be positive");
  const std::size_t j_count = scheme.basis_feature_count(o.dim);
  std::vector<double> offsets(j_count, 0.0);
  bool any = false;
  for (const auto& text : o.offsets) {
    const auto [j, v] = parse_assignment(text, "--offset");
    if (j >= j_count) throw Error(ErrorCode::index_out_of_range, "--offset feature outside 1.." + std::to_string(j_count));
    offsets[j] += v;
    any = true;
  }
  for (const auto& text : o.plants) {
    const auto [j, k] = parse_assignment(text, "--plant");
    if (j >= j_count) throw Error(ErrorCode::index_out_of_range, "--plant feature outside 1.." + std::to_string(j_count));
    offsets[j] += k * null_feature_sd(scheme, o.dim, j, o.sigma);
    any = true;
  }
  Configuration tmpl = make_symmetric_template(scheme, o.dim, substream_seed(o.seed, ~std::uint64_t{0}));
  SynthSpec spec{scheme, tmpl, o.sigma, any ? offsets : std::vector<double>{}, o.n1, o.n2, o.nuisance == "on",
                 o.seed};
  const SynthDataset data = generate_dataset(spec);
  LandmarkFile file{o.dim, scheme, data.registration, {}, {}, {}, {}, {}, nlohmann::json::object()};
  if (!o.frame.empty()) file.frame = o.frame;
  if (data.registration == Registration::basis) file.provenance = "known";
  nlohmann::json truth = {{"seed", o.seed}, {"noise_sigma", o.sigma}, {"offsets", offsets}};
  file.extra["synthetic"] = truth;
  for (std::size_t i = 0; i < data.configs.size(); ++i) {
    file.subjects.push_back({data.ids[i], std::to_string(data.groups[i]), data.configs[i], nlohmann::json::object()});
  }
  emit(io, o.output, to_landmark_json(file));
}

void add_common(CLI::App* cmd, Common& c, bool formats) {
  cmd->add_option("-i,--input", c.input, "Landmark file (JSON, or CSV with --scheme; '-' for stdin)")->required();
  cmd->add_option("-o,--output", c.output, "Output file (default stdout)");
  cmd->add_option("--scheme", c.scheme, "Sidecar JSON with the pairing scheme for CSV input");
  if (formats) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const Io io{in, out, err};
  CLI::App app{"Bilateral asymmetry analysis of landmark data", "bilat"};
  app.require_subcommand(1);
  app.fallthrough();
  bool error_json = false;
  app.add_flag("--error-json", error_json, "Write errors to stderr as JSON");

  RegisterOpts reg;
  auto* c_reg = app.add_subcommand("register", "Estimate the midplane and register configurations");
  add_common(c_reg, reg, false);
  c_reg->add_option("--mode", reg.mode, "axis or basis")->check(CLI::IsMember({"axis", "basis"}));
  c_reg->add_option("--hint", reg.hint, "Landmark file whose mean shape (or first subject) fixes the in-plane axes");
  c_reg->add_option("--up", reg.up, "Landmarks (1-based) whose centroid points along +coordinate 2")
      ->delimiter(',');

  FeatureOpts feat;
  auto* c_feat = app.add_subcommand("features", "Per-subject elementary asymmetry features");
  add_common(c_feat, feat, true);
  c_feat->add_option("--kind", feat.kind, "signed, absolute or landmark")
      ->check(CLI::IsMember({"signed", "absolute", "landmark"}));

  ScoreOpts sc;
  auto* c_score = app.add_subcommand("score", "Composite asymmetry scores per subject");
  add_common(c_score, sc, true);
  c_score->add_option("--score", sc.scores, "l1, l2, star-l1, star-l2, bock; append :adaptive for adaptive weights");
  c_score->add_option("--weights", sc.weights, "equal, adaptive, or a file of weights");
  c_score->add_option("--weights-output", sc.weights_output, "Write the weights used as CSV");

  TestOpts te;
  auto* c_test = app.add_subcommand("test", "Two-group tests on composite scores");
  c_test->add_option("-i,--input", te.inputs, "Landmark file per frame (repeatable)")->required();
  c_test->add_option("-o,--output", te.output, "Output file (default stdout)");
  c_test->add_option("--scheme", te.scheme, "Sidecar JSON with the pairing scheme for CSV input");
  c_test->add_option("--format", te.format, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
  c_test->add_option("--score", te.scores, "Scores to compare (repeatable)");
  c_test->add_option("--weights", te.weights, "equal, adaptive, or a file of weights");
  c_test->add_option("--method", te.methods, "pooled-t, welch-t or mann-whitney (repeatable)");
  c_test->add_option("--sided", te.sided, "one or two")->check(CLI::IsMember({"one", "two"}));
  c_test->add_option("--layout", te.layout, "Table layout: auto, summary, pvalues or both")
      ->check(CLI::IsMember({"auto", "summary", "pvalues", "both"}));
  c_test->add_option("--group1", te.group1, "Label of the reference group");
  c_test->add_option("--group2", te.group2, "Label of the group expected to be more asymmetric");

  SelectOpts se;
  auto* c_sel = app.add_subcommand("select", "Max-statistic test with bootstrap calibration and feature selection");
  add_common(c_sel, se, false);
  c_sel->add_option("--format", se.format, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
  c_sel->add_option("--boot-reps", se.boot_reps, "Bootstrap replicates");
  c_sel->add_option("--alpha", se.alpha, "Level");
  c_sel->add_option("--seed", se.seed, "Random seed");
  c_sel->add_option("--workers", se.workers, "Worker threads")->check(CLI::PositiveNumber);
  c_sel->add_option("--resampling", se.resampling, "pooled or permutation")
      ->check(CLI::IsMember({"pooled", "permutation"}));
  c_sel->add_option("--group1", se.group1, "Label of the reference group");
  c_sel->add_option("--group2", se.group2, "Label of the group expected to be more asymmetric");

  PlotOpts pl;
  auto* c_plot = app.add_subcommand("plot", "Two-row dot plots from a score table");
  c_plot->add_option("-i,--input", pl.input, "Score table CSV ('-' for stdin)")->required();
  c_plot->add_option("-o,--output", pl.output, "Output file (default stdout)");
  c_plot->add_option("--format", pl.format, "svg or ascii")->check(CLI::IsMember({"svg", "ascii"}));
  c_plot->add_option("--group1", pl.group1, "Bottom-row group");
  c_plot->add_option("--group2", pl.group2, "Top-row group");
  c_plot->add_option("--width", pl.width, "Bins in ascii plots")->check(CLI::Range(2, 400));

  SimulateOpts si;
  auto* c_sim = app.add_subcommand("simulate", "Synthetic two-group landmark data");
  c_sim->add_option("-o,--output", si.output, "Output file (default stdout)");
  c_sim->add_option("--seed", si.seed, "Random seed");
  c_sim->add_option("--pairs", si.pairs, "Landmark pairs");
  c_sim->add_option("--solos", si.solos, "Solo landmarks");
  c_sim->add_option("--dim", si.dim, "Dimension")->check(CLI::Range(1, 10));
  c_sim->add_option("--n1", si.n1, "Group 1 size");
  c_sim->add_option("--n2", si.n2, "Group 2 size");
  c_sim->add_option("--sigma", si.sigma, "Landmark noise standard deviation")->check(CLI::NonNegativeNumber);
  c_sim->add_option("--offset", si.offsets, "FEATURE=SHIFT on a signed feature of group 2 (repeatable)");
  c_sim->add_option("--plant", si.plants, "FEATURE=K shift of K null standard deviations (repeatable)");
  c_sim->add_option("--nuisance", si.nuisance, "Random rigid motion per subject")->check(CLI::IsMember({"on", "off"}));
  c_sim->add_option("--layout", si.layout, "sequential or smile")->check(CLI::IsMember({"sequential", "smile"}));
  c_sim->add_option("--frame", si.frame, "Frame label");

  auto report_error = [&](std::string_view code, const std::string& message) {
    if (error_json) {
      err << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
    } else {
      err << "bilat: error: " << message << "\n";
    }
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_json = error_json || std::find(args.begin(), args.end(), "--error-json") != args.end();
    report_error("UsageError", e.what());
    return 2;
  }

  try {
    if (c_reg->parsed()) cmd_register(reg, io);
    if (c_feat->parsed()) cmd_features(feat, io);
    if (c_score->parsed()) cmd_score(sc, io);
    if (c_test->parsed()) cmd_test(te, io);
    if (c_sel->parsed()) cmd_select(se, io);
    if (c_plot->parsed()) cmd_plot(pl, io);
    if (c_sim->parsed()) cmd_simulate(si, io);
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace bilat::cli
