#include "cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/run_config.hpp"
#include "herdsig/audio_io.hpp"
#include "herdsig/classifiers/model.hpp"
#include "herdsig/error.hpp"
#include "herdsig/eval.hpp"
#include "herdsig/feature_table.hpp"
#include "herdsig/fileutil.hpp"
#include "herdsig/ontology.hpp"
#include "herdsig/parallel.hpp"
#include "herdsig/pipeline.hpp"
#include "herdsig/segmentation.hpp"
#include "herdsig/svg.hpp"
#include "herdsig/synth.hpp"
#include "herdsig/textstats.hpp"

namespace herdsig::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPowerOfTwoSize:
    case ErrorCode::NotStandardized:
    case ErrorCode::DimensionMismatch:
      return kExitInternal;
    default:
      return kExitMalformed;
  }
}

void diagnose(const std::string& context, const std::string& message) {
  std::cerr << kToolName << ": " << (context.empty() ? "" : context + ": ") << message << '\n';
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    diagnose("", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    diagnose("internal error", e.what());
    return kExitInternal;
  }
}

std::size_t resolve_threads(std::size_t requested) { return requested > 0 ? requested : default_threads(); }

// Options shared by the audio subcommands.
struct FrameOptions {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  std::string window = "hann";

  void add(CLI::App* app) {
    app->add_option("--frame-ms", frame_ms, "Analysis frame length in ms")->capture_default_str();
    app->add_option("--hop-ms", hop_ms, "Frame hop in ms")->capture_default_str();
    app->add_option("--window", window, "Analysis window")
        ->check(CLI::IsMember({"hann", "hamming", "rectangular"}))
        ->capture_default_str();
  }
  FrameConfig resolve() const { return {frame_ms, hop_ms, parse_window_kind(window)}; }
  ojson echo() const { return {{"frame_ms", frame_ms}, {"hop_ms", hop_ms}, {"window", window}}; }
};

struct VadOptions {
  VadConfig vad;

  void add(CLI::App* app) {
    app->add_option("--vad-threshold-db", vad.threshold_db, "Activity threshold in dBFS")->capture_default_str();
    app->add_option("--hang-ms", vad.hang_ms, "Hang time after the level drops")->capture_default_str();
    app->add_option("--min-event-ms", vad.min_event_ms, "Shortest kept event")->capture_default_str();
    app->add_option("--merge-gap-ms", vad.merge_gap_ms, "Gaps up to this length are bridged")->capture_default_str();
  }
  ojson echo() const {
    return {{"threshold_db", vad.threshold_db},
            {"hang_ms", vad.hang_ms},
            {"min_event_ms", vad.min_event_ms},
            {"merge_gap_ms", vad.merge_gap_ms}};
  }
};

struct InputItem {
  fs::path path;
  std::string source_id;
  std::optional<CallLabel> label;
};

bool has_wav_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

// A manifest CSV, a directory of WAV files, or one WAV file; sorted by path.
std::vector<InputItem> resolve_inputs(const fs::path& input) {
  std::vector<InputItem> items;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file() && has_wav_extension(entry.path())) {
        items.push_back({entry.path(), entry.path().filename().generic_string(), std::nullopt});
      }
    }
  } else if (!fs::exists(input)) {
    throw Error(ErrorCode::IoFailure, "no such input: " + input.string());
  } else if (input.extension() == ".csv") {
    const auto base = input.parent_path();
    for (const auto& e : read_manifest(input).entries) {
      const auto rel = e.wav_path.lexically_relative(base);
      const bool inside = !rel.empty() && *rel.begin() != "..";
      items.push_back({e.wav_path, inside ? rel.generic_string() : e.wav_path.generic_string(), e.label});
    }
  } else {
    items.push_back({input, input.filename().generic_string(), std::nullopt});
  }
  std::sort(items.begin(), items.end(), [](const InputItem& a, const InputItem& b) { return a.path < b.path; });
  return items;
}

struct FileOutcome {
  std::optional<std::string> error;
  int code = kExitOk;
};

// Runs fn on every input in parallel; failures are reported per file in
// input order and folded into one exit code (internal errors dominate).
template <typename Fn>
int for_each_input(const std::vector<InputItem>& items, std::size_t threads, Fn&& fn) {
  std::vector<FileOutcome> outcomes(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const Error& e) {
      outcomes[i] = {e.what(), exit_code(e.code())};
    } catch (const std::exception& e) {
      outcomes[i] = {std::string("internal error: ") + e.what(), kExitInternal};
    }
  });
  int code = kExitOk;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!outcomes[i].error) continue;
    diagnose(items[i].path.string(), *outcomes[i].error);
    if (outcomes[i].code == kExitInternal || code == kExitOk) code = outcomes[i].code;
  }
  return code;
}

AudioClip load_input(const InputItem& item) {
  AudioClip clip = load_wav(item.path);
  clip.source_id = item.source_id;
  return clip;
}

std::vector<SequenceEntry> load_sequences(const std::string& path) {
  return parse_sequences(read_text(path));
}

// extract ---------------------------------------------------------------------

struct ExtractArgs {
  std::string input;
  std::string output = "features.csv";
  std::string sequences;
  bool whole_clip = false;
  bool reduce_noise = false;
  std::optional<double> normalize_peak;
  std::size_t threads = 0;
  FrameOptions frame;
  VadOptions vad;
};

int cmd_extract(const ExtractArgs& a) {
  ExtractOptions opt;
  opt.frame = a.frame.resolve();
  opt.vad = a.vad.vad;
  opt.whole_clip = a.whole_clip;
  opt.reduce_noise = a.reduce_noise;
  opt.normalize_peak = a.normalize_peak;
  opt.vad.validate();
  opt.frame.validate(kMinSampleRate);

  const auto items = resolve_inputs(a.input);
  const std::size_t threads = resolve_threads(a.threads);
  std::vector<std::vector<ExtractedEvent>> results(items.size());
  const int code = for_each_input(items, threads, [&](std::size_t i) {
    results[i] = extract_clip(load_input(items[i]), items[i].label, opt);
  });

  FeatureTable table;
  std::vector<SequenceEntry> sequences;
  for (auto& events : results) {
    for (auto& e : events) {
      table.rows.push_back(std::move(e.row));
      sequences.push_back(std::move(e.sequence));
    }
  }
  write_file_atomic(a.output, format_feature_csv(table));
  if (!a.sequences.empty()) write_file_atomic(a.sequences, format_sequences(sequences));

  RunConfig run{"extract"};
  run.settings = {{"input", a.input},
                  {"output", a.output},
                  {"sequences", a.sequences},
                  {"whole_clip", a.whole_clip},
                  {"reduce_noise", a.reduce_noise},
                  {"normalize_peak", a.normalize_peak ? ojson(*a.normalize_peak) : ojson(nullptr)},
                  {"threads", threads},
                  {"frame", a.frame.echo()},
                  {"vad", a.vad.echo()},
                  {"files", items.size()},
                  {"rows", table.rows.size()}};
  write_run_config(output_dir(a.output), run);
  return code;
}

// segment ---------------------------------------------------------------------

struct SegmentArgs {
  std::string input;
  std::string output = "events.csv";
  std::string stats;
  std::size_t threads = 0;
  FrameOptions frame;
  VadOptions vad;
};

ojson stats_json(const TemporalStats& st) {
  const auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  return {{"event_count", st.event_count},
          {"total_span_s", st.total_span_s},
          {"vocalization_rate_per_min", st.vocalization_rate},
          {"mean_interval_s", opt(st.mean_interval_s)},
          {"min_interval_s", opt(st.min_interval_s)},
          {"max_interval_s", opt(st.max_interval_s)}};
}

int cmd_segment(const SegmentArgs& a) {
  const FrameConfig frame = a.frame.resolve();
  a.vad.vad.validate();
  frame.validate(kMinSampleRate);
  const auto items = resolve_inputs(a.input);
  const std::size_t threads = resolve_threads(a.threads);
  std::vector<std::vector<VocalEvent>> events(items.size());
  std::vector<double> spans(items.size(), 0.0);
  const int code = for_each_input(items, threads, [&](std::size_t i) {
    const auto clip = load_input(items[i]);
    spans[i] = clip.duration_s();
    events[i] = detect_events(clip, frame, a.vad.vad);
  });

  std::vector<VocalEvent> all;
  ojson per_source = ojson::array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (spans[i] > 0.0) {
      ojson entry = {{"source_id", items[i].source_id}};
      entry["stats"] = stats_json(temporal_stats(events[i], spans[i]));
      per_source.push_back(std::move(entry));
    }
    for (auto& e : events[i]) {
      e.samples.clear();
      all.push_back(std::move(e));
    }
  }
  write_file_atomic(a.output, format_events_csv(all));
  if (!a.stats.empty()) write_file_atomic(a.stats, ojson{{"sources", per_source}}.dump(2) + "\n");

  RunConfig run{"segment"};
  run.settings = {{"input", a.input},   {"output", a.output},     {"stats", a.stats},
                  {"threads", threads}, {"frame", a.frame.echo()}, {"vad", a.vad.echo()},
                  {"files", items.size()}, {"events", all.size()}};
  write_run_config(output_dir(a.output), run);
  return code;
}

// classify --------------------------------------------------------------------

struct ClassifyArgs {
  std::string input;
  std::string output = "predictions.csv";
  std::string mode = "ontology";
  std::string rules;
  std::string model;
  std::string sequences;
};

std::string prediction_line(const FeatureRow& row, CallLabel label, double score) {
  return csv_escape(row.source_id) + "," + format_g6(row.start_s) + "," + label_code(label) + "," +
         format_g6(score) + "," + polarity_name(polarity(label)) + "\n";
}

int cmd_classify(const ClassifyArgs& a) {
  const auto table = read_feature_csv(a.input);
  std::string out = "source_id,start_s,label,score,polarity\n";
  std::size_t written = 0, skipped = 0;
  if (a.mode == "ontology") {
    const OntologyRules rules = a.rules.empty() ? OntologyRules{} : load_rules(a.rules);
    rules.validate();
    const std::size_t i_f0 = feature_index("f0_mean");
    const std::size_t i_db = feature_index("amplitude_db");
    const std::size_t i_dur = feature_index("duration_s");
    for (const auto& row : table.rows) {
      const auto& v = row.values;
      if (!v[i_f0] || !v[i_db] || !v[i_dur]) {
        diagnose(row.source_id, "no pitch, loudness or duration; row not classified");
        ++skipped;
        continue;
      }
      const auto p = classify(*v[i_f0], *v[i_db], *v[i_dur], rules);
      out += prediction_line(row, p.label, p.score);
      ++written;
    }
  } else {
    if (a.model.empty()) throw Error(ErrorCode::InvalidArgument, "--mode model needs --model");
    const auto model = ml::load_model(a.model);
    std::optional<std::vector<SequenceEntry>> seqs;
    if (!a.sequences.empty()) seqs = load_sequences(a.sequences);
    const auto scored = ml::predict_rows(model, table, seqs ? &*seqs : nullptr);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      out += prediction_line(table.rows[i], scored[i].label == 1 ? CallLabel::HFC : CallLabel::LFC, scored[i].score);
      ++written;
    }
  }
  write_file_atomic(a.output, out);

  RunConfig run{"classify"};
  run.settings = {{"input", a.input}, {"output", a.output},       {"mode", a.mode},  {"rules", a.rules},
                  {"model", a.model}, {"sequences", a.sequences}, {"rows", written}, {"skipped", skipped}};
  write_run_config(output_dir(a.output), run);
  return kExitOk;
}

// train -----------------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string output = "model.json";
  std::string kind = "rf";
  std::string sequences;
  bool full_features = false;
  bool balance = false;
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  std::size_t threads = 0;
  ml::ForestParams forest;
  ml::SvmParams svm;
  ml::RnnParams rnn;
  bool verbose = false;
};

int cmd_train(const TrainArgs& a) {
  const auto table = read_feature_csv(a.input);
  ml::TrainOptions opt;
  opt.kind = ml::parse_model_kind(a.kind);
  opt.columns = a.full_features ? feature_names() : ml::core_feature_set();
  opt.forest = a.forest;
  opt.forest.threads = resolve_threads(a.threads);
  opt.svm = a.svm;
  opt.rnn = a.rnn;
  opt.seed = a.seed;
  opt.balance = a.balance;
  opt.test_fraction = a.test_fraction;
  std::optional<std::vector<SequenceEntry>> seqs;
  if (!a.sequences.empty()) seqs = load_sequences(a.sequences);
  const auto model = ml::train_model(table, seqs ? &*seqs : nullptr, opt);
  write_file_atomic(a.output, ml::model_to_json(model));
  if (a.verbose) {
    std::cerr << kToolName << ": trained " << a.kind << " on " << model.split.n_rows - model.split.test_rows.size()
              << " rows, " << model.split.test_rows.size() << " held out\n";
  }

  RunConfig run{"train"};
  run.settings = {{"input", a.input},
                  {"output", a.output},
                  {"kind", a.kind},
                  {"sequences", a.sequences},
                  {"columns", opt.columns},
                  {"balance", a.balance},
                  {"seed", a.seed},
                  {"test_fraction", a.test_fraction},
                  {"forest", {{"trees", a.forest.n_trees}, {"max_depth", a.forest.max_depth}, {"min_leaf", a.forest.min_leaf}}},
                  {"svm", {{"c", a.svm.c}, {"epochs", a.svm.epochs}}},
                  {"rnn",
                   {{"hidden", a.rnn.hidden},
                    {"epochs", a.rnn.epochs},
                    {"learning_rate", a.rnn.learning_rate},
                    {"clip_norm", a.rnn.clip_norm},
                    {"max_steps", a.rnn.max_steps}}}};
  write_run_config(output_dir(a.output), run);
  return kExitOk;
}

// evaluate --------------------------------------------------------------------

struct EvaluateArgs {
  std::string input;
  std::string model;
  std::string sequences;
  std::string report = "report.json";
  std::string roc = "roc.csv";
  std::string table;
  std::string roc_plot;
  std::string importance_plot;
  bool all_rows = false;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto model = ml::load_model(a.model);
  const auto table = read_feature_csv(a.input);
  std::optional<std::vector<SequenceEntry>> seqs;
  if (!a.sequences.empty()) seqs = load_sequences(a.sequences);
  const auto scored = ml::predict_rows(model, table, seqs ? &*seqs : nullptr);

  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].label) labeled.push_back(i);
  }
  if (labeled.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no labeled rows to evaluate");
  std::vector<std::size_t> rows = labeled;
  const bool held_out = !a.all_rows && !model.split.test_rows.empty() && model.split.n_rows == labeled.size();
  if (held_out) {
    rows.clear();
    for (std::size_t k : model.split.test_rows) rows.push_back(labeled.at(k));
  }

  std::vector<int> truth, predicted;
  std::vector<double> scores;
  for (std::size_t i : rows) {
    truth.push_back(*table.rows[i].label == CallLabel::HFC ? 1 : 0);
    predicted.push_back(scored[i].label);
    scores.push_back(scored[i].score);
  }
  const auto report = eval::evaluate(ml::model_kind_name(model.kind), truth, predicted, scores);
  const std::string text = eval::metrics_table_text(report);
  std::cout << text;
  write_file_atomic(a.report, eval::report_json(report));
  write_file_atomic(a.roc, eval::roc_csv(report.roc));
  if (!a.table.empty()) write_file_atomic(a.table, text);
  if (!a.roc_plot.empty()) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : report.roc.points) pts.emplace_back(p.fpr, p.tpr);
    write_file_atomic(a.roc_plot, svg::roc_plot(pts, "ROC " + report.model_kind + " (AUC " +
                                                         format_fixed(report.roc.auc, 4) + ")"));
  }
  if (!a.importance_plot.empty()) {
    if (model.kind != ml::ModelKind::Forest) {
      throw Error(ErrorCode::InvalidArgument, "feature importances exist for rf models only");
    }
    const auto imp = ml::feature_importance(std::get<ml::Forest>(model.parameters));
    std::vector<std::pair<std::string, double>> bars;
    for (std::size_t j = 0; j < imp.size(); ++j) bars.emplace_back(model.columns[j], imp[j]);
    write_file_atomic(a.importance_plot, svg::bar_chart(bars, "Feature importance"));
  }

  RunConfig run{"evaluate"};
  run.settings = {{"input", a.input},
                  {"model", a.model},
                  {"sequences", a.sequences},
                  {"report", a.report},
                  {"roc", a.roc},
                  {"table", a.table},
                  {"roc_plot", a.roc_plot},
                  {"importance_plot", a.importance_plot},
                  {"rows", held_out ? "held_out" : "all_labeled"},
                  {"evaluated", rows.size()}};
  write_run_config(output_dir(a.report), run);
  return kExitOk;
}

// synth -----------------------------------------------------------------------

struct SynthArgs {
  std::string output = "corpus";
  std::size_t n = 100;
  std::uint64_t seed = 42;
  int sample_rate = 16000;
  bool include_overlap = false;
  std::size_t threads = 0;
};

int cmd_synth(const SynthArgs& a) {
  CorpusOptions opt;
  opt.sample_rate = a.sample_rate;
  opt.exclude_overlap = !a.include_overlap;
  opt.threads = resolve_threads(a.threads);
  make_corpus(a.n, a.seed, a.output, opt);
  RunConfig run{"synth"};
  run.settings = {{"output", a.output},
                  {"n_per_class", a.n},
                  {"seed", a.seed},
                  {"sample_rate", a.sample_rate},
                  {"exclude_overlap", opt.exclude_overlap},
                  {"threads", opt.threads}};
  write_run_config(a.output, run);
  return kExitOk;
}

// ngram -----------------------------------------------------------------------

struct NgramArgs {
  std::vector<std::string> inputs;
  std::string output = "ngrams.csv";
  std::size_t n = 2;
  std::size_t top = 0;
  std::string plot;
};

int cmd_ngram(const NgramArgs& a) {
  NgramTable total{a.n, {}};
  for (const auto& path : a.inputs) total = merge(total, ngram_counts(read_text(path), a.n));
  const NgramTable shown = a.top > 0 ? top_k(total, a.top) : total;
  write_file_atomic(a.output, ngram_csv(shown));
  if (!a.plot.empty()) {
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& [gram, count] : top_k(shown, 20).entries) bars.emplace_back(gram, static_cast<double>(count));
    write_file_atomic(a.plot, svg::bar_chart(bars, std::to_string(a.n) + "-gram counts"));
  }
  RunConfig run{"ngram"};
  run.settings = {{"inputs", a.inputs}, {"output", a.output}, {"n", a.n}, {"top", a.top}, {"plot", a.plot}};
  write_run_config(output_dir(a.output), run);
  return kExitOk;
}

// report ----------------------------------------------------------------------

struct ReportArgs {
  std::string input;
  std::string output = "summary.json";
  std::string plot;
  std::string feature = "f0_mean";
};

int cmd_report(const ReportArgs& a) {
  const auto table = read_feature_csv(a.input);
  const auto& names = feature_names();
  const std::size_t plotted = feature_index(a.feature);

  struct Acc {
    std::size_t rows = 0;
    std::vector<double> sum, sum_sq;
    std::vector<std::size_t> count;
  };
  std::map<std::string, Acc> groups;
  for (const auto& row : table.rows) {
    auto& g = groups[row.label ? label_code(*row.label) : "unlabeled"];
    if (g.sum.empty()) {
      g.sum.assign(names.size(), 0.0);
      g.sum_sq.assign(names.size(), 0.0);
      g.count.assign(names.size(), 0);
    }
    ++g.rows;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (!row.values[j]) continue;
      g.sum[j] += *row.values[j];
      g.sum_sq[j] += *row.values[j] * *row.values[j];
      ++g.count[j];
    }
  }

  ojson classes = ojson::object();
  std::vector<std::pair<std::string, double>> bars;
  for (const auto& [name, g] : groups) {
    ojson features = ojson::object();
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (g.count[j] == 0) {
        features[names[j]] = {{"count", 0}, {"mean", nullptr}, {"std", nullptr}};
        continue;
      }
      const double n = static_cast<double>(g.count[j]);
      const double mean = g.sum[j] / n;
      const double var = std::max(0.0, g.sum_sq[j] / n - mean * mean);
      features[names[j]] = {{"count", g.count[j]}, {"mean", mean}, {"std", std::sqrt(var)}};
      if (j == plotted) bars.emplace_back(name, mean);
    }
    classes[name] = {{"rows", g.rows}, {"features", features}};
  }
  write_file_atomic(a.output, ojson{{"rows", table.rows.size()}, {"classes", classes}}.dump(2) + "\n");
  if (!a.plot.empty()) write_file_atomic(a.plot, svg::bar_chart(bars, "Mean " + a.feature + " by class"));

  RunConfig run{"report"};
  run.settings = {{"input", a.input}, {"output", a.output}, {"plot", a.plot}, {"feature", a.feature}};
  write_run_config(output_dir(a.output), run);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Acoustic analysis and classification of cattle vocalizations", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + tool_version());
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Segment audio and write the feature CSV");
  extract->add_option("input", ex.input, "Manifest CSV, directory of WAV files, or one WAV file")->required();
  extract->add_option("-o,--output", ex.output, "Feature CSV")->capture_default_str();
  extract->add_option("--sequences", ex.sequences, "Also write per-frame MFCC sequences (JSON)");
  extract->add_flag("--whole-clip", ex.whole_clip, "Treat each file as one event");
  extract->add_flag("--reduce-noise", ex.reduce_noise, "Spectral gating before analysis");
  extract->add_option("--normalize-peak", ex.normalize_peak, "Peak-normalize each file to this amplitude")
      ->check(CLI::Range(1e-6, 1.0));
  extract->add_option("--threads", ex.threads, "Worker count (0: HERDSIG_THREADS or all cores)");
  ex.frame.add(extract);
  ex.vad.add(extract);

  SegmentArgs sg;
  auto* segment = app.add_subcommand("segment", "Detect vocal events and write their bounds");
  segment->add_option("input", sg.input, "Manifest CSV, directory of WAV files, or one WAV file")->required();
  segment->add_option("-o,--output", sg.output, "Events CSV")->capture_default_str();
  segment->add_option("--stats", sg.stats, "Per-file temporal statistics (JSON)");
  segment->add_option("--threads", sg.threads, "Worker count (0: HERDSIG_THREADS or all cores)");
  sg.frame.add(segment);
  sg.vad.add(segment);

  ClassifyArgs cl;
  auto* classify_cmd = app.add_subcommand("classify", "Label feature rows by rules or by a trained model");
  classify_cmd->add_option("input", cl.input, "Feature CSV")->required();
  classify_cmd->add_option("-o,--output", cl.output, "Predictions CSV")->capture_default_str();
  classify_cmd->add_option("--mode", cl.mode, "ontology or model")
      ->check(CLI::IsMember({"ontology", "model"}))
      ->capture_default_str();
  classify_cmd->add_option("--rules", cl.rules, "Rule set JSON overriding the defaults");
  classify_cmd->add_option("--model", cl.model, "Model JSON for --mode model");
  classify_cmd->add_option("--sequences", cl.sequences, "MFCC sequences for rnn models");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train rf, svm or rnn on a labeled feature CSV");
  train->add_option("input", tr.input, "Feature CSV")->required();
  train->add_option("-o,--output", tr.output, "Model JSON")->capture_default_str();
  train->add_option("--kind", tr.kind, "Model kind")->check(CLI::IsMember({"rf", "svm", "rnn"}))->capture_default_str();
  train->add_option("--sequences", tr.sequences, "MFCC sequences (required for rnn)");
  train->add_flag("--full-features", tr.full_features, "Use every feature column instead of pitch, loudness, duration");
  train->add_flag("--balance", tr.balance, "Duplicate minority-class rows in the training split");
  train->add_option("--seed", tr.seed, "Seed for the split and the model")->capture_default_str();
  train->add_option("--test-fraction", tr.test_fraction, "Held-out share of labeled rows")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  train->add_option("--threads", tr.threads, "Worker count for forest training");
  train->add_option("--trees", tr.forest.n_trees, "Forest size")->capture_default_str();
  train->add_option("--max-depth", tr.forest.max_depth, "Tree depth limit")->capture_default_str();
  train->add_option("--min-leaf", tr.forest.min_leaf, "Smallest leaf")->capture_default_str();
  train->add_option("--svm-c", tr.svm.c, "SVM regularization constant")->capture_default_str();
  train->add_option("--svm-epochs", tr.svm.epochs, "SVM passes over the data")->capture_default_str();
  train->add_option("--hidden", tr.rnn.hidden, "RNN hidden units")->capture_default_str();
  train->add_option("--rnn-epochs", tr.rnn.epochs, "RNN epochs")->capture_default_str();
  train->add_option("--learning-rate", tr.rnn.learning_rate, "RNN step size")->capture_default_str();
  train->add_option("--max-steps", tr.rnn.max_steps, "Sequence length cap (0: none)")->capture_default_str();
  train->add_flag("-v,--verbose", tr.verbose, "Report split sizes");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model and write metrics, ROC and plots");
  evaluate->add_option("input", ev.input, "Feature CSV")->required();
  evaluate->add_option("--model", ev.model, "Model JSON")->required();
  evaluate->add_option("--sequences", ev.sequences, "MFCC sequences for rnn models");
  evaluate->add_option("--report", ev.report, "Report JSON")->capture_default_str();
  evaluate->add_option("--roc", ev.roc, "ROC CSV")->capture_default_str();
  evaluate->add_option("--table", ev.table, "Also write the metrics table here");
  evaluate->add_option("--roc-plot", ev.roc_plot, "ROC SVG");
  evaluate->add_option("--importance-plot", ev.importance_plot, "Feature-importance SVG (rf)");
  evaluate->add_flag("--all-rows", ev.all_rows, "Score every labeled row, not the model's held-out split");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write a labeled synthetic corpus with manifest.csv");
  synth->add_option("-o,--output", sy.output, "Corpus directory")->capture_default_str();
  synth->add_option("--n", sy.n, "Calls per class")->capture_default_str();
  synth->add_option("--seed", sy.seed, "Corpus seed")->capture_default_str();
  synth->add_option("--sample-rate", sy.sample_rate, "Sample rate")->capture_default_str();
  synth->add_flag("--include-overlap", sy.include_overlap, "Draw pitch from the full class ranges");
  synth->add_option("--threads", sy.threads, "Worker count (0: HERDSIG_THREADS or all cores)");

  NgramArgs ng;
  auto* ngram = app.add_subcommand("ngram", "Character n-gram counts of transcripts");
  ngram->add_option("inputs", ng.inputs, "Text files")->required();
  ngram->add_option("-o,--output", ng.output, "N-gram CSV")->capture_default_str();
  ngram->add_option("--n", ng.n, "Gram length")->check(CLI::IsMember({1, 2}))->capture_default_str();
  ngram->add_option("--top", ng.top, "Keep the k most frequent (0: all)")->capture_default_str();
  ngram->add_option("--plot", ng.plot, "Bar chart SVG of the top 20");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Per-class feature summary of a feature CSV");
  report->add_option("input", rp.input, "Feature CSV")->required();
  report->add_option("-o,--output", rp.output, "Summary JSON")->capture_default_str();
  report->add_option("--plot", rp.plot, "Bar chart SVG of one feature's class means");
  report->add_option("--feature", rp.feature, "Feature for --plot")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitMalformed;
  }

  if (*extract) return guarded([&] { return cmd_extract(ex); });
  if (*segment) return guarded([&] { return cmd_segment(sg); });
  if (*classify_cmd) return guarded([&] { return cmd_classify(cl); });
  if (*train) return guarded([&] { return cmd_train(tr); });
  if (*evaluate) return guarded([&] { return cmd_evaluate(ev); });
  if (*synth) return guarded([&] { return cmd_synth(sy); });
  if (*ngram) return guarded([&] { return cmd_ngram(ng); });
  if (*report) return guarded([&] { return cmd_report(rp); });
  return kExitMalformed;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace herdsig::cli
