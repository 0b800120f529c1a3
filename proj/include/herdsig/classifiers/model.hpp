#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "herdsig/classifiers/forest.hpp"
#include "herdsig/classifiers/matrix.hpp"
#include "herdsig/classifiers/rnn.hpp"
#include "herdsig/classifiers/svm.hpp"
#include "herdsig/feature_table.hpp"

namespace herdsig::ml {

enum class ModelKind { Forest, Svm, Rnn };

std::string model_kind_name(ModelKind kind);  // "rf" / "svm" / "rnn"
ModelKind parse_model_kind(const std::string& name);

inline constexpr int kModelSchemaVersion = 1;

struct TrainOptions {
  ModelKind kind = ModelKind::Forest;
  std::vector<std::string> columns = core_feature_set();  // tabular models only
  ForestParams forest;
  SvmParams svm;
  RnnParams rnn;
  std::uint64_t seed = 42;
  bool balance = false;
  double test_fraction = 0.2;  // 0 trains on every labeled row
};

struct HoldoutSplit {
  double test_fraction = 0.0;
  std::size_t n_rows = 0;
  std::vector<std::size_t> test_rows;  // indices into the labeled rows of the CSV
};

struct TrainedModel {
  ModelKind kind = ModelKind::Forest;
  std::string csv_header;
  std::vector<std::string> columns;
  Standardizer standardizer;
  std::vector<double> imputation_medians;
  std::uint64_t seed = 42;
  bool balance = false;
  HoldoutSplit split;
  std::size_t sequence_max_steps = 64;  // rnn only
  RnnParams rnn_params;                 // rnn only
  std::variant<Forest, LinearSvm, Rnn> parameters;
};

// MFCC sequence per labeled CSV row, aligned by position and checked by source_id.
std::vector<Sequence> align_sequences(const FeatureTable& table, const std::vector<SequenceEntry>& entries,
                                      bool labeled_only);

// Trains on the stratified training split of the labeled rows.
// RNN training requires `sequences` (one per CSV row, see align_sequences).
TrainedModel train_model(const FeatureTable& table, const std::vector<SequenceEntry>* sequences,
                         const TrainOptions& options);

struct Scored {
  int label = 0;
  double score = 0.0;  // HFC probability (rf, rnn) or decision value (svm)
};

// One prediction per row of `table` (labeled or not).
std::vector<Scored> predict_rows(const TrainedModel& model, const FeatureTable& table,
                                 const std::vector<SequenceEntry>* sequences);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace herdsig::ml
