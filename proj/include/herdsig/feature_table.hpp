#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "herdsig/audio_io.hpp"
#include "herdsig/features.hpp"

namespace herdsig {

struct FeatureRow {
  std::string source_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<std::optional<double>> values;  // feature_names() order; empty cell = missing
  std::optional<CallLabel> label;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
};

// Full CSV header line (without newline).
std::string feature_csv_header();

FeatureRow make_feature_row(const std::string& source_id, double start_s, double end_s,
                            const AcousticFeatures& features, std::optional<CallLabel> label);

std::string format_feature_csv(const FeatureTable& table);
// Throws SchemaMismatch when the header differs from feature_csv_header()
// (names and order) or a row has the wrong field count.
FeatureTable parse_feature_csv(const std::string& text);
FeatureTable read_feature_csv(const std::filesystem::path& path);

// Column index of a feature name, or throws SchemaMismatch.
std::size_t feature_index(const std::string& name);

// Per-frame MFCC sequences stored next to a feature CSV (JSON document).
struct SequenceEntry {
  std::string source_id;
  double start_s = 0.0;
  std::vector<std::vector<double>> frames;
};

std::string format_sequences(const std::vector<SequenceEntry>& entries);
std::vector<SequenceEntry> parse_sequences(const std::string& text);

}  // namespace herdsig
