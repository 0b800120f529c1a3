#pragma once

#include <optional>
#include <vector>

#include "herdsig/audio_io.hpp"
#include "herdsig/feature_table.hpp"
#include "herdsig/segmentation.hpp"

namespace herdsig {

struct ExtractOptions {
  FrameConfig frame;
  VadConfig vad;
  bool whole_clip = false;
  bool reduce_noise = false;
  std::optional<double> normalize_peak;  // peak-normalize each clip before analysis
};

struct ExtractedEvent {
  FeatureRow row;
  SequenceEntry sequence;
};

// Segments (or takes the whole clip), then extracts every event. Events
// that are silent or too short for analysis are skipped.
std::vector<ExtractedEvent> extract_clip(const AudioClip& clip, std::optional<CallLabel> label,
                                         const ExtractOptions& options);

}  // namespace herdsig
