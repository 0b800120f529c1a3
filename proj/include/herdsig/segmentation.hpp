#pragma once

#include <optional>
#include <string>
#include <vector>

#include "herdsig/audio_io.hpp"

namespace herdsig {

struct VocalEvent {
  std::string source_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::size_t start_sample = 0;
  std::vector<double> samples;
  int sample_rate = 16000;
  double peak_db = 0.0;  // loudest frame level, dBFS

  double duration_s() const { return end_s - start_s; }
};

struct VadConfig {
  double threshold_db = -35.0;
  double hang_ms = 120.0;
  double min_event_ms = 100.0;
  double merge_gap_ms = 50.0;

  void validate() const;
};

// Per-frame level 20*log10(rms + 1e-10) of the unwindowed frames.
std::vector<double> frame_levels_db(std::span<const double> samples, int sample_rate, const FrameConfig& cfg);

// Energy-threshold activity detection with hang time, gap merging and a
// minimum duration. Events are sorted and disjoint.
std::vector<VocalEvent> detect_events(const AudioClip& clip, const FrameConfig& frame_cfg, const VadConfig& vad);

// The whole clip as a single event.
VocalEvent whole_clip_event(const AudioClip& clip, const FrameConfig& frame_cfg);

struct TemporalStats {
  std::size_t event_count = 0;
  double total_span_s = 0.0;
  double vocalization_rate = 0.0;  // events per minute
  std::optional<double> mean_interval_s;
  std::optional<double> min_interval_s;
  std::optional<double> max_interval_s;
};

// Intervals are onset to onset.
TemporalStats temporal_stats(std::vector<VocalEvent> events, double span_s);
// Same statistics from onset times alone.
TemporalStats temporal_stats_from_onsets(std::vector<double> onsets, double span_s);

// `source_id,start_s,end_s,peak_db`
std::string format_events_csv(const std::vector<VocalEvent>& events);

}  // namespace herdsig
