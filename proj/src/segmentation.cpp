#include "herdsig/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig {

void VadConfig::validate() const {
  if (!(threshold_db < 0.0)) throw Error(ErrorCode::InvalidArgument, "VAD threshold must be below 0 dBFS");
  if (!(hang_ms > 0.0 && min_event_ms > 0.0 && merge_gap_ms > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "VAD durations must be positive");
  }
}

std::vector<double> frame_levels_db(std::span<const double> samples, int sample_rate, const FrameConfig& cfg) {
  cfg.validate(sample_rate);
  const std::size_t len = cfg.frame_length(sample_rate);
  const std::size_t hop = cfg.hop_length(sample_rate);
  const std::size_t count = frame_count(samples.size(), len, hop);
  std::vector<double> levels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double rms = std::sqrt(simd::sum_squares(samples.subspan(i * hop, len)) / static_cast<double>(len));
    levels[i] = 20.0 * std::log10(rms + 1e-10);
  }
  return levels;
}

namespace {

struct Span {
  std::size_t first;  // frame indices, inclusive
  std::size_t last;
};

VocalEvent make_event(const AudioClip& clip, std::size_t begin, std::size_t end, double peak_db) {
  VocalEvent e;
  e.source_id = clip.source_id;
  e.sample_rate = clip.sample_rate;
  e.start_sample = begin;
  e.start_s = static_cast<double>(begin) / clip.sample_rate;
  e.end_s = static_cast<double>(end) / clip.sample_rate;
  e.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                   clip.samples.begin() + static_cast<std::ptrdiff_t>(end));
  e.peak_db = peak_db;
  return e;
}

}  // namespace

std::vector<VocalEvent> detect_events(const AudioClip& clip, const FrameConfig& frame_cfg, const VadConfig& vad) {
  vad.validate();
  frame_cfg.validate(clip.sample_rate);
  const auto levels = frame_levels_db(clip.samples, clip.sample_rate, frame_cfg);
  const std::size_t len = frame_cfg.frame_length(clip.sample_rate);
  const std::size_t hop = frame_cfg.hop_length(clip.sample_rate);
  const auto hang_frames = static_cast<std::size_t>(std::lround(vad.hang_ms / frame_cfg.hop_ms));

  std::vector<Span> spans;
  bool open = false;
  Span cur{0, 0};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const bool active = levels[i] > vad.threshold_db;
    if (active) {
      if (!open) {
        open = true;
        cur = {i, i};
      }
      cur.last = i;
    } else if (open && i - cur.last > hang_frames) {
      spans.push_back(cur);
      open = false;
    }
  }
  if (open) spans.push_back(cur);

  const auto begin_of = [&](const Span& s) { return s.first * hop; };
  const auto end_of = [&](const Span& s) { return std::min(clip.samples.size(), s.last * hop + len); };
  const double sr = clip.sample_rate;

  std::vector<Span> merged;
  for (const auto& s : spans) {
    if (!merged.empty()) {
      const double gap = (static_cast<double>(begin_of(s)) - static_cast<double>(end_of(merged.back()))) / sr;
      if (gap * 1000.0 < vad.merge_gap_ms) {
        merged.back().last = s.last;
        continue;
      }
    }
    merged.push_back(s);
  }

  std::vector<VocalEvent> events;
  for (const auto& s : merged) {
    const std::size_t b = begin_of(s);
    const std::size_t e = end_of(s);
    if (static_cast<double>(e - b) / sr * 1000.0 < vad.min_event_ms) continue;
    const double peak = *std::max_element(levels.begin() + static_cast<std::ptrdiff_t>(s.first),
                                          levels.begin() + static_cast<std::ptrdiff_t>(s.last) + 1);
    events.push_back(make_event(clip, b, e, peak));
  }
  return events;
}

VocalEvent whole_clip_event(const AudioClip& clip, const FrameConfig& frame_cfg) {
  if (clip.samples.empty()) throw Error(ErrorCode::EmptyAudio, clip.source_id + ": no samples");
  const auto levels = frame_levels_db(clip.samples, clip.sample_rate, frame_cfg);
  double peak = -200.0;
  if (!levels.empty()) {
    peak = *std::max_element(levels.begin(), levels.end());
  } else {
    const double rms = std::sqrt(simd::sum_squares(clip.samples) / static_cast<double>(clip.samples.size()));
    peak = 20.0 * std::log10(rms + 1e-10);
  }
  return make_event(clip, 0, clip.samples.size(), peak);
}

TemporalStats temporal_stats_from_onsets(std::vector<double> onsets, double span_s) {
  if (!(span_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "span must be positive");
  std::sort(onsets.begin(), onsets.end());
  TemporalStats st;
  st.event_count = onsets.size();
  st.total_span_s = span_s;
  st.vocalization_rate = static_cast<double>(onsets.size()) / span_s * 60.0;
  if (onsets.size() >= 2) {
    double sum = 0.0, lo = onsets[1] - onsets[0], hi = lo;
    for (std::size_t i = 1; i < onsets.size(); ++i) {
      const double d = onsets[i] - onsets[i - 1];
      sum += d;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    st.mean_interval_s = sum / static_cast<double>(onsets.size() - 1);
    st.min_interval_s = lo;
    st.max_interval_s = hi;
  }
  return st;
}

TemporalStats temporal_stats(std::vector<VocalEvent> events, double span_s) {
  std::vector<double> onsets;
  onsets.reserve(events.size());
  for (const auto& e : events) onsets.push_back(e.start_s);
  return temporal_stats_from_onsets(std::move(onsets), span_s);
}

std::string format_events_csv(const std::vector<VocalEvent>& events) {
  std::string out = "source_id,start_s,end_s,peak_db\n";
  for (const auto& e : events) {
    out += csv_escape(e.source_id) + ',' + format_g6(e.start_s) + ',' + format_g6(e.end_s) + ',' +
           format_g6(e.peak_db) + '\n';
  }
  return out;
}

}  // namespace herdsig
