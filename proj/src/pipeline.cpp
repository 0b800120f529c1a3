#include "herdsig/pipeline.hpp"

#include "herdsig/error.hpp"
#include "herdsig/features.hpp"

namespace herdsig {

std::vector<ExtractedEvent> extract_clip(const AudioClip& input, std::optional<CallLabel> label,
                                         const ExtractOptions& options) {
  AudioClip clip = input;
  if (options.reduce_noise) clip = reduce_noise(clip);
  if (options.normalize_peak) clip = peak_normalize(clip, *options.normalize_peak);

  std::vector<VocalEvent> events;
  if (options.whole_clip) {
    events.push_back(whole_clip_event(clip, options.frame));
  } else {
    events = detect_events(clip, options.frame, options.vad);
  }

  std::vector<ExtractedEvent> out;
  for (const auto& e : events) {
    AcousticFeatures f;
    std::vector<std::array<double, kMfccCount>> mfcc;
    try {
      f = extract_all(e, options.frame);
      mfcc = mfcc_frames(e.samples, e.sample_rate, options.frame);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::ZeroEnergyFrame || err.code() == ErrorCode::ClipTooShort) continue;
      throw;
    }
    ExtractedEvent x;
    x.row = make_feature_row(clip.source_id, e.start_s, e.end_s, f, label);
    x.sequence.source_id = clip.source_id;
    x.sequence.start_s = e.start_s;
    for (const auto& m : mfcc) x.sequence.frames.emplace_back(m.begin(), m.end());
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace herdsig
