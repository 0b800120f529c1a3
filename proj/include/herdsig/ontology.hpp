#pragma once

#include <filesystem>
#include <string>

#include "herdsig/audio_io.hpp"
#include "herdsig/features.hpp"

namespace herdsig {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

struct ClassRanges {
  Range frequency_hz;
  Range loudness_db;
  Range duration_s;
};

struct OntologyRules {
  ClassRanges hfc{{110.59, 494.16}, {-39.71, -2.45}, {0.638, 9.581}};
  ClassRanges lfc{{72.61, 183.27}, {-53.88, -8.16}, {0.650, 2.921}};
  double w_freq = 0.70 / 1.01;
  double w_loud = 0.22 / 1.01;
  double w_dur = 0.09 / 1.01;
  double sigma_fraction = 0.10;  // falloff scale as a share of the range width

  // Throws InvalidArgument on inverted ranges or weights that are not a
  // positive partition of 1.
  void validate() const;
  const ClassRanges& ranges(CallLabel label) const { return label == CallLabel::HFC ? hfc : lfc; }
};

enum class Polarity { Negative, Positive };

std::string polarity_name(Polarity p);  // "negative" / "positive"
Polarity polarity(CallLabel label) noexcept;

struct Prediction {
  CallLabel label = CallLabel::LFC;
  double score = 0.5;  // HFC share of the two class scores
  Polarity polarity = Polarity::Positive;
  double hfc_score = 0.0;
  double lfc_score = 0.0;
};

// 1 inside the range, exp(-d / sigma) outside, d the distance to the nearest edge.
double membership(double value, const Range& range, double sigma_fraction);

double class_score(const ClassRanges& ranges, const OntologyRules& rules, double f0_hz, double loudness_db,
                   double duration_s);

Prediction classify(double f0_hz, double loudness_db, double duration_s, const OntologyRules& rules = {});
// Throws MissingCoreFeature when f0_mean is absent.
Prediction classify(const AcousticFeatures& features, const OntologyRules& rules = {});

std::string format_rules_json(const OntologyRules& rules);
OntologyRules parse_rules_json(const std::string& text);
OntologyRules load_rules(const std::filesystem::path& path);

}  // namespace herdsig
