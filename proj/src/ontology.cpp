#include "herdsig/ontology.hpp"

#include <cmath>

#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"
#include "json.hpp"

namespace herdsig {

void OntologyRules::validate() const {
  for (const auto* c : {&hfc, &lfc}) {
    for (const auto* r : {&c->frequency_hz, &c->loudness_db, &c->duration_s}) {
      if (!(r->lo < r->hi)) throw Error(ErrorCode::InvalidArgument, "ontology range low must be below high");
    }
  }
  if (!(w_freq > 0.0 && w_loud > 0.0 && w_dur > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ontology weights must be positive");
  }
  if (std::abs(w_freq + w_loud + w_dur - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidArgument, "ontology weights must sum to 1");
  }
  if (!(sigma_fraction > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma fraction must be positive");
}

std::string polarity_name(Polarity p) { return p == Polarity::Negative ? "negative" : "positive"; }

Polarity polarity(CallLabel label) noexcept {
  return label == CallLabel::HFC ? Polarity::Negative : Polarity::Positive;
}

double membership(double value, const Range& range, double sigma_fraction) {
  if (range.contains(value)) return 1.0;
  const double d = value < range.lo ? range.lo - value : value - range.hi;
  return std::exp(-d / (sigma_fraction * range.width()));
}

double class_score(const ClassRanges& ranges, const OntologyRules& rules, double f0_hz, double loudness_db,
                   double duration_s) {
  return rules.w_freq * membership(f0_hz, ranges.frequency_hz, rules.sigma_fraction) +
         rules.w_loud * membership(loudness_db, ranges.loudness_db, rules.sigma_fraction) +
         rules.w_dur * membership(duration_s, ranges.duration_s, rules.sigma_fraction);
}

Prediction classify(double f0_hz, double loudness_db, double duration_s, const OntologyRules& rules) {
  if (!std::isfinite(f0_hz) || !std::isfinite(loudness_db) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::MissingCoreFeature, "core features must be finite");
  }
  Prediction p;
  p.hfc_score = class_score(rules.hfc, rules, f0_hz, loudness_db, duration_s);
  p.lfc_score = class_score(rules.lfc, rules, f0_hz, loudness_db, duration_s);
  p.label = p.hfc_score > p.lfc_score ? CallLabel::HFC : CallLabel::LFC;
  const double total = p.hfc_score + p.lfc_score;
  p.score = total > 0.0 ? p.hfc_score / total : 0.5;
  p.polarity = polarity(p.label);
  return p;
}

Prediction classify(const AcousticFeatures& features, const OntologyRules& rules) {
  if (!features.f0_mean) throw Error(ErrorCode::MissingCoreFeature, "f0_mean is missing");
  return classify(*features.f0_mean, features.amplitude_db, features.duration_s, rules);
}

namespace {

nlohmann::json range_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

nlohmann::json class_json(const ClassRanges& c) {
  return {{"frequency_hz", range_json(c.frequency_hz)},
          {"loudness_db", range_json(c.loudness_db)},
          {"duration_s", range_json(c.duration_s)}};
}

Range parse_range(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw Error(ErrorCode::SchemaMismatch, "range must have two numbers");
  return {v[0], v[1]};
}

ClassRanges parse_class(const nlohmann::json& j) {
  return {parse_range(j.at("frequency_hz")), parse_range(j.at("loudness_db")), parse_range(j.at("duration_s"))};
}

}  // namespace

std::string format_rules_json(const OntologyRules& rules) {
  nlohmann::json doc = {{"HFC", class_json(rules.hfc)},
                        {"LFC", class_json(rules.lfc)},
                        {"weights", {{"frequency", rules.w_freq}, {"loudness", rules.w_loud}, {"duration", rules.w_dur}}},
                        {"sigma_fraction", rules.sigma_fraction}};
  return doc.dump(2) + '\n';
}

OntologyRules parse_rules_json(const std::string& text) {
  OntologyRules rules;
  try {
    const auto doc = nlohmann::json::parse(text);
    rules.hfc = parse_class(doc.at("HFC"));
    rules.lfc = parse_class(doc.at("LFC"));
    const auto& w = doc.at("weights");
    rules.w_freq = w.at("frequency").get<double>();
    rules.w_loud = w.at("loudness").get<double>();
    rules.w_dur = w.at("duration").get<double>();
    if (doc.contains("sigma_fraction")) rules.sigma_fraction = doc.at("sigma_fraction").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaMismatch, std::string("rules file: ") + ex.what());
  }
  rules.validate();
  return rules;
}

OntologyRules load_rules(const std::filesystem::path& path) { return parse_rules_json(read_text(path)); }

}  // namespace herdsig
