#include "herdsig/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"
#include "json.hpp"

namespace herdsig::eval {

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(truth.size()) + " labels vs " +
                                               std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw Error(ErrorCode::LengthMismatch, "no rows to compare");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == 1, p = predicted[i] == 1;
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (t && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  if (tp + fp == 0) m.precision_undefined = true;
  else m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn == 0) m.recall_undefined = true;
  else m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall == 0.0) m.f1_undefined = true;
  else m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace

Metrics prf(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::InvalidArgument, "empty confusion matrix");
  Metrics m;
  m.hfc = class_metrics(cm.tp, cm.fp, cm.fn);
  m.lfc = class_metrics(cm.tn, cm.fn, cm.fp);
  m.macro.precision = 0.5 * (m.hfc.precision + m.lfc.precision);
  m.macro.recall = 0.5 * (m.hfc.recall + m.lfc.recall);
  m.macro.f1 = 0.5 * (m.hfc.f1 + m.lfc.f1);
  m.macro.support = cm.total();
  const double n = static_cast<double>(cm.total());
  const double wh = static_cast<double>(m.hfc.support) / n, wl = static_cast<double>(m.lfc.support) / n;
  m.weighted.precision = wh * m.hfc.precision + wl * m.lfc.precision;
  m.weighted.recall = wh * m.hfc.recall + wl * m.lfc.recall;
  m.weighted.f1 = wh * m.hfc.f1 + wl * m.lfc.f1;
  m.weighted.support = cm.total();
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / n;
  return m;
}

RocCurve roc(const std::vector<int>& truth, const std::vector<double>& scores) {
  if (truth.size() != scores.size()) throw Error(ErrorCode::LengthMismatch, "one score per label required");
  std::size_t pos = 0, neg = 0;
  for (int t : truth) (t == 1 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw Error(ErrorCode::SingleClassInput, "ROC needs both classes");
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "non-finite score");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) (truth[order[i]] == 1 ? tp : fp) += 1;
    curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
    curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return curve;
}

EvalReport evaluate(const std::string& model_kind, const std::vector<int>& truth, const std::vector<int>& predicted,
                    const std::vector<double>& scores) {
  EvalReport r;
  r.model_kind = model_kind;
  r.confusion = confusion(truth, predicted);
  r.metrics = prf(r.confusion);
  r.roc = roc(truth, scores);
  return r;
}

namespace {

nlohmann::json class_json(const ClassMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support},
          {"precision_undefined", m.precision_undefined},
          {"recall_undefined", m.recall_undefined},
          {"f1_undefined", m.f1_undefined}};
}

std::string threshold_text(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return format_g6(t);
}

}  // namespace

std::string report_json(const EvalReport& r) {
  nlohmann::json roc_pts = nlohmann::json::array();
  for (const auto& p : r.roc.points) roc_pts.push_back({{"threshold", threshold_text(p.threshold)}, {"fpr", p.fpr}, {"tpr", p.tpr}});
  nlohmann::json doc = {
      {"model", r.model_kind},
      {"positive_class", "HFC"},
      {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
      {"per_class", {{"HFC", class_json(r.metrics.hfc)}, {"LFC", class_json(r.metrics.lfc)}}},
      {"macro_avg", class_json(r.metrics.macro)},
      {"weighted_avg", class_json(r.metrics.weighted)},
      {"accuracy", r.metrics.accuracy},
      {"auc", r.roc.auc},
      {"roc_points", roc_pts}};
  return doc.dump(2) + '\n';
}

std::string roc_csv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) out += threshold_text(p.threshold) + ',' + format_g6(p.fpr) + ',' + format_g6(p.tpr) + '\n';
  return out;
}

std::string metrics_table_text(const EvalReport& r) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-18s %9s %9s %9s %9s\n", r.model_kind.c_str(), "precision", "recall", "f1-score",
                "support");
  out += line;
  const auto row = [&](const char* name, const ClassMetrics& m) {
    std::snprintf(line, sizeof line, "%-18s %9.4f %9.4f %9.4f %9zu\n", name, m.precision, m.recall, m.f1, m.support);
    out += line;
  };
  row("Distress/Arousal", r.metrics.hfc);
  row("Contentment/Calm", r.metrics.lfc);
  std::snprintf(line, sizeof line, "%-18s %9s %9s %9.4f %9zu\n", "accuracy", "", "", r.metrics.accuracy,
                r.confusion.total());
  out += line;
  row("macro avg", r.metrics.macro);
  row("weighted avg", r.metrics.weighted);
  std::snprintf(line, sizeof line, "%-18s %9.4f\n", "auc", r.roc.auc);
  out += line;
  return out;
}

}  // namespace herdsig::eval
