#pragma once

#include <string>
#include <vector>

namespace herdsig::eval {

// HFC (label 1) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  // Same counts with LFC taken as the positive class.
  ConfusionMatrix swapped() const { return {tn, fn, fp, tp}; }
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted);

struct ClassMetrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  std::size_t support = 0;
  bool precision_undefined = false;  // 0/0 reported as 0
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct Metrics {
  ClassMetrics hfc;
  ClassMetrics lfc;
  ClassMetrics macro;     // unweighted mean of the two classes
  ClassMetrics weighted;  // support-weighted mean
  double accuracy = 0.0;
};

// Throws InvalidArgument on an empty matrix.
Metrics prf(const ConfusionMatrix& cm);

struct RocPoint {
  double threshold = 0.0;  // +inf for the (0, 0) anchor
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Sweeps thresholds over the distinct scores in descending order; tied
// scores move together. Throws SingleClassInput when a class is absent.
RocCurve roc(const std::vector<int>& truth, const std::vector<double>& scores);

struct EvalReport {
  std::string model_kind;
  ConfusionMatrix confusion;
  Metrics metrics;
  RocCurve roc;
};

EvalReport evaluate(const std::string& model_kind, const std::vector<int>& truth, const std::vector<int>& predicted,
                    const std::vector<double>& scores);

std::string report_json(const EvalReport& report);
// `threshold,fpr,tpr`
std::string roc_csv(const RocCurve& curve);
// Precision / recall / F1 per class, macro and weighted averages, accuracy; 4 decimals.
std::string metrics_table_text(const EvalReport& report);

}  // namespace herdsig::eval
