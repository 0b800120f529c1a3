#include "herdsig/classifiers/svm.hpp"

#include <algorithm>
#include <numeric>

#include "herdsig/error.hpp"
#include "herdsig/random.hpp"
#include "herdsig/simd/kernels.hpp"

namespace herdsig::ml {

double svm_objective(const std::vector<double>& w, double b, const FeatureMatrix& data, double c) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.labels[i] == 1 ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * (simd::dot(w, data.rows[i]) + b));
  }
  return 0.5 * simd::sum_squares(w) + c * hinge;
}

LinearSvm train_svm(const FeatureMatrix& train, bool standardized, const SvmParams& params) {
  if (!standardized) throw Error(ErrorCode::NotStandardized, "linear SVM expects standardized features");
  if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  if (!(params.c > 0.0) || params.epochs == 0) {
    throw Error(ErrorCode::InvalidArgument, "SVM needs C > 0 and at least one epoch");
  }
  const std::size_t n = train.size();
  const std::size_t d = train.dims();
  const double lambda = 1.0 / (params.c * static_cast<double>(n));
  const std::size_t total = params.epochs * n;
  const std::size_t tail_start = total - std::max<std::size_t>(1, total / 10);

  LinearSvm model;
  model.params = params;
  std::vector<double> w(d, 0.0), w_avg(d, 0.0), w_sum(d, 0.0);
  double b = 0.0, b_avg = 0.0, b_sum = 0.0;
  std::size_t tail_count = 0;

  Rng rng(params.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = train.labels[i] == 1 ? 1.0 : -1.0;
      const auto& x = train.rows[i];
      const double margin = y * (simd::dot(w, x) + b);
      const double shrink = 1.0 - eta * lambda;
      // The bias shrinks with w so the large early steps cannot leave it stranded.
      for (double& v : w) v *= shrink;
      b *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) w[j] += eta * y * x[j];
        b += eta * y;
      }
      for (std::size_t j = 0; j < d; ++j) w_sum[j] += w[j];
      b_sum += b;
      if (t > tail_start) {
        for (std::size_t j = 0; j < d; ++j) w_avg[j] += w[j];
        b_avg += b;
        ++tail_count;
      }
    }
    std::vector<double> w_mean = w_sum;
    for (double& v : w_mean) v /= static_cast<double>(t);
    model.epoch_objective.push_back(svm_objective(w_mean, b_sum / static_cast<double>(t), train, params.c));
  }
  for (double& v : w_avg) v /= static_cast<double>(tail_count);
  model.w = std::move(w_avg);
  model.b = b_avg / static_cast<double>(tail_count);
  return model;
}

SvmPrediction svm_predict(const LinearSvm& model, const Row& x) {
  if (x.size() != model.w.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(x.size()) + " features, model expects " +
                                                  std::to_string(model.w.size()));
  }
  SvmPrediction p;
  p.score = simd::dot(model.w, x) + model.b;
  p.label = p.score >= 0.0 ? 1 : 0;
  return p;
}

}  // namespace herdsig::ml
