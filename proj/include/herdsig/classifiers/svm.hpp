#pragma once

#include <cstdint>
#include <vector>

#include "herdsig/classifiers/matrix.hpp"

namespace herdsig::ml {

struct SvmParams {
  double c = 1.0;
  std::size_t epochs = 200;
  std::uint64_t seed = 42;
};

struct LinearSvm {
  SvmParams params;
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> epoch_objective;  // primal objective of the running mean of all iterates, per epoch
};

// (1/2)|w|^2 + C * sum max(0, 1 - y (w.x + b)), y in {-1, +1}.
double svm_objective(const std::vector<double>& w, double b, const FeatureMatrix& data, double c);

// Pegasos-style sub-gradient descent on standardized rows. `standardized`
// is the caller's assertion; false raises NotStandardized.
LinearSvm train_svm(const FeatureMatrix& train, bool standardized, const SvmParams& params = {});

struct SvmPrediction {
  int label = 0;
  double score = 0.0;
};

// score = w.x + b; HFC when score >= 0.
SvmPrediction svm_predict(const LinearSvm& model, const Row& x);

}  // namespace herdsig::ml
