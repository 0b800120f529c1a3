#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "herdsig/classifiers/rnn.hpp"
#include "herdsig/classifiers/svm.hpp"
#include "herdsig/random.hpp"

namespace herdsig::testing {

// P(score_pos > score_neg) + 0.5 P(tie), by exhaustive pair counting.
inline double mann_whitney_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

// Central differences of rnn_loss against rnn_backward for every parameter.
// Pairs whose magnitudes both fall below abs_floor are compared absolutely.
inline GradientCheck rnn_gradient_check(ml::Rnn model, const ml::Sequence& seq, int label, double eps = 1e-5,
                                        double abs_floor = 1e-7) {
  ml::RnnGradients g;
  ml::rnn_backward(model, seq, label, g);
  GradientCheck out;
  out.parameters = model.size();
  for (std::size_t k = 0; k < model.size(); ++k) {
    double& p = ml::rnn_parameter(model, k);
    const double saved = p;
    p = saved + eps;
    const double up = ml::rnn_loss(model, seq, label);
    p = saved - eps;
    const double down = ml::rnn_loss(model, seq, label);
    p = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double analytic = ml::rnn_gradient(g, k);
    const double scale = std::max({std::abs(numeric), std::abs(analytic), abs_floor});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(numeric - analytic) / scale);
  }
  return out;
}

// Random model with weights scaled up from the default init so tanh units
// leave their linear region.
inline ml::Rnn random_rnn(std::size_t d, std::size_t h, std::uint64_t seed) {
  auto m = ml::init_rnn(d, h, seed);
  Rng rng(seed + 1000);
  for (std::size_t k = 0; k < m.size(); ++k) ml::rnn_parameter(m, k) = rng.uniform(-0.8, 0.8);
  return m;
}

inline ml::Sequence random_sequence(std::size_t steps, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  ml::Sequence s(steps, std::vector<double>(d));
  for (auto& x : s) {
    for (double& v : x) v = rng.uniform(-1.5, 1.5);
  }
  return s;
}

struct GridOptimum {
  double w0 = 0.0, w1 = 0.0, b = 0.0, objective = std::numeric_limits<double>::infinity();
};

// Dense coarse grid followed by successively finer grids around the best point.
inline GridOptimum svm_grid_search(const ml::FeatureMatrix& data, double c) {
  GridOptimum best;
  double cw0 = 0.0, cw1 = 0.0, cb = 0.0, span = 4.0;
  for (int level = 0; level < 6; ++level) {
    const int steps = 40;
    const double h = 2.0 * span / steps;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        for (int k = 0; k <= steps; ++k) {
          const double w0 = cw0 - span + i * h, w1 = cw1 - span + j * h, b = cb - span + k * h;
          const double obj = ml::svm_objective({w0, w1}, b, data, c);
          if (obj < best.objective) best = {w0, w1, b, obj};
        }
      }
    }
    cw0 = best.w0;
    cw1 = best.w1;
    cb = best.b;
    span /= 5.0;
  }
  return best;
}

}  // namespace herdsig::testing
