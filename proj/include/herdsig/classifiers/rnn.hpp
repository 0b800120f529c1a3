#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace herdsig::ml {

// Time-major sequence: one input vector per step.
using Sequence = std::vector<std::vector<double>>;

struct RnnParams {
  std::size_t hidden = 32;
  std::size_t epochs = 300;
  double learning_rate = 0.1;
  double clip_norm = 5.0;
  std::size_t max_steps = 64;  // longer sequences are block-averaged down; 0 keeps them
  std::uint64_t seed = 42;
};

struct Rnn {
  Eigen::MatrixXd w_xh;  // h x d
  Eigen::MatrixXd w_hh;  // h x h
  Eigen::VectorXd b_h;
  Eigen::VectorXd w_hy;  // h
  double b_y = 0.0;

  std::size_t hidden() const { return static_cast<std::size_t>(w_hh.rows()); }
  std::size_t input_dim() const { return static_cast<std::size_t>(w_xh.cols()); }
  // Number of scalar parameters.
  std::size_t size() const;
};

struct RnnGradients {
  Eigen::MatrixXd w_xh, w_hh;
  Eigen::VectorXd b_h, w_hy;
  double b_y = 0.0;

  double norm() const;
  void scale(double s);
};

// Weights uniform in (-1/sqrt(h), 1/sqrt(h)), biases zero.
Rnn init_rnn(std::size_t input_dim, std::size_t hidden, std::uint64_t seed);

// Probability of HFC after the last step.
double rnn_forward(const Rnn& model, const Sequence& seq);

// Binary cross-entropy of one sequence, label in {0, 1}.
double rnn_loss(const Rnn& model, const Sequence& seq, int label);

// Exact BPTT gradient of rnn_loss; returns the loss.
double rnn_backward(const Rnn& model, const Sequence& seq, int label, RnnGradients& grads);

// Mean loss over a batch.
double rnn_batch_loss(const Rnn& model, const std::vector<Sequence>& seqs, const std::vector<int>& labels);

// Averages consecutive blocks so the result has at most max_steps steps.
Sequence decimate(const Sequence& seq, std::size_t max_steps);

struct RnnTrainResult {
  Rnn model;
  std::vector<double> loss_history;  // batch loss before each update
};

// Full-batch gradient descent with global-norm clipping. Sequences are used
// as given (callers decimate and standardize).
RnnTrainResult train_rnn(const std::vector<Sequence>& seqs, const std::vector<int>& labels,
                         const RnnParams& params = {});

struct RnnPrediction {
  int label = 0;
  double probability = 0.5;
};

RnnPrediction rnn_predict(const Rnn& model, const Sequence& seq);

// Flattened parameter access for finite-difference checks.
double& rnn_parameter(Rnn& model, std::size_t k);
double rnn_gradient(const RnnGradients& g, std::size_t k);

}  // namespace herdsig::ml
