#include "herdsig/classifiers/rnn.hpp"

#include <cmath>

#include "herdsig/error.hpp"
#include "herdsig/random.hpp"

namespace herdsig::ml {

namespace {

double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_sequence(const Rnn& model, const Sequence& seq) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no steps");
  for (const auto& x : seq) {
    if (x.size() != model.input_dim()) {
      throw Error(ErrorCode::DimensionMismatch, "step has " + std::to_string(x.size()) + " inputs, model expects " +
                                                    std::to_string(model.input_dim()));
    }
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

// Hidden states h_0..h_T (h_0 = 0) and the output logit.
double run(const Rnn& m, const Sequence& seq, std::vector<Eigen::VectorXd>* states) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(m.w_hh.rows());
  if (states) states->push_back(h);
  for (const auto& x : seq) {
    h = (m.w_xh * as_vector(x) + m.w_hh * h + m.b_h).array().tanh().matrix();
    if (states) states->push_back(h);
  }
  return m.w_hy.dot(h) + m.b_y;
}

double bce_from_logit(double z, int label) { return label == 1 ? softplus(-z) : softplus(z); }

RnnGradients zero_grads(const Rnn& m) {
  RnnGradients g;
  g.w_xh = Eigen::MatrixXd::Zero(m.w_xh.rows(), m.w_xh.cols());
  g.w_hh = Eigen::MatrixXd::Zero(m.w_hh.rows(), m.w_hh.cols());
  g.b_h = Eigen::VectorXd::Zero(m.b_h.size());
  g.w_hy = Eigen::VectorXd::Zero(m.w_hy.size());
  g.b_y = 0.0;
  return g;
}

}  // namespace

std::size_t Rnn::size() const {
  return static_cast<std::size_t>(w_xh.size() + w_hh.size() + b_h.size() + w_hy.size() + 1);
}

double RnnGradients::norm() const {
  return std::sqrt(w_xh.squaredNorm() + w_hh.squaredNorm() + b_h.squaredNorm() + w_hy.squaredNorm() + b_y * b_y);
}

void RnnGradients::scale(double s) {
  w_xh *= s;
  w_hh *= s;
  b_h *= s;
  w_hy *= s;
  b_y *= s;
}

Rnn init_rnn(std::size_t input_dim, std::size_t hidden, std::uint64_t seed) {
  if (input_dim == 0 || hidden == 0) throw Error(ErrorCode::InvalidArgument, "RNN dimensions must be positive");
  Rng rng(seed);
  const double a = 1.0 / std::sqrt(static_cast<double>(hidden));
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto d = static_cast<Eigen::Index>(input_dim);
  Rnn m;
  m.w_xh.resize(h, d);
  m.w_hh.resize(h, h);
  m.w_hy.resize(h);
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m.w_xh(i, j) = rng.uniform(-a, a);
  }
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < h; ++j) m.w_hh(i, j) = rng.uniform(-a, a);
  }
  for (Eigen::Index i = 0; i < h; ++i) m.w_hy(i) = rng.uniform(-a, a);
  m.b_h = Eigen::VectorXd::Zero(h);
  m.b_y = 0.0;
  return m;
}

double rnn_forward(const Rnn& model, const Sequence& seq) {
  check_sequence(model, seq);
  return sigmoid(run(model, seq, nullptr));
}

double rnn_loss(const Rnn& model, const Sequence& seq, int label) {
  check_sequence(model, seq);
  return bce_from_logit(run(model, seq, nullptr), label);
}

double rnn_backward(const Rnn& model, const Sequence& seq, int label, RnnGradients& g) {
  check_sequence(model, seq);
  if (g.w_xh.size() == 0) g = zero_grads(model);
  std::vector<Eigen::VectorXd> hs;
  hs.reserve(seq.size() + 1);
  const double z = run(model, seq, &hs);
  const double dz = sigmoid(z) - static_cast<double>(label);
  g.b_y += dz;
  g.w_hy += dz * hs.back();
  Eigen::VectorXd dh = dz * model.w_hy;
  for (std::size_t t = seq.size(); t >= 1; --t) {
    const Eigen::VectorXd da = dh.array() * (1.0 - hs[t].array().square());
    g.w_xh.noalias() += da * as_vector(seq[t - 1]).transpose();
    g.w_hh.noalias() += da * hs[t - 1].transpose();
    g.b_h += da;
    dh.noalias() = model.w_hh.transpose() * da;
  }
  return bce_from_logit(z, label);
}

double rnn_batch_loss(const Rnn& model, const std::vector<Sequence>& seqs, const std::vector<int>& labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < seqs.size(); ++i) sum += rnn_loss(model, seqs[i], labels[i]);
  return sum / static_cast<double>(seqs.size());
}

Sequence decimate(const Sequence& seq, std::size_t max_steps) {
  if (max_steps == 0 || seq.size() <= max_steps) return seq;
  Sequence out(max_steps);
  const std::size_t n = seq.size();
  for (std::size_t k = 0; k < max_steps; ++k) {
    const std::size_t lo = k * n / max_steps;
    const std::size_t hi = (k + 1) * n / max_steps;
    std::vector<double> acc(seq[lo].size(), 0.0);
    for (std::size_t t = lo; t < hi; ++t) {
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += seq[t][j];
    }
    for (double& v : acc) v /= static_cast<double>(hi - lo);
    out[k] = std::move(acc);
  }
  return out;
}

RnnTrainResult train_rnn(const std::vector<Sequence>& seqs, const std::vector<int>& labels, const RnnParams& params) {
  if (seqs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training sequences");
  if (labels.size() != seqs.size()) throw Error(ErrorCode::LengthMismatch, "one label per sequence required");
  if (seqs[0].empty()) throw Error(ErrorCode::EmptySequence, "sequence has no steps");
  RnnTrainResult result;
  result.model = init_rnn(seqs[0][0].size(), params.hidden, params.seed);
  auto& m = result.model;
  const double inv_n = 1.0 / static_cast<double>(seqs.size());
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    RnnGradients g = zero_grads(m);
    double loss = 0.0;
    for (std::size_t i = 0; i < seqs.size(); ++i) loss += rnn_backward(m, seqs[i], labels[i], g);
    result.loss_history.push_back(loss * inv_n);
    g.scale(inv_n);
    const double norm = g.norm();
    if (norm > params.clip_norm) g.scale(params.clip_norm / norm);
    m.w_xh -= params.learning_rate * g.w_xh;
    m.w_hh -= params.learning_rate * g.w_hh;
    m.b_h -= params.learning_rate * g.b_h;
    m.w_hy -= params.learning_rate * g.w_hy;
    m.b_y -= params.learning_rate * g.b_y;
  }
  return result;
}

RnnPrediction rnn_predict(const Rnn& model, const Sequence& seq) {
  RnnPrediction p;
  p.probability = rnn_forward(model, seq);
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

namespace {

template <typename M, typename V, typename Ret>
Ret& flat_access(M& w_xh, M& w_hh, V& b_h, V& w_hy, Ret& b_y, std::size_t k) {
  const auto sx = static_cast<std::size_t>(w_xh.size());
  if (k < sx) return w_xh.data()[k];
  k -= sx;
  const auto sh = static_cast<std::size_t>(w_hh.size());
  if (k < sh) return w_hh.data()[k];
  k -= sh;
  const auto sb = static_cast<std::size_t>(b_h.size());
  if (k < sb) return b_h.data()[k];
  k -= sb;
  const auto sy = static_cast<std::size_t>(w_hy.size());
  if (k < sy) return w_hy.data()[k];
  k -= sy;
  if (k == 0) return b_y;
  throw Error(ErrorCode::InvalidArgument, "parameter index out of range");
}

}  // namespace

double& rnn_parameter(Rnn& m, std::size_t k) { return flat_access(m.w_xh, m.w_hh, m.b_h, m.w_hy, m.b_y, k); }

double rnn_gradient(const RnnGradients& g, std::size_t k) {
  auto& c = const_cast<RnnGradients&>(g);
  return flat_access(c.w_xh, c.w_hh, c.b_h, c.w_hy, c.b_y, k);
}

}  // namespace herdsig::ml
