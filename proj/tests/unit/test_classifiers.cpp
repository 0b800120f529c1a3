#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "herdsig/classifiers/forest.hpp"
#include "herdsig/classifiers/matrix.hpp"
#include "herdsig/classifiers/model.hpp"
#include "herdsig/classifiers/rnn.hpp"
#include "herdsig/classifiers/svm.hpp"
#include "herdsig/random.hpp"
#include "herdsig/synth.hpp"
#include "oracles.hpp"
#include "signals.hpp"

namespace herdsig::ml {
namespace {

using herdsig::testing::error_code_of;

FeatureMatrix matrix(std::vector<Row> rows, std::vector<int> labels) {
  FeatureMatrix m;
  m.rows = std::move(rows);
  m.labels = std::move(labels);
  for (std::size_t j = 0; j < (m.rows.empty() ? 0 : m.rows[0].size()); ++j) m.columns.push_back("x" + std::to_string(j));
  return m;
}

// Two Gaussian blobs in d dimensions; class 1 centred at +shift on every axis.
FeatureMatrix blobs(std::size_t n_per_class, std::size_t d, double shift, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Row> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const int y = static_cast<int>(i % 2);
    Row x(d);
    for (double& v : x) v = rng.normal() + (y ? shift : -shift);
    rows.push_back(x);
    labels.push_back(y);
  }
  return matrix(rows, labels);
}

double accuracy(const Forest& f, const FeatureMatrix& m) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < m.size(); ++i) ok += forest_predict(f, m.rows[i]).label == m.labels[i];
  return static_cast<double>(ok) / static_cast<double>(m.size());
}

// Standardizer and splitting ----------------------------------------------------

TEST(Standardizer, ZeroMeanUnitStdAndInverse) {
  const auto m = blobs(50, 4, 2.0, 1);
  auto rows = m.rows;
  for (auto& r : rows) r[2] = r[2] * 40.0 + 7.0;
  const auto s = standardize_fit(rows);
  const auto z = standardize_apply(s, rows);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0, sq = 0.0;
    for (const auto& r : z) mean += r[j];
    mean /= static_cast<double>(z.size());
    for (const auto& r : z) sq += (r[j] - mean) * (r[j] - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(sq / static_cast<double>(z.size())), 1.0, 1e-9);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto back = s.inverse(z[i]);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(back[j], rows[i][j], 1e-9);
  }
}

TEST(Standardizer, ConstantColumnPassesThrough) {
  const std::vector<Row> rows{{3.0, 1.0}, {3.0, 2.0}, {3.0, 5.0}};
  const auto s = standardize_fit(rows);
  EXPECT_DOUBLE_EQ(s.apply(rows[1])[0], 3.0);
  EXPECT_EQ(error_code_of([&] { s.apply(Row{1.0}); }), ErrorCode::DimensionMismatch);
}

std::vector<int> class_labels(std::size_t hfc, std::size_t lfc) {
  std::vector<int> y(hfc, 1);
  y.insert(y.end(), lfc, 0);
  return y;
}

TEST(StratifiedSplit, BalancedHundreds) {
  const auto y = class_labels(100, 100);
  const auto s = stratified_split(y, 0.2, 42);
  std::size_t hfc = 0;
  for (std::size_t i : s.test) hfc += y[i];
  EXPECT_EQ(s.test.size(), 40u);
  EXPECT_EQ(hfc, 20u);
}

TEST(StratifiedSplit, ImbalancedCounts) {
  const auto y = class_labels(137, 45);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = stratified_split(y, 0.2, seed);
    std::size_t hfc = 0;
    for (std::size_t i : s.test) hfc += y[i];
    EXPECT_TRUE(hfc == 27 || hfc == 28) << hfc;
    EXPECT_EQ(s.test.size() - hfc, 9u);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(y.size());
    std::iota(expect.begin(), expect.end(), 0);
    EXPECT_EQ(all, expect);
  }
}

TEST(StratifiedSplit, DeterministicPerSeed) {
  const auto y = class_labels(30, 17);
  const auto a = stratified_split(y, 0.3, 9);
  const auto b = stratified_split(y, 0.3, 9);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(stratified_split(y, 0.3, 10).test, a.test);
}

TEST(StratifiedSplit, RejectsTinyClassesAndBadFractions) {
  EXPECT_EQ(error_code_of([] { stratified_split(class_labels(10, 1), 0.2, 1); }), ErrorCode::ClassTooSmall);
  EXPECT_EQ(error_code_of([] { stratified_split(class_labels(10, 10), 1.0, 1); }), ErrorCode::InvalidArgument);
}

TEST(BalanceClasses, DuplicatesMinority) {
  const auto m = matrix({{1}, {2}, {3}, {4}, {5}}, {1, 1, 1, 1, 0});
  const auto b = balance_classes(m);
  EXPECT_EQ(b.size(), 8u);
  EXPECT_EQ(std::count(b.labels.begin(), b.labels.end(), 0), 4);
}

TEST(BuildMatrix, ImputesMediansAndSkipsUnlabeled) {
  FeatureTable t;
  const std::size_t width = feature_names().size();
  const std::size_t f0 = feature_index("f0_mean");
  for (int i = 0; i < 4; ++i) {
    FeatureRow r;
    r.source_id = "r" + std::to_string(i);
    r.values.assign(width, std::nullopt);
    if (i != 1) r.values[f0] = 100.0 * (i + 1);
    r.label = i == 3 ? std::nullopt : std::optional<CallLabel>(CallLabel::HFC);
    t.rows.push_back(r);
  }
  const auto med = column_medians(t, {"f0_mean"});
  EXPECT_DOUBLE_EQ(med[0], 300.0);
  const auto m = build_matrix(t, {"f0_mean"}, med);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m.rows[1][0], 300.0);
  EXPECT_EQ(build_matrix(t, {"f0_mean"}, med, true).size(), 4u);
}

// Forest ----------------------------------------------------------------------

TEST(Gini, KnownValues) {
  EXPECT_DOUBLE_EQ(gini(5, 5), 0.5);
  EXPECT_DOUBLE_EQ(gini(7, 0), 0.0);
  EXPECT_NEAR(gini(1, 3), 1.0 - 1.0 / 16 - 9.0 / 16, 1e-15);
  EXPECT_DOUBLE_EQ(gini(0, 0), 0.0);
  EXPECT_EQ(features_per_split(1), 1u);
  EXPECT_EQ(features_per_split(3), 1u);
  EXPECT_EQ(features_per_split(4), 2u);
  EXPECT_EQ(features_per_split(55), 7u);
}

TEST(Forest, SeparableToySetIsLearned) {
  const auto m = blobs(10, 2, 3.0, 2);
  const auto f = train_forest(m, {});
  EXPECT_DOUBLE_EQ(accuracy(f, m), 1.0);
}

// Exhaustive weighted-Gini search over every threshold of a 1-D sample.
struct OracleSplit {
  double threshold = 0.0;
  double decrease = 0.0;
};

OracleSplit brute_force_split(const std::vector<double>& x, const std::vector<int>& y, std::size_t min_leaf) {
  std::vector<double> values = x;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto counts = [&](auto pred) {
    double h = 0, l = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (pred(x[i])) (y[i] ? h : l) += 1.0;
    }
    return std::pair{h, l};
  };
  const auto [th, tl] = counts([](double) { return true; });
  const double n = th + tl;
  OracleSplit best;
  double best_w = 1e300;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double t = 0.5 * (values[k] + values[k + 1]);
    const auto [lh, ll] = counts([&](double v) { return v <= t; });
    const double nl = lh + ll, nr = n - nl;
    if (nl < static_cast<double>(min_leaf) || nr < static_cast<double>(min_leaf)) continue;
    const double w = (nl * gini(ll, lh) + nr * gini(tl - ll, th - lh)) / n;
    if (w < best_w) {
      best_w = w;
      best.threshold = t;
      best.decrease = gini(tl, th) - w;
    }
  }
  return best;
}

TEST(Forest, RootSplitMatchesBruteForceOracle) {
  Rng rng(3);
  std::vector<Row> rows;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    const double x = rng.uniform(-3.0, 3.0);
    rows.push_back({x});
    labels.push_back((x > 0.4) != (rng.uniform() < 0.15) ? 1 : 0);
  }
  const auto m = matrix(rows, labels);
  ForestParams p;
  p.n_trees = 12;
  p.seed = 100;
  const auto f = train_forest(m, p);
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    // Tree t bootstraps with its own stream seeded seed + t.
    Rng boot(p.seed + t);
    std::vector<double> bx;
    std::vector<int> by;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::size_t r = boot.index(m.size());
      bx.push_back(m.rows[r][0]);
      by.push_back(m.labels[r]);
    }
    const auto oracle = brute_force_split(bx, by, p.min_leaf);
    const auto& root = f.trees[t].nodes[0];
    ASSERT_FALSE(root.is_leaf());
    EXPECT_EQ(root.feature, 0);
    EXPECT_DOUBLE_EQ(root.threshold, oracle.threshold) << t;
    EXPECT_NEAR(root.impurity_decrease, oracle.decrease, 1e-12) << t;
  }
}

TEST(Forest, SignFeatureSplitsNearZero) {
  std::vector<Row> rows;
  std::vector<int> labels;
  for (int i = -20; i < 20; ++i) {
    const double x = (i + 0.5) / 10.0;
    rows.push_back({x});
    labels.push_back(x > 0 ? 1 : 0);
  }
  const auto f = train_forest(matrix(rows, labels), {});
  for (const auto& t : f.trees) {
    ASSERT_EQ(t.nodes[0].feature, 0);
    EXPECT_LT(std::abs(t.nodes[0].threshold), 0.5);
  }
}

TEST(Forest, PureTrainingSetGivesSingleLeaves) {
  const auto m = matrix({{1, 2}, {3, 4}, {5, 6}, {7, 8}}, {1, 1, 1, 1});
  const auto f = train_forest(m, {});
  for (const auto& t : f.trees) EXPECT_EQ(t.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(forest_predict(f, {0, 0}).probability, 1.0);
}

TEST(Forest, ProbabilityIsMeanLeafFraction) {
  Forest f;
  f.n_features = 1;
  for (int t = 0; t < 100; ++t) {
    DecisionTree tree;
    TreeNode leaf;
    (t < 60 ? leaf.count_hfc : leaf.count_lfc) = 3.0;
    tree.nodes.push_back(leaf);
    f.trees.push_back(tree);
  }
  const auto p = forest_predict(f, {0.0});
  EXPECT_DOUBLE_EQ(p.probability, 0.6);
  EXPECT_EQ(p.label, 1);
  EXPECT_EQ(error_code_of([&] { forest_predict(f, {0.0, 1.0}); }), ErrorCode::DimensionMismatch);
}

TEST(Forest, PureLeavesGiveMajorityVote) {
  const auto m = blobs(40, 3, 0.5, 4);
  ForestParams p;
  p.min_leaf = 1;
  p.max_depth = 64;
  p.n_trees = 31;
  const auto f = train_forest(m, p);
  for (const auto& t : f.trees) {
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) ASSERT_TRUE(n.count_hfc == 0.0 || n.count_lfc == 0.0);
    }
  }
  const auto probe = blobs(50, 3, 0.5, 5);
  for (const auto& x : probe.rows) {
    int votes = 0;
    for (const auto& t : f.trees) votes += t.leaf_for(x).hfc_fraction() > 0.5;
    EXPECT_EQ(forest_predict(f, x).label, 2 * votes >= static_cast<int>(p.n_trees) ? 1 : 0);
  }
}

TEST(Forest, DeterministicAcrossRunsAndThreads) {
  const auto m = blobs(60, 5, 0.4, 6);
  ForestParams p;
  p.n_trees = 20;
  const auto a = train_forest(m, p);
  p.threads = 4;
  const auto b = train_forest(m, p);
  ASSERT_EQ(a.trees.size(), b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    ASSERT_EQ(a.trees[t].nodes.size(), b.trees[t].nodes.size());
    for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
      EXPECT_EQ(a.trees[t].nodes[k].feature, b.trees[t].nodes[k].feature);
      EXPECT_EQ(a.trees[t].nodes[k].threshold, b.trees[t].nodes[k].threshold);
    }
  }
}

TEST(Forest, MonotoneTransformKeepsPredictedLabels) {
  const auto m = blobs(25, 3, 0.6, 7);
  auto warped = m;
  for (auto& r : warped.rows) {
    r[0] = std::exp(r[0]);
    r[1] = r[1] * r[1] * r[1] + r[1];
  }
  const auto a = train_forest(m, {});
  const auto b = train_forest(warped, {});
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(forest_predict(a, m.rows[i]).label, forest_predict(b, warped.rows[i]).label) << i;
  }
}

TEST(Forest, ImportanceConcentratesOnTheInformativeFeature) {
  Rng rng(8);
  std::vector<Row> rows;
  for (int i = 0; i < 1000; ++i) rows.push_back({rng.normal(), rng.normal(), rng.normal()});
  std::vector<double> first;
  for (const auto& r : rows) first.push_back(r[0]);
  std::nth_element(first.begin(), first.begin() + 500, first.end());
  const double median = first[500];
  std::vector<int> labels;
  for (const auto& r : rows) labels.push_back(r[0] > median ? 1 : 0);
  const auto imp = feature_importance(train_forest(matrix(rows, labels), {}));
  EXPECT_GT(imp[0], 0.9);
  EXPECT_NEAR(std::accumulate(imp.begin(), imp.end(), 0.0), 1.0, 1e-9);
}

TEST(Forest, FrequencyLeadsImportanceOnClassRangeDraws) {
  std::vector<Row> rows;
  std::vector<int> labels;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto label = i % 2 ? CallLabel::HFC : CallLabel::LFC;
    const auto s = sample_spec(label, 500 + i, true);
    rows.push_back({s.f0_mean_hz, 20.0 * std::log10(s.peak_amplitude), s.duration_s});
    labels.push_back(label == CallLabel::HFC);
  }
  const auto imp = feature_importance(train_forest(matrix(rows, labels), {}));
  EXPECT_GT(imp[0], imp[1]);
  EXPECT_GT(imp[0], imp[2]);
  EXPECT_NEAR(imp[0] + imp[1] + imp[2], 1.0, 1e-9);
}

TEST(Forest, EmptyTrainingSet) {
  EXPECT_EQ(error_code_of([] { train_forest(FeatureMatrix{}, {}); }), ErrorCode::EmptyTrainingSet);
}

// SVM -------------------------------------------------------------------------

TEST(Svm, OneDimensionalSeparable) {
  const auto m = matrix({{-2}, {-1}, {1}, {2}}, {0, 0, 1, 1});
  const auto s = train_svm(m, true, {});
  ASSERT_EQ(s.w.size(), 1u);
  EXPECT_GT(s.w[0], 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(svm_predict(s, m.rows[i]).label, m.labels[i]);
}

FeatureMatrix svm_toy() {
  // Overlapping 2-D classes, standardized.
  auto m = blobs(15, 2, 0.7, 10);
  const auto st = standardize_fit(m.rows);
  m.rows = st.apply(m.rows);
  return m;
}

TEST(Svm, ObjectiveDecreasesAndMatchesGridOracle) {
  const auto m = svm_toy();
  SvmParams p;
  const auto s = train_svm(m, true, p);
  for (std::size_t e = 1; e < s.epoch_objective.size(); ++e) {
    EXPECT_LE(s.epoch_objective[e], s.epoch_objective[e - 1] + 1e-9) << e;
  }
  const auto grid = herdsig::testing::svm_grid_search(m, p.c);
  const double got = svm_objective(s.w, s.b, m, p.c);
  EXPECT_LE(got, 1.02 * grid.objective);
}

TEST(Svm, ScoresRankLikeTheGridOracle) {
  const auto m = svm_toy();
  const auto s = train_svm(m, true, {});
  const auto grid = herdsig::testing::svm_grid_search(m, 1.0);
  std::vector<double> ours, oracle;
  for (const auto& x : m.rows) {
    ours.push_back(svm_predict(s, x).score);
    oracle.push_back(grid.w0 * x[0] + grid.w1 * x[1] + grid.b);
  }
  for (std::size_t i = 0; i < ours.size(); ++i) {
    for (std::size_t j = 0; j < ours.size(); ++j) {
      if (oracle[i] - oracle[j] > 0.05) EXPECT_GT(ours[i], ours[j]) << i << " " << j;
    }
  }
}

TEST(Svm, DuplicatedRowsKeepTheDirection) {
  // Wide class gap: the optimum is the hard-margin solution, which duplication cannot move.
  auto m = blobs(15, 2, 6.0, 11);
  m.rows = standardize_fit(m.rows).apply(m.rows);
  auto doubled = m;
  doubled.rows.insert(doubled.rows.end(), m.rows.begin(), m.rows.end());
  doubled.labels.insert(doubled.labels.end(), m.labels.begin(), m.labels.end());
  const auto a = train_svm(m, true, {});
  const auto b = train_svm(doubled, true, {});
  const double cosine = (a.w[0] * b.w[0] + a.w[1] * b.w[1]) /
                        (std::hypot(a.w[0], a.w[1]) * std::hypot(b.w[0], b.w[1]));
  EXPECT_LT(std::acos(std::min(1.0, cosine)), 0.01);
}

TEST(Svm, BoundaryAndAffineScores) {
  LinearSvm s;
  s.w = {2.0, -1.0};
  s.b = -3.0;
  const Row on{2.0, 1.0};
  EXPECT_DOUBLE_EQ(svm_predict(s, on).score, 0.0);
  EXPECT_EQ(svm_predict(s, on).label, 1);
  const Row x{0.3, -0.7}, x2{0.6, -1.4}, zero{0.0, 0.0};
  EXPECT_NEAR(svm_predict(s, x2).score - svm_predict(s, zero).score,
              2.0 * (svm_predict(s, x).score - svm_predict(s, zero).score), 1e-12);
  EXPECT_EQ(error_code_of([&] { svm_predict(s, Row{1.0}); }), ErrorCode::DimensionMismatch);
}

TEST(Svm, ConstantShiftBeforeStandardizingKeepsLabels) {
  const auto raw = blobs(30, 3, 0.5, 12);
  auto shifted = raw;
  for (auto& r : shifted.rows) r[1] += 250.0;
  auto za = raw, zb = shifted;
  za.rows = standardize_fit(raw.rows).apply(raw.rows);
  zb.rows = standardize_fit(shifted.rows).apply(shifted.rows);
  const auto a = train_svm(za, true, {});
  const auto b = train_svm(zb, true, {});
  for (std::size_t i = 0; i < za.size(); ++i) {
    EXPECT_EQ(svm_predict(a, za.rows[i]).label, svm_predict(b, zb.rows[i]).label);
  }
}

TEST(Svm, Preconditions) {
  const auto m = svm_toy();
  EXPECT_EQ(error_code_of([&] { train_svm(m, false, {}); }), ErrorCode::NotStandardized);
  EXPECT_EQ(error_code_of([] { train_svm(FeatureMatrix{}, true, {}); }), ErrorCode::EmptyTrainingSet);
}

TEST(Svm, Deterministic) {
  const auto m = svm_toy();
  const auto a = train_svm(m, true, {});
  const auto b = train_svm(m, true, {});
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.b, b.b);
}

// RNN -------------------------------------------------------------------------

TEST(Rnn, GradientMatchesFiniteDifferences) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    const std::size_t steps = 1 + c % 5, d = 2 + c % 3, h = 3 + c % 4;
    const auto model = herdsig::testing::random_rnn(d, h, 50 + c);
    const auto seq = herdsig::testing::random_sequence(steps, d, 70 + c);
    const auto r = herdsig::testing::rnn_gradient_check(model, seq, static_cast<int>(c % 2));
    EXPECT_EQ(r.parameters, h * d + h * h + h + h + 1);
    EXPECT_LT(r.max_relative_error, 1e-4) << "case " << c;
  }
}

TEST(Rnn, GradientAtMfccWidth) {
  const auto model = init_rnn(13, 32, 3);
  const auto seq = herdsig::testing::random_sequence(3, 13, 4);
  EXPECT_LT(herdsig::testing::rnn_gradient_check(model, seq, 1).max_relative_error, 1e-4);
}

TEST(Rnn, ZeroWeightsGiveSigmoidOfBias) {
  auto m = init_rnn(2, 4, 1);
  for (std::size_t k = 0; k < m.size(); ++k) rnn_parameter(m, k) = 0.0;
  const auto seq = herdsig::testing::random_sequence(5, 2, 2);
  EXPECT_DOUBLE_EQ(rnn_forward(m, seq), 0.5);
  m.b_y = 1.3;
  EXPECT_NEAR(rnn_forward(m, seq), 1.0 / (1.0 + std::exp(-1.3)), 1e-15);
}

TEST(Rnn, InitRange) {
  const auto m = init_rnn(13, 32, 9);
  const double bound = 1.0 / std::sqrt(32.0);
  EXPECT_LE(m.w_xh.cwiseAbs().maxCoeff(), bound);
  EXPECT_LE(m.w_hh.cwiseAbs().maxCoeff(), bound);
  EXPECT_LE(m.w_hy.cwiseAbs().maxCoeff(), bound);
  EXPECT_EQ(m.b_h.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.b_y, 0.0);
  EXPECT_EQ(m.size(), 32u * 13 + 32 * 32 + 32 + 32 + 1);
}

struct ToyTask {
  std::vector<Sequence> seqs;
  std::vector<int> labels;
};

// Label = sign of the mean of a 1-D sequence.
ToyTask sign_task(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ToyTask t;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 3 + rng.index(6);
    const double offset = rng.uniform(-1.0, 1.0);
    Sequence s;
    double sum = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      const double v = offset + 0.3 * rng.normal();
      s.push_back({v});
      sum += v;
    }
    t.seqs.push_back(s);
    t.labels.push_back(sum > 0.0 ? 1 : 0);
  }
  return t;
}

TEST(Rnn, LearnsSignOfMean) {
  const auto task = sign_task(200, 21);
  RnnParams p;
  p.hidden = 8;
  p.epochs = 500;
  p.learning_rate = 0.5;
  const auto r = train_rnn(task.seqs, task.labels, p);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < task.seqs.size(); ++i) ok += rnn_predict(r.model, task.seqs[i]).label == task.labels[i];
  EXPECT_GE(static_cast<double>(ok) / static_cast<double>(task.seqs.size()), 0.95);

  const auto test = sign_task(200, 22);
  std::size_t flipped = 0;
  for (const auto& s : test.seqs) {
    Sequence neg = s;
    for (auto& x : neg) x[0] = -x[0];
    flipped += rnn_predict(r.model, s).label != rnn_predict(r.model, neg).label;
  }
  EXPECT_GE(static_cast<double>(flipped) / static_cast<double>(test.seqs.size()), 0.95);
}

TEST(Rnn, EarlyLossIsNonIncreasing) {
  const auto task = sign_task(100, 23);
  RnnParams p;
  p.epochs = 11;
  p.learning_rate = 0.01;
  const auto r = train_rnn(task.seqs, task.labels, p);
  ASSERT_GE(r.loss_history.size(), 11u);
  for (std::size_t e = 1; e <= 10; ++e) EXPECT_LE(r.loss_history[e], r.loss_history[e - 1]) << e;
}

TEST(Rnn, PredictionIsAProbabilityAndDeterministic) {
  const auto m = herdsig::testing::random_rnn(3, 6, 31);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto seq = herdsig::testing::random_sequence(1 + s % 7, 3, s);
    const auto a = rnn_predict(m, seq);
    EXPECT_GT(a.probability, 0.0);
    EXPECT_LT(a.probability, 1.0);
    EXPECT_EQ(a.probability, rnn_predict(m, seq).probability);
    EXPECT_EQ(a.label, a.probability >= 0.5 ? 1 : 0);
  }
}

TEST(Rnn, InputErrors) {
  const auto m = init_rnn(3, 4, 1);
  EXPECT_EQ(error_code_of([&] { rnn_predict(m, Sequence{}); }), ErrorCode::EmptySequence);
  EXPECT_EQ(error_code_of([&] { rnn_predict(m, Sequence{{1.0, 2.0}}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code_of([] { train_rnn({{{1.0}}}, {1, 0}); }), ErrorCode::LengthMismatch);
}

TEST(Rnn, DecimationAveragesBlocks) {
  Sequence s;
  for (int i = 0; i < 10; ++i) s.push_back({static_cast<double>(i)});
  EXPECT_EQ(decimate(s, 0), s);
  EXPECT_EQ(decimate(s, 20), s);
  const auto d = decimate(s, 5);
  ASSERT_EQ(d.size(), 5u);
  EXPECT_DOUBLE_EQ(d[0][0], 0.5);
  EXPECT_DOUBLE_EQ(d[4][0], 8.5);
  const auto odd = decimate(s, 3);
  ASSERT_LE(odd.size(), 3u);
  double total = 0.0;
  for (const auto& x : odd) total += x[0];
  EXPECT_GT(total, 0.0);
}

// Model files -----------------------------------------------------------------

struct Corpus {
  FeatureTable table;
  std::vector<SequenceEntry> sequences;
};

Corpus tabular_corpus(std::size_t n_per_class, std::uint64_t seed) {
  Corpus c;
  Rng rng(seed);
  const std::size_t width = feature_names().size();
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const auto label = i % 2 ? CallLabel::HFC : CallLabel::LFC;
    const auto s = sample_spec(label, seed * 1000 + i, true);
    FeatureRow r;
    r.source_id = "call" + std::to_string(i) + ".wav";
    r.end_s = s.duration_s;
    r.values.assign(width, std::nullopt);
    r.values[feature_index("f0_mean")] = s.f0_mean_hz;
    r.values[feature_index("amplitude_db")] = 20.0 * std::log10(s.peak_amplitude);
    r.values[feature_index("duration_s")] = s.duration_s;
    r.label = label;
    c.table.rows.push_back(r);
    SequenceEntry e;
    e.source_id = r.source_id;
    const std::size_t steps = 5 + rng.index(80);
    for (std::size_t k = 0; k < steps; ++k) {
      std::vector<double> frame(13);
      for (std::size_t j = 0; j < 13; ++j) frame[j] = rng.normal() + (label == CallLabel::HFC ? 0.8 : -0.8) * (j < 3);
      e.frames.push_back(frame);
    }
    c.sequences.push_back(e);
  }
  return c;
}

TEST(ModelIo, RoundTripPreservesPredictions) {
  const auto c = tabular_corpus(30, 4);
  for (auto kind : {ModelKind::Forest, ModelKind::Svm, ModelKind::Rnn}) {
    TrainOptions o;
    o.kind = kind;
    o.forest.n_trees = 15;
    o.rnn.epochs = 30;
    o.rnn.hidden = 8;
    const auto model = train_model(c.table, &c.sequences, o);
    const auto text = model_to_json(model);
    const auto back = model_from_json(text);
    EXPECT_EQ(model_to_json(back), text) << model_kind_name(kind);
    const auto a = predict_rows(model, c.table, &c.sequences);
    const auto b = predict_rows(back, c.table, &c.sequences);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].label, b[i].label);
      EXPECT_EQ(a[i].score, b[i].score);
    }
  }
}

TEST(ModelIo, TrainingIsDeterministic) {
  const auto c = tabular_corpus(20, 5);
  for (auto kind : {ModelKind::Forest, ModelKind::Svm, ModelKind::Rnn}) {
    TrainOptions o;
    o.kind = kind;
    o.forest.n_trees = 10;
    o.rnn.epochs = 10;
    o.rnn.hidden = 4;
    EXPECT_EQ(model_to_json(train_model(c.table, &c.sequences, o)), model_to_json(train_model(c.table, &c.sequences, o)));
  }
}

TEST(ModelIo, HoldoutSplitIsRecorded) {
  const auto c = tabular_corpus(25, 6);
  TrainOptions o;
  o.forest.n_trees = 5;
  const auto m = train_model(c.table, nullptr, o);
  EXPECT_EQ(m.split.n_rows, 50u);
  EXPECT_EQ(m.split.test_rows.size(), 10u);
  EXPECT_EQ(m.columns, core_feature_set());
}

TEST(ModelIo, SequenceAlignmentChecksCountAndSource) {
  auto c = tabular_corpus(3, 7);
  EXPECT_EQ(align_sequences(c.table, c.sequences, true).size(), 6u);
  auto wrong = c.sequences;
  wrong[2].source_id = "other.wav";
  EXPECT_EQ(error_code_of([&] { align_sequences(c.table, wrong, true); }), ErrorCode::SchemaMismatch);
  wrong = c.sequences;
  wrong.pop_back();
  EXPECT_EQ(error_code_of([&] { align_sequences(c.table, wrong, true); }), ErrorCode::SchemaMismatch);
  TrainOptions o;
  o.kind = ModelKind::Rnn;
  EXPECT_EQ(error_code_of([&] { train_model(c.table, nullptr, o); }), ErrorCode::SchemaMismatch);
}

TEST(ModelIo, KindNames) {
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::Forest);
  EXPECT_EQ(parse_model_kind("svm"), ModelKind::Svm);
  EXPECT_EQ(parse_model_kind("rnn"), ModelKind::Rnn);
  EXPECT_EQ(error_code_of([] { parse_model_kind("lstm"); }), ErrorCode::InvalidArgument);
}

TEST(ModelIo, MalformedJsonRejected) {
  EXPECT_TRUE(error_code_of([] { model_from_json("{\"kind\": \"rf\"}"); }).has_value());
  EXPECT_TRUE(error_code_of([] { model_from_json("not json"); }).has_value());
}

}  // namespace
}  // namespace herdsig::ml
