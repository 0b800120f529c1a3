#pragma once

#include <cstdint>
#include <vector>

#include "herdsig/classifiers/matrix.hpp"

namespace herdsig::ml {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double count_lfc = 0.0;  // bootstrap samples reaching the node
  double count_hfc = 0.0;
  double impurity_decrease = 0.0;  // sample fraction x Gini decrease, 0 at leaves

  bool is_leaf() const { return feature < 0; }
  double hfc_fraction() const { return count_hfc / (count_hfc + count_lfc); }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at index 0

  const TreeNode& leaf_for(const Row& x) const;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 2;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
};

struct Forest {
  ForestParams params;
  std::size_t n_features = 0;
  std::vector<DecisionTree> trees;
};

double gini(double count_a, double count_b) noexcept;

// Features examined per node: floor(sqrt(d)), at least 1.
std::size_t features_per_split(std::size_t d) noexcept;

// Bootstrap-aggregated CART trees; tree t draws from seed + t.
Forest train_forest(const FeatureMatrix& train, const ForestParams& params = {});

struct ForestPrediction {
  int label = 0;
  double probability = 0.0;  // mean leaf HFC fraction
};

ForestPrediction forest_predict(const Forest& forest, const Row& x);

// Mean decrease in impurity per feature, averaged over trees, sums to 1.
std::vector<double> feature_importance(const Forest& forest);

}  // namespace herdsig::ml
