#include "herdsig/classifiers/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "herdsig/error.hpp"
#include "herdsig/parallel.hpp"
#include "herdsig/random.hpp"

namespace herdsig::ml {

double gini(double a, double b) noexcept {
  const double n = a + b;
  if (n <= 0.0) return 0.0;
  const double pa = a / n, pb = b / n;
  return 1.0 - pa * pa - pb * pb;
}

std::size_t features_per_split(std::size_t d) noexcept {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
}

const TreeNode& DecisionTree::leaf_for(const Row& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i];
}

namespace {

struct Builder {
  const FeatureMatrix& data;
  const ForestParams& params;
  Rng rng;
  double root_size = 0.0;
  DecisionTree tree;

  struct Best {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child impurity
    std::size_t n_left = 0;
  };

  int build(std::vector<std::size_t>& idx, std::size_t begin, std::size_t end, std::size_t depth) {
    TreeNode node;
    for (std::size_t k = begin; k < end; ++k) (data.labels[idx[k]] == 1 ? node.count_hfc : node.count_lfc) += 1.0;
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const std::size_t n = end - begin;
    const double parent = gini(node.count_lfc, node.count_hfc);
    if (depth >= params.max_depth || n < 2 * params.min_leaf || parent == 0.0) return id;

    const Best best = find_split(idx, begin, end);
    if (best.feature < 0 || !(parent - best.impurity > 1e-12)) return id;

    const auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                       idx.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
                                         return data.rows[r][static_cast<std::size_t>(best.feature)] <= best.threshold;
                                       });
    const auto mid = static_cast<std::size_t>(mid_it - idx.begin());
    tree.nodes[static_cast<std::size_t>(id)].feature = best.feature;
    tree.nodes[static_cast<std::size_t>(id)].threshold = best.threshold;
    tree.nodes[static_cast<std::size_t>(id)].impurity_decrease =
        static_cast<double>(n) / root_size * (parent - best.impurity);
    const int l = build(idx, begin, mid, depth + 1);
    const int r = build(idx, mid, end, depth + 1);
    tree.nodes[static_cast<std::size_t>(id)].left = l;
    tree.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  Best find_split(const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end) {
    const std::size_t d = data.dims();
    const std::size_t mtry = features_per_split(d);
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t n = end - begin;

    Best best;
    best.impurity = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> vals(n);
    std::size_t informative = 0;
    // Sample features without replacement; constant features do not count
    // toward the mtry budget.
    for (std::size_t k = 0; k < d && informative < mtry; ++k) {
      std::swap(order[k], order[k + rng.index(d - k)]);
      const std::size_t f = order[k];
      for (std::size_t i = 0; i < n; ++i) vals[i] = {data.rows[idx[begin + i]][f], data.labels[idx[begin + i]]};
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;
      ++informative;

      double total_h = 0.0;
      for (const auto& v : vals) total_h += v.second == 1;
      const double total_l = static_cast<double>(n) - total_h;
      double left_h = 0.0, left_l = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        (vals[i].second == 1 ? left_h : left_l) += 1.0;
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t nl = i + 1;
        if (nl < params.min_leaf || n - nl < params.min_leaf) continue;
        const double right_h = total_h - left_h, right_l = total_l - left_l;
        const double w = (static_cast<double>(nl) * gini(left_l, left_h) +
                          static_cast<double>(n - nl) * gini(right_l, right_h)) /
                         static_cast<double>(n);
        if (w < best.impurity) {
          best.impurity = w;
          best.feature = static_cast<int>(f);
          best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
          best.n_left = nl;
        }
      }
    }
    return best;
  }
};

}  // namespace

Forest train_forest(const FeatureMatrix& train, const ForestParams& params) {
  if (train.size() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  if (params.n_trees == 0 || params.min_leaf == 0) {
    throw Error(ErrorCode::InvalidArgument, "forest needs at least one tree and min_leaf >= 1");
  }
  Forest forest;
  forest.params = params;
  forest.n_features = train.dims();
  forest.trees.resize(params.n_trees);
  parallel_for(params.n_trees, params.threads, [&](std::size_t t) {
    Builder b{train, params, Rng(params.seed + t), static_cast<double>(train.size()), {}};
    std::vector<std::size_t> idx(train.size());
    for (auto& i : idx) i = b.rng.index(train.size());
    b.build(idx, 0, idx.size(), 0);
    forest.trees[t] = std::move(b.tree);
  });
  return forest;
}

ForestPrediction forest_predict(const Forest& forest, const Row& x) {
  if (x.size() != forest.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(x.size()) + " features, model expects " +
                                                  std::to_string(forest.n_features));
  }
  double sum = 0.0;
  for (const auto& t : forest.trees) sum += t.leaf_for(x).hfc_fraction();
  ForestPrediction p;
  p.probability = sum / static_cast<double>(forest.trees.size());
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

std::vector<double> feature_importance(const Forest& forest) {
  std::vector<double> imp(forest.n_features, 0.0);
  for (const auto& t : forest.trees) {
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) imp[static_cast<std::size_t>(n.feature)] += n.impurity_decrease;
    }
  }
  const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (total > 0.0) {
    for (double& v : imp) v /= total;
  }
  return imp;
}

}  // namespace herdsig::ml
