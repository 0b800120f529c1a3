#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herdsig/feature_table.hpp"

namespace herdsig::ml {

using Row = std::vector<double>;

// Labeled numeric design matrix. Labels: 1 = HFC, 0 = LFC.
struct FeatureMatrix {
  std::vector<Row> rows;
  std::vector<int> labels;
  std::vector<std::string> columns;

  std::size_t size() const { return rows.size(); }
  std::size_t dims() const { return columns.size(); }
  FeatureMatrix subset(const std::vector<std::size_t>& idx) const;
};

inline const std::vector<std::string>& core_feature_set() {
  static const std::vector<std::string> cols{"f0_mean", "amplitude_db", "duration_s"};
  return cols;
}

// Per-column median of the present values (0 for a column with none).
std::vector<double> column_medians(const FeatureTable& table, const std::vector<std::string>& columns);

// Selects the named columns, fills missing cells from `medians` and keeps
// only labeled rows unless allow_unlabeled is set (then label = -1).
FeatureMatrix build_matrix(const FeatureTable& table, const std::vector<std::string>& columns,
                           const std::vector<double>& medians, bool allow_unlabeled = false);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;  // 1 where the column is constant

  Row apply(const Row& x) const;
  Row inverse(const Row& z) const;
  std::vector<Row> apply(const std::vector<Row>& rows) const;
};

// Population statistics; std below 1e-12 is replaced by 1.
Standardizer standardize_fit(const std::vector<Row>& rows);
std::vector<Row> standardize_apply(const Standardizer& s, const std::vector<Row>& rows);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-class shuffled split; each class contributes round(n_c * test_fraction)
// test rows, clamped so both sides keep at least one row.
Split stratified_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed);

// Duplicates minority-class rows (cycling) until the classes are balanced.
FeatureMatrix balance_classes(const FeatureMatrix& m);

}  // namespace herdsig::ml
