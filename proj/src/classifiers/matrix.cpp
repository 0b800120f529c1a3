#include "herdsig/classifiers/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "herdsig/error.hpp"
#include "herdsig/random.hpp"

namespace herdsig::ml {

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& idx) const {
  FeatureMatrix out;
  out.columns = columns;
  out.rows.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (std::size_t i : idx) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

std::vector<double> column_medians(const FeatureTable& table, const std::vector<std::string>& columns) {
  std::vector<double> med(columns.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const std::size_t k = feature_index(columns[c]);
    std::vector<double> v;
    for (const auto& r : table.rows) {
      if (r.values[k]) v.push_back(*r.values[k]);
    }
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    med[c] = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  }
  return med;
}

FeatureMatrix build_matrix(const FeatureTable& table, const std::vector<std::string>& columns,
                           const std::vector<double>& medians, bool allow_unlabeled) {
  if (medians.size() != columns.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one median per column required");
  }
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(feature_index(c));
  FeatureMatrix m;
  m.columns = columns;
  for (const auto& r : table.rows) {
    if (!r.label && !allow_unlabeled) continue;
    Row row(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& v = r.values[idx[c]];
      row[c] = v && std::isfinite(*v) ? *v : medians[c];
    }
    m.rows.push_back(std::move(row));
    m.labels.push_back(r.label ? (*r.label == CallLabel::HFC ? 1 : 0) : -1);
  }
  return m;
}

Row Standardizer::apply(const Row& x) const {
  if (x.size() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "row width differs from standardizer");
  Row z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / stddev[j];
  return z;
}

Row Standardizer::inverse(const Row& z) const {
  if (z.size() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "row width differs from standardizer");
  Row x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * stddev[j] + mean[j];
  return x;
}

std::vector<Row> Standardizer::apply(const std::vector<Row>& rows) const {
  std::vector<Row> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

Standardizer standardize_fit(const std::vector<Row>& rows) {
  Standardizer s;
  if (rows.empty()) return s;
  const std::size_t d = rows[0].size();
  const double n = static_cast<double>(rows.size());
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) s.stddev[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    s.stddev[j] = std::sqrt(s.stddev[j] / n);
    if (s.stddev[j] < 1e-12) {
      // Constant column: pass through unchanged.
      s.stddev[j] = 1.0;
      s.mean[j] = 0.0;
    }
  }
  return s;
}

std::vector<Row> standardize_apply(const Standardizer& s, const std::vector<Row>& rows) { return s.apply(rows); }

Split stratified_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  Split split;
  Rng rng(seed);
  for (int cls : {1, 0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    if (idx.size() < 2) {
      throw Error(ErrorCode::ClassTooSmall, "class " + std::to_string(cls) + " has fewer than two rows");
    }
    rng.shuffle(idx);
    auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(idx.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    split.test.insert(split.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

FeatureMatrix balance_classes(const FeatureMatrix& m) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < m.size(); ++i) (m.labels[i] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty() || pos.size() == neg.size()) return m;
  auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t target = std::max(pos.size(), neg.size());
  std::vector<std::size_t> idx(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) idx[i] = i;
  for (std::size_t k = 0; minority.size() + k < target; ++k) idx.push_back(minority[k % minority.size()]);
  return m.subset(idx);
}

}  // namespace herdsig::ml
