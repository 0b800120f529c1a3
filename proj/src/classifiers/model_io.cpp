#include "herdsig/classifiers/model.hpp"

#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"
#include "json.hpp"

namespace herdsig::ml {

using nlohmann::json;

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Forest: return "rf";
    case ModelKind::Svm: return "svm";
    case ModelKind::Rnn: return "rnn";
  }
  return "rf";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "rf") return ModelKind::Forest;
  if (name == "svm") return ModelKind::Svm;
  if (name == "rnn") return ModelKind::Rnn;
  throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + name + "'");
}

std::vector<Sequence> align_sequences(const FeatureTable& table, const std::vector<SequenceEntry>& entries,
                                      bool labeled_only) {
  if (entries.size() != table.rows.size()) {
    throw Error(ErrorCode::SchemaMismatch, "sequence file has " + std::to_string(entries.size()) +
                                               " entries for " + std::to_string(table.rows.size()) + " rows");
  }
  std::vector<Sequence> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].source_id != table.rows[i].source_id) {
      throw Error(ErrorCode::SchemaMismatch, "sequence " + std::to_string(i) + " belongs to " +
                                                 entries[i].source_id + ", row to " + table.rows[i].source_id);
    }
    if (labeled_only && !table.rows[i].label) continue;
    out.push_back(entries[i].frames);
  }
  return out;
}

namespace {

std::vector<Sequence> prepare_sequences(const std::vector<Sequence>& raw, std::size_t max_steps,
                                        const Standardizer* st) {
  std::vector<Sequence> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    if (s.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no steps");
    auto d = decimate(s, max_steps);
    if (st) {
      for (auto& x : d) x = st->apply(x);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TrainedModel train_model(const FeatureTable& table, const std::vector<SequenceEntry>* sequences,
                         const TrainOptions& options) {
  TrainedModel model;
  model.kind = options.kind;
  model.csv_header = feature_csv_header();
  model.seed = options.seed;
  model.balance = options.balance;

  std::vector<int> labels;
  for (const auto& r : table.rows) {
    if (r.label) labels.push_back(*r.label == CallLabel::HFC ? 1 : 0);
  }
  if (labels.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no labeled rows");

  std::vector<std::size_t> train_idx;
  model.split.n_rows = labels.size();
  model.split.test_fraction = options.test_fraction;
  if (options.test_fraction > 0.0) {
    const auto split = stratified_split(labels, options.test_fraction, options.seed);
    train_idx = split.train;
    model.split.test_rows = split.test;
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) train_idx.push_back(i);
  }

  if (options.kind == ModelKind::Rnn) {
    if (!sequences) throw Error(ErrorCode::SchemaMismatch, "rnn training needs the MFCC sequence file");
    const auto all = align_sequences(table, *sequences, true);
    std::vector<Sequence> raw;
    std::vector<int> y;
    for (std::size_t i : train_idx) {
      raw.push_back(all[i]);
      y.push_back(labels[i]);
    }
    if (options.balance) {
      std::vector<std::size_t> pos, neg;
      for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? pos : neg).push_back(i);
      auto& minority = pos.size() < neg.size() ? pos : neg;
      const std::size_t target = std::max(pos.size(), neg.size());
      for (std::size_t k = 0; !minority.empty() && minority.size() + k < target; ++k) {
        raw.push_back(raw[minority[k % minority.size()]]);
        y.push_back(y[minority[k % minority.size()]]);
      }
    }
    const auto decimated = prepare_sequences(raw, options.rnn.max_steps, nullptr);
    std::vector<Row> frames;
    for (const auto& s : decimated) frames.insert(frames.end(), s.begin(), s.end());
    model.standardizer = standardize_fit(frames);
    for (std::size_t k = 0; k < model.standardizer.mean.size(); ++k) model.columns.push_back("mfcc_" + std::to_string(k));
    std::vector<Sequence> ready;
    for (const auto& s : decimated) {
      Sequence z;
      for (const auto& x : s) z.push_back(model.standardizer.apply(x));
      ready.push_back(std::move(z));
    }
    RnnParams p = options.rnn;
    p.seed = options.seed;
    model.sequence_max_steps = p.max_steps;
    model.rnn_params = p;
    model.parameters = train_rnn(ready, y, p).model;
    return model;
  }

  model.columns = options.columns;
  {
    // Imputation medians come from the training rows only.
    FeatureTable train_table;
    std::vector<bool> in_train(labels.size(), false);
    for (std::size_t i : train_idx) in_train[i] = true;
    std::size_t labeled = 0;
    for (const auto& r : table.rows) {
      if (r.label && in_train[labeled++]) train_table.rows.push_back(r);
    }
    model.imputation_medians = column_medians(train_table, options.columns);
  }
  auto train = build_matrix(table, options.columns, model.imputation_medians).subset(train_idx);
  if (options.balance) train = balance_classes(train);
  model.standardizer = standardize_fit(train.rows);
  train.rows = model.standardizer.apply(train.rows);

  if (options.kind == ModelKind::Forest) {
    ForestParams p = options.forest;
    p.seed = options.seed;
    model.parameters = train_forest(train, p);
  } else {
    SvmParams p = options.svm;
    p.seed = options.seed;
    model.parameters = train_svm(train, true, p);
  }
  return model;
}

std::vector<Scored> predict_rows(const TrainedModel& model, const FeatureTable& table,
                                 const std::vector<SequenceEntry>* sequences) {
  std::vector<Scored> out;
  if (model.kind == ModelKind::Rnn) {
    if (!sequences) throw Error(ErrorCode::SchemaMismatch, "rnn prediction needs the MFCC sequence file");
    const auto& rnn = std::get<Rnn>(model.parameters);
    const auto seqs = align_sequences(table, *sequences, false);
    for (const auto& s : seqs) {
      if (s.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no steps");
      Sequence z;
      for (const auto& x : decimate(s, model.sequence_max_steps)) z.push_back(model.standardizer.apply(x));
      const auto p = rnn_predict(rnn, z);
      out.push_back({p.label, p.probability});
    }
    return out;
  }
  const auto m = build_matrix(table, model.columns, model.imputation_medians, true);
  for (const auto& row : m.rows) {
    const auto z = model.standardizer.apply(row);
    if (model.kind == ModelKind::Forest) {
      const auto p = forest_predict(std::get<Forest>(model.parameters), z);
      out.push_back({p.label, p.probability});
    } else {
      const auto p = svm_predict(std::get<LinearSvm>(model.parameters), z);
      out.push_back({p.label, p.score});
    }
  }
  return out;
}

// JSON -----------------------------------------------------------------------

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size());
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != d) {
      throw Error(ErrorCode::SchemaMismatch, "ragged matrix in model file");
    }
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["kind"] = model_kind_name(model.kind);
  doc["csv_header"] = model.csv_header;
  doc["columns"] = model.columns;
  doc["standardizer"] = {{"mean", model.standardizer.mean}, {"std", model.standardizer.stddev}};
  doc["imputation_medians"] = model.imputation_medians;
  doc["seed"] = model.seed;
  doc["split"] = {{"test_fraction", model.split.test_fraction},
                  {"n_rows", model.split.n_rows},
                  {"test_rows", model.split.test_rows}};

  json hyper, params;
  hyper["balance"] = model.balance;
  if (const auto* f = std::get_if<Forest>(&model.parameters)) {
    hyper["n_trees"] = f->params.n_trees;
    hyper["max_depth"] = f->params.max_depth;
    hyper["min_leaf"] = f->params.min_leaf;
    params["n_features"] = f->n_features;
    params["trees"] = json::array();
    for (const auto& t : f->trees) {
      json nodes = json::array();
      for (const auto& n : t.nodes) {
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.count_lfc, n.count_hfc,
                                     n.impurity_decrease}));
      }
      params["trees"].push_back(nodes);
    }
  } else if (const auto* s = std::get_if<LinearSvm>(&model.parameters)) {
    hyper["c"] = s->params.c;
    hyper["epochs"] = s->params.epochs;
    params["w"] = s->w;
    params["b"] = s->b;
  } else {
    const auto& r = std::get<Rnn>(model.parameters);
    hyper["hidden"] = r.hidden();
    hyper["max_steps"] = model.sequence_max_steps;
    hyper["epochs"] = model.rnn_params.epochs;
    hyper["learning_rate"] = model.rnn_params.learning_rate;
    hyper["clip_norm"] = model.rnn_params.clip_norm;
    params["w_xh"] = matrix_json(r.w_xh);
    params["w_hh"] = matrix_json(r.w_hh);
    params["b_h"] = vector_json(r.b_h);
    params["w_hy"] = vector_json(r.w_hy);
    params["b_y"] = r.b_y;
  }
  doc["hyperparameters"] = hyper;
  doc["parameters"] = params;
  return doc.dump(1) + '\n';
}

TrainedModel model_from_json(const std::string& text) {
  TrainedModel model;
  try {
    const auto doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw Error(ErrorCode::SchemaMismatch, "unsupported model schema version");
    }
    model.kind = parse_model_kind(doc.at("kind").get<std::string>());
    model.csv_header = doc.at("csv_header").get<std::string>();
    model.columns = doc.at("columns").get<std::vector<std::string>>();
    model.standardizer.mean = doc.at("standardizer").at("mean").get<std::vector<double>>();
    model.standardizer.stddev = doc.at("standardizer").at("std").get<std::vector<double>>();
    model.imputation_medians = doc.at("imputation_medians").get<std::vector<double>>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.split.test_fraction = doc.at("split").at("test_fraction").get<double>();
    model.split.n_rows = doc.at("split").at("n_rows").get<std::size_t>();
    model.split.test_rows = doc.at("split").at("test_rows").get<std::vector<std::size_t>>();
    const auto& hyper = doc.at("hyperparameters");
    const auto& params = doc.at("parameters");
    model.balance = hyper.at("balance").get<bool>();
    switch (model.kind) {
      case ModelKind::Forest: {
        Forest f;
        f.params.n_trees = hyper.at("n_trees").get<std::size_t>();
        f.params.max_depth = hyper.at("max_depth").get<std::size_t>();
        f.params.min_leaf = hyper.at("min_leaf").get<std::size_t>();
        f.params.seed = model.seed;
        f.n_features = params.at("n_features").get<std::size_t>();
        for (const auto& t : params.at("trees")) {
          DecisionTree tree;
          for (const auto& n : t) {
            TreeNode node;
            node.feature = n.at(0).get<int>();
            node.threshold = n.at(1).get<double>();
            node.left = n.at(2).get<int>();
            node.right = n.at(3).get<int>();
            node.count_lfc = n.at(4).get<double>();
            node.count_hfc = n.at(5).get<double>();
            node.impurity_decrease = n.at(6).get<double>();
            tree.nodes.push_back(node);
          }
          f.trees.push_back(std::move(tree));
        }
        model.parameters = std::move(f);
        break;
      }
      case ModelKind::Svm: {
        LinearSvm s;
        s.params.c = hyper.at("c").get<double>();
        s.params.epochs = hyper.at("epochs").get<std::size_t>();
        s.params.seed = model.seed;
        s.w = params.at("w").get<std::vector<double>>();
        s.b = params.at("b").get<double>();
        model.parameters = std::move(s);
        break;
      }
      case ModelKind::Rnn: {
        Rnn r;
        r.w_xh = matrix_from(params.at("w_xh"));
        r.w_hh = matrix_from(params.at("w_hh"));
        r.b_h = vector_from(params.at("b_h"));
        r.w_hy = vector_from(params.at("w_hy"));
        r.b_y = params.at("b_y").get<double>();
        model.sequence_max_steps = hyper.at("max_steps").get<std::size_t>();
        model.rnn_params.hidden = static_cast<std::size_t>(r.w_hh.rows());
        model.rnn_params.max_steps = model.sequence_max_steps;
        model.rnn_params.epochs = hyper.at("epochs").get<std::size_t>();
        model.rnn_params.learning_rate = hyper.at("learning_rate").get<double>();
        model.rnn_params.clip_norm = hyper.at("clip_norm").get<double>();
        model.rnn_params.seed = model.seed;
        model.parameters = std::move(r);
        break;
      }
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::SchemaMismatch, std::string("model file: ") + ex.what());
  }
  return model;
}

TrainedModel load_model(const std::filesystem::path& path) { return model_from_json(read_text(path)); }

}  // namespace herdsig::ml
