#include "herdsig/feature_table.hpp"

#include <cstdlib>
#include "json.hpp"

#include "herdsig/error.hpp"
#include "herdsig/fileutil.hpp"

namespace herdsig {

std::string feature_csv_header() {
  std::string h = "source_id,start_s,end_s";
  for (const auto& n : feature_names()) h += ',' + n;
  h += ",label";
  return h;
}

FeatureRow make_feature_row(const std::string& source_id, double start_s, double end_s,
                            const AcousticFeatures& features, std::optional<CallLabel> label) {
  return {source_id, start_s, end_s, feature_values(features), label};
}

std::string format_feature_csv(const FeatureTable& table) {
  std::string out = feature_csv_header() + '\n';
  for (const auto& r : table.rows) {
    out += csv_escape(r.source_id) + ',' + format_g6(r.start_s) + ',' + format_g6(r.end_s);
    for (const auto& v : r.values) {
      out += ',';
      if (v) out += format_g6(*v);
    }
    out += ',';
    if (r.label) out += label_code(*r.label);
    out += '\n';
  }
  return out;
}

namespace {

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

FeatureTable parse_feature_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != feature_csv_header()) {
    throw Error(ErrorCode::SchemaMismatch, "feature CSV header does not match the expected columns");
  }
  const std::size_t n_feat = feature_names().size();
  FeatureTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != n_feat + 4) {
      throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(i + 1) + ": wrong field count");
    }
    FeatureRow row;
    row.source_id = f[0];
    row.start_s = parse_number(f[1], i + 1);
    row.end_s = parse_number(f[2], i + 1);
    row.values.resize(n_feat);
    for (std::size_t k = 0; k < n_feat; ++k) {
      if (!f[3 + k].empty()) row.values[k] = parse_number(f[3 + k], i + 1);
    }
    if (!f.back().empty()) {
      try {
        row.label = parse_label(f.back());
      } catch (const Error&) {
        throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(i + 1) + ": bad label '" + f.back() + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) { return parse_feature_csv(read_text(path)); }

std::size_t feature_index(const std::string& name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw Error(ErrorCode::SchemaMismatch, "unknown feature column '" + name + "'");
}

std::string format_sequences(const std::vector<SequenceEntry>& entries) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["sequences"] = nlohmann::json::array();
  for (const auto& e : entries) {
    doc["sequences"].push_back({{"source_id", e.source_id}, {"start_s", e.start_s}, {"frames", e.frames}});
  }
  return doc.dump() + '\n';
}

std::vector<SequenceEntry> parse_sequences(const std::string& text) {
  std::vector<SequenceEntry> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& s : doc.at("sequences")) {
      SequenceEntry e;
      e.source_id = s.at("source_id").get<std::string>();
      e.start_s = s.at("start_s").get<double>();
      e.frames = s.at("frames").get<std::vector<std::vector<double>>>();
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaMismatch, std::string("sequence file: ") + ex.what());
  }
  return out;
}

}  // namespace herdsig
