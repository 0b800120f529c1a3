#include "herdsig/textstats.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "herdsig/error.hpp"

namespace herdsig {

namespace {

void sort_entries(NgramTable& t) {
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

NgramTable from_map(std::size_t n, const std::map<std::string, std::size_t>& counts) {
  NgramTable t;
  t.n = n;
  t.entries.assign(counts.begin(), counts.end());
  sort_entries(t);
  return t;
}

}  // namespace

NgramTable ngram_counts(std::string_view text, std::size_t n) {
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidArgument, "n must be 1 or 2");
  std::map<std::string, std::size_t> counts;
  std::string token;
  const auto flush = [&] {
    for (std::size_t i = 0; i + n <= token.size(); ++i) ++counts[token.substr(i, n)];
    token.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::isalpha(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return from_map(n, counts);
}

NgramTable top_k(const NgramTable& table, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  NgramTable out;
  out.n = table.n;
  out.entries.assign(table.entries.begin(),
                     table.entries.begin() + static_cast<std::ptrdiff_t>(std::min(k, table.entries.size())));
  return out;
}

NgramTable merge(const NgramTable& a, const NgramTable& b) {
  if (a.n != b.n) throw Error(ErrorCode::InvalidArgument, "cannot merge tables of different n");
  std::map<std::string, std::size_t> counts;
  for (const auto& [g, c] : a.entries) counts[g] += c;
  for (const auto& [g, c] : b.entries) counts[g] += c;
  return from_map(a.n, counts);
}

std::string ngram_csv(const NgramTable& table) {
  std::string out = "gram,count\n";
  for (const auto& [g, c] : table.entries) out += g + ',' + std::to_string(c) + '\n';
  return out;
}

}  // namespace herdsig
