#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace herdsig {

struct NgramTable {
  std::size_t n = 2;
  std::vector<std::pair<std::string, std::size_t>> entries;  // count desc, then gram asc
};

// Character n-grams (n = 1 or 2) of the lowercased alphabetic characters,
// counted with overlap inside whitespace-delimited tokens only.
NgramTable ngram_counts(std::string_view text, std::size_t n);

NgramTable top_k(const NgramTable& table, std::size_t k);

// Entry-wise sum of two tables of the same n.
NgramTable merge(const NgramTable& a, const NgramTable& b);

// `gram,count`
std::string ngram_csv(const NgramTable& table);

}  // namespace herdsig
