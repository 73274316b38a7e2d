#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace spampipe {

enum class WeightingScheme { Boolean, Count, RelFreq, TfIdf };

const char* scheme_name(WeightingScheme s);
WeightingScheme scheme_from_name(const std::string& name);  // throws ConfigError

struct Vocabulary {
  // term -> dense index, indices assigned in lexicographic term order
  std::map<std::string, std::uint32_t> index;
  std::vector<std::uint32_t> df;  // by index
  std::size_t n_docs = 0;

  std::size_t size() const { return index.size(); }

  // smoothed idf: ln((1+n_docs)/(1+df)) + 1
  double idf(std::uint32_t term_index) const;

  void export_tsv(const std::filesystem::path& path) const;
};

// Strictly index-sorted (index, weight) pairs; no explicit zeros.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double norm() const;
  double at(std::uint32_t index) const;  // 0 when absent
};

double dot(const SparseVector& u, const SparseVector& v);
SparseVector l2_normalize(const SparseVector& v);

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::vector<std::uint32_t> doc_ids;  // aligned to rows
  WeightingScheme scheme = WeightingScheme::Count;
  bool adjusted = false;
  const Vocabulary* vocab = nullptr;
};

using TokenList = std::vector<std::string>;

// Terms with df < min_df or df > max_df_ratio * n_docs are dropped.
// Throws ConfigError if nothing survives.
Vocabulary build_vocabulary(const std::vector<TokenList>& token_lists, std::size_t min_df,
                            double max_df_ratio);

SparseVector vectorize(const TokenList& tokens, const Vocabulary& vocab, WeightingScheme scheme);

FeatureMatrix build_matrix(const std::vector<TokenList>& corpus_tokens, const Vocabulary& vocab,
                           WeightingScheme scheme);

}  // namespace spampipe
