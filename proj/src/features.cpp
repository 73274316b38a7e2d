#include "spampipe/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "spampipe/errors.hpp"

namespace spampipe {

const char* scheme_name(WeightingScheme s) {
  switch (s) {
    case WeightingScheme::Boolean: return "boolean";
    case WeightingScheme::Count: return "count";
    case WeightingScheme::RelFreq: return "relfreq";
    case WeightingScheme::TfIdf: return "tfidf";
  }
  return "?";
}

WeightingScheme scheme_from_name(const std::string& name) {
  if (name == "boolean") return WeightingScheme::Boolean;
  if (name == "count") return WeightingScheme::Count;
  if (name == "relfreq") return WeightingScheme::RelFreq;
  if (name == "tfidf") return WeightingScheme::TfIdf;
  throw ConfigError("unknown weighting scheme: " + name);
}

double Vocabulary::idf(std::uint32_t term_index) const {
  return std::log((1.0 + static_cast<double>(n_docs)) /
                  (1.0 + static_cast<double>(df[term_index]))) + 1.0;
}

void Vocabulary::export_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write vocabulary file: " + path.string());
  for (const auto& [term, idx] : index) {
    out << term << '\t' << idx << '\t' << df[idx] << '\n';
  }
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [i, w] : entries) s += w * w;
  return std::sqrt(s);
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

double dot(const SparseVector& u, const SparseVector& v) {
  double s = 0.0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

SparseVector l2_normalize(const SparseVector& v) {
  double n = v.norm();
  if (n == 0.0) return v;
  SparseVector out = v;
  for (auto& [i, w] : out.entries) w /= n;
  return out;
}

Vocabulary build_vocabulary(const std::vector<TokenList>& token_lists, std::size_t min_df,
                            double max_df_ratio) {
  if (min_df < 1) throw ConfigError("min_df must be >= 1");
  if (max_df_ratio <= 0.0 || max_df_ratio > 1.0) {
    throw ConfigError("max_df_ratio must be in (0,1]");
  }
  std::unordered_map<std::string, std::uint32_t> df_counts;
  for (const TokenList& tokens : token_lists) {
    std::unordered_set<std::string> seen(tokens.begin(), tokens.end());
    for (const std::string& t : seen) ++df_counts[t];
  }
  const double max_df = max_df_ratio * static_cast<double>(token_lists.size());

  Vocabulary vocab;
  vocab.n_docs = token_lists.size();
  for (const auto& [term, df] : df_counts) {
    if (df >= min_df && static_cast<double>(df) <= max_df) {
      vocab.index.emplace(term, 0);
    }
  }
  if (vocab.index.empty()) {
    throw ConfigError("vocabulary is empty after df thresholds (min_df=" +
                      std::to_string(min_df) + ", max_df_ratio=" + std::to_string(max_df_ratio) +
                      ")");
  }
  vocab.df.resize(vocab.index.size());
  std::uint32_t next = 0;
  for (auto& [term, idx] : vocab.index) {
    idx = next++;
    vocab.df[idx] = df_counts.at(term);
  }
  return vocab;
}

SparseVector vectorize(const TokenList& tokens, const Vocabulary& vocab, WeightingScheme scheme) {
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  std::size_t in_vocab = 0;
  for (const std::string& t : tokens) {
    auto it = vocab.index.find(t);
    if (it == vocab.index.end()) continue;
    ++counts[it->second];
    ++in_vocab;
  }
  SparseVector v;
  v.entries.reserve(counts.size());
  for (const auto& [idx, c] : counts) {
    double w = 0.0;
    switch (scheme) {
      case WeightingScheme::Boolean:
        w = 1.0;
        break;
      case WeightingScheme::Count:
        w = static_cast<double>(c);
        break;
      case WeightingScheme::RelFreq:
        w = static_cast<double>(c) / static_cast<double>(in_vocab);
        break;
      case WeightingScheme::TfIdf:
        w = static_cast<double>(c) / static_cast<double>(in_vocab) * vocab.idf(idx);
        break;
    }
    v.entries.emplace_back(idx, w);
  }
  std::sort(v.entries.begin(), v.entries.end());
  return v;
}

FeatureMatrix build_matrix(const std::vector<TokenList>& corpus_tokens, const Vocabulary& vocab,
                           WeightingScheme scheme) {
  FeatureMatrix m;
  m.scheme = scheme;
  m.vocab = &vocab;
  m.rows.reserve(corpus_tokens.size());
  m.doc_ids.reserve(corpus_tokens.size());
  for (std::size_t i = 0; i < corpus_tokens.size(); ++i) {
    m.rows.push_back(vectorize(corpus_tokens[i], vocab, scheme));
    m.doc_ids.push_back(static_cast<std::uint32_t>(i));
  }
  return m;
}

}  // namespace spampipe
