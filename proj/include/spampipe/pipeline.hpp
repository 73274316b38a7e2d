#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spampipe/classifier.hpp"
#include "spampipe/clustering.hpp"
#include "spampipe/corpus.hpp"
#include "spampipe/evaluation.hpp"
#include "spampipe/features.hpp"
#include "spampipe/textproc.hpp"
#include "spampipe/weighting.hpp"

namespace spampipe {

enum class CorpusKind { Synthetic, SpamAssassin, Trec, Tsv };

struct PipelineConfig {
  CorpusKind corpus_kind = CorpusKind::Synthetic;
  std::filesystem::path corpus_path;
  bool strip_headers = true;
  SyntheticSpec synthetic;

  std::size_t min_token_len = 2;
  std::size_t max_token_len = 40;
  std::filesystem::path stopwords_path;
  bool stem_tokens = true;

  std::size_t min_df = 2;
  double max_df_ratio = 0.95;
  WeightingScheme scheme = WeightingScheme::TfIdf;

  ClusterParams cluster;
  AdjustParams adjust;
  bool bypass_weighting = false;  // skip clustering/scoring/adjustment entirely

  double smoothing = 1.0;
  double threshold = 0.0;

  EvalParams eval;
  std::filesystem::path output_dir = "out";

  void validate() const;          // throws ConfigError
  std::string to_text() const;    // resolved key=value form
  TokenizerConfig tokenizer() const;  // loads the stopword file when set
};

// Flat "key = value" lines, '#' comments; overrides win over file values.
// Unknown keys and malformed values are fatal with the key name and line.
PipelineConfig parse_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

PipelineConfig parse_config_file(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

Corpus load_corpus(const PipelineConfig& cfg, LoadReport* report = nullptr);

// Train on train_ids, score held-out test_ids. Indices address corpus_tokens
// and labels; doc ids in the returned predictions are the test indices.
std::vector<ScoredPrediction> run_fold(const std::vector<TokenList>& corpus_tokens,
                                       const std::vector<Label>& labels,
                                       const std::vector<std::uint32_t>& train_ids,
                                       const std::vector<std::uint32_t>& test_ids,
                                       const PipelineConfig& cfg);

// Stratified k-fold over the full pipeline; pooled curve metrics, per-fold
// point metrics.
EvalReport cross_validate(const Corpus& corpus, const PipelineConfig& cfg);

// Full pipeline run: cross-validated report plus a final full-corpus fit
// for the cluster/term-score exports. Writes report.txt, roc_points.csv,
// pr_points.csv, clusters.csv, term_scores.csv, resolved_config.txt under
// cfg.output_dir.
EvalReport run_pipeline(const PipelineConfig& cfg);

struct CompareReport {
  EvalReport baseline;  // alpha = beta = 0
  EvalReport adjusted;
  std::string table;
};

// Baseline (alpha=beta=0) vs adjusted on identical folds; writes the
// run_pipeline artifacts for the adjusted arm plus compare.txt and
// report_baseline.txt.
CompareReport run_compare(const PipelineConfig& cfg);

}  // namespace spampipe
