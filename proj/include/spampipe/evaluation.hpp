#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spampipe/classifier.hpp"
#include "spampipe/corpus.hpp"

namespace spampipe {

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

struct EvalParams {
  double fbeta = 1.0;
  double fp_cost = 9.0;  // one false positive costs this many false negatives
  std::size_t folds = 10;
  std::uint64_t shuffle_seed = 1;

  void validate() const;  // throws ConfigError
};

struct PointMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double g_mean = 0.0;
  double cost_weighted_error = 0.0;
};

// Spam is the positive class. Throws ConfigError if a prediction lacks an
// actual label.
ConfusionMatrix confusion(const std::vector<ScoredPrediction>& predictions);

// 0/0 denominators yield 0 by convention.
PointMetrics point_metrics(const ConfusionMatrix& cm, const EvalParams& params);

struct CurveResult {
  double auc = 0.0;
  std::vector<std::pair<double, double>> points;  // ROC: (fpr,tpr); PR: (recall,precision)
};

// Pairwise form with half credit for ties; points swept over descending
// unique thresholds from (0,0) to (1,1). Empty optional when a class is
// missing.
std::optional<CurveResult> roc_auc(const std::vector<double>& scores,
                                   const std::vector<Label>& labels);

// Average precision (step integration, ties grouped per threshold). Empty
// optional when there is no spam.
std::optional<CurveResult> pr_auc(const std::vector<double>& scores,
                                  const std::vector<Label>& labels);

// Two-sample KS statistic between per-label score distributions; equals
// max|TPR - FPR| over the ROC sweep. Empty optional when a class is missing.
std::optional<double> ks_statistic(const std::vector<double>& scores,
                                   const std::vector<Label>& labels);

// Stratified fold assignment: per label, ids are shuffled with a seeded
// PRNG (mt19937_64 + Fisher-Yates) and dealt round-robin. Throws
// ConfigError when some label has fewer documents than folds.
std::vector<std::vector<std::uint32_t>> stratified_folds(const std::vector<Label>& labels,
                                                         std::size_t folds, std::uint64_t seed);

struct FoldResult {
  ConfusionMatrix cm;
  PointMetrics metrics;
};

struct EvalReport {
  ConfusionMatrix confusion;  // pooled over folds
  PointMetrics metrics;       // from the pooled confusion
  std::optional<double> roc_auc_value;
  std::optional<double> pr_auc_value;
  std::optional<double> ks;
  std::vector<std::pair<double, double>> roc_points;
  std::vector<std::pair<double, double>> pr_points;
  std::vector<FoldResult> folds;
  PointMetrics fold_mean;
  PointMetrics fold_stddev;  // sample standard deviation
};

// Pools the held-out predictions for curve metrics and aggregates per-fold
// point metrics.
EvalReport assemble_report(const std::vector<std::vector<ScoredPrediction>>& fold_predictions,
                           const EvalParams& params);

std::string format_report(const EvalReport& report);

void write_curve_csv(const std::vector<std::pair<double, double>>& points,
                     const std::string& header, const std::filesystem::path& path);

}  // namespace spampipe
