#include "spampipe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "spampipe/errors.hpp"

namespace spampipe {

void EvalParams::validate() const {
  if (fbeta <= 0.0) throw ConfigError("eval: fbeta must be > 0");
  if (fp_cost <= 0.0) throw ConfigError("eval: fp_cost must be > 0");
  if (folds < 2) throw ConfigError("eval: folds must be >= 2");
}

ConfusionMatrix confusion(const std::vector<ScoredPrediction>& predictions) {
  ConfusionMatrix cm;
  for (const ScoredPrediction& p : predictions) {
    if (!p.actual) throw ConfigError("confusion: prediction without an actual label");
    bool actual_spam = *p.actual == Label::Spam;
    bool pred_spam = p.predicted == Label::Spam;
    if (actual_spam && pred_spam) ++cm.tp;
    else if (actual_spam) ++cm.fn;
    else if (pred_spam) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

namespace {

double ratio0(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

PointMetrics point_metrics(const ConfusionMatrix& cm, const EvalParams& params) {
  PointMetrics m;
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn);
  const double fn = static_cast<double>(cm.fn);
  m.precision = ratio0(tp, tp + fp);
  m.recall = ratio0(tp, tp + fn);
  const double b2 = params.fbeta * params.fbeta;
  m.f_score = ratio0((1.0 + b2) * m.precision * m.recall, b2 * m.precision + m.recall);
  const double tnr = ratio0(tn, tn + fp);
  m.g_mean = std::sqrt(m.recall * tnr);
  const double lambda = params.fp_cost;
  m.cost_weighted_error = ratio0(lambda * fp + fn, lambda * (fp + tn) + (fn + tp));
  return m;
}

namespace {

// Descending unique-threshold sweep; each group carries the number of spam
// and ham instances scoring exactly at that threshold.
struct SweepGroup {
  double threshold;
  std::size_t spam;
  std::size_t ham;
};

struct Sweep {
  std::vector<SweepGroup> groups;
  std::size_t n_spam = 0;
  std::size_t n_ham = 0;
};

Sweep make_sweep(const std::vector<double>& scores, const std::vector<Label>& labels) {
  if (scores.size() != labels.size()) throw ConfigError("metrics: scores/labels size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  Sweep sweep;
  for (std::size_t i = 0; i < order.size();) {
    double s = scores[order[i]];
    SweepGroup g{s, 0, 0};
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]] == Label::Spam) ++g.spam;
      else ++g.ham;
      ++i;
    }
    sweep.groups.push_back(g);
    sweep.n_spam += g.spam;
    sweep.n_ham += g.ham;
  }
  return sweep;
}

}  // namespace

std::optional<CurveResult> roc_auc(const std::vector<double>& scores,
                                   const std::vector<Label>& labels) {
  Sweep sweep = make_sweep(scores, labels);
  if (sweep.n_spam == 0 || sweep.n_ham == 0) return std::nullopt;

  CurveResult res;
  res.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  double pairs = 0.0;
  for (const SweepGroup& g : sweep.groups) {
    tp += g.spam;
    fp += g.ham;
    // each spam here beats every ham strictly below, ties at half credit
    pairs += static_cast<double>(g.spam) * static_cast<double>(sweep.n_ham - fp) +
             0.5 * static_cast<double>(g.spam) * static_cast<double>(g.ham);
    res.points.emplace_back(static_cast<double>(fp) / static_cast<double>(sweep.n_ham),
                            static_cast<double>(tp) / static_cast<double>(sweep.n_spam));
  }
  res.auc = pairs / (static_cast<double>(sweep.n_spam) * static_cast<double>(sweep.n_ham));
  return res;
}

std::optional<CurveResult> pr_auc(const std::vector<double>& scores,
                                  const std::vector<Label>& labels) {
  Sweep sweep = make_sweep(scores, labels);
  if (sweep.n_spam == 0) return std::nullopt;

  CurveResult res;
  res.points.emplace_back(0.0, 1.0);
  std::size_t tp = 0, fp = 0;
  for (const SweepGroup& g : sweep.groups) {
    tp += g.spam;
    fp += g.ham;
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    double recall = static_cast<double>(tp) / static_cast<double>(sweep.n_spam);
    res.points.emplace_back(recall, precision);
    if (g.spam > 0) {
      res.auc += precision * static_cast<double>(g.spam) / static_cast<double>(sweep.n_spam);
    }
  }
  return res;
}

std::optional<double> ks_statistic(const std::vector<double>& scores,
                                   const std::vector<Label>& labels) {
  Sweep sweep = make_sweep(scores, labels);
  if (sweep.n_spam == 0 || sweep.n_ham == 0) return std::nullopt;
  std::size_t tp = 0, fp = 0;
  double ks = 0.0;
  for (const SweepGroup& g : sweep.groups) {
    tp += g.spam;
    fp += g.ham;
    double tpr = static_cast<double>(tp) / static_cast<double>(sweep.n_spam);
    double fpr = static_cast<double>(fp) / static_cast<double>(sweep.n_ham);
    ks = std::max(ks, std::abs(tpr - fpr));
  }
  return ks;
}

std::vector<std::vector<std::uint32_t>> stratified_folds(const std::vector<Label>& labels,
                                                         std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("stratified_folds: folds must be >= 2");
  std::vector<std::uint32_t> spam_ids, ham_ids;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::Spam ? spam_ids : ham_ids).push_back(i);
  }
  if (spam_ids.size() < folds || ham_ids.size() < folds) {
    throw ConfigError("stratification impossible: " + std::to_string(spam_ids.size()) +
                      " spam and " + std::to_string(ham_ids.size()) + " ham documents for " +
                      std::to_string(folds) + " folds");
  }
  std::mt19937_64 rng(seed);
  auto shuffle_ids = [&rng](std::vector<std::uint32_t>& ids) {
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::size_t j = rng() % i;
      std::swap(ids[i - 1], ids[j]);
    }
  };
  shuffle_ids(spam_ids);
  shuffle_ids(ham_ids);

  std::vector<std::vector<std::uint32_t>> out(folds);
  for (std::size_t i = 0; i < spam_ids.size(); ++i) out[i % folds].push_back(spam_ids[i]);
  for (std::size_t i = 0; i < ham_ids.size(); ++i) out[i % folds].push_back(ham_ids[i]);
  return out;
}

EvalReport assemble_report(const std::vector<std::vector<ScoredPrediction>>& fold_predictions,
                           const EvalParams& params) {
  EvalReport report;
  std::vector<ScoredPrediction> pooled;
  for (const auto& fold : fold_predictions) {
    FoldResult fr;
    fr.cm = confusion(fold);
    fr.metrics = point_metrics(fr.cm, params);
    report.folds.push_back(fr);
    pooled.insert(pooled.end(), fold.begin(), fold.end());
  }
  report.confusion = confusion(pooled);
  report.metrics = point_metrics(report.confusion, params);

  std::vector<double> scores;
  std::vector<Label> labels;
  scores.reserve(pooled.size());
  for (const ScoredPrediction& p : pooled) {
    scores.push_back(p.score);
    labels.push_back(*p.actual);
  }
  if (auto roc = roc_auc(scores, labels)) {
    report.roc_auc_value = roc->auc;
    report.roc_points = std::move(roc->points);
  }
  if (auto pr = pr_auc(scores, labels)) {
    report.pr_auc_value = pr->auc;
    report.pr_points = std::move(pr->points);
  }
  report.ks = ks_statistic(scores, labels);

  auto fields = {&PointMetrics::precision, &PointMetrics::recall, &PointMetrics::f_score,
                 &PointMetrics::g_mean, &PointMetrics::cost_weighted_error};
  const double nf = static_cast<double>(report.folds.size());
  for (auto field : fields) {
    double mean = 0.0;
    for (const FoldResult& fr : report.folds) mean += fr.metrics.*field;
    mean /= nf;
    double var = 0.0;
    for (const FoldResult& fr : report.folds) {
      double d = fr.metrics.*field - mean;
      var += d * d;
    }
    report.fold_mean.*field = mean;
    report.fold_stddev.*field = nf > 1.0 ? std::sqrt(var / (nf - 1.0)) : 0.0;
  }
  return report;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << *v;
  return ss.str();
}

}  // namespace

std::string format_report(const EvalReport& r) {
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed;
  ss << "confusion: tp=" << r.confusion.tp << " fp=" << r.confusion.fp
     << " tn=" << r.confusion.tn << " fn=" << r.confusion.fn << "\n";
  ss << "precision: " << r.metrics.precision << "\n";
  ss << "recall: " << r.metrics.recall << "\n";
  ss << "f_score: " << r.metrics.f_score << "\n";
  ss << "g_mean: " << r.metrics.g_mean << "\n";
  ss << "cost_weighted_error: " << r.metrics.cost_weighted_error << "\n";
  ss << "roc_auc: " << opt_str(r.roc_auc_value) << "\n";
  ss << "pr_auc: " << opt_str(r.pr_auc_value) << "\n";
  ss << "ks: " << opt_str(r.ks) << "\n";
  ss << "curve points: roc_points.csv, pr_points.csv\n";
  ss << "\nfold precision recall f_score g_mean cost_weighted_error\n";
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    const PointMetrics& m = r.folds[i].metrics;
    ss << i << " " << m.precision << " " << m.recall << " " << m.f_score << " " << m.g_mean
       << " " << m.cost_weighted_error << "\n";
  }
  ss << "mean " << r.fold_mean.precision << " " << r.fold_mean.recall << " "
     << r.fold_mean.f_score << " " << r.fold_mean.g_mean << " "
     << r.fold_mean.cost_weighted_error << "\n";
  ss << "stddev " << r.fold_stddev.precision << " " << r.fold_stddev.recall << " "
     << r.fold_stddev.f_score << " " << r.fold_stddev.g_mean << " "
     << r.fold_stddev.cost_weighted_error << "\n";
  return ss.str();
}

void write_curve_csv(const std::vector<std::pair<double, double>>& points,
                     const std::string& header, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write curve csv: " + path.string());
  out << header << "\n";
  out.precision(12);
  for (const auto& [x, y] : points) out << x << ',' << y << '\n';
}

}  // namespace spampipe
