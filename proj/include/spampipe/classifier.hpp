#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "spampipe/corpus.hpp"
#include "spampipe/features.hpp"

namespace spampipe {

// Multinomial Naive Bayes over nonnegative real-valued weights
// (fractional counts).
struct NBModel {
  double log_prior_spam = 0.0;
  double log_prior_ham = 0.0;
  std::vector<double> log_cond_spam;  // by term index
  std::vector<double> log_cond_ham;
  double smoothing = 1.0;

  std::size_t vocab_size() const { return log_cond_spam.size(); }
};

struct ScoredPrediction {
  std::uint32_t doc_id = 0;
  double score = 0.0;  // log-odds, positive leans Spam
  Label predicted = Label::Ham;
  std::optional<Label> actual;
};

// prior = label share; cond(t|label) = (W(t,label)+s) / (W(label)+s*|V|)
// with W summing matrix weights over the label's rows.
NBModel train_nb(const FeatureMatrix& matrix, const std::vector<Label>& labels, double smoothing);

// log-odds Spam vs Ham; the empty vector scores the prior gap.
double score(const NBModel& model, const SparseVector& v);

// predicted = Spam iff score > threshold (ties go to Ham).
ScoredPrediction classify(const NBModel& model, const SparseVector& v, double threshold);

// Versioned text format, 17-significant-digit round-trip.
void save_model(const NBModel& model, const std::filesystem::path& path);
NBModel load_model(const std::filesystem::path& path);

}  // namespace spampipe
