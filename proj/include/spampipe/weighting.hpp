#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "spampipe/clustering.hpp"
#include "spampipe/features.hpp"

namespace spampipe {

struct AdjustParams {
  double alpha = 1.0;  // descriptor strength
  double beta = 1.0;   // discriminator strength
  bool adjust_test = true;

  void validate() const;  // throws ConfigError
};

// Dense term x cluster score matrices.
struct TermTopicScores {
  std::size_t n_terms = 0;
  std::size_t n_clusters = 0;
  std::vector<double> desc;       // mean relative frequency within the cluster
  std::vector<double> desc_norm;  // desc scaled to max 1 per cluster
  std::vector<double> disc;       // share of the term's df inside the cluster

  double desc_at(std::uint32_t t, std::size_t c) const { return desc[t * n_clusters + c]; }
  double desc_norm_at(std::uint32_t t, std::size_t c) const {
    return desc_norm[t * n_clusters + c];
  }
  double disc_at(std::uint32_t t, std::size_t c) const { return disc[t * n_clusters + c]; }
};

// desc(t,c) = mean over cluster members of the term's relative frequency.
// relfreq_matrix must use the RelFreq scheme and align with model.assignment.
std::vector<double> descriptor_scores(const FeatureMatrix& relfreq_matrix,
                                      const ClusterModel& model);

// disc(t,c) = df(t in cluster c) / df(t in the training set); 0 when the
// term never occurs. Any scheme works (only the support is read).
std::vector<double> discriminator_scores(const FeatureMatrix& matrix, const ClusterModel& model);

// Per-cluster max scaling; an all-zero column stays zero.
std::vector<double> normalize_desc(const std::vector<double>& desc, std::size_t n_terms,
                                   std::size_t n_clusters);

TermTopicScores compute_scores(const FeatureMatrix& relfreq_matrix, const ClusterModel& model);

// a'(d,t) = a(d,t) * (1 + alpha*desc_norm(t,cl(d)) + beta*disc(t,cl(d))).
// cluster_of maps every row of the matrix to a global cluster id.
FeatureMatrix adjust_matrix(const FeatureMatrix& matrix, const TermTopicScores& scores,
                            const AdjustParams& params,
                            const std::vector<std::size_t>& cluster_of);

SparseVector adjust_vector(const SparseVector& v, const TermTopicScores& scores,
                           const AdjustParams& params, std::size_t cluster);

// CSV "term,cluster_id,descriptor,discriminator", sorted by
// (cluster, descending descriptor, term).
void export_scores_csv(const TermTopicScores& scores, const Vocabulary& vocab,
                       const std::filesystem::path& path);

}  // namespace spampipe
