#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "spampipe/corpus.hpp"
#include "spampipe/features.hpp"

namespace spampipe {

enum class ClusterScope { PerLabel, Global };

struct ClusterParams {
  std::size_t k_spam = 4;
  std::size_t k_ham = 4;
  std::size_t max_iter = 100;
  ClusterScope scope = ClusterScope::PerLabel;

  void validate() const;  // throws ConfigError
};

// 0 when either vector is zero.
double cosine(const SparseVector& u, const SparseVector& v);

struct KMeansResult {
  std::vector<std::size_t> assignment;  // row -> cluster
  std::vector<SparseVector> centroids;  // unit norm (zero vector for empty input)
  double objective = 0.0;               // sum of member-to-centroid cosines
  std::vector<double> objective_history;  // one value per iteration
  std::size_t iterations = 0;
  bool clamped = false;  // k was reduced to the row count
};

// Deterministic spherical k-means over l2-normalized rows.
// Seeding is farthest-first: seed 0 is row 0, each next seed minimizes the
// maximum cosine to the seeds chosen so far (ties -> lowest index).
// Assignment ties -> lowest cluster index; emptied clusters are reseeded
// with the worst-assigned row.
KMeansResult kmeans(const std::vector<SparseVector>& rows, std::size_t k, std::size_t max_iter);

struct ClusterModel {
  ClusterScope scope = ClusterScope::PerLabel;
  std::size_t k_spam = 0;  // per-label scope: clusters 0..k_spam-1 are Spam
  std::size_t k_ham = 0;
  std::vector<SparseVector> centroids;       // global cluster id -> centroid
  std::vector<std::size_t> assignment;       // row -> global cluster id
  std::vector<double> similarity;            // row -> cosine to its centroid
  double objective = 0.0;

  std::size_t n_clusters() const { return centroids.size(); }
};

// Rows are l2-normalized internally; the input matrix is untouched.
// labels must align with matrix.rows. Throws ConfigError when a label has
// no documents (per-label scope).
ClusterModel cluster_by_label(const FeatureMatrix& matrix, const std::vector<Label>& labels,
                              const ClusterParams& params);

// argmax cosine against centroids; ties -> lowest cluster id. When
// label_scope is set (per-label models only), only that label's clusters
// compete.
std::size_t nearest_cluster(const SparseVector& v, const ClusterModel& model,
                            std::optional<Label> label_scope = std::nullopt);

// CSV "doc_id,label,cluster_id,similarity", one row per training document.
void export_cluster_csv(const ClusterModel& model, const std::vector<Label>& labels,
                        const std::vector<std::uint32_t>& doc_ids,
                        const std::filesystem::path& path);

}  // namespace spampipe
