#include "spampipe/weighting.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>

#include "spampipe/errors.hpp"

namespace spampipe {

void AdjustParams::validate() const {
  if (alpha < 0.0 || beta < 0.0) throw ConfigError("adjust: alpha and beta must be >= 0");
}

std::vector<double> descriptor_scores(const FeatureMatrix& relfreq_matrix,
                                      const ClusterModel& model) {
  if (relfreq_matrix.scheme != WeightingScheme::RelFreq) {
    throw ConfigError("descriptor_scores requires a relfreq matrix");
  }
  const std::size_t n_terms = relfreq_matrix.vocab->size();
  const std::size_t n_clusters = model.n_clusters();
  std::vector<double> desc(n_terms * n_clusters, 0.0);
  std::vector<std::size_t> cluster_size(n_clusters, 0);
  for (std::size_t r = 0; r < relfreq_matrix.rows.size(); ++r) {
    std::size_t c = model.assignment[r];
    ++cluster_size[c];
    for (const auto& [t, w] : relfreq_matrix.rows[r].entries) {
      desc[t * n_clusters + c] += w;
    }
  }
  for (std::size_t c = 0; c < n_clusters; ++c) {
    assert(cluster_size[c] > 0);  // ClusterModel invariant: no empty cluster
    for (std::size_t t = 0; t < n_terms; ++t) {
      desc[t * n_clusters + c] /= static_cast<double>(cluster_size[c]);
    }
  }
  return desc;
}

std::vector<double> discriminator_scores(const FeatureMatrix& matrix, const ClusterModel& model) {
  const std::size_t n_terms = matrix.vocab->size();
  const std::size_t n_clusters = model.n_clusters();
  std::vector<double> disc(n_terms * n_clusters, 0.0);
  std::vector<double> global_df(n_terms, 0.0);
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    std::size_t c = model.assignment[r];
    for (const auto& [t, w] : matrix.rows[r].entries) {
      if (w == 0.0) continue;
      disc[t * n_clusters + c] += 1.0;
      global_df[t] += 1.0;
    }
  }
  for (std::size_t t = 0; t < n_terms; ++t) {
    if (global_df[t] == 0.0) continue;
    for (std::size_t c = 0; c < n_clusters; ++c) {
      disc[t * n_clusters + c] /= global_df[t];
    }
  }
  return disc;
}

std::vector<double> normalize_desc(const std::vector<double>& desc, std::size_t n_terms,
                                   std::size_t n_clusters) {
  std::vector<double> out(desc.size(), 0.0);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    double mx = 0.0;
    for (std::size_t t = 0; t < n_terms; ++t) mx = std::max(mx, desc[t * n_clusters + c]);
    if (mx == 0.0) continue;
    for (std::size_t t = 0; t < n_terms; ++t) {
      out[t * n_clusters + c] = desc[t * n_clusters + c] / mx;
    }
  }
  return out;
}

TermTopicScores compute_scores(const FeatureMatrix& relfreq_matrix, const ClusterModel& model) {
  TermTopicScores s;
  s.n_terms = relfreq_matrix.vocab->size();
  s.n_clusters = model.n_clusters();
  s.desc = descriptor_scores(relfreq_matrix, model);
  s.desc_norm = normalize_desc(s.desc, s.n_terms, s.n_clusters);
  s.disc = discriminator_scores(relfreq_matrix, model);
  return s;
}

SparseVector adjust_vector(const SparseVector& v, const TermTopicScores& scores,
                           const AdjustParams& params, std::size_t cluster) {
  SparseVector out = v;
  for (auto& [t, w] : out.entries) {
    w *= 1.0 + params.alpha * scores.desc_norm_at(t, cluster) +
         params.beta * scores.disc_at(t, cluster);
  }
  return out;
}

FeatureMatrix adjust_matrix(const FeatureMatrix& matrix, const TermTopicScores& scores,
                            const AdjustParams& params,
                            const std::vector<std::size_t>& cluster_of) {
  params.validate();
  if (cluster_of.size() != matrix.rows.size()) {
    throw std::logic_error("adjust_matrix: cluster_of does not cover every row");
  }
  FeatureMatrix out;
  out.scheme = matrix.scheme;
  out.vocab = matrix.vocab;
  out.doc_ids = matrix.doc_ids;
  out.adjusted = true;
  out.rows.reserve(matrix.rows.size());
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out.rows.push_back(adjust_vector(matrix.rows[r], scores, params, cluster_of[r]));
  }
  return out;
}

void export_scores_csv(const TermTopicScores& scores, const Vocabulary& vocab,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write score csv: " + path.string());
  std::vector<const std::string*> term_of(vocab.size());
  for (const auto& [term, idx] : vocab.index) term_of[idx] = &term;

  out << "term,cluster_id,descriptor,discriminator\n";
  for (std::size_t c = 0; c < scores.n_clusters; ++c) {
    std::vector<std::uint32_t> order(scores.n_terms);
    for (std::uint32_t t = 0; t < scores.n_terms; ++t) order[t] = t;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      double da = scores.desc_at(a, c);
      double db = scores.desc_at(b, c);
      if (da != db) return da > db;
      return *term_of[a] < *term_of[b];
    });
    for (std::uint32_t t : order) {
      out << *term_of[t] << ',' << c << ',' << scores.desc_at(t, c) << ','
          << scores.disc_at(t, c) << '\n';
    }
  }
}

}  // namespace spampipe
