#include "spampipe/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <unordered_map>

#include "spampipe/errors.hpp"

namespace spampipe {

void ClusterParams::validate() const {
  if (k_spam < 1 || k_ham < 1) throw ConfigError("cluster: k_spam and k_ham must be >= 1");
  if (max_iter < 1) throw ConfigError("cluster: max_iter must be >= 1");
}

double cosine(const SparseVector& u, const SparseVector& v) {
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot(u, v) / (nu * nv);
}

namespace {

SparseVector normalized_mean(const std::vector<SparseVector>& rows,
                             const std::vector<std::size_t>& members) {
  std::unordered_map<std::uint32_t, double> acc;
  for (std::size_t r : members) {
    for (const auto& [i, w] : rows[r].entries) acc[i] += w;
  }
  SparseVector mean;
  mean.entries.reserve(acc.size());
  for (const auto& [i, w] : acc) mean.entries.emplace_back(i, w);
  std::sort(mean.entries.begin(), mean.entries.end());
  return l2_normalize(mean);
}

}  // namespace

KMeansResult kmeans(const std::vector<SparseVector>& rows, std::size_t k, std::size_t max_iter) {
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  const std::size_t n = rows.size();
  if (n == 0) throw ConfigError("kmeans: no rows");
  KMeansResult res;
  if (k > n) {
    k = n;
    res.clamped = true;
  }

  // farthest-first seeding
  std::vector<std::size_t> seeds{0};
  std::vector<bool> chosen(n, false);
  chosen[0] = true;
  while (seeds.size() < k) {
    std::size_t best = n;
    double best_maxcos = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) {
      if (chosen[r]) continue;
      double maxcos = -std::numeric_limits<double>::infinity();
      for (std::size_t s : seeds) maxcos = std::max(maxcos, cosine(rows[r], rows[s]));
      if (maxcos < best_maxcos) {
        best_maxcos = maxcos;
        best = r;
      }
    }
    seeds.push_back(best);
    chosen[best] = true;
  }

  res.centroids.clear();
  for (std::size_t s : seeds) res.centroids.push_back(l2_normalize(rows[s]));
  res.assignment.assign(n, 0);
  std::vector<std::size_t> prev(n, k);  // k = impossible cluster id

  std::vector<double> sim(n, 0.0);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // assignment step
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t best_c = 0;
      double best_s = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        double s = cosine(rows[r], res.centroids[c]);
        if (s > best_s) {
          best_s = s;
          best_c = c;
        }
      }
      res.assignment[r] = best_c;
      sim[r] = best_s;
    }

    // reseed emptied clusters with the worst-assigned row
    std::vector<std::size_t> count(k, 0);
    for (std::size_t r = 0; r < n; ++r) ++count[res.assignment[r]];
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t worst = n;
      double worst_s = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < n; ++r) {
        if (count[res.assignment[r]] <= 1) continue;  // never empty another cluster
        if (sim[r] < worst_s) {
          worst_s = sim[r];
          worst = r;
        }
      }
      if (worst == n) continue;  // nothing movable (k was clamped to n)
      --count[res.assignment[worst]];
      res.assignment[worst] = c;
      ++count[c];
      sim[worst] = 1.0;  // becomes its own centroid below
    }

    // centroid update
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t r = 0; r < n; ++r) members[res.assignment[r]].push_back(r);
    for (std::size_t c = 0; c < k; ++c) {
      if (!members[c].empty()) res.centroids[c] = normalized_mean(rows, members[c]);
    }

    double obj = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      obj += cosine(rows[r], res.centroids[res.assignment[r]]);
    }
    res.objective = obj;
    res.objective_history.push_back(obj);
    res.iterations = iter + 1;

    if (res.assignment == prev) break;
    prev = res.assignment;
  }
  return res;
}

ClusterModel cluster_by_label(const FeatureMatrix& matrix, const std::vector<Label>& labels,
                              const ClusterParams& params) {
  params.validate();
  if (labels.size() != matrix.rows.size()) {
    throw ConfigError("cluster: labels/rows size mismatch");
  }
  std::vector<SparseVector> norm_rows;
  norm_rows.reserve(matrix.rows.size());
  for (const SparseVector& r : matrix.rows) norm_rows.push_back(l2_normalize(r));

  ClusterModel model;
  model.scope = params.scope;
  model.assignment.assign(norm_rows.size(), 0);
  model.similarity.assign(norm_rows.size(), 0.0);

  if (params.scope == ClusterScope::Global) {
    std::size_t k = params.k_spam + params.k_ham;
    KMeansResult res = kmeans(norm_rows, k, params.max_iter);
    if (res.clamped) {
      std::cerr << "warning: k clamped to " << res.centroids.size() << " rows\n";
    }
    model.centroids = std::move(res.centroids);
    model.assignment = std::move(res.assignment);
    model.objective = res.objective;
    for (std::size_t r = 0; r < norm_rows.size(); ++r) {
      model.similarity[r] = cosine(norm_rows[r], model.centroids[model.assignment[r]]);
    }
    return model;
  }

  std::vector<std::size_t> spam_idx, ham_idx;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    (labels[r] == Label::Spam ? spam_idx : ham_idx).push_back(r);
  }
  if (spam_idx.empty() || ham_idx.empty()) {
    throw ConfigError("cluster: training set must contain both labels");
  }

  auto run_side = [&](const std::vector<std::size_t>& idx, std::size_t k, const char* name) {
    std::vector<SparseVector> side;
    side.reserve(idx.size());
    for (std::size_t r : idx) side.push_back(norm_rows[r]);
    if (k > side.size()) {
      std::cerr << "warning: k_" << name << " clamped from " << k << " to " << side.size()
                << " documents\n";
    }
    return kmeans(side, std::min(k, side.size()), params.max_iter);
  };

  KMeansResult spam_res = run_side(spam_idx, params.k_spam, "spam");
  KMeansResult ham_res = run_side(ham_idx, params.k_ham, "ham");

  model.k_spam = spam_res.centroids.size();
  model.k_ham = ham_res.centroids.size();
  model.centroids = spam_res.centroids;
  model.centroids.insert(model.centroids.end(), ham_res.centroids.begin(),
                         ham_res.centroids.end());
  model.objective = spam_res.objective + ham_res.objective;
  for (std::size_t i = 0; i < spam_idx.size(); ++i) {
    std::size_t r = spam_idx[i];
    model.assignment[r] = spam_res.assignment[i];
    model.similarity[r] = cosine(norm_rows[r], model.centroids[model.assignment[r]]);
  }
  for (std::size_t i = 0; i < ham_idx.size(); ++i) {
    std::size_t r = ham_idx[i];
    model.assignment[r] = model.k_spam + ham_res.assignment[i];
    model.similarity[r] = cosine(norm_rows[r], model.centroids[model.assignment[r]]);
  }
  return model;
}

std::size_t nearest_cluster(const SparseVector& v, const ClusterModel& model,
                            std::optional<Label> label_scope) {
  std::size_t begin = 0;
  std::size_t end = model.n_clusters();
  if (label_scope && model.scope == ClusterScope::PerLabel) {
    if (*label_scope == Label::Spam) {
      end = model.k_spam;
    } else {
      begin = model.k_spam;
    }
  }
  std::size_t best = begin;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t c = begin; c < end; ++c) {
    double s = cosine(v, model.centroids[c]);
    if (s > best_s) {
      best_s = s;
      best = c;
    }
  }
  return best;
}

void export_cluster_csv(const ClusterModel& model, const std::vector<Label>& labels,
                        const std::vector<std::uint32_t>& doc_ids,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write cluster csv: " + path.string());
  out << "doc_id,label,cluster_id,similarity\n";
  for (std::size_t r = 0; r < model.assignment.size(); ++r) {
    out << doc_ids[r] << ',' << label_name(labels[r]) << ',' << model.assignment[r] << ','
        << model.similarity[r] << '\n';
  }
}

}  // namespace spampipe
