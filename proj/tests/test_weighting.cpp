#include <cmath>

#include "doctest.h"
#include "spampipe/errors.hpp"
#include "spampipe/weighting.hpp"

using namespace spampipe;

namespace {

// one spam cluster {d0,d1}, one ham cluster {d2}
struct SmallFixture {
  std::vector<TokenList> docs{{"a", "a", "b"}, {"a", "c"}, {"z"}};
  std::vector<Label> labels{Label::Spam, Label::Spam, Label::Ham};
  Vocabulary vocab;
  FeatureMatrix relfreq;
  ClusterModel model;

  SmallFixture() {
    vocab = build_vocabulary(docs, 1, 1.0);
    relfreq = build_matrix(docs, vocab, WeightingScheme::RelFreq);
    ClusterParams params;
    params.k_spam = 1;
    params.k_ham = 1;
    model = cluster_by_label(relfreq, labels, params);
  }
};

}  // namespace

TEST_CASE("descriptor scores are mean relative frequencies per cluster") {
  SmallFixture f;
  auto desc = descriptor_scores(f.relfreq, f.model);
  std::size_t nc = f.model.n_clusters();
  std::uint32_t a = f.vocab.index.at("a");
  // cluster 0 = {d0=[a,a,b], d1=[a,c]}: mean(2/3, 1/2) = 7/12
  CHECK(desc[a * nc + 0] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(desc[a * nc + 0] == doctest::Approx(0.58333).epsilon(1e-5));
  // term absent from a cluster scores zero there
  CHECK(desc[a * nc + 1] == 0.0);
  // single-doc cluster with one term: desc = 1
  std::uint32_t z = f.vocab.index.at("z");
  CHECK(desc[z * nc + 1] == 1.0);
}

TEST_CASE("discriminator scores are df shares") {
  // a in 3 training docs, 2 inside the spam cluster -> 2/3
  std::vector<TokenList> docs{{"a", "b"}, {"a"}, {"a", "z"}};
  std::vector<Label> labels{Label::Spam, Label::Spam, Label::Ham};
  Vocabulary vocab = build_vocabulary(docs, 1, 1.0);
  FeatureMatrix m = build_matrix(docs, vocab, WeightingScheme::RelFreq);
  ClusterParams params;
  params.k_spam = 1;
  params.k_ham = 1;
  ClusterModel model = cluster_by_label(m, labels, params);
  auto disc = discriminator_scores(m, model);
  std::size_t nc = model.n_clusters();
  std::uint32_t a = vocab.index.at("a");
  CHECK(disc[a * nc + 0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(disc[a * nc + 1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // b occurs only inside cluster 0
  std::uint32_t b = vocab.index.at("b");
  CHECK(disc[b * nc + 0] == 1.0);
  CHECK(disc[b * nc + 1] == 0.0);
}

TEST_CASE("disc rows sum to one for in-training terms") {
  SmallFixture f;
  auto disc = discriminator_scores(f.relfreq, f.model);
  std::size_t nc = f.model.n_clusters();
  for (std::uint32_t t = 0; t < f.vocab.size(); ++t) {
    double sum = 0.0;
    for (std::size_t c = 0; c < nc; ++c) sum += disc[t * nc + c];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("normalize_desc scales per cluster to max one") {
  // 2 terms x 1 cluster, column [0.2, 0.1] -> [1.0, 0.5]
  std::vector<double> desc = {0.2, 0.1};
  auto norm = normalize_desc(desc, 2, 1);
  CHECK(norm[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm[1] == doctest::Approx(0.5).epsilon(1e-12));
  // all-zero column stays zero
  std::vector<double> zeros = {0.0, 0.0};
  auto nz = normalize_desc(zeros, 2, 1);
  CHECK(nz[0] == 0.0);
  CHECK(nz[1] == 0.0);
  // single positive entry self-normalizes
  std::vector<double> one = {0.37};
  CHECK(normalize_desc(one, 1, 1)[0] == 1.0);
}

TEST_CASE("adjust_vector applies the mixing rule") {
  TermTopicScores scores;
  scores.n_terms = 1;
  scores.n_clusters = 1;
  scores.desc = {1.0};
  scores.desc_norm = {1.0};
  scores.disc = {0.5};
  AdjustParams params;  // alpha = beta = 1
  SparseVector v{{{0, 0.5}}};
  CHECK(adjust_vector(v, scores, params, 0).at(0) ==
        doctest::Approx(0.5 * (1.0 + 1.0 + 0.5)).epsilon(1e-12));
  CHECK(adjust_vector(v, scores, params, 0).at(0) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("adjust with alpha=beta=0 is the exact identity") {
  SmallFixture f;
  TermTopicScores scores = compute_scores(f.relfreq, f.model);
  AdjustParams params;
  params.alpha = 0.0;
  params.beta = 0.0;
  FeatureMatrix out = adjust_matrix(f.relfreq, scores, params, f.model.assignment);
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    REQUIRE(out.rows[r].entries.size() == f.relfreq.rows[r].entries.size());
    for (std::size_t i = 0; i < out.rows[r].entries.size(); ++i) {
      CHECK(out.rows[r].entries[i] == f.relfreq.rows[r].entries[i]);
    }
  }
  CHECK(out.adjusted);
}

TEST_CASE("adjustment preserves sparsity and multiplier bounds") {
  SmallFixture f;
  TermTopicScores scores = compute_scores(f.relfreq, f.model);
  AdjustParams params;
  params.alpha = 2.0;
  params.beta = 0.5;
  FeatureMatrix out = adjust_matrix(f.relfreq, scores, params, f.model.assignment);
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    REQUIRE(out.rows[r].entries.size() == f.relfreq.rows[r].entries.size());
    for (std::size_t i = 0; i < out.rows[r].entries.size(); ++i) {
      double before = f.relfreq.rows[r].entries[i].second;
      double after = out.rows[r].entries[i].second;
      CHECK(after >= before);  // factor >= 1
      CHECK(after <= before * (1.0 + params.alpha + params.beta) + 1e-12);
    }
  }
}

TEST_CASE("adjustment is monotone in alpha and beta") {
  SmallFixture f;
  TermTopicScores scores = compute_scores(f.relfreq, f.model);
  AdjustParams lo, hi;
  lo.alpha = 0.5;
  lo.beta = 0.5;
  hi.alpha = 1.5;
  hi.beta = 2.0;
  FeatureMatrix a = adjust_matrix(f.relfreq, scores, lo, f.model.assignment);
  FeatureMatrix b = adjust_matrix(f.relfreq, scores, hi, f.model.assignment);
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    for (std::size_t i = 0; i < a.rows[r].entries.size(); ++i) {
      CHECK(b.rows[r].entries[i].second >= a.rows[r].entries[i].second);
    }
  }
}

TEST_CASE("scores are invariant under corpus duplication") {
  SmallFixture f;
  TermTopicScores base = compute_scores(f.relfreq, f.model);

  std::vector<TokenList> doubled = f.docs;
  doubled.insert(doubled.end(), f.docs.begin(), f.docs.end());
  std::vector<Label> dlabels = f.labels;
  dlabels.insert(dlabels.end(), f.labels.begin(), f.labels.end());
  Vocabulary dvocab = build_vocabulary(doubled, 1, 1.0);
  REQUIRE(dvocab.index == f.vocab.index);  // same lexicographic indexing
  FeatureMatrix drel = build_matrix(doubled, dvocab, WeightingScheme::RelFreq);
  ClusterParams params;
  params.k_spam = 1;
  params.k_ham = 1;
  ClusterModel dmodel = cluster_by_label(drel, dlabels, params);
  TermTopicScores dup = compute_scores(drel, dmodel);

  for (std::size_t i = 0; i < base.desc.size(); ++i) {
    CHECK(dup.desc[i] == doctest::Approx(base.desc[i]).epsilon(1e-12));
    CHECK(dup.disc[i] == doctest::Approx(base.disc[i]).epsilon(1e-12));
  }
}

TEST_CASE("adjust_matrix rejects incomplete cluster maps") {
  SmallFixture f;
  TermTopicScores scores = compute_scores(f.relfreq, f.model);
  std::vector<std::size_t> partial = {0};
  CHECK_THROWS_AS(adjust_matrix(f.relfreq, scores, AdjustParams{}, partial), std::logic_error);
}

TEST_CASE("descriptor_scores rejects non-relfreq matrices") {
  SmallFixture f;
  FeatureMatrix counts = build_matrix(f.docs, f.vocab, WeightingScheme::Count);
  CHECK_THROWS_AS(descriptor_scores(counts, f.model), ConfigError);
}

TEST_CASE("score values stay in [0,1]") {
  SmallFixture f;
  TermTopicScores s = compute_scores(f.relfreq, f.model);
  for (double x : s.desc) { CHECK(x >= 0.0); CHECK(x <= 1.0); }
  for (double x : s.desc_norm) { CHECK(x >= 0.0); CHECK(x <= 1.0); }
  for (double x : s.disc) { CHECK(x >= 0.0); CHECK(x <= 1.0); }
}
