#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "spampipe/classifier.hpp"
#include "spampipe/errors.hpp"

using namespace spampipe;

namespace {

struct TinyFixture {
  // vocab {a,b}; one spam doc {a:2}; one ham doc {b:2}; smoothing 1
  std::vector<TokenList> docs{{"a", "a"}, {"b", "b"}};
  std::vector<Label> labels{Label::Spam, Label::Ham};
  Vocabulary vocab;
  FeatureMatrix matrix;
  NBModel model;

  TinyFixture() {
    vocab = build_vocabulary(docs, 1, 1.0);
    matrix = build_matrix(docs, vocab, WeightingScheme::Count);
    model = train_nb(matrix, labels, 1.0);
  }
};

}  // namespace

TEST_CASE("train_nb hand example") {
  TinyFixture f;
  std::uint32_t a = f.vocab.index.at("a");
  std::uint32_t b = f.vocab.index.at("b");
  CHECK(std::exp(f.model.log_cond_spam[a]) == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
  CHECK(std::exp(f.model.log_cond_spam[b]) == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
  CHECK(std::exp(f.model.log_cond_ham[b]) == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
  CHECK(std::exp(f.model.log_prior_spam) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(f.model.log_prior_ham) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conditional distributions normalize per label") {
  TinyFixture f;
  double sum_spam = 0.0, sum_ham = 0.0;
  for (std::size_t t = 0; t < f.model.vocab_size(); ++t) {
    sum_spam += std::exp(f.model.log_cond_spam[t]);
    sum_ham += std::exp(f.model.log_cond_ham[t]);
  }
  CHECK(sum_spam == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sum_ham == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("label swap swaps the model roles") {
  TinyFixture f;
  std::vector<Label> swapped{Label::Ham, Label::Spam};
  NBModel m2 = train_nb(f.matrix, swapped, 1.0);
  for (std::size_t t = 0; t < f.model.vocab_size(); ++t) {
    CHECK(m2.log_cond_spam[t] == f.model.log_cond_ham[t]);
    CHECK(m2.log_cond_ham[t] == f.model.log_cond_spam[t]);
  }
}

TEST_CASE("all-zero matrix gives uniform conditionals") {
  std::vector<TokenList> docs{{"a"}, {"b"}};
  Vocabulary vocab = build_vocabulary(docs, 1, 1.0);
  FeatureMatrix m;
  m.vocab = &vocab;
  m.rows = {SparseVector{}, SparseVector{}};
  NBModel model = train_nb(m, {Label::Spam, Label::Ham}, 1.0);
  for (std::size_t t = 0; t < model.vocab_size(); ++t) {
    CHECK(std::exp(model.log_cond_spam[t]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::exp(model.log_cond_ham[t]) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("train_nb error contracts") {
  TinyFixture f;
  CHECK_THROWS_AS(train_nb(f.matrix, {Label::Spam, Label::Spam}, 1.0), ConfigError);
  CHECK_THROWS_AS(train_nb(f.matrix, f.labels, 0.0), ConfigError);
  CHECK_THROWS_AS(train_nb(f.matrix, f.labels, -1.0), ConfigError);
}

TEST_CASE("score hand example: ln 3") {
  TinyFixture f;
  SparseVector v{{{f.vocab.index.at("a"), 1.0}}};
  CHECK(score(f.model, v) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(score(f.model, v) == doctest::Approx(1.09861).epsilon(1e-5));
}

TEST_CASE("empty vector scores the prior gap") {
  TinyFixture f;
  CHECK(score(f.model, SparseVector{}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("score is linear in the vector") {
  TinyFixture f;
  SparseVector v{{{0, 1.0}, {1, 2.0}}};
  SparseVector v2{{{0, 2.0}, {1, 4.0}}};
  double prior_gap = f.model.log_prior_spam - f.model.log_prior_ham;
  CHECK(score(f.model, v2) - prior_gap ==
        doctest::Approx(2.0 * (score(f.model, v) - prior_gap)).epsilon(1e-12));
}

TEST_CASE("classify threshold convention") {
  TinyFixture f;
  SparseVector v{{{f.vocab.index.at("a"), 1.0}}};
  CHECK(classify(f.model, v, 0.0).predicted == Label::Spam);   // ln 3 > 0
  CHECK(classify(f.model, SparseVector{}, 0.0).predicted == Label::Ham);  // tie -> Ham
  CHECK(classify(f.model, v, 1e18).predicted == Label::Ham);   // huge threshold
}

TEST_CASE("scores are invariant under consistent vocabulary permutation") {
  std::mt19937_64 rng(3);
  std::vector<TokenList> docs{{"w", "x", "x"}, {"y", "z"}, {"x", "z", "z"}};
  std::vector<Label> labels{Label::Spam, Label::Ham, Label::Ham};
  Vocabulary vocab = build_vocabulary(docs, 1, 1.0);
  FeatureMatrix m = build_matrix(docs, vocab, WeightingScheme::Count);
  NBModel model = train_nb(m, labels, 1.0);

  std::vector<std::uint32_t> perm(vocab.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);

  Vocabulary pvocab = vocab;
  for (auto& [term, idx] : pvocab.index) idx = perm[vocab.index.at(term)];
  for (const auto& [term, idx] : vocab.index) pvocab.df[perm[idx]] = vocab.df[idx];
  FeatureMatrix pm = build_matrix(docs, pvocab, WeightingScheme::Count);
  NBModel pmodel = train_nb(pm, labels, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    SparseVector v, pv;
    for (std::uint32_t t = 0; t < vocab.size(); ++t) {
      if (rng() % 2) {
        double w = static_cast<double>(rng() % 5);
        v.entries.emplace_back(t, w);
        pv.entries.emplace_back(perm[t], w);
      }
    }
    std::sort(pv.entries.begin(), pv.entries.end());
    CHECK(score(pmodel, pv) == doctest::Approx(score(model, v)).epsilon(1e-9));
  }
}

TEST_CASE("model export/import round-trips scores") {
  TinyFixture f;
  auto path = std::filesystem::temp_directory_path() / "spampipe_model_test.txt";
  save_model(f.model, path);
  NBModel back = load_model(path);
  CHECK(back.vocab_size() == f.model.vocab_size());
  CHECK(back.smoothing == f.model.smoothing);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SparseVector v;
    for (std::uint32_t t = 0; t < f.model.vocab_size(); ++t) {
      if (rng() % 2) v.entries.emplace_back(t, static_cast<double>(rng() % 7));
    }
    CHECK(score(back, v) == score(f.model, v));  // bit-exact
  }
  std::filesystem::remove(path);
}

TEST_CASE("load_model rejects malformed files") {
  auto path = std::filesystem::temp_directory_path() / "spampipe_badmodel.txt";
  {
    std::ofstream out(path);
    out << "not a model\n";
  }
  CHECK_THROWS_AS(load_model(path), InputError);
  std::filesystem::remove(path);
}
