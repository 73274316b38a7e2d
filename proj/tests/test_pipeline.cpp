#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "spampipe/errors.hpp"
#include "spampipe/pipeline.hpp"

using namespace spampipe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spampipe_pipe_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

PipelineConfig small_synthetic_config(const fs::path& out) {
  PipelineConfig cfg;
  cfg.synthetic.n_spam = 40;
  cfg.synthetic.n_ham = 40;
  cfg.synthetic.doc_len_min = 10;
  cfg.synthetic.doc_len_max = 20;
  cfg.cluster.k_spam = 2;
  cfg.cluster.k_ham = 2;
  cfg.eval.folds = 4;
  cfg.min_df = 1;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("empty config text yields all defaults") {
  PipelineConfig cfg = parse_config_text("");
  CHECK(cfg.corpus_kind == CorpusKind::Synthetic);
  CHECK(cfg.adjust.alpha == 1.0);
  CHECK(cfg.adjust.beta == 1.0);
  CHECK(cfg.eval.folds == 10);
  CHECK(cfg.eval.fp_cost == 9.0);
  CHECK(cfg.min_df == 2);
  CHECK(cfg.max_df_ratio == 0.95);
  CHECK(cfg.scheme == WeightingScheme::TfIdf);
  CHECK(cfg.cluster.k_spam == 4);
  CHECK(cfg.smoothing == 1.0);
}

TEST_CASE("flag overrides beat file values") {
  PipelineConfig cfg = parse_config_text("alpha = 0.5\n", {{"alpha", "2.0"}});
  CHECK(cfg.adjust.alpha == 2.0);
}

TEST_CASE("config validation failures are fatal") {
  CHECK_THROWS_AS(parse_config_text("folds = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no_such_key = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("alpha = banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("alpha\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("corpus = tsv\n"), ConfigError);  // missing path
}

TEST_CASE("config errors carry the line number") {
  try {
    parse_config_text("# comment\nbogus_key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("config round-trips through its text form") {
  PipelineConfig cfg = parse_config_text("alpha = 0.25\nk_spam = 3\nscheme = count\n");
  PipelineConfig back = parse_config_text(cfg.to_text());
  CHECK(back.adjust.alpha == 0.25);
  CHECK(back.cluster.k_spam == 3);
  CHECK(back.scheme == WeightingScheme::Count);
}

TEST_CASE("run_pipeline writes all artifacts and is deterministic") {
  TempDir tmp;
  PipelineConfig cfg = small_synthetic_config(tmp.path / "out");
  EvalReport r1 = run_pipeline(cfg);
  for (const char* name : {"report.txt", "roc_points.csv", "pr_points.csv", "clusters.csv",
                           "term_scores.csv", "resolved_config.txt"}) {
    CHECK(fs::exists(cfg.output_dir / name));
  }
  EvalReport r2 = run_pipeline(cfg);
  CHECK(r1.metrics.f_score == r2.metrics.f_score);
  CHECK(r1.roc_auc_value == r2.roc_auc_value);
  CHECK(r1.confusion.tp == r2.confusion.tp);
}

TEST_CASE("pipeline propagates input errors") {
  PipelineConfig cfg;
  cfg.corpus_kind = CorpusKind::Tsv;
  cfg.corpus_path = "/nonexistent/corpus.tsv";
  CHECK_THROWS_AS(run_pipeline(cfg), InputError);
}

TEST_CASE("alpha=beta=0 equals the weighting-bypassed pipeline prediction for prediction") {
  TempDir tmp;
  PipelineConfig cfg = small_synthetic_config(tmp.path / "o1");
  cfg.adjust.alpha = 0.0;
  cfg.adjust.beta = 0.0;
  Corpus corpus = load_corpus(cfg);

  PipelineConfig bypass = cfg;
  bypass.bypass_weighting = true;

  EvalReport a = cross_validate(corpus, cfg);
  EvalReport b = cross_validate(corpus, bypass);
  REQUIRE(a.folds.size() == b.folds.size());
  CHECK(a.confusion.tp == b.confusion.tp);
  CHECK(a.confusion.fp == b.confusion.fp);
  CHECK(a.confusion.tn == b.confusion.tn);
  CHECK(a.confusion.fn == b.confusion.fn);
  CHECK(a.roc_auc_value == b.roc_auc_value);  // pooled scores bit-identical
}

TEST_CASE("test-only sentinel terms never reach the model") {
  // vocabulary must be built from training folds only: plant a sentinel
  // token in exactly one document and check the fold that holds it out
  PipelineConfig cfg;
  cfg.synthetic.n_spam = 10;
  cfg.synthetic.n_ham = 10;
  cfg.eval.folds = 2;
  cfg.min_df = 1;
  cfg.cluster.k_spam = 1;
  cfg.cluster.k_ham = 1;
  Corpus corpus = load_corpus(cfg);
  corpus.documents[0].text += " sentineltoken sentineltoken";

  std::vector<TokenList> tokens;
  TokenizerConfig tk = cfg.tokenizer();
  for (const Document& d : corpus.documents) tokens.push_back(process(d.text, tk));
  std::vector<Label> labels;
  for (const Document& d : corpus.documents) labels.push_back(d.label);

  auto folds = stratified_folds(labels, 2, cfg.eval.shuffle_seed);
  for (std::size_t f = 0; f < 2; ++f) {
    std::vector<std::uint32_t> train_ids = folds[1 - f];
    std::sort(train_ids.begin(), train_ids.end());
    bool doc0_in_train =
        std::find(train_ids.begin(), train_ids.end(), 0u) != train_ids.end();
    std::vector<TokenList> train_tokens;
    for (std::uint32_t id : train_ids) train_tokens.push_back(tokens[id]);
    Vocabulary vocab = build_vocabulary(train_tokens, cfg.min_df, cfg.max_df_ratio);
    CHECK(vocab.index.count("sentineltoken") == (doc0_in_train ? 1u : 0u));
  }
}

TEST_CASE("run_compare shares folds and zero-adjustment gives zero deltas") {
  TempDir tmp;
  PipelineConfig cfg = small_synthetic_config(tmp.path / "out");
  cfg.adjust.alpha = 0.0;
  cfg.adjust.beta = 0.0;  // "adjusted" arm is also the baseline
  CompareReport cr = run_compare(cfg);
  CHECK(cr.baseline.metrics.f_score == cr.adjusted.metrics.f_score);
  CHECK(cr.baseline.confusion.tp == cr.adjusted.confusion.tp);
  CHECK(cr.baseline.roc_auc_value == cr.adjusted.roc_auc_value);
  // both arms evaluated the same held-out documents per fold
  REQUIRE(cr.baseline.folds.size() == cr.adjusted.folds.size());
  for (std::size_t f = 0; f < cr.baseline.folds.size(); ++f) {
    CHECK(cr.baseline.folds[f].cm.total() == cr.adjusted.folds[f].cm.total());
  }
  CHECK(fs::exists(cfg.output_dir / "compare.txt"));
  CHECK(fs::exists(cfg.output_dir / "report_baseline.txt"));
}

TEST_CASE("noisy corpus still yields metrics in range") {
  TempDir tmp;
  PipelineConfig cfg = small_synthetic_config(tmp.path / "out");
  cfg.synthetic.noise_ratio = 0.6;
  CompareReport cr = run_compare(cfg);
  for (const EvalReport* r : {&cr.baseline, &cr.adjusted}) {
    for (double v : {r->metrics.precision, r->metrics.recall, r->metrics.f_score,
                     r->metrics.g_mean, r->metrics.cost_weighted_error}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("resolved config echo is parseable and equivalent") {
  TempDir tmp;
  PipelineConfig cfg = small_synthetic_config(tmp.path / "out");
  run_pipeline(cfg);
  std::ifstream in(cfg.output_dir / "resolved_config.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig back = parse_config_text(ss.str());
  CHECK(back.synthetic.n_spam == cfg.synthetic.n_spam);
  CHECK(back.eval.folds == cfg.eval.folds);
}
